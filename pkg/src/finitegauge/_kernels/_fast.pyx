# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled verification kernels; see ``pure.py`` for the reference
semantics.  Signatures, iteration order and results are identical -- the
test suite compares the two implementations witness for witness."""

from cpython cimport array

import array

cdef array.array _INT_TEMPLATE = array.array("i", [])

# degree cap for the fixed vertex buffers below
DEF MAXK = 7


cdef array.array _new_ints(Py_ssize_t n):
    return array.clone(_INT_TEMPLATE, n, zero=False)


def enum_tuples(int n, const unsigned char[:] adj, int k):
    cdef list found = []
    cdef int buf[MAXK + 1]
    cdef int depth, cand, i
    cdef bint ok
    if k > MAXK:
        raise ValueError("simplex degree too large for the compiled kernels")
    out = array.array("i")
    if n == 0:
        return out
    if k == 0:
        for cand in range(n):
            found.append(cand)
        out.extend(found)
        return out
    depth = 0
    cand = 0
    while depth >= 0:
        if cand == n:
            depth -= 1
            if depth < 0:
                break
            cand = buf[depth] + 1
            continue
        ok = True
        for i in range(depth):
            if adj[buf[i] * n + cand] == 0:
                ok = False
                break
        if not ok:
            cand += 1
            continue
        buf[depth] = cand
        if depth == k:
            for i in range(k + 1):
                found.append(buf[i])
            cand += 1
        else:
            depth += 1
            cand = 0
    out.extend(found)
    return out


def dense_pos(int n, sx_obj, int k):
    cdef int[:] sx = sx_obj
    cdef Py_ssize_t size = 1
    cdef int i
    for i in range(k + 1):
        size *= n
    cdef array.array out = _new_ints(size)
    cdef int[:] pos = out
    cdef Py_ssize_t j
    for j in range(size):
        pos[j] = -1
    cdef Py_ssize_t rows = sx.shape[0] // (k + 1)
    cdef Py_ssize_t row, o, idx
    for row in range(rows):
        o = row * (k + 1)
        idx = 0
        for i in range(k + 1):
            idx = idx * n + sx[o + i]
        pos[idx] = row
    return out


def horizontal_witness(int k, int nP, int nG, sx_obj, pos_obj,
                       const unsigned char[:] adj, act_obj, vals_obj):
    cdef int[:] sx = sx_obj
    cdef int[:] pos = pos_obj
    cdef int[:] act = act_obj
    cdef int[:] vals = vals_obj
    cdef int u[MAXK + 1]
    cdef int v[MAXK + 1]
    cdef int gs[MAXK + 1]
    cdef Py_ssize_t rows, row, o, idx
    cdef int i, j, base_val, d
    cdef bint ok
    if k == 0:
        return None
    if k > MAXK:
        raise ValueError("form degree too large for the compiled kernels")
    rows = sx.shape[0] // (k + 1)
    for row in range(rows):
        o = row * (k + 1)
        for i in range(k + 1):
            u[i] = sx[o + i]
        base_val = vals[row]
        for i in range(k):
            gs[i] = 0
        while True:
            v[0] = u[0]
            for i in range(1, k + 1):
                v[i] = act[u[i] * nG + gs[i - 1]]
            ok = True
            for i in range(k + 1):
                for j in range(i + 1, k + 1):
                    if adj[v[i] * nP + v[j]] == 0:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                idx = 0
                for i in range(k + 1):
                    idx = idx * nP + v[i]
                if vals[pos[idx]] != base_val:
                    return (row, tuple([gs[i] for i in range(k)]))
            d = k - 1
            while d >= 0:
                gs[d] += 1
                if gs[d] < nG:
                    break
                gs[d] = 0
                d -= 1
            if d < 0:
                break
    return None


def equivariant_witness(int k, int nP, int nG, sx_obj, pos_obj,
                        act_obj, mul_obj, inv_obj, vals_obj):
    cdef int[:] sx = sx_obj
    cdef int[:] pos = pos_obj
    cdef int[:] act = act_obj
    cdef int[:] mul = mul_obj
    cdef int[:] inv = inv_obj
    cdef int[:] vals = vals_obj
    cdef Py_ssize_t rows, row, o, idx
    cdef int i, g, base_val, row2, want
    if k > MAXK:
        raise ValueError("form degree too large for the compiled kernels")
    rows = sx.shape[0] // (k + 1)
    for row in range(rows):
        o = row * (k + 1)
        base_val = vals[row]
        for g in range(nG):
            idx = 0
            for i in range(k + 1):
                idx = idx * nP + act[sx[o + i] * nG + g]
            row2 = pos[idx]
            if row2 < 0:
                return (row, g)
            want = mul[inv[g] * nG + mul[base_val * nG + g]]
            if vals[row2] != want:
                return (row, g)
    return None


def coboundary_values(int nP, int nG, sx2_obj, pos1_obj, vals1_obj, mul_obj):
    cdef int[:] sx2 = sx2_obj
    cdef int[:] pos1 = pos1_obj
    cdef int[:] vals1 = vals1_obj
    cdef int[:] mul = mul_obj
    cdef Py_ssize_t rows = sx2.shape[0] // 3
    cdef array.array out_arr = _new_ints(rows)
    cdef int[:] out = out_arr
    cdef Py_ssize_t row, o
    cdef int x0, x1, x2, a, b, c
    for row in range(rows):
        o = row * 3
        x0 = sx2[o]
        x1 = sx2[o + 1]
        x2 = sx2[o + 2]
        a = vals1[pos1[x0 * nP + x1]]
        b = vals1[pos1[x1 * nP + x2]]
        c = vals1[pos1[x2 * nP + x0]]
        out[row] = mul[mul[a * nG + b] * nG + c]
    return out_arr


def pullback_values(int k, int nP, int nM, p_sx_obj, proj_obj, m_pos_obj, base_vals_obj):
    cdef int[:] p_sx = p_sx_obj
    cdef int[:] proj = proj_obj
    cdef int[:] m_pos = m_pos_obj
    cdef int[:] base_vals = base_vals_obj
    cdef Py_ssize_t rows = p_sx.shape[0] // (k + 1)
    cdef array.array out_arr = _new_ints(rows)
    cdef int[:] out = out_arr
    cdef Py_ssize_t row, o, idx
    cdef int i
    for row in range(rows):
        o = row * (k + 1)
        idx = 0
        for i in range(k + 1):
            idx = idx * nM + proj[p_sx[o + i]]
        out[row] = base_vals[m_pos[idx]]
    return out_arr


def hat_values(int k, int nP, int nM, int nG, p_sx_obj, proj_obj, m_pos_obj,
               a_num_obj, a_den_obj, act_obj, divt_obj):
    cdef int[:] p_sx = p_sx_obj
    cdef int[:] proj = proj_obj
    cdef int[:] m_pos = m_pos_obj
    cdef int[:] a_num = a_num_obj
    cdef int[:] a_den = a_den_obj
    cdef int[:] act = act_obj
    cdef int[:] divt = divt_obj
    cdef Py_ssize_t rows = p_sx.shape[0] // (k + 1)
    cdef array.array out_arr = _new_ints(rows)
    cdef int[:] out = out_arr
    cdef Py_ssize_t row, o, idx
    cdef int i, mrow, u0, moved
    for row in range(rows):
        o = row * (k + 1)
        idx = 0
        for i in range(k + 1):
            idx = idx * nM + proj[p_sx[o + i]]
        mrow = m_pos[idx]
        u0 = p_sx[o]
        moved = act[a_num[mrow] * nG + divt[a_den[mrow] * nP + u0]]
        out[row] = divt[u0 * nP + moved]
    return out_arr


def check_values(int k, int nP, int nM, int nG, p_sx_obj, proj_obj, m_pos_obj,
                 Py_ssize_t m_rows, fibre_min_obj, act_obj, divt_obj, vals_obj):
    cdef int[:] p_sx = p_sx_obj
    cdef int[:] proj = proj_obj
    cdef int[:] m_pos = m_pos_obj
    cdef int[:] fibre_min = fibre_min_obj
    cdef int[:] act = act_obj
    cdef int[:] divt = divt_obj
    cdef int[:] vals = vals_obj
    cdef array.array nums_arr = _new_ints(m_rows)
    cdef array.array dens_arr = _new_ints(m_rows)
    cdef int[:] nums = nums_arr
    cdef int[:] dens = dens_arr
    cdef Py_ssize_t i0
    for i0 in range(m_rows):
        nums[i0] = 0
        dens[i0] = -1
    cdef Py_ssize_t rows = p_sx.shape[0] // (k + 1)
    cdef Py_ssize_t prow, o, idx
    cdef int i, mrow, u0, raw_num, d0, cnum
    for prow in range(rows):
        o = prow * (k + 1)
        idx = 0
        for i in range(k + 1):
            idx = idx * nM + proj[p_sx[o + i]]
        mrow = m_pos[idx]
        if mrow < 0:
            return (nums_arr, dens_arr, (-1, prow))
        u0 = p_sx[o]
        raw_num = act[u0 * nG + vals[prow]]
        d0 = fibre_min[proj[u0]]
        cnum = act[raw_num * nG + divt[u0 * nP + d0]]
        if dens[mrow] < 0:
            nums[mrow] = cnum
            dens[mrow] = d0
        elif nums[mrow] != cnum:
            return (nums_arr, dens_arr, (mrow, prow))
    for i0 in range(m_rows):
        if dens[i0] < 0:
            return (nums_arr, dens_arr, (i0, -1))
    return (nums_arr, dens_arr, None)


def descend_values(int k, int nP, int nM, p_sx_obj, proj_obj, m_pos_obj,
                   Py_ssize_t m_rows, vals_obj):
    cdef int[:] p_sx = p_sx_obj
    cdef int[:] proj = proj_obj
    cdef int[:] m_pos = m_pos_obj
    cdef int[:] vals = vals_obj
    cdef array.array out_arr = _new_ints(m_rows)
    cdef int[:] out = out_arr
    cdef bytearray seen_b = bytearray(m_rows)
    cdef unsigned char[:] seen = seen_b
    cdef Py_ssize_t i0
    for i0 in range(m_rows):
        out[i0] = 0
    cdef Py_ssize_t rows = p_sx.shape[0] // (k + 1)
    cdef Py_ssize_t prow, o, idx
    cdef int i, mrow
    for prow in range(rows):
        o = prow * (k + 1)
        idx = 0
        for i in range(k + 1):
            idx = idx * nM + proj[p_sx[o + i]]
        mrow = m_pos[idx]
        if mrow < 0:
            return (out_arr, (-1, prow))
        if seen[mrow] == 0:
            out[mrow] = vals[prow]
            seen[mrow] = 1
        elif out[mrow] != vals[prow]:
            return (out_arr, (mrow, prow))
    for i0 in range(m_rows):
        if seen[i0] == 0:
            return (out_arr, (i0, -1))
    return (out_arr, None)


def conn_form_values(int nP, int nM, int nG, p_sx1_obj, proj_obj, m_pos1_obj,
                     nab_num_obj, nab_den_obj, act_obj, divt_obj):
    cdef int[:] p_sx1 = p_sx1_obj
    cdef int[:] proj = proj_obj
    cdef int[:] m_pos1 = m_pos1_obj
    cdef int[:] nab_num = nab_num_obj
    cdef int[:] nab_den = nab_den_obj
    cdef int[:] act = act_obj
    cdef int[:] divt = divt_obj
    cdef Py_ssize_t rows = p_sx1.shape[0] // 2
    cdef array.array out_arr = _new_ints(rows)
    cdef int[:] out = out_arr
    cdef Py_ssize_t row
    cdef int u, v, mrow, moved
    for row in range(rows):
        u = p_sx1[row * 2]
        v = p_sx1[row * 2 + 1]
        mrow = m_pos1[proj[u] * nM + proj[v]]
        moved = act[nab_num[mrow] * nG + divt[nab_den[mrow] * nP + v]]
        out[row] = divt[u * nP + moved]
    return out_arr


def eq5_witness(int nP, int nG, sx1_obj, pos1_obj, const unsigned char[:] adj,
                act_obj, mul_obj, inv_obj, vals_obj):
    cdef int[:] sx1 = sx1_obj
    cdef int[:] pos1 = pos1_obj
    cdef int[:] act = act_obj
    cdef int[:] mul = mul_obj
    cdef int[:] inv = inv_obj
    cdef int[:] vals = vals_obj
    cdef Py_ssize_t rows = sx1.shape[0] // 2
    cdef Py_ssize_t row
    cdef int x, y, g, xg
    for row in range(rows):
        x = sx1[row * 2]
        y = sx1[row * 2 + 1]
        for g in range(nG):
            xg = act[x * nG + g]
            if adj[xg * nP + y] == 0:
                continue
            if vals[pos1[xg * nP + y]] != mul[inv[g] * nG + vals[row]]:
                return (row, g)
    return None


def eq6_witness(int nP, int nG, sx1_obj, pos1_obj, act_obj, mul_obj, inv_obj, vals_obj):
    cdef int[:] sx1 = sx1_obj
    cdef int[:] pos1 = pos1_obj
    cdef int[:] act = act_obj
    cdef int[:] mul = mul_obj
    cdef int[:] inv = inv_obj
    cdef int[:] vals = vals_obj
    cdef Py_ssize_t rows = sx1.shape[0] // 2
    cdef Py_ssize_t row
    cdef int x, y, g, xg, yg, row2, base_val
    for row in range(rows):
        x = sx1[row * 2]
        y = sx1[row * 2 + 1]
        base_val = vals[row]
        for g in range(nG):
            xg = act[x * nG + g]
            yg = act[y * nG + g]
            row2 = pos1[xg * nP + yg]
            if row2 < 0:
                return (row, g)
            if vals[row2] != mul[inv[g] * nG + mul[base_val * nG + g]]:
                return (row, g)
    return None


def transform_identity_witness(int k, int nP, int nM, int nG, p_sx_obj, proj_obj,
                               m_pos_obj, a_num_obj, a_den_obj, hat_vals_obj,
                               act_obj, divt_obj):
    cdef int[:] p_sx = p_sx_obj
    cdef int[:] proj = proj_obj
    cdef int[:] m_pos = m_pos_obj
    cdef int[:] a_num = a_num_obj
    cdef int[:] a_den = a_den_obj
    cdef int[:] hat_vals = hat_vals_obj
    cdef int[:] act = act_obj
    cdef int[:] divt = divt_obj
    cdef Py_ssize_t rows = p_sx.shape[0] // (k + 1)
    cdef Py_ssize_t row, o, idx
    cdef int i, mrow, u0, lhs, rhs
    for row in range(rows):
        o = row * (k + 1)
        idx = 0
        for i in range(k + 1):
            idx = idx * nM + proj[p_sx[o + i]]
        mrow = m_pos[idx]
        u0 = p_sx[o]
        lhs = act[u0 * nG + hat_vals[row]]
        rhs = act[a_num[mrow] * nG + divt[a_den[mrow] * nP + u0]]
        if lhs != rhs:
            return row
    return None
