"""Pure-Python verification kernels.

Every function here has a compiled twin in ``_fast.pyx`` with the same
signature and bit-identical results; callers pick an implementation via
``finitegauge._kernels.impl``.  All arguments are flat integer arrays
(``array('i')``), flat ``bytes`` adjacency matrices, and plain ints, so
both implementations stay trivially comparable.

Conventions: a k-simplex table ``sx`` stores rows of k+1 point indices;
``pos`` is the dense (n ** (k+1))-entry inverse (row index or -1);
``act`` is |P| x |G| flat; ``divt`` is |P| x |P| flat with -1 across
fibres; ``mul``/``inv`` are the group tables.  Witness searches scan
rows in canonical order and perturbation tuples in lexicographic order,
so the first witness is deterministic.
"""

from __future__ import annotations

from array import array
from itertools import product


def enum_tuples(n: int, adj: bytes, k: int) -> array:
    """All (k+1)-tuples of mutually adjacent indices, flattened, in order."""
    out = array("i")
    if n == 0:
        return out
    if k == 0:
        out.extend(range(n))
        return out
    buf = [0] * (k + 1)

    def extend(depth: int):
        for cand in range(n):
            ok = True
            for i in range(depth):
                if not adj[buf[i] * n + cand]:
                    ok = False
                    break
            if not ok:
                continue
            buf[depth] = cand
            if depth == k:
                out.extend(buf)
            else:
                extend(depth + 1)

    extend(0)
    return out


def dense_pos(n: int, sx: array, k: int) -> array:
    """Inverse of a simplex table: flat index of the tuple -> row, else -1."""
    size = n ** (k + 1)
    pos = array("i", [-1]) * size
    rows = len(sx) // (k + 1)
    for row in range(rows):
        o = row * (k + 1)
        idx = 0
        for i in range(k + 1):
            idx = idx * n + sx[o + i]
        pos[idx] = row
    return pos


def horizontal_witness(k, nP, nG, sx, pos, adj, act, vals):
    """First (row, g-tuple) where shifting vertices 1..k changes the value."""
    rows = len(sx) // (k + 1)
    if k == 0:
        return None
    for row in range(rows):
        o = row * (k + 1)
        u = sx[o:o + k + 1]
        base_val = vals[row]
        for gs in product(range(nG), repeat=k):
            v = [u[0]]
            for i in range(1, k + 1):
                v.append(act[u[i] * nG + gs[i - 1]])
            ok = True
            for i in range(k + 1):
                vi = v[i] * nP
                for j in range(i + 1, k + 1):
                    if not adj[vi + v[j]]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            idx = 0
            for i in range(k + 1):
                idx = idx * nP + v[i]
            if vals[pos[idx]] != base_val:
                return (row, gs)
    return None


def equivariant_witness(k, nP, nG, sx, pos, act, mul, inv, vals):
    """First (row, g) where the diagonal shift is not conjugation by g.

    A diagonal shift that leaves the simplex table (possible only on a
    model whose relation is not group-invariant) counts as a witness.
    """
    rows = len(sx) // (k + 1)
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


def coboundary_values(nP, nG, sx2, pos1, vals1, mul):
    """Degree-2 values w(x0,x1) w(x1,x2) w(x2,x0) over a 2-simplex table."""
    rows = len(sx2) // 3
    out = array("i", [0]) * rows
    for row in range(rows):
        o = row * 3
        x0, x1, x2 = sx2[o], sx2[o + 1], sx2[o + 2]
        a = vals1[pos1[x0 * nP + x1]]
        b = vals1[pos1[x1 * nP + x2]]
        c = vals1[pos1[x2 * nP + x0]]
        out[row] = mul[mul[a * nG + b] * nG + c]
    return out


def pullback_values(k, nP, nM, p_sx, proj, m_pos, base_vals):
    """Pull a base-simplex value table back along the projection."""
    rows = len(p_sx) // (k + 1)
    out = array("i", [0]) * rows
    for row in range(rows):
        o = row * (k + 1)
        idx = 0
        for i in range(k + 1):
            idx = idx * nM + proj[p_sx[o + i]]
        out[row] = base_vals[m_pos[idx]]
    return out


def hat_values(k, nP, nM, nG, p_sx, proj, m_pos, a_num, a_den, act, divt):
    """Total-space values div(u0, [num,den] . u0) of a gauge-valued table."""
    rows = len(p_sx) // (k + 1)
    out = array("i", [0]) * rows
    for row in range(rows):
        o = row * (k + 1)
        idx = 0
        for i in range(k + 1):
            idx = idx * nM + proj[p_sx[o + i]]
        mrow = m_pos[idx]
        u0 = p_sx[o]
        moved = act[a_num[mrow] * nG + divt[a_den[mrow] * nP + u0]]
        out[row] = divt[u0 * nP + moved]
    return out


def check_values(k, nP, nM, nG, p_sx, proj, m_pos, m_rows, fibre_min, act, divt, vals):
    """Descend a total-space table to gauge classes [u0 . value, u0].

    The first lift of each base simplex (canonical order) defines the
    class; every further lift is compared against it.  Returns
    (nums, dens, conflict) with conflict None on success, (mrow, prow)
    for a lift disagreeing at prow, or (mrow, -1) for a base simplex
    with no lift at all.
    """
    nums = array("i", [0]) * m_rows
    dens = array("i", [-1]) * m_rows
    rows = len(p_sx) // (k + 1)
    for prow in range(rows):
        o = prow * (k + 1)
        idx = 0
        for i in range(k + 1):
            idx = idx * nM + proj[p_sx[o + i]]
        mrow = m_pos[idx]
        if mrow < 0:
            return (nums, dens, (-1, prow))
        u0 = p_sx[o]
        raw_num = act[u0 * nG + vals[prow]]
        d0 = fibre_min[proj[u0]]
        cnum = act[raw_num * nG + divt[u0 * nP + d0]]
        if dens[mrow] < 0:
            nums[mrow] = cnum
            dens[mrow] = d0
        elif nums[mrow] != cnum:
            return (nums, dens, (mrow, prow))
    for mrow in range(m_rows):
        if dens[mrow] < 0:
            return (nums, dens, (mrow, -1))
    return (nums, dens, None)


def descend_values(k, nP, nM, p_sx, proj, m_pos, m_rows, vals):
    """Push a lift-independent total-space table down to the base.

    Returns (vals_on_base, conflict); conflict as in ``check_values``.
    """
    out = array("i", [0]) * m_rows
    seen = bytearray(m_rows)
    rows = len(p_sx) // (k + 1)
    for prow in range(rows):
        o = prow * (k + 1)
        idx = 0
        for i in range(k + 1):
            idx = idx * nM + proj[p_sx[o + i]]
        mrow = m_pos[idx]
        if mrow < 0:
            return (out, (-1, prow))
        if not seen[mrow]:
            out[mrow] = vals[prow]
            seen[mrow] = 1
        elif out[mrow] != vals[prow]:
            return (out, (mrow, prow))
    for mrow in range(m_rows):
        if not seen[mrow]:
            return (out, (mrow, -1))
    return (out, None)


def conn_form_values(nP, nM, nG, p_sx1, proj, m_pos1, nab_num, nab_den, act, divt):
    """The 1-form div(u, transport(v)) of an edgewise transport table."""
    rows = len(p_sx1) // 2
    out = array("i", [0]) * rows
    for row in range(rows):
        u = p_sx1[row * 2]
        v = p_sx1[row * 2 + 1]
        mrow = m_pos1[proj[u] * nM + proj[v]]
        moved = act[nab_num[mrow] * nG + divt[nab_den[mrow] * nP + v]]
        out[row] = divt[u * nP + moved]
    return out


def eq5_witness(nP, nG, sx1, pos1, adj, act, mul, inv, vals):
    """First (row, g) breaking w(x.g, y) = g^-1 w(x, y) where x.g ~ y."""
    rows = len(sx1) // 2
    for row in range(rows):
        x = sx1[row * 2]
        y = sx1[row * 2 + 1]
        for g in range(nG):
            xg = act[x * nG + g]
            if not adj[xg * nP + y]:
                continue
            if vals[pos1[xg * nP + y]] != mul[inv[g] * nG + vals[row]]:
                return (row, g)
    return None


def eq6_witness(nP, nG, sx1, pos1, act, mul, inv, vals):
    """First (row, g) breaking w(x.g, y.g) = g^-1 w(x, y) g (any g).

    A diagonal shift landing outside the edge table counts as a witness.
    """
    rows = len(sx1) // 2
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


def transform_identity_witness(k, nP, nM, nG, p_sx, proj, m_pos, a_num, a_den,
                               hat_vals, act, divt):
    """First row where u0 . hat(a)(u) differs from (a over the image) . u0."""
    rows = len(p_sx) // (k + 1)
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
