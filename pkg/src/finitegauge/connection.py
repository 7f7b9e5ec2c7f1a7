"""Connections, their 1-forms, curvature, and the curvature identity.

A connection assigns a fraction arrow to every neighbour pair of the
base; it is reflexive (identity on the diagonal) and symmetric (edge
reversal inverts the arrow) at the type level, because every statement
in scope uses both.  Orientation: the arrow at (a, b) carries the fibre
over b to the fibre over a, the convention forced by the defining
equation u . w(u, v) = transport(v).
"""

from __future__ import annotations

import os
import random
from array import array
from dataclasses import dataclass
from typing import Mapping

from ._kernels import impl as K
from .errors import (
    BookkeepingError,
    CeilingExceededError,
    CheckResult,
    FormPreconditionError,
    InconsistencyError,
)
from .forms import (
    BaseForm,
    GaugeForm,
    GroupForm,
    coboundary1,
    descend_invariant,
    gauge_form_to_base,
    hat_transform,
    is_edge_symmetric,
    is_equivariant,
    is_horizontal,
    pullback,
)
from .neighbourhood import BundleWithNeighbours
from .torsor import FractionArrow

DEFAULT_CEILING = 10 ** 6
CEILING_ENV = "GAUGE_CEILING"


def configured_ceiling() -> int:
    raw = os.environ.get(CEILING_ENV)
    if raw is None:
        return DEFAULT_CEILING
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{CEILING_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{CEILING_ENV} must be positive")
    return value


@dataclass(eq=False)
class Connection:
    """One fraction arrow per unordered base edge; the rest is forced.

    ``edges`` lists the off-diagonal neighbour pairs (a < b) of the base,
    in canonical order; ``nums`` stores, per edge, the numerator point of
    the arrow at (a, b) (its denominator is the least point of the fibre
    over b).  The diagonal is the identity class and the opposite
    orientation is the inverse, by construction.
    """

    model: BundleWithNeighbours
    edges: tuple[tuple[int, int], ...]
    nums: array

    def __post_init__(self):
        if self.edges != base_edges(self.model):
            raise ValueError("edge list does not match the base relation")
        b = self.model.bundle
        for (a, _c), n in zip(self.edges, self.nums):
            if b.proj[n] != a:
                raise BookkeepingError(
                    f"numerator {b.points[n]} does not lie over {b.base[a]}")

    def __eq__(self, other) -> bool:
        return (isinstance(other, Connection) and self.model is other.model
                and self.nums == other.nums)

    def value(self, a: str, c: str) -> FractionArrow:
        """The arrow at the ordered neighbour pair (a, c)."""
        b = self.model.bundle
        ai, ci = b.base_index[a], b.base_index[c]
        nM = self.model.nM
        if not self.model.m_adj[ai * nM + ci]:
            raise BookkeepingError(f"({a!r}, {c!r}) are not neighbours in the base")
        nab_num, nab_den = self.transport_tables()
        row = self.model.m_pos(1)[ai * nM + ci]
        return FractionArrow(b.points[nab_num[row]], b.points[nab_den[row]])

    def items(self) -> list[tuple[tuple[str, str], FractionArrow]]:
        """The stored orientation per unordered edge, canonical order."""
        b = self.model.bundle
        return [
            ((b.base[a], b.base[c]), self.value(b.base[a], b.base[c]))
            for a, c in self.edges
        ]

    def transport_tables(self) -> tuple[array, array]:
        """Arrow tables aligned with the ordered base edge rows."""
        cached = getattr(self, "_tables", None)
        if cached is not None:
            return cached
        bn = self.model
        b = bn.bundle
        sx = bn.m_simplices(1)
        rows = bn.m_rows(1)
        nab_num = array("i", [0]) * rows
        nab_den = array("i", [0]) * rows
        stored = {edge: n for edge, n in zip(self.edges, self.nums)}
        nP = len(b.points)
        for row in range(rows):
            a, c = sx[row * 2], sx[row * 2 + 1]
            if a == c:
                x0 = b.fibre_min[a]
                nab_num[row], nab_den[row] = x0, x0
            elif a < c:
                nab_num[row], nab_den[row] = stored[(a, c)], b.fibre_min[c]
            else:
                # reverse orientation: invert [n, d] and re-canonicalise
                n, d = stored[(c, a)], b.fibre_min[a]
                g = b.div_flat[n * nP + b.fibre_min[c]]
                nab_num[row] = b.act_idx(d, g)
                nab_den[row] = b.fibre_min[c]
        self._tables = (nab_num, nab_den)
        return self._tables


def base_edges(bn: BundleWithNeighbours) -> tuple[tuple[int, int], ...]:
    """Off-diagonal unordered neighbour pairs of the base, canonical order."""
    nM = bn.nM
    adj = bn.m_adj
    return tuple(
        (a, c) for a in range(nM) for c in range(a + 1, nM) if adj[a * nM + c]
    )


def connection_from_arrows(
    bn: BundleWithNeighbours,
    arrows: Mapping[tuple[str, str], FractionArrow],
) -> Connection:
    """Build a connection from named arrows, one orientation per edge.

    Either orientation may be supplied; when both are, they must be
    mutually inverse.  Diagonal entries, if present, must be the identity
    class.  Every off-diagonal edge must be covered.
    """
    b = bn.bundle
    nP = len(b.points)
    chosen: dict[tuple[int, int], int] = {}
    for (a_name, c_name), arrow in arrows.items():
        ai = b.base_index.get(a_name)
        ci = b.base_index.get(c_name)
        if ai is None or ci is None:
            raise ValueError(f"unknown base element in edge ({a_name!r}, {c_name!r})")
        if not bn.m_adj[ai * bn.nM + ci]:
            raise BookkeepingError(f"({a_name!r}, {c_name!r}) are not neighbours")
        ni, di = b.pidx(arrow.num), b.pidx(arrow.den)
        if b.proj[ni] != ai or b.proj[di] != ci:
            raise BookkeepingError(
                f"arrow {arrow} at ({a_name}, {c_name}) must go from the fibre over "
                f"{c_name!r} to the fibre over {a_name!r}")
        # canonical numerator for the (min, max) orientation
        if ai == ci:
            # the identity class has num == den once canonicalised
            d0 = b.fibre_min[ci]
            if b.act_idx(ni, b.div_flat[di * nP + d0]) != d0:
                raise BookkeepingError(
                    f"diagonal value at {a_name!r} must be the identity class")
            continue
        if ai < ci:
            d0 = b.fibre_min[ci]
            num = b.act_idx(ni, b.div_flat[di * nP + d0])
            key = (ai, ci)
        else:
            # store the inverse arrow for the (min, max) orientation
            d0 = b.fibre_min[ai]
            num = b.act_idx(di, b.div_flat[ni * nP + d0])
            key = (ci, ai)
        if key in chosen and chosen[key] != num:
            raise BookkeepingError(
                f"the two orientations given for edge "
                f"({b.base[key[0]]!r}, {b.base[key[1]]!r}) are not mutually inverse")
        chosen[key] = num
    edges = base_edges(bn)
    missing = [e for e in edges if e not in chosen]
    if missing:
        a, c = missing[0]
        raise BookkeepingError(f"no arrow given for edge ({b.base[a]!r}, {b.base[c]!r})")
    return Connection(bn, edges, array("i", [chosen[e] for e in edges]))


def flat_connection(bn: BundleWithNeighbours) -> Connection:
    """The connection whose arrows join the least points of the fibres."""
    b = bn.bundle
    edges = base_edges(bn)
    return Connection(bn, edges, array("i", [b.fibre_min[a] for a, _c in edges]))


def connection_count(bn: BundleWithNeighbours) -> int:
    return len(bn.bundle.group) ** len(base_edges(bn))


def enumerate_connections(bn: BundleWithNeighbours, ceiling: int | None = None) -> list[Connection]:
    """All connections, canonical order; refuses above the ceiling."""
    limit = configured_ceiling() if ceiling is None else ceiling
    count = connection_count(bn)
    if count > limit:
        raise CeilingExceededError(count, limit)
    b = bn.bundle
    edges = base_edges(bn)
    out = []
    pools = [b.fibres[a] for a, _c in edges]
    idxs = [0] * len(edges)
    while True:
        out.append(Connection(bn, edges, array("i", [pools[i][idxs[i]] for i in range(len(edges))])))
        pos = len(edges) - 1
        while pos >= 0:
            idxs[pos] += 1
            if idxs[pos] < len(pools[pos]):
                break
            idxs[pos] = 0
            pos -= 1
        if pos < 0:
            break
    return out


def random_connection(bn: BundleWithNeighbours, rng: random.Random) -> Connection:
    b = bn.bundle
    edges = base_edges(bn)
    nums = array("i", [b.fibres[a][rng.randrange(len(b.fibres[a]))] for a, _c in edges])
    return Connection(bn, edges, nums)


def find_flat(bn: BundleWithNeighbours, ceiling: int | None = None) -> list[Connection]:
    """Connections with identically-identity curvature, canonical order."""
    return [c for c in enumerate_connections(bn, ceiling) if is_flat(bn, c)]


def is_flat(bn: BundleWithNeighbours, conn: Connection) -> bool:
    r = curvature(bn, conn)
    return all(n == d for n, d in zip(r.nums, r.dens))


# -- connection <-> connection form -------------------------------------------


def connection_to_form(bn: BundleWithNeighbours, conn: Connection) -> GroupForm:
    """The 1-form w(u, v) = div(u, transport(v)) of a connection."""
    if conn.model is not bn:
        raise BookkeepingError("connection belongs to a different model")
    nab_num, nab_den = conn.transport_tables()
    vals = K.conn_form_values(bn.nP, bn.nM, bn.nG, bn.p_simplices(1), bn.proj_arr,
                              bn.m_pos(1), nab_num, nab_den,
                              bn.bundle.act_flat, bn.bundle.div_flat)
    return GroupForm(bn, 1, vals)


def form_laws_hold(bn: BundleWithNeighbours, omega: GroupForm) -> CheckResult:
    """The two translation laws every connection form satisfies.

    First: shifting the source by g inverts-multiplies, whenever the
    shifted pair is still a pair of neighbours.  Second: the diagonal
    shift conjugates, for every g.
    """
    if omega.degree != 1:
        raise BookkeepingError("the translation laws concern 1-forms")
    G = bn.bundle.group
    w5 = K.eq5_witness(bn.nP, bn.nG, bn.p_simplices(1), bn.p_pos(1), bn.p_adj,
                       bn.bundle.act_flat, G.mul_flat, G.inv_flat, omega.values)
    if w5 is not None:
        row, g = w5
        return CheckResult(False, {
            "law": "source-shift",
            "simplex": list(bn.p_simplex_names(1)[row]),
            "shift": G.elements[g],
        })
    w6 = K.eq6_witness(bn.nP, bn.nG, bn.p_simplices(1), bn.p_pos(1),
                       bn.bundle.act_flat, G.mul_flat, G.inv_flat, omega.values)
    if w6 is not None:
        row, g = w6
        return CheckResult(False, {
            "law": "diagonal-shift",
            "simplex": list(bn.p_simplex_names(1)[row]),
            "shift": G.elements[g],
        })
    return CheckResult(True)


def form_to_connection(bn: BundleWithNeighbours, omega: GroupForm) -> Connection:
    """Rebuild the connection from a 1-form satisfying the two laws.

    The arrow over (a, b) is [u, v . w(v, u)] for the canonical lift
    (u, v); independence from the lift is verified over every lift before
    returning, and edge symmetry plus both translation laws are verified
    up front (refusal carries the witness).
    """
    if omega.model is not bn:
        raise BookkeepingError("form belongs to a different model")
    if omega.degree != 1:
        raise BookkeepingError("only 1-forms correspond to connections")
    sym = is_edge_symmetric(bn, omega)
    if not sym:
        raise FormPreconditionError("form is not edge-symmetric", sym.witness)
    laws = form_laws_hold(bn, omega)
    if not laws:
        raise FormPreconditionError("form breaks a translation law", laws.witness)

    b = bn.bundle
    nP = len(b.points)
    nM = bn.nM
    sx = bn.p_simplices(1)
    pos1 = bn.p_pos(1)
    m_rows = bn.m_rows(1)
    nums = array("i", [-1]) * m_rows
    dens = array("i", [-1]) * m_rows
    for prow in range(bn.p_rows(1)):
        u, v = sx[prow * 2], sx[prow * 2 + 1]
        mrow = bn.m_pos(1)[b.proj[u] * nM + b.proj[v]]
        # candidate arrow [u, v . w(v, u)], canonicalised
        w_back = omega.values[pos1[v * nP + u]]
        d = b.act_idx(v, w_back)
        d0 = b.fibre_min[b.proj[v]]
        num = b.act_idx(u, b.div_flat[d * nP + d0])
        if dens[mrow] < 0:
            nums[mrow], dens[mrow] = num, d0
        elif nums[mrow] != num:
            raise InconsistencyError(
                "lift-dependent transport while rebuilding a connection",
                {"edge": [b.base[b.proj[u]], b.base[b.proj[v]]],
                 "lift": [b.points[u], b.points[v]]})
    for mrow in range(m_rows):
        if dens[mrow] < 0:
            raise InconsistencyError("a base edge has no lift",
                                     {"edge": list(bn.m_simplex_names(1)[mrow])})
    edges = base_edges(bn)
    chosen = array("i", [0]) * len(edges)
    for i, (a, c) in enumerate(edges):
        chosen[i] = nums[bn.m_pos(1)[a * nM + c]]
    return Connection(bn, edges, chosen)


# -- difference, curvature, and the central identity -------------------------


def connection_difference(bn: BundleWithNeighbours, first: Connection,
                          second: Connection) -> GaugeForm:
    """The gauge 1-form first(a,b) o second(b,a)."""
    for conn in (first, second):
        if conn.model is not bn:
            raise BookkeepingError("connection belongs to a different model")
    b = bn.bundle
    nP = len(b.points)
    n1, d1 = first.transport_tables()
    n2, d2 = second.transport_tables()
    sx = bn.m_simplices(1)
    rows = bn.m_rows(1)
    nums = array("i", [0]) * rows
    dens = array("i", [0]) * rows
    pos1 = bn.m_pos(1)
    for row in range(rows):
        a, c = sx[row * 2], sx[row * 2 + 1]
        back = pos1[c * bn.nM + a]
        # first(a,c) o second(c,a): apply second(c,a) to the anchor, then first
        x0 = b.fibre_min[a]
        mid = b.act_idx(n2[back], b.div_flat[d2[back] * nP + x0])
        top = b.act_idx(n1[row], b.div_flat[d1[row] * nP + mid])
        nums[row], dens[row] = top, x0
    return GaugeForm(bn, 1, nums, dens)


def curvature(bn: BundleWithNeighbours, conn: Connection) -> GaugeForm:
    """Holonomy around 2-simplices: transport a0 <- a1 <- a2 <- a0."""
    if conn.model is not bn:
        raise BookkeepingError("connection belongs to a different model")
    b = bn.bundle
    nP = len(b.points)
    nM = bn.nM
    nab_num, nab_den = conn.transport_tables()
    pos1 = bn.m_pos(1)
    divt = b.div_flat
    sx = bn.m_simplices(2)
    rows = bn.m_rows(2)
    nums = array("i", [0]) * rows
    dens = array("i", [0]) * rows
    for row in range(rows):
        o = row * 3
        a0, a1, a2 = sx[o], sx[o + 1], sx[o + 2]
        x0 = b.fibre_min[a0]
        r = pos1[a2 * nM + a0]
        z = b.act_idx(nab_num[r], divt[nab_den[r] * nP + x0])
        r = pos1[a1 * nM + a2]
        y = b.act_idx(nab_num[r], divt[nab_den[r] * nP + z])
        r = pos1[a0 * nM + a1]
        x = b.act_idx(nab_num[r], divt[nab_den[r] * nP + y])
        nums[row], dens[row] = x, x0
    return GaugeForm(bn, 2, nums, dens)


@dataclass
class CurvatureReport:
    """Simplexwise comparison of lifted holonomy against the coboundary."""

    ok: bool
    simplices: int
    mismatches: list[dict]
    coboundary_horizontal: CheckResult
    coboundary_equivariant: CheckResult

    def as_record(self) -> dict:
        return {
            "ok": self.ok,
            "simplices": self.simplices,
            "mismatches": self.mismatches,
            "coboundary_horizontal": self.coboundary_horizontal.ok,
            "coboundary_equivariant": self.coboundary_equivariant.ok,
        }


def verify_curvature_identity(bn: BundleWithNeighbours, conn: Connection) -> CurvatureReport:
    """Check that lifted holonomy equals the coboundary of the connection form.

    Also checks that the coboundary is horizontal and equivariant; any
    simplex where the two 2-forms differ is reported with its values.
    """
    omega = connection_to_form(bn, conn)
    d_omega = coboundary1(bn, omega)
    lifted = hat_transform(bn, curvature(bn, conn))
    mismatches: list[dict] = []
    if lifted.values != d_omega.values:
        G = bn.bundle.group
        names = bn.p_simplex_names(2)
        for row, (lhs, rhs) in enumerate(zip(lifted.values, d_omega.values)):
            if lhs != rhs:
                mismatches.append({
                    "simplex": list(names[row]),
                    "lifted_holonomy": G.elements[lhs],
                    "coboundary": G.elements[rhs],
                })
    hor = is_horizontal(bn, d_omega)
    eqv = is_equivariant(bn, d_omega)
    ok = not mismatches and hor.ok and eqv.ok
    return CurvatureReport(ok, bn.p_rows(2), mismatches, hor, eqv)


def descend_curvature(bn: BundleWithNeighbours, conn: Connection) -> BaseForm:
    """The base 2-form with pullback equal to the coboundary (commutative case).

    Verifies, before returning, that the pullback really is the
    coboundary and that the result matches the collapsed holonomy
    pointwise; both can only fail on a broken model.
    """
    omega = connection_to_form(bn, conn)
    d_omega = coboundary1(bn, omega)
    base = descend_invariant(bn, d_omega)  # refuses noncommutative groups
    if pullback(bn, base).values != d_omega.values:
        raise InconsistencyError("descended coboundary does not pull back to itself")
    collapsed = gauge_form_to_base(bn, curvature(bn, conn))
    if collapsed.values != base.values:
        raise InconsistencyError("collapsed holonomy differs from the descended coboundary")
    return base
