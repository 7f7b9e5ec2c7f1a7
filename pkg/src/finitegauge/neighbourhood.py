"""Neighbour relations, infinitesimal simplices, and model generators.

A neighbour relation is reflexive and symmetric by construction: the
constructor closes whatever pairs it is given.  An infinitesimal
k-simplex is a (k+1)-tuple of mutual neighbours; repeats are allowed
because the relation is reflexive.
"""

from __future__ import annotations

from array import array
from typing import Iterable, Mapping, Sequence

from ._kernels import impl as K
from .errors import BookkeepingError, Violation
from .groups import FiniteGroup
from .torsor import PrincipalBundle, trivial_bundle

# dense simplex-position tables stop making sense past this many entries
_DENSE_LIMIT = 1 << 26


class Neighbourhood:
    """A reflexive symmetric relation on a sorted finite carrier."""

    def __init__(self, carrier: Sequence[str], pairs: Iterable[tuple[str, str]] = ()):
        names = sorted(carrier)
        if len(set(names)) != len(names):
            raise ValueError("duplicate carrier names")
        self.carrier: tuple[str, ...] = tuple(names)
        self.index: dict[str, int] = {x: i for i, x in enumerate(names)}
        n = len(names)
        adj = bytearray(n * n)
        for i in range(n):
            adj[i * n + i] = 1
        for x, y in pairs:
            if x not in self.index or y not in self.index:
                raise ValueError(f"pair ({x!r}, {y!r}) is not inside the carrier")
            i, j = self.index[x], self.index[y]
            adj[i * n + j] = 1
            adj[j * n + i] = 1
        self.adj: bytes = bytes(adj)

    @classmethod
    def codiscrete(cls, carrier: Sequence[str]) -> "Neighbourhood":
        names = sorted(carrier)
        return cls(names, [(x, y) for x in names for y in names])

    @classmethod
    def discrete(cls, carrier: Sequence[str]) -> "Neighbourhood":
        return cls(carrier)

    def __len__(self) -> int:
        return len(self.carrier)

    def __repr__(self) -> str:
        return f"Neighbourhood({len(self.carrier)} points, {len(self.pairs())} edges)"

    def related(self, x: str, y: str) -> bool:
        n = len(self.carrier)
        return bool(self.adj[self.index[x] * n + self.index[y]])

    def neighbours(self, x: str) -> tuple[str, ...]:
        n = len(self.carrier)
        i = self.index[x]
        return tuple(self.carrier[j] for j in range(n) if self.adj[i * n + j])

    def pairs(self) -> list[tuple[str, str]]:
        """The off-diagonal unordered pairs, canonically ordered."""
        n = len(self.carrier)
        return [
            (self.carrier[i], self.carrier[j])
            for i in range(n)
            for j in range(i + 1, n)
            if self.adj[i * n + j]
        ]

    def without_pairs(self, drop: Iterable[tuple[str, str]]) -> "Neighbourhood":
        """A copy with the given unordered pairs removed (diagonal kept)."""
        gone = {frozenset(p) for p in drop}
        keep = [p for p in self.pairs() if frozenset(p) not in gone]
        return Neighbourhood(self.carrier, keep)


def enumerate_simplices(n: Neighbourhood, k: int) -> list[tuple[str, ...]]:
    """All infinitesimal k-simplices, lexicographic in the carrier order."""
    if k < 0:
        raise ValueError("simplex degree must be >= 0")
    flat = K.enum_tuples(len(n.carrier), n.adj, k)
    names = n.carrier
    return [
        tuple(names[flat[o + i]] for i in range(k + 1))
        for o in range(0, len(flat), k + 1)
    ]


class BundleWithNeighbours:
    """A principal bundle with neighbour relations on base and total set.

    ``max_lift`` is the largest simplex degree for which the lifting
    axiom is demanded by the validator (2 by default: nothing in scope
    uses forms above degree 2).  The instance lazily carries the flat
    tables the verification kernels run on; it is immutable apart from
    those caches.
    """

    def __init__(
        self,
        bundle: PrincipalBundle,
        base_nbhd: Neighbourhood,
        total_nbhd: Neighbourhood,
        max_lift: int = 2,
    ):
        if base_nbhd.carrier != bundle.base:
            raise ValueError("base relation carrier differs from the bundle base")
        if total_nbhd.carrier != bundle.points:
            raise ValueError("total relation carrier differs from the bundle points")
        if max_lift < 1:
            raise ValueError("max_lift must be >= 1")
        self.bundle = bundle
        self.base_nbhd = base_nbhd
        self.total_nbhd = total_nbhd
        self.max_lift = max_lift
        self._sx: dict[tuple[str, int], array] = {}
        self._pos: dict[tuple[str, int], array] = {}

    def __repr__(self) -> str:
        return f"BundleWithNeighbours({self.bundle!r}, max_lift={self.max_lift})"

    # -- flat tables for the kernels -------------------------------------

    @property
    def nP(self) -> int:
        return len(self.bundle.points)

    @property
    def nM(self) -> int:
        return len(self.bundle.base)

    @property
    def nG(self) -> int:
        return len(self.bundle.group)

    @property
    def p_adj(self) -> bytes:
        return self.total_nbhd.adj

    @property
    def m_adj(self) -> bytes:
        return self.base_nbhd.adj

    @property
    def proj_arr(self) -> array:
        arr = getattr(self, "_proj_arr", None)
        if arr is None:
            arr = array("i", self.bundle.proj)
            self._proj_arr = arr
        return arr

    @property
    def fibre_min_arr(self) -> array:
        arr = getattr(self, "_fibre_min_arr", None)
        if arr is None:
            arr = array("i", self.bundle.fibre_min)
            self._fibre_min_arr = arr
        return arr

    def p_simplices(self, k: int) -> array:
        key = ("p", k)
        if key not in self._sx:
            self._sx[key] = K.enum_tuples(self.nP, self.p_adj, k)
        return self._sx[key]

    def m_simplices(self, k: int) -> array:
        key = ("m", k)
        if key not in self._sx:
            self._sx[key] = K.enum_tuples(self.nM, self.m_adj, k)
        return self._sx[key]

    def p_rows(self, k: int) -> int:
        return len(self.p_simplices(k)) // (k + 1)

    def m_rows(self, k: int) -> int:
        return len(self.m_simplices(k)) // (k + 1)

    def _pos_table(self, space: str, k: int) -> array:
        key = (space, k)
        if key not in self._pos:
            n = self.nP if space == "p" else self.nM
            if n ** (k + 1) > _DENSE_LIMIT:
                raise BookkeepingError(
                    f"model too large for degree-{k} form tables ({n} points)"
                )
            sx = self.p_simplices(k) if space == "p" else self.m_simplices(k)
            self._pos[key] = K.dense_pos(n, sx, k)
        return self._pos[key]

    def p_pos(self, k: int) -> array:
        return self._pos_table("p", k)

    def m_pos(self, k: int) -> array:
        return self._pos_table("m", k)

    def p_simplex_names(self, k: int) -> list[tuple[str, ...]]:
        sx = self.p_simplices(k)
        pts = self.bundle.points
        return [tuple(pts[sx[o + i]] for i in range(k + 1))
                for o in range(0, len(sx), k + 1)]

    def m_simplex_names(self, k: int) -> list[tuple[str, ...]]:
        sx = self.m_simplices(k)
        bs = self.bundle.base
        return [tuple(bs[sx[o + i]] for i in range(k + 1))
                for o in range(0, len(sx), k + 1)]

    def p_row_of(self, simplex: Sequence[str]) -> int:
        k = len(simplex) - 1
        idx = 0
        for name in simplex:
            idx = idx * self.nP + self.bundle.pidx(name)
        row = self.p_pos(k)[idx]
        if row < 0:
            raise BookkeepingError(f"{tuple(simplex)} is not an infinitesimal {k}-simplex")
        return row

    def m_row_of(self, simplex: Sequence[str]) -> int:
        k = len(simplex) - 1
        idx = 0
        for name in simplex:
            if name not in self.bundle.base_index:
                raise ValueError(f"unknown base element {name!r}")
            idx = idx * self.nM + self.bundle.base_index[name]
        row = self.m_pos(k)[idx]
        if row < 0:
            raise BookkeepingError(f"{tuple(simplex)} is not an infinitesimal {k}-simplex")
        return row


def _lift_failure(bn: BundleWithNeighbours, k: int):
    """Search for a base k-simplex and marked point with no lift."""
    b = bn.bundle
    nP = bn.nP
    adj = bn.p_adj
    m_sx = bn.m_simplices(k)
    for o in range(0, len(m_sx), k + 1):
        digs = [m_sx[o + i] for i in range(k + 1)]
        for x0 in b.fibres[digs[0]]:
            chosen = [x0]

            def extend(depth: int) -> bool:
                if depth == k + 1:
                    return True
                for cand in b.fibres[digs[depth]]:
                    if all(adj[c * nP + cand] for c in chosen):
                        chosen.append(cand)
                        if extend(depth + 1):
                            return True
                        chosen.pop()
                return False

            if not extend(1):
                return (tuple(b.base[d] for d in digs), b.points[x0])
    return None


def validate_neighbour_bundle(bn: BundleWithNeighbours) -> list[Violation]:
    """Exhaustively check the bundle/relation compatibility axioms.

    Covers: the projection and the group action preserve the relation,
    the projection is an open submersion, and base simplices with a
    marked start point lift, for every degree up to ``max_lift``.
    """
    out: list[Violation] = []
    b = bn.bundle
    nP, nG = bn.nP, bn.nG
    p_adj, m_adj = bn.p_adj, bn.m_adj

    for x in range(nP):
        for y in range(nP):
            if p_adj[x * nP + y] and not m_adj[b.proj[x] * bn.nM + b.proj[y]]:
                out.append(Violation(
                    "projection-preserves-relation",
                    (b.points[x], b.points[y]),
                    f"{b.points[x]} ~ {b.points[y]} but their projections are not neighbours"))

    for x in range(nP):
        for y in range(nP):
            if not p_adj[x * nP + y]:
                continue
            for g in range(nG):
                if not p_adj[b.act_idx(x, g) * nP + b.act_idx(y, g)]:
                    out.append(Violation(
                        "action-preserves-relation",
                        (b.points[x], b.points[y], b.group.elements[g]),
                        f"{b.points[x]} ~ {b.points[y]} is destroyed by {b.group.elements[g]}"))

    for a in range(bn.nM):
        for c in range(bn.nM):
            if not m_adj[a * bn.nM + c]:
                continue
            for x in b.fibres[a]:
                if not any(p_adj[x * nP + y] for y in b.fibres[c]):
                    out.append(Violation(
                        "open-submersion",
                        (b.base[a], b.base[c], b.points[x]),
                        f"{b.base[a]} ~ {b.base[c]} but {b.points[x]} has no neighbour over {b.base[c]}"))

    for k in range(2, bn.max_lift + 1):
        failure = _lift_failure(bn, k)
        if failure is not None:
            simplex, x0 = failure
            out.append(Violation(
                "simplex-lifting",
                (*simplex, x0),
                f"the {k}-simplex {simplex} has no lift starting at {x0}"))
    return out


def trivial_model(m: Neighbourhood, group: FiniteGroup, max_lift: int = 2) -> BundleWithNeighbours:
    """The product bundle over m with (a,g) ~ (b,h) iff a ~ b.

    Valid for every max_lift: lifts can always reuse the group
    coordinate of the marked point.
    """
    bundle = trivial_bundle(m.carrier, group)
    pairs = []
    for x in bundle.points:
        for y in bundle.points:
            if x < y and m.related(bundle.proj_of(x), bundle.proj_of(y)):
                pairs.append((x, y))
    total = Neighbourhood(bundle.points, pairs)
    return BundleWithNeighbours(bundle, m, total, max_lift=max_lift)


def twisted_model(
    m: Neighbourhood,
    group: FiniteGroup,
    spread: Mapping[tuple[str, str], Iterable[str]],
    max_lift: int = 2,
) -> tuple[BundleWithNeighbours, list[Violation]]:
    """A product bundle whose relation allows the shifts listed per edge.

    ``spread`` assigns every neighbour pair (a, b) of the base the set of
    group elements s for which (a, g) ~ (b, s g); it must contain the
    unit on the diagonal, be nonempty, and be elementwise inverted under
    swapping a and b.  Group invariance and the submersion axiom then
    hold by construction; the lifting axiom does not, so the validation
    report is returned alongside the model rather than assumed empty.
    """
    edges = [(a, b) for a in m.carrier for b in m.carrier if m.related(a, b)]
    sets: dict[tuple[str, str], frozenset[int]] = {}
    for a, b in edges:
        if (a, b) not in spread:
            raise BookkeepingError(f"spread is missing the neighbour pair ({a!r}, {b!r})")
        sets[(a, b)] = frozenset(group.idx(s) for s in spread[(a, b)])
    for key in spread:
        if key not in sets:
            raise BookkeepingError(f"spread names ({key[0]!r}, {key[1]!r}), which is not a neighbour pair")
    for a, b in edges:
        s = sets[(a, b)]
        if not s:
            raise BookkeepingError(f"spread set for ({a!r}, {b!r}) is empty")
        if a == b and group.unit_idx not in s:
            raise BookkeepingError(f"spread set for ({a!r}, {a!r}) must contain the unit")
        back = frozenset(group.inv_idx[g] for g in s)
        if sets[(b, a)] != back:
            raise BookkeepingError(
                f"spread sets for ({a!r}, {b!r}) and ({b!r}, {a!r}) are not elementwise inverse")

    bundle = trivial_bundle(m.carrier, group)
    G = group
    pairs = []
    for x in bundle.points:
        a = bundle.proj_of(x)
        gx = G.idx(x.split("|", 1)[1])
        for y in bundle.points:
            if not x < y:
                continue
            b_ = bundle.proj_of(y)
            if not m.related(a, b_):
                continue
            gy = G.idx(y.split("|", 1)[1])
            # (a, g) ~ (b, h) iff h g^-1 is an allowed shift for (a, b)
            if G.table[gy][G.inv_idx[gx]] in sets[(a, b_)]:
                pairs.append((x, y))
    total = Neighbourhood(bundle.points, pairs)
    bn = BundleWithNeighbours(bundle, m, total, max_lift=max_lift)
    return bn, validate_neighbour_bundle(bn)


def flat_spread(m: Neighbourhood, group: FiniteGroup) -> dict[tuple[str, str], tuple[str, ...]]:
    """The unit-only spread: (a,g) ~ (b,h) exactly when h == g."""
    return {(a, b): (group.unit,)
            for a in m.carrier for b in m.carrier if m.related(a, b)}


def full_spread(m: Neighbourhood, group: FiniteGroup) -> dict[tuple[str, str], tuple[str, ...]]:
    """The everything spread; reproduces the trivial model."""
    return {(a, b): tuple(group.elements)
            for a in m.carrier for b in m.carrier if m.related(a, b)}
