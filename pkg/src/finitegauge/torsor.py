"""Principal bundles as finite free fibre-transitive right group actions.

The calculus is the fraction calculus: ``div(x, z)`` is the unique group
element carrying x to z inside a fibre, a :class:`FractionArrow` [y, x]
is the class of the pair (y, x) under the diagonal right action, and the
enveloping groupoid realises every fraction as an honest composite.
"""

from __future__ import annotations

import itertools
from array import array
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import BookkeepingError, NoncommutativeGroupError, Violation
from .groupoid import ArrowSpec, FiniteGroupoid, GaugeBundle, gauge_bundle
from .groups import FiniteGroup


class PrincipalBundle:
    """A finite set over a base with a free, fibre-transitive right action.

    Points and base names are sorted lexicographically at construction, so
    "least point of a fibre" is well defined and all enumeration is
    canonical.  Structural totality is enforced here; the torsor axioms
    are checked by :func:`validate_bundle`.
    """

    def __init__(
        self,
        points: Sequence[str],
        base: Sequence[str],
        group: FiniteGroup,
        proj: Mapping[str, str],
        action: Mapping[tuple[str, str], str],
    ):
        pts = sorted(points)
        bs = sorted(base)
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate point names")
        if len(set(bs)) != len(bs):
            raise ValueError("duplicate base names")
        self.points: tuple[str, ...] = tuple(pts)
        self.base: tuple[str, ...] = tuple(bs)
        self.group: FiniteGroup = group
        self.point_index: dict[str, int] = {p: i for i, p in enumerate(pts)}
        self.base_index: dict[str, int] = {b: i for i, b in enumerate(bs)}
        try:
            self.proj: tuple[int, ...] = tuple(self.base_index[proj[p]] for p in pts)
        except KeyError as exc:
            raise ValueError(f"projection is not a total map into the base: {exc}") from None
        nG = len(group)
        act: list[int] = []
        for p in pts:
            for s in group.elements:
                if (p, s) not in action:
                    raise ValueError(f"action is missing ({p!r}, {s!r})")
                q = action[(p, s)]
                if q not in self.point_index:
                    raise ValueError(f"action value {q!r} is not a point")
                act.append(self.point_index[q])
        self.act_flat: array = array("i", act)
        self._nG = nG
        fibres: list[list[int]] = [[] for _ in bs]
        for i in range(len(pts)):
            fibres[self.proj[i]].append(i)
        self.fibres: tuple[tuple[int, ...], ...] = tuple(tuple(f) for f in fibres)
        self.fibre_min: tuple[int, ...] = tuple(f[0] if f else -1 for f in self.fibres)
        self._div: array | None = None

    def __repr__(self) -> str:
        return (f"PrincipalBundle(|P|={len(self.points)}, |M|={len(self.base)}, "
                f"|G|={len(self.group)})")

    # -- index-level core ----------------------------------------------------

    def act_idx(self, x: int, g: int) -> int:
        return self.act_flat[x * self._nG + g]

    @property
    def div_flat(self) -> array:
        """Dense |P| x |P| table of div, -1 on cross-fibre pairs.

        Well defined only on bundles that pass validation; on broken input
        the first solution found wins.
        """
        if self._div is None:
            n = len(self.points)
            t = array("i", [-1]) * (n * n)
            for x in range(n):
                row = x * self._nG
                for g in range(self._nG):
                    z = self.act_flat[row + g]
                    if t[x * n + z] < 0:
                        t[x * n + z] = g
            self._div = t
        return self._div

    def div_idx(self, x: int, z: int) -> int:
        g = self.div_flat[x * len(self.points) + z]
        if g < 0:
            raise BookkeepingError(
                f"div({self.points[x]}, {self.points[z]}): points lie in different fibres"
            )
        return g

    # -- name-level helpers ----------------------------------------------------

    def pidx(self, p: str) -> int:
        try:
            return self.point_index[p]
        except KeyError:
            raise ValueError(f"unknown point {p!r}") from None

    def proj_of(self, p: str) -> str:
        return self.base[self.proj[self.pidx(p)]]

    def act_of(self, p: str, g: str) -> str:
        return self.points[self.act_idx(self.pidx(p), self.group.idx(g))]

    def fibre(self, a: str) -> tuple[str, ...]:
        if a not in self.base_index:
            raise ValueError(f"unknown base element {a!r}")
        return tuple(self.points[i] for i in self.fibres[self.base_index[a]])


@dataclass(frozen=True, order=True)
class FractionArrow:
    """The class of a pair (num, den) under the diagonal right action.

    Always stored canonically (den is the least point of its fibre), so
    class equality is plain structural equality.  The arrow goes from the
    fibre over ``proj(den)`` to the fibre over ``proj(num)``.
    """

    num: str
    den: str


def validate_bundle(b: PrincipalBundle) -> list[Violation]:
    """Exhaustively check the torsor axioms; violations carry witnesses."""
    out: list[Violation] = []
    G = b.group
    nP, nG = len(b.points), len(G)
    unit = G.unit_idx

    for x in range(nP):
        if b.act_idx(x, unit) != x:
            out.append(Violation("action-unit", (b.points[x],),
                                 f"{b.points[x]} . unit != {b.points[x]}"))
    for x in range(nP):
        for g in range(nG):
            xg = b.act_idx(x, g)
            for h in range(nG):
                if b.act_idx(xg, h) != b.act_idx(x, G.table[g][h]):
                    out.append(Violation(
                        "action-associativity",
                        (b.points[x], G.elements[g], G.elements[h]),
                        f"({b.points[x]} . {G.elements[g]}) . {G.elements[h]} "
                        f"!= {b.points[x]} . ({G.elements[g]}{G.elements[h]})"))
    for x in range(nP):
        for g in range(nG):
            if b.proj[b.act_idx(x, g)] != b.proj[x]:
                out.append(Violation("fibrewise", (b.points[x], G.elements[g]),
                                     f"action of {G.elements[g]} moves {b.points[x]} across fibres"))
    for x in range(nP):
        for g in range(nG):
            if g != unit and b.act_idx(x, g) == x:
                out.append(Violation("freeness", (b.points[x], G.elements[g]),
                                     f"{G.elements[g]} fixes {b.points[x]}"))
    for a, fibre in enumerate(b.fibres):
        if not fibre:
            out.append(Violation("surjectivity", (b.base[a],),
                                 f"no point lies over {b.base[a]}"))
            continue
        x0 = fibre[0]
        orbit = {b.act_idx(x0, g) for g in range(nG)}
        for z in fibre:
            if z not in orbit:
                out.append(Violation("fibre-transitivity", (b.points[x0], b.points[z]),
                                     f"no group element carries {b.points[x0]} to {b.points[z]}"))
    return out


def div(b: PrincipalBundle, x: str, z: str) -> str:
    """The unique g with x . g = z; bookkeeping error across fibres."""
    return b.group.elements[b.div_idx(b.pidx(x), b.pidx(z))]


def tern(b: PrincipalBundle, y: str, x: str, z: str) -> str:
    """The pregroupoid composite "y x^-1 z": defined when x, z share a fibre."""
    yi, xi, zi = b.pidx(y), b.pidx(x), b.pidx(z)
    return b.points[b.act_idx(yi, b.div_idx(xi, zi))]


def _canonical_pair(b: PrincipalBundle, num: int, den: int) -> tuple[int, int]:
    d0 = b.fibre_min[b.proj[den]]
    g = b.div_flat[den * len(b.points) + d0]
    return b.act_idx(num, g), d0


def make_arrow(b: PrincipalBundle, num: str, den: str) -> FractionArrow:
    """The fraction class of (num, den), canonically represented."""
    n, d = _canonical_pair(b, b.pidx(num), b.pidx(den))
    return FractionArrow(b.points[n], b.points[d])


def arrow_dom(b: PrincipalBundle, f: FractionArrow) -> str:
    return b.proj_of(f.den)


def arrow_cod(b: PrincipalBundle, f: FractionArrow) -> str:
    return b.proj_of(f.num)


def identity_arrow(b: PrincipalBundle, a: str) -> FractionArrow:
    x0 = b.points[b.fibre_min[b.base_index[a]]]
    return FractionArrow(x0, x0)


def arrow_inverse(b: PrincipalBundle, f: FractionArrow) -> FractionArrow:
    return make_arrow(b, f.den, f.num)


def arrow_compose(b: PrincipalBundle, f2: FractionArrow, f1: FractionArrow) -> FractionArrow:
    """The composite "f2 after f1"; needs cod(f1) == dom(f2)."""
    w, x = b.pidx(f2.num), b.pidx(f2.den)
    y, v = b.pidx(f1.num), b.pidx(f1.den)
    if b.proj[x] != b.proj[y]:
        raise BookkeepingError(
            f"arrow_compose: cod of {f1} is {b.base[b.proj[y]]!r} "
            f"but dom of {f2} is {b.base[b.proj[x]]!r}"
        )
    num = b.act_idx(w, b.div_idx(x, y))
    n, d = _canonical_pair(b, num, v)
    return FractionArrow(b.points[n], b.points[d])


def act_left(b: PrincipalBundle, f: FractionArrow, u: str) -> str:
    """Apply the fraction [num, den] to a point of the fibre over dom(f)."""
    ui = b.pidx(u)
    deni = b.pidx(f.den)
    if b.proj[ui] != b.proj[deni]:
        raise BookkeepingError(
            f"act_left: {u} lies over {b.proj_of(u)!r}, not over dom = {arrow_dom(b, f)!r}"
        )
    return b.points[b.act_idx(b.pidx(f.num), b.div_idx(deni, ui))]


def endo_arrows(b: PrincipalBundle, a: str) -> tuple[FractionArrow, ...]:
    """All fraction classes from a to a, in canonical order."""
    ai = b.base_index[a]
    d0 = b.points[b.fibre_min[ai]]
    return tuple(FractionArrow(b.points[n], d0) for n in b.fibres[ai])


def hom_arrows(b: PrincipalBundle, a: str, c: str) -> tuple[FractionArrow, ...]:
    """All fraction classes from a to c, in canonical order."""
    d0 = b.points[b.fibre_min[b.base_index[a]]]
    return tuple(FractionArrow(b.points[n], d0) for n in b.fibres[b.base_index[c]])


# -- the enveloping groupoid on base + {*} ---------------------------------


STAR = "*"


def envelope(b: PrincipalBundle) -> FiniteGroupoid:
    """The transitive groupoid on base + {*} generated by the fractions.

    Arrow stock: group elements at *, the points as arrows * -> a, their
    formal inverses a -> *, and the fraction classes between base
    objects.  Composition is resolved case by case through ``div`` and
    the two actions, which keeps every entry independently checkable.
    """
    if STAR in b.base_index:
        raise ValueError("base already contains the reserved object name '*'")
    G = b.group

    def g_name(g: int) -> str:
        return f"g:{G.elements[g]}"

    def pt_name(x: int) -> str:
        return f"pt:{b.points[x]}"

    def inv_name(x: int) -> str:
        return f"inv:{b.points[x]}"

    def frac_name(num: int, den: int) -> str:
        return f"f:{b.points[num]}/{b.points[den]}"

    objects = [STAR, *b.base]
    arrows: list[ArrowSpec] = []
    for g in range(len(G)):
        arrows.append(ArrowSpec(g_name(g), STAR, STAR))
    for x in range(len(b.points)):
        a = b.base[b.proj[x]]
        arrows.append(ArrowSpec(pt_name(x), STAR, a))
        arrows.append(ArrowSpec(inv_name(x), a, STAR))
    fracs: list[tuple[int, int]] = []
    for a in range(len(b.base)):
        d0 = b.fibre_min[a]
        for c in range(len(b.base)):
            for num in b.fibres[c]:
                fracs.append((num, d0))
                arrows.append(ArrowSpec(frac_name(num, d0), b.base[a], b.base[c]))

    nP = len(b.points)

    def canon_frac(num: int, den: int) -> str:
        n, d = _canonical_pair(b, num, den)
        return frac_name(n, d)

    compose: dict[tuple[str, str], str] = {}
    # group o group
    for g in range(len(G)):
        for h in range(len(G)):
            compose[(g_name(g), g_name(h))] = g_name(G.table[g][h])
    for x in range(nP):
        # point o group  (precomposition = the right action)
        for g in range(len(G)):
            compose[(pt_name(x), g_name(g))] = pt_name(b.act_idx(x, g))
            # group o formal inverse:  g x^-1 = (x g^-1)^-1
            compose[(g_name(g), inv_name(x))] = inv_name(b.act_idx(x, G.inv_idx[g]))
        # formal inverse o point, same fibre:  x^-1 y = div(x, y)
        for y in b.fibres[b.proj[x]]:
            compose[(inv_name(x), pt_name(y))] = g_name(b.div_flat[x * nP + y])
    # point o formal inverse:  y x^-1 as a fraction (composable for all pairs)
    for y in range(nP):
        for x in range(nP):
            compose[(pt_name(y), inv_name(x))] = canon_frac(y, x)
    for num, den in fracs:
        f = frac_name(num, den)
        # fraction o point:  (y x^-1) u = y . div(x, u)
        for u in b.fibres[b.proj[den]]:
            compose[(f, pt_name(u))] = pt_name(b.act_idx(num, b.div_flat[den * nP + u]))
        # formal inverse o fraction:  u^-1 (y x^-1) = (x . div(u, y)^-1)^-1
        for u in b.fibres[b.proj[num]]:
            g = b.div_flat[u * nP + num]
            compose[(inv_name(u), f)] = inv_name(b.act_idx(den, G.inv_idx[g]))
    for num1, den1 in fracs:
        f1 = frac_name(num1, den1)
        # fraction o fraction:  (z w^-1)(y x^-1) = (z . div(w, y)) x^-1
        for num2, den2 in fracs:
            if b.proj[den2] != b.proj[num1]:
                continue
            f2 = frac_name(num2, den2)
            lifted = b.act_idx(num2, b.div_flat[den2 * nP + num1])
            compose[(f2, f1)] = canon_frac(lifted, den1)

    identities = {STAR: g_name(G.unit_idx)}
    for a in range(len(b.base)):
        d0 = b.fibre_min[a]
        identities[b.base[a]] = frac_name(d0, d0)
    inverses: dict[str, str] = {}
    for g in range(len(G)):
        inverses[g_name(g)] = g_name(G.inv_idx[g])
    for x in range(nP):
        inverses[pt_name(x)] = inv_name(x)
        inverses[inv_name(x)] = pt_name(x)
    for num, den in fracs:
        inverses[frac_name(num, den)] = canon_frac(den, num)

    return FiniteGroupoid(objects, arrows, compose, identities, inverses)


def gauge_of_bundle(b: PrincipalBundle) -> GaugeBundle:
    """Vertex groups of the fraction groupoid, over the base only."""
    env = envelope(b)
    full = gauge_bundle(env)
    keep = [i for i, o in enumerate(full.base) if o != STAR]
    return GaugeBundle(
        base=tuple(full.base[i] for i in keep),
        fibres=tuple(full.fibres[i] for i in keep),
    )


# -- the commutative identification gauge fibres <-> group ------------------


def gauge_to_group(b: PrincipalBundle, h: FractionArrow) -> str:
    """Collapse an endo fraction [y, x] to div(x, y); commutative case only."""
    if not b.group.is_commutative:
        raise NoncommutativeGroupError(
            "gauge_to_group needs a commutative group: the value of div(x, y) "
            "depends on the chosen representative otherwise"
        )
    yi, xi = b.pidx(h.num), b.pidx(h.den)
    if b.proj[yi] != b.proj[xi]:
        raise BookkeepingError(f"{h} is not an endo arrow")
    return b.group.elements[b.div_idx(xi, yi)]


def group_to_gauge(b: PrincipalBundle, a: str, g: str) -> FractionArrow:
    """The endo class [x0 . g, x0] at a, for x0 the least point of the fibre."""
    if a not in b.base_index:
        raise ValueError(f"unknown base element {a!r}")
    x0 = b.fibre_min[b.base_index[a]]
    return FractionArrow(b.points[b.act_idx(x0, b.group.idx(g))], b.points[x0])


def gauge_to_group_counterexample(b: PrincipalBundle):
    """Search for a representative-dependence of div(x, y) on endo classes.

    Returns None when div(x . g, y . g) == div(x, y) for every same-fibre
    pair and every g (always, for commutative groups), else the first
    counterexample in canonical order as a dict with the pair, the shift
    and the two differing values.
    """
    G = b.group
    nP, nG = len(b.points), len(G)
    dv = b.div_flat
    for fibre in b.fibres:
        for x in fibre:
            for y in fibre:
                base = dv[x * nP + y]
                for g in range(nG):
                    xg, yg = b.act_idx(x, g), b.act_idx(y, g)
                    shifted = dv[xg * nP + yg]
                    if shifted != base:
                        return {
                            "num": b.points[y],
                            "den": b.points[x],
                            "shift": G.elements[g],
                            "value": G.elements[base],
                            "shifted_value": G.elements[shifted],
                        }
    return None


# -- trivial bundles and isomorphism search -----------------------------------


def trivial_bundle(base: Sequence[str], group: FiniteGroup, sep: str = "|") -> PrincipalBundle:
    """The product bundle base x group with the right regular action."""
    bs = sorted(base)
    for a in bs:
        if sep in a:
            raise ValueError(f"base name {a!r} contains the separator {sep!r}")
    points = [f"{a}{sep}{g}" for a in bs for g in group.elements]
    proj = {f"{a}{sep}{g}": a for a in bs for g in group.elements}
    action = {
        (f"{a}{sep}{g}", h): f"{a}{sep}{group.mul(g, h)}"
        for a in bs for g in group.elements for h in group.elements
    }
    return PrincipalBundle(points, bs, group, proj, action)


def _group_isomorphisms(g1: FiniteGroup, g2: FiniteGroup):
    """Yield all isomorphisms g1 -> g2 as index tuples (backtracking)."""
    n = len(g1)
    if len(g2) != n:
        return

    def order_of(g: FiniteGroup, i: int) -> int:
        k, x = 1, i
        while x != g.unit_idx:
            x = g.table[x][i]
            k += 1
        return k

    o1 = [order_of(g1, i) for i in range(n)]
    o2 = [order_of(g2, i) for i in range(n)]
    candidates = [[j for j in range(n) if o2[j] == o1[i]] for i in range(n)]
    phi = [-1] * n
    used = [False] * n

    def extend(i: int):
        if i == n:
            yield tuple(phi)
            return
        for j in candidates[i]:
            if used[j]:
                continue
            ok = True
            for k in range(i + 1):
                kk = phi[k] if k < i else j
                if phi[g1.table[i][k]] != -1 and phi[g1.table[i][k]] != g2.table[j][kk]:
                    ok = False
                    break
                if phi[g1.table[k][i]] != -1 and phi[g1.table[k][i]] != g2.table[kk][j]:
                    ok = False
                    break
            if not ok:
                continue
            phi[i] = j
            used[j] = True
            yield from extend(i + 1)
            phi[i] = -1
            used[j] = False

    for cand in extend(0):
        full_ok = all(
            cand[g1.table[i][k]] == g2.table[cand[i]][cand[k]]
            for i in range(n) for k in range(n)
        )
        if full_ok:
            yield cand


def bundle_isomorphism(b1: PrincipalBundle, b2: PrincipalBundle):
    """Search for an isomorphism of principal bundles b1 -> b2.

    Returns a dict with the three maps (points, base, group) as
    name-to-name dicts, or None.  Identity-friendly: base bijections are
    tried in an order that starts with the name-preserving one when the
    base names agree.
    """
    if (len(b1.points) != len(b2.points) or len(b1.base) != len(b2.base)
            or sorted(map(len, b1.fibres)) != sorted(map(len, b2.fibres))):
        return None
    m = len(b1.base)
    perms = sorted(itertools.permutations(range(m)),
                   key=lambda p: p != tuple(range(m)))
    for psi in _group_isomorphisms(b1.group, b2.group):
        for perm in perms:
            if any(len(b1.fibres[a]) != len(b2.fibres[perm[a]]) for a in range(m)):
                continue
            # anchor each fibre, then the action forces the rest
            for anchors in itertools.product(
                    *[b2.fibres[perm[a]] for a in range(m)]):
                phi = [-1] * len(b1.points)
                for a in range(m):
                    x0 = b1.fibre_min[a]
                    for g in range(len(b1.group)):
                        phi[b1.act_idx(x0, g)] = b2.act_idx(anchors[a], psi[g])
                ok = all(
                    phi[b1.act_idx(x, g)] == b2.act_idx(phi[x], psi[g])
                    for x in range(len(b1.points))
                    for g in range(len(b1.group))
                )
                if ok:
                    return {
                        "points": {b1.points[x]: b2.points[phi[x]]
                                   for x in range(len(b1.points))},
                        "base": {b1.base[a]: b2.base[perm[a]] for a in range(m)},
                        "group": {b1.group.elements[g]: b2.group.elements[psi[g]]
                                  for g in range(len(b1.group))},
                    }
    return None
