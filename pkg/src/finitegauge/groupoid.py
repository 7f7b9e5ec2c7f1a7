"""Finite groupoids as explicit composition tables.

Composition is read right-to-left throughout: ``compose(f, g)`` is "f
after g" and requires ``dom(f) == cod(g)``.  Partiality is explicit --
asking for a composite outside that domain is a bookkeeping error, never
a silent identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import BookkeepingError, Violation


@dataclass(frozen=True)
class ArrowSpec:
    """An arrow as written in a groupoid document."""

    name: str
    dom: str
    cod: str


class FiniteGroupoid:
    """Objects, arrows and a dense partial composition table.

    Construction performs structural checks only (names resolve, maps are
    total); the algebraic axioms are the business of
    :func:`validate_groupoid`, which reports violations as data.
    """

    def __init__(
        self,
        objects: Sequence[str],
        arrows: Sequence[ArrowSpec],
        compose: Mapping[tuple[str, str], str],
        identities: Mapping[str, str],
        inverses: Mapping[str, str],
    ):
        obj_names = sorted(objects)
        arr_specs = sorted(arrows, key=lambda s: s.name)
        if len(set(obj_names)) != len(obj_names):
            raise ValueError("duplicate object names")
        arr_names = [s.name for s in arr_specs]
        if len(set(arr_names)) != len(arr_names):
            raise ValueError("duplicate arrow names")
        self.objects: tuple[str, ...] = tuple(obj_names)
        self.arrows: tuple[str, ...] = tuple(arr_names)
        self.obj_index: dict[str, int] = {o: i for i, o in enumerate(self.objects)}
        self.arr_index: dict[str, int] = {a: i for i, a in enumerate(self.arrows)}

        def oi(name: str) -> int:
            if name not in self.obj_index:
                raise ValueError(f"unknown object {name!r}")
            return self.obj_index[name]

        def ai(name: str) -> int:
            if name not in self.arr_index:
                raise ValueError(f"unknown arrow {name!r}")
            return self.arr_index[name]

        self.dom: tuple[int, ...] = tuple(oi(s.dom) for s in arr_specs)
        self.cod: tuple[int, ...] = tuple(oi(s.cod) for s in arr_specs)
        n = len(self.arrows)
        table = [-1] * (n * n)
        for (left, right), result in compose.items():
            table[ai(left) * n + ai(right)] = ai(result)
        self._table = table
        if set(identities.keys()) != set(self.objects):
            raise ValueError("identities must name every object exactly once")
        self.identity: tuple[int, ...] = tuple(ai(identities[o]) for o in self.objects)
        if set(inverses.keys()) != set(self.arrows):
            raise ValueError("inverses must name every arrow exactly once")
        self.inverse: tuple[int, ...] = tuple(ai(inverses[a]) for a in self.arrows)

    def __repr__(self) -> str:
        return f"FiniteGroupoid({len(self.objects)} objects, {len(self.arrows)} arrows)"

    # -- index-level access ------------------------------------------------

    def compose_idx(self, f: int, g: int) -> int:
        return self._table[f * len(self.arrows) + g]

    def composable_idx(self, f: int, g: int) -> bool:
        return self.dom[f] == self.cod[g]

    # -- name-level access ---------------------------------------------------

    def arrow(self, name: str) -> int:
        try:
            return self.arr_index[name]
        except KeyError:
            raise ValueError(f"unknown arrow {name!r}") from None

    def compose(self, f: str, g: str) -> str:
        """The composite "f after g"; bookkeeping error off the domain."""
        fi, gi = self.arrow(f), self.arrow(g)
        r = self.compose_idx(fi, gi)
        if r < 0:
            raise BookkeepingError(
                f"compose({f}, {g}) undefined: dom({f}) is "
                f"{self.objects[self.dom[fi]]!r} but cod({g}) is {self.objects[self.cod[gi]]!r}"
            )
        return self.arrows[r]

    def dom_of(self, f: str) -> str:
        return self.objects[self.dom[self.arrow(f)]]

    def cod_of(self, f: str) -> str:
        return self.objects[self.cod[self.arrow(f)]]

    def identity_of(self, o: str) -> str:
        if o not in self.obj_index:
            raise ValueError(f"unknown object {o!r}")
        return self.arrows[self.identity[self.obj_index[o]]]

    def inverse_of(self, f: str) -> str:
        return self.arrows[self.inverse[self.arrow(f)]]

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        """All arrows a -> b, in canonical order."""
        ai_, bi = self.obj_index[a], self.obj_index[b]
        return tuple(
            self.arrows[f]
            for f in range(len(self.arrows))
            if self.dom[f] == ai_ and self.cod[f] == bi
        )


@dataclass(frozen=True)
class GaugeBundle:
    """Per-object vertex groups of a groupoid: fibre(a) = endo-arrows at a."""

    base: tuple[str, ...]
    fibres: tuple[tuple[str, ...], ...]

    def fibre(self, o: str) -> tuple[str, ...]:
        return self.fibres[self.base.index(o)]


def validate_groupoid(g: FiniteGroupoid) -> list[Violation]:
    """Exhaustively check the groupoid axioms; violations carry witnesses."""
    out: list[Violation] = []
    n = len(g.arrows)
    arrows = g.arrows
    objects = g.objects

    for o_idx, o in enumerate(objects):
        e = g.identity[o_idx]
        if g.dom[e] != o_idx or g.cod[e] != o_idx:
            out.append(Violation("identity-endpoints", (o, arrows[e]),
                                 f"identity({o}) = {arrows[e]} is not an endo-arrow at {o}"))

    for f in range(n):
        fi = g.inverse[f]
        if g.dom[fi] != g.cod[f] or g.cod[fi] != g.dom[f]:
            out.append(Violation("inverse-endpoints", (arrows[f], arrows[fi]),
                                 f"inverse({arrows[f]}) = {arrows[fi]} does not reverse endpoints"))

    for f in range(n):
        for h in range(n):
            r = g.compose_idx(f, h)
            if g.composable_idx(f, h):
                if r < 0:
                    out.append(Violation("composition-totality", (arrows[f], arrows[h]),
                                         f"compose({arrows[f]}, {arrows[h]}) is missing"))
                elif g.dom[r] != g.dom[h] or g.cod[r] != g.cod[f]:
                    out.append(Violation("composition-endpoints", (arrows[f], arrows[h], arrows[r]),
                                         f"compose({arrows[f]}, {arrows[h]}) = {arrows[r]} has wrong endpoints"))
            elif r >= 0:
                out.append(Violation("composition-domain-mismatch", (arrows[f], arrows[h]),
                                     f"compose({arrows[f]}, {arrows[h]}) defined despite "
                                     f"dom({arrows[f]}) != cod({arrows[h]})"))

    if out:
        # endpoint bookkeeping is broken; the equational axioms would only
        # produce noise on top of it
        return out

    for f in range(n):
        e_dom = g.identity[g.dom[f]]
        e_cod = g.identity[g.cod[f]]
        if g.compose_idx(f, e_dom) != f:
            out.append(Violation("identity-unit", (arrows[f], arrows[e_dom]),
                                 f"{arrows[f]} o id != {arrows[f]}"))
        if g.compose_idx(e_cod, f) != f:
            out.append(Violation("identity-unit", (arrows[e_cod], arrows[f]),
                                 f"id o {arrows[f]} != {arrows[f]}"))

    for f in range(n):
        fi = g.inverse[f]
        if g.compose_idx(fi, f) != g.identity[g.dom[f]]:
            out.append(Violation("inverse-law", (arrows[f], arrows[fi]),
                                 f"inverse({arrows[f]}) o {arrows[f]} is not the identity"))
        if g.compose_idx(f, fi) != g.identity[g.cod[f]]:
            out.append(Violation("inverse-law", (arrows[f], arrows[fi]),
                                 f"{arrows[f]} o inverse({arrows[f]}) is not the identity"))

    by_cod: dict[int, list[int]] = {}
    for f in range(n):
        by_cod.setdefault(g.cod[f], []).append(f)
    for f in range(n):
        for h in by_cod.get(g.dom[f], ()):
            fh = g.compose_idx(f, h)
            for k in by_cod.get(g.dom[h], ()):
                hk = g.compose_idx(h, k)
                if g.compose_idx(fh, k) != g.compose_idx(f, hk):
                    out.append(Violation("associativity", (arrows[f], arrows[h], arrows[k]),
                                         f"({arrows[f]} o {arrows[h]}) o {arrows[k]} != "
                                         f"{arrows[f]} o ({arrows[h]} o {arrows[k]})"))
    return out


def is_transitive(g: FiniteGroupoid) -> bool:
    """True iff there is an arrow between every ordered pair of objects."""
    seen = {(g.dom[f], g.cod[f]) for f in range(len(g.arrows))}
    m = len(g.objects)
    return all((a, b) in seen for a in range(m) for b in range(m))


def gauge_bundle(g: FiniteGroupoid) -> GaugeBundle:
    """The bundle of vertex groups: fibre(a) = all arrows a -> a."""
    fibres = tuple(g.hom(o, o) for o in g.objects)
    return GaugeBundle(base=g.objects, fibres=fibres)


def conjugate(g: FiniteGroupoid, f: str, h: str) -> str:
    """Transport the endo-arrow h along f: returns f o h o f^-1."""
    fi, hi = g.arrow(f), g.arrow(h)
    if g.dom[hi] != g.cod[hi]:
        raise BookkeepingError(f"conjugate: {h} is not an endo-arrow")
    if g.dom[fi] != g.dom[hi]:
        raise BookkeepingError(
            f"conjugate: dom({f}) = {g.objects[g.dom[fi]]!r} "
            f"but {h} sits at {g.objects[g.dom[hi]]!r}"
        )
    return g.compose(f, g.compose(h, g.inverse_of(f)))


def extract_bundle(g: FiniteGroupoid, basepoint: str, base: Iterable[str]):
    """Cut a principal bundle out of a bi-pointed transitive groupoid.

    The total set is every arrow from ``basepoint`` into ``base``, the
    projection is codomain, the group is the vertex group at
    ``basepoint`` acting by precomposition.
    """
    from .groups import FiniteGroup
    from .torsor import PrincipalBundle

    base_names = sorted(set(base))
    if basepoint not in g.obj_index:
        raise ValueError(f"unknown object {basepoint!r}")
    for b in base_names:
        if b not in g.obj_index:
            raise ValueError(f"unknown object {b!r}")
    if basepoint in base_names:
        raise BookkeepingError("basepoint must not belong to the base")

    elems = g.hom(basepoint, basepoint)
    group = FiniteGroup(elems, [[g.compose(x, y) for y in elems] for x in elems])

    points: list[str] = []
    proj: dict[str, str] = {}
    for b in base_names:
        fibre = g.hom(basepoint, b)
        if not fibre:
            raise BookkeepingError(f"empty fibre over {b!r}: groupoid is not transitive enough")
        for x in fibre:
            points.append(x)
            proj[x] = b
    action = {(x, s): g.compose(x, s) for x in points for s in group.elements}
    return PrincipalBundle(points, base_names, group, proj, action)


# -- stock constructions used throughout the tests and docs ---------------


def codiscrete_groupoid(objects: Sequence[str]) -> FiniteGroupoid:
    """Exactly one arrow between every ordered pair of objects."""
    objs = sorted(objects)
    arrows = [ArrowSpec(f"{a}>{b}", a, b) for a in objs for b in objs]
    compose = {
        (f"{b}>{c}", f"{a}>{b}"): f"{a}>{c}"
        for a in objs for b in objs for c in objs
    }
    identities = {a: f"{a}>{a}" for a in objs}
    inverses = {f"{a}>{b}": f"{b}>{a}" for a in objs for b in objs}
    return FiniteGroupoid(objs, arrows, compose, identities, inverses)


def group_groupoid(group, obj: str = "*") -> FiniteGroupoid:
    """A group regarded as a one-object groupoid."""
    arrows = [ArrowSpec(s, obj, obj) for s in group.elements]
    compose = {(a, b): group.mul(a, b) for a in group.elements for b in group.elements}
    identities = {obj: group.unit}
    inverses = {s: group.inv(s) for s in group.elements}
    return FiniteGroupoid([obj], arrows, compose, identities, inverses)
