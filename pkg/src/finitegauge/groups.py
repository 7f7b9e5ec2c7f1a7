"""Finite groups presented by explicit multiplication tables.

Element names are sorted lexicographically at construction; every
canonical choice and enumeration in the library follows that order.
"""

from __future__ import annotations

import itertools
from array import array
from typing import Callable, Sequence

from .errors import GroupAxiomError, Violation


def group_table_violations(elements: Sequence[str], table: Sequence[Sequence[str]]) -> list[Violation]:
    """Check the group axioms on a named multiplication table.

    Returns one violation per broken axiom class, each with witnesses.
    """
    out: list[Violation] = []
    names = list(elements)
    if len(set(names)) != len(names):
        return [Violation("elements", tuple(names), "duplicate element names")]
    index = {a: i for i, a in enumerate(names)}
    n = len(names)
    if len(table) != n or any(len(row) != n for row in table):
        return [Violation("closure", (), f"table is not {n}x{n}")]
    for i, row in enumerate(table):
        for j, val in enumerate(row):
            if val not in index:
                return [Violation("closure", (names[i], names[j], str(val)),
                                  f"product {names[i]}*{names[j]} = {val!r} is not an element")]
    t = [[index[v] for v in row] for row in table]
    for i, j, k in itertools.product(range(n), repeat=3):
        if t[t[i][j]][k] != t[i][t[j][k]]:
            out.append(Violation("associativity", (names[i], names[j], names[k]),
                                 f"({names[i]}*{names[j]})*{names[k]} != {names[i]}*({names[j]}*{names[k]})"))
            break
    unit = None
    for e in range(n):
        if all(t[e][i] == i and t[i][e] == i for i in range(n)):
            unit = e
            break
    if unit is None:
        out.append(Violation("unit", (), "no two-sided unit"))
        return out
    for i in range(n):
        if not any(t[i][j] == unit and t[j][i] == unit for j in range(n)):
            out.append(Violation("inverses", (names[i],), f"{names[i]} has no two-sided inverse"))
    return out


class FiniteGroup:
    """A finite group on named elements, tables indexed in name order.

    ``mul`` composes right-to-left when elements are maps: ``mul(a, b)``
    applies ``b`` first.  Instances are immutable after construction.
    """

    def __init__(self, elements: Sequence[str], table: Sequence[Sequence[str]]):
        violations = group_table_violations(elements, table)
        if violations:
            raise GroupAxiomError(violations)
        order = sorted(range(len(elements)), key=lambda i: elements[i])
        names = tuple(elements[i] for i in order)
        old_index = {a: i for i, a in enumerate(elements)}
        new_of_old = {old: new for new, old in enumerate(order)}
        self.elements: tuple[str, ...] = names
        self.index: dict[str, int] = {a: i for i, a in enumerate(names)}
        self.table: tuple[tuple[int, ...], ...] = tuple(
            tuple(new_of_old[old_index[table[order[i]][order[j]]]] for j in range(len(names)))
            for i in range(len(names))
        )
        n = len(names)
        unit = next(e for e in range(n)
                    if all(self.table[e][i] == i and self.table[i][e] == i for i in range(n)))
        self.unit_idx: int = unit
        self.inv_idx: tuple[int, ...] = tuple(
            next(j for j in range(n) if self.table[i][j] == unit) for i in range(n)
        )
        self.is_commutative: bool = all(
            self.table[i][j] == self.table[j][i] for i in range(n) for j in range(i)
        )
        self.mul_flat: array = array("i", [v for row in self.table for v in row])
        self.inv_flat: array = array("i", self.inv_idx)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FiniteGroup({list(self.elements)!r})"

    @property
    def unit(self) -> str:
        return self.elements[self.unit_idx]

    def idx(self, a: str) -> int:
        try:
            return self.index[a]
        except KeyError:
            raise ValueError(f"unknown group element {a!r}") from None

    def mul(self, a: str, b: str) -> str:
        return self.elements[self.table[self.idx(a)][self.idx(b)]]

    def inv(self, a: str) -> str:
        return self.elements[self.inv_idx[self.idx(a)]]


def from_function(elements: Sequence[str], op: Callable[[str, str], str]) -> FiniteGroup:
    """Tabulate ``op`` over ``elements`` and build the group."""
    return FiniteGroup(elements, [[op(a, b) for b in elements] for a in elements])


def cyclic(n: int) -> FiniteGroup:
    """The cyclic group of order ``n``, written additively on names 0..n-1."""
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    width = len(str(n - 1))
    names = [str(i).zfill(width) for i in range(n)]
    table = [[names[(i + j) % n] for j in range(n)] for i in range(n)]
    return FiniteGroup(names, table)


def _cycle_name(perm: tuple[int, ...]) -> str:
    seen = [False] * len(perm)
    parts = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt]
        parts.append("(" + "".join(str(i + 1) for i in cyc) + ")")
    return "".join(parts) if parts else "e"


def symmetric(n: int) -> FiniteGroup:
    """The symmetric group on n letters, elements named by cycle notation."""
    if not 1 <= n <= 5:
        raise ValueError("symmetric(n) supports 1 <= n <= 5")
    perms = list(itertools.permutations(range(n)))
    name_of = {p: _cycle_name(p) for p in perms}
    perm_of = {nm: p for p, nm in name_of.items()}

    def compose(a: str, b: str) -> str:
        pa, pb = perm_of[a], perm_of[b]
        return name_of[tuple(pa[pb[i]] for i in range(n))]

    return from_function([name_of[p] for p in perms], compose)
