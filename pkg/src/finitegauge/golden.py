"""The stock model catalogue the verification suites run over.

Sixteen models: trivial and unit-spread (flat-twisted) bundles over the
complete base on two and three points, with the four stock groups.  All
of them validate; the flat-twisted ones exercise a total-space relation
strictly smaller than the trivial one.
"""

from __future__ import annotations

from .connection import Connection, connection_from_arrows
from .errors import InconsistencyError
from .groups import FiniteGroup, cyclic, symmetric
from .neighbourhood import (
    BundleWithNeighbours,
    Neighbourhood,
    flat_spread,
    trivial_model,
    twisted_model,
)
from .torsor import FractionArrow


def group_palette() -> list[tuple[str, FiniteGroup]]:
    return [("z2", cyclic(2)), ("z3", cyclic(3)), ("z4", cyclic(4)),
            ("s3", symmetric(3))]


def golden_models() -> list[tuple[str, BundleWithNeighbours]]:
    """(name, model) pairs in a fixed order; every model validates."""
    out = []
    for points in (("a", "b"), ("a", "b", "c")):
        m = Neighbourhood.codiscrete(points)
        for gname, group in group_palette():
            out.append((f"trivial-k{len(points)}-{gname}", trivial_model(m, group)))
            bn, report = twisted_model(m, group, flat_spread(m, group))
            if report:
                raise InconsistencyError("a unit-spread model failed validation",
                                         report[0].as_record())
            out.append((f"flattwist-k{len(points)}-{gname}", bn))
    return out


def triangle_holonomy_example() -> tuple[BundleWithNeighbours, Connection, Connection]:
    """The two-element-group triangle with one twisted edge.

    Returns the model, its flat connection, and the connection whose
    transport back from c to a is shifted by the nontrivial element; the
    latter has holonomy class [a|1, a|0] around (a, b, c).
    """
    m = Neighbourhood.codiscrete(("a", "b", "c"))
    bn = trivial_model(m, cyclic(2))
    flat = connection_from_arrows(bn, {
        ("a", "b"): FractionArrow("a|0", "b|0"),
        ("b", "c"): FractionArrow("b|0", "c|0"),
        ("c", "a"): FractionArrow("c|0", "a|0"),
    })
    twisted = connection_from_arrows(bn, {
        ("a", "b"): FractionArrow("a|0", "b|0"),
        ("b", "c"): FractionArrow("b|0", "c|0"),
        ("c", "a"): FractionArrow("c|1", "a|0"),
    })
    return bn, flat, twisted
