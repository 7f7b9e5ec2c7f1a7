"""Group-valued forms on the total space and gauge-valued forms on the base.

Forms are stored extensionally: one value per enumerated infinitesimal
simplex, aligned with the model's canonical simplex order.  Degenerate
simplices are carried like any other; nothing here forces a form to
vanish on them.
"""

from __future__ import annotations

import random
from array import array
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from ._kernels import impl as K
from .errors import (
    BookkeepingError,
    CheckResult,
    FormPreconditionError,
    InconsistencyError,
    NoncommutativeGroupError,
)
from .neighbourhood import BundleWithNeighbours
from .torsor import FractionArrow

MAX_FORM_DEGREE = 2


def _check_degree(k: int):
    if not 0 <= k <= MAX_FORM_DEGREE:
        raise ValueError(f"form degree must be between 0 and {MAX_FORM_DEGREE}")


def _same_model(form, bn: BundleWithNeighbours):
    if form.model is not bn:
        raise BookkeepingError("form belongs to a different model")


@dataclass(eq=False)
class GroupForm:
    """A group-valued k-form on the total space."""

    model: BundleWithNeighbours
    degree: int
    values: array  # group element index per row of model.p_simplices(degree)

    def __post_init__(self):
        _check_degree(self.degree)
        if len(self.values) != self.model.p_rows(self.degree):
            raise ValueError("value table does not match the simplex table")

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupForm) and self.model is other.model
                and self.degree == other.degree and self.values == other.values)

    @classmethod
    def constant(cls, bn: BundleWithNeighbours, degree: int, element: str | None = None) -> "GroupForm":
        g = bn.bundle.group.unit_idx if element is None else bn.bundle.group.idx(element)
        return cls(bn, degree, array("i", [g]) * bn.p_rows(degree))

    @classmethod
    def from_mapping(cls, bn: BundleWithNeighbours, degree: int,
                     mapping: Mapping[tuple[str, ...], str]) -> "GroupForm":
        _check_degree(degree)
        simplices = bn.p_simplex_names(degree)
        if set(mapping.keys()) != set(simplices):
            missing = set(simplices) - set(mapping.keys())
            extra = set(mapping.keys()) - set(simplices)
            raise ValueError(
                f"form domain mismatch: {len(missing)} simplices missing, {len(extra)} unknown")
        G = bn.bundle.group
        return cls(bn, degree, array("i", [G.idx(mapping[s]) for s in simplices]))

    def value(self, simplex: Sequence[str]) -> str:
        return self.model.bundle.group.elements[self.values[self.model.p_row_of(simplex)]]

    def items(self) -> Iterator[tuple[tuple[str, ...], str]]:
        G = self.model.bundle.group
        for names, v in zip(self.model.p_simplex_names(self.degree), self.values):
            yield names, G.elements[v]


@dataclass(eq=False)
class BaseForm:
    """A group-valued k-form on the base."""

    model: BundleWithNeighbours
    degree: int
    values: array  # group element index per row of model.m_simplices(degree)

    def __post_init__(self):
        _check_degree(self.degree)
        if len(self.values) != self.model.m_rows(self.degree):
            raise ValueError("value table does not match the simplex table")

    def __eq__(self, other) -> bool:
        return (isinstance(other, BaseForm) and self.model is other.model
                and self.degree == other.degree and self.values == other.values)

    @classmethod
    def constant(cls, bn: BundleWithNeighbours, degree: int, element: str | None = None) -> "BaseForm":
        g = bn.bundle.group.unit_idx if element is None else bn.bundle.group.idx(element)
        return cls(bn, degree, array("i", [g]) * bn.m_rows(degree))

    @classmethod
    def from_mapping(cls, bn: BundleWithNeighbours, degree: int,
                     mapping: Mapping[tuple[str, ...], str]) -> "BaseForm":
        _check_degree(degree)
        simplices = bn.m_simplex_names(degree)
        if set(mapping.keys()) != set(simplices):
            raise ValueError("form domain must be exactly the base simplices")
        G = bn.bundle.group
        return cls(bn, degree, array("i", [G.idx(mapping[s]) for s in simplices]))

    def value(self, simplex: Sequence[str]) -> str:
        return self.model.bundle.group.elements[self.values[self.model.m_row_of(simplex)]]

    def items(self) -> Iterator[tuple[tuple[str, ...], str]]:
        G = self.model.bundle.group
        for names, v in zip(self.model.m_simplex_names(self.degree), self.values):
            yield names, G.elements[v]


@dataclass(eq=False)
class GaugeForm:
    """A k-form on the base valued in endo fraction classes at the first vertex."""

    model: BundleWithNeighbours
    degree: int
    nums: array
    dens: array

    def __post_init__(self):
        _check_degree(self.degree)
        rows = self.model.m_rows(self.degree)
        if len(self.nums) != rows or len(self.dens) != rows:
            raise ValueError("value table does not match the simplex table")

    def __eq__(self, other) -> bool:
        return (isinstance(other, GaugeForm) and self.model is other.model
                and self.degree == other.degree
                and self.nums == other.nums and self.dens == other.dens)

    @classmethod
    def constant_identity(cls, bn: BundleWithNeighbours, degree: int) -> "GaugeForm":
        _check_degree(degree)
        sx = bn.m_simplices(degree)
        k = degree
        nums = array("i", [0]) * bn.m_rows(degree)
        for row in range(bn.m_rows(degree)):
            nums[row] = bn.bundle.fibre_min[sx[row * (k + 1)]]
        return cls(bn, degree, nums, array("i", nums))

    @classmethod
    def from_mapping(cls, bn: BundleWithNeighbours, degree: int,
                     mapping: Mapping[tuple[str, ...], FractionArrow]) -> "GaugeForm":
        _check_degree(degree)
        simplices = bn.m_simplex_names(degree)
        if set(mapping.keys()) != set(simplices):
            raise ValueError("form domain must be exactly the base simplices")
        b = bn.bundle
        nums = array("i", [0]) * len(simplices)
        dens = array("i", [0]) * len(simplices)
        for row, s in enumerate(simplices):
            arrow = mapping[s]
            ni, di = b.pidx(arrow.num), b.pidx(arrow.den)
            if b.proj[ni] != b.proj[di] or b.base[b.proj[ni]] != s[0]:
                raise BookkeepingError(
                    f"value {arrow} at {s} is not an endo class at {s[0]!r}")
            d0 = b.fibre_min[b.proj[di]]
            g = b.div_flat[di * len(b.points) + d0]
            nums[row] = b.act_idx(ni, g)
            dens[row] = d0
        return cls(bn, degree, nums, dens)

    def value(self, simplex: Sequence[str]) -> FractionArrow:
        row = self.model.m_row_of(simplex)
        pts = self.model.bundle.points
        return FractionArrow(pts[self.nums[row]], pts[self.dens[row]])

    def items(self) -> Iterator[tuple[tuple[str, ...], FractionArrow]]:
        pts = self.model.bundle.points
        for names, n, d in zip(self.model.m_simplex_names(self.degree), self.nums, self.dens):
            yield names, FractionArrow(pts[n], pts[d])


# -- random forms (used by the sampled verification suites) ------------------


def random_base_form(bn: BundleWithNeighbours, degree: int, rng: random.Random) -> BaseForm:
    vals = array("i", [rng.randrange(bn.nG) for _ in range(bn.m_rows(degree))])
    return BaseForm(bn, degree, vals)


def random_gauge_form(bn: BundleWithNeighbours, degree: int, rng: random.Random) -> GaugeForm:
    sx = bn.m_simplices(degree)
    k = degree
    b = bn.bundle
    rows = bn.m_rows(degree)
    nums = array("i", [0]) * rows
    dens = array("i", [0]) * rows
    for row in range(rows):
        a0 = sx[row * (k + 1)]
        x0 = b.fibre_min[a0]
        nums[row] = b.act_idx(x0, rng.randrange(bn.nG))
        dens[row] = x0
    return GaugeForm(bn, degree, nums, dens)


# -- predicates ---------------------------------------------------------------


def is_horizontal(bn: BundleWithNeighbours, theta: GroupForm) -> CheckResult:
    """Value unchanged under fibre shifts of every vertex but the first.

    Shift tuples that break the simplex do not count; the quantifier runs
    over shifts that leave an infinitesimal simplex.
    """
    _same_model(theta, bn)
    k = theta.degree
    w = K.horizontal_witness(k, bn.nP, bn.nG, bn.p_simplices(k), bn.p_pos(k),
                             bn.p_adj, bn.bundle.act_flat, theta.values)
    if w is None:
        return CheckResult(True)
    row, gs = w
    simplex = bn.p_simplex_names(k)[row]
    G = bn.bundle.group
    b = bn.bundle
    shifted = [simplex[0]] + [
        b.points[b.act_idx(b.pidx(simplex[i + 1]), gs[i])] for i in range(k)
    ]
    return CheckResult(False, {
        "simplex": list(simplex),
        "shifts": [G.elements[g] for g in gs],
        "value": theta.value(simplex),
        "shifted_value": theta.value(shifted),
    })


def is_equivariant(bn: BundleWithNeighbours, theta: GroupForm) -> CheckResult:
    """Diagonal shift by g conjugates the value by g, for every g."""
    _same_model(theta, bn)
    k = theta.degree
    G = bn.bundle.group
    w = K.equivariant_witness(k, bn.nP, bn.nG, bn.p_simplices(k), bn.p_pos(k),
                              bn.bundle.act_flat, G.mul_flat, G.inv_flat, theta.values)
    if w is None:
        return CheckResult(True)
    row, g = w
    simplex = bn.p_simplex_names(k)[row]
    return CheckResult(False, {
        "simplex": list(simplex),
        "shift": G.elements[g],
        "value": theta.value(simplex),
    })


def is_edge_symmetric(bn: BundleWithNeighbours, omega: GroupForm) -> CheckResult:
    """Unit on degenerate edges and inverse under edge reversal."""
    _same_model(omega, bn)
    if omega.degree != 1:
        raise BookkeepingError("edge symmetry is a property of 1-forms")
    G = bn.bundle.group
    sx = bn.p_simplices(1)
    pos = bn.p_pos(1)
    nP = bn.nP
    for row in range(bn.p_rows(1)):
        u, v = sx[row * 2], sx[row * 2 + 1]
        val = omega.values[row]
        if u == v and val != G.unit_idx:
            return CheckResult(False, {
                "simplex": [bn.bundle.points[u]] * 2,
                "value": G.elements[val],
                "expected": G.unit,
            })
        back = omega.values[pos[v * nP + u]]
        if back != G.inv_idx[val]:
            return CheckResult(False, {
                "simplex": [bn.bundle.points[u], bn.bundle.points[v]],
                "value": G.elements[val],
                "reverse_value": G.elements[back],
            })
    return CheckResult(True)


# -- pullback / descent -------------------------------------------------------


def pullback(bn: BundleWithNeighbours, theta: BaseForm) -> GroupForm:
    """Precompose a base form with the projection, vertexwise."""
    _same_model(theta, bn)
    k = theta.degree
    vals = K.pullback_values(k, bn.nP, bn.nM, bn.p_simplices(k), bn.proj_arr,
                             bn.m_pos(k), theta.values)
    return GroupForm(bn, k, vals)


def descend_invariant(bn: BundleWithNeighbours, theta: GroupForm) -> BaseForm:
    """Write a horizontal invariant form as the pullback of a base form.

    Needs a commutative group (equivariance = invariance there) and the
    two predicates; refuses with the witness otherwise.  Lift
    independence is verified exhaustively even though the preconditions
    imply it.
    """
    _same_model(theta, bn)
    if not bn.bundle.group.is_commutative:
        raise NoncommutativeGroupError(
            "descending a form to the base needs a commutative group")
    hor = is_horizontal(bn, theta)
    if not hor:
        raise FormPreconditionError("form is not horizontal", hor.witness)
    eqv = is_equivariant(bn, theta)
    if not eqv:
        raise FormPreconditionError("form is not equivariant", eqv.witness)
    k = theta.degree
    vals, conflict = K.descend_values(k, bn.nP, bn.nM, bn.p_simplices(k),
                                      bn.proj_arr, bn.m_pos(k), bn.m_rows(k),
                                      theta.values)
    if conflict is not None:
        raise InconsistencyError("lift-dependent value while descending", _conflict_witness(bn, k, conflict))
    return BaseForm(bn, k, vals)


def _conflict_witness(bn: BundleWithNeighbours, k: int, conflict: tuple[int, int]) -> dict:
    mrow, prow = conflict
    witness: dict = {}
    if mrow >= 0:
        witness["base_simplex"] = list(bn.m_simplex_names(k)[mrow])
    if prow >= 0:
        witness["lift"] = list(bn.p_simplex_names(k)[prow])
    return witness


# -- the hat / check transforms ----------------------------------------------


def check_transform(bn: BundleWithNeighbours, theta: GroupForm) -> GaugeForm:
    """Descend a horizontal equivariant form to gauge classes [u0 . value, u0].

    The canonical lift defines each class and every other lift is
    compared against it, so a form smuggled past the predicates by a
    broken model is caught with a witness.
    """
    _same_model(theta, bn)
    hor = is_horizontal(bn, theta)
    if not hor:
        raise FormPreconditionError("form is not horizontal", hor.witness)
    eqv = is_equivariant(bn, theta)
    if not eqv:
        raise FormPreconditionError("form is not equivariant", eqv.witness)
    k = theta.degree
    nums, dens, conflict = K.check_values(
        k, bn.nP, bn.nM, bn.nG, bn.p_simplices(k), bn.proj_arr, bn.m_pos(k),
        bn.m_rows(k), bn.fibre_min_arr, bn.bundle.act_flat, bn.bundle.div_flat,
        theta.values)
    if conflict is not None:
        raise InconsistencyError("lift-dependent gauge class", _conflict_witness(bn, k, conflict))
    return GaugeForm(bn, k, nums, dens)


def hat_transform(bn: BundleWithNeighbours, alpha: GaugeForm) -> GroupForm:
    """Lift a gauge form to the group-valued form div(u0, alpha . u0)."""
    _same_model(alpha, bn)
    k = alpha.degree
    vals = K.hat_values(k, bn.nP, bn.nM, bn.nG, bn.p_simplices(k), bn.proj_arr,
                        bn.m_pos(k), alpha.nums, alpha.dens,
                        bn.bundle.act_flat, bn.bundle.div_flat)
    return GroupForm(bn, k, vals)


def transform_identity(bn: BundleWithNeighbours, alpha: GaugeForm,
                       hat: GroupForm | None = None) -> CheckResult:
    """Pointwise law tying the two transforms: u0 . hat(a) = (a over image) . u0."""
    _same_model(alpha, bn)
    if hat is None:
        hat = hat_transform(bn, alpha)
    _same_model(hat, bn)
    if hat.degree != alpha.degree:
        raise BookkeepingError("degree mismatch between the gauge form and its lift")
    k = alpha.degree
    row = K.transform_identity_witness(
        k, bn.nP, bn.nM, bn.nG, bn.p_simplices(k), bn.proj_arr, bn.m_pos(k),
        alpha.nums, alpha.dens, hat.values, bn.bundle.act_flat, bn.bundle.div_flat)
    if row is None:
        return CheckResult(True)
    return CheckResult(False, {"simplex": list(bn.p_simplex_names(k)[row])})


# -- coboundary and pointwise algebra ----------------------------------------


def coboundary1(bn: BundleWithNeighbours, omega: GroupForm) -> GroupForm:
    """The 2-form w(x0,x1) w(x1,x2) w(x2,x0) of a 1-form."""
    _same_model(omega, bn)
    if omega.degree != 1:
        raise BookkeepingError("the coboundary is defined on 1-forms only")
    vals = K.coboundary_values(bn.nP, bn.nG, bn.p_simplices(2), bn.p_pos(1),
                               omega.values, bn.bundle.group.mul_flat)
    return GroupForm(bn, 2, vals)


def product_form(bn: BundleWithNeighbours, left: GroupForm, right: GroupForm) -> GroupForm:
    """Pointwise product left(s) right(s) of same-degree forms."""
    _same_model(left, bn)
    _same_model(right, bn)
    if left.degree != right.degree:
        raise BookkeepingError("pointwise product needs equal degrees")
    mul = bn.bundle.group.mul_flat
    nG = bn.nG
    vals = array("i", [mul[a * nG + b] for a, b in zip(left.values, right.values)])
    return GroupForm(bn, left.degree, vals)


def inverse_form(bn: BundleWithNeighbours, form: GroupForm) -> GroupForm:
    """Pointwise inverse."""
    _same_model(form, bn)
    inv = bn.bundle.group.inv_flat
    return GroupForm(bn, form.degree, array("i", [inv[v] for v in form.values]))


# -- the commutative identification, formwise ---------------------------------


def gauge_form_to_base(bn: BundleWithNeighbours, alpha: GaugeForm) -> BaseForm:
    """Collapse gauge classes to group values div(den, num); commutative only."""
    _same_model(alpha, bn)
    if not bn.bundle.group.is_commutative:
        raise NoncommutativeGroupError(
            "identifying gauge classes with group elements needs a commutative group")
    nP = bn.nP
    divt = bn.bundle.div_flat
    vals = array("i", [divt[d * nP + n] for n, d in zip(alpha.nums, alpha.dens)])
    return BaseForm(bn, alpha.degree, vals)


def base_form_to_gauge(bn: BundleWithNeighbours, theta: BaseForm) -> GaugeForm:
    """Spread group values into endo classes [x0 . value, x0] at the first vertex."""
    _same_model(theta, bn)
    k = theta.degree
    sx = bn.m_simplices(k)
    b = bn.bundle
    rows = bn.m_rows(k)
    nums = array("i", [0]) * rows
    dens = array("i", [0]) * rows
    for row in range(rows):
        x0 = b.fibre_min[sx[row * (k + 1)]]
        nums[row] = b.act_idx(x0, theta.values[row])
        dens[row] = x0
    return GaugeForm(bn, k, nums, dens)
