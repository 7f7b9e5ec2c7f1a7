"""Connections, gauge forms and curvature on finite principal bundles.

Everything is desk-scale and extensional: groups, groupoids, bundles and
neighbour relations are explicit tables, forms are value tables over
enumerated infinitesimal simplices, and the headline identities are
verified exhaustively rather than assumed.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .errors import (
    BookkeepingError,
    CeilingExceededError,
    CheckResult,
    FormPreconditionError,
    GroupAxiomError,
    InconsistencyError,
    InvalidModelError,
    NoncommutativeGroupError,
    SchemaError,
    Violation,
)
from .groups import FiniteGroup, cyclic, symmetric
from .groupoid import (
    ArrowSpec,
    FiniteGroupoid,
    GaugeBundle,
    codiscrete_groupoid,
    conjugate,
    extract_bundle,
    gauge_bundle,
    group_groupoid,
    is_transitive,
    validate_groupoid,
)
from .torsor import (
    FractionArrow,
    PrincipalBundle,
    act_left,
    arrow_compose,
    arrow_dom,
    arrow_cod,
    arrow_inverse,
    bundle_isomorphism,
    div,
    endo_arrows,
    envelope,
    gauge_of_bundle,
    gauge_to_group,
    gauge_to_group_counterexample,
    group_to_gauge,
    identity_arrow,
    make_arrow,
    tern,
    trivial_bundle,
    validate_bundle,
)
from .neighbourhood import (
    BundleWithNeighbours,
    Neighbourhood,
    enumerate_simplices,
    flat_spread,
    full_spread,
    trivial_model,
    twisted_model,
    validate_neighbour_bundle,
)
from .forms import (
    BaseForm,
    GaugeForm,
    GroupForm,
    base_form_to_gauge,
    check_transform,
    coboundary1,
    descend_invariant,
    gauge_form_to_base,
    hat_transform,
    inverse_form,
    is_edge_symmetric,
    is_equivariant,
    is_horizontal,
    product_form,
    pullback,
    transform_identity,
)
from .connection import (
    Connection,
    connection_difference,
    connection_from_arrows,
    connection_to_form,
    curvature,
    descend_curvature,
    enumerate_connections,
    find_flat,
    flat_connection,
    form_laws_hold,
    form_to_connection,
    verify_curvature_identity,
)

__version__ = "0.1.0"
