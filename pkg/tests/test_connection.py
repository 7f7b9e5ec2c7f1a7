import itertools
import random

import pytest

import finitegauge as fg
from finitegauge.connection import (
    connection_count,
    enumerate_connections,
    find_flat,
    is_flat,
    random_connection,
)
from finitegauge.forms import GaugeForm, GroupForm
from finitegauge.torsor import FractionArrow


def holonomy_oracle(bn, conn, simplex):
    """Independent holonomy: chase the anchor point through act_left."""
    b = bn.bundle
    a0, a1, a2 = simplex
    x = b.points[b.fibre_min[b.base_index[a0]]]
    x = fg.act_left(b, conn.value(a2, a0), x)
    x = fg.act_left(b, conn.value(a1, a2), x)
    x = fg.act_left(b, conn.value(a0, a1), x)
    return fg.make_arrow(b, x, b.points[b.fibre_min[b.base_index[a0]]])


def test_connection_value_orientation(triangle_z2):
    conn = fg.flat_connection(triangle_z2)
    f = conn.value("a", "b")
    assert fg.arrow_dom(triangle_z2.bundle, f) == "b"
    assert fg.arrow_cod(triangle_z2.bundle, f) == "a"
    assert conn.value("b", "a") == fg.arrow_inverse(triangle_z2.bundle, f)
    assert conn.value("a", "a") == fg.identity_arrow(triangle_z2.bundle, "a")


def test_connection_from_arrows_accepts_either_orientation(triangle_z2):
    bn = triangle_z2
    one = fg.connection_from_arrows(bn, {
        ("a", "b"): FractionArrow("a|1", "b|0"),
        ("b", "c"): FractionArrow("b|0", "c|0"),
        ("c", "a"): FractionArrow("c|0", "a|0"),
    })
    other = fg.connection_from_arrows(bn, {
        ("b", "a"): FractionArrow("b|1", "a|0"),  # the inverse arrow
        ("b", "c"): FractionArrow("b|0", "c|0"),
        ("a", "c"): FractionArrow("a|0", "c|0"),
    })
    assert one == other


def test_connection_from_arrows_rejects_bad_input(triangle_z2):
    bn = triangle_z2
    with pytest.raises(fg.BookkeepingError, match="no arrow"):
        fg.connection_from_arrows(bn, {("a", "b"): FractionArrow("a|0", "b|0")})
    with pytest.raises(fg.BookkeepingError, match="fibre"):
        fg.connection_from_arrows(bn, {
            ("a", "b"): FractionArrow("b|0", "a|0"),
            ("b", "c"): FractionArrow("b|0", "c|0"),
            ("c", "a"): FractionArrow("c|0", "a|0"),
        })
    with pytest.raises(fg.BookkeepingError, match="identity"):
        fg.connection_from_arrows(bn, {
            ("a", "a"): FractionArrow("a|1", "a|0"),
            ("a", "b"): FractionArrow("a|0", "b|0"),
            ("b", "c"): FractionArrow("b|0", "c|0"),
            ("c", "a"): FractionArrow("c|0", "a|0"),
        })


def test_connection_form_on_trivial_bundle_is_division(k2, z2):
    bn = fg.trivial_model(k2, z2)
    conn = fg.flat_connection(bn)
    omega = fg.connection_to_form(bn, conn)
    G = bn.bundle.group
    for g, h in itertools.product(G.elements, repeat=2):
        assert omega.value((f"a|{g}", f"b|{h}")) == G.mul(G.inv(g), h)
    assert omega.value(("a|0", "b|1")) == "1"


def test_connection_form_diagonal_edge_case(triangle_z2):
    # over a degenerate base edge the transport is the identity class,
    # so the form reads off the fibre displacement
    bn = triangle_z2
    conn = fg.flat_connection(bn)
    omega = fg.connection_to_form(bn, conn)
    for u in bn.bundle.points:
        for g in bn.bundle.group.elements:
            assert omega.value((u, bn.bundle.act_of(u, g))) == g


def test_connection_form_is_edge_symmetric(golden):
    for name, bn in golden:
        conn = fg.flat_connection(bn)
        omega = fg.connection_to_form(bn, conn)
        assert fg.is_edge_symmetric(bn, omega).ok, name


def test_defining_equation_pointwise(triangle_s3):
    # u . w(u, v) equals the transported v on every neighbour pair
    bn = triangle_s3
    rng = random.Random(2)
    conn = random_connection(bn, rng)
    omega = fg.connection_to_form(bn, conn)
    b = bn.bundle
    for (u, v) in bn.p_simplex_names(1):
        lhs = b.act_of(u, omega.value((u, v)))
        rhs = fg.act_left(b, conn.value(b.proj_of(u), b.proj_of(v)), v)
        assert lhs == rhs


def test_translation_laws_hold_for_connection_forms(golden):
    for name, bn in golden:
        rng = random.Random(4)
        for _ in range(3):
            omega = fg.connection_to_form(bn, random_connection(bn, rng))
            assert fg.form_laws_hold(bn, omega).ok, name


def test_bijection_exhaustive_on_small_models(golden):
    for name, bn in golden:
        if connection_count(bn) > 300:
            continue
        for conn in enumerate_connections(bn):
            omega = fg.connection_to_form(bn, conn)
            back = fg.form_to_connection(bn, omega)
            assert back == conn, name
            assert fg.connection_to_form(bn, back) == omega, name


def test_form_to_connection_refuses_corrupted_forms(triangle_s3):
    bn = triangle_s3
    conn = random_connection(bn, random.Random(6))
    omega = fg.connection_to_form(bn, conn)
    # break edge symmetry on one off-diagonal edge
    vals = omega.values[:]
    sx = bn.p_simplices(1)
    row = next(r for r in range(bn.p_rows(1)) if sx[2 * r] != sx[2 * r + 1])
    vals[row] = (vals[row] + 1) % bn.nG
    with pytest.raises(fg.FormPreconditionError):
        fg.form_to_connection(bn, GroupForm(bn, 1, vals))


def test_form_to_connection_refuses_law_breaking_symmetric_form(triangle_s3):
    bn = triangle_s3
    G = bn.bundle.group
    # edge-symmetric but constant nonunit off the diagonal: breaks the laws
    mapping = {}
    for (u, v) in bn.p_simplex_names(1):
        mapping[(u, v)] = G.unit if u == v else "(12)"
    omega = GroupForm.from_mapping(bn, 1, mapping)
    assert fg.is_edge_symmetric(bn, omega).ok
    with pytest.raises(fg.FormPreconditionError) as err:
        fg.form_to_connection(bn, omega)
    assert err.value.witness is not None


def test_constant_unit_form_on_flat_model_gives_flat_connection(k3, z2):
    bn, _ = fg.twisted_model(k3, z2, fg.flat_spread(k3, z2))
    omega = GroupForm.constant(bn, 1)
    conn = fg.form_to_connection(bn, omega)
    assert conn == fg.flat_connection(bn)
    assert fg.connection_to_form(bn, conn) == omega


def test_difference_of_equal_connections_is_identity(triangle_z2):
    conn = fg.flat_connection(triangle_z2)
    diff = fg.connection_difference(triangle_z2, conn, conn)
    assert diff == GaugeForm.constant_identity(triangle_z2, 1)


def test_difference_nontrivial_exactly_on_twisted_edge(triangle_z2):
    bn = triangle_z2
    flat = fg.flat_connection(bn)
    twisted = fg.connection_from_arrows(bn, {
        ("a", "b"): FractionArrow("a|1", "b|0"),
        ("b", "c"): FractionArrow("b|0", "c|0"),
        ("c", "a"): FractionArrow("c|0", "a|0"),
    })
    diff = fg.connection_difference(bn, twisted, flat)
    identity_rows = {s: arrow.num == arrow.den for s, arrow in diff.items()}
    for (x, y), is_id in identity_rows.items():
        assert is_id == ({x, y} != {"a", "b"})


def test_difference_identity_matches_form_quotient(golden):
    for name, bn in golden:
        rng = random.Random(8)
        for _ in range(3):
            c1, c2 = random_connection(bn, rng), random_connection(bn, rng)
            lhs = fg.hat_transform(bn, fg.connection_difference(bn, c1, c2))
            rhs = fg.product_form(
                bn, fg.connection_to_form(bn, c1),
                fg.inverse_form(bn, fg.connection_to_form(bn, c2)))
            assert lhs == rhs, name


def test_flat_connection_curvature_is_identity(golden):
    for name, bn in golden:
        r = fg.curvature(bn, fg.flat_connection(bn))
        assert all(a.num == a.den for _s, a in r.items()), name


def test_curvature_frozen_holonomy_example(holonomy_example):
    bn, flat, twisted = holonomy_example
    r = fg.curvature(bn, twisted)
    assert r.value(("a", "b", "c")) == FractionArrow("a|1", "a|0")
    assert fg.curvature(bn, flat).value(("a", "b", "c")) == FractionArrow("a|0", "a|0")
    # degenerate simplices cancel
    assert r.value(("a", "a", "c")) == FractionArrow("a|0", "a|0")


def test_curvature_matches_act_left_oracle(triangle_s3):
    bn = triangle_s3
    rng = random.Random(10)
    for _ in range(5):
        conn = random_connection(bn, rng)
        r = fg.curvature(bn, conn)
        for simplex, arrow in r.items():
            assert arrow == holonomy_oracle(bn, conn, simplex)


def test_curvature_base_vertex_rotation_is_conjugation(triangle_s3):
    bn = triangle_s3
    b = bn.bundle
    rng = random.Random(12)
    conn = random_connection(bn, rng)
    r = fg.curvature(bn, conn)
    for simplex, arrow in r.items():
        a0, a1, a2 = simplex
        rotated = r.value((a1, a2, a0))
        transport = conn.value(a1, a0)  # carries the fibre over a0 to a1
        conjugated = fg.arrow_compose(
            b, transport, fg.arrow_compose(b, arrow, fg.arrow_inverse(b, transport)))
        assert rotated == conjugated


def test_curvature_identity_on_frozen_example(holonomy_example):
    bn, flat, twisted = holonomy_example
    for conn in (flat, twisted):
        rep = fg.verify_curvature_identity(bn, conn)
        assert rep.ok
    omega = fg.connection_to_form(bn, twisted)
    d = fg.coboundary1(bn, omega)
    assert d.value(("a|0", "b|0", "c|0")) == "1"
    lifted = fg.hat_transform(bn, fg.curvature(bn, twisted))
    assert lifted == d


def test_curvature_identity_randomised_s3(triangle_s3):
    rng = random.Random(14)
    for _ in range(10):
        rep = fg.verify_curvature_identity(triangle_s3, random_connection(triangle_s3, rng))
        assert rep.ok
        assert rep.coboundary_horizontal.ok and rep.coboundary_equivariant.ok


def test_descend_curvature_examples(k3, z3, holonomy_example):
    flat_z3 = fg.trivial_model(k3, z3)
    base = fg.descend_curvature(flat_z3, fg.flat_connection(flat_z3))
    assert all(v == "0" for _s, v in base.items())

    bn, _flat, twisted = holonomy_example
    assert fg.descend_curvature(bn, twisted).value(("a", "b", "c")) == "1"


def test_descend_curvature_matches_collapsed_holonomy(golden):
    for name, bn in golden:
        if not bn.bundle.group.is_commutative:
            with pytest.raises(fg.NoncommutativeGroupError):
                fg.descend_curvature(bn, fg.flat_connection(bn))
            continue
        rng = random.Random(16)
        for _ in range(3):
            conn = random_connection(bn, rng)
            base = fg.descend_curvature(bn, conn)
            collapsed = fg.gauge_form_to_base(bn, fg.curvature(bn, conn))
            assert base == collapsed, name
            assert fg.pullback(bn, base) == fg.coboundary1(
                bn, fg.connection_to_form(bn, conn)), name


def test_enumerate_connection_counts(k2, k3, z2):
    bn2 = fg.trivial_model(k2, z2)
    assert connection_count(bn2) == 2
    assert len(enumerate_connections(bn2)) == 2
    bn3 = fg.trivial_model(k3, z2)
    assert connection_count(bn3) == 8
    conns = enumerate_connections(bn3)
    assert len(conns) == 8
    assert len({tuple(c.nums) for c in conns}) == 8


def test_every_connection_on_an_edge_is_flat(k2, z2):
    # no nondegenerate triangles over two points: holonomy always cancels
    bn = fg.trivial_model(k2, z2)
    assert all(is_flat(bn, c) for c in enumerate_connections(bn))


def test_half_of_triangle_connections_are_flat(triangle_z2):
    flats = find_flat(triangle_z2)
    assert len(flats) == 4
    # brute-force oracle over all eight
    expected = [c for c in enumerate_connections(triangle_z2)
                if all(a.num == a.den for _s, a in fg.curvature(triangle_z2, c).items())]
    assert [tuple(c.nums) for c in flats] == [tuple(c.nums) for c in expected]


def test_enumeration_ceiling(triangle_s3):
    with pytest.raises(fg.CeilingExceededError) as err:
        enumerate_connections(triangle_s3, ceiling=10)
    assert err.value.count == 216
    assert enumerate_connections(triangle_s3, ceiling=216) is not None


def test_connections_are_bound_to_their_model(k2, z2):
    bn1 = fg.trivial_model(k2, z2)
    bn2 = fg.trivial_model(k2, z2)
    conn = fg.flat_connection(bn1)
    with pytest.raises(fg.BookkeepingError):
        fg.connection_to_form(bn2, conn)
