import itertools

import pytest

import finitegauge as fg
from finitegauge.neighbourhood import flat_spread, full_spread


def test_relation_closure_and_pairs():
    n = fg.Neighbourhood(["b", "a", "c"], [("a", "b")])
    assert n.carrier == ("a", "b", "c")
    assert n.related("a", "a") and n.related("b", "a")
    assert not n.related("a", "c")
    assert n.pairs() == [("a", "b")]


def test_enumerate_simplices_counts(k3):
    assert len(fg.enumerate_simplices(k3, 0)) == 3
    assert len(fg.enumerate_simplices(k3, 1)) == 9
    assert len(fg.enumerate_simplices(k3, 2)) == 27
    discrete = fg.Neighbourhood.discrete(["a", "b", "c"])
    assert fg.enumerate_simplices(discrete, 1) == [
        ("a", "a"), ("b", "b"), ("c", "c")]


def test_enumerate_order_and_permutation_closure():
    n = fg.Neighbourhood(["a", "b", "c"], [("a", "b"), ("b", "c")])
    simplices = fg.enumerate_simplices(n, 1)
    assert simplices == sorted(simplices)
    as_set = set(simplices)
    for s in simplices:
        for p in itertools.permutations(s):
            assert p in as_set
    for x in n.carrier:
        assert (x, x) in as_set


def test_total_pairs_count_of_trivial_model(k2, z2):
    bn = fg.trivial_model(k2, z2)
    assert bn.p_rows(1) == 16


def test_trivial_model_validates_to_max_lift_three(k3, z2):
    bn = fg.trivial_model(k3, z2, max_lift=3)
    assert fg.validate_neighbour_bundle(bn) == []


def test_projection_of_total_simplices_lands_in_base_simplices(golden):
    for _name, bn in golden:
        base_simplices = set(bn.m_simplex_names(2))
        for s in bn.p_simplex_names(2):
            image = tuple(bn.bundle.proj_of(x) for x in s)
            assert image in base_simplices


def test_submersion_violation_when_total_relation_is_diagonal(k2, z2):
    bundle = fg.trivial_bundle(["a", "b"], z2)
    diag = fg.Neighbourhood.discrete(bundle.points)
    bn = fg.BundleWithNeighbours(bundle, k2, diag)
    rules = {v.rule for v in fg.validate_neighbour_bundle(bn)}
    assert "open-submersion" in rules


def test_group_invariance_violation_detected(k2, z2):
    bundle = fg.trivial_bundle(["a", "b"], z2)
    full = fg.trivial_model(k2, z2).total_nbhd
    # drop one cross pair but not its orbit
    broken = full.without_pairs([("a|0", "b|0")])
    bn = fg.BundleWithNeighbours(bundle, k2, broken)
    rules = {v.rule for v in fg.validate_neighbour_bundle(bn)}
    assert "action-preserves-relation" in rules


def _assert_lift_witness_is_genuine(bad, lifts):
    witness = lifts[0].witnesses
    simplex, x0 = witness[:-1], witness[-1]
    # brute-force oracle: no simplex over this one starts at the witness point
    b = bad.bundle
    fibres = [b.fibre(a) for a in simplex]
    found = False
    for candidate in itertools.product(*fibres):
        if candidate[0] != x0:
            continue
        if all(bad.total_nbhd.related(p, q)
               for p, q in itertools.combinations(candidate, 2)):
            found = True
    assert not found


def test_lift_failure_from_one_deleted_cross_pair(k3, z2):
    # deleting a single cross-fibre pair from the flat model strands the
    # marked point whose only triangle closure used that pair
    bn, report = fg.twisted_model(k3, z2, flat_spread(k3, z2))
    assert report == []
    broken = bn.total_nbhd.without_pairs([("b|0", "c|0")])
    bad = fg.BundleWithNeighbours(bn.bundle, bn.base_nbhd, broken)
    rules = [v.rule for v in fg.validate_neighbour_bundle(bad)]
    assert "simplex-lifting" in rules
    assert "action-preserves-relation" in rules  # single-pair deletion also breaks this
    lifts = [v for v in fg.validate_neighbour_bundle(bad) if v.rule == "simplex-lifting"]
    _assert_lift_witness_is_genuine(bad, lifts)


def test_lift_failure_with_intact_submersion(k3, z2):
    # one edge shifted against the other two: every edge still lifts but
    # no triangle does, so only the k=2 axiom fails
    spread = flat_spread(k3, z2)
    spread[("b", "c")] = ("1",)
    spread[("c", "b")] = ("1",)
    bad, report = fg.twisted_model(k3, z2, spread)
    rules = {v.rule for v in report}
    assert rules == {"simplex-lifting"}
    _assert_lift_witness_is_genuine(bad, [v for v in report if v.rule == "simplex-lifting"])


def test_twisted_model_preconditions_rejected(k2, z2):
    with pytest.raises(fg.BookkeepingError, match="missing"):
        fg.twisted_model(k2, z2, {("a", "b"): ("0",)})
    spread = flat_spread(k2, z2)
    spread[("a", "a")] = ("1",)  # unit missing on the diagonal
    with pytest.raises(fg.BookkeepingError, match="unit"):
        fg.twisted_model(k2, z2, spread)
    spread = flat_spread(k2, z2)
    spread[("a", "b")] = ()
    with pytest.raises(fg.BookkeepingError, match="empty"):
        fg.twisted_model(k2, z2, spread)
    spread = flat_spread(k2, z2)
    spread[("a", "b")] = ("1",)  # reverse stays ("0",): not elementwise inverse
    with pytest.raises(fg.BookkeepingError, match="inverse"):
        fg.twisted_model(k2, z2, spread)


def test_flat_spread_model_relates_equal_group_coordinates(k3, z3):
    bn, report = fg.twisted_model(k3, z3, flat_spread(k3, z3))
    assert report == []
    for x in bn.bundle.points:
        for y in bn.bundle.points:
            a, g = x.split("|")
            c, h = y.split("|")
            assert bn.total_nbhd.related(x, y) == (g == h)


def test_full_spread_reproduces_trivial_model(k3, z2):
    bn, report = fg.twisted_model(k3, z2, full_spread(k3, z2))
    assert report == []
    trivial = fg.trivial_model(k3, z2)
    assert bn.total_nbhd.adj == trivial.total_nbhd.adj


def test_transposition_spread_fails_lifting_on_triangle(k3, s3):
    # shifting by a transposition on every edge: two legs compose to a
    # rotation, never a transposition, so no 2-simplex lifts
    transpositions = ("(12)", "(13)", "(23)")
    spread = {}
    for a in k3.carrier:
        for b in k3.carrier:
            spread[(a, b)] = ("e",) if a == b else transpositions
    bn, report = fg.twisted_model(k3, s3, spread)
    rules = {v.rule for v in report}
    assert rules == {"simplex-lifting"}


def test_group_preserves_relation_in_generated_models(golden):
    for _name, bn in golden:
        b = bn.bundle
        for x in b.points:
            for y in b.points:
                if bn.total_nbhd.related(x, y):
                    for g in b.group.elements:
                        assert bn.total_nbhd.related(b.act_of(x, g), b.act_of(y, g))


def test_carrier_mismatch_rejected(k2, z2):
    bundle = fg.trivial_bundle(["a", "b"], z2)
    with pytest.raises(ValueError):
        fg.BundleWithNeighbours(bundle, fg.Neighbourhood.codiscrete(["a", "x"]),
                                fg.Neighbourhood.codiscrete(bundle.points))
