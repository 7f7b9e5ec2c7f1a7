"""Acceptance suite: the eight headline criteria, exact algebra throughout.

Every criterion runs over the golden catalogue (trivial and flat-twisted
models over the complete base on 2 and 3 points, groups Z2, Z3, Z4, S3)
and prints one pass line; connection families are exhaustive whenever
their count is at most 10^4 (true for every golden model), otherwise a
fixed-seed sample of 100 stands in.  Tolerances are zero everywhere:
all comparisons are equalities of finite tables.
"""

import finitegauge as fg
from finitegauge.connection import connection_count
from finitegauge.verify import (
    EXHAUSTIVE_CEILING,
    check_commutative_curvature,
    check_connection_form_bijection,
    check_curvature_identity,
    check_difference_identity,
    check_form_translation_laws,
    check_gauge_identification,
    check_structure_roundtrip,
    check_transform_bijection,
)


def _report_line(number, title, details):
    print(f"PASS criterion {number}: {title} ({details})")


def test_criterion_1_connection_form_bijection(golden):
    instances = 0
    for name, bn in golden:
        assert connection_count(bn) <= EXHAUSTIVE_CEILING, name
        report = check_connection_form_bijection(bn)
        assert report.ok, (name, report.failures()[:1])
        assert all(r["exhaustive"] for r in report.records), name
        instances += len(report.records)
    _report_line(1, "connection <-> form round trips exactly",
                 f"{instances} connections over {len(golden)} models, all exhaustive")


def test_criterion_2_translation_laws(golden):
    instances = 0
    for name, bn in golden:
        report = check_form_translation_laws(bn)
        assert report.ok, (name, report.failures()[:1])
        instances += len(report.records)
    _report_line(2, "both translation laws hold for every connection form",
                 f"{instances} forms, all admissible shifts, zero failures")


def test_criterion_3_transform_bijection(golden):
    instances = 0
    models = 0
    for name, bn in golden:
        if bn.nP > 12:
            continue
        models += 1
        report = check_transform_bijection(bn)
        assert report.ok, (name, report.failures()[:1])
        instances += len(report.records)
    assert models == 14
    _report_line(3, "hat and check transforms are mutually inverse "
                    "and satisfy the pointwise identity",
                 f"{instances} forms over {models} models with at most 12 points")


def test_criterion_4_curvature_identity(golden):
    instances = 0
    saw_noncommutative = False
    for name, bn in golden:
        report = check_curvature_identity(bn)
        assert report.ok, (name, report.failures()[:1])
        instances += len(report.records)
        saw_noncommutative |= not bn.bundle.group.is_commutative
    assert saw_noncommutative
    _report_line(4, "lifted holonomy equals the coboundary; the coboundary "
                    "is horizontal and equivariant",
                 f"{instances} connections, nonabelian models included")


def test_criterion_5_commutative_descent(golden, holonomy_example):
    instances = 0
    for name, bn in golden:
        if not bn.bundle.group.is_commutative:
            continue
        report = check_commutative_curvature(bn)
        assert report.ok, (name, report.failures()[:1])
        instances += len(report.records)
    bn, _flat, twisted = holonomy_example
    descended = fg.descend_curvature(bn, twisted)
    assert descended.value(("a", "b", "c")) == "1"
    _report_line(5, "curvature descends on commutative models and matches "
                    "collapsed holonomy; triangle example descends to 1",
                 f"{instances} connections")


def test_criterion_6_gauge_identification_verdicts(golden):
    witnesses = 0
    for name, bn in golden:
        report = check_gauge_identification(bn)
        assert report.ok, (name, report.records)
        if not bn.bundle.group.is_commutative:
            witnesses += 1
            found = fg.gauge_to_group_counterexample(bn.bundle)
            assert found is not None, name
            b = bn.bundle
            shifted = fg.div(b, b.act_of(found["den"], found["shift"]),
                             b.act_of(found["num"], found["shift"]))
            assert shifted != found["value"], name
    assert witnesses == 4
    _report_line(6, "the gauge identification admits counterexamples exactly "
                    "on the nonabelian models",
                 f"{witnesses} concrete witnesses, commutative models exhaustively clean")


def test_criterion_7_difference_identity(golden):
    instances = 0
    for name, bn in golden:
        report = check_difference_identity(bn)
        assert report.ok, (name, report.failures()[:1])
        assert len(report.records) == 50
        instances += len(report.records)
    _report_line(7, "lifted connection differences equal the form quotients",
                 f"{instances} seeded pairs, zero failures")


def test_criterion_8_structure_roundtrip(golden):
    for name, bn in golden:
        report = check_structure_roundtrip(bn)
        assert report.ok, (name, report.records)
    _report_line(8, "the enveloping groupoid validates, is transitive, and "
                    "extracting the bundle back gives an isomorphic bundle",
                 f"{len(golden)} models")
