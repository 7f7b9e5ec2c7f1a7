"""Benchmark the pure-Python verification kernels against the compiled ones.

Runs every hot kernel over the heaviest stock model (the symmetric group
on three letters over the complete three-point base) and prints a
per-kernel comparison.  Usage:

    python benchmarks/bench_kernels.py [repeats]

The same suite drives both implementations with identical arguments, so
the table is also a cheap cross-check that they agree.
"""

import random
import sys
import time

import finitegauge as fg
from finitegauge._kernels import pure
from finitegauge.connection import random_connection
from finitegauge.forms import random_gauge_form

try:
    from finitegauge._kernels import _fast as fast
except ImportError:
    fast = None


def build_cases():
    m = fg.Neighbourhood.codiscrete(("a", "b", "c"))
    bn = fg.trivial_model(m, fg.symmetric(3))
    b = bn.bundle
    G = b.group
    rng = random.Random(1729)
    conn = random_connection(bn, rng)
    nab_num, nab_den = conn.transport_tables()
    omega = fg.connection_to_form(bn, conn)
    d_omega = fg.coboundary1(bn, omega)
    alpha = random_gauge_form(bn, 2, rng)
    hat = fg.hat_transform(bn, alpha)

    return bn, [
        ("enum_tuples(k=2)", ("enum_tuples", bn.nP, bn.p_adj, 2)),
        ("dense_pos(k=2)", ("dense_pos", bn.nP, bn.p_simplices(2), 2)),
        ("conn_form_values", ("conn_form_values", bn.nP, bn.nM, bn.nG,
                              bn.p_simplices(1), bn.proj_arr, bn.m_pos(1),
                              nab_num, nab_den, b.act_flat, b.div_flat)),
        ("eq5_witness", ("eq5_witness", bn.nP, bn.nG, bn.p_simplices(1),
                         bn.p_pos(1), bn.p_adj, b.act_flat, G.mul_flat,
                         G.inv_flat, omega.values)),
        ("eq6_witness", ("eq6_witness", bn.nP, bn.nG, bn.p_simplices(1),
                         bn.p_pos(1), b.act_flat, G.mul_flat, G.inv_flat,
                         omega.values)),
        ("coboundary_values", ("coboundary_values", bn.nP, bn.nG,
                               bn.p_simplices(2), bn.p_pos(1), omega.values,
                               G.mul_flat)),
        ("hat_values(k=2)", ("hat_values", 2, bn.nP, bn.nM, bn.nG,
                             bn.p_simplices(2), bn.proj_arr, bn.m_pos(2),
                             alpha.nums, alpha.dens, b.act_flat, b.div_flat)),
        ("check_values(k=2)", ("check_values", 2, bn.nP, bn.nM, bn.nG,
                               bn.p_simplices(2), bn.proj_arr, bn.m_pos(2),
                               bn.m_rows(2), bn.fibre_min_arr, b.act_flat,
                               b.div_flat, hat.values)),
        ("descend_values(k=2)", ("descend_values", 2, bn.nP, bn.nM,
                                 bn.p_simplices(2), bn.proj_arr, bn.m_pos(2),
                                 bn.m_rows(2), fg.pullback(
                                     bn, fg.BaseForm.constant(bn, 2)).values)),
        ("pullback_values(k=2)", ("pullback_values", 2, bn.nP, bn.nM,
                                  bn.p_simplices(2), bn.proj_arr, bn.m_pos(2),
                                  fg.BaseForm.constant(bn, 2).values)),
        ("transform_identity(k=2)", ("transform_identity_witness", 2, bn.nP,
                                     bn.nM, bn.nG, bn.p_simplices(2),
                                     bn.proj_arr, bn.m_pos(2), alpha.nums,
                                     alpha.dens, hat.values, b.act_flat,
                                     b.div_flat)),
        ("horizontal_witness(k=2)", ("horizontal_witness", 2, bn.nP, bn.nG,
                                     bn.p_simplices(2), bn.p_pos(2), bn.p_adj,
                                     b.act_flat, d_omega.values)),
        ("equivariant_witness(k=2)", ("equivariant_witness", 2, bn.nP, bn.nG,
                                      bn.p_simplices(2), bn.p_pos(2),
                                      b.act_flat, G.mul_flat, G.inv_flat,
                                      d_omega.values)),
    ]


def best_of(impl, name, args, repeats):
    fn = getattr(impl, name)
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 5
    bn, cases = build_cases()
    print(f"model: trivial S3 bundle over the 3-point complete base "
          f"(|P|={bn.nP}, {bn.p_rows(2)} 2-simplices); best of {repeats}")
    if fast is None:
        print("compiled kernels not built; timing the pure kernels only")
    header = f"{'kernel':28} {'pure':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    total_pure = total_fast = 0.0
    for label, (name, *args) in cases:
        t_pure, r_pure = best_of(pure, name, args, repeats)
        total_pure += t_pure
        if fast is None:
            print(f"{label:28} {t_pure * 1e3:9.2f}ms {'-':>10} {'-':>8}")
            continue
        t_fast, r_fast = best_of(fast, name, args, repeats)
        total_fast += t_fast
        if r_pure != r_fast:
            raise AssertionError(f"{name}: implementations disagree")
        print(f"{label:28} {t_pure * 1e3:9.2f}ms {t_fast * 1e3:8.2f}ms "
              f"{t_pure / t_fast:7.1f}x")
    if fast is not None:
        print("-" * len(header))
        print(f"{'total':28} {total_pure * 1e3:9.2f}ms {total_fast * 1e3:8.2f}ms "
              f"{total_pure / total_fast:7.1f}x")


if __name__ == "__main__":
    main()
