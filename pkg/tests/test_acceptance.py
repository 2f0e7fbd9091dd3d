"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import math
import time
from fractions import Fraction
from itertools import product

from conftest import complete_formula
from lincsp import (
    Csp,
    GenParams,
    Status,
    bound_ml,
    check_l_disjoint,
    count_solutions,
    evaluate,
    exhaustive_solve,
    experiment_min_linear_2cnf,
    frequent_variables,
    greedy_maximal_hypergraph,
    hypergraph_size_lower_bound,
    linear_bounds,
    lll_condition,
    oracle_solve,
    psz_size,
    reduce_frequent,
    resample_solve,
    search_unsat,
    solve_sparse_frequent,
    two_sat_solve,
)
from lincsp.core import frequent_threshold
from lincsp.experiments import fixture_six
from lincsp.generator import expected_sat_count_exact, random_csp, sparse_frequent_instance
from lincsp.solver import lll_threshold, max_frequent_allowed


def _report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\nacceptance {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def _best_time(fn, repeat=50):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def test_1_fixture_reproduction(capsys):
    f = fixture_six()
    disjoint = check_l_disjoint(f, 2)[0]
    exh = exhaustive_solve(f).status
    imp = two_sat_solve(f).status
    t_exh = _best_time(lambda: exhaustive_solve(f))
    t_imp = _best_time(lambda: two_sat_solve(f))
    ok = (disjoint and exh is Status.UNSATISFIABLE and imp is Status.UNSATISFIABLE
          and max(t_exh, t_imp) < 1e-3)
    _report(capsys, 1, ok, f"2-disjoint={disjoint} exhaustive={exh.value} "
            f"implication={imp.value} time={1e3 * t_exh:.3f}ms/{1e3 * t_imp:.3f}ms (< 1 ms)")


def test_2_minimality_of_six(capsys):
    t0 = time.perf_counter()
    five = experiment_min_linear_2cnf(5)
    six = experiment_min_linear_2cnf(6)
    elapsed = time.perf_counter() - t0
    ok = five.all_satisfiable and not six.all_satisfiable and elapsed < 300
    _report(capsys, 2, ok, f"<=5 clauses: {five.total_checked} formulas all satisfiable="
            f"{five.all_satisfiable}; <=6: {len(six.unsatisfiable)} unsatisfiable; "
            f"{elapsed:.2f}s (< 300 s)")


def test_3_complete_formula(capsys):
    t0 = time.perf_counter()
    ok = True
    for k in (1, 2, 3, 4):
        f = complete_formula(k)
        ok &= len(f) == 2**k and oracle_solve(f).status is Status.UNSATISFIABLE
        for i in range(len(f)):
            g = f.replace_constraints(f.constraints[:i] + f.constraints[i + 1:])
            out = exhaustive_solve(g)
            ok &= out.satisfied and evaluate(g, out.assignment)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 1.0
    _report(capsys, 3, ok, f"k=1..4 unsat, every single deletion sat; {elapsed:.3f}s (< 1 s)")


def test_4_maximal_packing_grid(capsys):
    seeds = range(100)
    grid = [(n, k, ell) for k in range(1, 7) for ell in range(1, k + 1) for n in range(k, 31)]
    t0 = time.perf_counter()
    failures = []
    for n, k, ell in grid:
        bound = hypergraph_size_lower_bound(n, k, ell)
        for seed in seeds:
            h = greedy_maximal_hypergraph(n, k, ell, seed)
            if len(h) < bound or not h.maximal or h.find_overlap(ell) is not None:
                failures.append((n, k, ell, seed))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 60
    _report(capsys, 4, ok, f"{len(grid)} grid points x {len(seeds)} seeds, "
            f"{len(failures)} failures; {elapsed:.1f}s (< 60 s)")


def test_5_expected_count_exact(capsys):
    cases = [(3, 2, 2, [[1, 2], [2, 3]]),
             (3, 2, 3, [[1, 2], [2, 3]]),
             (4, 3, 3, [[1, 2, 3], [2, 3, 4]])]
    results = []
    for n, k, d, rows in cases:
        points = list(product(range(d), repeat=k))
        total = sum(
            count_solutions(Csp(k, d, [list(zip(r, v)) for r, v in zip(rows, choice)], n))
            for choice in product(points, repeat=len(rows)))
        mean = Fraction(total, len(points) ** len(rows))
        results.append((mean, expected_sat_count_exact(n, len(rows), k, d)))
    ok = results[0][0] == Fraction(9, 2) and all(a == b for a, b in results)
    _report(capsys, 5, ok, "means " + ", ".join(f"{a}=={b}" for a, b in results))


def test_6_generator_paper_parameters(capsys):
    t0 = time.perf_counter()
    wins = 0
    for seed in range(100):
        try:
            res = search_unsat(GenParams(k=2, d=2, ell=2, seed=seed, trials=3))
        except Exception:
            continue
        wins += (res.verified and (res.n, res.m) == (82, 228)
                 and two_sat_solve(res.csp).status is Status.UNSATISFIABLE)
    elapsed = time.perf_counter() - t0
    ok = wins >= 99 and elapsed < 10
    _report(capsys, 6, ok, f"{wins}/100 master seeds within 3 trials (>= 99); "
            f"{elapsed:.2f}s (< 10 s)")


def test_7_local_lemma_instances(capsys):
    total = oracle_sat = resample_ok = 0
    for i in range(500):
        k, d = 4 + i % 3, 2 + (i // 3) % 2
        n = 16 if d == 2 else 12
        f = random_csp(n, 60, k, d, seed=i, max_degree=math.floor(lll_threshold(k, d)))
        assert lll_condition(f).holds and f.n_vars <= 16
        total += 1
        oracle_sat += oracle_solve(f).satisfied
        out = resample_solve(f, seed=i)
        resample_ok += out.satisfied and evaluate(f, out.assignment)
    ok = oracle_sat == total and resample_ok >= 0.99 * total
    _report(capsys, 7, ok, f"{total} CSPs: oracle sat {oracle_sat}/{total}, "
            f"resample verified {resample_ok}/{total} (>= 99%)")


def test_8_sparse_frequent_pipeline(capsys):
    k, d, ell = 10, 2, 2
    limit = frequent_threshold(k, d, ell)
    cap = math.floor(max_frequent_allowed(k, d, ell))
    solved = degree_ok = 0
    for i in range(100):
        f = sparse_frequent_instance(k, d, ell, i % (cap + 1), seed=i, filler=i % 4)
        assert check_l_disjoint(f, ell)[0] and len(frequent_variables(f, ell)) <= cap
        rep = reduce_frequent(f, ell)
        degree_ok += all(deg <= limit for deg in rep.reduced.degrees.values())
        out = solve_sparse_frequent(f, ell, seed=i)
        solved += out.satisfied and evaluate(f, out.assignment)
    ok = solved == 100 and degree_ok == 100
    _report(capsys, 8, ok, f"cap={cap} frequent; solved {solved}/100, "
            f"post-reduction degree <= {limit:.2f} in {degree_ok}/100")


def test_9_bounds_consistency(capsys):
    worst = max(abs(bound_ml(k, 2, 2).lower - linear_bounds(k).lower) / linear_bounds(k).lower
                for k in range(2, 31))
    psz = [psz_size(k).exact for k in range(4)]
    ok = worst <= 1e-12 and psz == [1, 2, 8, 2048]
    _report(capsys, 9, ok, f"max relative gap {worst:.2e} (<= 1e-12); psz {psz}")
