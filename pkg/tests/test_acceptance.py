"""Acceptance criteria of the build, one test per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary ends
with one ``[AC-nn] PASS|FAIL`` line per criterion. Running this file as a
script prints the same lines.
"""
import cmath
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from folsing import local_flow as lf
from folsing.chains import find_approximation_chain, verify_chain
from folsing.cs_calculus import (
    d_star_components, find_negative_index_tail, strong_separatrix_count_check,
)
from folsing.definiteness import is_negative_definite
from folsing.divisor_graph import intersection_matrix
from folsing.generator import (
    corpus, plain_tree_graph, random_tree_edges, random_weighted_tree, tree_matrix,
)
from folsing.tree_order_h import compute_h, root_order, verify_h_negative
from helpers import chain_graph
from oracles import brute_covered, chain_cf, exhaustive_min_chain_length

pytestmark = pytest.mark.acceptance

CORPUS_SEED = 1000


@pytest.fixture
def criterion(record_property):
    def tag(n, title):
        record_property("criterion", (n, title))
    return tag


@pytest.fixture(scope="module")
def acceptance_corpus():
    return corpus(200, base_seed=CORPUS_SEED)


def test_ac01_h_on_minus_two_chains(criterion):
    criterion(1, "h(v_k) = -(k+1)/k exactly on (-2)-chains, n = 1..10, < 1 s")
    start = time.perf_counter()
    for n in range(1, 11):
        g = chain_graph([-2] * n)
        h = compute_h(g, root_order(g, f"P{n}"))
        oracle = chain_cf(n)
        for k in range(1, n + 1):
            assert isinstance(h[f"P{k}"], (int, Fraction))
            assert h[f"P{k}"] == Fraction(-(k + 1), k) == oracle[k - 1]
    assert time.perf_counter() - start < 1.0


def test_ac02_h_negative_on_definite_trees(criterion):
    criterion(2, "h < 0 for every root on 200 negative-definite random trees, < 5 s")
    rng = random.Random(2)
    trees = [random_weighted_tree(rng, rng.randint(1, 12), (-10, -1)) for _ in range(200)]
    start = time.perf_counter()
    violations = []
    for i, (edges, weights) in enumerate(trees):
        g = plain_tree_graph(edges, weights)
        assert is_negative_definite(intersection_matrix(g))
        for root in g.component_ids:
            ok, bad = verify_h_negative(compute_h(g, root_order(g, root)))
            if not ok:
                violations.append((i, root, bad))
    elapsed = time.perf_counter() - start
    assert violations == []
    assert elapsed < 5.0


def test_ac03_sylvester_matches_eigenvalues(criterion):
    criterion(3, "exact definiteness agrees with eigenvalues on 500 random tree matrices")
    rng = random.Random(3)
    compared = disagreements = 0
    verdicts = set()
    for _ in range(500):
        n = rng.randint(1, 8)
        m = tree_matrix(n, random_tree_edges(rng, n), [rng.randint(-4, 1) for _ in range(n)])
        eig = np.linalg.eigvalsh(np.array(m, dtype=float))
        if np.min(np.abs(eig)) <= 1e-6:
            continue
        compared += 1
        verdict = is_negative_definite(m)
        verdicts.add(verdict)
        disagreements += verdict != bool(np.all(eig < 0))
    assert compared > 400 and verdicts == {True, False}
    assert disagreements == 0


def test_ac04_negative_index_witness(criterion, acceptance_corpus):
    criterion(4, "negative-index non-corner witness on all 200 corpus graphs, < 5 s")
    start = time.perf_counter()
    failures = []
    for g in acceptance_corpus:
        rep = find_negative_index_tail(g)
        tail_ids = {t.id for t in g.tails}
        if rep.witness not in tail_ids or rep.witness in {z.id for z in g.corners} or not rep.re_cs < 0:
            failures.append(rep)
    elapsed = time.perf_counter() - start
    assert failures == []
    assert elapsed < 5.0


def test_ac05_separatrix_census(criterion, acceptance_corpus):
    criterion(5, "tail separatrices outnumber nodal corners on every corpus graph")
    for g in acceptance_corpus:
        census = strong_separatrix_count_check(g)
        assert census.tails > census.nodal_corners
        assert census.holds and not census.dicritical_trivial


def test_ac06_d_star_witnesses(criterion, acceptance_corpus):
    criterion(6, "every D_* piece of every corpus graph yields a witness")
    pieces = 0
    for g in acceptance_corpus:
        for piece in d_star_components(g):
            pieces += 1
            rep = find_negative_index_tail(g, piece.components)
            assert rep.witness is not None and rep.re_cs < 0
            assert g.tail(rep.witness).comp in piece.components
    assert pieces > len(acceptance_corpus)


def test_ac07_approximation_chains(criterion, acceptance_corpus):
    criterion(7, "chains from every invariant component verify and are minimal (<= 8 components)")
    exhaustive = 0
    for g in acceptance_corpus:
        for c in g.components:
            if not c.invariant or c.dicritical:
                continue
            chain = find_approximation_chain(g, c.id)
            assert verify_chain(g, chain).ok
            if len(g.components) <= 8:
                assert len(chain) == exhaustive_min_chain_length(g, c.id)
                exhaustive += 1
    assert exhaustive > 100


def test_ac08_saddle_monotonicity_and_crossings(criterion):
    criterion(8, "monotone moduli on 100 saddles x 10 starts; crossings match closed forms to 1e-6")
    rng = random.Random(8)
    violations = 0
    for _ in range(100):
        spec = lf.random_saddle_spec(rng)
        for _ in range(10):
            traj = lf.integrate(spec, lf.random_start(rng, spec.box_a), (0.0, 100.0), rtol=1e-10)
            violations += not lf.monotonicity_check(traj, slack=1e-9).passed
    assert violations == 0
    spec = lf.FlowSpec.linear(1, -1)
    examples = [((0.5, 0.5), (1.0, 0.25)), ((0.25, 0.5), (1.0, 0.125))]
    examples += [((0.5, 1 / n), (1.0, 0.5 / n)) for n in range(1, 11)]
    for p0, (x1, y1) in examples:
        cr = lf.crossing_point(spec, p0, 1.0)
        assert abs(cr.x - x1) <= 1e-6 and abs(cr.y - y1) <= 1e-6


def test_ac09_nodal_separators(criterion):
    criterion(9, "nodal separator drift <= 1e-6 on [-2, 2]; axes invariant to 1e-12 per unit time")
    for lam in (math.sqrt(2), math.sqrt(3), math.pi / 2):
        spec = lf.FlowSpec.linear(1, lam)
        assert lf.nodal_separator_residual(spec, (0.5, 0.5), (-2.0, 2.0), rtol=1e-10).max_drift <= 1e-6
        inf = (math.inf, math.inf)
        for p0, axis in (((0, 0.5), "x"), ((0.5, 0), "y")):
            for t1 in (-2.0, 2.0):
                traj = lf.integrate(spec, p0, (0.0, t1), box=inf)
                off = np.abs(traj.xs if axis == "x" else traj.ys)
                assert np.all(off <= 1e-12 * np.maximum(np.abs(traj.times), 1.0))


def test_ac10_saddle_node_accumulation(criterion):
    criterion(10, "saddle-node crossings decrease in y0 and match 0.2/(1+0.2 ln(b/y0)) to 1e-6")
    b = 0.5
    xs = []
    for e in range(3, 9):
        y0 = 10.0 ** -e
        cr = lf.saddle_node_approach((-0.2, y0), b)
        assert abs(cr.abs_x - 0.2 / (1 + 0.2 * math.log(b / y0))) <= 1e-6
        xs.append(cr.abs_x)
    assert all(later < earlier for earlier, later in zip(xs, xs[1:]))


def test_ac11_saturation(criterion):
    criterion(11, "full saturation coverage for lambda in {-1, i, -1+0.3i}; node lambda = 2 rejected")
    moduli = np.linspace(0.01, 0.3, 12)
    pts = lf.grid(moduli, np.linspace(0, 2 * math.pi, 8, endpoint=False))
    for lam, K in ((-1, 0), (1j, 50), (-1 + 0.3j, 50)):
        sigma = lf.TransversalSpec(0.5, 0.5, K)
        rep = lf.saturation_coverage(lam, sigma, pts, pts)
        assert rep.fraction == 1.0
        # independent per-point check on a thinned grid
        for x0, y0 in zip(rep.xs[::37], rep.ys[::37]):
            assert brute_covered(complex(lam), x0, y0, 0.5, 0.5, K)
    assert np.all(np.abs(rep.xs * rep.ys) < 0.25)
    with pytest.raises(lf.SaturationHypothesisError, match="no nodes in its resolution"):
        lf.saturation_coverage(2, lf.TransversalSpec(0.5, 0.5, 50), pts, pts)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
