"""Seeded random trees and consistent decorations.

``random_decorated_graph`` builds a negative-definite weighted tree, puts a
reduced singularity on every corner and closes each component with one tail
whose index makes the index sum equal the weight exactly.
"""
from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction

from .definiteness import is_negative_definite
from .divisor_graph import Component, CornerSingularity, DecoratedGraph, TailSingularity

CORNER_KINDS = ("hyperbolic", "saddle", "node", "saddle_node")


def random_tree_edges(rng: random.Random, n: int) -> list[tuple[int, int]]:
    """Uniform random recursive tree: vertex i attaches to a uniform j < i."""
    return [(rng.randrange(i), i) for i in range(1, n)]


def tree_matrix(n: int, edges, weights) -> list[list[int]]:
    rows = [[0] * n for _ in range(n)]
    for i, w in enumerate(weights):
        rows[i][i] = w
    for i, j in edges:
        rows[i][j] += 1
        rows[j][i] += 1
    return rows


def random_weighted_tree(
    rng: random.Random,
    n: int,
    weight_range: tuple[int, int] = (-10, -2),
    negative_definite: bool = True,
    max_tries: int = 1000,
) -> tuple[list[tuple[int, int]], list[int]]:
    lo, hi = weight_range
    for _ in range(max_tries):
        edges = random_tree_edges(rng, n)
        weights = [rng.randint(lo, hi) for _ in range(n)]
        if not negative_definite or is_negative_definite(tree_matrix(n, edges, weights)):
            return edges, weights
    raise RuntimeError(f"no negative-definite tree with {n} vertices in {max_tries} draws")


def plain_tree_graph(edges, weights) -> DecoratedGraph:
    """Undecorated graph: components and corners only."""
    comps = tuple(Component(f"P{i + 1}", w) for i, w in enumerate(weights))
    corners = tuple(
        CornerSingularity(f"z{k + 1}", f"P{i + 1}", f"P{j + 1}", -1 + 0j, -1 + 0j)
        for k, (i, j) in enumerate(edges)
    )
    return DecoratedGraph(comps, corners, ())


def _random_modulus(rng: random.Random) -> float:
    # log-uniform on [0.2, 5]
    return math.exp(rng.uniform(math.log(0.2), math.log(5.0)))


def _looks_positive_rational(z: complex, max_den: int = 12, tol: float = 1e-9) -> bool:
    if abs(z.imag) > tol or z.real <= 0:
        return False
    approx = Fraction(z.real).limit_denominator(max_den)
    return abs(float(approx) - z.real) < tol


def _corner_indices(rng: random.Random, kind: str) -> tuple[complex, complex]:
    r = _random_modulus(rng)
    if kind == "hyperbolic":
        lam = cmath.rect(r, rng.uniform(-math.pi, math.pi))
    elif kind == "saddle":
        lam = complex(-r)
    else:
        lam = complex(r)
    return lam, 1 / lam


def random_decorated_graph(
    seed: int,
    n: int | None = None,
    max_size: int = 12,
    weight_range: tuple[int, int] = (-10, -2),
    corner_kinds: tuple[str, ...] = CORNER_KINDS,
    dicritical_prob: float = 0.0,
    sn_tail_prob: float = 0.1,
) -> DecoratedGraph:
    """Consistent decoration of a random negative-definite tree.

    Deterministic in ``seed``. With ``dicritical_prob > 0`` some non-root
    components become dicritical; their crossings are regular points.
    """
    rng = random.Random(seed)
    if n is None:
        n = rng.randint(1, max_size)
    edges, weights = random_weighted_tree(rng, n, weight_range)
    dicritical = [i > 0 and rng.random() < dicritical_prob for i in range(n)]
    ids = [f"P{i + 1}" for i in range(n)]
    for _ in range(1000):
        comps = tuple(
            Component(ids[i], weights[i], invariant=not dicritical[i], dicritical=dicritical[i])
            for i in range(n)
        )
        corners = []
        sums = [0j] * n
        for k, (i, j) in enumerate(edges):
            zid = f"z{k + 1}"
            if dicritical[i] or dicritical[j]:
                corners.append(CornerSingularity(zid, ids[i], ids[j], 0j, 0j))
                continue
            kind = rng.choice(corner_kinds)
            if kind == "saddle_node":
                mu = cmath.rect(_random_modulus(rng), rng.uniform(-math.pi, math.pi))
                if rng.random() < 0.5:
                    ci, cj, strong = mu, 0j, ids[j]
                else:
                    ci, cj, strong = 0j, mu, ids[i]
                corners.append(CornerSingularity(zid, ids[i], ids[j], ci, cj, True, strong))
            else:
                ci, cj = _corner_indices(rng, kind)
                corners.append(CornerSingularity(zid, ids[i], ids[j], ci, cj))
            sums[i] += ci
            sums[j] += cj
        tails = []
        ok = True
        for i in range(n):
            if dicritical[i]:
                continue
            cs = weights[i] - sums[i]
            if abs(cs) < 1e-9 or _looks_positive_rational(cs):
                ok = False
                break
            sn = rng.random() < sn_tail_prob
            tails.append(TailSingularity(f"q{i + 1}", ids[i], cs, sn, sn))
        if ok:
            return DecoratedGraph(comps, tuple(corners), tuple(tails))
    raise RuntimeError(f"seed {seed}: could not draw an admissible decoration")


def corpus(size: int = 200, base_seed: int = 0, **kwargs) -> list[DecoratedGraph]:
    return [random_decorated_graph(base_seed + k, **kwargs) for k in range(size)]
