"""Independent reference computations used by the tests."""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from itertools import permutations

from folsing.chains import Chain, verify_chain


def cofactor_det(m) -> int:
    """Laplace expansion along the first row (exact, exponential; n <= 8)."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


def leibniz_det(m) -> int:
    """Permutation-sum determinant, for tiny matrices only."""
    n = len(m)
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= m[i][perm[i]]
        total += (-1) ** inv * prod
    return total


def chain_cf(n: int) -> list[Fraction]:
    """Values along a (-2)-chain, evaluated as nested continued fractions from scratch."""
    out = []
    for k in range(1, n + 1):
        value = Fraction(-2)
        for _ in range(k - 1):
            value = Fraction(-2) - 1 / value
        out.append(value)
    return out


def subtree_det_h(weights: dict, adj: dict, root) -> dict:
    """h(v) = det(T_v) / prod det(T_u) over children u, with T_v the subtree under v."""
    parent = {root: None}
    order = [root]
    for v in order:
        for u in adj[v]:
            if u not in parent:
                parent[u] = v
                order.append(u)
    children = {v: [u for u in adj[v] if parent.get(u) == v] for v in order}

    def subtree(v):
        nodes = [v]
        for x in nodes:
            nodes.extend(children[x])
        return nodes

    def det_of(nodes):
        idx = {x: i for i, x in enumerate(nodes)}
        m = [[0] * len(nodes) for _ in nodes]
        for x in nodes:
            m[idx[x]][idx[x]] = weights[x]
            for y in adj[x]:
                if y in idx:
                    m[idx[x]][idx[y]] += 1
        return cofactor_det(m)

    h = {}
    for v in order:
        denom = 1
        for u in children[v]:
            denom *= det_of(subtree(u))
        h[v] = Fraction(det_of(subtree(v)), denom) if denom else None
    return h


def branch_modulus(lam: complex, x0: complex, y0: complex, a: float, k: int) -> float:
    # y * x^(-lam) constant: y1 = y0 * exp(lam * (log a - log x0)) on branch k
    log_x0 = complex(math.log(abs(x0)), cmath.phase(x0) - 2 * math.pi * k)
    return abs(y0 * cmath.exp(lam * (math.log(a) - log_x0)))


def brute_covered(lam, x0, y0, a, delta, K) -> bool:
    return any(branch_modulus(lam, x0, y0, a, k) < delta for k in range(-K, K + 1))


def exhaustive_min_chain_length(g, start) -> int | None:
    """Shortest verified chain from ``start`` over all simple paths of the graph."""
    adj = g.adjacency()
    best = None
    stack = [((start,), ())]
    while stack:
        comps, corners = stack.pop()
        for t in g.tails_on(comps[-1]):
            if verify_chain(g, Chain(comps, corners, t.id)).ok:
                if best is None or len(comps) < best:
                    best = len(comps)
        for u, z in adj[comps[-1]]:
            if u not in comps:
                stack.append((comps + (u,), corners + (z.id,)))
    return best
