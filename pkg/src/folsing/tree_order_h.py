"""Rooted ordering of a weighted tree and the exact h-recursion.

Orient every edge of the tree toward a chosen root ``m``. The predecessors
of ``v`` are its children in this orientation, ``n(v)`` is the length of the
path from ``v`` to ``m`` and ``level(v) = s - n(v)`` with ``s`` the largest
such length. The h-map is

    h(v) = w(v)                              for minimal v (no predecessors)
    h(v) = w(v) - sum(1 / h(u), u in pred(v))  otherwise

evaluated in increasing level, in exact rational arithmetic. It is strictly
negative whenever the intersection matrix is negative definite.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .divisor_graph import DecoratedGraph, is_tree


class NotATree(ValueError):
    pass


class UnknownRoot(KeyError):
    pass


class DivisionByZeroH(ZeroDivisionError):
    def __init__(self, vertex: str, parent: str):
        super().__init__(f"h({vertex}) = 0, so h({parent}) is undefined; the intersection matrix is not negative definite")
        self.vertex = vertex
        self.parent = parent


@dataclass(frozen=True)
class RootedOrder:
    root: str
    successor: dict[str, str | None]
    predecessors: dict[str, tuple[str, ...]]
    depth: dict[str, int]
    order: tuple[str, ...]  # BFS order from the root

    @property
    def size(self) -> int:
        return max(self.depth.values())

    def level(self, v: str) -> int:
        return self.size - self.depth[v]

    @property
    def minimal(self) -> tuple[str, ...]:
        return tuple(v for v in self.order if not self.predecessors[v])

    def by_level(self) -> list[str]:
        """Vertices sorted by increasing level (ties keep BFS order)."""
        return sorted(self.order, key=lambda v: -self.depth[v])


def root_order(g: DecoratedGraph, m: str) -> RootedOrder:
    if not is_tree(g):
        raise NotATree("ordering requires a tree without multiple edges")
    if m not in g.component_ids:
        raise UnknownRoot(m)
    adj = g.adjacency()
    successor: dict[str, str | None] = {m: None}
    depth = {m: 0}
    preds: dict[str, list[str]] = {m: []}
    order = [m]
    queue = deque([m])
    while queue:
        v = queue.popleft()
        for u, _ in sorted(adj[v], key=lambda e: e[0]):
            if u in depth:
                continue
            successor[u] = v
            depth[u] = depth[v] + 1
            preds[u] = []
            preds[v].append(u)
            order.append(u)
            queue.append(u)
    return RootedOrder(
        root=m,
        successor=successor,
        predecessors={v: tuple(p) for v, p in preds.items()},
        depth=depth,
        order=tuple(order),
    )


def compute_h(g: DecoratedGraph, order: RootedOrder) -> dict[str, Fraction]:
    if not is_tree(g):
        raise NotATree("h is defined on trees only")
    h: dict[str, Fraction] = {}
    for v in order.by_level():
        value = Fraction(g.component(v).weight)
        for u in order.predecessors[v]:
            if h[u] == 0:
                raise DivisionByZeroH(u, v)
            value -= 1 / h[u]
        h[v] = value
    return {v: h[v] for v in order.order}


def verify_h_negative(h: dict[str, Fraction]) -> tuple[bool, list[str]]:
    bad = [v for v, value in h.items() if value >= 0]
    return not bad, bad
