"""Approximation chains through the resolution graph.

A chain is a sequence of invariant components P_1..P_n where consecutive
components meet at a corner z_k such that

    (1) P_k and P_{k+1} meet at z_k,
    (2) z_k is not a node,
    (3) if z_k is a saddle-node, its strong manifold lies in P_{k+1},
    (4) P_n carries a non-corner singularity q with Re CS(P_n, q) < 0.

Failures are reported as "chain clause (k)"; clause (0) is used when a
listed component is not invariant.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter

from .cs_calculus import EigenClass, corner_class, negative_tails
from .divisor_graph import CornerSingularity, DecoratedGraph


class DicriticalStart(ValueError):
    pass


class NoChainFound(ValueError):
    pass


class CycleDetected(ValueError):
    pass


class UnknownId(KeyError):
    pass


@dataclass(frozen=True)
class Chain:
    components: tuple[str, ...]
    corners: tuple[str, ...]
    terminal: str

    def __len__(self) -> int:
        return len(self.components)

    def as_dict(self) -> dict:
        return {"components": list(self.components), "corners": list(self.corners), "terminal": self.terminal}


@dataclass(frozen=True)
class ChainOrder:
    classes: tuple[frozenset[str], ...]
    class_of: dict[str, int]
    edges: frozenset[tuple[int, int]]  # (lower, higher): central side -> strong side


def _free_corner(g: DecoratedGraph, z: CornerSingularity) -> bool:
    """Corner with eigenvalue outside [0, +inf): saddle or hyperbolic."""
    return (
        g.is_singular_corner(z)
        and not z.saddle_node
        and corner_class(z) in (EigenClass.SADDLE, EigenClass.HYPERBOLIC)
    )


def chain_order(g: DecoratedGraph) -> ChainOrder:
    invariant = sorted(c.id for c in g.components if c.invariant)
    parent = {cid: cid for cid in invariant}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for z in g.corners:
        if _free_corner(g, z):
            ra, rb = find(z.comp_a), find(z.comp_b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[str, set[str]] = {}
    for cid in invariant:
        groups.setdefault(find(cid), set()).add(cid)
    classes = tuple(frozenset(s) for s in sorted(groups.values(), key=min))
    class_of = {cid: k for k, cls in enumerate(classes) for cid in cls}
    edges = set()
    for z in g.corners:
        if z.saddle_node and g.is_singular_corner(z):
            edges.add((class_of[z.central_side], class_of[z.strong_side]))
    return ChainOrder(classes, class_of, frozenset(edges))


def maximal_classes(order: ChainOrder) -> list[frozenset[str]]:
    graph: dict[int, set[int]] = {k: set() for k in range(len(order.classes))}
    for lo, hi in order.edges:
        if lo == hi:
            raise CycleDetected(f"saddle-node inside class {sorted(order.classes[lo])}")
        graph[hi].add(lo)
    try:
        tuple(TopologicalSorter(graph).static_order())
    except CycleError as exc:
        raise CycleDetected(f"saddle-node orientations form a cycle: {exc.args[1]}") from exc
    has_out = {lo for lo, _ in order.edges}
    result = [order.classes[k] for k in range(len(order.classes)) if k not in has_out]
    if not result:
        raise CycleDetected("no maximal class")
    return result


def allowed_transition(g: DecoratedGraph, z: CornerSingularity, src: str, dst: str) -> bool:
    if {src, dst} != {z.comp_a, z.comp_b}:
        return False
    if not (g.component(src).invariant and g.component(dst).invariant):
        return False
    if z.saddle_node:
        return z.strong_side == dst
    return corner_class(z) is not EigenClass.NODE


def find_approximation_chain(g: DecoratedGraph, start: str) -> Chain:
    """Shortest chain from ``start``; ties broken by component then corner id."""
    try:
        comp = g.component(start)
    except KeyError:
        raise UnknownId(start) from None
    if comp.dicritical or not comp.invariant:
        raise DicriticalStart(f"{start!r} is not an invariant component")
    adj = g.adjacency()
    prev: dict[str, tuple[str, str] | None] = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        found = negative_tails(g, [v])
        if found:
            comps, corners = [v], []
            while prev[comps[-1]] is not None:
                p, zid = prev[comps[-1]]
                corners.append(zid)
                comps.append(p)
            return Chain(tuple(reversed(comps)), tuple(reversed(corners)), found[0].id)
        for u, z in sorted(adj[v], key=lambda e: (e[0], e[1].id)):
            if u not in prev and allowed_transition(g, z, v, u):
                prev[u] = (v, z.id)
                queue.append(u)
    raise NoChainFound(f"no approximation chain starts at {start!r}")


@dataclass(frozen=True)
class ChainVerdict:
    ok: bool
    clause: int | None = None
    message: str = ""

    @property
    def label(self) -> str:
        return "ok" if self.ok else f"chain clause ({self.clause})"


def verify_chain(g: DecoratedGraph, c: Chain) -> ChainVerdict:
    try:
        comps = [g.component(cid) for cid in c.components]
        corners = [g.corner(zid) for zid in c.corners]
        terminal = g.tail(c.terminal)
    except KeyError as exc:
        raise UnknownId(exc.args[0]) from None
    if not comps:
        return ChainVerdict(False, 1, "empty chain")
    for p in comps:
        if not p.invariant:
            return ChainVerdict(False, 0, f"{p.id} is not invariant")
    if len(corners) != len(comps) - 1:
        return ChainVerdict(False, 1, "need exactly one corner between consecutive components")
    for k, z in enumerate(corners):
        src, dst = c.components[k], c.components[k + 1]
        if {src, dst} != {z.comp_a, z.comp_b}:
            return ChainVerdict(False, 1, f"{z.id} does not join {src} and {dst}")
        if not z.saddle_node and corner_class(z) is EigenClass.NODE:
            return ChainVerdict(False, 2, f"{z.id} is a node")
        if z.saddle_node and z.strong_side != dst:
            return ChainVerdict(False, 3, f"strong manifold of {z.id} lies in {z.strong_side}, not {dst}")
    if terminal.comp != c.components[-1] or not terminal.cs.real < 0:
        return ChainVerdict(False, 4, f"{terminal.id} is not a negative-index singularity of {c.components[-1]}")
    return ChainVerdict(True)


def all_chains(g: DecoratedGraph) -> dict[str, Chain]:
    return {
        c.id: find_approximation_chain(g, c.id)
        for c in g.components
        if c.invariant and not c.dicritical
    }
