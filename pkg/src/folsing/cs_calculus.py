"""Camacho-Sad index arithmetic on decorated graphs.

Covers eigenvalue classification, the index-sum residual on each invariant
component, negative-index witnesses on negative-definite trees, the
non-negative/strong/weak classifications, the punctured divisor D_* and the
separatrix-versus-nodal-corner count.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .definiteness import is_negative_definite
from .divisor_graph import (
    CornerSingularity,
    DecoratedGraph,
    TailSingularity,
    intersection_matrix,
    is_tree,
)
from .tree_order_h import NotATree, RootedOrder


class EigenClass(str, enum.Enum):
    HYPERBOLIC = "hyperbolic"
    SADDLE = "saddle"
    NODE = "node"
    SADDLE_NODE = "saddle_node"
    NON_REDUCED = "non_reduced"


class InconsistentDecoration(ValueError):
    pass


class DicriticalComponent(ValueError):
    pass


@dataclass(frozen=True)
class ClassifiedEigenvalue:
    value: complex | Fraction
    kind: EigenClass


def classify_eigenvalue(lam) -> ClassifiedEigenvalue:
    """Classify the eigenvalue ratio of a singularity.

    Exact rationals (``int``/``Fraction``) that are positive are not reduced.
    Floats are never treated as rational, so a positive real float is a node.
    """
    if isinstance(lam, Rational):
        q = Fraction(lam)
        if q > 0:
            kind = EigenClass.NON_REDUCED
        elif q < 0:
            kind = EigenClass.SADDLE
        else:
            kind = EigenClass.SADDLE_NODE
        return ClassifiedEigenvalue(q, kind)
    z = complex(lam)
    if z != z or abs(z) == float("inf"):
        raise ValueError(f"eigenvalue must be finite, got {lam!r}")
    if z.imag != 0:
        kind = EigenClass.HYPERBOLIC
    elif z.real < 0:
        kind = EigenClass.SADDLE
    elif z.real == 0:
        kind = EigenClass.SADDLE_NODE
    else:
        kind = EigenClass.NODE
    return ClassifiedEigenvalue(z, kind)


def corner_class(z: CornerSingularity) -> EigenClass:
    if z.saddle_node:
        return EigenClass.SADDLE_NODE
    kinds = {classify_eigenvalue(z.cs_a).kind, classify_eigenvalue(z.cs_b).kind}
    if EigenClass.NODE in kinds:
        return EigenClass.NODE
    return kinds.pop() if len(kinds) == 1 else EigenClass.HYPERBOLIC


def is_nodal_corner(g: DecoratedGraph, z: CornerSingularity) -> bool:
    return g.is_singular_corner(z) and corner_class(z) is EigenClass.NODE


# -- residuals ---------------------------------------------------------------

def cs_formula_residual(g: DecoratedGraph, comp: str) -> complex:
    """Sum of indices of the singularities on ``comp`` minus its weight."""
    c = g.component(comp)
    if c.dicritical or not c.invariant:
        raise DicriticalComponent(f"{comp!r} is not invariant; it carries no index sum")
    total = sum((z.index_on(comp) for z in g.corners_on(comp) if g.is_singular_corner(z)), 0j)
    total += sum((t.cs for t in g.tails_on(comp)), 0j)
    return total - c.weight


def residual_ok(residual: complex, tolerance: float, partial: bool = False) -> bool:
    """Equality check, or with ``partial`` the one-sided bound Re(sum) <= w."""
    if partial:
        return residual.real <= tolerance
    return abs(residual) <= tolerance


@dataclass
class CSReport:
    residuals: dict[str, complex]
    failing_components: list[str]
    reciprocity: dict[str, float]
    failing_corners: list[str]

    @property
    def ok(self) -> bool:
        return not self.failing_components and not self.failing_corners


def verify_cs(g: DecoratedGraph, tolerance: float | None = None, partial: bool = False) -> CSReport:
    tol = g.tolerance if tolerance is None else tolerance
    residuals = {
        c.id: cs_formula_residual(g, c.id) for c in g.components if c.invariant
    }
    failing = [cid for cid, r in residuals.items() if not residual_ok(r, tol, partial)]
    recip = {
        z.id: abs(z.cs_a * z.cs_b - 1)
        for z in g.corners
        if g.is_singular_corner(z) and not z.saddle_node
    }
    bad_corners = [zid for zid, err in recip.items() if err > tol]
    return CSReport(residuals, failing, recip, bad_corners)


# -- witnesses ---------------------------------------------------------------

@dataclass(frozen=True)
class WitnessReport:
    subgraph: frozenset[str]
    witness: str | None
    re_cs: float | None
    component: str | None = None

    def as_dict(self) -> dict:
        return {
            "subgraph": sorted(self.subgraph),
            "witness": self.witness,
            "component": self.component,
            "re_cs": self.re_cs,
        }


def negative_tails(g: DecoratedGraph, comps) -> list[TailSingularity]:
    """Tails on ``comps`` with negative real index, most negative first."""
    keep = set(comps)
    found = [t for t in g.tails if t.comp in keep and t.cs.real < 0]
    return sorted(found, key=lambda t: (t.cs.real, t.id))


def _check_subtree(g: DecoratedGraph, comps: frozenset[str]) -> DecoratedGraph:
    for cid in comps:
        if not g.component(cid).invariant:
            raise DicriticalComponent(f"{cid!r} is not invariant")
    sub = g.induced(comps) if len(comps) < len(g.components) else g
    if not is_tree(sub):
        raise NotATree(f"subgraph {sorted(comps)} is not a tree")
    return sub


def find_negative_index_tail(
    g: DecoratedGraph,
    subgraph=None,
    tolerance: float | None = None,
    partial: bool = False,
) -> WitnessReport:
    """Tail with Re(index) < 0 on a connected invariant subtree.

    On a negative-definite subtree whose index sums balance, such a tail
    must exist; failing to find one raises :class:`InconsistentDecoration`.
    Residuals are taken in the full graph, since corners leaving the
    subtree still contribute to each component's index sum.
    """
    tol = g.tolerance if tolerance is None else tolerance
    comps = frozenset(g.component_ids if subgraph is None else subgraph)
    try:
        sub = _check_subtree(g, comps)
    except ValueError as exc:
        # DisconnectedGraph from induced() is a ValueError too
        if isinstance(exc, (NotATree, DicriticalComponent)):
            raise
        raise NotATree(str(exc)) from exc
    found = negative_tails(g, comps)
    if found:
        t = found[0]
        return WitnessReport(comps, t.id, t.cs.real, t.comp)
    bad = [cid for cid in sorted(comps) if not residual_ok(cs_formula_residual(g, cid), tol, partial)]
    if bad:
        detail = ", ".join(f"{cid}: {cs_formula_residual(g, cid)}" for cid in bad)
        raise InconsistentDecoration(f"index sums do not match weights ({detail})")
    if is_negative_definite(intersection_matrix(sub)):
        raise InconsistentDecoration(
            f"no tail with negative real index on negative-definite subtree {sorted(comps)}"
        )
    return WitnessReport(comps, None, None)


@dataclass(frozen=True)
class BoundEntry:
    vertex: str
    corner: str
    successor: str
    re_cs_out: float      # Re CS(Q, q_out)
    h: Fraction
    re_cs_in: float       # Re CS(successor, q_out)
    flagged: bool         # bound Re CS(Q, q_out) <= h(Q) fails

    def as_dict(self) -> dict:
        return {
            "vertex": self.vertex, "corner": self.corner, "successor": self.successor,
            "re_cs_out": self.re_cs_out, "h": str(self.h), "re_cs_in": self.re_cs_in,
            "transfer_ok": self.re_cs_in >= float(1 / self.h) if self.h else None,
            "flagged": self.flagged,
        }


@dataclass
class BoundDiagnostic:
    entries: list[BoundEntry]
    root: str
    root_sum: float       # sum of Re CS(root, p_j) over the root's predecessor corners
    root_bound: Fraction  # w(root) - h(root)

    @property
    def flagged(self) -> list[str]:
        return [e.vertex for e in self.entries if e.flagged]

    @property
    def root_contradiction(self) -> bool:
        """True when nothing was flagged, yet the root sum breaks the index formula."""
        return not self.flagged and self.root_sum >= self.root_bound


def proof_bound_diagnostic(g: DecoratedGraph, order: RootedOrder, h: dict[str, Fraction]) -> BoundDiagnostic:
    """Locate where negativity must enter, under the all-tails-nonnegative assumption.

    If every tail had Re(index) >= 0, each non-root vertex Q would satisfy
    Re CS(Q, q_out) <= h(Q) on the corner toward its successor. Vertices
    where this fails are flagged: a negative contribution lies in their
    subtree.
    """
    if not is_tree(g):
        raise NotATree("diagnostic requires a tree")
    corner_between = {}
    for z in g.corners:
        corner_between[frozenset((z.comp_a, z.comp_b))] = z
    entries = []
    for v in order.order:
        succ = order.successor[v]
        if succ is None:
            continue
        z = corner_between[frozenset((v, succ))]
        out = z.index_on(v).real
        entries.append(BoundEntry(v, z.id, succ, out, h[v], z.index_on(succ).real, out > h[v]))
    root = order.root
    root_sum = sum(
        corner_between[frozenset((root, u))].index_on(root).real for u in order.predecessors[root]
    )
    return BoundDiagnostic(entries, root, root_sum, g.component(root).weight - h[root])


# -- classifications ---------------------------------------------------------

def is_non_negative_singularity(s: CornerSingularity | TailSingularity) -> bool:
    if isinstance(s, CornerSingularity):
        if s.saddle_node:
            return s.central_index.real >= 0
        return s.cs_a.real >= 0 and s.cs_b.real >= 0
    if s.saddle_node and not s.strong_is_transverse:
        # central manifold is the transverse curve; its index is not recorded
        return False
    return s.cs.real >= 0


def strong_weak_classify(t: TailSingularity, g: DecoratedGraph | None = None) -> str:
    if g is not None and not g.component(t.comp).invariant:
        raise DicriticalComponent(f"tail {t.id!r} is not on an invariant component")
    if t.saddle_node:
        return "strong" if t.strong_is_transverse else "weak"
    return "strong" if t.cs.real < 0 else "weak"


@dataclass(frozen=True)
class DStarPiece:
    components: frozenset[str]
    corners: tuple[str, ...]  # corners of the closure subgraph

    def as_dict(self) -> dict:
        return {"components": sorted(self.components), "corners": list(self.corners)}


def d_star_components(g: DecoratedGraph) -> list[DStarPiece]:
    """Connected pieces of the divisor minus dicriticals and non-negative points."""
    alive = [c.id for c in g.components if c.invariant and not c.dicritical]
    adj: dict[str, list[str]] = {cid: [] for cid in alive}
    for z in g.corners:
        if z.comp_a in adj and z.comp_b in adj and not is_non_negative_singularity(z):
            adj[z.comp_a].append(z.comp_b)
            adj[z.comp_b].append(z.comp_a)
    seen: set[str] = set()
    pieces = []
    for start in sorted(alive):
        if start in seen:
            continue
        piece = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in adj[v]:
                if u not in piece:
                    piece.add(u)
                    queue.append(u)
        seen |= piece
        corners = tuple(z.id for z in g.corners if z.comp_a in piece and z.comp_b in piece)
        pieces.append(DStarPiece(frozenset(piece), corners))
    return pieces


def separatrix_witnesses(g: DecoratedGraph, tolerance: float | None = None, partial: bool = False) -> list[WitnessReport]:
    return [
        find_negative_index_tail(g, piece.components, tolerance=tolerance, partial=partial)
        for piece in d_star_components(g)
    ]


@dataclass
class SeparatrixCensus:
    tails: int
    nodal_corners: int
    strong: int
    weak: int
    dicritical: int
    holds: bool = field(default=False)
    dicritical_trivial: bool = field(default=False)

    def as_dict(self) -> dict:
        return {
            "tails": self.tails, "nodal_corners": self.nodal_corners,
            "strong": self.strong, "weak": self.weak, "dicritical": self.dicritical,
            "holds": self.holds, "dicritical_trivial": self.dicritical_trivial,
        }


def strong_separatrix_count_check(g: DecoratedGraph) -> SeparatrixCensus:
    kinds = [strong_weak_classify(t) for t in g.tails]
    census = SeparatrixCensus(
        tails=len(g.tails),
        nodal_corners=sum(1 for z in g.corners if is_nodal_corner(g, z)),
        strong=kinds.count("strong"),
        weak=kinds.count("weak"),
        dicritical=sum(1 for c in g.components if c.dicritical),
    )
    if census.dicritical:
        # infinitely many separatrices through a dicritical component
        census.holds = True
        census.dicritical_trivial = True
    else:
        census.holds = census.tails > census.nodal_corners
    return census
