"""Decorated resolution graphs: data model, JSON ingestion and validation.

A graph is the dual graph of an exceptional divisor. Vertices are the
divisor components (with integer self-intersection weights), edges are the
corners where two components cross, and singularities of the foliation that
are not corners hang off a single component as "tails". Every singularity
carries its Camacho-Sad index relative to the component(s) it sits on.
"""
from __future__ import annotations

import json
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

import jsonschema

DEFAULT_TOLERANCE = 1e-9


class GraphError(ValueError):
    """Base class for rejected graph input."""


class SchemaViolation(GraphError):
    pass


class DuplicateId(GraphError):
    pass


class DanglingReference(GraphError):
    pass


class SelfLoopCorner(GraphError):
    pass


class ReciprocityViolation(GraphError):
    pass


class SaddleNodeMissingStrongSide(GraphError):
    pass


class SaddleNodeIndexError(GraphError):
    """A saddle-node decoration whose strong-manifold index is not 0."""


class DisconnectedGraph(GraphError):
    pass


class DicriticalMarkedInvariant(GraphError):
    pass


class DicriticalDecorated(GraphError):
    """A Camacho-Sad decoration placed on a dicritical component."""


_COMPLEX = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}

GRAPH_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["components", "corners", "tails"],
    "properties": {
        "components": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "weight", "invariant", "dicritical"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "weight": {"type": "integer"},
                    "invariant": {"type": "boolean"},
                    "dicritical": {"type": "boolean"},
                },
            },
        },
        "corners": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "a", "b", "cs_a", "cs_b", "saddle_node", "strong_side"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "a": {"type": "string", "minLength": 1},
                    "b": {"type": "string", "minLength": 1},
                    "cs_a": _COMPLEX,
                    "cs_b": _COMPLEX,
                    "saddle_node": {"type": "boolean"},
                    "strong_side": {"type": ["string", "null"]},
                },
            },
        },
        "tails": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "comp", "cs", "saddle_node", "strong_is_transverse"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "comp": {"type": "string", "minLength": 1},
                    "cs": _COMPLEX,
                    "saddle_node": {"type": "boolean"},
                    "strong_is_transverse": {"type": "boolean"},
                },
            },
        },
    },
}


def complex_val(re: float, im: float = 0.0) -> complex:
    """Finite complex number; NaN and infinities are refused."""
    z = complex(re, im)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex value {z!r}")
    return z


@dataclass(frozen=True)
class Component:
    id: str
    weight: int
    invariant: bool = True
    dicritical: bool = False

    def __post_init__(self):
        if self.weight == 0:
            raise GraphError(f"component {self.id!r}: weight must be nonzero")
        if self.dicritical and self.invariant:
            raise DicriticalMarkedInvariant(
                f"component {self.id!r} is marked both dicritical and invariant"
            )


@dataclass(frozen=True)
class CornerSingularity:
    """Crossing of components ``comp_a`` and ``comp_b``.

    ``cs_a`` is the index relative to ``comp_a`` and ``cs_b`` relative to
    ``comp_b``. For a saddle-node, ``strong_side`` names the component that
    contains the strong manifold; the index relative to it is 0.
    """

    id: str
    comp_a: str
    comp_b: str
    cs_a: complex
    cs_b: complex
    saddle_node: bool = False
    strong_side: str | None = None

    def index_on(self, comp: str) -> complex:
        if comp == self.comp_a:
            return self.cs_a
        if comp == self.comp_b:
            return self.cs_b
        raise KeyError(f"corner {self.id!r} does not lie on {comp!r}")

    def other(self, comp: str) -> str:
        if comp == self.comp_a:
            return self.comp_b
        if comp == self.comp_b:
            return self.comp_a
        raise KeyError(f"corner {self.id!r} does not lie on {comp!r}")

    @property
    def central_side(self) -> str | None:
        if not self.saddle_node:
            return None
        return self.comp_b if self.strong_side == self.comp_a else self.comp_a

    @property
    def central_index(self) -> complex | None:
        """Index of the central manifold, for saddle-nodes."""
        side = self.central_side
        return None if side is None else self.index_on(side)


@dataclass(frozen=True)
class TailSingularity:
    """A singular point of ``comp`` that is not a corner.

    For a saddle-node tail, ``strong_is_transverse`` says whether the strong
    manifold is the separatrix leaving the divisor (then ``cs`` is the index
    of the central manifold, which is ``comp``) or lies inside ``comp``
    (then ``cs`` is 0).
    """

    id: str
    comp: str
    cs: complex
    saddle_node: bool = False
    strong_is_transverse: bool = False


@dataclass(frozen=True)
class IntersectionMatrix:
    ids: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.ids)

    def as_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class DecoratedGraph:
    components: tuple[Component, ...]
    corners: tuple[CornerSingularity, ...] = ()
    tails: tuple[TailSingularity, ...] = ()
    tolerance: float = field(default=DEFAULT_TOLERANCE, compare=False)

    def __post_init__(self):
        _validate(self)

    # lookups are recomputed on demand; graphs are small
    def component(self, cid: str) -> Component:
        for c in self.components:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def corner(self, zid: str) -> CornerSingularity:
        for z in self.corners:
            if z.id == zid:
                return z
        raise KeyError(zid)

    def tail(self, tid: str) -> TailSingularity:
        for t in self.tails:
            if t.id == tid:
                return t
        raise KeyError(tid)

    @property
    def component_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.components)

    def corners_on(self, cid: str) -> list[CornerSingularity]:
        return [z for z in self.corners if cid in (z.comp_a, z.comp_b)]

    def tails_on(self, cid: str) -> list[TailSingularity]:
        return [t for t in self.tails if t.comp == cid]

    def is_singular_corner(self, z: CornerSingularity) -> bool:
        """Corners meeting a non-invariant component are regular crossings."""
        return self.component(z.comp_a).invariant and self.component(z.comp_b).invariant

    def adjacency(self) -> dict[str, list[tuple[str, CornerSingularity]]]:
        adj: dict[str, list[tuple[str, CornerSingularity]]] = {c.id: [] for c in self.components}
        for z in self.corners:
            adj[z.comp_a].append((z.comp_b, z))
            adj[z.comp_b].append((z.comp_a, z))
        return adj

    def induced(self, ids: Iterable[str]) -> "DecoratedGraph":
        """Subgraph on ``ids``: corners among them and the tails they carry.

        Corners leaving the subgraph are dropped, so CS residuals of the
        result are not meaningful; use the parent graph for those.
        """
        keep = set(ids)
        return DecoratedGraph(
            tuple(c for c in self.components if c.id in keep),
            tuple(z for z in self.corners if z.comp_a in keep and z.comp_b in keep),
            tuple(t for t in self.tails if t.comp in keep),
            tolerance=self.tolerance,
        )


def _validate(g: DecoratedGraph) -> None:
    tol = g.tolerance
    comp_ids = [c.id for c in g.components]
    if not comp_ids:
        raise GraphError("graph has no components")
    if len(set(comp_ids)) != len(comp_ids):
        raise DuplicateId(f"duplicate component id among {sorted(comp_ids)}")
    sing_ids = [z.id for z in g.corners] + [t.id for t in g.tails]
    seen: set[str] = set()
    for sid in sing_ids:
        if sid in seen:
            raise DuplicateId(f"duplicate singularity id {sid!r}")
        seen.add(sid)
    comps = {c.id: c for c in g.components}

    for z in g.corners:
        for end in (z.comp_a, z.comp_b):
            if end not in comps:
                raise DanglingReference(f"corner {z.id!r} references unknown component {end!r}")
        if z.comp_a == z.comp_b:
            raise SelfLoopCorner(f"corner {z.id!r} joins {z.comp_a!r} to itself")
        for v in (z.cs_a, z.cs_b):
            complex_val(v.real, v.imag)
        singular = comps[z.comp_a].invariant and comps[z.comp_b].invariant
        if not singular:
            if z.saddle_node or z.strong_side is not None:
                raise DicriticalDecorated(
                    f"corner {z.id!r} meets a non-invariant component and cannot be a saddle-node"
                )
            continue
        if z.saddle_node:
            if z.strong_side not in (z.comp_a, z.comp_b):
                raise SaddleNodeMissingStrongSide(
                    f"saddle-node corner {z.id!r} needs strong_side in {{{z.comp_a!r}, {z.comp_b!r}}}"
                )
            if z.index_on(z.strong_side) != 0:
                raise SaddleNodeIndexError(
                    f"saddle-node corner {z.id!r}: index on strong side {z.strong_side!r} must be 0"
                )
        else:
            if z.strong_side is not None:
                raise SaddleNodeMissingStrongSide(
                    f"corner {z.id!r} is not a saddle-node but names a strong side"
                )
            if abs(z.cs_a * z.cs_b - 1) > tol:
                raise ReciprocityViolation(
                    f"corner {z.id!r}: cs_a*cs_b = {z.cs_a * z.cs_b} differs from 1 by more than {tol}"
                )

    for t in g.tails:
        if t.comp not in comps:
            raise DanglingReference(f"tail {t.id!r} references unknown component {t.comp!r}")
        complex_val(t.cs.real, t.cs.imag)
        if not comps[t.comp].invariant:
            raise DicriticalDecorated(f"tail {t.id!r} sits on non-invariant component {t.comp!r}")
        if t.saddle_node and not t.strong_is_transverse and t.cs != 0:
            raise SaddleNodeIndexError(
                f"saddle-node tail {t.id!r}: strong manifold lies in {t.comp!r}, so its index must be 0"
            )

    if not _connected(comp_ids, g.corners):
        raise DisconnectedGraph("underlying graph is not connected")


def _connected(ids: list[str], corners: Iterable[CornerSingularity]) -> bool:
    adj: dict[str, set[str]] = defaultdict(set)
    for z in corners:
        adj[z.comp_a].add(z.comp_b)
        adj[z.comp_b].add(z.comp_a)
    start = ids[0]
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == len(ids)


def _cplx(pair: list[float]) -> complex:
    return complex_val(float(pair[0]), float(pair[1]))


def build_graph(raw: str | bytes | Mapping[str, Any], tolerance: float = DEFAULT_TOLERANCE) -> DecoratedGraph:
    """Parse and validate a JSON graph description (text or decoded mapping)."""
    if isinstance(raw, (str, bytes)):
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"invalid JSON: {exc}") from exc
    else:
        data = raw
    try:
        jsonschema.validate(data, GRAPH_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaViolation(f"{where}: {exc.message}") from exc

    try:
        components = tuple(
            Component(c["id"], int(c["weight"]), c["invariant"], c["dicritical"])
            for c in data["components"]
        )
        corners = tuple(
            CornerSingularity(
                z["id"], z["a"], z["b"], _cplx(z["cs_a"]), _cplx(z["cs_b"]),
                z["saddle_node"], z["strong_side"],
            )
            for z in data["corners"]
        )
        tails = tuple(
            TailSingularity(t["id"], t["comp"], _cplx(t["cs"]), t["saddle_node"], t["strong_is_transverse"])
            for t in data["tails"]
        )
    except GraphError:
        raise
    except ValueError as exc:
        raise SchemaViolation(str(exc)) from exc
    return DecoratedGraph(components, corners, tails, tolerance=tolerance)


def load_graph(path, tolerance: float = DEFAULT_TOLERANCE) -> DecoratedGraph:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SchemaViolation(f"{path}: not UTF-8") from exc
    return build_graph(text, tolerance=tolerance)


def serialize(g: DecoratedGraph) -> dict[str, Any]:
    """Inverse of :func:`build_graph`."""
    return {
        "components": [
            {"id": c.id, "weight": c.weight, "invariant": c.invariant, "dicritical": c.dicritical}
            for c in g.components
        ],
        "corners": [
            {
                "id": z.id, "a": z.comp_a, "b": z.comp_b,
                "cs_a": [z.cs_a.real, z.cs_a.imag], "cs_b": [z.cs_b.real, z.cs_b.imag],
                "saddle_node": z.saddle_node, "strong_side": z.strong_side,
            }
            for z in g.corners
        ],
        "tails": [
            {
                "id": t.id, "comp": t.comp, "cs": [t.cs.real, t.cs.imag],
                "saddle_node": t.saddle_node, "strong_is_transverse": t.strong_is_transverse,
            }
            for t in g.tails
        ],
    }


def dumps(g: DecoratedGraph) -> str:
    return json.dumps(serialize(g), indent=2)


def intersection_matrix(g: DecoratedGraph) -> IntersectionMatrix:
    ids = g.component_ids
    pos = {cid: i for i, cid in enumerate(ids)}
    rows = [[0] * len(ids) for _ in ids]
    for i, c in enumerate(g.components):
        rows[i][i] = c.weight
    for z in g.corners:
        i, j = pos[z.comp_a], pos[z.comp_b]
        rows[i][j] += 1
        rows[j][i] += 1
    return IntersectionMatrix(ids, tuple(tuple(r) for r in rows))


def has_multi_edges(g: DecoratedGraph) -> bool:
    pairs = [frozenset((z.comp_a, z.comp_b)) for z in g.corners]
    return len(set(pairs)) != len(pairs)


def is_tree(g: DecoratedGraph) -> bool:
    # connectivity is a construction invariant
    return len(g.corners) == len(g.components) - 1 and not has_multi_edges(g)
