"""Instance and allocation data model shared across the package.

A game instance is a weighted graph. In welfare (matching) games every
vertex is an agent; in cost (spanning tree) games there is one extra
supply vertex, written as vertex id -1, that is not an agent. All types
are immutable after construction and safe to share between workers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

ROOT = -1


class GameKind(Enum):
    MATCHING = "matching"
    MIN_SPANNING_TREE = "mst"


@dataclass(frozen=True)
class Edge:
    """Undirected edge; the id doubles as the tie-breaking index."""

    id: int
    u: int
    v: int

    def endpoints(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class GameInstance:
    """A graph game: agents 0..n-1, indexed edges, nonnegative weights.

    ``root`` is the distinguished supply vertex of a spanning-tree game;
    it is never an agent index. Edge ids must be exactly 0..m-1 and each
    edge's position must equal its id, so that ``weights[e.id]`` is the
    weight of edge ``e``.
    """

    kind: GameKind
    n: int
    edges: tuple[Edge, ...]
    weights: tuple[float, ...]
    root: int | None = None

    def __post_init__(self) -> None:
        if len(self.edges) != len(self.weights):
            raise ValueError("edges and weights must have the same length")
        for pos, e in enumerate(self.edges):
            if e.id != pos:
                raise ValueError(f"edge at position {pos} has id {e.id}; ids must be 0..m-1 in order")
        if self.kind is GameKind.MIN_SPANNING_TREE and self.root is None:
            object.__setattr__(self, "root", ROOT)
        if self.kind is GameKind.MATCHING and self.root is not None:
            raise ValueError("matching games have no root vertex")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def agents(self) -> range:
        return range(self.n)

    def with_weights(self, weights: Sequence[float]) -> "GameInstance":
        """Copy of this instance with a replaced weight vector."""
        if len(weights) != self.m:
            raise ValueError(f"expected {self.m} weights, got {len(weights)}")
        return GameInstance(self.kind, self.n, self.edges, tuple(float(w) for w in weights), self.root)

    def root_edge_weight(self, v: int) -> float:
        """Weight of the edge joining agent v to the root (spanning-tree games)."""
        if self.kind is not GameKind.MIN_SPANNING_TREE:
            raise ValueError("root edges exist only in spanning-tree games")
        for e in self.edges:
            if (e.u == self.root and e.v == v) or (e.v == self.root and e.u == v):
                return self.weights[e.id]
        raise ValueError(f"agent {v} has no edge to the root")


@dataclass(frozen=True)
class Allocation:
    """Per-agent payoff or cost share, indexed by agent id 0..n-1."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        for i, x in enumerate(self.values):
            if not math.isfinite(x):
                raise ValueError(f"allocation value for agent {i} is not finite: {x}")

    @classmethod
    def of(cls, values: Iterable[float]) -> "Allocation":
        return cls(tuple(float(x) for x in values))

    @property
    def n(self) -> int:
        return len(self.values)

    def total(self) -> float:
        return math.fsum(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[str, ...]


def validate_instance(inst: GameInstance) -> ValidationResult:
    """Check every structural invariant; violations are data, not errors."""
    bad: list[str] = []
    is_mst = inst.kind is GameKind.MIN_SPANNING_TREE
    if inst.n < 0:
        bad.append(f"negative agent count {inst.n}")
    seen_pairs: dict[tuple[int, int], int] = {}
    root_adjacent: set[int] = set()
    for e in inst.edges:
        if e.u == e.v:
            bad.append(f"edge {e.id} is a self-loop on vertex {e.u}")
            continue
        for x in (e.u, e.v):
            if x == ROOT:
                if not is_mst:
                    bad.append(f"edge {e.id} touches the root but the game kind is matching")
            elif not 0 <= x < inst.n:
                bad.append(f"edge {e.id} endpoint {x} is not an agent id")
        pair = (min(e.u, e.v), max(e.u, e.v))
        if pair in seen_pairs:
            bad.append(f"edges {seen_pairs[pair]} and {e.id} are parallel on vertices {pair}")
        else:
            seen_pairs[pair] = e.id
        if inst.weights[e.id] < 0:
            bad.append(f"edge {e.id} has negative weight {inst.weights[e.id]}")
        if not math.isfinite(inst.weights[e.id]):
            bad.append(f"edge {e.id} has non-finite weight {inst.weights[e.id]}")
        if is_mst and ROOT in (e.u, e.v):
            root_adjacent.add(e.u if e.v == ROOT else e.v)
    if is_mst:
        for v in inst.agents:
            if v not in root_adjacent:
                bad.append(f"agent {v} is not adjacent to the root")
    return ValidationResult(ok=not bad, violations=tuple(bad))


def l1_distance(a: Allocation | Sequence[float], b: Allocation | Sequence[float]) -> float:
    """Sum of coordinatewise absolute differences over a shared index set."""
    av = a.values if isinstance(a, Allocation) else tuple(a)
    bv = b.values if isinstance(b, Allocation) else tuple(b)
    if len(av) != len(bv):
        raise ValueError(f"index sets differ: {len(av)} vs {len(bv)}")
    return math.fsum(abs(x - y) for x, y in zip(av, bv))


def perturb(weights: Sequence[float], edge_id: int, delta: float) -> tuple[float, ...]:
    """Copy of ``weights`` with ``delta`` added to one coordinate.

    Every other coordinate is returned bit-identical.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if not 0 <= edge_id < len(weights):
        raise ValueError(f"unknown edge id {edge_id}")
    out = list(float(w) for w in weights)
    out[edge_id] += delta
    return tuple(out)


def instance_to_dict(inst: GameInstance) -> dict:
    """Serialize to the interchange schema (root appears as vertex -1)."""
    return {
        "kind": inst.kind.value,
        "n": inst.n,
        "edges": [
            {"id": e.id, "u": e.u, "v": e.v, "w": inst.weights[e.id]} for e in inst.edges
        ],
    }


def instance_from_dict(data: dict) -> GameInstance:
    """Parse the interchange schema; raises ValueError on malformed input."""
    try:
        kind = GameKind(data["kind"])
        n = int(data["n"])
        raw_edges = list(data["edges"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed instance: {exc}") from exc
    edges = []
    weights = []
    for rec in sorted(raw_edges, key=lambda r: r.get("id", 0)):
        try:
            edges.append(Edge(int(rec["id"]), int(rec["u"]), int(rec["v"])))
            weights.append(float(rec["w"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed edge record {rec!r}: {exc}") from exc
    ids = [e.id for e in edges]
    if ids != list(range(len(edges))):
        raise ValueError(f"edge ids must be exactly 0..{len(edges) - 1}, got {ids}")
    root = ROOT if kind is GameKind.MIN_SPANNING_TREE else None
    return GameInstance(kind, n, tuple(edges), tuple(weights), root)


def load_instance(path: str) -> GameInstance:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path} is not valid JSON: {exc}") from exc
    return instance_from_dict(data)


def dump_instance(inst: GameInstance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(inst), fh, sort_keys=True)
        fh.write("\n")
