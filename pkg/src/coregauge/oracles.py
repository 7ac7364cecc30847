"""Exact characteristic-function evaluation for both game kinds.

The value of a coalition S is the optimum of the underlying problem on
the induced substructure: maximum matching weight of G[S], or minimum
spanning tree weight of G[S + root]. Both oracles are exact; the
matching side uses a dynamic program over vertex subsets, the tree side
Kruskal with union-find. The helpers are generic over the numeric type
of the weights so that exact rational runs reuse the same code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .games import ROOT, GameInstance, GameKind

CHAR_TABLE_MAX_AGENTS = 20

MONOTONICITY_TOL = 1e-9


def mask_of(agents: Iterable[int]) -> int:
    """Bitmask encoding of an agent subset."""
    mask = 0
    for v in agents:
        mask |= 1 << v
    return mask


def agents_of(mask: int) -> tuple[int, ...]:
    """Sorted agent ids encoded in a bitmask."""
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _adjacency(inst: GameInstance, weights: Sequence) -> list[list[tuple[int, object]]]:
    adj: list[list[tuple[int, object]]] = [[] for _ in range(inst.n)]
    for e in inst.edges:
        if e.u == ROOT or e.v == ROOT:
            continue
        w = weights[e.id]
        adj[e.u].append((e.v, w))
        adj[e.v].append((e.u, w))
    return adj


def _matching_table(inst: GameInstance, weights: Sequence) -> list:
    """dp[mask] = maximum matching weight of the subgraph induced by mask."""
    adj = _adjacency(inst, weights)
    size = 1 << inst.n
    dp: list = [0] * size
    for mask in range(1, size):
        v = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << v)
        best = dp[rest]
        for u, w in adj[v]:
            ubit = 1 << u
            if rest & ubit:
                cand = w + dp[rest ^ ubit]
                if cand > best:
                    best = cand
        dp[mask] = best
    return dp


def max_weight_matching(inst: GameInstance, S: Iterable[int]) -> float:
    """Exact maximum matching weight of the subgraph induced by S."""
    if inst.kind is not GameKind.MATCHING:
        raise ValueError("max_weight_matching requires a matching game")
    members = sorted(set(S))
    if any(not 0 <= v < inst.n for v in members):
        raise ValueError(f"subset {members} contains non-agent ids")
    if len(members) <= 1:
        return 0.0
    local = {v: i for i, v in enumerate(members)}
    adj: list[list[tuple[int, float]]] = [[] for _ in members]
    for e in inst.edges:
        if e.u in local and e.v in local:
            w = inst.weights[e.id]
            adj[local[e.u]].append((local[e.v], w))
            adj[local[e.v]].append((local[e.u], w))
    size = 1 << len(members)
    dp = [0.0] * size
    for mask in range(1, size):
        v = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << v)
        best = dp[rest]
        for u, w in adj[v]:
            ubit = 1 << u
            if rest & ubit:
                cand = w + dp[rest ^ ubit]
                if cand > best:
                    best = cand
        dp[mask] = best
    return dp[size - 1]


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, size: int) -> None:
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _mst_value(inst: GameInstance, weights: Sequence, smask: int, order: Sequence[int]):
    """Spanning tree weight of G[S + root]; ``order`` presorts edge ids by weight."""
    n = inst.n
    rooted = n  # union-find slot for the root vertex
    uf = _UnionFind(n + 1)
    needed = bin(smask).count("1")
    total = 0
    taken = 0
    if needed == 0:
        return 0.0
    for eid in order:
        e = inst.edges[eid]
        a = rooted if e.u == ROOT else e.u
        b = rooted if e.v == ROOT else e.v
        if a != rooted and not (smask >> a) & 1:
            continue
        if b != rooted and not (smask >> b) & 1:
            continue
        if uf.union(a, b):
            total = total + weights[eid]
            taken += 1
            if taken == needed:
                break
    if taken != needed:
        raise ValueError("induced subgraph is not connected through the root")
    return total


def _sorted_edge_ids(inst: GameInstance, weights: Sequence) -> list[int]:
    return sorted(range(inst.m), key=lambda eid: (weights[eid], eid))


def mst_weight(inst: GameInstance, S: Iterable[int]) -> float:
    """Exact minimum spanning tree weight of the subgraph induced by S + root."""
    if inst.kind is not GameKind.MIN_SPANNING_TREE:
        raise ValueError("mst_weight requires a spanning-tree game")
    smask = mask_of(S)
    if smask >> inst.n:
        raise ValueError("subset contains non-agent ids")
    return float(_mst_value(inst, inst.weights, smask, _sorted_edge_ids(inst, inst.weights)))


def char_value(inst: GameInstance, S: Iterable[int]) -> float:
    """Coalition value: dispatches on the game kind; the empty set is worth 0."""
    members = set(S)
    if not members:
        return 0.0
    if inst.kind is GameKind.MATCHING:
        return max_weight_matching(inst, members)
    return mst_weight(inst, members)


@dataclass(frozen=True)
class CharTable:
    """Coalition values for every subset, indexed by bitmask over agents."""

    game: GameInstance
    values: np.ndarray

    def __getitem__(self, mask: int) -> float:
        return float(self.values[mask])

    def value_of(self, S: Iterable[int]) -> float:
        return float(self.values[mask_of(S)])

    @property
    def grand(self) -> float:
        return float(self.values[len(self.values) - 1])


def char_table(inst: GameInstance) -> CharTable:
    """All 2^n coalition values; refuses instances with more than 20 agents."""
    if inst.n > CHAR_TABLE_MAX_AGENTS:
        raise ValueError(f"coalition enumeration is limited to {CHAR_TABLE_MAX_AGENTS} agents, got {inst.n}")
    if inst.kind is GameKind.MATCHING:
        dp = _matching_table(inst, inst.weights)
        return CharTable(inst, np.asarray(dp, dtype=float))
    order = _sorted_edge_ids(inst, inst.weights)
    vals = np.zeros(1 << inst.n)
    for smask in range(1, 1 << inst.n):
        vals[smask] = _mst_value(inst, inst.weights, smask, order)
    return CharTable(inst, vals)


def marginal_monotonicity_check(
    inst: GameInstance, f: int, delta: float, v: int, S: Iterable[int]
) -> bool:
    """Executable witness that raising one edge weight helps a larger
    coalition no more than it helps the smaller one.

    Compares the increase of the coalition value of S and of S + v when
    edge f (with both endpoints inside S) is made ``delta`` heavier.
    """
    if inst.kind is not GameKind.MIN_SPANNING_TREE:
        raise ValueError("marginal_monotonicity_check requires a spanning-tree game")
    if delta <= 0:
        raise ValueError("delta must be positive")
    members = set(S)
    if v in members:
        raise ValueError(f"agent {v} must lie outside S")
    if not 0 <= v < inst.n:
        raise ValueError(f"{v} is not an agent id")
    edge = inst.edges[f] if 0 <= f < inst.m else None
    if edge is None:
        raise ValueError(f"unknown edge id {f}")
    if edge.u not in members or edge.v not in members:
        raise ValueError(f"edge {f} must have both endpoints in S")
    bumped = inst.with_weights(
        tuple(w + delta if eid == f else w for eid, w in enumerate(inst.weights))
    )
    with_v = members | {v}
    lhs = mst_weight(bumped, with_v) - mst_weight(inst, with_v)
    rhs = mst_weight(bumped, members) - mst_weight(inst, members)
    return lhs <= rhs + MONOTONICITY_TOL
