"""Verification engines: coalition-enumeration core checks, exact core
witnesses for small instances, and empirical sensitivity probing.

Reports are plain data; nothing here asserts. The test suite and the
CLI decide what a failing report means.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import numpy as np

from .games import Allocation, GameInstance, GameKind, perturb
from .matching import integrate_matching, matching_core_allocate
from .mst import integrate_mst, mst_core_allocate
from .oracles import CharTable, _matching_table, _mst_value, _sorted_edge_ids, agents_of, char_table
from .shapley import shapley_exact
from .exactlp import solve_feasible

CORE_CHECK_MAX_AGENTS = 16
EXACT_SOLVE_MAX_AGENTS = 12

SLACK_TOL = 1e-6
GRAND_TOL = 1e-9


class CoreDirection(Enum):
    WELFARE_LOWER = "welfare_lower"
    COST_UPPER = "cost_upper"


@dataclass(frozen=True)
class CoreReport:
    alpha: float
    direction: CoreDirection
    worst_subset: tuple[int, ...]
    worst_slack: float
    grand_residual: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "direction": self.direction.value,
            "worst_subset": list(self.worst_subset),
            "worst_slack": self.worst_slack,
            "grand_residual": self.grand_residual,
            "pass": self.passed,
        }


def _subset_sums(values: Sequence[float], n: int) -> np.ndarray:
    """sums[mask] = sum of values over the agents in mask, for all masks."""
    sums = np.zeros(1)
    for v in range(n):
        sums = np.concatenate([sums, sums + values[v]])
    return sums


def core_check(
    inst: GameInstance,
    x: Allocation,
    alpha: float,
    tol: float = SLACK_TOL,
    grand_tol: float = GRAND_TOL,
    table: CharTable | None = None,
) -> CoreReport:
    """Check every proper coalition against its relaxed constraint.

    Welfare games require each coalition to receive at least alpha times
    its own value; cost games require it to pay at most alpha times its
    own cost. The grand coalition must match its value up to grand_tol.
    """
    if inst.n > CORE_CHECK_MAX_AGENTS:
        raise ValueError(f"core_check is limited to {CORE_CHECK_MAX_AGENTS} agents, got {inst.n}")
    if x.n != inst.n:
        raise ValueError(f"allocation indexes {x.n} agents but the instance has {inst.n}")
    welfare = inst.kind is GameKind.MATCHING
    if welfare and alpha > 1:
        raise ValueError(f"welfare games need alpha <= 1, got {alpha}")
    if not welfare and alpha < 1:
        raise ValueError(f"cost games need alpha >= 1, got {alpha}")
    if table is None:
        table = char_table(inst)
    nu = table.values
    sums = _subset_sums(x.values, inst.n)
    full = (1 << inst.n) - 1
    if welfare:
        slack = sums - alpha * nu
    else:
        slack = alpha * nu - sums
    slack[full] = np.inf  # grand coalition handled by the residual
    worst_mask = int(np.argmin(slack))
    worst_slack = float(slack[worst_mask])
    grand_residual = abs(float(sums[full]) - float(nu[full]))
    passed = worst_slack >= -tol and grand_residual <= grand_tol
    return CoreReport(
        alpha=alpha,
        direction=CoreDirection.WELFARE_LOWER if welfare else CoreDirection.COST_UPPER,
        worst_subset=agents_of(worst_mask),
        worst_slack=worst_slack,
        grand_residual=grand_residual,
        passed=passed,
    )


def iter_core_rows(
    inst: GameInstance, x: Allocation, alpha: float
) -> Iterator[tuple[tuple[int, ...], float, float, float]]:
    """(subset, coalition value, allocated sum, slack) for every proper coalition."""
    table = char_table(inst)
    sums = _subset_sums(x.values, inst.n)
    welfare = inst.kind is GameKind.MATCHING
    full = (1 << inst.n) - 1
    for mask in range(full):
        nu = float(table.values[mask])
        got = float(sums[mask])
        slack = got - alpha * nu if welfare else alpha * nu - got
        yield agents_of(mask), nu, got, slack


def _exact_char_values(inst: GameInstance) -> list[Fraction]:
    """Coalition values for all masks in exact rational arithmetic."""
    weights = [Fraction(w) for w in inst.weights]
    if inst.kind is GameKind.MATCHING:
        return [Fraction(v) for v in _matching_table(inst, weights)]
    order = _sorted_edge_ids(inst, weights)
    vals = [Fraction(0)] * (1 << inst.n)
    for mask in range(1, 1 << inst.n):
        vals[mask] = Fraction(_mst_value(inst, weights, mask, order))
    return vals


def exact_core_solve(inst: GameInstance) -> Allocation | None:
    """Exact core point of the unrelaxed coalition system, or None.

    Solves the full 2^n constraint system in rational arithmetic by
    constraint generation: repeatedly finds a point for the active
    coalitions and adds the most violated remaining one.
    """
    n = inst.n
    if n > EXACT_SOLVE_MAX_AGENTS:
        raise ValueError(f"exact_core_solve is limited to {EXACT_SOLVE_MAX_AGENTS} agents, got {n}")
    nu = _exact_char_values(inst)
    full = (1 << n) - 1
    welfare = inst.kind is GameKind.MATCHING
    rel = ">=" if welfare else "<="

    def coeffs(mask: int) -> list[Fraction]:
        return [Fraction(1) if (mask >> v) & 1 else Fraction(0) for v in range(n)]

    active: list[int] = [1 << v for v in range(n)]
    active_set = set(active)
    while True:
        constraints: list = [(coeffs(full), "==", nu[full])]
        constraints += [(coeffs(mask), rel, nu[mask]) for mask in active]
        point = solve_feasible(n, constraints)
        if point is None:
            return None
        sums: list[Fraction] = [Fraction(0)] * (1 << n)
        for mask in range(1, 1 << n):
            low = mask & -mask
            sums[mask] = sums[mask ^ low] + point[low.bit_length() - 1]
        worst_mask = -1
        worst_gap = Fraction(0)
        for mask in range(1, full):
            if mask in active_set:
                continue
            gap = nu[mask] - sums[mask] if welfare else sums[mask] - nu[mask]
            if gap > worst_gap:
                worst_gap = gap
                worst_mask = mask
        if worst_mask < 0:
            return Allocation.of(float(v) for v in point)
        active.append(worst_mask)
        active_set.add(worst_mask)


@dataclass(frozen=True)
class ProbeRow:
    edge_id: int
    weight: float
    delta: float
    ratio: float


@dataclass(frozen=True)
class LipschitzReport:
    allocator: str
    rows: tuple[ProbeRow, ...]
    max_ratio: float
    claimed_bound: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "allocator": self.allocator,
            "probes": [
                {"edge_id": r.edge_id, "w_e": r.weight, "delta": r.delta, "ratio": r.ratio}
                for r in self.rows
            ],
            "max_ratio": self.max_ratio,
            "claimed_bound": self.claimed_bound,
            "pass": self.passed,
        }


def probe_deltas(w_e: float, exponents: Sequence[int] = (0, 1, 2, 3)) -> list[float]:
    """Perturbation sizes for one edge: w_e * 10^-k, or plain 10^-k at weight zero."""
    if w_e > 0:
        return [w_e * 10.0 ** -k for k in exponents]
    return [10.0 ** -k for k in exponents]


Vectorizer = Callable[[GameInstance], Sequence[float]]


def lipschitz_scan(
    allocator: Vectorizer,
    inst: GameInstance,
    claimed_bound: float,
    name: str = "allocator",
    tol: float = SLACK_TOL,
    delta_exponents: Sequence[int] = (0, 1, 2, 3),
    threads: int = 1,
) -> LipschitzReport:
    """One probe per (edge, delta): re-run the allocator on the bumped
    weights and record the l1 change per unit of weight change."""
    base = np.asarray(allocator(inst), dtype=float)
    jobs = [
        (e.id, inst.weights[e.id], delta)
        for e in inst.edges
        for delta in probe_deltas(inst.weights[e.id], delta_exponents)
    ]

    def run(job: tuple[int, float, float]) -> ProbeRow:
        eid, w_e, delta = job
        bumped = inst.with_weights(perturb(inst.weights, eid, delta))
        try:
            out = np.asarray(allocator(bumped), dtype=float)
        except Exception as exc:
            raise RuntimeError(
                f"allocator {name!r} failed on edge {eid} with delta {delta}: {exc}"
            ) from exc
        ratio = float(np.abs(out - base).sum() / delta)
        return ProbeRow(eid, w_e, delta, ratio)

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run, jobs))
    else:
        rows = [run(job) for job in jobs]
    max_ratio = max((r.ratio for r in rows), default=0.0)
    return LipschitzReport(
        allocator=name,
        rows=tuple(rows),
        max_ratio=max_ratio,
        claimed_bound=claimed_bound,
        passed=max_ratio <= claimed_bound + tol,
    )


def named_allocator(
    name: str, epsilon: float | None = None, base: float | None = None
) -> Vectorizer:
    """Resolve an allocator name to a callable returning a payoff vector."""
    if name == "matching-core":
        if epsilon is None:
            raise ValueError("matching-core needs epsilon")
        eps = epsilon
        return lambda inst: matching_core_allocate(inst, inst.weights, eps).values
    if name == "mst-core":
        return lambda inst: mst_core_allocate(inst, inst.weights).values
    if name == "matching-raw":
        if base is None:
            raise ValueError("matching-raw needs a rounding base")
        alpha = base
        return lambda inst: integrate_matching(inst, inst.weights, alpha).values
    if name == "mst-raw":
        return lambda inst: integrate_mst(inst, inst.weights).values
    if name == "shapley":
        return lambda inst: shapley_exact(inst).values
    if name == "exact-core":

        def solve(inst: GameInstance) -> Sequence[float]:
            point = exact_core_solve(inst)
            if point is None:
                raise ValueError("the core is empty")
            return point.values

        return solve
    raise ValueError(f"unknown allocator {name!r}")


ALLOCATOR_NAMES = (
    "matching-core",
    "mst-core",
    "matching-raw",
    "mst-raw",
    "shapley",
    "exact-core",
)
