import math

import pytest

from coregauge.analysis import (
    core_check,
    exact_core_solve,
    iter_core_rows,
    lipschitz_scan,
    named_allocator,
    probe_deltas,
)
from coregauge.games import ROOT, Allocation, GameKind, l1_distance
from coregauge.instances import (
    gen_path_pair_zero_ends,
    gen_path_uniform,
    gen_random,
)
from coregauge.matching import matching_core_allocate, matching_raw_sensitivity_bound
from coregauge.mst import mst_core_allocate, mst_raw_sensitivity_bound
from coregauge.shapley import matching_lower_bound_value

from conftest import matching_instance, mst_instance


def test_core_check_single_edge_pass():
    inst = matching_instance(2, [(0, 1, 1.0)])
    report = core_check(inst, Allocation.of([0.5, 0.5]), 0.25)
    assert report.passed
    assert report.direction.value == "welfare_lower"
    assert report.grand_residual <= 1e-12


def test_core_check_accepts_exact_core_point_of_the_path():
    inst = gen_path_uniform(5)
    report = core_check(inst, Allocation.of([0, 1, 0, 1, 0]), 1.0)
    assert report.passed


def test_core_check_flags_the_wrong_core_point_under_zeroed_ends():
    # the stale point pays out 2 but the zeroed instance is only worth 1
    _, zeroed = gen_path_pair_zero_ends(5)
    report = core_check(zeroed, Allocation.of([0, 1, 0, 1, 0]), 1.0)
    assert not report.passed
    assert report.grand_residual == pytest.approx(1.0)


def test_core_check_cost_direction():
    inst = mst_instance(2, [(ROOT, 0, 1.0), (ROOT, 1, 4.0), (0, 1, 2.0)])
    x = mst_core_allocate(inst, inst.weights)
    assert core_check(inst, x, 4.0).passed
    # a grossly unfair split must fail the cost check at alpha 1
    report = core_check(inst, Allocation.of([3.0, 0.0]), 1.0)
    assert not report.passed
    assert report.worst_subset == (0,)


def test_core_check_guards():
    inst = gen_path_uniform(3)
    with pytest.raises(ValueError):
        core_check(inst, Allocation.of([1, 1, 1]), 1.5)  # welfare alpha > 1
    mst = mst_instance(1, [(ROOT, 0, 1.0)])
    with pytest.raises(ValueError):
        core_check(mst, Allocation.of([1.0]), 0.5)  # cost alpha < 1
    with pytest.raises(ValueError):
        core_check(inst, Allocation.of([1, 1]), 1.0)  # wrong index set
    big = matching_instance(17, [])
    with pytest.raises(ValueError):
        core_check(big, Allocation.of([0.0] * 17), 1.0)


def test_iter_core_rows_covers_all_proper_subsets():
    inst = gen_path_uniform(3)
    rows = list(iter_core_rows(inst, Allocation.of([0.5, 1.0, 0.5]), 1.0))
    assert len(rows) == 2**3 - 1
    subsets = {r[0] for r in rows}
    assert (0, 1) in subsets and () in subsets


def test_exact_core_solve_unique_points_of_the_zero_ends_pair():
    base, zeroed = gen_path_pair_zero_ends(5)
    assert exact_core_solve(base).values == (0.0, 1.0, 0.0, 1.0, 0.0)
    assert exact_core_solve(zeroed).values == (0.0, 0.0, 1.0, 0.0, 0.0)


def test_exact_core_solve_infeasible_triangle():
    tri = matching_instance(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    assert exact_core_solve(tri) is None


def test_exact_core_solve_mst_kind():
    inst = mst_instance(2, [(ROOT, 0, 1.0), (ROOT, 1, 4.0), (0, 1, 2.0)])
    x = exact_core_solve(inst)
    assert x is not None
    assert x.total() == pytest.approx(3.0, abs=1e-12)
    assert core_check(inst, x, 1.0).passed


def test_exact_core_solve_feasible_points_always_verify():
    for seed in range(6):
        inst = gen_random(GameKind.MATCHING, 5, 0.4, 10.0, seed)
        x = exact_core_solve(inst)
        if x is not None:
            assert core_check(inst, x, 1.0, tol=1e-9).passed


def test_exact_core_solve_size_guard():
    with pytest.raises(ValueError):
        exact_core_solve(matching_instance(13, []))


@pytest.mark.parametrize("n", [5, 7])
def test_core_selection_jump_ratio(n):
    base, zeroed = gen_path_pair_zero_ends(n)
    x1 = exact_core_solve(base)
    x2 = exact_core_solve(zeroed)
    gap = l1_distance(x1, x2)
    assert gap / 2.0 == pytest.approx((n - 2) / 2.0, abs=1e-12)


def test_probe_deltas_rule():
    assert probe_deltas(2.0) == [2.0, 0.2, 0.02, 0.002]
    assert probe_deltas(0.0) == [1.0, 0.1, 0.01, 0.001]


def test_lipschitz_scan_raw_matching_bound():
    inst = gen_random(GameKind.MATCHING, 6, 0.5, 10.0, 17)
    alpha = 1.5
    fn = named_allocator("matching-raw", base=alpha)
    report = lipschitz_scan(fn, inst, matching_raw_sensitivity_bound(alpha), name="matching-raw")
    assert report.passed
    assert len(report.rows) == 4 * inst.m
    assert report.max_ratio <= 12.0 / (alpha - 1.0) + 1e-6


def test_lipschitz_scan_mst_raw_bound():
    inst = gen_random(GameKind.MIN_SPANNING_TREE, 6, 0.4, 10.0, 23)
    fn = named_allocator("mst-raw")
    report = lipschitz_scan(fn, inst, mst_raw_sensitivity_bound(), name="mst-raw")
    assert report.passed


def test_lipschitz_scan_shapley_on_mst_meets_two_delta():
    inst = gen_random(GameKind.MIN_SPANNING_TREE, 5, 0.5, 10.0, 31)
    report = lipschitz_scan(named_allocator("shapley"), inst, 2.0, name="shapley")
    assert report.passed


def test_lipschitz_scan_threads_match_serial():
    inst = gen_random(GameKind.MATCHING, 6, 0.5, 10.0, 40)
    fn = named_allocator("matching-core", epsilon=0.25)
    serial = lipschitz_scan(fn, inst, 49.0, name="matching-core")
    threaded = lipschitz_scan(fn, inst, 49.0, name="matching-core", threads=4)
    assert [r.ratio for r in serial.rows] == [r.ratio for r in threaded.rows]


def test_lipschitz_scan_shapley_on_paths_tracks_the_lower_bound():
    for n in (5, 7, 9):
        inst = gen_path_uniform(n)
        report = lipschitz_scan(named_allocator("shapley"), inst, math.inf, name="shapley")
        assert report.max_ratio >= matching_lower_bound_value(n, 1.0) - 1e-9


def test_lipschitz_scan_reports_failing_probe_context():
    inst = matching_instance(2, [(0, 1, 1.0)])

    def broken(instance):
        if instance.weights[0] != 1.0:
            raise RuntimeError("boom")
        return [0.5, 0.5]

    with pytest.raises(RuntimeError, match="edge 0"):
        lipschitz_scan(broken, inst, 1.0, name="broken")


def test_named_allocator_validation():
    with pytest.raises(ValueError):
        named_allocator("matching-core")  # epsilon missing
    with pytest.raises(ValueError):
        named_allocator("matching-raw")  # base missing
    with pytest.raises(ValueError):
        named_allocator("nonsense")


def test_named_exact_core_raises_on_empty_core():
    tri = matching_instance(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    with pytest.raises(ValueError, match="empty"):
        named_allocator("exact-core")(tri)


def test_bird_style_parent_edge_shares_jump_while_ours_do_not():
    # classic instability of paying your parent edge in the optimal tree:
    # two near-tied routes flip on a tiny bump
    def bird(inst):
        order = sorted(range(inst.m), key=lambda eid: (inst.weights[eid], eid))
        parent_edge = {}
        joined = {ROOT}
        remaining = set(range(inst.n))
        chosen: list[int] = []
        uf = {v: v for v in list(range(inst.n)) + [ROOT]}

        def find(x):
            while uf[x] != x:
                uf[x] = uf[uf[x]]
                x = uf[x]
            return x

        for eid in order:
            e = inst.edges[eid]
            if find(e.u) != find(e.v):
                uf[find(e.u)] = find(e.v)
                chosen.append(eid)
        # root the tree at the supply vertex and charge each agent its parent edge
        adj: dict[int, list[tuple[int, int]]] = {}
        for eid in chosen:
            e = inst.edges[eid]
            adj.setdefault(e.u, []).append((e.v, eid))
            adj.setdefault(e.v, []).append((e.u, eid))
        shares = [0.0] * inst.n
        stack = [ROOT]
        seen = {ROOT}
        while stack:
            at = stack.pop()
            for nxt, eid in adj.get(at, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    shares[nxt] = inst.weights[eid]
                    stack.append(nxt)
        return shares

    # two near-tied supply routes: a 2e-9 bump flips which agent pays ~1
    inst = mst_instance(2, [(ROOT, 0, 1.0), (ROOT, 1, 1.0 + 1e-9), (0, 1, 0.01)])
    bumped = inst.with_weights((1.0 + 2e-9, 1.0 + 1e-9, 0.01))
    jump = l1_distance(bird(inst), bird(bumped))
    shift = sum(abs(a - b) for a, b in zip(inst.weights, bumped.weights))
    assert jump / shift > 1e6  # parent-edge shares are not stable
    ours = l1_distance(
        mst_core_allocate(inst, inst.weights), mst_core_allocate(bumped, bumped.weights)
    )
    assert ours / shift <= 20.0 / math.log(2.0) + 1.0 + 1e-6


@pytest.mark.parametrize("seed,eps", [(1, 0.05), (2, 0.25), (3, 0.5)])
def test_matching_core_allocations_pass_their_factor(seed, eps):
    inst = gen_random(GameKind.MATCHING, 8, 0.5, 10.0, seed)
    x = matching_core_allocate(inst, inst.weights, eps)
    assert core_check(inst, x, 0.5 - eps).passed


@pytest.mark.parametrize("seed", range(4))
def test_mst_core_allocations_pass_factor_four(seed):
    inst = gen_random(GameKind.MIN_SPANNING_TREE, 7, 0.5, 10.0, seed)
    x = mst_core_allocate(inst, inst.weights)
    assert core_check(inst, x, 4.0).passed
