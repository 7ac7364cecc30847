"""Command-line front end.

Every command prints a JSON payload on stdout and a short human summary
on stderr. Exit codes: 0 success, 1 a verification report failed,
2 malformed input or bad parameters. Payloads are deterministic: keys
sorted, floats in shortest round-trip form.
"""

from __future__ import annotations

import csv
import json
import os

import click

from . import __version__
from .analysis import (
    ALLOCATOR_NAMES,
    core_check,
    iter_core_rows,
    lipschitz_scan,
    named_allocator,
)
from .games import (
    Allocation,
    GameInstance,
    GameKind,
    dump_instance,
    load_instance,
    validate_instance,
)
from .instances import gen_path_pair_bumped, gen_path_pair_zero_ends, gen_path_uniform, gen_random
from .matching import matching_core_allocate, matching_core_factor, matching_sensitivity_bound
from .mst import (
    MST_CORE_FACTOR,
    auxiliary_tree,
    mst_core_allocate,
    mst_sensitivity_bound,
    round_weights_mst,
)
from .oracles import char_value
from .shapley import shapley_exact, shapley_sample

EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def _emit(payload: dict, summary: str) -> None:
    click.echo(json.dumps(payload, sort_keys=True))
    click.echo(summary, err=True)


def _fail_input(message: str) -> "click.exceptions.Exit":
    click.echo(f"error: {message}", err=True)
    return click.exceptions.Exit(EXIT_INPUT_ERROR)


def _load_checked(path: str) -> GameInstance:
    try:
        inst = load_instance(path)
    except (OSError, ValueError) as exc:
        raise _fail_input(str(exc))
    result = validate_instance(inst)
    if not result.ok:
        click.echo(json.dumps({"violations": list(result.violations)}, sort_keys=True))
        raise _fail_input(f"{path}: invalid instance: " + "; ".join(result.violations))
    return inst


def _threads(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get("COREGAUGE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise _fail_input(f"COREGAUGE_THREADS is not an integer: {env!r}")
    return 1


@click.group()
@click.version_option(version=__version__, prog_name="coregauge")
def main() -> None:
    """Approximate-core allocations for matching and spanning-tree games."""


@main.command()
@click.argument("instance_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--game", type=click.Choice(["auto", "matching", "mst"]), default="auto")
@click.option("--epsilon", type=float, default=None, help="Core slack for matching games; required there.")
@click.option("--dump-tree", type=click.Path(dir_okay=False), default=None,
              help="Write the merge dendrogram (offset 0 rounding) to this file; spanning-tree games only.")
def allocate(instance_file: str, game: str, epsilon: float | None, dump_tree: str | None) -> None:
    """Compute the stable approximate-core allocation of an instance."""
    inst = _load_checked(instance_file)
    if game != "auto" and game != inst.kind.value:
        raise _fail_input(f"--game {game} does not match the instance kind {inst.kind.value!r}")
    if inst.kind is GameKind.MATCHING:
        if epsilon is None:
            raise _fail_input("matching games require --epsilon")
        if not 0.0 < epsilon <= 0.5:
            raise _fail_input(f"epsilon must lie in (0, 1/2], got {epsilon}")
        if dump_tree is not None:
            raise _fail_input("--dump-tree applies only to spanning-tree games")
        x = matching_core_allocate(inst, inst.weights, epsilon)
        factor = matching_core_factor(epsilon)
        bound = matching_sensitivity_bound(epsilon)
    else:
        x = mst_core_allocate(inst, inst.weights)
        factor = MST_CORE_FACTOR
        bound = mst_sensitivity_bound()
        if dump_tree is not None:
            tree = auxiliary_tree(inst, round_weights_mst(inst.weights, 0.0).rounded)
            with open(dump_tree, "w", encoding="utf-8") as fh:
                json.dump(tree.to_dict(), fh, sort_keys=True)
                fh.write("\n")
    grand = char_value(inst, range(inst.n))
    payload = {
        "allocation": {str(v): x.values[v] for v in range(inst.n)},
        "grand_value": grand,
        "alpha": factor,
        "lipschitz_bound": bound,
    }
    _emit(payload, f"allocated {grand:.6g} over {inst.n} agents (factor {factor:g})")


def _load_allocation(path: str, n: int) -> Allocation:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _fail_input(f"{path}: {exc}")
    mapping = data.get("allocation", data) if isinstance(data, dict) else None
    if not isinstance(mapping, dict):
        raise _fail_input(f"{path}: expected an object with per-agent values")
    values = [0.0] * n
    try:
        for key, val in mapping.items():
            values[int(key)] = float(val)
    except (ValueError, IndexError) as exc:
        raise _fail_input(f"{path}: bad allocation entry: {exc}")
    return Allocation.of(values)


@main.command("core-check")
@click.argument("instance_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("allocation_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--alpha", type=float, required=True, help="Relaxation factor of the coalition constraints.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None,
              help="Write one row per coalition to this file.")
def core_check_cmd(instance_file: str, allocation_file: str, alpha: float, csv_path: str | None) -> None:
    """Check an allocation against every relaxed coalition constraint."""
    inst = _load_checked(instance_file)
    x = _load_allocation(allocation_file, inst.n)
    try:
        report = core_check(inst, x, alpha)
    except ValueError as exc:
        raise _fail_input(str(exc))
    if csv_path:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["subset", "value", "allocated", "slack"])
            for subset, nu, got, slack in iter_core_rows(inst, x, alpha):
                writer.writerow([" ".join(map(str, subset)), repr(nu), repr(got), repr(slack)])
    verdict = "pass" if report.passed else "FAIL"
    _emit(
        report.to_dict(),
        f"core check {verdict}: worst slack {report.worst_slack:.3g} "
        f"on subset {list(report.worst_subset)}, grand residual {report.grand_residual:.3g}",
    )
    if not report.passed:
        raise click.exceptions.Exit(EXIT_CHECK_FAILED)


@main.command("shapley")
@click.argument("instance_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(["exact", "sample"]), default="exact")
@click.option("--samples", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def shapley_cmd(instance_file: str, method: str, samples: int, seed: int) -> None:
    """Exact or sampled Shapley values of an instance."""
    inst = _load_checked(instance_file)
    try:
        if method == "exact":
            result = shapley_exact(inst)
        else:
            result = shapley_sample(inst, samples, seed)
    except ValueError as exc:
        raise _fail_input(str(exc))
    payload = {
        "values": {str(v): result.values[v] for v in range(inst.n)},
        "method": result.method.value,
        "samples": result.samples,
        "seed": result.seed,
        "total": result.total(),
    }
    _emit(payload, f"shapley ({result.method.value}) total {result.total():.6g}")


@main.command("lipschitz")
@click.argument("instance_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--allocator", type=click.Choice(ALLOCATOR_NAMES), required=True)
@click.option("--bound", type=float, required=True, help="Claimed sensitivity bound to check against.")
@click.option("--epsilon", type=float, default=None, help="For matching-core.")
@click.option("--base", type=float, default=None, help="Rounding base for matching-raw.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None,
              help="Write one row per probe to this file.")
@click.option("--threads", type=int, default=None, help="Worker threads (or COREGAUGE_THREADS).")
def lipschitz_cmd(
    instance_file: str,
    allocator: str,
    bound: float,
    epsilon: float | None,
    base: float | None,
    csv_path: str | None,
    threads: int | None,
) -> None:
    """Probe an allocator with single-edge weight bumps."""
    inst = _load_checked(instance_file)
    try:
        fn = named_allocator(allocator, epsilon=epsilon, base=base)
        report = lipschitz_scan(fn, inst, bound, name=allocator, threads=_threads(threads))
    except (ValueError, RuntimeError) as exc:
        raise _fail_input(str(exc))
    if csv_path:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["edge_id", "w_e", "delta", "ratio"])
            for row in report.rows:
                writer.writerow([row.edge_id, repr(row.weight), repr(row.delta), repr(row.ratio)])
    verdict = "pass" if report.passed else "FAIL"
    _emit(
        report.to_dict(),
        f"lipschitz {verdict}: max ratio {report.max_ratio:.6g} vs bound {report.claimed_bound:.6g}",
    )
    if not report.passed:
        raise click.exceptions.Exit(EXIT_CHECK_FAILED)


@main.group()
def gen() -> None:
    """Instance generators."""


@gen.command("path")
@click.option("--n", type=int, required=True)
@click.option("-o", "--out", type=click.Path(dir_okay=False), required=True)
def gen_path(n: int, out: str) -> None:
    """Uniform-weight path (matching game)."""
    try:
        inst = gen_path_uniform(n)
    except ValueError as exc:
        raise _fail_input(str(exc))
    dump_instance(inst, out)
    _emit({"written": [out]}, f"wrote path n={n} to {out}")


@gen.command("path-zero-ends")
@click.option("--n", type=int, required=True)
@click.option("-o", "--out", type=click.Path(dir_okay=False), required=True)
@click.option("--out-second", type=click.Path(dir_okay=False), required=True)
def gen_zero_ends(n: int, out: str, out_second: str) -> None:
    """Uniform path and its copy with both end edges zeroed."""
    try:
        first, second = gen_path_pair_zero_ends(n)
    except ValueError as exc:
        raise _fail_input(str(exc))
    dump_instance(first, out)
    dump_instance(second, out_second)
    _emit({"written": [out, out_second]}, f"wrote zero-ends pair n={n}")


@gen.command("path-bump")
@click.option("--n", type=int, required=True)
@click.option("--delta", type=float, required=True)
@click.option("-o", "--out", type=click.Path(dir_okay=False), required=True)
@click.option("--out-second", type=click.Path(dir_okay=False), required=True)
def gen_bump(n: int, delta: float, out: str, out_second: str) -> None:
    """Uniform path and its copy with the second edge raised by delta."""
    try:
        first, second = gen_path_pair_bumped(n, delta)
    except ValueError as exc:
        raise _fail_input(str(exc))
    dump_instance(first, out)
    dump_instance(second, out_second)
    _emit({"written": [out, out_second]}, f"wrote bumped pair n={n} delta={delta}")


@gen.command("random")
@click.option("--kind", type=click.Choice(["matching", "mst"]), required=True)
@click.option("--n", type=int, required=True)
@click.option("--edge-prob", type=float, default=0.5, show_default=True)
@click.option("--w-max", type=float, default=10.0, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("-o", "--out", type=click.Path(dir_okay=False), required=True)
def gen_random_cmd(kind: str, n: int, edge_prob: float, w_max: float, seed: int, out: str) -> None:
    """Seeded random instance."""
    try:
        inst = gen_random(GameKind(kind), n, edge_prob, w_max, seed)
    except ValueError as exc:
        raise _fail_input(str(exc))
    dump_instance(inst, out)
    _emit({"written": [out]}, f"wrote random {kind} n={n} seed={seed} to {out}")


if __name__ == "__main__":
    main()
