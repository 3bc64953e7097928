"""Command-line interface.

Every subcommand is a thin client of the compute service: it resolves flags,
posts a request (in-process by default, to ``--server URL`` otherwise), and
writes the returned data plus a reproducibility manifest into ``--out``.
Nothing is ever written outside the output directory.

Exit codes: 0 success, 1 numerical failure, 2 invalid flags or limits.
"""

from __future__ import annotations

import csv
import json
import math
import os

import click

from . import __version__
from .client import ServiceError, ServiceUsageError, make_client, post
from .manifest import write_manifest
from .sweep import (
    CHECKPOINT_NAME,
    GridSpec,
    load_checkpoint,
    phase_csv_header,
    phase_csv_rows,
    run_sweep,
)

WORKERS_ENV = "LRKITAEV_WORKERS"


def _config_defaults(path: str) -> dict:
    """Parse a plain `key = value` file into per-command default maps."""
    values: dict[str, str] = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise click.UsageError(f"bad config line (expected key = value): {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = value
    commands = ("spectrum", "lanczos", "diagnose", "sweep", "oracle", "serve")
    return {cmd: dict(values) for cmd in commands}


@click.group()
@click.version_option(version=__version__)
@click.option(
    "--server",
    envvar="LRKITAEV_SERVER",
    default=None,
    metavar="URL",
    help="Base URL of a running service; by default requests are served in-process.",
)
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Plain key = value file supplying flag defaults (flags override it).",
)
@click.pass_context
def main(ctx, server, config_path):
    """Long-range Kitaev chain: spectra, Lanczos runs, diagnostics, sweeps."""
    if config_path:
        ctx.default_map = _config_defaults(config_path)
    ctx.obj = {"server": server}


def _service_call(ctx, path: str, payload: dict) -> dict:
    try:
        with make_client(ctx.obj["server"]) as client:
            return post(client, path, payload)
    except ServiceUsageError as exc:
        raise click.UsageError(str(exc))
    except ServiceError as exc:
        raise click.ClickException(f"numerical failure: {exc}")


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(x: float) -> str:
    return repr(float(x))


def _resolve_theta(theta, theta_over_pi):
    if (theta is None) == (theta_over_pi is None):
        raise click.UsageError("provide exactly one of --theta / --theta-over-pi")
    return theta if theta is not None else theta_over_pi * math.pi


def _resolve_workers(workers) -> int:
    if workers is not None:
        return workers
    return max(1, os.cpu_count() or 1)


def common_point_options(fn):
    options = [
        click.option("--n", type=int, required=True, help="number of sites"),
        click.option("--alpha", type=float, required=True, help="decay exponent"),
        click.option("--theta", type=float, default=None, help="angle in radians"),
        click.option("--theta-over-pi", type=float, default=None,
                     help="angle as a fraction of pi"),
        click.option("--epsilon", type=float, required=True,
                     help="hopping-pairing imbalance"),
        click.option("--seed", default="gamma1", show_default=True,
                     help="seed operator, e.g. gamma1+gamma2"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


@main.command()
@click.option("--n", type=int, required=True, help="number of sites")
@click.option("--alpha", type=float, required=True, help="decay exponent")
@click.option("--epsilon", type=float, required=True, help="hopping-pairing imbalance")
@click.option("--theta-points", type=int, default=99, show_default=True,
              help="interior theta grid points in (0, pi)")
@click.option("--window-size", type=int, default=None,
              help="edge window size [default: floor(sqrt(N))]")
@click.option("--out", type=click.Path(file_okay=False), required=True)
@click.pass_context
def spectrum(ctx, n, alpha, epsilon, theta_points, window_size, out):
    """Positive-branch BdG spectrum and edge weights versus theta."""
    payload = {
        "n": n,
        "alpha": alpha,
        "epsilon": epsilon,
        "theta_points": theta_points,
        "window_size": window_size,
    }
    data = _service_call(ctx, "/api/spectrum", payload)
    os.makedirs(out, exist_ok=True)
    header = ["theta_over_pi", "mode_index", "energy", "energy_normalized", "edge_weight"]
    rows = [
        [_fmt(r["theta_over_pi"]), str(r["mode_index"]), _fmt(r["energy"]),
         _fmt(r["energy_normalized"]), _fmt(r["edge_weight"])]
        for r in data["rows"]
    ]
    _write_csv(os.path.join(out, "spectrum.csv"), header, rows)
    write_manifest(out, "spectrum", payload)
    click.echo(f"wrote {len(rows)} rows to {os.path.join(out, 'spectrum.csv')}")


def _run_payload(n, alpha, theta, theta_over_pi, epsilon, seed, max_steps):
    return {
        "params": {
            "n": n,
            "alpha": alpha,
            "theta": _resolve_theta(theta, theta_over_pi),
            "epsilon": epsilon,
        },
        "seed": seed,
        "settings": {} if max_steps is None else {"max_steps": max_steps},
    }


def _write_run_files(out: str, record: dict) -> None:
    name = f"lanczos_{record['representation']}"
    with open(os.path.join(out, f"{name}.json"), "w") as fh:
        json.dump(record, fh, indent=2)
        fh.write("\n")
    rows = [
        [str(k + 1), _fmt(b), "odd" if (k + 1) % 2 else "even"]
        for k, b in enumerate(record["b"])
    ]
    _write_csv(os.path.join(out, f"{name}.csv"), ["n", "b", "parity"], rows)


@main.command()
@common_point_options
@click.option("--max-steps", type=int, default=None, help="step budget [default: 2N]")
@click.option("--out", type=click.Path(file_okay=False), required=True)
@click.pass_context
def lanczos(ctx, n, alpha, theta, theta_over_pi, epsilon, seed, max_steps, out):
    """Stability-gated Lanczos coefficients in both representations."""
    payload = _run_payload(n, alpha, theta, theta_over_pi, epsilon, seed, max_steps)
    data = _service_call(ctx, "/api/lanczos", payload)
    os.makedirs(out, exist_ok=True)
    _write_run_files(out, data["majorana"])
    _write_run_files(out, data["nambu"])
    with open(os.path.join(out, "cross_check.json"), "w") as fh:
        json.dump(
            {
                "mutual_stable_depth": data["mutual_stable_depth"],
                "cross_check_tol": data["cross_check_tol"],
            },
            fh,
            indent=2,
        )
        fh.write("\n")
    write_manifest(out, "lanczos", payload)
    click.echo(
        f"majorana: {data['majorana']['n_stable']} coefficients "
        f"({data['majorana']['termination_reason']}); "
        f"nambu: {data['nambu']['n_stable']} "
        f"({data['nambu']['termination_reason']}); "
        f"mutually stable depth {data['mutual_stable_depth']}"
    )


@main.command()
@common_point_options
@click.option("--max-steps", type=int, default=None, help="step budget [default: 2N]")
@click.option("--eta-tol", type=float, default=0.0, show_default=True,
              help="sign tolerance of the staggering filter")
@click.option("--n-min", type=int, default=2, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
@click.pass_context
def diagnose(ctx, n, alpha, theta, theta_over_pi, epsilon, seed, max_steps,
             eta_tol, n_min, out):
    """Krylov staggering series and crossing count at one parameter point."""
    payload = _run_payload(n, alpha, theta, theta_over_pi, epsilon, seed, max_steps)
    payload.update({"eta_tol": eta_tol, "n_min": n_min})
    data = _service_call(ctx, "/api/diagnose", payload)
    os.makedirs(out, exist_ok=True)
    rows = [[str(e["n"]), _fmt(e["value"]), str(e["sign"])] for e in data["entries"]]
    _write_csv(os.path.join(out, "staggering.csv"), ["n", "staggering", "sign"], rows)
    summary = {key: data[key] for key in
               ("params", "seed", "n_stable", "n_cross", "krylov_phase")}
    with open(os.path.join(out, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    write_manifest(out, "diagnose", payload)
    click.echo(f"n_cross = {data['n_cross']} ({data['krylov_phase']} phase), "
               f"stable depth {data['n_stable']}")


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--epsilon", type=float, required=True)
@click.option("--seed", default="gamma1", show_default=True)
@click.option("--alpha-points", type=int, default=99, show_default=True)
@click.option("--theta-points", type=int, default=99, show_default=True)
@click.option("--alpha-max", type=float, default=3.0, show_default=True)
@click.option("--thresholds", default="0.05,0.1,0.5", show_default=True,
              help="comma-separated edge-weight thresholds")
@click.option("--eta-tol", type=float, default=0.0, show_default=True)
@click.option("--workers", type=int, envvar=WORKERS_ENV, default=None,
              help=f"worker processes [default: CPU count; env {WORKERS_ENV}]")
@click.option("--batch", type=int, default=32, show_default=True,
              help="cells per service request / checkpoint flush")
@click.option("--resume", is_flag=True, help="continue from the checkpoint in --out")
@click.option("--out", type=click.Path(file_okay=False), required=True)
@click.pass_context
def sweep(ctx, n, epsilon, seed, alpha_points, theta_points, alpha_max,
          thresholds, eta_tol, workers, batch, resume, out):
    """Joint (crossing count, gap classification) phase diagram on a grid."""
    try:
        threshold_list = tuple(float(x) for x in thresholds.split(",") if x.strip())
        spec = GridSpec(
            n=n,
            epsilon=epsilon,
            seed=seed,
            alpha_points=alpha_points,
            theta_points=theta_points,
            alpha_max=alpha_max,
            thresholds=threshold_list,
            primary_threshold=0.1 if 0.1 in threshold_list else threshold_list[0],
            eta_tol=eta_tol,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    workers = _resolve_workers(workers)

    def compute_via_service(grid: GridSpec, cells, n_workers):
        from .service.app import point_from_model
        from .service.schemas import PhasePointModel

        data = _service_call(
            ctx,
            "/api/sweep/points",
            {
                "spec": grid.to_dict(),
                "cells": [list(c) for c in cells],
                "workers": n_workers,
            },
        )
        return [point_from_model(PhasePointModel(**p)) for p in data["points"]]

    total = alpha_points * theta_points
    done_before = len(load_checkpoint(os.path.join(out, CHECKPOINT_NAME))) if resume else 0
    click.echo(f"sweep: {total} cells ({done_before} checkpointed), "
               f"{workers} workers", err=True)

    points = run_sweep(
        spec,
        out_dir=out,
        workers=workers,
        resume=resume,
        flush_every=batch,
        progress=lambda done, total: click.echo(f"  {done}/{total} cells", err=True),
        compute=compute_via_service,
    )
    _write_csv(
        os.path.join(out, "phase_diagram.csv"),
        phase_csv_header(spec),
        phase_csv_rows(spec, points),
    )
    write_manifest(out, "sweep", {"grid": spec.to_dict(), "workers": workers})
    failures = [p for p in points if p.error is not None]
    click.echo(f"wrote {len(points)} cells to {os.path.join(out, 'phase_diagram.csv')}"
               + (f" ({len(failures)} failed cells recorded)" if failures else ""))


ORACLE_THRESHOLDS = {
    "anticommutator_residual": 1e-13,
    "trace_residual": 1e-12,
    "closure_residual": 1e-12,
    "hamiltonian_constant_offset_residual": 1e-12,
    "manybody_a_max": 1e-12,
    "linear_sector_residual": 1e-10,
    "b_deviation_majorana": 1e-10,
    "b_deviation_nambu": 1e-10,
}


@main.command()
@click.option("--n", type=int, default=3, show_default=True, help="sites (max 4)")
@click.option("--alpha", type=float, default=1.0, show_default=True)
@click.option("--theta", type=float, default=None, help="angle in radians")
@click.option("--theta-over-pi", type=float, default=1 / 3, show_default="1/3")
@click.option("--epsilon", type=float, default=-0.2, show_default=True)
@click.option("--seed", default="gamma1", show_default=True)
@click.option("--json", "as_json", is_flag=True, help="machine-readable report")
@click.pass_context
def oracle(ctx, n, alpha, theta, theta_over_pi, epsilon, seed, as_json):
    """Brute-force many-body verification of the single-particle pipeline."""
    if theta is not None:
        theta_over_pi = None
    payload = {
        "n": n,
        "alpha": alpha,
        "theta": _resolve_theta(theta, theta_over_pi),
        "epsilon": epsilon,
        "seed": seed,
    }
    data = _service_call(ctx, "/api/oracle", payload)
    failed = []
    for key, bound in ORACLE_THRESHOLDS.items():
        value = data.get(key)
        if value is None or value > bound:
            failed.append(key)
    if data["manybody_krylov_dimension"] > data["krylov_dimension_bound"]:
        failed.append("manybody_krylov_dimension")
    if as_json:
        data["failed_checks"] = failed
        click.echo(json.dumps(data, indent=2))
    else:
        click.echo(f"oracle report (N={n}, alpha={alpha}, "
                   f"theta={payload['theta']:.6g}, epsilon={epsilon}, seed={seed})")
        for key, bound in ORACLE_THRESHOLDS.items():
            value = data.get(key)
            shown = "n/a" if value is None else f"{value:.3e}"
            status = "FAIL" if key in failed else "ok"
            click.echo(f"  {key:<40s} {shown:>12s}  (<= {bound:.0e})  {status}")
        click.echo(f"  {'manybody_krylov_dimension':<40s} "
                   f"{data['manybody_krylov_dimension']:>12d}  "
                   f"(<= {data['krylov_dimension_bound']})  "
                   f"{'FAIL' if 'manybody_krylov_dimension' in failed else 'ok'}")
    if failed:
        raise click.ClickException(f"oracle checks failed: {', '.join(failed)}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the compute service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
