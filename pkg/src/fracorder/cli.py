"""Command-line front end: forward solves, observation curves, inversion,
verification reports, and raw Mittag-Leffler evaluation.

Design notes
------------
Outputs are plain CSV and JSON, every float printed with 17 significant
digits ("%.17g"), keys and rows emitted in a fixed order, so identical
invocations produce byte-identical files.

Exit codes: 0 success, 2 refused inversion (observation outside the
admissible interval), 3 invalid input (bad flags, malformed spec files,
out-of-domain parameters), 4 numerical failure (non-convergence, failed
quadrature or monotonicity certificates).

Problem-spec JSON format (unknown fields are rejected)::

    {
      "operator": one of
          {"kind": "explicit_spectrum", "eigenvalues": [l1, l2, ...]}
          {"kind": "symmetric_matrix", "entries": [[...], ...]}
          {"kind": "dirichlet_laplacian_1d", "length": L, "grid_points": odd n},
      "phi": one of
          {"coefficients": [c1, ..., cK]}   spectral coefficients
          {"vector": [...]}                 nodal vector (matrix operators)
          {"samples": [...]}                grid samples (Laplacian operators),
      "K": retained mode count,
      "rho0": optional lower order bound in (0, 1), default 0.5,
      "tail_tol": optional hard cap on the certified truncation tail
    }

The heavy imports happen inside the command bodies so that the
FRACORDER_THREADS cap can be exported before numpy loads its thread pools.
"""

from __future__ import annotations

import json
import os
import sys

import click

_KINDS = ("norm_sq", "a_norm_sq", "inner_phi")
_THREAD_ENV_TARGETS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                       "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS")


def _apply_thread_cap() -> None:
    raw = os.environ.get("FRACORDER_THREADS")
    if raw is None:
        return
    try:
        cap = int(raw)
    except ValueError:
        raise click.UsageError(f"FRACORDER_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise click.UsageError(f"FRACORDER_THREADS must be >= 1, got {cap}")
    for name in _THREAD_ENV_TARGETS:
        os.environ.setdefault(name, str(cap))


def _fmt(value) -> str:
    return "%.17g" % float(value)


def _json_text(obj, indent: int = 0) -> str:
    """Serialize with %.17g floats; dict order is preserved as built."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f'{pad}  {json.dumps(str(k))}: {_json_text(v, indent + 1)}'
                for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{pad}  {_json_text(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt(obj)
    return json.dumps(str(obj))


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _parse_floats(raw: str, what: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(part) for part in raw.split(",") if part.strip() != "")
    except ValueError:
        raise click.UsageError(f"{what} must be comma-separated numbers, got {raw!r}")
    if not vals:
        raise click.UsageError(f"{what} must contain at least one number")
    return vals


def _parse_grid(raw: str) -> tuple[float, float, int]:
    parts = raw.split(":")
    if len(parts) != 3:
        raise click.UsageError(f"--rho-grid must look like a:b:n, got {raw!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise click.UsageError(f"--rho-grid must look like a:b:n, got {raw!r}")
    if n < 2:
        raise click.UsageError(f"--rho-grid needs n >= 2 points, got {n}")
    if not a < b:
        raise click.UsageError(f"--rho-grid needs a < b, got {a} >= {b}")
    return a, b, n


def _load_spec(path: str):
    from .problem import load_spec
    return load_spec(path)


@click.group(name="fracorder")
def cli() -> None:
    """Subdiffusion forward solver and fractional-order recovery."""


@cli.command(name="ml-eval")
@click.option("--rho", type=float, required=True, help="First parameter, in (0, 1].")
@click.option("--mu", type=float, required=True, help="Second parameter, > 0.")
@click.option("--x", type=float, required=True, help="Argument, <= 1.")
@click.option("--branch", type=click.Choice(["auto", "series", "asymptotic", "contour"]),
              default="auto", show_default=True,
              help="Force one evaluation branch instead of dispatching.")
def ml_eval(rho: float, mu: float, x: float, branch: str) -> None:
    """Evaluate the two-parameter Mittag-Leffler function E_{rho,mu}(x)."""
    from .mittag_leffler import (MLQuery, ml_asymptotic, ml_contour_value,
                                 ml_dispatch, ml_series)
    q = MLQuery(rho=rho, mu=mu, x=x)
    if branch == "auto":
        value, used = ml_dispatch(q)
    elif branch == "series":
        value, used = ml_series(q), "series"
    elif branch == "asymptotic":
        value, used = ml_asymptotic(q), "asymptotic"
    else:
        value, used = ml_contour_value(q), "contour"
    click.echo(f"value = {_fmt(value)}")
    click.echo(f"branch = {used}")


@cli.command(name="forward")
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Problem-spec JSON file.")
@click.option("--rho", type=float, required=True, help="Fractional order, in (0, 1].")
@click.option("--times", required=True, help="Comma-separated evaluation times.")
@click.option("--out", "out_path", required=True, help="Output CSV path.")
def forward_cmd(spec_path: str, rho: float, times: str, out_path: str) -> None:
    """Solve the forward problem; write per-mode coefficients to CSV."""
    from .forward import ForwardRequest, solve
    from .problem import prepare
    spec = _load_spec(spec_path)
    req = ForwardRequest(spec=spec, rho=rho, times=_parse_floats(times, "--times"))
    states = solve(req)
    eigs = prepare(spec).spectrum.eigenvalues
    lines = ["t,k,lambda_k,coeff,tail_bound"]
    for state in states:
        for k, (lam, c) in enumerate(zip(eigs, state.coeffs), start=1):
            lines.append(",".join([_fmt(state.t), str(k), _fmt(lam),
                                   _fmt(c), _fmt(state.tail_bound)]))
    _write_text(out_path, "\n".join(lines) + "\n")
    click.echo(f"wrote {len(states)} time(s) x {len(eigs)} mode(s) to {out_path}")


@cli.command(name="observe")
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Problem-spec JSON file.")
@click.option("--kind", type=click.Choice(list(_KINDS)), default="norm_sq",
              show_default=True, help="Which scalar observation to compute.")
@click.option("--t0", type=float, required=True, help="Observation time.")
@click.option("--rho-grid", "rho_grid", default=None,
              help="Uniform order grid a:b:n; defaults to a Chebyshev grid on [rho0, 1].")
@click.option("--out", "out_path", required=True, help="Output CSV path.")
def observe_cmd(spec_path: str, kind: str, t0: float, rho_grid: str | None,
                out_path: str) -> None:
    """Sample the observation curve rho -> W(t0, rho); write CSV."""
    import numpy as np
    from .observation import observation_curve
    spec = _load_spec(spec_path)
    grid = None
    if rho_grid is not None:
        a, b, n = _parse_grid(rho_grid)
        grid = np.linspace(a, b, n)
    curve = observation_curve(spec, kind, t0, rho_grid=grid)
    lines = ["rho,W"]
    for r, w in curve:
        lines.append(f"{_fmt(r)},{_fmt(w)}")
    _write_text(out_path, "\n".join(lines) + "\n")
    click.echo(f"wrote {len(curve)} curve point(s) to {out_path}")


@cli.command(name="invert")
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Problem-spec JSON file.")
@click.option("--kind", type=click.Choice(list(_KINDS)), default="norm_sq",
              show_default=True, help="Which scalar observation d0 represents.")
@click.option("--t0", type=float, required=True, help="Observation time.")
@click.option("--d0", type=float, required=True, help="Observed scalar value.")
@click.option("--rho0", type=float, default=None,
              help="Lower edge of the admissible order interval; defaults to the spec's.")
@click.option("--rho-tol", "rho_tol", type=float, default=1e-10, show_default=True,
              help="Bracket width at which the root search stops.")
@click.option("--out", "out_path", required=True, help="Output JSON path.")
def invert_cmd(spec_path: str, kind: str, t0: float, d0: float,
               rho0: float | None, rho_tol: float, out_path: str) -> None:
    """Recover the order from one observation; write the result as JSON."""
    from .inversion import InversionRequest, invert
    spec = _load_spec(spec_path)
    req = InversionRequest(spec=spec, kind=kind, t0=t0, d0=d0,
                           rho0=rho0, rho_tol=rho_tol)
    res = invert(req)
    doc = {
        "rho_hat": float(res.rho_hat),
        "bracket": [float(res.bracket[0]), float(res.bracket[1])],
        "residual": float(res.residual),
        "iterations": int(res.iterations),
        "t0_admissible": bool(res.t0_admissible),
        "monotone_verified": bool(res.monotone_verified),
    }
    _write_text(out_path, _json_text(doc) + "\n")
    click.echo(f"rho_hat = {_fmt(res.rho_hat)}")
    click.echo(f"wrote {out_path}")


@cli.command(name="verify")
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Problem-spec JSON file.")
@click.option("--rho", type=float, required=True, help="Order for the residual checks.")
@click.option("--t0", type=float, required=True, help="Observation time to certify.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for the random spot-check generator.")
@click.option("--random-probes", "random_probes", type=int, default=0, show_default=True,
              help="Number of random evaluator cross-checks to run.")
@click.option("--out", "out_path", required=True, help="Output JSON path.")
def verify_cmd(spec_path: str, rho: float, t0: float, seed: int,
               random_probes: int, out_path: str) -> None:
    """Residual-check a solve and certify monotonicity at t0; write a report."""
    import numpy as np
    from ._validation import check_order, check_time
    from .forward import initial_condition_check
    from .fractional import SampledFunction, rl_derivative, weighted_limit_check
    from .inversion import threshold_T0
    from .mittag_leffler import (KernelQuery, MLQuery, kernel,
                                 ml_contour_value, ml_dispatch)
    from .observation import observation_curve
    from .problem import prepare

    spec = _load_spec(spec_path)
    rho = check_order(rho, name="rho", upper=1.0, include_upper=False)
    t0 = check_time(t0, name="t0")
    if random_probes < 0:
        raise click.UsageError(f"--random-probes must be >= 0, got {random_probes}")
    prep = prepare(spec)
    eigs = prep.spectrum.eigenvalues
    coeffs = prep.phi_coeffs

    # Per-mode equation residual ||RL-derivative + lambda u||_inf on [t0/4, t0].
    n_grid = 512
    h = t0 / n_grid
    grid = h * (1 + np.arange(n_grid))
    window = grid >= t0 / 4.0
    powers = tuple(rho * k - 1.0 for k in range(1, 6))
    checked = min(len(eigs), 8)
    residuals = []
    for lam in eigs[:checked]:
        u = np.array([kernel(KernelQuery(rho=rho, lam=float(lam), t=float(t)))
                      for t in grid])
        sf = SampledFunction(h, h, tuple(u), singular_powers=powers)
        res = rl_derivative(sf, rho).array + float(lam) * u
        residuals.append(float(np.max(np.abs(res[window]))))

    # Initial-condition discrepancy, both as the weighted series limit and
    # as a discrete extrapolation on the first mode's trajectory.
    ic_series = float(initial_condition_check(spec, rho, (1e-8,)))
    t_head = 1e-6 / 512
    head_grid = t_head * (1 + np.arange(512))
    lam1 = float(eigs[0])
    u1 = np.array([kernel(KernelQuery(rho=rho, lam=lam1, t=float(t)))
                   for t in head_grid])
    sf1 = SampledFunction(t_head, t_head, tuple(u1), singular_powers=powers)
    ic_discrete = abs(weighted_limit_check(sf1, rho) - 1.0)

    # Monotonicity pre-scan of the observation curve at t0.
    curve = observation_curve(spec, "norm_sq", t0)
    ws = [w for _, w in curve]
    violations = sum(1 for a, b in zip(ws, ws[1:]) if b >= a)
    t_threshold = threshold_T0(spec.rho0)

    report = {
        "spec": {"operator": spec.operator.__class__.__name__,
                 "modes": int(prep.spectrum.count)},
        "rho": float(rho),
        "t0": float(t0),
        "residual": {
            "grid_points": n_grid,
            "window": [t0 / 4.0, t0],
            "modes_checked": checked,
            "per_mode_max": residuals,
            "max": max(residuals),
        },
        "initial_condition": {
            "series_discrepancy": ic_series,
            "weighted_limit_discrepancy": float(ic_discrete),
        },
        "monotonicity": {
            "grid_points": len(curve),
            "violations": int(violations),
            "monotone": violations == 0,
            "threshold_T0": float(t_threshold),
            "t0_admissible": bool(t0 >= t_threshold),
        },
    }

    if random_probes > 0:
        rng = np.random.default_rng(seed)
        worst = 0.0
        positive = True
        for _ in range(random_probes):
            r = float(rng.uniform(0.2, 0.95))
            big_x = float(10.0 ** rng.uniform(np.log10(2.0), 4.0))
            q = MLQuery(rho=r, mu=r, x=-big_x)
            auto, _ = ml_dispatch(q)
            forced = ml_contour_value(q)
            denom = max(abs(auto), abs(forced), 1e-300)
            worst = max(worst, abs(auto - forced) / denom)
            positive = positive and auto > 0.0
        report["random_probes"] = {
            "count": int(random_probes),
            "seed": int(seed),
            "max_branch_disagreement": worst,
            "all_values_positive": positive,
        }

    _write_text(out_path, _json_text(report) + "\n")
    click.echo(f"residual max = {_fmt(report['residual']['max'])}")
    click.echo(f"initial-condition discrepancy = {_fmt(ic_series)}")
    click.echo(f"monotone on pre-scan grid = {report['monotonicity']['monotone']}")
    click.echo(f"wrote {out_path}")


def run(argv=None) -> int:
    """Entry point returning an exit code instead of raising SystemExit."""
    from .errors import NUMERICAL_ERRORS, VALIDATION_ERRORS, NotAdmissible
    try:
        _apply_thread_cap()
        cli.main(args=argv, prog_name="fracorder", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        exc.show()
        return 3
    except click.ClickException as exc:
        exc.show()
        return 3
    except NotAdmissible as exc:
        click.echo(f"refused: {exc}", err=True)
        return 2
    except VALIDATION_ERRORS as exc:
        click.echo(f"invalid input: {exc}", err=True)
        return 3
    except NUMERICAL_ERRORS as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return 4
    return 0


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
