"""Command line interface: ``snth fit|simulate|grid|test``.

Conventions shared by every subcommand:

* CSV is comma separated, '.' decimal, UTF-8, header auto-detected.
* JSON objects are flat; matrices are row-major nested arrays.
* ``--seed`` defaults to "0" so runs are reproducible; pass
  ``--seed random`` to opt out.
* Exit codes: 0 success, 1 usage or input error, 2 numerical /
  convergence trouble (partial results are still printed).
"""

from __future__ import annotations

import json
import sys
import time

import click
import numpy as np

from .data import Dataset, from_array, read_csv, write_csv
from .distribution import (SnthParams, snth_log_pdf, snth_marginal,
                           snth_sample)
from .inference import DEFAULT_FIT_CONFIG, FitConfig, ParamStdErr, fit, lrt

_TEST_MODE_FLAGS = {
    "eta": "eta_given_h",
    "h": "h_given_eta",
    "joint": "joint_bonferroni",
}


def _fail(message: str) -> click.ClickException:
    return click.ClickException(message)


def _parse_seed(text: str) -> int | None:
    """Return an integer seed, or None for ``random``."""
    if text.strip().lower() == "random":
        return None
    try:
        return int(text)
    except ValueError:
        raise _fail(f"--seed must be an integer or 'random', got {text!r}")


def _load_dataset(path: str) -> Dataset:
    try:
        return read_csv(path)
    except OSError as exc:
        raise _fail(f"cannot read {path}: {exc}")
    except ValueError as exc:
        raise _fail(str(exc))


def _params_to_dict(params: SnthParams) -> dict:
    return {
        "xi": params.xi.tolist(),
        "omega": params.omega_diag.tolist(),
        "psi_bar": params.psi_bar.tolist(),
        "eta": params.eta.tolist(),
        "h": params.h.tolist(),
    }


def _params_from_dict(obj: dict) -> SnthParams:
    try:
        return SnthParams(
            xi=np.asarray(obj["xi"], dtype=float),
            omega_diag=np.asarray(obj["omega"], dtype=float),
            psi_bar=np.asarray(obj["psi_bar"], dtype=float),
            eta=np.asarray(obj["eta"], dtype=float),
            h=np.asarray(obj["h"], dtype=float),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise _fail(f"bad parameter object: {exc}")


def _load_params(path: str) -> SnthParams:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            obj = json.load(handle)
    except OSError as exc:
        raise _fail(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise _fail(f"{path} is not valid JSON: {exc}")
    if not isinstance(obj, dict):
        raise _fail(f"{path}: expected a JSON object")
    # accept a fit-result payload too, so `snth fit --json-out f.json`
    # feeds straight into `snth grid --params f.json`
    if "xi" not in obj and isinstance(obj.get("params"), dict):
        obj = obj["params"]
    return _params_from_dict(obj)


def _stderr_to_dict(se: ParamStdErr | None) -> dict | None:
    if se is None:
        return None
    return {
        "xi": se.xi.tolist(),
        "omega": se.omega.tolist(),
        "psi_bar": se.psi_bar.tolist(),
        "eta": se.eta.tolist(),
        "h": se.h.tolist(),
        "h_reliable": [bool(v) for v in se.h_reliable],
    }


def _emit_json(obj: dict, json_out: str | None) -> None:
    text = json.dumps(obj, indent=2)
    click.echo(text)
    if json_out is not None:
        with open(json_out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


def _parse_vector(text: str, name: str) -> np.ndarray:
    try:
        return np.array([float(c) for c in text.split(",")])
    except ValueError:
        raise _fail(f"--{name} must be comma-separated numbers, got {text!r}")


def _parse_matrix(text: str) -> np.ndarray:
    try:
        rows = [[float(c) for c in row.split(",")] for row in text.split(";")]
        return np.array(rows)
    except ValueError:
        raise _fail(f"--psi must be ';'-separated rows of numbers, "
                    f"got {text!r}")


def _parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise _fail(f"--range must look like 'min:max:steps', got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise _fail(f"--range must look like 'min:max:steps', got {text!r}")
    if not lo < hi:
        raise _fail(f"--range needs min < max, got {text!r}")
    if steps < 2:
        raise _fail(f"--range needs at least 2 steps, got {text!r}")
    return lo, hi, steps


def _parse_pair(text: str, dim: int) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise _fail(f"--pair must look like 'i,j', got {text!r}")
    try:
        i, j = int(parts[0]), int(parts[1])
    except ValueError:
        raise _fail(f"--pair must be two integers, got {text!r}")
    if i == j or not (0 <= i < dim and 0 <= j < dim):
        raise _fail(f"--pair indices must be distinct and in [0, {dim - 1}]")
    return i, j


def _make_config(tol: float | None, seed: int | None,
                 do_joint: bool) -> FitConfig:
    base = DEFAULT_FIT_CONFIG
    return FitConfig(
        do_joint_mle=do_joint,
        em_rel_tol=tol if tol is not None else base.em_rel_tol,
        em_max_iter=base.em_max_iter,
        optimizer_tol=tol if tol is not None else base.optimizer_tol,
        optimizer_max_eval=base.optimizer_max_eval,
        hessian_step=base.hessian_step,
        seed=seed if seed is not None
        else int(np.random.SeedSequence().entropy % (2 ** 31)),
    )


@click.group()
@click.version_option(package_name="snth")
def cli() -> None:
    """Skew-normal Tukey-h modeling tools."""


@cli.command("fit")
@click.option("--input", "input_path", required=True,
              help="CSV file with one observation per row.")
@click.option("--no-joint", is_flag=True,
              help="Stop after the marginal + EM stage.")
@click.option("--tol", type=float, default=None,
              help="Relative tolerance for EM and the joint optimizer.")
@click.option("--seed", default="0", show_default=True,
              help="Integer seed, or 'random'.")
@click.option("--json-out", type=click.Path(), default=None,
              help="Also write the JSON result to this file.")
@click.pass_context
def cmd_fit(ctx, input_path, no_joint, tol, seed, json_out) -> None:
    """Estimate parameters from data and report them as JSON."""
    data = _load_dataset(input_path)
    config = _make_config(tol, _parse_seed(seed), not no_joint)
    started = time.perf_counter()
    try:
        result = fit(data.values, config)
    except (RuntimeError, ValueError) as exc:
        raise _fail(f"fit failed: {exc}")
    elapsed = time.perf_counter() - started
    payload = {
        "params": _params_to_dict(result.params),
        "stderr": _stderr_to_dict(result.stderr),
        "loglik": result.loglik,
        "aic": result.aic,
        "stage": result.stage,
        "converged": result.converged,
        "em_iterations": max(0, len(result.em_trace) - 1),
        "n_rows": int(data.values.shape[0]),
        "n_dropped_rows": data.n_dropped,
        "wall_time_s": elapsed,
    }
    _emit_json(payload, json_out)
    if not result.converged:
        ctx.exit(2)


@cli.command("simulate")
@click.option("--params", "params_path", default=None,
              help="JSON file with xi/omega/psi_bar/eta/h.")
@click.option("--xi", default=None, help="Comma-separated location vector.")
@click.option("--omega", default=None, help="Comma-separated scales.")
@click.option("--psi", default=None,
              help="Correlation matrix, rows separated by ';'.")
@click.option("--eta", default=None, help="Comma-separated slant vector.")
@click.option("--h", "h_text", default=None,
              help="Comma-separated tail weights.")
@click.option("--n", "n_draws", type=click.IntRange(min=1), required=True,
              help="Number of rows to draw.")
@click.option("--seed", default="0", show_default=True,
              help="Integer seed, or 'random'.")
def cmd_simulate(params_path, xi, omega, psi, eta, h_text, n_draws,
                 seed) -> None:
    """Draw a sample and write it as CSV on stdout."""
    if params_path is not None:
        params = _load_params(params_path)
    else:
        if xi is None or eta is None or h_text is None:
            raise _fail("either --params or all of --xi/--eta/--h "
                        "(plus optional --omega/--psi) are required")
        xi_v = _parse_vector(xi, "xi")
        eta_v = _parse_vector(eta, "eta")
        h_v = _parse_vector(h_text, "h")
        omega_v = (np.ones_like(xi_v) if omega is None
                   else _parse_vector(omega, "omega"))
        psi_m = np.eye(xi_v.size) if psi is None else _parse_matrix(psi)
        try:
            params = SnthParams(xi=xi_v, omega_diag=omega_v, psi_bar=psi_m,
                                eta=eta_v, h=h_v)
        except ValueError as exc:
            raise _fail(f"bad inline parameters: {exc}")
    seed_val = _parse_seed(seed)
    rng = np.random.default_rng(seed_val)
    draws = snth_sample(n_draws, params, rng)
    write_csv(sys.stdout, from_array(draws))


@cli.command("grid")
@click.option("--params", "params_path", required=True,
              help="JSON file with xi/omega/psi_bar/eta/h.")
@click.option("--pair", default="0,1", show_default=True,
              help="Zero-based component pair to keep when p > 2.")
@click.option("--range", "ranges", multiple=True, required=True,
              help="Axis range 'min:max:steps'; give once for both axes "
                   "or twice for x then y.")
@click.option("--levels", default=None,
              help="Comma-separated coverages; emits density thresholds "
                   "as JSON (to --json-out, else stderr).")
@click.option("--json-out", type=click.Path(), default=None,
              help="File for the --levels JSON.")
def cmd_grid(params_path, pair, ranges, levels, json_out) -> None:
    """Tabulate a bivariate density surface as CSV (x, y, pdf)."""
    params = _load_params(params_path)
    if params.dim < 2:
        raise _fail("grid needs at least two components; "
                    "use simulate for univariate summaries")
    if params.dim > 2 or pair != "0,1":
        i, j = _parse_pair(pair, params.dim)
        params = snth_marginal(params, [i, j])
    if len(ranges) == 1:
        ranges = (ranges[0], ranges[0])
    if len(ranges) != 2:
        raise _fail("--range may be given at most twice")
    x_lo, x_hi, x_n = _parse_range(ranges[0])
    y_lo, y_hi, y_n = _parse_range(ranges[1])
    xs = np.linspace(x_lo, x_hi, x_n)
    ys = np.linspace(y_lo, y_hi, y_n)
    grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
    points = np.column_stack([grid_x.ravel(), grid_y.ravel()])
    pdf = np.exp(snth_log_pdf(points, params))
    table = np.column_stack([points, pdf])
    write_csv(sys.stdout, Dataset(("x", "y", "pdf"), table))

    if levels is not None:
        coverages = _parse_vector(levels, "levels")
        if np.any(coverages <= 0.0) or np.any(coverages >= 1.0):
            raise _fail("--levels coverages must lie strictly in (0, 1)")
        cell = (xs[1] - xs[0]) * (ys[1] - ys[0])
        order = np.argsort(pdf)[::-1]
        mass = np.cumsum(pdf[order]) * cell
        rows = []
        for cov in coverages:
            hit = np.searchsorted(mass, cov)
            if hit >= pdf.size:
                hit = pdf.size - 1
            rows.append({
                "coverage": float(cov),
                "threshold": float(pdf[order][hit]),
                "mass": float(min(mass[hit], mass[-1])),
            })
        payload = {"levels": rows, "total_mass": float(mass[-1])}
        text = json.dumps(payload, indent=2)
        if json_out is not None:
            with open(json_out, "w", encoding="utf-8") as handle:
                handle.write(text + "\n")
        else:
            click.echo(text, err=True)


@cli.command("test")
@click.option("--input", "input_path", required=True,
              help="CSV file with one observation per row.")
@click.option("--mode", type=click.Choice(sorted(_TEST_MODE_FLAGS)),
              required=True, help="Which null hypothesis to test.")
@click.option("--tol", type=float, default=None,
              help="Relative tolerance for the underlying fits.")
@click.option("--seed", default="0", show_default=True,
              help="Integer seed, or 'random'.")
@click.option("--json-out", type=click.Path(), default=None,
              help="Also write the JSON result to this file.")
def cmd_test(input_path, mode, tol, seed, json_out) -> None:
    """Run a likelihood-ratio test and report it as JSON."""
    data = _load_dataset(input_path)
    config = _make_config(tol, _parse_seed(seed), True)
    try:
        result = lrt(data.values, _TEST_MODE_FLAGS[mode], config)
    except (RuntimeError, ValueError) as exc:
        raise _fail(f"test failed: {exc}")
    payload = {
        "mode": result.mode,
        "statistic": result.statistic,
        "df": result.df,
        "p_value": result.p_value,
        "n_rows": int(data.values.shape[0]),
        "n_dropped_rows": data.n_dropped,
    }
    _emit_json(payload, json_out)


def main(argv=None) -> int:
    """Entry point that maps CLI outcomes onto exit codes 0/1/2."""
    try:
        rv = cli.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
