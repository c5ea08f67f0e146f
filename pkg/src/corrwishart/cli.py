"""Command-line front end: curves, scans, kernels, gaps, and simulation.

Emits CSV for curves/grids and JSON for scalar summaries, each carrying a
provenance header (package version, sha256 hash of the effective
configuration, seed) so artifacts are diffable and reproducible: rerunning
an identical configuration produces byte-identical bodies.

Exit codes: 0 success, 1 validation failure, 2 bad configuration,
3 numerical non-convergence.

Heavy imports (numpy, scipy) are deferred until after the ``--threads``
cap is applied to the BLAS thread-count environment variables, which must
happen before numpy first loads.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from typing import Any

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BAD_CONFIG = 2
EXIT_NONCONVERGENCE = 3

_THREAD_ENV_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)

# every numeric default in one place; --show-config prints the resolved set
_DEFAULTS: dict[str, dict[str, Any]] = {
    "density": {"range": "0:4", "points": 800},
    "support": {},
    "cusp-scan": {"finite_n_mode": False, "gamma_star": False, "bracket": None},
    "pearcey": {
        "tau": 0.0,
        "grid": "-3:3:7",
        "nodes": 200,
        "truncation_T": 8.0,
        "representation": "functions",
        "gap": False,
        "interval": ["-2:2"],
        "order": 40,
    },
    "hard-edge": {
        "expansion": False,
        "alpha": 0,
        "N": None,
        "s": "1:9:9",
        "order": 60,
    },
    "simulate": {
        "mode": "global",
        "N": None,
        "n": None,
        "reps": 100,
        "seed": 0,
        "batch_size": 256,
        "center": None,
        "halfwidth": 0.5,
    },
    "validate": {"quick": False},
}


class _ConfigError(ValueError):
    """A command-line or file configuration problem (exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: command, file paths, and effective knobs."""

    command: str
    spec_path: str | None
    output_path: str | None
    knobs: dict[str, Any]
    spec_data: dict | None

    def config_hash(self) -> str:
        payload = {
            "command": self.command,
            "knobs": self.knobs,
            "spec": self.spec_data,
        }
        canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _parse_range(text: str, want_count: bool):
    parts = text.split(":")
    try:
        if want_count:
            if len(parts) != 3:
                raise ValueError
            lo, hi, k = float(parts[0]), float(parts[1]), int(parts[2])
            if k < 1:
                raise ValueError
            return lo, hi, k
        if len(parts) != 2:
            raise ValueError
        return float(parts[0]), float(parts[1])
    except ValueError:
        kind = "lo:hi:count" if want_count else "lo:hi"
        raise _ConfigError(f"expected a {kind} range, got {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrwishart",
        description=(
            "Limiting spectral densities, edge kernels, and gap "
            "probabilities of complex correlated Wishart matrices."
        ),
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="cap BLAS/OpenMP thread count (or env CORRWISHART_THREADS)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str, needs_spec: bool = True):
        p = sub.add_parser(name, help=help_)
        if needs_spec:
            p.add_argument("--spec", help="population spectrum JSON file")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument(
            "--show-config",
            action="store_true",
            help="print the resolved configuration as JSON and exit",
        )
        return p

    p = add("density", "limiting eigenvalue density on a grid (CSV x,rho)")
    p.add_argument("--range", default=None, help="evaluation window lo:hi")
    p.add_argument("--points", type=int, default=None, help="grid size")

    add("support", "support intervals and zero mass (JSON)")

    p = add("cusp-scan", "locate and classify critical points (JSON)")
    p.add_argument(
        "--finite-n-mode",
        action="store_true",
        default=None,
        help="scan the size-N transform of spec.finite_n instead of the limit",
    )
    p.add_argument(
        "--gamma-star",
        action="store_true",
        default=None,
        help="also report the critical aspect ratio of the atom set",
    )
    p.add_argument("--bracket", default=None, help="gamma-star search bracket lo:hi")

    p = add("pearcey", "cusp kernel grid (CSV x,y,K) or gaps (--gap)", needs_spec=False)
    p.add_argument("--tau", type=float, default=None, help="criticality parameter")
    p.add_argument("--grid", default=None, help="kernel grid lo:hi:count")
    p.add_argument("--nodes", type=int, default=None, help="contour nodes per piece")
    p.add_argument("--truncation-T", type=float, default=None, help="contour cutoff")
    p.add_argument(
        "--representation",
        choices=["functions", "contour"],
        default=None,
        help="kernel evaluation route",
    )
    p.add_argument(
        "--gap",
        action="store_true",
        default=None,
        help="emit gap determinants (CSV s,t,tau,det) instead of the kernel",
    )
    p.add_argument(
        "--interval",
        action="append",
        default=None,
        help="gap interval s:t (repeatable)",
    )
    p.add_argument("--order", type=int, default=None, help="determinant quadrature order")

    p = add("hard-edge", "hard-edge constants (JSON) or 1/N expansion (CSV)")
    p.add_argument(
        "--expansion",
        action="store_true",
        default=None,
        help="emit CSV s,F_alpha,correction,prediction,finiteN_det,residual",
    )
    p.add_argument("--alpha", type=int, default=None, help="index offset n - N")
    p.add_argument("--N", type=int, default=None, help="matrix size")
    p.add_argument("--s", default=None, help="gap endpoints lo:hi:count")
    p.add_argument("--order", type=int, default=None, help="determinant quadrature order")

    p = add("simulate", "sample eigenvalues (CSV) plus a JSON summary")
    p.add_argument("--N", type=int, default=None, help="matrix size")
    p.add_argument("--n", type=int, default=None, help="sample count (columns)")
    p.add_argument("--reps", type=int, default=None, help="replicas")
    p.add_argument("--seed", type=int, default=None, help="random seed")
    p.add_argument("--batch-size", type=int, default=None, help="replicas per batch")
    p.add_argument(
        "--mode",
        choices=["hard-edge", "cusp", "global"],
        default=None,
        help="which statistics to record",
    )
    p.add_argument("--center", type=float, default=None, help="cusp window center")
    p.add_argument("--halfwidth", type=float, default=None, help="cusp window halfwidth")

    p = add("validate", "run the built-in invariant suite", needs_spec=False)
    p.add_argument(
        "--quick",
        action="store_true",
        default=None,
        help="reduced grids and sizes (same checks)",
    )
    return parser


def _resolve(args: argparse.Namespace) -> RunConfig:
    command = args.command
    knobs = dict(_DEFAULTS[command])
    for key in knobs:
        supplied = getattr(args, key, None)
        if supplied is not None:
            knobs[key] = supplied
    for key in ("points", "nodes", "order", "N", "n", "reps", "seed", "batch_size"):
        value = knobs.get(key)
        if value is not None and value < 0:
            raise _ConfigError(f"--{key.replace('_', '-')} must be non-negative")
    spec_path = getattr(args, "spec", None)
    spec_data = None
    if spec_path is not None:
        try:
            with open(spec_path, "r", encoding="utf-8") as fh:
                spec_data = json.load(fh)
        except OSError as exc:
            raise _ConfigError(f"cannot read spec file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise _ConfigError(f"spec file is not valid JSON: {exc}") from exc
    out = getattr(args, "out", None)
    outdir = os.environ.get("CORRWISHART_OUTDIR")
    if out is not None and outdir and not os.path.isabs(out):
        out = os.path.join(outdir, out)
    return RunConfig(
        command=command,
        spec_path=spec_path,
        output_path=out,
        knobs=knobs,
        spec_data=spec_data,
    )


def _load_spectrum(config: RunConfig):
    from .spectral_model import PopulationSpectrum

    if config.spec_data is None:
        raise _ConfigError(f"{config.command} requires --spec")
    return PopulationSpectrum.from_json(config.spec_data)


def _provenance(config: RunConfig) -> dict:
    from . import __version__

    return {
        "version": __version__,
        "config_sha256": config.config_hash(),
        "seed": config.knobs.get("seed"),
    }


def _emit(config: RunConfig, text: str) -> None:
    if config.output_path is None:
        sys.stdout.write(text)
    else:
        with open(config.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit_csv(config: RunConfig, header: str, rows) -> None:
    lines = ["# " + json.dumps(_provenance(config), sort_keys=True), header]
    lines.extend(rows)
    _emit(config, "\n".join(lines) + "\n")


def _emit_json(config: RunConfig, payload: dict) -> None:
    payload = {"provenance": _provenance(config), **payload}
    _emit(config, json.dumps(payload, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def _cmd_density(config: RunConfig) -> int:
    from .spectral_model import density_grid

    spec = _load_spectrum(config)
    lo, hi = _parse_range(config.knobs["range"], want_count=False)
    points = config.knobs["points"]
    if points < 2:
        raise _ConfigError("--points must be at least 2")
    curve = density_grid(spec, lo, hi, points)
    rows = (
        f"{float(x)!r},{float(r)!r}" for x, r in zip(curve.grid, curve.values)
    )
    _emit_csv(config, "x,rho", rows)
    return EXIT_OK


def _cmd_support(config: RunConfig) -> int:
    from .spectral_model import support

    spec = _load_spectrum(config)
    desc = support(spec)
    _emit_json(
        config,
        {
            "gamma": spec.gamma,
            "intervals": [list(iv) for iv in desc.intervals],
            "preimages": [list(pv) for pv in desc.preimages],
            "mass_at_zero": max(0.0, 1.0 - spec.gamma),
        },
    )
    return EXIT_OK


def _cmd_cusp_scan(config: RunConfig) -> int:
    from .edge_analysis import classify_cusp, classify_soft_edge, critical_aspect_ratio
    from .edge_analysis import find_critical_points

    spec = _load_spectrum(config)
    finite_mode = bool(config.knobs["finite_n_mode"])
    records = []
    for m, kind in find_critical_points(spec, finite_n_mode=finite_mode):
        entry: dict[str, Any] = {"m": m, "kind": kind}
        try:
            if kind == "cusp":
                entry.update(asdict(classify_cusp(spec, m, finite_n_mode=finite_mode)))
            else:
                entry.update(
                    asdict(classify_soft_edge(spec, m, finite_n_mode=finite_mode))
                )
        except ValueError as exc:
            entry["error"] = str(exc)
        records.append(entry)
    payload: dict[str, Any] = {"critical_points": records}
    if config.knobs["gamma_star"]:
        bracket = config.knobs["bracket"]
        if bracket is not None:
            bracket = _parse_range(bracket, want_count=False)
        gamma_star, c_star = critical_aspect_ratio(
            spec.lambdas, spec.weights, bracket=bracket
        )
        payload["gamma_star"] = gamma_star
        payload["c_star"] = c_star
    _emit_json(config, payload)
    return EXIT_OK


def _cmd_pearcey(config: RunConfig) -> int:
    from .fredholm import pearcey_gap
    from .kernels.pearcey import PearceyParams, pearcey_kernel

    try:
        params = PearceyParams(
            tau=config.knobs["tau"],
            truncation_T=config.knobs["truncation_T"],
            nodes=config.knobs["nodes"],
        )
    except ValueError as exc:
        raise _ConfigError(str(exc)) from exc
    if config.knobs["gap"]:
        rows = []
        for text in config.knobs["interval"]:
            s, t = _parse_range(text, want_count=False)
            if not s < t:
                raise _ConfigError(f"gap interval must be increasing, got {text!r}")
            det = pearcey_gap(params, (s, t), order=config.knobs["order"]).value
            rows.append(f"{s!r},{t!r},{params.tau!r},{det!r}")
        _emit_csv(config, "s,t,tau,det", rows)
        return EXIT_OK
    lo, hi, count = _parse_range(config.knobs["grid"], want_count=True)
    step = (hi - lo) / (count - 1) if count > 1 else 0.0
    pts = [lo + k * step for k in range(count)]
    rep = config.knobs["representation"]
    rows = (
        f"{x!r},{y!r},{pearcey_kernel(params, x, y, representation=rep)!r}"
        for x in pts
        for y in pts
    )
    _emit_csv(config, "x,y,K", rows)
    return EXIT_OK


def _hard_edge_population(config: RunConfig, N: int, alpha: int) -> tuple:
    """Expanded population eigenvalues for an (N, alpha) hard-edge model."""
    if config.spec_data is None:
        return (1.0,) * (N + alpha)
    spec = _load_spectrum(config)
    from .spectral_model import FiniteSize, PopulationSpectrum

    pinned = PopulationSpectrum(
        atoms=spec.atoms, gamma=spec.gamma, finite_n=FiniteSize(N, N + alpha)
    )
    import numpy as np

    return tuple(np.repeat(pinned.lambdas, pinned.multiplicities()).tolist())


def _cmd_hard_edge(config: RunConfig) -> int:
    if not config.knobs["expansion"]:
        from .edge_analysis import hard_edge

        spec = _load_spectrum(config)
        constants = hard_edge(spec, N=config.knobs["N"], alpha=config.knobs["alpha"])
        _emit_json(config, asdict(constants))
        return EXIT_OK

    N = config.knobs["N"]
    if N is None:
        raise _ConfigError("hard-edge --expansion requires --N")
    alpha = config.knobs["alpha"]
    order = config.knobs["order"]
    lo, hi, count = _parse_range(config.knobs["s"], want_count=True)
    if lo <= 0:
        raise _ConfigError("gap endpoints must be positive")
    from .fredholm import fredholm_det, hard_edge_prediction
    from .kernels.finite_n import HardEdgeKernelSpec

    lams = _hard_edge_population(config, N, alpha)
    kspec = HardEdgeKernelSpec(lambdas=lams, N=N, alpha=alpha)
    sigma, zeta = kspec.sigma_N(), kspec.zeta_N()
    step = (hi - lo) / (count - 1) if count > 1 else 0.0
    rows = []
    for k in range(count):
        s = lo + k * step
        pred = hard_edge_prediction(alpha, sigma, zeta, N, s, order=order)
        det = fredholm_det(kspec, (0.0, s), order=order).value
        rows.append(
            f"{s!r},{pred.limit!r},{pred.correction!r},{pred.value!r},"
            f"{det!r},{abs(det - pred.value)!r}"
        )
    _emit_csv(config, "s,F_alpha,correction,prediction,finiteN_det,residual", rows)
    return EXIT_OK


def _simulate_population(config: RunConfig) -> tuple[int, int, tuple]:
    N = config.knobs["N"]
    n = config.knobs["n"]
    if config.spec_data is not None:
        spec = _load_spectrum(config)
        if N is None and spec.finite_n is not None:
            N = spec.finite_n.N
        if n is None and spec.finite_n is not None:
            n = spec.finite_n.n
        if N is None:
            raise _ConfigError("simulate requires --N (or spec finite_n)")
        if n is None:
            n = round(spec.gamma * N)
        from .spectral_model import FiniteSize, PopulationSpectrum

        pinned = PopulationSpectrum(
            atoms=spec.atoms, gamma=spec.gamma, finite_n=FiniteSize(N, n)
        )
        import numpy as np

        lams = tuple(np.repeat(pinned.lambdas, pinned.multiplicities()).tolist())
    else:
        if N is None:
            raise _ConfigError("simulate requires --N (or spec finite_n)")
        if n is None:
            n = N
        lams = (1.0,) * n
    return N, n, lams


def _cmd_simulate(config: RunConfig) -> int:
    N, n, lams = _simulate_population(config)
    reps = config.knobs["reps"]
    seed = config.knobs["seed"]
    batch = config.knobs["batch_size"]
    mode = config.knobs["mode"]
    if reps < 1 or batch < 1:
        raise _ConfigError("--reps and --batch-size must be positive")

    from .montecarlo import sample_eigenvalues, sample_smallest

    summary: dict[str, Any] = {"mode": mode, "N": N, "n": n, "reps": reps, "seed": seed}
    if mode == "hard-edge":
        smallest = sample_smallest(lams, N=N, reps=reps, seed=seed, batch_size=batch)
        sigma = 4.0 / N * sum(1.0 / l for l in lams)
        values = N * N * sigma * smallest
        rows = (f"{r},{float(v)!r}" for r, v in enumerate(values))
        _emit_csv(config, "rep,value", rows)
        summary.update(
            sigma_N=sigma,
            mean=float(values.mean()),
            std=float(values.std(ddof=1)) if reps > 1 else 0.0,
            min=float(values.min()),
            max=float(values.max()),
        )
    else:
        run = sample_eigenvalues(lams, N=N, reps=reps, seed=seed, batch_size=batch)
        eigs = run.eigenvalues
        if mode == "cusp":
            center = config.knobs["center"]
            if center is None:
                raise _ConfigError("simulate --mode cusp requires --center")
            halfwidth = config.knobs["halfwidth"]
            if halfwidth <= 0:
                raise _ConfigError("--halfwidth must be positive")
            keep = abs(eigs - center) <= halfwidth
            rows = (
                f"{r},{i},{float(eigs[r, i])!r}"
                for r in range(reps)
                for i in range(N)
                if keep[r, i]
            )
            summary.update(
                center=center,
                halfwidth=halfwidth,
                mean_count=float(keep.sum() / reps),
            )
        else:
            rows = (
                f"{r},{i},{float(eigs[r, i])!r}"
                for r in range(reps)
                for i in range(N)
            )
            summary.update(
                mean_trace=float(eigs.sum(axis=1).mean()),
                zero_columns=N - n if n < N else 0,
            )
        _emit_csv(config, "rep,index,value", rows)

    summary_text = json.dumps(
        {"provenance": _provenance(config), **summary}, sort_keys=True, indent=2
    )
    if config.output_path is not None:
        with open(config.output_path + ".summary.json", "w", encoding="utf-8") as fh:
            fh.write(summary_text + "\n")
    else:
        sys.stderr.write(summary_text + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def _check_density_oracle(quick: bool) -> tuple[bool, str]:
    import numpy as np

    from .spectral_model import PopulationSpectrum, density

    spec = PopulationSpectrum(atoms=((1.0, 1.0),), gamma=1.0)
    xs = np.linspace(0.1, 3.9, 61 if quick else 381)
    worst = max(
        abs(density(spec, x) - math.sqrt((4.0 - x) / x) / (2.0 * math.pi))
        for x in xs
    )
    return worst < 1e-8, f"sup deviation {worst:.3e} (tol 1e-8)"


def _check_bessel_dual(quick: bool) -> tuple[bool, str]:
    from .kernels.bessel import bessel_kernel, bessel_kernel_contour

    pts = [(0.5, 1.5), (2.0, 4.0)] if quick else [(0.5, 1.5), (2.0, 4.0), (3.7, 0.9)]
    worst = max(
        abs(bessel_kernel_contour(a, x, y) - bessel_kernel(a, x, y))
        for a in (0, 2)
        for x, y in pts
    )
    return worst < 1e-9, f"series vs contour {worst:.3e} (tol 1e-9)"


def _check_pearcey_dual(quick: bool) -> tuple[bool, str]:
    import numpy as np

    from .kernels.pearcey import PearceyParams, pearcey_kernel

    taus = (0.0,) if quick else (-2.0, 0.0, 2.0)
    grid = np.linspace(-2.0, 2.0, 3) if quick else np.linspace(-3.0, 3.0, 5)
    worst = 0.0
    for tau in taus:
        params = PearceyParams(tau=tau)
        for x in grid:
            for y in grid:
                a = pearcey_kernel(params, x, y, representation="functions")
                b = pearcey_kernel(params, x, y, representation="contour")
                worst = max(worst, abs(a - b))
    return worst < 1e-8, f"functions vs contour {worst:.3e} (tol 1e-8)"


def _check_expansion_order(quick: bool) -> tuple[bool, str]:
    from .fredholm import fredholm_det, hard_edge_prediction
    from .kernels.finite_n import HardEdgeKernelSpec

    alpha, s = 2, 1.0
    sizes = (25, 50) if quick else (50, 100)
    resid = []
    for N in sizes:
        ks = HardEdgeKernelSpec(lambdas=(1.0,) * (N + alpha), N=N, alpha=alpha)
        det = fredholm_det(ks, (0.0, s)).value
        pred = hard_edge_prediction(alpha, ks.sigma_N(), ks.zeta_N(), N, s)
        resid.append(abs(det - pred.value))
    ratio = resid[0] / resid[1]
    return 3.2 < ratio < 4.8, f"remainder ratio {ratio:.2f} (window 3.2..4.8)"


def _cmd_validate(config: RunConfig) -> int:
    quick = bool(config.knobs["quick"])
    checks = [
        ("density-closed-form-oracle", _check_density_oracle),
        ("bessel-dual-representation", _check_bessel_dual),
        ("pearcey-dual-representation", _check_pearcey_dual),
        ("hard-edge-expansion-order", _check_expansion_order),
    ]
    results = []
    all_ok = True
    for name, fn in checks:
        ok, detail = fn(quick)
        all_ok &= ok
        results.append({"check": name, "ok": ok, "detail": detail})
        print(f"{'ok  ' if ok else 'FAIL'} - {name}: {detail}")
    if config.output_path is not None:
        _emit_json(config, {"quick": quick, "checks": results, "passed": all_ok})
    return EXIT_OK if all_ok else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

_HANDLERS = {
    "density": _cmd_density,
    "support": _cmd_support,
    "cusp-scan": _cmd_cusp_scan,
    "pearcey": _cmd_pearcey,
    "hard-edge": _cmd_hard_edge,
    "simulate": _cmd_simulate,
    "validate": _cmd_validate,
}


def _apply_thread_cap(argv: list[str]) -> None:
    """Set BLAS thread env vars before anything imports numpy."""
    threads = None
    for i, arg in enumerate(argv):
        if arg == "--threads" and i + 1 < len(argv):
            threads = argv[i + 1]
        elif arg.startswith("--threads="):
            threads = arg.split("=", 1)[1]
    if threads is None:
        threads = os.environ.get("CORRWISHART_THREADS")
    if threads is None:
        return
    try:
        count = int(threads)
        if count < 1:
            raise ValueError
    except ValueError:
        raise _ConfigError(f"--threads must be a positive integer, got {threads!r}")
    for var in _THREAD_ENV_VARS:
        os.environ[var] = str(count)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        _apply_thread_cap(argv)
        args = _build_parser().parse_args(argv)
        config = _resolve(args)
        if getattr(args, "show_config", False):
            shown = {
                "command": config.command,
                "knobs": config.knobs,
                "spec_path": config.spec_path,
                "output_path": config.output_path,
                "config_sha256": config.config_hash(),
            }
            print(json.dumps(shown, sort_keys=True, indent=2))
            return EXIT_OK
        return _HANDLERS[config.command](config)
    except _ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except SystemExit as exc:  # argparse errors already use code 2
        return int(exc.code or 0)
    except Exception as exc:
        from ._errors import NonConvergenceError, SpectrumFormatError

        if isinstance(exc, NonConvergenceError):
            print(f"error: did not converge: {exc}", file=sys.stderr)
            return EXIT_NONCONVERGENCE
        if isinstance(exc, (SpectrumFormatError, ValueError)):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BAD_CONFIG
        raise


def _run_module() -> None:  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    _run_module()
