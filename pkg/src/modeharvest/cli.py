"""Command-line front end: sweeps, figure presets, CSV/SVG artifacts.

Subcommands ``harvest``, ``purity``, ``oracle``, ``plot``, plus the preset
aliases ``fig1``, ``fig2``, ``fig4``.  All outputs are deterministic: CSV
cells carry 17 significant digits, provenance headers list every parameter,
and no code path consumes random numbers (asserted by ``--seedless``).
"""

from __future__ import annotations

import argparse
import json
import random
import sys

import numpy as np

from . import svgplot
from .config import RunConfig, config_to_dict, parse_config, schema_doc
from .errors import ConfigError, ModeHarvestError
from .harvesting import gap_sweep, harvest_pair
from .kernels import QuadratureSettings, TargetFieldSpec
from .modes import PotentialSpec
from .oracle import lattice_model_from_json, residual_scaling
from .purity import PuritySpec, symplectic_eigenvalue
from .smearing import DetectorSpec, SwitchingSpec

__all__ = ["main", "run_harvest", "run_purity", "run_oracle", "preset_config"]

_HARVEST_COLUMNS = (
    "sweep_value", "L_AA", "L_BB", "re_L_AB", "im_L_AB", "re_K_A", "im_K_A",
    "re_K_B", "im_K_B", "re_M", "im_M", "negativity", "comm_ratio",
    "err_L", "err_M", "negativity_per_lambda2", "separation", "status",
)
_PURITY_COLUMNS = (
    "sigma_over_ell", "dim", "nu", "terms_used", "truncation_bound", "status",
)
_ORACLE_COLUMNS = (
    "lambda", "n_exact", "n_pert", "residual", "slope", "status",
)


def _num(x) -> str:
    return f"{x:.16e}"


def _flatten(doc, prefix=""):
    for key in sorted(doc):
        val = doc[key]
        if isinstance(val, dict):
            yield from _flatten(val, f"{prefix}{key}.")
        else:
            yield f"{prefix}{key} = {json.dumps(val)}"


def _write_csv(path, cfg, columns, rows, notes=()):
    lines = ["# modeharvest artifact"]
    for note in notes:
        lines.append(f"# {note}")
    for item in _flatten(config_to_dict(cfg)):
        lines.append(f"# {item}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text


def _detector(det_cfg, cfg, gap=None, center=None) -> DetectorSpec:
    pot = PotentialSpec(
        kind=det_cfg.kind,
        scale=det_cfg.scale,
        probe_mass=det_cfg.probe_mass,
        center=center if center is not None else det_cfg.center,
    )
    switching = SwitchingSpec(cfg.timescale, cfg.center_time)
    return DetectorSpec(pot, det_cfg.mode, switching, det_cfg.coupling, gap=gap)


def _settings(cfg) -> QuadratureSettings:
    q = cfg.quadrature
    return QuadratureSettings(q.rel_tol, q.abs_tol, q.max_evaluations, q.method)


def _harvest_row(value, result, sep, lam2, status="ok"):
    r = result
    return (
        _num(value), _num(r.l_aa), _num(r.l_bb),
        _num(r.l_ab.real), _num(r.l_ab.imag),
        _num(r.k_a.real), _num(r.k_a.imag),
        _num(r.k_b.real), _num(r.k_b.imag),
        _num(r.m.real), _num(r.m.imag),
        _num(r.negativity), _num(r.comm_ratio),
        _num(max(r.err_l_aa, r.err_l_bb, r.err_l_ab)), _num(r.err_m),
        _num(r.negativity / lam2), _num(sep), status,
    )


def _failed_row(value, sep, status):
    nan = _num(float("nan"))
    return (_num(value),) + (nan,) * 15 + (_num(sep), status)


def run_harvest(cfg: RunConfig, extra_separations=()) -> str:
    """Execute a harvest sweep and write the CSV artifact.

    ``extra_separations`` appends re-runs of the same sweep with detector B
    moved to other distances (used by the fig2 preset to expose both quoted
    separations); the ``separation`` column distinguishes the curves.
    """
    settings = _settings(cfg)
    field = TargetFieldSpec(cfg.target_mass)
    values = np.linspace(cfg.sweep.min, cfg.sweep.max, cfg.sweep.points)
    base_a = np.asarray(cfg.detector_a.center, float)
    base_b = np.asarray(cfg.detector_b.center, float)
    base_sep = float(np.linalg.norm(base_b - base_a))
    lam2 = cfg.detector_a.coupling * cfg.detector_b.coupling

    separations = [base_sep] + [s for s in extra_separations if s != base_sep]
    direction = base_b - base_a
    if np.linalg.norm(direction) == 0.0:
        direction = np.array([0.0, 0.0, 1.0])
    else:
        direction = direction / np.linalg.norm(direction)

    rows = []
    for sep in separations:
        center_b = tuple(base_a + sep * direction)
        if cfg.sweep.axis == "gap":
            da = _detector(cfg.detector_a, cfg, gap=1.0)
            db = _detector(cfg.detector_b, cfg, gap=1.0, center=center_b)
            try:
                results = gap_sweep(da, db, field, settings, values)
            except ModeHarvestError as exc:
                rows.extend(
                    _failed_row(v, sep, f"failed: {exc}") for v in values
                )
                continue
            for v, res in zip(values, results):
                rows.append(_harvest_row(v, res, sep, lam2))
        else:  # separation sweep
            for v in values:
                cb = tuple(base_a + float(v) * direction)
                da = _detector(cfg.detector_a, cfg)
                db = _detector(cfg.detector_b, cfg, center=cb)
                try:
                    res = harvest_pair(da, db, field, settings)
                except ModeHarvestError as exc:
                    rows.append(_failed_row(v, v, f"failed: {exc}"))
                    continue
                rows.append(_harvest_row(v, res, v, lam2))
    notes = (
        "columns: leading-order pair scalars vs sweep_value; "
        "negativity_per_lambda2 divides out the coupling",
        "gap grids start above 0: the mode normalization (2 gap)^(-1/2) "
        "makes a zero-gap mode singular",
    )
    return _write_csv(cfg.output.csv, cfg, _HARVEST_COLUMNS, rows, notes)


def run_purity(cfg: RunConfig) -> str:
    """Execute a mixedness sweep and write the CSV artifact."""
    p = cfg.purity
    ratios = np.exp(
        np.linspace(np.log(p.ratio_min), np.log(p.ratio_max), cfg.sweep.points)
    )
    rows = []
    for dim in p.dims:
        for ratio in ratios:
            spec = PuritySpec(
                sigma=float(ratio), ell=1.0, mass_ell=p.mass_ell,
                dim=dim, series_rel_tol=p.series_rel_tol,
            )
            try:
                res = symplectic_eigenvalue(spec)
            except ModeHarvestError as exc:
                rows.append(
                    (_num(ratio), str(dim), _num(float("nan")), "0",
                     _num(float("nan")), f"failed: {exc}")
                )
                continue
            rows.append(
                (_num(ratio), str(dim), _num(res.nu), str(res.terms_used),
                 _num(res.truncation_bound), "ok")
            )
    notes = ("ratio grid is log-spaced, symmetric under ratio -> 1/ratio",)
    return _write_csv(cfg.output.csv, cfg, _PURITY_COLUMNS, rows, notes)


def run_oracle(cfg: RunConfig) -> str:
    """Execute the lattice validation campaign and write the CSV artifact."""
    o = cfg.oracle
    model = lattice_model_from_json(o.lattice)
    lams = np.exp(
        np.linspace(np.log(o.lambda_min), np.log(o.lambda_max), o.points)
    )
    scan = residual_scaling(model, lams)
    rows = []
    for lam, n_ex, n_pt, res in zip(
        scan.lambdas, scan.exact, scan.perturbative, scan.residuals
    ):
        rows.append((_num(lam), _num(n_ex), _num(n_pt), _num(res), "", "ok"))
    slope_txt = "" if scan.slope is None else _num(scan.slope)
    status = "below_noise" if scan.below_noise else "slope_fit"
    rows.append(("", "", "", _num(scan.noise_floor), slope_txt, status))
    notes = (
        "rows: exact vs perturbative negativity per coupling; final row "
        "carries the fitted log-log slope and the integrator noise floor",
    )
    return _write_csv(cfg.output.csv, cfg, _ORACLE_COLUMNS, rows, notes)


# ---------------------------------------------------------------------------
# presets


def default_oracle_lattice() -> dict:
    """64-site validation campaign used by the bare ``oracle`` subcommand."""
    from .oracle import gaussian_site_profile

    return {
        "n_sites": 64,
        "spacing": 0.4,
        "target_mass": 1.0,
        "boundary": "periodic",
        "probes": [
            {
                "gap": 1.8,
                "profile": list(gaussian_site_profile(64, 24.0, 1.5)),
                "coupling": 1.0,
                "switching": {"timescale": 1.0, "center_time": 0.0},
            },
            {
                "gap": 1.8,
                "profile": list(gaussian_site_profile(64, 40.0, 1.5)),
                "coupling": 1.0,
                "switching": {"timescale": 1.0, "center_time": 0.0},
            },
        ],
    }


def preset_config(name: str, out_csv: str, points: int | None = None) -> RunConfig:
    """Pinned figure-reproduction presets.

    Every parameter the figures state is pinned here; parameters the source
    leaves open (gap-axis range, coupling normalization) are artifact
    decisions recorded in the CSV provenance header.
    """
    if name == "fig1":
        doc = {
            "task": "harvest",
            "detector_a": {"kind": "harmonic", "scale": 0.1, "mode": [0, 0, 0],
                           "center": [0.0, 0.0, 0.0], "coupling": 1.0},
            "detector_b": {"kind": "harmonic", "scale": 0.1, "mode": [0, 0, 0],
                           "center": [0.0, 0.0, 5.0], "coupling": 1.0},
            "target_mass": 0.0,
            "sweep": {"axis": "gap", "min": 0.1, "max": 8.0,
                      "points": points or 80},
            "output": {"csv": out_csv},
        }
    elif name == "fig2":
        doc = {
            "task": "harvest",
            "detector_a": {"kind": "box", "scale": 0.5, "mode": [1, 1, 1],
                           "center": [0.0, 0.0, 0.0], "coupling": 1.0},
            "detector_b": {"kind": "box", "scale": 0.5, "mode": [1, 1, 1],
                           "center": [0.0, 0.0, 4.5], "coupling": 1.0},
            "target_mass": 0.0,
            "sweep": {"axis": "gap", "min": 0.1, "max": 8.0,
                      "points": points or 80},
            "output": {"csv": out_csv},
        }
    elif name == "fig4":
        doc = {
            "task": "purity",
            "sweep": {"axis": "ratio", "min": 0.125, "max": 8.0,
                      "points": points or 81},
            "purity": {"mass_ell": 10.0, "dims": [1, 2, 3],
                       "ratio_min": 0.125, "ratio_max": 8.0},
            "output": {"csv": out_csv},
        }
    else:
        raise ConfigError(f"unknown preset {name!r}")
    return parse_config(doc)


_PRESET_PLOTS = {
    "fig1": dict(x="sweep_value", ys=["negativity"], group_by=None,
                 title="negativity vs detector gap (harmonic traps)"),
    "fig2": dict(x="sweep_value", ys=["negativity"], group_by="separation",
                 title="negativity vs detector gap (box cavities)"),
    "fig4": dict(x="sigma_over_ell", ys=["nu"], group_by="dim", log_x=True,
                 title="mode mixedness vs profile/trap ratio"),
}


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modeharvest",
        description="entanglement harvesting with localized field modes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_config):
        p.add_argument(
            "--config",
            help="JSON run configuration" + ("" if needs_config else " (optional)"),
            required=False,
        )
        p.add_argument("--out", help="output CSV path (overrides config)")
        p.add_argument("--svg", action="store_true",
                       help="also render an SVG next to the CSV")
        p.add_argument("--points", type=int, help="override sweep point count")
        p.add_argument("--seedless", action="store_true",
                       help="assert that the run consumed no random numbers")

    for name, descr in (
        ("harvest", "detector-pair sweep: scalars, negativity, communication"),
        ("purity", "mixedness sweep of a Gaussian mode in a harmonic trap"),
        ("oracle", "lattice validation campaign: exact vs perturbative"),
    ):
        p = sub.add_parser(
            name, help=descr,
            epilog=schema_doc(),
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        add_common(p, needs_config=(name != "oracle"))

    for name in ("fig1", "fig2", "fig4"):
        p = sub.add_parser(name, help=f"run the {name} reproduction preset")
        add_common(p, needs_config=False)

    p = sub.add_parser("plot", help="render an SVG from a CSV artifact")
    p.add_argument("--csv", required=True, help="input CSV artifact")
    p.add_argument("--x", required=True, help="x column name")
    p.add_argument("--y", required=True, help="comma-separated y column names")
    p.add_argument("--group-by", help="split curves on this column")
    p.add_argument("--log-x", action="store_true", help="logarithmic x axis")
    p.add_argument("--log-y", action="store_true", help="logarithmic y axis")
    p.add_argument("--out", required=True, help="output SVG path")
    p.add_argument("--title", default="", help="plot title")
    return parser


def _apply_overrides(cfg_doc: dict, args) -> dict:
    if args.out:
        cfg_doc.setdefault("output", {})["csv"] = args.out
    if args.points:
        cfg_doc.setdefault("sweep", {})["points"] = args.points
    return cfg_doc


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "plot":
        svgplot.plot_csv(
            args.csv, args.x, args.y.split(","), args.out,
            group_by=args.group_by, log_x=args.log_x, log_y=args.log_y,
            title=args.title,
        )
        print(f"wrote {args.out}")
        return 0

    if cmd in ("fig1", "fig2", "fig4"):
        out = args.out or f"{cmd}.csv"
        cfg = preset_config(cmd, out, args.points)
        preset = cmd
    else:
        preset = None
        if args.config:
            doc = parse_config(args.config)
            doc = _apply_overrides(config_to_dict(doc), args)
        elif cmd == "oracle":
            doc = {
                "task": "oracle",
                "oracle": {"lattice": default_oracle_lattice()},
                "output": {"csv": args.out or "oracle.csv"},
            }
            doc = _apply_overrides(doc, args)
        else:
            raise ConfigError(f"{cmd}: --config is required")
        cfg = parse_config(doc)
        if cfg.task != (cmd if cmd != "harvest" else "harvest"):
            if cfg.task != cmd:
                raise ConfigError(
                    f"config task {cfg.task!r} does not match subcommand {cmd!r}"
                )

    task = cfg.task
    if task == "harvest":
        extra = (5.0,) if preset == "fig2" else ()
        run_harvest(cfg, extra_separations=extra)
    elif task == "purity":
        run_purity(cfg)
    else:
        run_oracle(cfg)
    print(f"wrote {cfg.output.csv}")

    if args.svg:
        spec = _PRESET_PLOTS.get(
            preset or "",
            dict(x="sweep_value", ys=["negativity"], group_by=None, title=""),
        )
        if task == "purity" and preset is None:
            spec = dict(x="sigma_over_ell", ys=["nu"], group_by="dim",
                        log_x=True, title="")
        if task == "oracle":
            spec = dict(x="lambda", ys=["residual"], group_by=None,
                        log_x=True, log_y=True, title="")
        svg_path = cfg.output.svg or cfg.output.csv.rsplit(".", 1)[0] + ".svg"
        svgplot.plot_csv(
            cfg.output.csv, spec["x"], spec["ys"], svg_path,
            group_by=spec.get("group_by"), log_x=spec.get("log_x", False),
            log_y=spec.get("log_y", False), title=spec.get("title", ""),
        )
        print(f"wrote {svg_path}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    seedless = getattr(args, "seedless", False)
    if seedless:
        py_state = random.getstate()
        np_state = np.random.get_state()
    try:
        code = _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ModeHarvestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if seedless:
        same_np = all(
            np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b
            for a, b in zip(np_state, np.random.get_state())
        )
        if random.getstate() != py_state or not same_np:
            print("seedless assertion failed: RNG state changed", file=sys.stderr)
            return 3
    return code


if __name__ == "__main__":
    raise SystemExit(main())
