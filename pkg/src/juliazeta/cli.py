"""Batch CLI: declarative JSON job configs in, machine-readable
artifacts out.

Every task is deterministic (no RNG anywhere in the engine), artifacts
are written atomically with shortest round-trip decimals, and a manifest
records the config hash and library version, so a rerun of the same
config produces byte-identical data artifacts at any thread count.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .cover import box_dimension, cover_profile
from .dynamics import (AffinePair, MapSpec, Mode, build_orbit_catalog,
                       save_catalog)
from .errors import ConfigError, EngineError
from .pairing import TestFunction, identity_residual, orbit_length_histogram
from .tracecheck import comparison_table, export_table
from .util import atomic_write_text
from .zeros import (LogFamily, PolyFamily, Rectangle, StripFamily,
                    counting_report, export_zeros, growth_exponent_probe,
                    leading_real_zero, scan_region)
from .zeta import (CycleEvaluator, FredholmEvaluator, ModelEvaluator,
                   export_grid, model_dimension)

TASKS = ("orbits", "cover", "zeta-eval", "zeros", "count", "growth",
         "pairing", "trace-check", "dimension")


def _require(cfg: dict, key: str, where: str):
    if key not in cfg:
        raise ConfigError(f"missing key {key!r} in {where}")
    return cfg[key]


def _check_keys(cfg: dict, allowed: set[str], where: str) -> None:
    for key in cfg:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in {where}")


def _as_complex(v, where: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ConfigError(f"{where} must be a number or [re, im] pair")


def build_system(cfg: dict):
    kind = _require(cfg, "kind", "system")
    if kind == "quadratic":
        _check_keys(cfg, {"kind", "c", "mode", "tol_point", "n_cert"}, "system")
        mode = cfg.get("mode", "real1d")
        try:
            mode = Mode(mode)
        except ValueError:
            raise ConfigError(f"unknown mode {mode!r} in system") from None
        try:
            return MapSpec(c=_as_complex(_require(cfg, "c", "system"), "system.c"),
                           mode=mode,
                           tol_point=cfg.get("tol_point", 1e-12),
                           n_cert=cfg.get("n_cert", 1))
        except ValueError as exc:
            raise ConfigError(f"invalid quadratic system: {exc}") from exc
    if kind == "model":
        _check_keys(cfg, {"kind", "a", "b", "k_max"}, "system")
        return ("model", float(_require(cfg, "a", "system")),
                float(_require(cfg, "b", "system")),
                int(_require(cfg, "k_max", "system")))
    if kind == "affine":
        _check_keys(cfg, {"kind", "ratios"}, "system")
        ratios = _require(cfg, "ratios", "system")
        if not (isinstance(ratios, list) and len(ratios) == 2):
            raise ConfigError("system.ratios must be a pair")
        try:
            return AffinePair((float(ratios[0]), float(ratios[1])))
        except ValueError as exc:
            raise ConfigError(f"invalid affine system: {exc}") from exc
    raise ConfigError(f"unknown system kind {kind!r}")


def _evaluator(system, params: dict, need_left_of_delta: bool = False):
    """Evaluator for the configured system; quadratic systems use the
    Fredholm route when the job needs values left of delta."""
    if isinstance(system, tuple) and system[0] == "model":
        return ModelEvaluator(system[1], system[2], system[3])
    if isinstance(system, AffinePair):
        a, b = system.ratios
        return ModelEvaluator(a, b, int(params.get("k_max", 40)))
    method = params.get("method", "fredholm" if need_left_of_delta else "cycle")
    if method == "fredholm":
        return FredholmEvaluator(system, level=int(params.get("level", 2)),
                                 order=params.get("order"))
    if method == "cycle":
        catalog = build_orbit_catalog(system, int(params.get("n_max", 12)),
                                      threads=params.get("_threads", 1))
        return CycleEvaluator(catalog)
    raise ConfigError(f"unknown method {method!r} in params")


def _rectangle(params: dict) -> Rectangle:
    rect = _require(params, "rectangle", "params")
    if not (isinstance(rect, list) and len(rect) == 4):
        raise ConfigError("params.rectangle must be [re_lo, re_hi, im_lo, im_hi]")
    return Rectangle(*[float(v) for v in rect])


def _family(cfg: dict, delta: float | None):
    kind = _require(cfg, "kind", "params.family")
    if kind == "strip":
        _check_keys(cfg, {"kind", "c0"}, "params.family")
        return StripFamily(float(_require(cfg, "c0", "params.family")))
    if kind == "poly":
        _check_keys(cfg, {"kind", "alpha"}, "params.family")
        return PolyFamily(float(_require(cfg, "alpha", "params.family")))
    if kind == "log":
        _check_keys(cfg, {"kind", "rho", "delta"}, "params.family")
        d = cfg.get("delta", delta)
        if d is None:
            raise ConfigError("params.family.delta required for the log family")
        return LogFamily(rho=float(_require(cfg, "rho", "params.family")), delta=float(d))
    raise ConfigError(f"unknown counting family {kind!r}")


def _system_delta(system, params: dict) -> float:
    if isinstance(system, tuple) and system[0] == "model":
        return model_dimension(system[1], system[2])
    if isinstance(system, AffinePair):
        return model_dimension(*system.ratios)
    ev = FredholmEvaluator(system, level=int(params.get("level", 2)))
    return leading_real_zero(ev, (0.05, 0.95)).s.real


# ---------------------------------------------------------------------------
# task runners (each returns a dict of artifact name -> writer callable)

def _task_orbits(system, params, threads):
    _check_keys(params, {"n_max"}, "params")
    if not isinstance(system, MapSpec):
        raise ConfigError("orbits task requires a quadratic system")
    catalog = build_orbit_catalog(system, int(params.get("n_max", 12)), threads=threads)
    return {"catalog.json": lambda path: save_catalog(catalog, path)}


def _task_cover(system, params, threads):
    _check_keys(params, {"h_max", "n_scales", "decades", "hs"}, "params")
    if "hs" in params:
        stats = cover_profile(system, [float(h) for h in params["hs"]])
    else:
        _fit, stats = box_dimension(system,
                                    h_max=params.get("h_max"),
                                    n_scales=int(params.get("n_scales", 25)),
                                    decades=float(params.get("decades", 3.0)))
    return {"cover_stats.csv": stats.to_csv}


def _task_zeta_eval(system, params, threads):
    _check_keys(params, {"method", "level", "order", "n_max", "k_max",
                         "re", "im"}, "params")
    params = dict(params, _threads=threads)
    ev = _evaluator(system, params)
    re_spec = _require(params, "re", "params")
    im_spec = _require(params, "im", "params")
    res = np.linspace(re_spec[0], re_spec[1], int(re_spec[2]))
    ims = np.linspace(im_spec[0], im_spec[1], int(im_spec[2]))
    ss = [complex(a, b) for b in ims for a in res]
    return {"zeta_grid.csv": lambda path: export_grid(path, ev, ss)}


def _task_zeros(system, params, threads):
    _check_keys(params, {"method", "level", "order", "n_max", "k_max",
                         "rectangle"}, "params")
    ev = _evaluator(system, params, need_left_of_delta=True)
    records = scan_region(ev, _rectangle(params))
    return {"zeros.csv": lambda path: export_zeros(path, records)}


def _task_count(system, params, threads):
    _check_keys(params, {"method", "level", "order", "n_max", "k_max",
                         "rectangle", "family", "radii"}, "params")
    ev = _evaluator(system, params, need_left_of_delta=True)
    records = scan_region(ev, _rectangle(params))
    delta = None
    if _require(params, "family", "params").get("kind") == "log" and \
            "delta" not in params["family"]:
        delta = _system_delta(system, params)
    family = _family(params["family"], delta)
    report = counting_report(records, family, [float(r) for r in
                                               _require(params, "radii", "params")])
    return {"counts.csv": report.to_csv,
            "count_summary.json": lambda path: atomic_write_text(
                path, json.dumps(report.summary(), indent=1) + "\n")}


def _task_growth(system, params, threads):
    _check_keys(params, {"method", "level", "order", "n_max", "k_max",
                         "c0", "radii", "re_samples"}, "params")
    ev = _evaluator(system, params, need_left_of_delta=True)
    fit = growth_exponent_probe(ev, float(_require(params, "c0", "params")),
                                [float(r) for r in _require(params, "radii", "params")],
                                re_samples=int(params.get("re_samples", 33)))
    payload = {"exponent": fit.exponent, "r2": fit.r2,
               "rows": [{"r": r, "max_log_abs_Z": m}
                        for r, m in zip(fit.rs, fit.max_log_abs)],
               "skipped": list(fit.skipped)}
    return {"growth.json": lambda path: atomic_write_text(
        path, json.dumps(payload, indent=1) + "\n")}


def _task_pairing(system, params, threads):
    _check_keys(params, {"windows", "rectangle", "n_max", "k_max", "delta",
                         "histogram_n", "level"}, "params")
    if isinstance(system, AffinePair):
        catalog = system.orbit_catalog(int(params.get("n_max", 12)))
        ev = ModelEvaluator(*system.ratios, int(params.get("k_max", 40)))
    elif isinstance(system, MapSpec):
        catalog = build_orbit_catalog(system, int(params.get("n_max", 12)),
                                      threads=threads)
        ev = FredholmEvaluator(system, level=int(params.get("level", 2)))
    else:
        raise ConfigError("pairing task requires an affine or quadratic system")
    delta = params.get("delta")
    if delta is None:
        delta = _system_delta(system, params)
    region = _rectangle(params)
    zeros = scan_region(ev, region)
    artifacts = {}
    for k, win in enumerate(_require(params, "windows", "params")):
        _check_keys(win, {"d", "gamma"}, "params.windows[]")
        phi = TestFunction(d=float(win["d"]), gamma=float(win["gamma"]))
        result = identity_residual(catalog, ev, float(delta), phi, region, zeros=zeros)
        artifacts[f"pairing_{k}.json"] = result.to_json
    if "histogram_n" in params:
        hist = orbit_length_histogram(catalog, int(params["histogram_n"]))
        artifacts["length_histogram.csv"] = hist.to_csv
    return artifacts


def _task_trace_check(system, params, threads):
    _check_keys(params, {"mu_values", "tol"}, "params")
    mu_values = None
    if "mu_values" in params:
        mu_values = [_as_complex(v, "params.mu_values[]") for v in params["mu_values"]]
    rows = comparison_table(mu_values, tol=float(params.get("tol", 1e-11)))
    for row in rows:
        print(f"mu=({row[0]}, {row[1]})  {row[2]} var  order {row[3]}  "
              f"trace {row[4]!r}  closed {row[5]!r}  err {row[6]:.3e}")
    return {"trace_table.csv": lambda path: export_table(path, rows)}


def _task_dimension(system, params, threads):
    _check_keys(params, {"level", "n_scales", "decades", "h_max"}, "params")
    fit, _stats = box_dimension(system,
                                h_max=params.get("h_max"),
                                n_scales=int(params.get("n_scales", 25)),
                                decades=float(params.get("decades", 3.0)))
    delta_zeta = _system_delta(system, params)
    payload = {"delta_zeta": delta_zeta,
               "delta_box": fit.delta_box,
               "abs_difference": abs(delta_zeta - fit.delta_box),
               "box_fit_r2": fit.r2,
               "box_fit_reliable": fit.reliable}
    return {"dimension.json": lambda path: atomic_write_text(
        path, json.dumps(payload, indent=1) + "\n")}


_RUNNERS = {
    "orbits": _task_orbits,
    "cover": _task_cover,
    "zeta-eval": _task_zeta_eval,
    "zeros": _task_zeros,
    "count": _task_count,
    "growth": _task_growth,
    "pairing": _task_pairing,
    "trace-check": _task_trace_check,
    "dimension": _task_dimension,
}


def run_job(config: dict, out_dir: str, threads: int = 1) -> list[str]:
    """Validate and run one job; returns the artifact paths written.

    Artifacts are byte-deterministic; the manifest (config hash, library
    version, wall time) is written last.
    """
    if not isinstance(config, dict):
        raise ConfigError("config root must be an object")
    _check_keys(config, {"task", "system", "params", "out"}, "config")
    task = _require(config, "task", "config")
    if task not in TASKS:
        raise ConfigError(f"unknown task {task!r} (expected one of {', '.join(TASKS)})")
    system_cfg = config.get("system")
    system = build_system(system_cfg) if system_cfg is not None else None
    if system is None and task != "trace-check":
        raise ConfigError(f"missing key 'system' in config (task {task!r} needs one)")
    params = config.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("config.params must be an object")

    started = time.monotonic()
    artifacts = _RUNNERS[task](system, params, threads)
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name in sorted(artifacts):
        path = os.path.join(out_dir, name)
        artifacts[name](path)
        written.append(path)
    manifest = {
        "task": task,
        "config_sha256": hashlib.sha256(
            json.dumps(config, sort_keys=True).encode()).hexdigest(),
        "version": __version__,
        "threads": threads,
        "wall_time_s": time.monotonic() - started,
        "artifacts": sorted(artifacts),
    }
    mpath = os.path.join(out_dir, "manifest.json")
    atomic_write_text(mpath, json.dumps(manifest, indent=1) + "\n")
    written.append(mpath)
    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="jz",
        description="zeta functions, resonances and dimension for "
                    "hyperbolic quadratic Julia sets")
    parser.add_argument("task", choices=TASKS, help="job type; must match the config")
    parser.add_argument("--config", default=os.environ.get("JZ_CONFIG"),
                        help="path to the JSON job config (env JZ_CONFIG)")
    parser.add_argument("--out", default=os.environ.get("JZ_OUT", "."),
                        help="artifact output directory (env JZ_OUT)")
    parser.add_argument("--threads", type=int,
                        default=int(os.environ.get("JZ_THREADS", "1")),
                        help="worker thread cap; results do not depend on it")
    args = parser.parse_args(argv)

    try:
        if args.config is None:
            if args.task != "trace-check":
                raise ConfigError("--config is required (or set JZ_CONFIG)")
            config = {"task": "trace-check"}
        else:
            with open(args.config) as fh:
                config = json.load(fh)
        if config.get("task") != args.task:
            raise ConfigError(
                f"config task {config.get('task')!r} does not match "
                f"subcommand {args.task!r}")
        out = config.get("out", args.out)
        written = run_job(config, out, threads=max(1, args.threads))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (EngineError, OSError, json.JSONDecodeError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
