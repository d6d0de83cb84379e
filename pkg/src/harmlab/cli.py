"""Command-line front end.

Configuration is a flat JSON object with dotted key paths, mirrored one-to-one
by CLI flags (`--pair.n 3`).  Precedence: flags > file > defaults.  Unknown
keys are rejected by name.  All runs are seed-free and deterministic: the
same config produces byte-identical data files.

Exit codes: 0 success, 2 config error, 3 numerical failure (failed series
seeding, inconclusive sign adjudication, aborted sweep, non-monotone
trajectory where a transform was requested).
"""

from __future__ import annotations

import json
import math
import os
import sys
from typing import List, Optional

import numpy as np

from .analysis import (
    GridSpec,
    adjudicate_sign,
    check_conditions,
    lemma_quantity_monitor,
    wbound_monitor,
    z_monotonicity_monitor,
)
from .equations import transform_direct_to_abel
from .errors import (
    AdjudicationInconclusiveError,
    ConfigError,
    MonotonicityError,
    SeriesStartError,
    SweepError,
)
from .integrate import IntegrationConfig, integrate_direct, series_start
from .outputs import write_json, write_sweep_csv, write_trajectory_csv
from .profiles import ModelPair, make_builtin
from .sweep import CGrid, Regime, SweepSpec, run_sweep

__all__ = ["main", "run"]

COMMANDS = ("check-conditions", "integrate", "shoot", "sweep", "adjudicate-sign", "monitors")

DEFAULTS = {
    "pair.n": 3,
    "pair.family": "hyperbolic",
    "pair.params": [],
    "pair.coefficients": [],
    "grid.r_min": 1e-4,
    "grid.r_max": 50.0,
    "grid.count": 2000,
    "grid.remark_mode": False,
    "integration.rel_tol": 1e-10,
    "integration.abs_tol": 1e-12,
    "integration.max_steps": 1_000_000,
    "integration.r_start": 0.01,
    "integration.r_end": 50.0,
    "integration.y_cap": 1e8,
    "integration.yp_zero_tol": 1e-14,
    "integrate.seed": "series",
    "integrate.c": 1.0,
    "integrate.y0": 1.0,
    "integrate.yp0": 1.0,
    "integrate.direction": "forward",
    "shot.regime": "origin_regular",
    "shot.c": 1.0,
    "sweep.regime": "origin_regular",
    "sweep.c_count": 61,
    "sweep.c_min": 1e-3,
    "sweep.c_max": 1e3,
    "sweep.workers": 1,
    "output_dir": ".",
}

_STRING_KEYS = {"pair.family", "integrate.seed", "integrate.direction",
                "shot.regime", "sweep.regime", "output_dir"}
_LIST_KEYS = {"pair.params", "pair.coefficients"}
_INT_KEYS = {"pair.n", "grid.count", "integration.max_steps", "sweep.c_count", "sweep.workers"}
_BOOL_KEYS = {"grid.remark_mode"}


def _coerce(key: str, value):
    """Validate one config entry against the key's expected type."""
    if key in _STRING_KEYS:
        if not isinstance(value, str):
            raise ConfigError(f"config key {key} must be a string, got {value!r}")
        return value
    if key in _LIST_KEYS:
        if not isinstance(value, (list, tuple)) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
        ):
            raise ConfigError(f"config key {key} must be an array of numbers, got {value!r}")
        if any(not math.isfinite(float(v)) for v in value):
            raise ConfigError(f"config key {key} contains a non-finite number")
        return [float(v) for v in value]
    if key in _BOOL_KEYS:
        if not isinstance(value, bool):
            raise ConfigError(f"config key {key} must be a boolean, got {value!r}")
        return value
    if key in _INT_KEYS:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ConfigError(f"config key {key} must be an integer, got {value!r}")
        return int(value)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"config key {key} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"config key {key} must be finite, got {value!r}")
    return value


def _parse_override(key: str, raw: str):
    """Interpret a flag value: JSON where it parses, bare string otherwise."""
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def build_config(config_path: Optional[str], overrides: dict) -> dict:
    cfg = dict(DEFAULTS)
    if config_path is not None:
        try:
            with open(config_path) as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {config_path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {config_path} is not valid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a flat JSON object")
        for key, value in loaded.items():
            if key not in DEFAULTS:
                raise ConfigError(f"unknown config key {key}")
            cfg[key] = _coerce(key, value)
    for key, value in overrides.items():
        if key not in DEFAULTS:
            raise ConfigError(f"unknown config key {key}")
        cfg[key] = _coerce(key, value)
    return cfg


def _build_pair(cfg: dict) -> ModelPair:
    n = cfg["pair.n"]
    if n < 2:
        raise ConfigError(f"pair.n must be >= 2, got {n}")
    try:
        profile = make_builtin(
            cfg["pair.family"], params=cfg["pair.params"], coefficients=cfg["pair.coefficients"]
        )
    except ValueError as exc:
        raise ConfigError(f"pair.family/pair.params/pair.coefficients: {exc}") from exc
    return ModelPair(n=n, target=profile)


def _build_integration(cfg: dict) -> IntegrationConfig:
    try:
        return IntegrationConfig(
            rel_tol=cfg["integration.rel_tol"],
            abs_tol=cfg["integration.abs_tol"],
            max_steps=cfg["integration.max_steps"],
            r_start=cfg["integration.r_start"],
            r_end=cfg["integration.r_end"],
            y_cap=cfg["integration.y_cap"],
            yp_zero_tol=cfg["integration.yp_zero_tol"],
        )
    except ValueError as exc:
        raise ConfigError(f"integration.*: {exc}") from exc


def _build_grid(cfg: dict) -> GridSpec:
    try:
        return GridSpec(r_min=cfg["grid.r_min"], r_max=cfg["grid.r_max"], count=cfg["grid.count"])
    except ValueError as exc:
        raise ConfigError(f"grid.*: {exc}") from exc


def _regime(key: str, raw: str) -> Regime:
    try:
        return Regime(raw)
    except ValueError:
        names = ", ".join(r.value for r in Regime)
        raise ConfigError(f"config key {key} must be one of {names}, got {raw!r}") from None


def _shot_trajectory(pair, regime, icfg, c, dense=False):
    if regime is Regime.ORIGIN_REGULAR:
        init = series_start(pair.n, pair.target, c, icfg.r_start)
        return integrate_direct(pair.n, pair.target, icfg, init, direction="forward", dense=dense)
    init = (c, -c / icfg.r_end)
    return integrate_direct(pair.n, pair.target, icfg, init, direction="backward", dense=dense)


def _trajectory_meta(t) -> dict:
    return {
        "verdict": t.verdict.tag.value,
        "r_event": t.verdict.r_event,
        "detail": t.verdict.detail,
        "steps": t.steps,
        "rejected": t.rejected,
        "final_r": t.final_r,
        "final_y": float(t.y[-1]),
        "final_yp": float(t.yp[-1]),
    }


def _cmd_check_conditions(cfg: dict, outdir: str) -> None:
    report = check_conditions(_build_pair(cfg), grid=_build_grid(cfg),
                              remark_mode=cfg["grid.remark_mode"])
    write_json(os.path.join(outdir, "conditions.json"), report.to_dict())


def _cmd_integrate(cfg: dict, outdir: str) -> None:
    pair = _build_pair(cfg)
    icfg = _build_integration(cfg)
    seed = cfg["integrate.seed"]
    direction = cfg["integrate.direction"]
    if direction not in ("forward", "backward"):
        raise ConfigError(f"config key integrate.direction must be forward or backward, got {direction!r}")
    if seed == "series":
        if cfg["integrate.c"] <= 0:
            raise ConfigError(f"integrate.c must be > 0 for series seeding, got {cfg['integrate.c']}")
        init = series_start(pair.n, pair.target, cfg["integrate.c"], icfg.r_start)
    elif seed == "explicit":
        init = (cfg["integrate.y0"], cfg["integrate.yp0"])
    else:
        raise ConfigError(f"config key integrate.seed must be series or explicit, got {seed!r}")
    t = integrate_direct(pair.n, pair.target, icfg, init, direction=direction, dense=False)
    write_trajectory_csv(os.path.join(outdir, "trajectory.csv"), t)
    write_json(os.path.join(outdir, "trajectory_meta.json"), _trajectory_meta(t))


def _cmd_shoot(cfg: dict, outdir: str) -> None:
    pair = _build_pair(cfg)
    icfg = _build_integration(cfg)
    regime = _regime("shot.regime", cfg["shot.regime"])
    c = cfg["shot.c"]
    if c <= 0:
        raise ConfigError(f"shot.c must be > 0, got {c}")
    t = _shot_trajectory(pair, regime, icfg, c)
    write_trajectory_csv(os.path.join(outdir, "trajectory.csv"), t)
    meta = _trajectory_meta(t)
    meta["regime"] = regime.value
    meta["c"] = c
    write_json(os.path.join(outdir, "trajectory_meta.json"), meta)


def _cmd_sweep(cfg: dict, outdir: str) -> None:
    pair = _build_pair(cfg)
    icfg = _build_integration(cfg)
    regime = _regime("sweep.regime", cfg["sweep.regime"])
    try:
        c_grid = CGrid(count=cfg["sweep.c_count"], c_min=cfg["sweep.c_min"], c_max=cfg["sweep.c_max"])
    except ValueError as exc:
        raise ConfigError(f"sweep.c_*: {exc}") from exc
    workers = cfg["sweep.workers"]
    if workers < 1:
        raise ConfigError(f"sweep.workers must be >= 1, got {workers}")
    report = run_sweep(SweepSpec(pair=pair, regime=regime, c_grid=c_grid, cfg=icfg), workers=workers)
    write_sweep_csv(os.path.join(outdir, "sweep.csv"), report.rows)
    write_json(os.path.join(outdir, "sweep_summary.json"), {
        "any_diffeo_candidate": report.any_diffeo_candidate,
        "counts": report.summary,
        "regime": regime.value,
        "rows": len(report.rows),
        "note": "a sweep is one-parameter evidence, not a nonexistence proof",
    })


def _cmd_adjudicate(cfg: dict, outdir: str) -> None:
    result = adjudicate_sign(_build_pair(cfg), _build_integration(cfg))
    write_json(os.path.join(outdir, "adjudication.json"), result.to_dict())


def _cmd_monitors(cfg: dict, outdir: str) -> None:
    pair = _build_pair(cfg)
    icfg = _build_integration(cfg)
    regime = _regime("shot.regime", cfg["shot.regime"])
    c = cfg["shot.c"]
    if c <= 0:
        raise ConfigError(f"shot.c must be > 0, got {c}")
    t = _shot_trajectory(pair, regime, icfg, c)
    abel = transform_direct_to_abel(t)
    keep = abel.y > 0.0
    if int(np.count_nonzero(keep)) < 2:
        raise MonotonicityError("trajectory has fewer than 2 samples with y > 0")
    y = abel.y[keep]
    z = abel.z[keep]
    from .trajectory import AbelTrajectory

    abel = AbelTrajectory(y=y, z=z, variant=abel.variant)
    lemma = lemma_quantity_monitor(pair.n, pair.target, abel)
    mono = z_monotonicity_monitor(abel)
    wb = wbound_monitor(pair.n, y, 1.0 / (z * z))
    write_json(os.path.join(outdir, "monitors.json"), {
        "shot": {"regime": regime.value, "c": c, "verdict": t.verdict.tag.value,
                 "r_event": t.verdict.r_event},
        "lemma_quantity": lemma.to_dict(),
        "z_monotonicity": mono.to_dict(),
        "w_bound": wb.to_dict(),
    })


_DISPATCH = {
    "check-conditions": _cmd_check_conditions,
    "integrate": _cmd_integrate,
    "shoot": _cmd_shoot,
    "sweep": _cmd_sweep,
    "adjudicate-sign": _cmd_adjudicate,
    "monitors": _cmd_monitors,
}


def _parse_argv(argv: List[str]):
    if not argv or argv[0] in ("-h", "--help"):
        print(__doc__.strip())
        print("\ncommands:", ", ".join(COMMANDS))
        print("usage: harmlab COMMAND [--config FILE] [--KEY VALUE ...]")
        raise SystemExit(0)
    command = argv[0]
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    config_path = None
    overrides = {}
    i = 1
    while i < len(argv):
        arg = argv[i]
        if not arg.startswith("--"):
            raise ConfigError(f"unexpected argument {arg!r}; flags are --config or --KEY VALUE")
        key = arg[2:]
        if i + 1 >= len(argv):
            raise ConfigError(f"flag --{key} is missing its value")
        value = argv[i + 1]
        i += 2
        if key == "config":
            config_path = value
        else:
            overrides[key] = _parse_override(key, value)
    return command, config_path, overrides


def run(argv: List[str]) -> int:
    try:
        command, config_path, overrides = _parse_argv(argv)
        cfg = build_config(config_path, overrides)
        outdir = cfg["output_dir"]
        os.makedirs(outdir, exist_ok=True)
        _DISPATCH[command](cfg, outdir)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SeriesStartError, AdjudicationInconclusiveError, SweepError, MonotonicityError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
