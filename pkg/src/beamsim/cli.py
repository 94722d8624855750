"""Experiment runner.

Subcommands::

    beamsim simulate   --config cfg.ini [--seed N --trials N --units U --out-dir D]
    beamsim bounds     --config cfg.ini ...
    beamsim throughput --config cfg.ini ...
    beamsim sweep      --config cfg.ini ...
    beamsim validate   [--seed N --trials N --criteria 1,2,...]

Configs are flat key-value INI text with one ``[sweep:NAME]`` section per
sweep (schema documented in the README).  Every run writes RFC-4180 CSV
files plus a JSON-lines manifest recording the seed, trial count, units,
version, wall time, and the fully resolved configuration including
defaults.  CSV bytes depend only on config + seed, never on timing.

Exit codes: 0 success, 1 numerical failure, 2 config error, 3 infeasible
throughput configuration.  The ``BEAMSIM_THREADS`` environment variable
overrides the Monte Carlo worker count (0 = auto).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import subprocess
import sys
import time
import zlib
from pathlib import Path
from typing import Any, Sequence

import numpy as np

import beamsim.throughput as throughput

from . import __version__, analytic, validation
from .analytic import SparseModel
from .beam import BeamGrid
from .channel import FadingModel, LinkBudget
from .errors import (
    ApproximationInvalidError,
    BeamsimError,
    ConfigError,
    InfeasibleConfigError,
    NumericalError,
)
from .montecarlo import SimConfig, estimate_se
from .rng import child_seed

SCHEMA_VERSION = 1
LN2 = math.log(2.0)

SWEEP_VARIABLES = ("lambda0", "b", "m", "k_db", "velocity", "rho")
OUTPUT_TAGS = (
    "sim_se",
    "upper_nakagami",
    "upper_rayleigh",
    "lower",
    "sparse",
    "tp",
    "b_star_numeric",
    "b_star_closed",
    "hpbw_star",
)


# =====================================================================
#  Config parsing
# =====================================================================

class SectionView:
    """Typed access to one INI section with field-level diagnostics."""

    def __init__(self, name: str, raw: dict[str, str]):
        self.name = name
        self.raw = dict(raw)
        self.used: set[str] = set()

    def _fetch(self, key: str, default: Any, required: bool) -> str | None:
        if key in self.raw:
            self.used.add(key)
            return self.raw[key]
        if required:
            raise ConfigError(f"[{self.name}] missing required key '{key}'")
        return default

    def get_str(self, key: str, default: str | None = None, required: bool = False) -> str | None:
        val = self._fetch(key, default, required)
        return val if val is None else str(val).strip()

    def get_float(self, key: str, default: float | None = None, required: bool = False) -> float | None:
        val = self._fetch(key, default, required)
        if val is None or isinstance(val, float):
            return val
        try:
            return float(val)
        except ValueError:
            raise ConfigError(f"[{self.name}] key '{key}': expected a number, got {val!r}") from None

    def get_int(self, key: str, default: int | None = None, required: bool = False) -> int | None:
        val = self._fetch(key, default, required)
        if val is None or isinstance(val, int):
            return val
        try:
            return int(str(val), 10)
        except ValueError:
            raise ConfigError(f"[{self.name}] key '{key}': expected an integer, got {val!r}") from None

    def get_bool(self, key: str, default: bool = False) -> bool:
        val = self._fetch(key, None, False)
        if val is None:
            return default
        low = str(val).strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"[{self.name}] key '{key}': expected a boolean, got {val!r}")

    def get_float_list(self, key: str, required: bool = False) -> list[float] | None:
        val = self._fetch(key, None, required)
        if val is None:
            return None
        items = [tok for tok in str(val).replace(",", " ").split() if tok]
        if not items:
            raise ConfigError(f"[{self.name}] key '{key}': list is empty")
        try:
            return [float(tok) for tok in items]
        except ValueError:
            raise ConfigError(f"[{self.name}] key '{key}': expected numbers, got {val!r}") from None

    def has(self, key: str) -> bool:
        return key in self.raw

    def resolved(self, defaults: dict[str, Any]) -> dict[str, Any]:
        """Raw keys merged over defaults; records what the user left unset."""
        merged = {k: v for k, v in defaults.items()}
        merged.update(self.raw)
        return merged


def load_config(path: str | Path) -> dict[str, SectionView]:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except (configparser.Error, OSError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None
    sections = {name: SectionView(name, dict(parser[name])) for name in parser.sections()}
    run = sections.get("run")
    if run is None:
        raise ConfigError("[run] section with schema_version is required")
    version = run.get_int("schema_version", required=True)
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"[run] schema_version {version} unsupported (this build expects {SCHEMA_VERSION})"
        )
    return sections


class RunParams:
    """Global run settings: [run] section overridden by CLI flags."""

    def __init__(self, sections: dict[str, SectionView], args: argparse.Namespace):
        run = sections.get("run", SectionView("run", {}))
        self.seed = args.seed if args.seed is not None else (run.get_int("seed", 0) or 0)
        self.trials = args.trials if args.trials is not None else (run.get_int("trials", 10_000) or 10_000)
        self.units = args.units if args.units is not None else (run.get_str("units", "nats") or "nats")
        if self.units not in ("nats", "bits"):
            raise ConfigError(f"[run] units must be 'nats' or 'bits', got {self.units!r}")
        if self.trials < 1:
            raise ConfigError(f"[run] trials must be >= 1, got {self.trials}")

    def defaults_dict(self) -> dict[str, Any]:
        return {"seed": self.seed, "trials": self.trials, "units": self.units}


def _fading_from(section: SectionView) -> FadingModel:
    has_m = section.has("m")
    has_k = section.has("k_db")
    if has_m and has_k:
        raise ConfigError(f"[{section.name}] give either 'm' or 'k_db', not both")
    if has_m:
        return FadingModel.nakagami(section.get_float("m"))
    if has_k:
        return FadingModel.rician(10.0 ** (section.get_float("k_db") / 10.0))
    return FadingModel.rayleigh()


def _snr_coeff_from(section: SectionView) -> float:
    if section.has("snr_coeff"):
        val = section.get_float("snr_coeff")
        if not val > 0.0:
            raise ConfigError(f"[{section.name}] snr_coeff must be > 0")
        return val
    needed = ("intercept_c", "distance_d", "alpha", "noise_power")
    if all(section.has(k) for k in needed):
        c, d, a, n = (section.get_float(k) for k in needed)
        return c * d ** (-a) / n
    raise ConfigError(
        f"[{section.name}] needs 'snr_coeff' or all of {', '.join(needed)}"
    )


def _sweep_values(section: SectionView) -> list[float]:
    explicit = section.get_float_list("values")
    if explicit is not None:
        values = explicit
    else:
        if not (section.has("start") and section.has("stop") and section.has("count")):
            raise ConfigError(
                f"[{section.name}] needs 'values' or the triple start/stop/count"
            )
        count = section.get_int("count")
        if count < 2:
            raise ConfigError(f"[{section.name}] count must be >= 2, got {count}")
        values = list(np.linspace(section.get_float("start"), section.get_float("stop"), count))
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(f"[{section.name}] values must be strictly increasing")
    return [float(v) for v in values]


def _outputs_from(section: SectionView) -> list[str]:
    raw = section.get_str("outputs", required=True)
    tags = [tok.strip() for tok in raw.replace(",", " ").split() if tok.strip()]
    if not tags:
        raise ConfigError(f"[{section.name}] outputs list is empty")
    for tag in tags:
        if tag not in OUTPUT_TAGS:
            raise ConfigError(
                f"[{section.name}] unknown output '{tag}'; known: {', '.join(OUTPUT_TAGS)}"
            )
    return tags


# =====================================================================
#  Point evaluation
# =====================================================================

def _unit_scale(units: str) -> float:
    return 1.0 / LN2 if units == "bits" else 1.0


def _grid_for_b(b: int) -> BeamGrid:
    root = math.isqrt(b)
    if root * root == b:
        return BeamGrid.from_counts(root, root)
    for m_t in range(root, 0, -1):
        if b % m_t == 0:
            return BeamGrid.from_counts(m_t, b // m_t)
    raise ConfigError(f"beam count {b} cannot be factored into a grid")


class PointSpec:
    """Fully resolved parameters of one sweep point."""

    def __init__(
        self,
        lambda0: float,
        b: int,
        fading: FadingModel,
        snr_coeff: float,
        rho_override: float | None = None,
    ):
        if not lambda0 > 0.0:
            raise ConfigError(f"lambda0 must be > 0, got {lambda0}")
        if b < 1:
            raise ConfigError(f"b must be >= 1, got {b}")
        self.lambda0 = lambda0
        self.b = b
        self.fading = fading
        # A direct rho request is honored by rescaling the link coefficient.
        self.snr_coeff = (
            rho_override * lambda0 / b if rho_override is not None else snr_coeff
        )

    @property
    def rho(self) -> float:
        return self.b * self.snr_coeff / self.lambda0

    @property
    def k(self) -> float:
        return self.snr_coeff / self.lambda0

    def sparse_model(self) -> SparseModel:
        return SparseModel.from_occupancy(
            self.lambda0, self.b, self.fading.effective_nakagami_m()
        )

    def sim_config(self, trials: int, seed: int, units: str) -> SimConfig:
        return SimConfig(
            link=LinkBudget.from_snr_coeff(self.snr_coeff, self.lambda0),
            grid=_grid_for_b(self.b),
            fading=self.fading,
            trials=trials,
            seed=seed,
            units=units,
        )


def _tp_config(section: SectionView, point: PointSpec, velocity: float | None) -> throughput.ThroughputConfig:
    t_f = section.get_float("t_f", required=True)
    n_b = section.get_int("n_b", 4)
    if velocity is None and section.has("velocity"):
        velocity = section.get_float("velocity")
    if section.has("t_total"):
        t_total = section.get_float("t_total")
    elif velocity is not None:
        carrier = section.get_float("carrier_freq", required=True)
        model_tag = section.get_str("tc_model", "clarke")
        t_total = throughput.coherence_time(velocity, carrier, model_tag)
    else:
        raise ConfigError(
            f"[{section.name}] needs 't_total' or 'velocity' (+ carrier_freq) for throughput outputs"
        )
    try:
        return throughput.ThroughputConfig(
            t_f=t_f, t_total=t_total, k=point.k, lambda0=point.lambda0, n_b=n_b
        )
    except ValueError as exc:
        raise ConfigError(f"[{section.name}] {exc}") from None


def _evaluate_scalars(
    tags: Sequence[str],
    point: PointSpec,
    section: SectionView,
    run: RunParams,
    seed: int,
    velocity: float | None,
) -> dict[str, Any]:
    scale = _unit_scale(run.units)
    row: dict[str, Any] = {}
    model = None
    for tag in tags:
        if tag == "tp":
            continue
        try:
            if tag == "sim_se":
                est = estimate_se(point.sim_config(run.trials, seed, run.units))
                row["sim_se"] = est.mean
                row["sim_ci95"] = est.ci95
            elif tag in ("upper_nakagami", "upper_rayleigh", "lower"):
                model = model or point.sparse_model()
                fn = {
                    "upper_nakagami": analytic.se_upper_nakagami,
                    "upper_rayleigh": analytic.se_upper_rayleigh,
                    "lower": analytic.se_lower,
                }[tag]
                row[tag] = fn(model, point.rho) * scale
            elif tag == "sparse":
                row["sparse"] = analytic.se_sparse_approx(point.lambda0, point.rho) * scale
            elif tag in ("b_star_numeric", "b_star_closed", "hpbw_star"):
                cfg = _tp_config(section, point, velocity)
                if tag == "b_star_numeric":
                    row[tag] = _maybe_infeasible(lambda: throughput.optimal_b_numeric(cfg))
                elif tag == "b_star_closed":
                    row[tag] = _maybe_infeasible(lambda: throughput.optimal_b_closed_form(cfg))
                else:
                    b_num = _maybe_infeasible(lambda: throughput.optimal_b_numeric(cfg))
                    b_cf = _maybe_infeasible(lambda: throughput.optimal_b_closed_form(cfg))
                    row["hpbw_star_numeric"] = (
                        throughput.optimal_hpbw(b_num) if b_num is not None else None
                    )
                    row["hpbw_star_closed"] = (
                        throughput.optimal_hpbw(b_cf) if b_cf is not None else None
                    )
        except (ConfigError, InfeasibleConfigError, NumericalError):
            raise
        except BeamsimError as exc:
            raise NumericalError(f"{tag}: {exc}") from exc
        except ValueError as exc:
            raise NumericalError(f"{tag}: {exc}") from exc
    return row


def _maybe_infeasible(fn):
    """Sweep points may be infeasible; report as empty cells, not failure."""
    try:
        return fn()
    except (InfeasibleConfigError, ApproximationInvalidError):
        return None


# =====================================================================
#  Output writing
# =====================================================================

def _fmt_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list[Any]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt_cell(v) for v in row])


def _version_string() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0 and out.stdout.strip():
            return f"beamsim-{__version__}+{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return f"beamsim-{__version__}"


class Manifest:
    def __init__(self, out_dir: Path):
        self.path = out_dir / "run_manifest.jsonl"
        self._fh = open(self.path, "a", encoding="utf-8")

    def record(self, **fields: Any) -> None:
        entry = {"version": _version_string(), **fields}
        self._fh.write(json.dumps(entry, sort_keys=True) + "\n")

    def close(self) -> None:
        self._fh.close()


# =====================================================================
#  Subcommands
# =====================================================================

def _cmd_point(kind: str, args: argparse.Namespace) -> int:
    sections = load_config(args.config)
    run = RunParams(sections, args)
    section = sections.get(kind)
    if section is None:
        raise ConfigError(f"config must contain a [{kind}] section for '{kind}'")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = Manifest(out_dir)
    t0 = time.monotonic()

    point = PointSpec(
        lambda0=section.get_float("lambda0", required=True),
        b=section.get_int("b", required=True) if kind != "throughput" else section.get_int("b", 1),
        fading=_fading_from(section),
        snr_coeff=_snr_coeff_from(section),
    )

    if kind == "simulate":
        est = estimate_se(point.sim_config(run.trials, run.seed, run.units))
        header = ["lambda0", "b", "m_eff", "sim_se", "sim_ci95", "trials", "units"]
        rows = [[
            point.lambda0, point.b, point.fading.effective_nakagami_m(),
            est.mean, est.ci95, est.trials, run.units,
        ]]
        csv_path = out_dir / "simulate.csv"
        print(f"SE = {est.mean!r} +- {est.ci95!r} ({run.units}, {est.trials} trials)")
    elif kind == "bounds":
        scale = _unit_scale(run.units)
        model = point.sparse_model()
        header = [
            "lambda0", "b", "m_eff", "rho",
            "upper_nakagami", "upper_rayleigh", "lower", "sparse", "units",
        ]
        rows = [[
            point.lambda0, point.b, model.m, point.rho,
            analytic.se_upper_nakagami(model, point.rho) * scale,
            analytic.se_upper_rayleigh(model, point.rho) * scale,
            analytic.se_lower(model, point.rho) * scale,
            analytic.se_sparse_approx(point.lambda0, point.rho) * scale,
            run.units,
        ]]
        csv_path = out_dir / "bounds.csv"
        print(f"bounds written for lambda0={point.lambda0}, B={point.b}, rho={point.rho!r}")
    else:  # throughput
        cfg = _tp_config(section, point, None)
        region = throughput.feasible_region(cfg)
        if region is None:
            raise InfeasibleConfigError(
                "no beam count achieves positive throughput "
                f"(F_t={cfg.f_t!r} with N_b={cfg.n_b})"
            )
        scale = _unit_scale(run.units)
        b_num = throughput.optimal_b_numeric(cfg)
        try:
            b_cf = throughput.optimal_b_closed_form(cfg)
        except BeamsimError:
            b_cf = None
        header = [
            "b_star_numeric", "b_star_closed", "hpbw_star_numeric", "hpbw_star_closed",
            "best_square_b", "b_max_feasible", "tp_at_optimum", "units",
        ]
        rows = [[
            b_num, b_cf,
            throughput.optimal_hpbw(b_num),
            throughput.optimal_hpbw(b_cf) if b_cf is not None else None,
            throughput.best_square_b(cfg),
            region[1],
            throughput.throughput_continuous(b_num, cfg) * scale,
            run.units,
        ]]
        csv_path = out_dir / "throughput.csv"
        b_values = section.get_float_list("b_values")
        if b_values:
            curve_rows = []
            for b in b_values:
                raw = throughput.throughput_continuous(float(b), cfg) * scale
                curve_rows.append([b, max(raw, 0.0), raw, run.units])
            _write_csv(out_dir / "throughput_curve.csv", ["b", "tp", "tp_raw", "units"], curve_rows)
            manifest.record(
                kind="throughput_curve", csv="throughput_curve.csv",
                seed=run.seed, trials=run.trials, units=run.units,
                config_resolved=section.resolved(run.defaults_dict()),
                wall_time_s=round(time.monotonic() - t0, 6),
            )
        print(
            f"B* numeric = {b_num!r} (hpbw {throughput.optimal_hpbw(b_num)!r} deg), "
            f"closed form = {b_cf!r}"
        )

    _write_csv(csv_path, header, rows)
    manifest.record(
        kind=kind, csv=csv_path.name, seed=run.seed, trials=run.trials,
        units=run.units, config_resolved=section.resolved(run.defaults_dict()),
        wall_time_s=round(time.monotonic() - t0, 6),
    )
    manifest.close()
    return 0


def _apply_sweep_variable(
    variable: str, value: float, section: SectionView
) -> tuple[PointSpec, float | None]:
    """Point parameters with the swept variable substituted in."""
    velocity = section.get_float("velocity") if section.has("velocity") else None
    lambda0 = section.get_float("lambda0", required=(variable != "lambda0"))
    b = section.get_int("b", required=(variable != "b")) if variable != "b" else None
    fading = _fading_from(section)
    snr_coeff = (
        _snr_coeff_from(section)
        if variable != "rho" or section.has("snr_coeff")
        else 1.0
    )
    rho_override = None
    if variable == "lambda0":
        lambda0 = value
    elif variable == "b":
        if abs(value - round(value)) > 1e-9 or value < 1:
            raise ConfigError(f"swept beam counts must be positive integers, got {value}")
        b = int(round(value))
    elif variable == "m":
        fading = FadingModel.nakagami(value)
    elif variable == "k_db":
        fading = FadingModel.rician(10.0 ** (value / 10.0))
    elif variable == "velocity":
        velocity = value
    elif variable == "rho":
        rho_override = value
    point = PointSpec(
        lambda0=lambda0, b=b, fading=fading, snr_coeff=snr_coeff, rho_override=rho_override
    )
    return point, velocity


def _scalar_columns(tags: Sequence[str]) -> list[str]:
    cols: list[str] = []
    for tag in tags:
        if tag == "tp":
            continue
        if tag == "sim_se":
            cols += ["sim_se", "sim_ci95"]
        elif tag == "hpbw_star":
            cols += ["hpbw_star_numeric", "hpbw_star_closed"]
        else:
            cols.append(tag)
    return cols


def _cmd_sweep(args: argparse.Namespace) -> int:
    sections = load_config(args.config)
    run = RunParams(sections, args)
    sweep_names = [name for name in sections if name.startswith("sweep:")]
    if not sweep_names:
        raise ConfigError("config contains no [sweep:NAME] sections")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = Manifest(out_dir)

    for name in sweep_names:
        section = sections[name]
        t0 = time.monotonic()
        variable = section.get_str("variable", required=True)
        if variable not in SWEEP_VARIABLES:
            raise ConfigError(
                f"[{name}] unknown sweep variable {variable!r}; known: {', '.join(SWEEP_VARIABLES)}"
            )
        values = _sweep_values(section)
        tags = _outputs_from(section)
        stem = name.split(":", 1)[1] or "sweep"

        scalar_cols = _scalar_columns(tags)
        rows = []
        tp_rows = []
        for idx, value in enumerate(values):
            point, velocity = _apply_sweep_variable(variable, value, section)
            seed_point = child_seed(run.seed, zlib.crc32(stem.encode()), idx)
            row_map = _evaluate_scalars(tags, point, section, run, seed_point, velocity)
            rows.append([value] + [row_map.get(c) for c in scalar_cols] + [run.units])
            if "tp" in tags:
                cfg = _tp_config(section, point, velocity)
                b_values = section.get_float_list("b_values")
                if not b_values:
                    raise ConfigError(f"[{name}] 'tp' output needs a 'b_values' list")
                scale = _unit_scale(run.units)
                for b in b_values:
                    raw = throughput.throughput_continuous(float(b), cfg) * scale
                    tp_rows.append([value, b, max(raw, 0.0), raw, run.units])

        csv_path = out_dir / f"{stem}.csv"
        _write_csv(csv_path, [variable] + scalar_cols + ["units"], rows)
        written = [csv_path.name]
        if tp_rows:
            tp_path = out_dir / f"{stem}_tp.csv"
            _write_csv(tp_path, [variable, "b", "tp", "tp_raw", "units"], tp_rows)
            written.append(tp_path.name)
        manifest.record(
            kind="sweep", name=stem, variable=variable, csv=written,
            seed=run.seed, trials=run.trials, units=run.units,
            config_resolved=section.resolved(run.defaults_dict()),
            wall_time_s=round(time.monotonic() - t0, 6),
        )
        print(f"sweep '{stem}': {len(values)} points -> {', '.join(written)}")
    manifest.close()
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else 0
    trials = args.trials if args.trials is not None else 20_000
    criteria = None
    if args.criteria:
        try:
            criteria = [int(tok) for tok in args.criteria.replace(",", " ").split()]
        except ValueError:
            raise ConfigError(f"--criteria expects integers, got {args.criteria!r}") from None
    results = validation.run_validation(seed=seed, trials=trials, criteria=criteria)
    sys.stdout.write(validation.render_report(results, seed, trials))
    failure = validation.first_failure(results)
    if failure is not None:
        print(f"first failing criterion: {failure.name}", file=sys.stderr)
        return 1
    return 0


# =====================================================================
#  Entry point
# =====================================================================

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beamsim",
        description="NLOS mmWave beamformed-link simulation and planning toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_shared(p: argparse.ArgumentParser, config_required: bool) -> None:
        if config_required:
            p.add_argument("--config", required=True, help="INI config file")
        p.add_argument("--seed", type=int, default=None, help="override [run] seed")
        p.add_argument("--trials", type=int, default=None, help="override [run] trials")
        p.add_argument("--out-dir", default=".", help="output directory")
        p.add_argument("--units", choices=("nats", "bits"), default=None,
                       help="override [run] units")

    for kind, desc in (
        ("simulate", "Monte Carlo spectral efficiency for one configuration"),
        ("bounds", "closed-form bound values for one configuration"),
        ("throughput", "optimal beam count and throughput for one configuration"),
    ):
        p = sub.add_parser(kind, help=desc)
        add_shared(p, config_required=True)

    p = sub.add_parser("sweep", help="run every [sweep:NAME] section of the config")
    add_shared(p, config_required=True)

    p = sub.add_parser("validate", help="run the built-in validation suite")
    add_shared(p, config_required=False)
    p.add_argument("--criteria", default=None,
                   help="comma-separated criterion numbers (default: all)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command in ("simulate", "bounds", "throughput"):
            return _cmd_point(args.command, args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_validate(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleConfigError as exc:
        print(f"infeasible configuration: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
