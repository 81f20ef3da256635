"""Parameter sweeps over physical scenarios, with CSV / JSON output."""

import csv
import dataclasses
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .baselines import jamming_rate, passive_rate
from .channel import (ConfigError, Scenario, ZFInfeasibleError, db2lin, free_space_gain,
                      lin2db, parse_config, project, scenario_from_mapping, synthesize)
from .solver import Mode, solve

__all__ = ["PRESETS", "INFEASIBLE_RHO", "SweepSpec", "SweepRow", "preset", "run_sweep",
           "emit_csv", "read_csv", "emit_json", "load_sweep_spec", "AXES", "ALIASES"]

PRESETS = ("fig3_alpha", "fig4_pe", "fig5_ps", "fig6_ps_far", "fig7_antennas")
#: short names accepted by :func:`preset`
ALIASES = {p.split("_")[0] if p != "fig6_ps_far" else "fig6": p for p in PRESETS}
#: rho_star reported for infeasible points
INFEASIBLE_RHO = -0.1

AXES = ("d_se_m", "d_sd_m", "freq_hz", "pe_over_ps_db", "gamma0_db", "n_bar",
        "m_rx", "n_tx", "ps_db", "pe_db", "gamma_gap_db")


@dataclass(frozen=True)
class SweepSpec:
    preset: str
    axis: str
    values: tuple
    base: Scenario
    seed: int | None = None

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ConfigError("sweep values must be nonempty")
        if not all(math.isfinite(v) for v in vals):
            raise ConfigError("sweep values must be finite")
        d = np.diff(vals)
        if d.size and not (np.all(d > 0) or np.all(d < 0)):
            raise ConfigError("sweep values must be strictly monotone")
        if self.axis not in AXES:
            raise ConfigError(f"unknown sweep axis {self.axis!r}; choose from {AXES}")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    alpha_db: float
    rate_spoof: float
    rate_passive: float
    rate_jamming: float
    mode: str
    rho_star: float
    gamma_D: float
    gamma_E: float
    jam_power_used: float
    error: str = ""


FIELDS = tuple(f.name for f in dataclasses.fields(SweepRow))


def _reference(d_sd=1000.0, frequency_hz=1.8e9):
    return free_space_gain(d_sd, frequency_hz) ** 2


def preset(name, d_se=None, points=None):
    """
    Sweep specification reproducing one of the numerical experiments.

    ``d_se`` overrides the monitor position where the experiment fixes it
    (400 m by default for ``fig4_pe`` and ``fig5_ps``, 2800 m for
    ``fig6_ps_far`` and ``fig7_antennas``); ``points`` overrides the number of
    axis samples.
    """
    name = ALIASES.get(name, name)
    if name == "fig3_alpha":
        base = Scenario.from_reference_snr(3000.0, 10.0, 0.0)
        values = np.geomspace(3000.0, 100.0, points or 200)
        return SweepSpec(name, "d_se_m", tuple(values), base)
    if name == "fig4_pe":
        base = Scenario.from_reference_snr(d_se or 400.0, 10.0, 0.0)
        values = np.linspace(-15.0, 10.0, points or 251)
        return SweepSpec(name, "pe_over_ps_db", tuple(values), base)
    if name in ("fig5_ps", "fig6_ps_far"):
        d = d_se or (400.0 if name == "fig5_ps" else 2800.0)
        base = Scenario.from_reference_snr(d, 10.0, 0.0)
        # P_E |h_SD|^2 / sigma^2 fixed at 10 dB
        base = dataclasses.replace(base, pe=10.0 / _reference())
        values = np.linspace(0.0, 20.0, points or 101)
        return SweepSpec(name, "gamma0_db", tuple(values), base)
    if name == "fig7_antennas":
        base = Scenario.from_reference_snr(d_se or 2800.0, 10.0, 0.0)
        return SweepSpec(name, "n_bar", tuple(float(n) for n in range(2, 11)), base)
    raise ConfigError(f"unknown preset {name!r}; choose from {PRESETS}")


def _apply(base, axis, v):
    r = dataclasses.replace
    if axis == "d_se_m":
        return r(base, d_se=v)
    if axis == "d_sd_m":
        return r(base, d_sd=v)
    if axis == "freq_hz":
        return r(base, frequency_hz=v)
    if axis == "pe_over_ps_db":
        return r(base, pe=base.ps * float(db2lin(v)))
    if axis == "gamma0_db":
        return r(base, ps=float(db2lin(v)) / free_space_gain(base.d_sd, base.frequency_hz) ** 2)
    if axis == "n_bar":
        return r(base, m_rx=int(v), n_tx=int(v))
    if axis == "m_rx":
        return r(base, m_rx=int(v))
    if axis == "n_tx":
        return r(base, n_tx=int(v))
    if axis == "ps_db":
        return r(base, ps=float(db2lin(v)))
    if axis == "pe_db":
        return r(base, pe=float(db2lin(v)))
    if axis == "gamma_gap_db":
        return r(base, gamma_gap=float(db2lin(v)))
    raise ConfigError(f"unknown sweep axis {axis!r}")


def _point(args):
    base, axis, v, seed = args
    try:
        sc = _apply(base, axis, v)
    except (ConfigError, ValueError) as exc:
        return SweepRow(v, math.nan, 0.0, 0.0, 0.0, Mode.INFEASIBLE.value, INFEASIBLE_RHO,
                        math.nan, math.nan, 0.0, f"config: {exc}")
    cs = synthesize(sc, seed)
    alpha_db = float(lin2db(cs.alpha))
    passive = passive_rate(cs).rate_bps_hz
    try:
        pc = project(cs)
    except ZFInfeasibleError as exc:
        return SweepRow(v, alpha_db, 0.0, passive, 0.0, Mode.INFEASIBLE.value, INFEASIBLE_RHO,
                        math.nan, math.nan, 0.0, f"zf: {exc}")
    sol = solve(cs, pc)
    jam = jamming_rate(cs, pc)
    rho = float(sol.rho_star.rho[0]) if sol.feasible else INFEASIBLE_RHO
    return SweepRow(v, alpha_db, sol.rate_bps_hz, passive, jam.rate_bps_hz, sol.mode.value,
                    rho, sol.gamma_D, sol.gamma_E, sol.jam_power_used)


def run_sweep(spec, workers=None):
    """
    Solve every point of a sweep; one :class:`SweepRow` per axis value.

    Errors at individual points (invalid geometry, no ZF precoder) end up in
    the row's ``error`` column and the sweep carries on. With ``workers > 1``
    points are farmed out to a process pool; row order is always axis order.
    """
    jobs = [(spec.base, spec.axis, v, spec.seed) for v in spec.values]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_point, jobs, chunksize=8))
    return [_point(j) for j in jobs]


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def emit_csv(rows, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FIELDS)
        for row in rows:
            w.writerow([_fmt(getattr(row, f)) for f in FIELDS])


def read_csv(path):
    """Parse a file written by :func:`emit_csv` back into rows."""
    types = {f.name: f.type for f in dataclasses.fields(SweepRow)}
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        for rec in csv.DictReader(fh):
            out.append(SweepRow(**{k: (float(v) if types[k] in (float, "float") else v)
                                   for k, v in rec.items()}))
    return out


def emit_json(rows, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([dataclasses.asdict(r) for r in rows], fh, indent=1)
        fh.write("\n")


def load_sweep_spec(path):
    """
    Custom sweep from a config file: the scenario keys plus ``axis`` and
    ``values`` (comma separated).
    """
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if "axis" not in cfg or "values" not in cfg:
        raise ConfigError("custom sweep needs 'axis' and 'values'")
    axis = cfg["axis"]
    try:
        values = tuple(float(x) for x in cfg["values"].replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"bad sweep values: {exc}") from exc
    base, seed = scenario_from_mapping(cfg, extra_keys=("axis", "values"))
    return SweepSpec("custom", axis, values, base, seed)
