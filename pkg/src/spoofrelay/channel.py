"""Line-of-sight channel synthesis and the zero-forcing null-space reduction.

Geometry: S, E and D lie on one line with ``d_SD`` fixed and ``d_SE``
variable, so ``d_ED = |d_SD - d_SE|``. Every link is a free-space LoS path
with carrier phase ``exp(-j 2 pi d / lambda)``; E's arrays are half-wavelength
ULAs. The loop channel ``H_EE`` is the rank-1 outer product of a receive and a
transmit steering vector taken at ``loop_angle_rad``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import null_space_basis

__all__ = ["SPEED_OF_LIGHT", "Scenario", "ChannelSet", "ProjectedChannels",
           "ConfigError", "ZFInfeasibleError", "ula_steering", "free_space_gain",
           "synthesize", "project", "lift_precoder", "parse_config",
           "load_scenario", "db2lin", "lin2db"]

SPEED_OF_LIGHT = 299792458.0

CONFIG_KEYS = ("d_sd_m", "d_se_m", "freq_hz", "m_rx", "n_tx",
               "ps_db", "pe_db", "gamma_gap_db")
OPTIONAL_KEYS = ("seed",)


class ConfigError(ValueError):
    """Malformed or invalid scenario configuration."""


class ZFInfeasibleError(ValueError):
    """The loop channel has full column rank, so no ZF precoder exists."""


def db2lin(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


def lin2db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class Scenario:
    """
    Physical geometry and radio parameters of one problem instance.

    Powers are linear and normalized by the noise power: ``ps`` is the
    transmit SNR of S and ``pe`` the power budget of E.
    """
    d_sd: float
    d_se: float
    frequency_hz: float = 1.8e9
    m_rx: int = 1
    n_tx: int = 2
    ps: float = 1.0
    pe: float = 1.0
    gamma_gap: float = 1.0
    # angle of the S-D line off the broadside of E's transmit array
    link_angle_rad: float = 0.0
    # rotation of E's receive array relative to its transmit array
    array_offset_rad: float = 0.0
    # direction of the Tx->Rx coupling path seen by both of E's arrays
    loop_angle_rad: float = math.pi / 2
    # None -> free-space gain over 0.5 m
    loop_gain: float | None = None

    def __post_init__(self):
        if not (self.d_sd > 0 and self.d_se > 0):
            raise ConfigError("distances must be positive")
        if self.d_se == self.d_sd:
            raise ConfigError("d_se == d_sd puts E on top of D (d_ED = 0)")
        if self.frequency_hz <= 0:
            raise ConfigError("frequency must be positive")
        if int(self.m_rx) != self.m_rx or self.m_rx < 1:
            raise ConfigError("m_rx must be a positive integer")
        if int(self.n_tx) != self.n_tx or self.n_tx < 1:
            raise ConfigError("n_tx must be a positive integer")
        if not self.ps > 0:
            raise ConfigError("ps must be positive")
        if not self.pe >= 0:
            raise ConfigError("pe must be nonnegative")
        if not self.gamma_gap >= 1:
            raise ConfigError("gamma_gap must be >= 1")

    @property
    def d_ed(self):
        return abs(self.d_sd - self.d_se)

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.frequency_hz

    @classmethod
    def from_reference_snr(cls, d_se, gamma0_db, pe_over_ps_db=0.0, *,
                           d_sd=1000.0, frequency_hz=1.8e9, **kw):
        """Build a scenario from ``gamma0 = ps |h_SD|^2`` and ``P_E / P_S`` in dB."""
        g = free_space_gain(d_sd, frequency_hz)
        ps = float(db2lin(gamma0_db)) / g**2
        pe = ps * float(db2lin(pe_over_ps_db))
        return cls(d_sd=d_sd, d_se=d_se, frequency_hz=frequency_hz, ps=ps, pe=pe, **kw)


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """All channels of one instance plus the normalized powers."""
    h_sd: complex
    h_se: np.ndarray
    h_ed: np.ndarray
    H_ee: np.ndarray
    ps: float
    pe: float
    gamma_gap: float = 1.0

    def __post_init__(self):
        h_se = np.atleast_1d(np.asarray(self.h_se, dtype=complex)).ravel()
        h_ed = np.atleast_1d(np.asarray(self.h_ed, dtype=complex)).ravel()
        H_ee = np.atleast_2d(np.asarray(self.H_ee, dtype=complex))
        if H_ee.shape != (h_se.size, h_ed.size):
            raise ValueError(f"H_ee has shape {H_ee.shape}, expected "
                             f"({h_se.size}, {h_ed.size})")
        for arr in (h_se, h_ed, H_ee):
            arr.flags.writeable = False
        object.__setattr__(self, "h_sd", complex(self.h_sd))
        object.__setattr__(self, "h_se", h_se)
        object.__setattr__(self, "h_ed", h_ed)
        object.__setattr__(self, "H_ee", H_ee)
        if not (np.all(np.isfinite(h_se)) and np.all(np.isfinite(h_ed))
                and np.all(np.isfinite(H_ee)) and np.isfinite(self.h_sd)):
            raise ValueError("channels must be finite")
        if self.ps <= 0 or self.pe < 0 or self.gamma_gap < 1:
            raise ValueError("invalid power / gap values")

    @property
    def m(self):
        return self.h_se.size

    @property
    def n(self):
        return self.h_ed.size

    @property
    def hsd2(self):
        return abs(self.h_sd) ** 2

    @property
    def hse2(self):
        return float(np.vdot(self.h_se, self.h_se).real)

    @property
    def alpha(self):
        """Channel power ratio ``||h_SE||^2 / |h_SD|^2``."""
        return self.hse2 / self.hsd2 if self.hsd2 > 0 else math.inf

    @property
    def gamma0(self):
        """SNR at D without E's intervention."""
        return self.ps * self.hsd2

    def equals(self, other):
        """Bitwise equality of all fields."""
        return (self.h_sd == other.h_sd and self.ps == other.ps
                and self.pe == other.pe and self.gamma_gap == other.gamma_gap
                and np.array_equal(self.h_se, other.h_se)
                and np.array_equal(self.h_ed, other.h_ed)
                and np.array_equal(self.H_ee, other.H_ee))


@dataclass(frozen=True, eq=False)
class ProjectedChannels:
    V0: np.ndarray
    h_ed_hat: np.ndarray
    r0: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "r0", int(self.V0.shape[1]))

    @property
    def hed_hat2(self):
        return float(np.vdot(self.h_ed_hat, self.h_ed_hat).real)


def ula_steering(angle_rad, n):
    """Half-wavelength ULA response ``exp(j pi k sin(angle))``, k = 0..n-1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = np.arange(n)
    return np.exp(1j * np.pi * k * np.sin(angle_rad))


def free_space_gain(d, frequency_hz):
    """Free-space amplitude gain ``lambda / (4 pi d)``."""
    if not d > 0:
        raise ValueError("distance must be positive")
    lam = SPEED_OF_LIGHT / frequency_hz
    return lam / (4.0 * math.pi * d)


def _los(d, lam):
    return lam / (4.0 * math.pi * d) * np.exp(-2j * math.pi * d / lam)


def synthesize(scenario, seed=None):
    """
    Build the :class:`ChannelSet` of a scenario.

    With ``seed=None`` the channels are fully determined by the geometry.
    An integer seed additionally rotates each of the three S/E/D links by an
    independent uniform random phase, which leaves every norm unchanged.
    """
    sc = scenario
    lam = sc.wavelength
    theta_s_tx = sc.link_angle_rad
    # between S and D, D is seen in the opposite direction to S
    theta_d = theta_s_tx + math.pi if sc.d_se < sc.d_sd else theta_s_tx
    theta_s_rx = theta_s_tx + sc.array_offset_rad

    h_sd = _los(sc.d_sd, lam)
    h_se = _los(sc.d_se, lam) * ula_steering(theta_s_rx, sc.m_rx)
    h_ed = _los(sc.d_ed, lam) * ula_steering(theta_d, sc.n_tx)

    loop_gain = sc.loop_gain
    if loop_gain is None:
        loop_gain = free_space_gain(0.5, sc.frequency_hz)
    a_rx = ula_steering(sc.loop_angle_rad + sc.array_offset_rad, sc.m_rx)
    a_tx = ula_steering(sc.loop_angle_rad, sc.n_tx)
    H_ee = loop_gain * np.outer(a_rx, a_tx.conj())

    if seed is not None:
        phases = np.exp(2j * math.pi * np.random.default_rng(seed).random(3))
        h_sd *= phases[0]
        h_se = h_se * phases[1]
        h_ed = h_ed * phases[2]

    return ChannelSet(h_sd=complex(h_sd), h_se=h_se, h_ed=h_ed, H_ee=H_ee,
                      ps=sc.ps, pe=sc.pe, gamma_gap=sc.gamma_gap)


def project(cs):
    """Restrict the precoder to the loop channel's null space."""
    V0 = null_space_basis(cs.H_ee)
    if V0.shape[1] == 0:
        raise ZFInfeasibleError(
            f"rank(H_EE) = N = {cs.n}: no transmit direction nulls the loop channel")
    h_ed_hat = V0.conj().T @ cs.h_ed
    return ProjectedChannels(V0=V0, h_ed_hat=h_ed_hat)


def lift_precoder(pc, W):
    """Map a reduced precoder ``W`` (r0 x M) to ``V0 W`` (N x M)."""
    W = np.atleast_2d(np.asarray(W, dtype=complex))
    if W.shape[0] != pc.r0:
        raise ValueError(f"W has {W.shape[0]} rows, expected r0 = {pc.r0}")
    return pc.V0 @ W


def parse_config(text):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, val = line.split("=", 1)
        elif ":" in line:
            key, val = line.split(":", 1)
        else:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key = key.strip()
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = val.strip()
    return out


def scenario_from_mapping(cfg, extra_keys=()):
    """Build a Scenario from a parsed config; returns ``(scenario, seed)``."""
    allowed = set(CONFIG_KEYS) | set(OPTIONAL_KEYS) | set(extra_keys)
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    required = set(CONFIG_KEYS) - {"gamma_gap_db"}
    missing = required - set(cfg)
    if missing:
        raise ConfigError(f"missing config keys: {sorted(missing)}")
    try:
        sc = Scenario(
            d_sd=float(cfg["d_sd_m"]),
            d_se=float(cfg["d_se_m"]),
            frequency_hz=float(cfg["freq_hz"]),
            m_rx=int(cfg["m_rx"]),
            n_tx=int(cfg["n_tx"]),
            ps=float(db2lin(float(cfg["ps_db"]))),
            pe=float(db2lin(float(cfg["pe_db"]))),
            gamma_gap=float(db2lin(float(cfg.get("gamma_gap_db", 0.0)))),
        )
        seed = int(cfg["seed"]) if "seed" in cfg else None
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    return sc, seed


def load_scenario(path):
    """Read a scenario config file; returns ``(scenario, seed)``."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return scenario_from_mapping(parse_config(text))
