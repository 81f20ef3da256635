"""
Brute-force checks for the closed-form solver.

Nothing in here calls the closed-form SNR extrema: the interval ends are
found by grid search or random sampling, and the SNR at D is recomputed from
the lifted ``N x M`` precoder and the unprojected ``h_ED``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .baselines import jamming_rate, passive_rate
from .channel import ChannelSet, project
from .solver import (bps_construct, lemma2_fast_path, max_snr_d, min_snr_d, relay_power,
                     snr_d, snr_e, solve, ups_gamma_d_max, ups_gamma_d_min, ups_gamma_e)

__all__ = ["GRID_1D", "GRID_2D", "snr_d_direct", "grid_max_mu", "grid_min_z",
           "random_w_sandwich", "ScanResult", "rho_scan", "random_instance",
           "CheckResult", "VerifyReport", "run_verification"]

GRID_1D = 10_000
GRID_2D = 1_000


def _split_norm2(rho, cs):
    rho = np.broadcast_to(np.asarray(rho, dtype=float), (cs.m,))
    return float(np.sum(rho * np.abs(cs.h_se) ** 2))


def snr_d_direct(rho, W_hat, cs):
    """SNR at D from the full ``N x M`` precoder and the raw ``h_ED``."""
    rho = np.broadcast_to(np.asarray(rho, dtype=float), (cs.m,))
    eff = cs.h_sd
    noise = 1.0
    for n in range(W_hat.shape[0]):
        for m in range(W_hat.shape[1]):
            s = math.sqrt(rho[m]) * cs.h_se[m] if m < cs.m else 0.0
            eff += np.conj(cs.h_ed[n]) * W_hat[n, m] * s
    for m in range(W_hat.shape[1]):
        col = sum(np.conj(cs.h_ed[n]) * W_hat[n, m] for n in range(W_hat.shape[0]))
        noise += abs(col) ** 2
    return abs(eff) ** 2 * cs.ps / noise


def grid_max_mu(rho, cs, pc, grid_n=GRID_1D):
    """
    Maximize the single-parameter SNR objective over ``mu`` by grid search.

    The grid is uniform in ``sqrt(mu)`` (the amplitude of the rank-1
    precoder) on ``[0, sqrt(mu_max)]``, endpoints included; this keeps an
    interior optimum resolved even when it sits far below ``mu_max``.
    """
    if grid_n < 10:
        raise ValueError("grid_n too small")
    a = _split_norm2(rho, cs)
    e = float(np.sum(np.abs(pc.h_ed_hat) ** 2))
    cap = cs.pe / (cs.ps * a + 1.0)
    mu = np.linspace(0.0, math.sqrt(cap), grid_n + 1) ** 2
    vals = (abs(cs.h_sd) + np.sqrt(mu * e * a)) ** 2 * cs.ps / (1.0 + mu * e)
    return float(vals.max())


def grid_min_z(rho, cs, pc, grid_n=GRID_2D):
    """
    Minimize the two-weight (z1, z2) SNR objective over its power simplex.

    The grid is uniform in ``sqrt(z1)`` on ``[0, sqrt(z1_max)]`` and, for each
    ``z1``, uniform in the fraction of the leftover power given to ``z2``;
    both ends of each axis are included.
    """
    if grid_n < 10:
        raise ValueError("grid_n too small")
    a = _split_norm2(rho, cs)
    e = float(np.sum(np.abs(pc.h_ed_hat) ** 2))
    c = abs(cs.h_sd)
    z1max = cs.pe / (1.0 + cs.ps * a)
    x = np.linspace(0.0, math.sqrt(z1max), grid_n + 1)
    z1 = x * x
    frac = np.linspace(0.0, 1.0, grid_n + 1)
    best = math.inf
    for lo in range(0, z1.size, 256):
        z1b = z1[lo:lo + 256, None]
        room = np.maximum(cs.pe - (1.0 + cs.ps * a) * z1b, 0.0)
        z2 = frac[None, :] * room
        vals = (c - np.sqrt(z1b * e * a)) ** 2 * cs.ps / (1.0 + e * (z1b + z2))
        best = min(best, float(vals.min()))
    return best


def random_w_sandwich(rho, cs, pc, trials=1000, seed=0):
    """
    Range of the SNR at D over random power-feasible precoders.

    The first sample is ``W = 0``; the others are full ``r0 x M`` complex
    Gaussian matrices rescaled to a uniformly drawn fraction of E's power
    budget. SNRs are evaluated on the lifted precoders against the raw
    ``h_ED``.
    """
    rng = np.random.default_rng(seed)
    rho = np.broadcast_to(np.asarray(rho, dtype=float), (cs.m,))
    s = np.sqrt(rho) * cs.h_se
    W = _crandn(rng, trials, pc.r0, cs.m)
    W[0] = 0.0
    Ws = W @ s
    power = cs.ps * np.sum(np.abs(Ws) ** 2, axis=1) + np.sum(np.abs(W) ** 2, axis=(1, 2))
    frac = rng.random(trials)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.where(power > 0, np.sqrt(frac * cs.pe / power), 0.0)
    W_hat = np.einsum("nr,trm->tnm", pc.V0, W * k[:, None, None])
    g = np.einsum("n,tnm->tm", cs.h_ed.conj(), W_hat)
    sig = np.abs(cs.h_sd + g @ s) ** 2 * cs.ps
    snr = sig / (1.0 + np.sum(np.abs(g) ** 2, axis=1))
    return float(snr.min()), float(snr.max())


@dataclass(frozen=True)
class ScanResult:
    feasible: bool
    rho: float
    gamma_d: float


def _interval_ends(a, c2, e, ps, pe):
    # SNR range at D as a function of the split power a (vectorized); the
    # max uses the best mu on [0, cap], the min the best (z1, z2) pair.
    G0, J = ps * c2, pe * e
    A = ps * a
    cap = pe / (A + 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        mu_free = np.where(a > 0, a / (c2 * e), 0.0) if e > 0 else np.zeros_like(a)
    mu = np.minimum(mu_free, cap)
    gmax = (math.sqrt(c2) + np.sqrt(mu * e * a)) ** 2 * ps / (1.0 + mu * e)
    # min: zero if exact cancellation fits, else best over the active power line
    if e == 0:
        return gmax, np.full_like(a, G0)
    with np.errstate(divide="ignore", invalid="ignore"):
        z_cancel = np.where(a > 0, c2 / (e * a), np.inf)
    zero_ok = z_cancel <= cap
    # on the active line z2 = pe - (1 + A) z1: scan sqrt(z1), then zoom in
    # three times around the best cell
    def line(x):
        z1 = x * x
        return (math.sqrt(c2) - np.sqrt(z1 * e * a[:, None])) ** 2 * ps / (
            1.0 + e * (z1 + pe - (1.0 + A[:, None]) * z1))

    lo = np.zeros_like(a)
    hi = np.sqrt(cap)
    t = np.linspace(0.0, 1.0, 129)[None, :]
    best = np.full_like(a, np.inf)
    for _ in range(4):
        x = lo[:, None] + t * (hi - lo)[:, None]
        vals = line(x)
        i = np.argmin(vals, axis=1)
        best = np.minimum(best, vals[np.arange(a.size), i])
        step = (hi - lo) / 128
        lo, hi = np.maximum(x[np.arange(a.size), i] - step, 0.0), np.minimum(
            x[np.arange(a.size), i] + step, np.sqrt(cap))
    gmin = np.where(zero_ok, 0.0, best)
    return gmax, gmin


def rho_scan(cs, pc, grid_n=GRID_1D, lo=0.0, hi=1.0):
    """
    Dense-grid solution of the single-ratio problem.

    For each uniform ratio on the grid the reachable SNR interval at D is
    compared with E's SNR; the best feasible SNR at D wins. ``lo`` and
    ``hi`` restrict the scan to a sub-interval of ``[0, 1]`` for local
    refinement.
    """
    if not 0.0 <= lo < hi <= 1.0:
        raise ValueError("need 0 <= lo < hi <= 1")
    rho = np.linspace(lo, hi, grid_n + 1)
    a = rho * cs.hse2
    e = float(np.sum(np.abs(pc.h_ed_hat) ** 2))
    gmax, gmin = _interval_ends(a, cs.hsd2, e, cs.ps, cs.pe)
    ge = (1.0 - rho) * cs.hse2 * cs.ps
    ok = gmin <= ge
    if not np.any(ok):
        return ScanResult(False, math.nan, 0.0)
    best = np.where(ok, np.minimum(gmax, ge), -np.inf)
    i = int(np.argmax(best))
    return ScanResult(True, float(rho[i]), float(best[i]))


# --------------------------------------------------------------------------
# random instances

def _crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def random_instance(seed, case=None):
    """
    Seeded random problem instance.

    ``case`` (1, 2 or 3) picks the regime by drawing the channel power ratio
    ``alpha`` relative to ``1`` and ``1 / (1 + J)``; ``None`` picks
    ``seed % 3 + 1``. Antenna counts, loop-channel rank and powers are random.
    """
    rng = np.random.default_rng(seed)
    if case is None:
        case = seed % 3 + 1
    m = int(rng.integers(1, 4))
    n = int(rng.integers(2, 5))
    rank = int(rng.integers(0, min(m, n - 1) + 1))
    H = _crandn(rng, m, rank) @ _crandn(rng, rank, n) if rank else np.zeros((m, n), complex)
    h_sd = complex(_crandn(rng, 1)[0])
    h_se = _crandn(rng, m)
    h_ed = _crandn(rng, n)
    cs0 = ChannelSet(h_sd, h_se, h_ed, H, 1.0, 1.0)
    e = project(cs0).hed_hat2
    G0 = 10 ** rng.uniform(0.0, 2.0)
    J = 10 ** rng.uniform(-1.0, 2.5)
    if case == 1:
        alpha = 10 ** rng.uniform(0.01, 1.5)
    elif case == 2:
        alpha = 10 ** rng.uniform(-math.log10(1 + J) + 1e-3, -1e-3)
    else:
        alpha = 10 ** (-math.log10(1 + J) - rng.uniform(0.001, 0.3))
    c2 = abs(h_sd) ** 2
    h_se = h_se * math.sqrt(alpha * c2 / float(np.vdot(h_se, h_se).real))
    ps = G0 / c2
    pe = J / e
    return ChannelSet(h_sd, h_se, h_ed, H, ps, pe)


# --------------------------------------------------------------------------
# verification report

@dataclass
class CheckResult:
    name: str
    worst: float
    tol: float
    count: int = 0
    failures: int = 0

    @property
    def passed(self):
        return self.failures == 0

    def update(self, dev, tol):
        self.count += 1
        self.worst = max(self.worst, dev / tol if tol > 0 else dev)
        if not dev <= tol:
            self.failures += 1


@dataclass
class VerifyReport:
    seed: int
    instances: int
    checks: dict = field(default_factory=dict)

    def check(self, name):
        if name not in self.checks:
            self.checks[name] = CheckResult(name, 0.0, 1.0)
        return self.checks[name]

    @property
    def passed(self):
        return all(c.passed for c in self.checks.values())

    def lines(self):
        out = [f"verification seed={self.seed} instances={self.instances}"]
        for c in self.checks.values():
            status = "PASS" if c.passed else "FAIL"
            out.append(f"{status} {c.name}: {c.count} checks, {c.failures} failures, "
                       f"worst deviation/tolerance = {c.worst:.3e}")
        out.append("OVERALL " + ("PASS" if self.passed else "FAIL"))
        return out


def _phase_err(z, target):
    return abs(np.angle(z * np.exp(-1j * target)))


def run_verification(instances=200, seed=0, grid_1d=GRID_1D, grid_2d=GRID_2D,
                     sandwich_trials=1000, invariants=True):
    """
    Check every closed form against the brute-force routes above.

    Instances rotate through the three regimes. Deviations are reported as
    ratios to their tolerances, so a worst value above 1 means failure.
    """
    rep = VerifyReport(seed, instances)
    rng = np.random.default_rng(seed)
    for k in range(instances):
        cs = random_instance(seed * 100_003 + k)
        pc = project(cs)
        rho = rng.random(cs.m)
        scale = max(cs.gamma0, 1e-300)

        g1, W1, _ = max_snr_d(rho, cs, pc)
        g2, W2, aux = min_snr_d(rho, cs, pc)
        tol = max(1e-6, 5.0 / grid_1d * max(g1, scale))
        rep.check("max_snr_d vs grid_max_mu").update(abs(g1 - grid_max_mu(rho, cs, pc, grid_1d)), tol)
        tol = max(1e-6, 5.0 / grid_2d * max(g2, scale))
        rep.check("min_snr_d vs grid_min_z").update(abs(g2 - grid_min_z(rho, cs, pc, grid_2d)), tol)

        sol = solve(cs, pc)
        scan = rho_scan(cs, pc, grid_1d)
        chk = rep.check("solve rho* vs rho_scan")
        if sol.feasible and scan.feasible:
            chk.update(abs(sol.rho_star.rho[0] - scan.rho), 2.0 / grid_1d)
        else:
            chk.update(0.0 if sol.feasible == scan.feasible else math.inf, 1.0)

        if not invariants:
            continue
        _check_invariants(rep, cs, pc, rho, (g1, W1), (g2, W2, aux), sol,
                          sandwich_trials, seed * 7919 + k)
    return rep


def _check_invariants(rep, cs, pc, rho, mx, mn, sol, trials, seed):
    g1, W1 = mx
    g2, W2, aux = mn
    rel = lambda x, y: abs(x - y) / max(abs(y), 1.0)  # noqa: E731

    # achievability through the lifted precoder and the raw channel
    c = rep.check("achievability (closed form == recomputed SNR)")
    c.update(rel(snr_d_direct(rho, pc.V0 @ W1, cs), g1), 1e-9)
    c.update(rel(snr_d_direct(rho, pc.V0 @ W2, cs), g2), 1e-9)
    c = rep.check("power constraint")
    c.update(max(relay_power(rho, W1, cs) - cs.pe, 0.0) / max(cs.pe, 1.0), 1e-9)
    c.update(max(relay_power(rho, W2, cs) - cs.pe, 0.0) / max(cs.pe, 1.0), 1e-9)

    # UPS invariance: same split power -> same SNR triple
    r_ups = float(np.dot(rho, np.abs(cs.h_se) ** 2) / cs.hse2)
    c = rep.check("UPS invariance")
    c.update(rel(snr_e(r_ups, cs), snr_e(rho, cs)), 1e-12)
    c.update(rel(max_snr_d(r_ups, cs, pc)[0], g1), 1e-12)
    c.update(rel(min_snr_d(r_ups, cs, pc)[0], g2), 1e-12)
    c.update(rel(ups_gamma_d_max(r_ups, cs, pc), g1), 1e-9)
    c.update(rel(ups_gamma_d_min(r_ups, cs, pc), g2), 1e-9)

    # single-splitter construction
    bps = bps_construct(r_ups, cs)
    c = rep.check("BPS equivalence")
    c.update(rel(snr_e(bps, cs), ups_gamma_e(r_ups, cs)), 1e-12)
    c.update(rel(max_snr_d(bps, cs, pc)[0], max_snr_d(r_ups, cs, pc)[0]), 1e-12)
    c.update(rel(min_snr_d(bps, cs, pc)[0], min_snr_d(r_ups, cs, pc)[0]), 1e-12)
    c.update(float(np.count_nonzero((bps.rho > 0) & (bps.rho < 1)) > 1), 0.5)

    # sandwich
    lo, hi = random_w_sandwich(rho, cs, pc, trials, seed)
    c = rep.check("sandwich")
    c.update(max(g2 - lo, 0.0) / max(g2, 1.0), 1e-9)
    c.update(max(hi - g1, 0.0) / max(g1, 1.0), 1e-9)

    # phase alignment and rank one
    hse_hat = np.sqrt(rho) * cs.h_se
    c = rep.check("phase alignment")
    ang = np.angle(cs.h_sd) if cs.h_sd != 0 else 0.0
    if np.linalg.norm(W1) > 0:
        c.update(_phase_err(pc.h_ed_hat.conj() @ W1 @ hse_hat, ang), 1e-9)
    if aux.z1 > 0 and np.linalg.norm(hse_hat) > 0 and pc.hed_hat2 > 0:
        h = hse_hat if W2.shape[1] == cs.m else np.append(hse_hat, 0.0)
        c.update(_phase_err(pc.h_ed_hat.conj() @ W2 @ h, ang + math.pi), 1e-9)
    c = rep.check("rank one")
    for W in (W1, W2):
        s = np.linalg.svd(W, compute_uv=False)
        if s.size > 1 and s[0] > 0:
            c.update(s[1] / s[0], 1e-10)

    # decodability and dominance
    c = rep.check("decodability")
    if sol.feasible:
        c.update(max(sol.gamma_D - sol.gamma_E, 0.0), 1e-9)
        c.update(rel(snr_d_direct(sol.rho_star.rho, sol.W_hat_star, cs), sol.gamma_D)
                 if sol.W_hat_star.shape[1] == cs.m else
                 rel(snr_d(sol.rho_star, sol.W_star, cs, pc), sol.gamma_D), 1e-9)
    else:
        c.update(float(sol.rate_bps_hz != 0.0), 0.5)
    c = rep.check("dominance over baselines")
    base = max(passive_rate(cs).rate_bps_hz, jamming_rate(cs, pc).rate_bps_hz)
    c.update(max(base - sol.rate_bps_hz, 0.0), 1e-9)

    lm = lemma2_fast_path(cs, pc)
    if lm is not None:
        rep.check("fast path agreement").update(abs(lm[0] - sol.rho_star.rho[0]), 1e-9)
