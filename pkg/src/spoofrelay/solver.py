"""
Joint power-splitting / relay-precoder optimization for a spoofing relay.

Notation used throughout (all dimensionless, noise-normalized):

``G0``  ``ps |h_SD|^2``, the SNR at D with E silent
``A``   ``ps ||h_SE||^2``, E's decoding SNR with no power split off
``J``   ``pe ||h_ED_hat||^2``, the largest noise-amplification gain at D

For a fixed splitting vector ``rho`` the set of SNRs reachable at D is an
interval ``[gamma_d_min(rho), gamma_d_max(rho)]`` with closed-form ends; both
depend on ``rho`` only through ``sum(rho_m |h_SE,m|^2)``. The outer problem
then reduces to a single uniform ratio, solved per regime:

* E stronger than D: constructive relaying, bisection on the crossing of
  ``gamma_d_max`` with E's decreasing SNR line;
* E weaker, but full-power jamming closes the gap: jam only, ``rho = 0``;
* otherwise: destructive relaying plus jamming, smallest crossing of
  ``gamma_d_min`` with the SNR line (a quartic), or infeasible.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import ZFInfeasibleError
from .numerics import bisect_root, null_space_basis, poly_roots_real_in_unit

__all__ = ["Mode", "SplitVector", "MinSnrAux", "Breakpoints", "SpoofSolution",
           "snr_e", "snr_d", "relay_power", "max_snr_d", "min_snr_d",
           "ups_gamma_e", "ups_gamma_d_max", "ups_gamma_d_min", "breakpoints",
           "solve", "lemma2_fast_path", "bps_construct", "rate_of",
           "CASE_RTOL"]

#: relative tolerance for the regime classification at rho = 0
CASE_RTOL = 1e-12
# relative residual accepted when verifying a Case-3 crossing candidate
_ROOT_RTOL = 1e-7


class Mode(str, enum.Enum):
    CONSTRUCTIVE = "ConstructiveRelay"
    JAMMING = "JammingOnly"
    JAMMING_DESTRUCTIVE = "JammingPlusDestructive"
    INFEASIBLE = "Infeasible"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class SplitVector:
    """Per-antenna power-splitting ratios, each in ``[0, 1]``."""
    rho: np.ndarray

    def __post_init__(self):
        rho = np.atleast_1d(np.asarray(self.rho, dtype=float)).ravel().copy()
        if np.any(~np.isfinite(rho)) or np.any(rho < 0) or np.any(rho > 1):
            raise ValueError(f"splitting ratios must lie in [0, 1], got {rho}")
        rho.flags.writeable = False
        object.__setattr__(self, "rho", rho)

    @classmethod
    def uniform(cls, rho, m):
        return cls(np.full(m, float(rho)))

    def split_channel(self, h_se):
        """``diag(sqrt(rho)) h_SE``: the part of the signal sent to the relay."""
        return np.sqrt(self.rho) * np.asarray(h_se)

    def split_power(self, h_se):
        """``sum(rho_m |h_SE,m|^2)``."""
        return float(np.dot(self.rho, np.abs(np.asarray(h_se)) ** 2))

    def __len__(self):
        return self.rho.size


def _as_split(rho, cs):
    if isinstance(rho, SplitVector):
        sv = rho
    elif np.ndim(rho) == 0:
        sv = SplitVector.uniform(rho, cs.m)
    else:
        sv = SplitVector(rho)
    if len(sv) != cs.m:
        raise ValueError(f"rho has {len(sv)} entries, expected M = {cs.m}")
    return sv


@dataclass(frozen=True)
class MinSnrAux:
    """Power weights of the SNR-minimizing precoder and its intermediates."""
    z1: float
    z2: float
    Z1: float
    Z2: float
    C1: float
    branch: int


@dataclass(frozen=True)
class Breakpoints:
    rho1: float
    rho2: float
    rho3: float
    C2: float
    alpha: float
    mu: float = math.nan


@dataclass(frozen=True, eq=False)
class SpoofSolution:
    mode: Mode
    rho_star: SplitVector
    W_star: np.ndarray
    W_hat_star: np.ndarray
    gamma_D: float
    gamma_E: float
    rate_bps_hz: float
    breakpoints: Breakpoints
    case: int
    jam_power_used: float = 0.0

    @property
    def feasible(self):
        return self.mode is not Mode.INFEASIBLE

    def to_dict(self):
        bp = self.breakpoints
        return {
            "mode": self.mode.value,
            "case": self.case,
            "rho_star": self.rho_star.rho.tolist(),
            "gamma_D": self.gamma_D,
            "gamma_E": self.gamma_E,
            "rate_bps_hz": self.rate_bps_hz,
            "jam_power_used": self.jam_power_used,
            "W_star": _cplx_list(self.W_star),
            "W_hat_star": _cplx_list(self.W_hat_star),
            "breakpoints": {"rho1": bp.rho1, "rho2": bp.rho2, "rho3": bp.rho3,
                            "C2": bp.C2, "alpha": bp.alpha, "mu": bp.mu},
        }


def _cplx_list(M):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(M)]


# --------------------------------------------------------------------------
# SNR evaluators

def rate_of(gamma, gap=1.0):
    """Achievable rate ``log2(1 + gamma / gap)`` in bps/Hz."""
    if gap < 1:
        raise ValueError("gap must be >= 1")
    return math.log2(1.0 + max(float(gamma), 0.0) / gap)


def snr_e(rho, cs):
    """SNR at E's information decoder after MRC over the unsplit parts."""
    sv = _as_split(rho, cs)
    return max(cs.hse2 - sv.split_power(cs.h_se), 0.0) * cs.ps


def _padded_split(sv, cs, ncols):
    h = sv.split_channel(cs.h_se)
    if ncols == cs.m + 1:
        # synthetic noise-only relay input, see min_snr_d
        h = np.append(h, 0.0)
    elif ncols != cs.m:
        raise ValueError(f"W has {ncols} columns, expected M = {cs.m}")
    return h


def snr_d(rho, W, cs, pc):
    """
    Effective SNR at D for splitting ``rho`` and reduced precoder ``W``.

    ``W`` is ``r0 x M``; an ``r0 x (M+1)`` matrix is accepted as well, the
    last column then acting on a relay input that carries processing noise
    only.
    """
    sv = _as_split(rho, cs)
    W = np.atleast_2d(np.asarray(W, dtype=complex))
    if W.shape[0] != pc.r0:
        raise ValueError(f"W has {W.shape[0]} rows, expected r0 = {pc.r0}")
    h = _padded_split(sv, cs, W.shape[1])
    g = pc.h_ed_hat.conj() @ W
    sig = abs(cs.h_sd + g @ h) ** 2
    return sig * cs.ps / (1.0 + float(np.vdot(g, g).real))


def relay_power(rho, W, cs):
    """Normalized transmit power of E: ``ps ||W h_SE_hat||^2 + ||W||_F^2``."""
    sv = _as_split(rho, cs)
    W = np.atleast_2d(np.asarray(W, dtype=complex))
    h = _padded_split(sv, cs, W.shape[1])
    Wh = W @ h
    return cs.ps * float(np.vdot(Wh, Wh).real) + float(np.sum(np.abs(W) ** 2))


def _unit(v):
    n = np.linalg.norm(v)
    return v / n if n > 0 else v


def _phase(z):
    # angle(0) := 0
    return np.exp(1j * np.angle(z)) if z != 0 else 1.0 + 0j


def max_snr_d(rho, cs, pc):
    """
    Largest SNR at D for fixed ``rho`` and its rank-1 precoder.

    The optimal ``W1 = sqrt(mu) e^{j angle(h_SD)} u_ED u_SE^H`` combines the
    split signal by MRC and forwards it by MRT so that relayed and direct
    paths add in phase; ``mu`` is the smaller of the unconstrained optimum
    and the power-limited value.

    Returns
    -------
    gamma_max : float
    W1 : ndarray, shape (r0, M)
    mu : float
    """
    sv = _as_split(rho, cs)
    hse_hat = sv.split_channel(cs.h_se)
    a = float(np.vdot(hse_hat, hse_hat).real)
    e = pc.hed_hat2
    c2 = cs.hsd2
    W = np.zeros((pc.r0, cs.m), dtype=complex)
    if a == 0.0 or e == 0.0:
        return cs.ps * c2, W, 0.0
    mu_cap = cs.pe / (cs.ps * a + 1.0)
    mu_free = a / (c2 * e) if c2 > 0 else math.inf
    if mu_free <= mu_cap:
        mu = mu_free
        gamma = cs.ps * (c2 + a)
    else:
        mu = mu_cap
        num = (math.sqrt(c2 * (cs.ps * a + 1.0)) + math.sqrt(cs.pe * a * e)) ** 2
        gamma = num * cs.ps / (cs.ps * a + cs.pe * e + 1.0)
    W = math.sqrt(mu) * _phase(cs.h_sd) * np.outer(_unit(pc.h_ed_hat), _unit(hse_hat).conj())
    return gamma, W, mu


def _orth_unit(u):
    # any unit vector orthogonal to u (len(u) >= 2)
    V = null_space_basis(u.conj()[None, :])
    return V[:, 0]


def min_snr_d(rho, cs, pc):
    """
    Smallest SNR at D for fixed ``rho`` and its rank-1 precoder.

    ``W2 = -e^{j angle(h_SD)} u_ED (sqrt(z1) u_SE + sqrt(z2) u_perp)^H``: the
    ``z1`` part forwards the signal in antiphase to the direct path, the
    ``z2`` part (orthogonal to the signal) only amplifies relay noise toward
    D.

    With a single receive antenna there is no direction orthogonal to the
    signal. The jamming part is then carried by an extra noise-only input
    column, so ``W2`` has shape ``(r0, 2)`` whenever ``z2 > 0``; :func:`snr_d`
    and :func:`relay_power` understand that layout.

    Returns
    -------
    gamma_min : float
    W2 : ndarray
    aux : MinSnrAux
    """
    sv = _as_split(rho, cs)
    hse_hat = sv.split_channel(cs.h_se)
    a = float(np.vdot(hse_hat, hse_hat).real)
    e = pc.hed_hat2
    c2 = cs.hsd2
    ps, pe = cs.ps, cs.pe
    G0, A, J = ps * c2, ps * a, pe * e

    C1 = ps * (G0 * J - (1.0 + J) ** 2)
    if e == 0.0:
        return G0, np.zeros((pc.r0, cs.m), dtype=complex), MinSnrAux(0, 0, math.nan, math.nan, C1, 0)

    if a > 0 and c2 > 0:
        Z1 = (1.0 + J) ** 2 / (ps ** 2 * c2 * e * a)
    else:
        Z1 = math.inf
    Z2 = pe - (1.0 + A) * Z1

    if J > G0 and A * (J - G0) >= G0 and a > 0:
        branch = 1
        z1, z2 = c2 / (e * a), 0.0
        gamma = 0.0
    elif J <= G0 and a * C1 > (1.0 + J) ** 2:
        branch = 2
        z1, z2 = Z1, max(Z2, 0.0)
        gamma = G0 / (1.0 + J) - 1.0
    else:
        branch = 3
        z1, z2 = pe / (1.0 + A), 0.0
        gamma = (math.sqrt(G0 * (1.0 + A)) - math.sqrt(A * J)) ** 2 / (1.0 + A + J)

    if a > 0:
        u_se = _unit(hse_hat)
    else:
        # nothing is split off; the z1 weight then only amplifies noise
        u_se = _unit(cs.h_se) if cs.hse2 > 0 else np.eye(cs.m)[0].astype(complex)
    v = math.sqrt(z1) * u_se
    if z2 > 0:
        if cs.m >= 2:
            v = v + math.sqrt(z2) * _orth_unit(u_se)
        else:
            v = np.append(v, math.sqrt(z2))
    W = -_phase(cs.h_sd) * np.outer(_unit(pc.h_ed_hat), v.conj())
    return gamma, W, MinSnrAux(z1, z2, Z1, Z2, C1, branch)


# --------------------------------------------------------------------------
# uniform power splitting: univariate reductions

def _scalars(cs, pc):
    return cs.ps * cs.hsd2, cs.ps * cs.hse2, cs.pe * pc.hed_hat2


def _check_rho(rho):
    rho = float(rho)
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    return rho


def _rho1(G0, A, J):
    if A == 0:
        return 1.0
    return min(1.0, (-1.0 + math.sqrt(1.0 + 4.0 * G0 * J)) / (2.0 * A))


def _rho2(G0, A, J):
    if J <= G0 or A == 0:
        return 1.0
    return min(1.0, G0 / (A * (J - G0)))


def _c2(G0, A, J):
    den = A * (G0 * J - (1.0 + J) ** 2)
    return (1.0 + J) ** 2 / den if den != 0 else math.inf


def _rho3(G0, A, J):
    c2 = _c2(G0, A, J)
    return c2 if 0.0 <= c2 <= 1.0 else 1.0


def _gmax(rho, G0, A, J):
    if J == 0 or rho <= _rho1(G0, A, J):
        return G0 + rho * A
    return (math.sqrt(G0 * (1.0 + rho * A)) + math.sqrt(rho * A * J)) ** 2 / (1.0 + rho * A + J)


def _gmin(rho, G0, A, J):
    if J > G0:
        if rho > _rho2(G0, A, J):
            return 0.0
    elif rho > _rho3(G0, A, J):
        return G0 / (1.0 + J) - 1.0
    return (math.sqrt(G0 * (1.0 + rho * A)) - math.sqrt(rho * A * J)) ** 2 / (1.0 + rho * A + J)


def ups_gamma_e(rho, cs):
    """E's SNR under a uniform splitting ratio: ``(1 - rho) ps ||h_SE||^2``."""
    return (1.0 - _check_rho(rho)) * cs.hse2 * cs.ps


def ups_gamma_d_max(rho, cs, pc):
    """Piecewise closed form of the largest SNR at D versus a uniform ratio."""
    return _gmax(_check_rho(rho), *_scalars(cs, pc))


def ups_gamma_d_min(rho, cs, pc):
    """Piecewise closed form of the smallest SNR at D versus a uniform ratio."""
    return _gmin(_check_rho(rho), *_scalars(cs, pc))


def breakpoints(cs, pc, mu=math.nan):
    G0, A, J = _scalars(cs, pc)
    return Breakpoints(rho1=_rho1(G0, A, J), rho2=_rho2(G0, A, J), rho3=_rho3(G0, A, J),
                       C2=_c2(G0, A, J), alpha=cs.alpha, mu=mu)


# --------------------------------------------------------------------------
# outer problem

def _classify(G0, A, J):
    if A >= G0 * (1.0 - CASE_RTOL):
        return 1
    if A >= G0 / (1.0 + J) * (1.0 - CASE_RTOL):
        return 2
    return 3


def _case3_candidates(G0, A, J):
    # third branch: (sqrt(G0(1+rA)) - sqrt(rAJ))^2 = (1-r) A (1+r A+J).
    # Expanding gives P(r) = 2 sqrt(G0 A J r (1+rA)) with P quadratic; squaring
    # yields the quartic P^2 - 4 G0 A J r (1 + r A) = 0.
    P = np.array([A * A, A * (G0 + 2.0 * J + 1.0 - A), G0 - A * (1.0 + J)])
    quartic = np.polysub(np.polymul(P, P), 4.0 * G0 * A * J * np.array([A, 1.0, 0.0]))
    cands = []
    if np.any(quartic != 0):
        cands.extend(poly_roots_real_in_unit(quartic))
    # constant second branch crossing the line (1-r) A
    if J <= G0:
        r3 = _rho3(G0, A, J)
        if r3 < 1.0:
            rc = 1.0 - (G0 / (1.0 + J) - 1.0) / A
            if r3 <= rc <= 1.0:
                cands.append(rc)
    return sorted(cands)


def _case3_root(G0, A, J):
    scale = max(G0, A, 1.0)
    for r in _case3_candidates(G0, A, J):
        h = _gmin(r, G0, A, J) - (1.0 - r) * A
        if abs(h) <= _ROOT_RTOL * scale:
            return r
    return None


def solve(cs, pc):
    """
    Optimal uniform splitting ratio, precoder and eavesdropping rate.

    Raises
    ------
    ZFInfeasibleError
        If the projected channels have no null-space dimension.
    """
    if pc.r0 < 1:
        raise ZFInfeasibleError("r0 = 0")
    G0, A, J = _scalars(cs, pc)
    case = _classify(G0, A, J)
    bp = breakpoints(cs, pc)
    m = cs.m
    gap = cs.gamma_gap

    if case == 1:
        f = lambda r: (1.0 - r) * A - _gmax(r, G0, A, J)  # noqa: E731
        rho = 0.0 if f(0.0) <= 0.0 else bisect_root(f, 0.0, 1.0)
        sv = SplitVector.uniform(rho, m)
        gamma_d, W, mu = max_snr_d(sv, cs, pc)
        return SpoofSolution(Mode.CONSTRUCTIVE, sv, W, pc.V0 @ W, gamma_d, snr_e(sv, cs),
                             rate_of(gamma_d, gap), _with_mu(bp, mu), case)

    if case == 2:
        sv = SplitVector.uniform(0.0, m)
        e = pc.hed_hat2
        p_used = 0.0
        if e > 0 and G0 > A:
            p_used = min(max((G0 / A - 1.0) / e, 0.0), cs.pe)
        W = np.zeros((pc.r0, m), dtype=complex)
        W[:, 0] = math.sqrt(p_used) * _unit(pc.h_ed_hat)
        gamma_d = snr_d(sv, W, cs, pc)
        return SpoofSolution(Mode.JAMMING, sv, W, pc.V0 @ W, gamma_d, snr_e(sv, cs),
                             rate_of(gamma_d, gap), bp, case, p_used)

    rho = _case3_root(G0, A, J)
    if rho is None:
        sv = SplitVector.uniform(0.0, m)
        W = np.zeros((pc.r0, m), dtype=complex)
        return SpoofSolution(Mode.INFEASIBLE, sv, W, pc.V0 @ W, G0, A, 0.0, bp, case)
    sv = SplitVector.uniform(rho, m)
    gamma_d, W, aux = min_snr_d(sv, cs, pc)
    jam = aux.z2 + (aux.z1 if rho == 0.0 else 0.0)
    return SpoofSolution(Mode.JAMMING_DESTRUCTIVE, sv, W, pc.V0 @ W, gamma_d, snr_e(sv, cs),
                         rate_of(gamma_d, gap), bp, case, jam)


def _with_mu(bp, mu):
    return Breakpoints(bp.rho1, bp.rho2, bp.rho3, bp.C2, bp.alpha, mu)


def lemma2_fast_path(cs, pc):
    """
    Closed-form optimum when E is stronger than D and has ample power.

    Returns ``(rho, gamma)`` with ``rho = (1 - 1/alpha) / 2`` and
    ``gamma = ps (||h_SE||^2 + |h_SD|^2) / 2``, or ``None`` if
    ``alpha <= 1`` or ``pe < alpha (1 + ps ||h_SE||^2) / ||h_ED_hat||^2``.
    """
    alpha = cs.alpha
    if not alpha > 1:
        return None
    e = pc.hed_hat2
    if e == 0 or cs.pe < alpha * (1.0 + cs.hse2 * cs.ps) / e:
        return None
    return 0.5 * (1.0 - 1.0 / alpha), 0.5 * (cs.hse2 + cs.hsd2) * cs.ps


def bps_construct(rho_ups, cs):
    """
    Splitting vector with at most one fractional ratio.

    Antennas are taken in decreasing order of ``|h_SE,m|^2`` and fully
    diverted to the relay until the next one would overshoot the split power
    of the uniform ratio ``rho_ups``; that antenna gets the fractional
    remainder and the rest get zero. The split power, and therefore every
    SNR, is the same as with ``rho_ups`` on all antennas.
    """
    rho_ups = _check_rho(rho_ups)
    g = np.abs(cs.h_se) ** 2
    if cs.m == 1 or rho_ups in (0.0, 1.0):
        return SplitVector.uniform(rho_ups, cs.m)
    order = np.argsort(-g, kind="stable")
    target = rho_ups * g.sum()
    rho = np.zeros(cs.m)
    acc = 0.0
    for idx in order:
        if acc + g[idx] >= target:
            rho[idx] = min((target - acc) / g[idx], 1.0) if g[idx] > 0 else 0.0
            break
        rho[idx] = 1.0
        acc += g[idx]
    return SplitVector(rho)
