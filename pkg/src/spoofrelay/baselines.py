"""Passive and jamming-only eavesdropping benchmarks."""

import enum
from dataclasses import dataclass

from .solver import rate_of

__all__ = ["Scheme", "BaselineResult", "passive_rate", "jamming_rate"]


class Scheme(str, enum.Enum):
    PASSIVE = "Passive"
    JAMMING = "JammingOnly"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class BaselineResult:
    scheme: Scheme
    rate_bps_hz: float
    jam_power_used: float = 0.0


def passive_rate(cs):
    """E listens only; it decodes iff its channel is at least as strong as D's."""
    if cs.hse2 >= cs.hsd2:
        return BaselineResult(Scheme.PASSIVE, rate_of(cs.gamma0, cs.gamma_gap))
    return BaselineResult(Scheme.PASSIVE, 0.0)


def jamming_rate(cs, pc):
    """
    E jams D by amplifying relay noise along the MRT direction of the
    projected channel, with just enough power to pull D's SNR down to E's.
    """
    a, c2, e = cs.hse2, cs.hsd2, pc.hed_hat2
    if a >= c2:
        return BaselineResult(Scheme.JAMMING, rate_of(cs.gamma0, cs.gamma_gap))
    if a >= c2 / (1.0 + e * cs.pe):
        p_used = min((c2 / a - 1.0) / e, cs.pe)
        return BaselineResult(Scheme.JAMMING, rate_of(a * cs.ps, cs.gamma_gap), p_used)
    return BaselineResult(Scheme.JAMMING, 0.0)
