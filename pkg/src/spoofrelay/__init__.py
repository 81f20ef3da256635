"""Proactive eavesdropping with a full-duplex spoofing relay.

Closed-form optimization of receive power splitting and relay precoding at a
legitimate monitor, brute-force oracles for every closed form, and sweeps
over line-of-sight scenarios.
"""

from .baselines import BaselineResult, Scheme, jamming_rate, passive_rate
from .channel import (ChannelSet, ConfigError, ProjectedChannels, Scenario,
                      ZFInfeasibleError, free_space_gain, lift_precoder, load_scenario,
                      project, synthesize, ula_steering)
from .solver import (Mode, SplitVector, SpoofSolution, bps_construct, lemma2_fast_path,
                     max_snr_d, min_snr_d, rate_of, snr_d, snr_e, solve, ups_gamma_d_max,
                     ups_gamma_d_min, ups_gamma_e)

__version__ = "0.1.0"
