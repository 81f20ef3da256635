"""
One power splitter is enough.

Only the split power sum(rho_m |h_SE,m|^2) matters, so a uniform ratio can be
replaced by a vector that routes the strongest antennas wholly to the relay
and splits at most one antenna fractionally.
"""

import numpy as np

from spoofrelay import ChannelSet, bps_construct, max_snr_d, min_snr_d, project, snr_e

h_se = np.array([2.0, 1.0, 1.0j])
cs = ChannelSet(1.0, h_se, [1.0, 0.5j], np.zeros((3, 2)), ps=10.0, pe=5.0)
pc = project(cs)

for r in (0.2, 0.5, 0.9):
    sv = bps_construct(r, cs)
    print(f"uniform {r:.1f} -> {np.round(sv.rho, 4)}")
    for name, f in (("E", lambda x: snr_e(x, cs)),
                    ("max D", lambda x: max_snr_d(x, cs, pc)[0]),
                    ("min D", lambda x: min_snr_d(x, cs, pc)[0])):
        print(f"   {name:6s} uniform {f(r):.12f}  binary {f(sv):.12f}")
