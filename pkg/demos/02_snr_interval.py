"""
The reachable SNR interval at D versus the split ratio.

For a uniform split ratio rho the relay can place D's SNR anywhere between
the destructive minimum and the constructive maximum, while E keeps
(1 - rho) of its own SNR. The optimal ratio is where E's line meets the
interval. The table below shows this for a weak monitor (E farther from S
than D) that must jam and forward in antiphase.
"""

import numpy as np

from spoofrelay import (Scenario, project, solve, synthesize, ups_gamma_d_max, ups_gamma_d_min,
                        ups_gamma_e)

sc = Scenario.from_reference_snr(d_se=2900.0, gamma0_db=10.0, pe_over_ps_db=0.0)
cs = synthesize(sc)
pc = project(cs)

print(f"{'rho':>6} {'min D':>10} {'max D':>10} {'E':>10}  feasible")
for r in np.linspace(0.0, 0.3, 13):
    lo, hi, e = ups_gamma_d_min(r, cs, pc), ups_gamma_d_max(r, cs, pc), ups_gamma_e(r, cs)
    print(f"{r:6.3f} {lo:10.4f} {hi:10.4f} {e:10.4f}  {lo <= e}")

sol = solve(cs, pc)
print(f"\nsolver: {sol.mode} at rho* = {sol.rho_star.rho[0]:.6f}, "
      f"rate {sol.rate_bps_hz:.4f} bps/Hz")
