"""
Closed forms against brute force.

Each closed-form SNR extremum is compared with a grid search over the power
weights, a random sweep over full (not rank-restricted) precoders, and a
dense scan of the split ratio. ``run_verification`` bundles all of it; the
same report is printed by ``spoofrelay verify``.
"""

from spoofrelay import max_snr_d, min_snr_d, project, solve
from spoofrelay.oracle import (grid_max_mu, grid_min_z, random_instance, random_w_sandwich,
                               rho_scan, run_verification)

cs = random_instance(seed=11)
pc = project(cs)
rho = 0.4
print(f"max SNR at D: closed form {max_snr_d(rho, cs, pc)[0]:.8f}, "
      f"grid {grid_max_mu(rho, cs, pc):.8f}")
print(f"min SNR at D: closed form {min_snr_d(rho, cs, pc)[0]:.8f}, "
      f"grid {grid_min_z(rho, cs, pc):.8f}")
lo, hi = random_w_sandwich(rho, cs, pc, trials=5000, seed=1)
print(f"random precoders land in [{lo:.6f}, {hi:.6f}]")
print(f"solve rho* {solve(cs, pc).rho_star.rho[0]:.6f}, scan {rho_scan(cs, pc).rho:.6f}")

print()
print("\n".join(run_verification(instances=30, seed=0).lines()))
