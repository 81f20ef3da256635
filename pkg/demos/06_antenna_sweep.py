"""
More antennas at the monitor.

With M = N antennas the eavesdropping link gains array gain N (d_SD/d_SE)^2.
The benchmarks stop improving once that exceeds the suspicious link; the
spoofing relay keeps converting the extra gain into rate.
"""

from spoofrelay.harness import preset, run_sweep

print(f"{'N':>3} {'alpha dB':>9} {'spoof':>7} {'passive':>8} {'jamming':>8}")
for r in run_sweep(preset("fig7_antennas")):
    print(f"{r.axis_value:3.0f} {r.alpha_db:9.2f} {r.rate_spoof:7.3f} "
          f"{r.rate_passive:8.3f} {r.rate_jamming:8.3f}")
