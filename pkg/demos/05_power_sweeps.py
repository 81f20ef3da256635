"""
Relay budget and source power.

The first sweep raises E's budget with E near S; the split ratio settles at
(1 - 1/alpha) / 2 = 0.42 once power stops being the bottleneck. The second
repeats it with E far away, where jamming alone needs about 2 dB more power
than the spoofing relay before it decodes anything. The last two sweep the
source power with E's budget fixed.
"""

from spoofrelay.harness import preset, run_sweep

near = run_sweep(preset("fig4_pe"))
print("E at 400 m:  P_E/P_S dB -> rho*")
for r in near[::25]:
    print(f"  {r.axis_value:6.1f} -> {r.rho_star:.4f}")

far = run_sweep(preset("fig4_pe", d_se=2800.0))
first = lambda key: next(r.axis_value for r in far if getattr(r, key) > 0)  # noqa: E731
print(f"\nE at 2800 m: spoofing decodes from {first('rate_spoof'):.1f} dB, "
      f"jamming from {first('rate_jamming'):.1f} dB")

for name in ("fig5_ps", "fig6_ps_far"):
    rows = run_sweep(preset(name))
    print(f"\n{name}: gamma0 dB, spoof / jamming bps/Hz")
    for r in rows[::20]:
        print(f"  {r.axis_value:5.1f}  {r.rate_spoof:6.3f} / {r.rate_jamming:6.3f}")
