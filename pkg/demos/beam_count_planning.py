"""Training-overhead-aware beam-count planning.

Finer beams raise the link gain but lengthen the sector sweep, so the
throughput (1 - T_o / T) * SE is unimodal in the beam count.  This demo
plots the trade-off for several node velocities under the default
coherence-time rule of thumb, reports the numeric and closed-form optima,
and shows the fast-mobility regime where no beam count fits the
coherence interval at all.
"""

import math

import numpy as np

from beamsim import (
    InfeasibleConfigError,
    ThroughputConfig,
    best_square_b,
    coherence_time,
    feasible_region,
    optimal_b_closed_form,
    optimal_b_numeric,
    optimal_hpbw,
    throughput_curve,
)

LAMBDA0 = 1.9
SNR_COEFF = 0.01
K = SNR_COEFF / LAMBDA0       # per-beam SNR scale
T_F = 5e-6                    # control-frame duration [s]
CARRIER = 60e9

velocities = (1.0, 1.5, 2.0, 11.1)

print(f"per-beam SNR scale K = {K:.6f}, control frame {T_F * 1e6:.0f} us, "
      f"carrier {CARRIER / 1e9:.0f} GHz\n")
print(f"{'v[m/s]':>7} {'T_c[ms]':>8} {'B* num':>9} {'B* closed':>10} "
      f"{'HPBW*[deg]':>10} {'sq B':>6} {'B_max':>9}")

curves = {}
for v in velocities:
    t_c = coherence_time(v, CARRIER, "clarke")
    cfg = ThroughputConfig(t_f=T_F, t_total=t_c, k=K, lambda0=LAMBDA0, n_b=4)
    region = feasible_region(cfg)
    if region is None:
        print(f"{v:7.1f} {1e3 * t_c:8.3f} {'--':>9} {'--':>10} {'--':>10} {'--':>6} "
              f"{'empty':>9}  <- sweep never fits the coherence interval")
        curves[v] = None
        continue
    b_num = optimal_b_numeric(cfg)
    try:
        b_cf = optimal_b_closed_form(cfg)
        b_cf_txt = f"{b_cf:10.1f}"
    except InfeasibleConfigError:
        b_cf_txt = f"{'--':>10}"
    print(f"{v:7.1f} {1e3 * t_c:8.3f} {b_num:9.1f} {b_cf_txt} "
          f"{optimal_hpbw(b_num):10.2f} {best_square_b(cfg):6d} {region[1]:9.0f}")
    roots = np.arange(1, int(math.sqrt(region[1])) + 1)
    curves[v] = (roots**2, throughput_curve((roots**2).astype(float), cfg))

print("\nhigher velocity -> shorter coherence time -> fewer beams affordable,")
print("wider optimal beamwidth, and lower peak throughput.")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.8, 4.4))
    for v, payload in curves.items():
        if payload is None:
            continue
        b, tp_vals = payload
        ax.plot(b, np.maximum(tp_vals, 0.0), label=f"v = {v} m/s")
    ax.set_xlabel("beam pairs B")
    ax.set_ylabel("throughput [nats/use]")
    ax.set_xscale("log")
    ax.grid(alpha=0.3, which="both")
    ax.legend()
    fig.tight_layout()
    fig.savefig("beam_count_planning.png", dpi=150)
    print("saved beam_count_planning.png")
except ImportError:
    print("matplotlib unavailable; skipped the figure")
