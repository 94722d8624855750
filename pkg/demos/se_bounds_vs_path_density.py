"""Spectral efficiency vs channel path density.

Sweeps the mean multipath count lambda0 for two beam-grid sizes and lays
the simulated SE of the optimally beamformed link against the closed-form
expressions: the integer-shape upper bound, the simplified Rayleigh-style
upper expression, and the no-fading lower expression.  With the total
channel energy normalized, denser channels spread power over more beam
pairs and the SE of the best pair *drops* as lambda0 grows.
"""

import numpy as np

from beamsim import (
    BeamGrid,
    FadingModel,
    LinkBudget,
    SimConfig,
    SparseModel,
    estimate_se,
    se_lower,
    se_upper_nakagami,
    se_upper_rayleigh,
)

SNR_COEFF = 0.01     # c d^-alpha / sigma^2
M_SHAPE = 3.2
TRIALS = 20_000

lambda0_grid = np.linspace(1.0, 3.5, 11)
grids = {625: BeamGrid.from_counts(25, 25), 121: BeamGrid.from_counts(11, 11)}

curves = {}
for b, grid in grids.items():
    rows = []
    for i, lam0 in enumerate(lambda0_grid):
        lam0 = float(lam0)
        rho = b * SNR_COEFF / lam0
        cfg = SimConfig(
            link=LinkBudget.from_snr_coeff(SNR_COEFF, lam0),
            grid=grid,
            fading=FadingModel.nakagami(M_SHAPE),
            trials=TRIALS,
            seed=100 + i,
        )
        sim = estimate_se(cfg).mean
        model = SparseModel.from_occupancy(lam0, b, M_SHAPE)
        rows.append((
            lam0,
            sim,
            se_upper_nakagami(model, rho),
            se_upper_rayleigh(SparseModel.from_occupancy(lam0, b, 1.0), rho),
            se_lower(model, rho),
        ))
    curves[b] = np.array(rows)

for b, data in curves.items():
    print(f"\nB = {b} beam pairs (shape m = {M_SHAPE}, {TRIALS} trials/point)")
    print(f"{'lambda0':>8} {'sim SE':>9} {'upper(m)':>9} {'upper(Ray)':>10} {'lower':>9}  [nats]")
    for lam0, sim, up_m, up_r, lo in data:
        print(f"{lam0:8.2f} {sim:9.4f} {up_m:9.4f} {up_r:10.4f} {lo:9.4f}")
    errs = np.abs(data[:, 2] - data[:, 1]) / data[:, 1]
    print(f"integer-shape upper bound: max relative gap {100 * errs.max():.1f}%")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(11, 4.2), sharey=False)
    for ax, (b, data) in zip(axes, curves.items()):
        ax.plot(data[:, 0], data[:, 1], "ko-", label="simulated")
        ax.plot(data[:, 0], data[:, 2], "r^--", label="upper (integer shape)")
        ax.plot(data[:, 0], data[:, 3], "bs--", label="upper (Rayleigh approx)")
        ax.plot(data[:, 0], data[:, 4], "gv--", label="lower (no fading)")
        ax.set_title(f"B = {b}")
        ax.set_xlabel("mean path count  $\\lambda_0$")
        ax.set_ylabel("SE [nats/use]")
        ax.grid(alpha=0.3)
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig("se_bounds_vs_path_density.png", dpi=150)
    print("\nsaved se_bounds_vs_path_density.png")
except ImportError:
    print("\nmatplotlib unavailable; skipped the figure")
