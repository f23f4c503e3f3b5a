"""Stationary entanglement under laser phase noise.

Reproduces the structure of the power-detuning entanglement maps: how the
logarithmic negativity degrades as the laser linewidth grows, and how it
collapses at the bistability threshold once any phase noise is present.
Writes the three contour grids as plot-ready files.
"""

import math

import numpy as np

from optomech import (emit_figure_data, evaluate_point, figure_recipe,
                      power_for_coupling, run_sweep)

OMEGA_M = 2 * math.pi * 1e7

# --- E_N along a power cut at delta = omega_m ---------------------------------
print("E_N vs drive power at delta = omega_m, kappa = 0.5 omega_m")
print(f"{'P/P_thr':>8} {'no noise':>10} {'0.1 kHz':>10} {'1 kHz':>10}")
recipes = {label: figure_recipe(fig, grid=(4, 4)).fixed
           for label, fig in (("none", "fig2a"), ("0.1k", "fig2b"),
                              ("1k", "fig2c"))}
base = recipes["none"]
g_threshold = math.sqrt(1.25) * OMEGA_M
p_threshold = power_for_coupling(base, g_threshold)
for frac in (0.2, 0.4, 0.6, 0.8, 0.9, 0.97, 0.995):
    row = [frac]
    for label in ("none", "0.1k", "1k"):
        p = recipes[label].with_(laser_power=frac * p_threshold)
        row.append(evaluate_point(p).e_n)
    print(f"{row[0]:8.3f} {row[1]:10.4f} {row[2]:10.4f} {row[3]:10.4f}")
print("note: with phase noise the maximum sits at intermediate power and")
print("entanglement dies before the threshold; without it E_N keeps rising.")

# --- full contour grids (coarse for a quick demo) ------------------------------
print("\nevaluating 40x40 grids for the three linewidths...")
maxima = {}
for fig in ("fig2a", "fig2b", "fig2c"):
    result = run_sweep(figure_recipe(fig, grid=(40, 40)))
    grid = result.grid("e_n")
    stable = ~np.isnan(grid)
    maxima[fig] = (np.max(grid[stable]), np.mean(grid[stable] > 0))
    emit_figure_data(result, "demo_output", stem=fig)
for fig, (peak, frac) in maxima.items():
    print(f"  {fig}: max E_N = {peak:.4f}, entangled fraction = {frac:.3f}")
print("grids written to demo_output/fig2[abc].{csv,grid.txt}")
print("gnuplot> splot 'demo_output/fig2b.grid.txt' using 1:2:3 with pm3d")

# --- broader noise band is worse ----------------------------------------------
print("\nband-center dependence at fixed linewidth 0.1 kHz (30/80/140 kHz):")
for fig in ("fig4a", "fig4b", "fig4c"):
    result = run_sweep(figure_recipe(fig, grid=(30, 30)))
    grid = result.grid("e_n")
    band = figure_recipe(fig, grid=(2, 2)).fixed.phase_noise.omega_band
    print(f"  band {band / (2 * math.pi * 1e3):5.0f} kHz: "
          f"max E_N = {np.nanmax(grid):.4f}")
