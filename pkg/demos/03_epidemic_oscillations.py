"""SIRS dynamics on small-world graphs: fluctuations vs synchronization.

Runs the discrete SIRS model (infection probability = own infected-neighbor
fraction, deterministic infectious/immune clocks tau_i/tau_r) on
Watts-Strogatz graphs at increasing rewiring probability and classifies
the infected-density series by its short-time Fourier spectrum. As the
graph becomes more random the local recovery clocks phase-lock and the
whole population oscillates with period near tau_i + tau_r + 1.

Run:  python demos/03_epidemic_oscillations.py     (~1 minute)
"""

import numpy as np

import swepi as sw

params = sw.EpidemicParams(tau_i=4, tau_r=9, init_infected_frac=0.1)
STEPS, BURN = 2000, 1000

print(f"N=2000 k=6, tau_i={params.tau_i} tau_r={params.tau_r}, "
      f"{STEPS} steps, burn-in {BURN}")
print(f"natural period guess: tau_i + tau_r + 1 = {params.tau_i + params.tau_r + 1}\n")
print(f"{'p':>5} {'regime':>12} {'mean rho_I':>11} {'amplitude':>10} {'period':>8}")

for p in [0.05, 0.2, 0.4, 0.9]:
    g = sw.watts_strogatz(sw.WsParams(n=2000, k=6, p=p, seed=11))
    series = sw.run(g, params, STEPS, np.random.default_rng(23))
    rep = sw.classify_regime(series, burn_in=BURN)
    period = f"{rep.dominant_period:.1f}" if rep.dominant_period else "-"
    print(f"{p:>5} {rep.regime:>12} {rep.mean_rho_i:>11.4f} "
          f"{rep.amplitude:>10.4f} {period:>8}")

print("\nAmplitude grows with p: more shortcuts couple distant regions and")
print("synchronize the deterministic recovery clocks into a global cycle.")
print("(At N=2000 even low-p runs carry a visible finite-size oscillation;")
print("the sharp stationary/oscillatory split needs N ~ 10^4.)")
