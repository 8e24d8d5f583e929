# %% [markdown]
# # Simulated triple-slit runs
#
# Eight independent runs (slit detectors, screen with all slits open, one
# slit open, two slits open) sampled with `N` particles each. Frequencies
# converge at the usual `1/sqrt(N)` rate and so does the Sorkin residual.

# %%
import numpy as np

from qlra import SlitExperimentPlan, generate, mub_instance, random_instance, run_qlra, simulate, sorkin_residual, to_probability_data

inst = mub_instance(0.4, 0.4)
exact = generate(inst)
for n in (10**3, 10**4, 10**5, 10**6):
    d = to_probability_data(simulate(SlitExperimentPlan(inst, n, seed=1)))
    dev = max(np.abs(getattr(d, k) - getattr(exact, k)).max() for k in ("p_b", "p_a", "cond", "pair_cond"))
    print(f"N={n:>8}: max deviation {dev:.2e} (5/sqrt(N) = {5 / np.sqrt(n):.2e}), Sorkin {np.abs(sorkin_residual(d)).max():.2e}")

# %% [markdown]
# Reconstruction from frequencies. A tolerance in probability units is
# too strict for the coefficients, which divide by small amplitudes;
# `lambda_tol="auto"` propagates it.

# %%
n = 10**6
d = to_probability_data(simulate(SlitExperimentPlan(random_instance(2), n, seed=2)))
for mode in (None, "auto"):
    report, _ = run_qlra(d, 5 / np.sqrt(n), lambda_tol=mode)
    print(f"lambda_tol={mode!s:>4}: feasible={report.feasible} failed={report.failed_gates()}")
