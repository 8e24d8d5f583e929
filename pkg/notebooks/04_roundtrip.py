# %% [markdown]
# # Forward model and reconstruction
#
# Generate data from a random state and basis, forget the quantum model,
# and rebuild it from the probabilities. The rebuilt state matches the
# original moduli; phases differ per screen coordinate, which is a change
# of basis vectors and leaves every probability unchanged.

# %%
import time

import numpy as np

from qlra import generate, random_instance, run_qlra

inst = random_instance(7)
data = generate(inst)
report, models = run_qlra(data)
print("feasible:", report.feasible, " candidates:", report.n_candidates, " surviving:", report.n_surviving)
m = models[0]
print("|psi| rebuilt :", np.abs(m.psi))
print("|psi| original:", np.abs(inst.psi))
for name, x, y in zip(("p_b", "p_a", "cond"), m.probabilities(), (data.p_b, data.p_a, data.cond)):
    print(f"{name}: max Born error {np.abs(x - y).max():.2e}")

# %% [markdown]
# The same over many seeds.

# %%
t0 = time.perf_counter()
ok = sum(run_qlra(generate(random_instance(s)))[0].feasible for s in range(300))
print(f"{ok}/300 feasible in {time.perf_counter() - t0:.2f}s")
