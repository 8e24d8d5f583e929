# %% [markdown]
# # A mutually unbiased family
#
# The second basis is unbiased with respect to the screen basis and the
# state has equal moduli with two free phases. Along the diagonal
# `gamma_1 = gamma_2 = g` the coefficients have closed forms; here we
# compare a few of them with the generated data and look at the
# behaviour near `g = 4 pi / 3`, where two slit probabilities vanish.

# %%
import numpy as np

from qlra import generate, interference_coefficients, mub_instance, mub_marginals_closed_form

for g in np.linspace(-2.0, 2.0, 5):
    data = generate(mub_instance(g, g))
    lam = interference_coefficients(data).lam
    s = np.sin(g + np.pi / 6)
    edge = -np.sqrt(1 + s) / np.sqrt(10 - 8 * s)
    print(f"g={g:+.2f}  lambda_1,12={lam[0, 0]:+.9f}  closed form={edge:+.9f}  lambda_1,13={lam[0, 1]:+.3f}  lambda_2,13={lam[1, 1]:+.3f}")

# %% [markdown]
# Slit probabilities as trigonometric polynomials of the two phases.

# %%
g1, g2 = 0.3, -1.2
print("closed form:", mub_marginals_closed_form(g1, g2))
print("generated:  ", generate(mub_instance(g1, g2)).p_a)

# %% [markdown]
# Approaching the singular point from either side, four coefficients tend
# to `+-sqrt(3)/2` with the sign set by the side of approach.

# %%
for side in (-1, 1):
    g = 4 * np.pi / 3 + side * 1e-6
    lam = interference_coefficients(generate(mub_instance(g, g))).lam
    print(f"side {side:+d}: lambda_2,12={lam[1, 0]:+.6f} lambda_3,23={lam[2, 2]:+.6f}  sqrt(3)/2={np.sqrt(3) / 2:.6f}")
