# %% [markdown]
# # Unbiased data with uniform screen distribution
#
# With `cond` all 1/3 and `p_b` uniform, Born's rule links the
# coefficients of a row linearly, `y*l12 + x*l13 + l23 = 0`, where
# `x^2 = p1/p2` and `y^2 = p1/p3`. Taking `l12 = -l13 = mu` turns this
# into a quadratic in `mu`.

# %%
import numpy as np

from qlra import AnsatzParams, DomainError, admissible_mu_roots, ansatz_family, ansatz_mu_roots, row_consistency

for x, y in ((1.0, 1.0), (3.0, 1.0), (1.0, 3.0), (2.0, 1.5)):
    roots = ansatz_mu_roots(x, y)
    keep = admissible_mu_roots(x, y)
    print(f"x={x}, y={y}: roots {np.round(roots, 6)}, admissible {keep}")

# %% [markdown]
# Fixing `l13 = v` instead gives `l12` in closed form, with a sign choice.
# Some `v` leave no real solution.

# %%
for v in (-0.7, -0.2, 0.4):
    for sign in (1, -1):
        try:
            table, _ = ansatz_family(AnsatzParams(1.4, 0.8, v, sign12=sign))
        except DomainError as exc:
            print(f"v={v:+.1f} sign={sign:+d}: {exc}")
            continue
        l12, l13, l23 = table.lam[0]
        rep = row_consistency(l12, l13, l23)
        print(f"v={v:+.1f} sign={sign:+d}: ({l12:+.6f}, {l13:+.6f}, {l23:+.6f}) consistent={rep.consistent} branch={rep.matched_sign:+d}")
