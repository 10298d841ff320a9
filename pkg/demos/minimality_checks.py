# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Checking minimality two ways
#
# The shape traces come from the curve's jet.  The finite-difference mean
# curvature only sees the immersion as a black box.  Both should vanish on a
# solution and both should light up once the phases are driven off-solution.

# %%
import numpy as np

from spiralmin.geometry import (
    Equator,
    ProductImmersion,
    legendrian_angle_variation,
    mean_curvature_fd,
    shape_traces,
    takahashi_residual,
)
from spiralmin.pendulum import integrate_basic, perturb_rates
from spiralmin.profile import SpinParams, threshold

# %%
k1, k2, C = 1, 2, 0.7
cur = integrate_basic(SpinParams(k1, k2, C, 1.5 * threshold(k1, k2, C)), 64)
bad = perturb_rates(cur, 0.01)
xs = cur.sample_params()
rng = np.random.default_rng(0)

print(" xi        traces(good)        traces(bad)        |H| fd good   |H| fd bad")
for xi in xs[[4, 16, 60]]:
    u = np.concatenate([[xi], rng.normal(size=k1 + k2) * 0.3])
    g = max(map(abs, shape_traces(cur, float(xi))))
    b = max(map(abs, shape_traces(bad, float(xi))))
    hg = mean_curvature_fd(ProductImmersion(cur, Equator(k1), Equator(k2)), u)
    hb = mean_curvature_fd(ProductImmersion(bad, Equator(k1), Equator(k2)), u)
    print(f"{xi:8.4f}  {g:16.2e}  {b:16.2e}  {hg:12.2e}  {hb:12.2e}")

# %% [markdown]
# ## Takahashi residual
#
# The coordinate functions of a spherical minimal immersion are eigenfunctions
# of the Laplacian.  The residual below is that statement, evaluated pointwise.

# %%
print(max(max(takahashi_residual(cur, float(x))) for x in xs))
print(max(max(takahashi_residual(bad, float(x))) for x in xs))

# %% [markdown]
# ## Legendrian angle
#
# With C = -1 the product is C-totally real and the Legendrian angle is constant.
# A C = 0 curve is a control where it is not.

# %%
for C in (-1.0, 0.0):
    c = integrate_basic(SpinParams(1, 1, C, 3 * threshold(1, 1, C)), 64)
    print(C, legendrian_angle_variation(c))
