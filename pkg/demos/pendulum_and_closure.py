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
# # From a pendulum pass to a closed curve
#
# A generating curve in S^3 is (a e^{i s1}, b e^{i s2}) with (a, b) = (cos s, sin s).
# The magnitude s swings across a basic domain (z_L, z_R) while the phases advance.
# Once the per-pass advance of s1 is a rational multiple of pi the curve closes.

# %%
import math

import numpy as np

from spiralmin.closure import build_certificate, solve_for_target
from spiralmin.pendulum import integrate_basic
from spiralmin.profile import SpinParams, basic_domain, critical_point, threshold
from spiralmin.quadrature import angle_integrals, limit_J1_infinity, limit_J1_threshold

# %% [markdown]
# ## The basic domain
#
# Below the threshold there is no motion.  Just above it, the domain pinches
# around the critical point; far above, it opens up.

# %%
k1, k2, C = 1, 2, 0.0
m = threshold(k1, k2, C)
print("threshold", m, "critical point", critical_point(k1, k2, C))
for f in (1 + 1e-6, 2.0, 100.0):
    d = basic_domain(SpinParams(k1, k2, C, f * m))
    print(f"C~ = {f:>9.6g} m  ->  (z_L, z_R) = ({d.z_L:.6f}, {d.z_R:.6f})")

# %% [markdown]
# ## Per-pass angle advance
#
# J1 sweeps from the threshold limit down toward pi/(2(k1+1)) as C~ grows.

# %%
print("threshold limit", limit_J1_threshold(k1, k2, C), " large-C~ limit", limit_J1_infinity(k1))
for f in np.logspace(-6, 4, 6):
    I = angle_integrals(SpinParams(k1, k2, C, m * (1 + f)))
    print(f"C~/m - 1 = {f:8.1e}   J1/pi = {I.J1 / math.pi:.10f}")

# %% [markdown]
# ## Hitting a rational target
#
# Pick q = 2/5.  The solver returns every C~ with J1 = 2 pi/5; the certificate
# records how many pendulum rounds close the curve and its quotient class.
# A round is there and back, so the curve object counts twice as many passes.

# %%
roots = solve_for_target(k1, k2, C, "2/5")
print("roots", roots)
cert = build_certificate(k1, k2, C, roots[0], "2/5", "0")
print(cert.to_json())

# %%
cur = integrate_basic(SpinParams(k1, k2, C, roots[0]), 256).with_rounds(2 * cert.rounds_to_close)
A = cur.arrays()
z = np.stack([A["a"] * np.exp(1j * A["s1"]), A["b"] * np.exp(1j * A["s2"])], axis=1)
print("s1 total / pi", (A["s1"][-1] - A["s1"][0]) / math.pi)
print("endpoint gap", np.abs(z[-1] - z[0]).max())
