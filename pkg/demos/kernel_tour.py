"""
The resolvent kernel
====================

``k`` is the inverse Fourier transform of ``1 / (1 + |xi|^alpha)``.  It is
positive and even, integrates to one, and decays like ``k1 / x^(alpha+1)``.
This script evaluates it three ways and watches the series take over.
"""
import numpy as np
from scipy.special import sici

from fracsoliton import specfun as sf

alpha = 1.0

# At alpha = 1 there is a closed form through the sine and cosine integrals.
x = np.array([0.1, 1.0, 10.0, 50.0])
si, ci = sici(x)
exact = ((np.pi / 2 - si) * np.sin(x) - ci * np.cos(x)) / np.pi
print("x        engine            closed form       Fourier oracle")
for xi, e in zip(x, exact):
    print(f"{xi:5.1f}  {float(sf.k_eval(xi, alpha)):.15f}  {e:.15f}  {sf.k_fourier_eval(xi, alpha):.15f}")

# The algebraic tail: coefficients k_n and the truncated series.
for n in (1, 2, 3):
    print(f"k_{n}({alpha}) = {sf.kernel_coefficient(n, alpha): .6f}")

# Truncating after two terms leaves an error of order x^-(3 alpha + 1).
quad = sf.EvalOptions(crossover_x=np.inf)
xs = np.linspace(10, 100, 40)
for a in (0.5, 1.0, 1.5):
    gap = np.abs(sf.k_eval(xs, a, quad) - sf.k_series_eval(xs, sf.kernel_series(a, 2)))
    slope = np.polyfit(np.log(xs), np.log(gap), 1)[0]
    print(f"alpha={a}: log-log slope of the two-term error {slope:.3f} (expected {-(3 * a + 1):.1f})")

# Normalisation: the multiplier equals one at xi = 0.
for a in (0.5, 1.0, 1.5):
    total, _ = sf.kernel_integral(a)
    print(f"alpha={a}: integral of k = {total:.12f}")
