"""Empirical variation-diminishing screen.

Convolution with a CVD kernel never increases the number of sign changes
of a trigonometric polynomial. The cos 3t "kernel" annihilates every other
harmonic, so it fails the screen.
"""
import numpy as np

from convrec import GridFunction, bernoulli, cvd_check, gauss, poisson

for kernel in (poisson(0.3), poisson(0.7), gauss(0.05), gauss(0.2), bernoulli(1)):
    print(f"{kernel.spec:<36}", cvd_check(kernel, trials=100).summary())

double = GridFunction.from_function(lambda t: np.cos(3 * t), 1024)
print(f"{'cos 3t':<36}", cvd_check(double, trials=100).summary())
