"""The optimal method reproduces P * psi_1 * ... * psi_n.

We draw two inputs psi_1, psi_2 from the L1 unit ball, form x_l = K_l * psi_l,
keep only the first 2s - 1 Fourier coefficients of each x_l, and apply the
method. The result coincides with P * psi_1 * psi_2, so the error is
(K - P) * psi_1 * psi_2, whose L1 norm is at most ||K - P||_1.
"""
import numpy as np

from convrec import (ConvSpec, PsiSpec, best_approximation, class_members,
                     convolve_spectral, extract_info, gen_psi, gauss, multipliers,
                     norm_C, poisson, recover, residual_error)

kernels = [poisson(0.5), gauss(0.2)]
s = 3
psis = [gen_psi(PsiSpec("random_trig", order=6, seed=1)),
        gen_psi(PsiSpec("box", center=1.0, width=2 * np.pi / 64))]

xs, _ = class_members(psis, kernels)
infos = [extract_info(x, s) for x in xs]
print("information per factor:", [info.size for info in infos])

mult = multipliers(kernels, s)
for j in range(s):
    print(f"alpha[{j}] = {mult.alpha[j]:.10g}")

phi = recover(infos, mult)
_, interp = best_approximation(kernels, s)
target = convolve_spectral(ConvSpec((interp.poly.sample(), *psis)), s - 1)
print("||Phi - P*psi1*psi2||_C =", norm_C((phi - target).sample(256))[0])

residual, bound, ratio = residual_error(psis, kernels, s)
print(f"residual {residual:.6f}  bound {bound:.6f}  ratio {ratio:.6f}")
