"""Independent oracle for the periodic log-kernel convolution.

Computes, by adaptive quadrature only (no package imports), the convolution
multiplier of the kernel

    K(z) = -(1/4pi) * log(2 |sin(z/2)|)

i.e. the factor c_k such that  (K * e^{ik.})(theta) = c_k e^{ik theta},
for k = 1..8, plus two spot values of K * F for F = (cos eta, 0) and for a
constant F. Run once; the printed values are frozen into tests.
"""

import numpy as np
from scipy.integrate import quad


def kernel(z):
    return -np.log(2.0 * np.abs(np.sin(z / 2.0))) / (4.0 * np.pi)


def multiplier(k):
    # c_k = int K(z) e^{-ikz} dz over one period; integrand even in z for
    # the cosine part, the sine part vanishes by parity.
    re, _ = quad(lambda z: kernel(z) * np.cos(k * z), 0.0, np.pi,
                 points=[0.0], limit=400, epsabs=1e-14, epsrel=1e-13)
    return 2.0 * re


def convolve_cos(theta):
    # (K * cos)(theta), integrating in z = theta - eta over one period.
    val, _ = quad(lambda z: kernel(z) * np.cos(theta - z), -np.pi, np.pi,
                  points=[0.0], limit=400, epsabs=1e-14, epsrel=1e-13)
    return val


def convolve_const(theta):
    val, _ = quad(kernel, -np.pi, np.pi, points=[0.0], limit=400,
                  epsabs=1e-14, epsrel=1e-13)
    return val


if __name__ == "__main__":
    print("convolution multiplier c_k of -(1/4pi) log(2|sin(z/2)|):")
    for k in range(1, 9):
        ck = multiplier(k)
        print(f"  k={k}:  c_k = {ck:.15f}   1/(4k) = {1.0 / (4 * k):.15f}"
              f"   diff = {ck - 1.0 / (4 * k):+.3e}")
    print("spot values of K * cos at theta in {0, 0.7}:")
    for th in (0.0, 0.7):
        v = convolve_cos(th)
        print(f"  theta={th}:  {v:.15f}   cos(theta)/4 = {np.cos(th) / 4:.15f}"
              f"   diff = {v - np.cos(th) / 4:+.3e}")
    print("K * 1 (zero mean of the kernel):")
    print(f"  {convolve_const(0.0):+.3e}")
