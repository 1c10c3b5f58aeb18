"""Independent oracle for the oscillatory principal-value integrals.

Evaluates the raw integrand of

    I_n(k; k1..k_2n) = pv int_{-pi}^{pi} m(k - k1, eta)
                         prod_{j=1}^{2n-1} sin((k_j - k_{j+1}) eta / 2)
                                           / ((k_j - k_{j+1}) sin(eta/2))
                         e^{-i (k1 + k_2n) eta / 2}  d eta,

    m(q, eta) = [1 - sin(q eta/2) / (q tan(eta/2)) e^{-i q eta/2}]
                / (2 sin(eta/2)),

by a 10^6-node midpoint rule on a symmetric grid (nodes avoid eta = 0 and
pair up as +/- eta, which realizes the principal value: the odd singular
part cancels exactly in the pairwise sum). No package imports. Run once;
values are frozen into tests.
"""

import numpy as np

N_NODES = 1_000_000


def m_mult(q, eta):
    if q == 0:
        return np.zeros_like(eta, dtype=complex)
    s = np.sin(eta / 2.0)
    f = 1.0 - np.sin(q * eta / 2.0) / (q * np.tan(eta / 2.0)) \
        * np.exp(-1j * q * eta / 2.0)
    return f / (2.0 * s)


def raw_In(k, ks):
    n2 = len(ks)
    h = 2.0 * np.pi / N_NODES
    eta = -np.pi + (np.arange(N_NODES) + 0.5) * h  # symmetric, avoids 0
    val = m_mult(k - ks[0], eta).astype(complex)
    s = np.sin(eta / 2.0)
    for j in range(n2 - 1):
        b = ks[j] - ks[j + 1]
        val *= np.sin(b * eta / 2.0) / (b * s)
    val *= np.exp(-1j * (ks[0] + ks[-1]) * eta / 2.0)
    return h * np.sum(val)


CASES = [
    (2, (1, 0)),      # expected 0 (the two bounded halves cancel)
    (2, (1, -1)),     # expected i*pi/2
    (3, (1, -2)),
    (1, (2, 0, 3, 1)),  # one n=2 tuple
]

if __name__ == "__main__":
    for k, ks in CASES:
        v = raw_In(k, ks)
        print(f"I_{len(ks) // 2}(k={k}; ks={ks}) = {v.real:+.12e} "
              f"{v.imag:+.12e}j   |.| = {abs(v):.12e}")
