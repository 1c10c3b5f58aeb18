"""Principal-value multiplier integrals from the small-deviation expansion.

The expansion of the velocity about the circle family produces, at order n
in the deviation, principal-value integrals

    I_n(k; k_1..k_{2n}) = pv int_{-pi}^{pi} m(k - k_1, eta)
        prod_{j=1}^{2n-1} [ sin(b_j eta/2) / (b_j sin(eta/2)) ]
        e^{-i (k_1 + k_{2n}) eta / 2}  deta

with differences b_0 = k - k_1, b_j = k_j - k_{j+1}, and the multiplier

    m(k, eta) = [ 1 - e^{-ik eta/2} sin(k eta/2) / (k tan(eta/2)) ]
                / (2 sin(eta/2)).

Everything here reduces to integrals of *trigonometric polynomials*: with
s_b(eta) = sin(b eta/2)/sin(eta/2) (a degree-(|b|-1) cosine polynomial up
to sign) one can rewrite, with sigma = k_1 + k_{2n},

    I_n = -(i/2) * (I'_n - I''_n),
    I'_n  = int s_sigma(eta) prod_{j=1}^{2n-1} s_{b_j}(eta)/b_j  deta,
    I''_n = int cos(eta/2) s_{k + k_{2n}}(eta) prod_{j=0}^{2n-1} s_{b_j}(eta)/b_j deta,

both of which the uniform trapezoid rule integrates *exactly* once the
node count exceeds the integrand bandwidth.  I'_n additionally has the
combinatorial closed form

    I'_n = 2 pi sgn(sigma) T / prod_{j=1}^{2n-1} |b_j|,

where T counts lattice points (m_0..m_{2n-1}), 0 <= m_j <= B_j - 1, with
sum m_j = (sum B_j)/2 - n, for B_j = |b_j| (j < 2n-1 shifted by one index)
and B_{2n-1} = |sigma|.  Since T <= prod_{j=1}^{2n-1} B_j, every |I'_n|
(and by the same counting |I_n|) is bounded by 2 pi.
"""

import math

import numpy as np


def m_multiplier(k, eta):
    """m(k, eta); vectorized in eta, with the eta -> 0 limit i k/2 built in.

    m(0, eta) = 0 and m(k, pi) = 1/(2 sin(pi/2)) * [1 - 0] = 1/2 for all k.
    """
    k = int(k)
    eta = np.asarray(eta, dtype=float)
    scalar = eta.ndim == 0
    eta = np.atleast_1d(eta)
    out = np.empty(eta.shape, dtype=complex)
    if k == 0:
        out[:] = 0.0
        return out[0] if scalar else out
    small = np.abs(eta) < 1e-6
    e = eta[~small]
    out[~small] = (
        1.0
        - np.exp(-0.5j * k * e) * np.sin(0.5 * k * e) / (k * np.tan(0.5 * e))
    ) / (2.0 * np.sin(0.5 * e))
    # series: m = i k/2 + eta (2 k^2 + 1)/12 + O(eta^2)
    es = eta[small]
    out[small] = 0.5j * k + es * (2.0 * k * k + 1.0) / 12.0
    return out[0] if scalar else out


def _s_ratio(b, eta):
    """sin(b*eta/2)/sin(eta/2) with the eta=0 limit b; b may be any integer."""
    b = int(b)
    if b == 0:
        return np.zeros_like(eta)
    s = np.sin(0.5 * eta)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.sin(0.5 * b * eta) / s
    return np.where(np.abs(s) < 1e-12, float(b), vals)


def _diffs(k, ks):
    ks = [int(v) for v in ks]
    b = [int(k) - ks[0]]
    b += [ks[j] - ks[j + 1] for j in range(len(ks) - 1)]
    return b  # b_0 .. b_{2n-1}


def _nodes_for(fmax):
    n = 64
    while n <= 2 * fmax + 2:
        n *= 2
    return n


def _trapezoid_exact(values, n):
    return float(np.sum(values)) * (2.0 * np.pi / n)


def integral_Sn_quadrature(ks, nodes=None):
    """I'_n by bandwidth-exact trapezoid quadrature.

    ks : the 2n frequencies (k_1 .. k_{2n}).  Returns a float (the
    integrand is even, hence the integral real).
    """
    ks = [int(v) for v in ks]
    if len(ks) % 2 != 0 or not ks:
        raise ValueError("need an even, positive number of frequencies")
    sigma = ks[0] + ks[-1]
    bs = [ks[j] - ks[j + 1] for j in range(len(ks) - 1)]
    if sigma == 0 or any(b == 0 for b in bs):
        return 0.0
    fmax = 0.5 * (sum(abs(b) for b in bs) + abs(sigma)) - 0.5 * len(bs) - 0.5
    n = nodes or _nodes_for(int(math.ceil(fmax)))
    eta = -np.pi + 2.0 * np.pi * np.arange(n) / n
    vals = _s_ratio(sigma, eta)
    for b in bs:
        vals = vals * (_s_ratio(b, eta) / b)
    return _trapezoid_exact(vals, n)


def _integral_doubleprime(k, ks, nodes=None):
    """I''_n: like I'_n but with the extra factors cos(eta/2), s_{k+k_{2n}},
    and the leading difference b_0 = k - k_1 included in the product."""
    k = int(k)
    ks = [int(v) for v in ks]
    sig2 = k + ks[-1]
    if sig2 == 0:
        return 0.0
    bs = _diffs(k, ks)  # b_0 .. b_{2n-1}, all nonzero by caller's checks
    fmax = 0.5 * (sum(abs(b) for b in bs) + abs(sig2)) - 0.5 * len(bs) - 0.5 + 0.5
    n = nodes or _nodes_for(int(math.ceil(fmax)))
    eta = -np.pi + 2.0 * np.pi * np.arange(n) / n
    vals = np.cos(0.5 * eta) * _s_ratio(sig2, eta)
    for b in bs:
        vals = vals * (_s_ratio(b, eta) / b)
    return _trapezoid_exact(vals, n)


def integral_In(k, ks, nodes=None):
    """The full pv integral I_n(k; k_1..k_{2n}) = -(i/2)(I'_n - I''_n).

    Returns a purely imaginary complex number.  Conventions: the integral
    vanishes when k = k_1 or when any two consecutive k_j coincide (a
    difference factor degenerates and pairs with the pv to give zero).
    """
    k = int(k)
    ks = [int(v) for v in ks]
    if len(ks) % 2 != 0 or not ks:
        raise ValueError("need frequencies k_1..k_{2n} with n >= 1")
    if k == ks[0] or any(ks[j] == ks[j + 1] for j in range(len(ks) - 1)):
        return 0j
    ip = integral_Sn_quadrature(ks, nodes)
    idp = _integral_doubleprime(k, ks, nodes)
    return -0.5j * (ip - idp)


def integral_Sn_exact(ks):
    """Closed form for I'_n by counting bounded lattice compositions.

    T = #{ (m_1..m_{2n-1}, m_sigma) : 0 <= m_j < B_j, sum m_j = S/2 - n }
    with B_j = |b_j|, B_sigma = |sigma|, S = sum B_j + B_sigma; then
    I'_n = 2 pi sgn(sigma) T / prod B_j  (product over the b_j only).
    """
    ks = [int(v) for v in ks]
    if len(ks) % 2 != 0 or not ks:
        raise ValueError("need an even, positive number of frequencies")
    sigma = ks[0] + ks[-1]
    bs = [ks[j] - ks[j + 1] for j in range(len(ks) - 1)]
    if sigma == 0 or any(b == 0 for b in bs):
        return 0.0
    caps = [abs(b) for b in bs] + [abs(sigma)]
    # Each factor sin(B phi)/sin(phi) = sum over exponents B-1-2m, m=0..B-1;
    # the product's constant Fourier mode needs sum(B_j - 1 - 2 m_j) = 0.
    s = sum(caps)
    if (s - len(caps)) % 2 != 0:
        return 0.0  # odd total parity: no constant mode survives
    target = (s - len(caps)) // 2
    # digit DP: number of (m_j), 0 <= m_j <= caps_j - 1, summing to target
    counts = np.zeros(target + 1, dtype=float)
    counts[0] = 1.0
    for cap in caps:
        new = np.cumsum(counts)
        shifted = np.zeros_like(new)
        if cap <= target:
            shifted[cap:] = new[:-cap]
        counts = new - shifted
    t = float(counts[target])
    denom = 1.0
    for b in bs:
        denom *= abs(b)
    return 2.0 * np.pi * math.copysign(1.0, sigma) * t / denom


def integral_S1_closed(k1, k2):
    """n = 1 special case: I'_1 = 2 pi sgn(k1+k2) min(|k1-k2|, |k1+k2|)/|k1-k2|."""
    k1, k2 = int(k1), int(k2)
    if k1 == k2 or k1 + k2 == 0:
        return 0.0
    return (
        2.0
        * np.pi
        * math.copysign(1.0, k1 + k2)
        * min(abs(k1 - k2), abs(k1 + k2))
        / abs(k1 - k2)
    )
