"""Fourier-side representation of closed planar curves.

Conventions used throughout the package
---------------------------------------

A curve X : [-pi, pi) -> R^2 is stored by its Fourier coefficients

    c_k = (1/2pi) int_{-pi}^{pi} X(theta) e^{-ik theta} dtheta,      |k| <= M,

as a complex array of shape (2M+1, 2); row ``j`` holds mode ``k = j - M``.
Real curves satisfy c_{-k} = conj(c_k).  Samples live on the uniform grid

    theta_j = -pi + 2*pi*j/N,   j = 0..N-1,

so the DFT picks up an alternating phase: with ``fhat = fft(samples)/N``
computed on that grid, ``c_k = (-1)^k * fhat[k mod N]``.

The diagonalizing frame for the linearized dynamics ("Y variables") is

    y_k = P(k)^{-1} c_k,     P(k) = (1/sqrt2) [[-i sgn k, 1], [1, -i sgn k]],

which is unitary for k != 0, and P(0) = (1/sqrt2)[[0,1],[1,0]].  In this
frame the linear operator L(k) = [[|k|, -i sgn k], [i sgn k, |k|]] becomes
diag(|k|+1, |k|-1), and the steady circles occupy exactly the zero mode
plus the second component of mode one.
"""

import math
from dataclasses import dataclass, field

import numpy as np

_SQRT2 = math.sqrt(2.0)


class AliasingError(ValueError):
    """Grid too coarse for the requested band-limit."""


class CurveDegenerateError(RuntimeError):
    """Curve failed a geometric sanity check (self-touching or collapsed)."""


def theta_grid(n):
    """Uniform grid theta_j = -pi + 2*pi*j/n, j=0..n-1."""
    return -np.pi + 2.0 * np.pi * np.arange(n) / n


def _alternating(ks):
    # (-1)^k as a float array; parity of |k| equals parity of k.
    return np.where(np.asarray(ks) % 2 == 0, 1.0, -1.0)


def hermitize(coeffs):
    """Project onto the conjugate-symmetric subspace: c_{-k} <- avg."""
    c = np.asarray(coeffs, dtype=complex)
    return 0.5 * (c + np.conj(c[::-1]))


@dataclass(frozen=True, eq=False)
class FourierCurve:
    """Band-limited closed curve.

    Parameters
    ----------
    coeffs : (2M+1, 2) complex array, mode k in row k+M.
    grid_size : number of physical grid points carried around for
        quadrature; must satisfy grid_size >= 2M+1 (strict minimum to
        avoid aliasing the band), with grid_size = 4M the default used
        by the solvers for anti-aliasing headroom on quadratic terms.
    """

    coeffs: np.ndarray
    grid_size: int = 0  # 0 means "pick the 4M default"

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 2 or c.shape[1] != 2 or c.shape[0] % 2 == 0:
            raise ValueError("coeffs must have shape (2M+1, 2)")
        object.__setattr__(self, "coeffs", c)
        m = (c.shape[0] - 1) // 2
        n = self.grid_size if self.grid_size else max(4 * m, 8)
        if n < 2 * m + 1:
            raise AliasingError(
                "grid_size %d cannot resolve modes up to %d (need >= %d)"
                % (n, m, 2 * m + 1)
            )
        object.__setattr__(self, "grid_size", int(n))
        # reject wildly non-real data early; tiny asymmetry is tolerated
        # and cleaned up lazily by hermitize() in the transforms.
        asym = np.max(np.abs(c - np.conj(c[::-1])))
        scale = max(1.0, np.max(np.abs(c)))
        if asym > 1e-8 * scale:
            raise ValueError(
                "coefficients are not conjugate-symmetric (asymmetry %.3e); "
                "a real curve needs c_{-k} = conj(c_k)" % asym
            )

    @property
    def max_mode(self):
        return (self.coeffs.shape[0] - 1) // 2

    @property
    def ks(self):
        m = self.max_mode
        return np.arange(-m, m + 1)

    def mode(self, k):
        """Coefficient 2-vector of mode k (returns a copy)."""
        m = self.max_mode
        if abs(k) > m:
            return np.zeros(2, dtype=complex)
        return self.coeffs[k + m].copy()

    def with_coeffs(self, coeffs):
        return FourierCurve(coeffs, self.grid_size)

    def pad_to(self, max_mode):
        """Zero-pad (or error on truncation) to a larger band-limit."""
        m = self.max_mode
        if max_mode < m:
            raise ValueError("use truncation via apply_multiplier cutoff")
        out = np.zeros((2 * max_mode + 1, 2), dtype=complex)
        out[max_mode - m : max_mode + m + 1] = self.coeffs
        return FourierCurve(out, max(self.grid_size, 2 * max_mode + 1))

    # small amount of arithmetic sugar; used heavily by the stepper/tests
    def __add__(self, other):
        a, b = _common_band(self, other)
        return FourierCurve(a.coeffs + b.coeffs, max(a.grid_size, b.grid_size))

    def __sub__(self, other):
        a, b = _common_band(self, other)
        return FourierCurve(a.coeffs - b.coeffs, max(a.grid_size, b.grid_size))

    def __mul__(self, scalar):
        return FourierCurve(self.coeffs * float(scalar), self.grid_size)

    __rmul__ = __mul__


def _common_band(a, b):
    m = max(a.max_mode, b.max_mode)
    return a.pad_to(m), b.pad_to(m)


def synthesize(curve, grid_size=None):
    """Evaluate the curve on its uniform grid; returns (N, 2) real samples."""
    n = int(grid_size) if grid_size else curve.grid_size
    m = curve.max_mode
    if n < 2 * m + 1:
        raise AliasingError("requested grid %d below band minimum %d" % (n, 2 * m + 1))
    spectrum = np.zeros((n, 2), dtype=complex)
    ks = curve.ks
    phased = curve.coeffs * _alternating(ks)[:, None]
    np.add.at(spectrum, np.mod(ks, n), phased)
    samples = n * np.fft.ifft(spectrum, axis=0)
    return np.ascontiguousarray(samples.real)


def analyze(samples, max_mode=None):
    """Project grid samples onto modes |k| <= max_mode.

    Default max_mode is (N-1)//2, the largest unaliased band (the Nyquist
    bin of even grids is dropped: it cannot be assigned a sign of k).
    """
    s = np.asarray(samples, dtype=float)
    if s.ndim != 2 or s.shape[1] != 2:
        raise ValueError("samples must have shape (N, 2)")
    n = s.shape[0]
    limit = (n - 1) // 2
    m = limit if max_mode is None else int(max_mode)
    if m > limit:
        raise AliasingError("cannot extract modes up to %d from %d samples" % (m, n))
    fhat = np.fft.fft(s, axis=0) / n
    ks = np.arange(-m, m + 1)
    coeffs = fhat[np.mod(ks, n)] * _alternating(ks)[:, None]
    return FourierCurve(hermitize(coeffs), n)


def grid_transform(direction, data, *, max_mode=None, grid_size=None):
    """Dispatch helper: 'analyze' samples->curve, 'synthesize' curve->samples."""
    if direction == "analyze":
        return analyze(data, max_mode)
    if direction == "synthesize":
        return synthesize(data, grid_size)
    raise ValueError("direction must be 'analyze' or 'synthesize'")


def evaluate(curve, thetas):
    """Pointwise evaluation at arbitrary angles (not restricted to the grid)."""
    th = np.atleast_1d(np.asarray(thetas, dtype=float))
    ph = np.exp(1j * np.outer(th, curve.ks))  # (T, 2M+1)
    vals = ph @ curve.coeffs
    return vals.real


# ---------------------------------------------------------------------------
# Fourier multipliers


def apply_multiplier(curve, symbol, cutoff=None):
    """Apply a diagonal Fourier multiplier.

    symbol : one of
        'derivative'  ->  ik
        'hilbert'     ->  -i sgn(k)        (zero mode annihilated)
        'lambda'      ->  |k|              ( = Hilbert o derivative )
        'cutoff'      ->  1_{|k| <= cutoff}
    """
    ks = curve.ks
    if symbol == "derivative":
        fac = 1j * ks
    elif symbol == "hilbert":
        fac = -1j * np.sign(ks)
    elif symbol == "lambda":
        fac = np.abs(ks).astype(float)
    elif symbol == "cutoff":
        if cutoff is None:
            raise ValueError("cutoff symbol needs a cutoff value")
        fac = (np.abs(ks) <= cutoff).astype(float)
    else:
        raise ValueError("unknown multiplier symbol %r" % (symbol,))
    return curve.with_coeffs(curve.coeffs * fac[:, None])


@dataclass(frozen=True)
class NormWeight:
    """Weight e^{nu |k|} |k|^s with nu = nu_max * t / (1+t)."""

    s: float
    nu_max: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        if self.nu_max < 0 or self.t < 0:
            raise ValueError("nu_max and t must be nonnegative")

    @property
    def nu(self):
        if math.isinf(self.t):
            return self.nu_max
        return self.nu_max * self.t / (1.0 + self.t)


def weighted_norm(curve, w, homogeneous=True):
    """l^1-type weighted norm: sum_k e^{nu|k|} |k|^s |c_k|.

    |c_k| is the Euclidean modulus of the coefficient pair.  Homogeneous
    norms skip k = 0; the inhomogeneous variant adds |c_0| with weight 1.
    """
    ks = curve.ks
    mags = np.sqrt(np.sum(np.abs(curve.coeffs) ** 2, axis=1))
    absk = np.abs(ks).astype(float)
    nz = ks != 0
    total = float(
        np.sum(np.exp(w.nu * absk[nz]) * absk[nz] ** w.s * mags[nz])
    )
    if not homogeneous:
        total += float(mags[~nz][0]) if np.any(~nz) else 0.0
    return total


def fnorm(curve, s=1.0, nu=0.0, homogeneous=True):
    """Shorthand for weighted_norm with an explicit (frozen) nu."""
    ks = curve.ks
    mags = np.sqrt(np.sum(np.abs(curve.coeffs) ** 2, axis=1))
    absk = np.abs(ks).astype(float)
    nz = ks != 0
    total = float(np.sum(np.exp(nu * absk[nz]) * absk[nz] ** s * mags[nz]))
    if not homogeneous and np.any(~nz):
        total += float(mags[~nz][0])
    return total


# ---------------------------------------------------------------------------
# Linear symbols and the diagonalizing frame


def l_matrix(k):
    """L(k) = [[|k|, -i sgn k], [i sgn k, |k|]]; L(0) = 0."""
    s = np.sign(k)
    a = abs(k)
    return np.array([[a, -1j * s], [1j * s, a]], dtype=complex)


def p_matrix(k):
    if k == 0:
        return np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex) / _SQRT2
    s = np.sign(k)
    return np.array([[-1j * s, 1.0], [1.0, -1j * s]], dtype=complex) / _SQRT2


def p_inverse(k):
    if k == 0:
        return np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex) * _SQRT2
    # unitary for k != 0, so the inverse is the conjugate transpose;
    # P is symmetric, hence P^{-1} = conj(P).
    return np.conj(p_matrix(k))


def d_matrix(k):
    return np.array([[abs(k) + 1.0, 0.0], [0.0, abs(k) - 1.0]], dtype=complex)


@dataclass(frozen=True)
class LinearSymbol:
    """The mode-k linear data: L = P D P^{-1} (k >= 1); L(0) = 0."""

    k: int
    L: np.ndarray = field(repr=False)
    P: np.ndarray = field(repr=False)
    P_inv: np.ndarray = field(repr=False)
    D: np.ndarray = field(repr=False)

    @classmethod
    def for_mode(cls, k):
        return cls(int(k), l_matrix(k), p_matrix(k), p_inverse(k), d_matrix(k))


def _frame_tensor(ks, inverse):
    """Stack of P(k) or P(k)^{-1} over a vector of modes, shape (K, 2, 2)."""
    out = np.empty((len(ks), 2, 2), dtype=complex)
    for i, k in enumerate(ks):
        out[i] = p_inverse(k) if inverse else p_matrix(k)
    return out


def to_Y(curve):
    """Change to the diagonalizing frame: y_k = P(k)^{-1} c_k, all |k| <= M.

    The result is returned as a FourierCurve-shaped container (the frame
    maps conjugate-symmetric data to conjugate-symmetric data because
    P(-k) = conj(P(k))).
    """
    ys = np.einsum("kij,kj->ki", _frame_tensor(curve.ks, True), curve.coeffs)
    return curve.with_coeffs(hermitize(ys))


def from_Y(ycurve):
    """Inverse of to_Y: c_k = P(k) y_k."""
    cs = np.einsum("kij,kj->ki", _frame_tensor(ycurve.ks, False), ycurve.coeffs)
    return ycurve.with_coeffs(hermitize(cs))


# ---------------------------------------------------------------------------
# Circle bookkeeping


@dataclass(frozen=True)
class CirclePart:
    """Steady-circle content of a curve.

    The circle family is  a*(cos t, sin t) + b*(-sin t, cos t) + (c, d),
    i.e. (a, b) rotate/scale the radial and tangential unit circles and
    (c, d) translate.  Radius R = hypot(a, b).
    """

    a: float
    b: float
    c: float
    d: float

    @property
    def radius(self):
        return math.hypot(self.a, self.b)

    def as_curve(self, max_mode=1, grid_size=0):
        m = max(1, int(max_mode))
        coeffs = np.zeros((2 * m + 1, 2), dtype=complex)
        coeffs[m] = (self.c, self.d)
        half = 0.5 * (self.a + 1j * self.b)
        coeffs[m + 1] = (half, -1j * half)
        coeffs[m - 1] = np.conj(coeffs[m + 1])
        return FourierCurve(coeffs, grid_size)


def circle_curve(a=1.0, b=0.0, c=0.0, d=0.0, max_mode=1, grid_size=0):
    return CirclePart(a, b, c, d).as_curve(max_mode, grid_size)


def circle_decompose(curve):
    """Split into (CirclePart, deviation curve).

    In the Y frame the circle occupies y(0) = sqrt2*(d, c) and the second
    component of y(1); zeroing those (and the mirror at k = -1) leaves the
    deviation, which is returned in the original X frame.
    """
    m = curve.max_mode
    y = to_Y(curve)
    yc = y.coeffs.copy()
    y0 = yc[m]
    c, d = float(y0[1].real) / _SQRT2, float(y0[0].real) / _SQRT2
    y1 = yc[m + 1]
    a = _SQRT2 * float(y1[1].real)
    b = _SQRT2 * float(y1[1].imag)
    yc[m] = 0.0
    yc[m + 1, 1] = 0.0
    if m >= 1:
        yc[m - 1, 1] = 0.0
    deviation = from_Y(y.with_coeffs(yc))
    return CirclePart(a, b, c, d), deviation


# ---------------------------------------------------------------------------
# Geometric diagnostics


def enclosed_area(curve):
    """Signed area from the coefficients:  2*pi*sum_k k Im[c1(k) conj(c2(k))]."""
    ks = curve.ks
    c1 = curve.coeffs[:, 0]
    c2 = curve.coeffs[:, 1]
    return float(2.0 * np.pi * np.sum(ks * np.imag(c1 * np.conj(c2))))


def radius_from_constraint(curve):
    """Radius the area-pi constraint implies from the deviation alone.

    R^2 = 1 - 2*sum_{k>=1} k (|y2(k)|^2 - |y1(k)|^2), evaluated on the
    deviation part.  Returns NaN if the right side is negative (the
    curve is far from the area-pi family and the formula loses meaning).
    """
    m = curve.max_mode
    _, dev = circle_decompose(curve)
    y = to_Y(dev).coeffs
    ks = np.arange(1, m + 1)
    tail = y[m + 1 :]
    ssum = float(np.sum(ks * (np.abs(tail[:, 1]) ** 2 - np.abs(tail[:, 0]) ** 2)))
    r2 = 1.0 - 2.0 * ssum
    return math.sqrt(r2) if r2 > 0.0 else float("nan")


def _torus_dist(dth):
    return np.abs(np.mod(dth + np.pi, 2.0 * np.pi) - np.pi)


def _chord_ratio(curve, s, d):
    """|X(s + d/2) - X(s - d/2)| / d for arrays s, d (d in (0, pi])."""
    p = evaluate(curve, np.atleast_1d(s + 0.5 * d))
    q = evaluate(curve, np.atleast_1d(s - 0.5 * d))
    chord = np.sqrt(np.sum((p - q) ** 2, axis=1))
    return chord / d


def arc_chord_constant(curve, refine=True):
    """inf over pairs of |X(t) - X(s)| / d(t, s), d = distance on the circle.

    Sampled on a 4N x 4N pair grid (which contains the antipodal separation
    d = pi exactly), then optionally polished with one guarded Newton step
    in (midpoint, separation) coordinates.
    """
    n = 4 * curve.grid_size
    th = theta_grid(n)
    pts = evaluate(curve, th)
    diff = pts[:, None, :] - pts[None, :, :]
    chord = np.sqrt(np.sum(diff**2, axis=2))
    dth = _torus_dist(th[:, None] - th[None, :])
    iu = np.triu_indices(n, k=1)
    ratios = chord[iu] / dth[iu]
    j = int(np.argmin(ratios))
    best = float(ratios[j])
    if not (best > 0.0) and not refine:
        return best
    if refine:
        i0, j0 = iu[0][j], iu[1][j]
        raw = th[i0] - th[j0]
        d0 = float(_torus_dist(raw))
        # midpoint consistent with the wrapped separation
        s0 = float(th[j0] + 0.5 * (np.mod(raw + np.pi, 2 * np.pi) - np.pi))
        h = (2.0 * np.pi / n) / 8.0
        s, d = s0, d0
        for _ in range(2):  # a couple of damped Newton steps suffice
            grid_s = np.array([s - h, s, s + h])
            grid_d = np.array([d - h, d, d + h])
            ss, dd = np.meshgrid(grid_s, grid_d, indexing="ij")
            vals = _chord_ratio(curve, ss.ravel(), np.clip(dd.ravel(), 1e-9, np.pi))
            f = vals.reshape(3, 3)
            gs = (f[2, 1] - f[0, 1]) / (2 * h)
            gd = (f[1, 2] - f[1, 0]) / (2 * h)
            hss = (f[2, 1] - 2 * f[1, 1] + f[0, 1]) / h**2
            hdd = (f[1, 2] - 2 * f[1, 1] + f[1, 0]) / h**2
            hsd = (f[2, 2] - f[2, 0] - f[0, 2] + f[0, 0]) / (4 * h**2)
            det = hss * hdd - hsd**2
            if det <= 0 or hss <= 0:
                break  # not locally convex here; keep the grid value
            step_s = (hdd * gs - hsd * gd) / det
            step_d = (hss * gd - hsd * gs) / det
            if abs(step_s) > 2 * np.pi / n or abs(step_d) > 2 * np.pi / n:
                break
            s, d = s - step_s, float(np.clip(d - step_d, 1e-9, np.pi))
        cand = float(_chord_ratio(curve, np.array([s]), np.array([d]))[0])
        if np.isfinite(cand):
            best = min(best, cand)
    return best


def geometry_diagnostics(curve, *, arc_chord_floor=0.0, refine=True):
    """Area, arc-chord constant, and constraint radius in one dict.

    Raises CurveDegenerateError if the arc-chord constant is not positive
    or falls below `arc_chord_floor`.
    """
    ac = arc_chord_constant(curve, refine=refine)
    if not (ac > 0.0) or ac < arc_chord_floor:
        raise CurveDegenerateError(
            "arc-chord constant %.3e below floor %.3e" % (ac, arc_chord_floor)
        )
    return {
        "area": enclosed_area(curve),
        "arc_chord": ac,
        "radius_from_constraint": radius_from_constraint(curve),
    }
