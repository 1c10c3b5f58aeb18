"""Interface force density for a closed elastic filament with two fluids.

With viscosity contrast a_mu = (mu2 - mu1)/(mu1 + mu2) and elastic
strength a_e = k0/(mu1 + mu2), the effective force density solves

    F = 2 a_mu S(F, X) + 2 a_e d^2X/dtheta^2,

where S is the double-layer-type operator

    S_i(F, X)(theta) = -dX^perp_j(theta) . pv int T_ijk(X(theta)-X(eta)) F_k(eta) deta,

with v^perp = (-v2, v1).  On the grid, S is a dense Nystrom matrix built
from B(theta, eta) = (1/pi) (dX . dXperp(theta)) (dX ox dX)/|dX|^4 with the
smooth diagonal limit

    B(theta, theta) = -(1/2pi) (X'' . X'^perp) (X' ox X') / |X'|^4,

so plain trapezoid quadrature is spectrally accurate (and exact on circles,
where the integrand is a trigonometric polynomial of degree two).
"""

from dataclasses import dataclass, replace

import numpy as np

from .spectral import (
    CurveDegenerateError,
    analyze,
    apply_multiplier,
    circle_decompose,
    synthesize,
    theta_grid,
)


class SolverError(RuntimeError):
    """The force system could not be solved to tolerance."""


@dataclass(frozen=True)
class PhysicsParams:
    """Viscosities of the two phases and elastic modulus of the interface."""

    mu1: float
    mu2: float
    k0: float

    def __post_init__(self):
        if self.mu1 <= 0 or self.mu2 <= 0:
            raise ValueError("viscosities must be positive")
        if self.k0 <= 0:
            raise ValueError("elastic modulus must be positive")

    @classmethod
    def from_contrast(cls, a_mu, a_e):
        """Build from (a_mu, a_e) with the normalization mu1 + mu2 = 1."""
        if not -1.0 < a_mu < 1.0:
            raise ValueError("a_mu must lie in (-1, 1)")
        if a_e <= 0:
            raise ValueError("a_e must be positive")
        return cls(mu1=0.5 * (1.0 - a_mu), mu2=0.5 * (1.0 + a_mu), k0=a_e)

    @property
    def a_mu(self):
        return (self.mu2 - self.mu1) / (self.mu1 + self.mu2)

    @property
    def a_e(self):
        return self.k0 / (self.mu1 + self.mu2)


@dataclass(frozen=True, eq=False)
class ForceDensity:
    """Force density on the interface, stored both ways.

    samples : (N, 2) values on the uniform grid
    coeffs  : (2M+1, 2) Fourier coefficients (band-limited projection)
    """

    samples: np.ndarray
    coeffs: np.ndarray

    @property
    def grid_size(self):
        return self.samples.shape[0]

    @property
    def max_mode(self):
        return (self.coeffs.shape[0] - 1) // 2

    @classmethod
    def from_samples(cls, samples, max_mode=None):
        s = np.asarray(samples, dtype=float)
        fc = analyze(s, max_mode)
        return cls(s, fc.coeffs)

    @classmethod
    def from_coeffs(cls, coeffs, grid_size):
        from .spectral import FourierCurve

        fc = FourierCurve(np.asarray(coeffs, dtype=complex), grid_size)
        return cls(synthesize(fc), fc.coeffs)

    def __add__(self, other):
        return ForceDensity(self.samples + other.samples, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return ForceDensity(self.samples - other.samples, self.coeffs - other.coeffs)

    def __mul__(self, t):
        return ForceDensity(self.samples * t, self.coeffs * t)

    __rmul__ = __mul__


def elastic_force(curve, params=None):
    """k0 * d^2 X / dtheta^2 (k0 = 1 when params is None)."""
    k0 = 1.0 if params is None else params.k0
    dd = apply_multiplier(apply_multiplier(curve, "derivative"), "derivative")
    return ForceDensity(k0 * synthesize(dd), k0 * dd.coeffs)


def _curve_frames(curve):
    """Grid samples of X, X', X'' plus X'^perp (perp = CCW rotation)."""
    xp = apply_multiplier(curve, "derivative")
    xpp = apply_multiplier(xp, "derivative")
    xs = synthesize(curve)
    ds = synthesize(xp)
    dds = synthesize(xpp)
    perp = np.stack([-ds[:, 1], ds[:, 0]], axis=1)
    return xs, ds, dds, perp


def _grid_arc_chord(xs, n):
    """Cheap arc-chord estimate straight from the pairwise chord table."""
    th = theta_grid(n)
    dth = np.abs(np.mod(th[:, None] - th[None, :] + np.pi, 2 * np.pi) - np.pi)
    diff = xs[:, None, :] - xs[None, :, :]
    chord = np.sqrt(np.sum(diff**2, axis=2))
    off = ~np.eye(n, dtype=bool)
    return float(np.min(chord[off] / dth[off])), diff, chord


def s_operator_matrix(curve, *, arc_chord_floor=1e-8):
    """Dense (2N, 2N) matrix realizing F |-> S(F, X) including quadrature weight.

    Raises CurveDegenerateError if the grid arc-chord ratio drops below the
    floor (distinct nodes coinciding in the plane).
    """
    xs, ds, dds, perp = _curve_frames(curve)
    n = xs.shape[0]
    ratio, diff, chord = _grid_arc_chord(xs, n)
    if not (ratio > arc_chord_floor):
        raise CurveDegenerateError(
            "grid arc-chord ratio %.3e below floor %.3e" % (ratio, arc_chord_floor)
        )
    # off-diagonal blocks: (1/pi) (dX . perp_i) dX ox dX / |dX|^4
    with np.errstate(divide="ignore", invalid="ignore"):
        dot = np.einsum("tej,tj->te", diff, perp)
        scale = dot / (np.pi * chord**4)
        blocks = scale[..., None, None] * (
            diff[..., :, None] * diff[..., None, :]
        )
    # diagonal limit: -(1/2pi) (X''. perp) X' ox X' / |X'|^4
    speed2 = np.sum(ds**2, axis=1)
    ddot = np.einsum("tj,tj->t", dds, perp)
    dscale = -ddot / (2.0 * np.pi * speed2**2)
    dblocks = dscale[:, None, None] * (ds[:, :, None] * ds[:, None, :])
    idx = np.arange(n)
    blocks[idx, idx] = dblocks
    mat = blocks.transpose(0, 2, 1, 3).reshape(2 * n, 2 * n)
    return (2.0 * np.pi / n) * mat


def apply_S(curve, force, *, arc_chord_floor=1e-8):
    """Evaluate S(F, X) on the grid, returning a ForceDensity."""
    mat = s_operator_matrix(curve, arc_chord_floor=arc_chord_floor)
    fs = force.samples if hasattr(force, "samples") else np.asarray(force)
    out = (mat @ fs.reshape(-1)).reshape(-1, 2)
    return ForceDensity.from_samples(out, _band_of(curve, force))


def _band_of(curve, force):
    m = getattr(force, "max_mode", None)
    return curve.max_mode if m is None else max(curve.max_mode, m)


def solve_force(curve, params, method="direct", tol=1e-12, max_iter=500,
                arc_chord_floor=1e-8):
    """Solve (I - 2 a_mu S) F = 2 a_e X'' for the force density.

    method='direct' factors the dense system; method='picard' iterates
    F <- rhs + 2 a_mu S F, which converges for moderate |a_mu| and serves
    as an independent cross-check of the direct path.
    """
    a_mu, a_e = params.a_mu, params.a_e
    rhs = 2.0 * a_e * synthesize(
        apply_multiplier(apply_multiplier(curve, "derivative"), "derivative")
    )
    n = rhs.shape[0]
    b = rhs.reshape(-1)
    if a_mu == 0.0:
        f = b.copy()
    else:
        mat = s_operator_matrix(curve, arc_chord_floor=arc_chord_floor)
        system = np.eye(2 * n) - 2.0 * a_mu * mat
        if method == "direct":
            f = np.linalg.solve(system, b)
        elif method == "picard":
            f = b.copy()
            for _ in range(max_iter):
                nxt = b + 2.0 * a_mu * (mat @ f)
                if np.max(np.abs(nxt - f)) <= tol * max(1.0, np.max(np.abs(nxt))):
                    f = nxt
                    break
                f = nxt
            else:
                raise SolverError("picard iteration did not converge in %d steps"
                                  % max_iter)
        else:
            raise ValueError("method must be 'direct' or 'picard'")
        resid = np.max(np.abs(system @ f - b)) / max(1.0, np.max(np.abs(b)))
        if not (resid <= 1e-10):
            raise SolverError(
                "force system residual %.3e (condition number %.3e)"
                % (resid, np.linalg.cond(system))
            )
    return ForceDensity.from_samples(f.reshape(-1, 2), curve.max_mode)


def force_zero_linear(curve, params):
    """Equilibrium and linear parts of the force about the circle family.

    F0 acts on the circle part alone: (2 a_e / (1 - a_mu)) X_c''.
    FL acts on the deviation Z:  -2 a_e k^2 Z_k - (2 a_e a_mu/(1-a_mu)) (ik) Rinv Z_k
    with Rinv = [[0, 1], [-1, 0]]; the multiplier is the same for every
    member of the circle family, so it needs no reference circle.
    """
    a_mu, a_e = params.a_mu, params.a_e
    circle, dev = circle_decompose(curve)
    ks = curve.ks

    xc = circle.as_curve(curve.max_mode, curve.grid_size)
    f0_coeffs = (2.0 * a_e / (1.0 - a_mu)) * (-(ks**2))[:, None] * xc.coeffs

    z = dev.coeffs
    rinv_z = np.stack([z[:, 1], -z[:, 0]], axis=1)
    fl_coeffs = (
        -2.0 * a_e * (ks**2)[:, None] * z
        - (2.0 * a_e * a_mu / (1.0 - a_mu)) * (1j * ks)[:, None] * rinv_z
    )
    n = curve.grid_size
    f0 = ForceDensity.from_coeffs(f0_coeffs, n)
    fl = ForceDensity.from_coeffs(fl_coeffs, n)
    return f0, fl


def force_split_residual(force, f0, fl):
    """Quadratic remainder F - F0 - FL as a ForceDensity."""
    return force - f0 - fl
