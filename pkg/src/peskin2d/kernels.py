"""Free-space Stokes kernels and the periodic log convolution.

The 2D Stokeslet and its stress kernel,

    G(x)   = (1/4pi) ( -log|x| I + x ox x / |x|^2 ),
    T_ijk(x) = -(1/pi) x_i x_j x_k / |x|^4,

appear in the boundary-integral representation of interface velocity.
`log_convolve` handles the logarithmically singular part of the single
layer in closed form on the Fourier side: the periodic kernel

    K(z) = -(1/4pi) log( 2 |sin(z/2)| )

(the part of G left after factoring |x| = (|x| / 2|sin(dtheta/2)|) *
2|sin(dtheta/2)|) acts diagonally with multiplier 1/(4|k|) and annihilates
the mean.  (The multiplier was frozen against adaptive quadrature of
int K(z) cos(kz) dz; see the test suite.)
"""

import warnings

import numpy as np

from .spectral import FourierCurve, synthesize


class SingularEvaluation(ValueError):
    """Kernel evaluated at (or unusably close to) its singularity."""


def _norms(x):
    return np.sqrt(np.sum(np.asarray(x, dtype=float) ** 2, axis=-1))


def stokeslet(x):
    """G(x) for x of shape (..., 2); returns (..., 2, 2)."""
    x = np.asarray(x, dtype=float)
    r = _norms(x)
    if np.any(r == 0.0):
        raise SingularEvaluation("stokeslet evaluated at zero separation")
    outer = x[..., :, None] * x[..., None, :]
    eye = np.eye(2)
    g = -np.log(r)[..., None, None] * eye + outer / (r**2)[..., None, None]
    return g / (4.0 * np.pi)


def stress_kernel(x):
    """T_ijk(x) for x of shape (..., 2); returns (..., 2, 2, 2)."""
    x = np.asarray(x, dtype=float)
    r = _norms(x)
    if np.any(r == 0.0):
        raise SingularEvaluation("stress kernel evaluated at zero separation")
    triple = (
        x[..., :, None, None] * x[..., None, :, None] * x[..., None, None, :]
    )
    return -(1.0 / np.pi) * triple / (r**4)[..., None, None, None]


def _coeffs_and_grid(f, grid_size):
    """Accept a FourierCurve-like object or a raw (2M+1, 2) array."""
    if hasattr(f, "coeffs") and hasattr(f, "grid_size"):
        return np.asarray(f.coeffs, dtype=complex), int(f.grid_size)
    arr = np.asarray(f, dtype=complex)
    if grid_size is None:
        raise ValueError("grid_size required when passing raw coefficients")
    return arr, int(grid_size)


def log_convolve(f, grid_size=None):
    """Convolve with K(z) = -(1/4pi) log(2 |sin(z/2)|); returns grid samples.

    Acts mode-by-mode as multiplication by 1/(4|k|) (k != 0); the mean is
    sent to zero.  Input may be a FourierCurve/ForceDensity or raw
    coefficients plus an explicit grid size.
    """
    coeffs, n = _coeffs_and_grid(f, grid_size)
    m = (coeffs.shape[0] - 1) // 2
    ks = np.arange(-m, m + 1)
    fac = np.zeros(len(ks))
    nz = ks != 0
    fac[nz] = 1.0 / (4.0 * np.abs(ks[nz]))
    out = FourierCurve(coeffs * fac[:, None], max(n, 2 * m + 1))
    return synthesize(out, n)


def eval_velocity_field(points, curve, force, clearance=0.1):
    """Velocity at off-interface points: u(x) = int G(x - X(eta)) F(eta) deta.

    Plain trapezoid quadrature on the force grid; accurate away from the
    interface, and it warns (but still evaluates) whenever a target point
    comes within `clearance` of the quadrature nodes, where the rule
    degrades.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    xs = synthesize(curve)
    fs = force.samples if hasattr(force, "samples") else np.asarray(force)
    if fs.shape[0] != xs.shape[0]:
        raise ValueError("force samples and curve grid disagree")
    n = xs.shape[0]
    diff = pts[:, None, :] - xs[None, :, :]  # (P, N, 2)
    dmin = float(np.min(_norms(diff)))
    if dmin == 0.0:
        raise SingularEvaluation("target point lies on a quadrature node")
    if dmin < clearance:
        warnings.warn(
            "target within %.3g of the interface (< clearance %.3g); "
            "quadrature error may be large" % (dmin, clearance),
            RuntimeWarning,
        )
    g = stokeslet(diff)  # (P, N, 2, 2)
    u = np.einsum("pnij,nj->pi", g, fs) * (2.0 * np.pi / n)
    return u if np.asarray(points).ndim > 1 else u[0]
