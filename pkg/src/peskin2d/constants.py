"""Explicit constants chain, smallness threshold, and energy certificates.

Every bound in the nonlinear stability argument is tracked through an
explicit chain of constants C1..C17, D1..D5, each a nondecreasing function
of the analytic deviation norm x = ||X||_{F^{1,1}_nu} that equals 1 at
x = 0 (with contrast a_mu = 0 and analyticity weight nu_m = 0).  The chain
culminates in the dissipation-vs-nonlinearity margin

    script_C = 1 - 4 nu_m / a_e - 676 sqrt2 D5(x) x / (1 - a_mu),

which must be positive for the energy balance

    x(t) + (a_e/4) script_C  int_0^t ||X||_{F^{2,1}_nu} dtau  <=  x(0)

and the decay  x(t) <= x(0) exp(-(a_e/4) script_C t)  to hold.  The
medium-size threshold k(a_mu) is the positive root of the margin at
nu_m = 0; below it the certificate applies.
"""

import math
from dataclasses import dataclass, field

import numpy as np

_SQRT2 = math.sqrt(2.0)
_MARGIN_SLOPE = 676.0 * _SQRT2  # coefficient of D5(x) x/(1-a_mu) in the margin


class OutOfRegimeError(ValueError):
    """The constants chain left its domain (a denominator hit zero)."""

    def __init__(self, constant_name, message):
        super().__init__(message)
        self.constant_name = constant_name


@dataclass(frozen=True)
class ConstantsReport:
    """The full chain at one evaluation point."""

    x: float
    a_mu: float
    nu_m: float
    C: dict = field(repr=False)   # {1: C1, ..., 17: C17}
    D: dict = field(repr=False)   # {1: D1, ..., 5: D5}
    script_C: float | None        # margin; None when nu_m > 0 and a_e unknown
    tilde_C: float | None         # center-drift constant; None if margin <= 0

    def as_flat_dict(self):
        out = {"x": self.x, "a_mu": self.a_mu, "nu_m": self.nu_m}
        out.update({"C%d" % i: v for i, v in sorted(self.C.items())})
        out.update({"D%d" % i: v for i, v in sorted(self.D.items())})
        out["script_C"] = self.script_C
        out["tilde_C"] = self.tilde_C
        return out


def constants(x, a_mu=0.0, nu_m=0.0, a_e=None):
    """Evaluate C1..C17, D1..D5 and the margin at deviation norm x.

    Raises OutOfRegimeError (naming the first failing constant) when x is
    too large for the chain: C1 needs x < sqrt2, C2 a smallness condition,
    and C17 another one that takes over near |a_mu| -> 1.
    """
    x = float(x)
    a_mu = float(a_mu)
    nu_m = float(nu_m)
    if x < 0:
        raise ValueError("norm x must be nonnegative")
    if not -1.0 < a_mu < 1.0:
        raise ValueError("a_mu must lie in (-1, 1)")
    if nu_m < 0:
        raise ValueError("nu_m must be nonnegative")

    e1 = math.exp(nu_m)
    e2 = math.exp(2 * nu_m)
    e3 = math.exp(3 * nu_m)
    e4 = math.exp(4 * nu_m)
    e5 = math.exp(5 * nu_m)
    am = abs(a_mu)
    mu_ratio = am * (1 + am) / ((1 - a_mu) * (1 + a_mu))

    den1 = 1.0 - 0.5 * x * x
    if den1 <= 0:
        raise OutOfRegimeError("C1", "x = %.6g >= sqrt(2): C1 undefined" % x)
    c1 = 1.0 / math.sqrt(den1)
    c8 = math.sqrt(1.0 + 0.5 * x * x)

    # the recurring bracket 1 + (1/2sqrt2) e^{-nu_m} C1 x
    q = 1.0 + (1.0 / (2.0 * _SQRT2)) / e1 * c1 * x
    den2 = 1.0 - 2.0 * _SQRT2 * e1 * c1 * x * q
    if den2 <= 0:
        raise OutOfRegimeError("C2", "x = %.6g too large: C2 denominator <= 0" % x)
    c2 = q / den2
    c3 = c2 / q
    c4 = (2.0 / 9.0) * (4.0 * e2 * c2 + 0.5 * c3)
    c5 = 1.0 + 2.0 * _SQRT2 * e1 * c1 * x
    c6 = (1.0 / 9.0) * (1.0 + 8.0 * e2 * q * c2)
    # C7 uses 1/C8 (not C1) inside its bracket
    q8 = 1.0 + (1.0 / (2.0 * _SQRT2)) / (c8 * e1) * x
    c7 = (16.0 / 17.0) * e2 * c2 * c3 * (
        1.0 - (_SQRT2 / c8) * e1 * x * q8
    ) + c3 * c3 / 17.0
    c9 = (2.0 / 147.0) * (
        4.5 * c4
        + c5
        + 16.0 * e2
        + 18.0 * e2 * c6
        + 34.0 * e2 * c7
        + (_SQRT2 + 18.0 * _SQRT2 * c6 + 34.0 * _SQRT2 * c7) * e1 * c1 * x
        + (9.0 * c6 + 17.0 * c7) * (c1 * x) ** 2
    )
    c10 = (4.0 / 9.0) * (
        0.25 + 2.0 * e2 + 11.0 * _SQRT2 * e3 * c1 * x + 73.5 * c9 * (c1 * x) ** 2
    )
    c11 = (1.0 / (11.0 * _SQRT2)) * (11.0 * _SQRT2 * e3 + 73.5 * c9 * c1 * x)
    c12 = (1.0 / 11.0) * (11.0 * e2 + 4.0 * _SQRT2 * e1 * c1 * x + (c1 * x) ** 2)
    c13 = 0.5 * (2.0 * e4 + 6.0 * _SQRT2 * e3 * c1 * x + 11.0 * c12 * (c1 * x) ** 2)
    c14 = (1.0 / 104.0) * (
        72.0 * c6
        + 32.0 * e2
        + 144.0 * _SQRT2 * e1 * c6 * c1 * x
        + 324.0 * c6 * c6 * (c1 * x) ** 2
    )
    c15 = (1.0 / 222.0) * (
        104.0 * c13 * c14
        + 8.0 * _SQRT2 * e1 * (6.0 * _SQRT2 * e3 + 11.0 * c12 * c1 * x)
        + 22.0 * c12
    )
    c16 = (1.0 / (28.0 * _SQRT2)) * (28.0 * _SQRT2 * e5 + 222.0 * c15 * c1 * x)
    den17 = 1.0 - 56.0 * _SQRT2 * mu_ratio * c16 * c1 * x
    if den17 <= 0:
        raise OutOfRegimeError(
            "C17", "x = %.6g too large at a_mu = %.3g: C17 denominator <= 0"
            % (x, a_mu)
        )
    c17 = 1.0 / den17

    d1 = c11 * c1
    d2 = c9 * c1 * c1
    d3 = c10
    d4 = (1.0 / 1000.0) * c1 * c17 * (
        112.0 * (1.0 - a_mu + am) * c16 + 888.0 * e1 * c8 * c1 * c15
    )
    d5 = (1.0 / 169.0) * (
        22.0 * (1.0 - a_mu + am) * d1
        + 147.0 * e1 * d2 * c8
        + 2250.0 * mu_ratio * d3 * d4
    )

    nonlinear_term = _MARGIN_SLOPE * d5 * x / (1.0 - a_mu)
    if nu_m == 0.0:
        script_c = 1.0 - nonlinear_term
    elif a_e is not None:
        if a_e <= 0:
            raise ValueError("a_e must be positive")
        script_c = 1.0 - 4.0 * nu_m / float(a_e) - nonlinear_term
    else:
        script_c = None

    tilde_c = None
    if script_c is not None and script_c > 0:
        # center-drift constant, with D5 standing in for its F^{0,1} analogue
        tilde_c = d5 / ((1.0 - a_mu) * script_c)

    cs = {i + 1: v for i, v in enumerate(
        [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13, c14, c15, c16, c17]
    )}
    ds = {i + 1: v for i, v in enumerate([d1, d2, d3, d4, d5])}
    return ConstantsReport(x, a_mu, nu_m, cs, ds, script_c, tilde_c)


def margin(x, a_mu, nu_m=0.0, a_e=None):
    """1 - 4 nu_m/a_e - 676 sqrt2 D5(x) x/(1-a_mu); the certificate needs > 0."""
    return constants(x, a_mu, nu_m, a_e).script_C


def threshold_lower_bound(a_mu):
    """Closed-form lower bound (1-a_mu)/(676 sqrt2 D5(0)) for k(a_mu)."""
    am = abs(float(a_mu))
    one = 1.0 - float(a_mu)
    inner = 112.0 * (1.0 + am / one) + 888.0 / one
    total = (
        588.0 * _SQRT2 / one
        + 88.0 * _SQRT2 * (1.0 + am / one)
        + (9.0 * _SQRT2 * am * (1.0 + am) / (one * (1.0 + float(a_mu)))) * inner
    )
    return 1.0 / total


def k_threshold(a_mu, tol=1e-15, max_iter=200):
    """Root of the margin: largest x with 1 - 676 sqrt2 D5(x) x/(1-a_mu) > 0.

    Returns a dict with the root `k`, the closed-form `lower_bound`, and
    the `residual` |margin(k)|.  The bracket is found by geometric scan;
    points beyond the chain's domain count as "margin negative", which is
    safe because the true margin is already negative before any chain
    denominator vanishes (the chain blows up *through* the margin's root).
    """
    a_mu = float(a_mu)

    def f(x):
        try:
            return margin(x, a_mu, 0.0)
        except OutOfRegimeError:
            return -float("inf")

    lo = 0.0
    hi = threshold_lower_bound(a_mu)  # margin still positive here (proved bound)
    if f(hi) <= 0.0:  # paranoia: fall back to a tiny start
        hi = 1e-8
    while f(hi) > 0.0:
        lo = hi
        hi *= 1.3
        if hi > 2.0:
            raise RuntimeError("margin never became negative below x = 2")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:  # absolute width; roots live in (1e-5, 1e-2)
            break
    root = 0.5 * (lo + hi)
    res = f(root)
    return {
        "k": root,
        "lower_bound": threshold_lower_bound(a_mu),
        "residual": abs(res) if np.isfinite(res) else float("inf"),
    }


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of checking a trajectory against the a-priori estimates."""

    script_C: float
    x0: float
    balance_pass: bool
    balance_margin: float   # max over time of LHS/x0 - 1 (negative = slack)
    decay_pass: bool
    decay_margin: float     # max over time of norm/(x0 e^{-rt}) - 1
    center_pass: bool       # advisory (uses the D5 stand-in constant)
    center_margin: float
    ok: bool

    def lines(self):
        def verdict(b):
            return "PASS" if b else "FAIL"

        return [
            "margin script_C = %.6f  (x0 = %.6g)" % (self.script_C, self.x0),
            "balance  %s  (worst relative excess %+.3e)"
            % (verdict(self.balance_pass), self.balance_margin),
            "decay    %s  (worst relative excess %+.3e)"
            % (verdict(self.decay_pass), self.decay_margin),
            "center   %s  (advisory; worst excess %+.3e)"
            % (verdict(self.center_pass), self.center_margin),
        ]


def energy_certificate(record, params, x0=None, nu_m=0.0, slack=0.01):
    """Check the balance inequality, the decay bound, and the center bound.

    `record` needs arrays t, norm_f11, norm_f21, center_x, center_y (a
    TrajectoryRecord works).  `x0` defaults to the first recorded norm.
    The balance integral is a trapezoid sum over the recorded rows.
    The center check is advisory: its constant borrows D5 in place of the
    (unexhibited) zero-mode analogue, so it does not affect `ok`.
    """
    t = np.asarray(record.t, dtype=float)
    n11 = np.asarray(record.norm_f11, dtype=float)
    n21 = np.asarray(record.norm_f21, dtype=float)
    if t.size < 2:
        raise ValueError("need at least two recorded rows")
    x0 = float(n11[0]) if x0 is None else float(x0)
    a_e = params.a_e
    rep = constants(x0, params.a_mu, nu_m, a_e)
    sc = rep.script_C
    if sc is None or sc <= 0:
        raise OutOfRegimeError(
            "script_C", "margin not positive at x0 = %.6g (got %s)" % (x0, sc)
        )
    rate = 0.25 * a_e * sc

    cumint = np.concatenate(
        [[0.0], np.cumsum(0.5 * (n21[1:] + n21[:-1]) * np.diff(t))]
    )
    lhs = n11 + rate * cumint
    balance_margin = float(np.max(lhs) / x0 - 1.0) if x0 > 0 else 0.0
    balance_pass = balance_margin <= slack

    bound = x0 * np.exp(-rate * (t - t[0]))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(bound > 0, n11 / bound, 0.0)
    decay_margin = float(np.max(ratios) - 1.0) if x0 > 0 else 0.0
    decay_pass = decay_margin <= slack

    cx = np.asarray(record.center_x, dtype=float)
    cy = np.asarray(record.center_y, dtype=float)
    drift = np.hypot(cx, cy)
    allowed = drift[0] + rep.tilde_C * x0 * x0
    center_margin = float(np.max(drift) - allowed)
    center_pass = center_margin <= slack * max(1.0, allowed)

    return CertificateReport(
        script_C=sc,
        x0=x0,
        balance_pass=balance_pass,
        balance_margin=balance_margin,
        decay_pass=decay_pass,
        decay_margin=decay_margin,
        center_pass=center_pass,
        center_margin=center_margin,
        ok=balance_pass and decay_pass,
    )
