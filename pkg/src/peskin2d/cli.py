"""Command-line front end.

Subcommands:
  simulate      integrate an interface and write trajectory + final state
  kcurve        tabulate the smallness threshold k(a_mu) over a contrast grid
  lemma-check   exercise the multiplier-integral identities on random tuples
  constants     dump the constants chain at one evaluation point
  verify-linear check the instantaneous linearized rates mode by mode

Exit codes: 0 success; 1 usage or configuration error; 2 degenerate
geometry; 3 a certificate or verification check failed.
"""

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

# note: the package root rebinds the name `constants` to the chain
# evaluator function, shadowing the submodule; import its symbols directly
from .constants import (
    OutOfRegimeError,
    constants as constants_chain,
    energy_certificate,
    k_threshold,
)
from . import evolution, force, multipliers, spectral


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; we reserve that
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(1)


class ConfigError(ValueError):
    pass


_SCHEMA = {
    "physics": {"mu1", "mu2", "k0", "a_mu", "a_e"},
    "initial": {"circle", "modes"},
    "discretization": {"max_mode", "grid_size"},
    "stepping": {
        "dt", "t_final", "scheme", "record_every", "nu_max",
        "arc_chord_floor", "force_method",
    },
}


def _check_keys(cfg):
    for section, body in cfg.items():
        if section not in _SCHEMA:
            raise ConfigError("unknown config key %r" % section)
        if not isinstance(body, dict):
            raise ConfigError("section %r must be an object" % section)
        for key in body:
            if key not in _SCHEMA[section]:
                raise ConfigError("unknown config key %r" % (section + "." + key))
    if "circle" in cfg.get("initial", {}):
        extra = set(cfg["initial"]["circle"]) - {"a", "b", "c", "d"}
        if extra:
            raise ConfigError(
                "unknown config key 'initial.circle.%s'" % sorted(extra)[0]
            )


def load_config(path):
    """Parse and validate a JSON run configuration."""
    with open(path) as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("config is not valid JSON: %s" % exc) from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be an object")
    _check_keys(cfg)

    phys = cfg.get("physics", {})
    named = {"mu1", "mu2", "k0"} & set(phys)
    contrast = {"a_mu", "a_e"} & set(phys)
    if named and contrast:
        raise ConfigError(
            "physics: give either (mu1, mu2, k0) or (a_mu, a_e), not both"
        )
    if contrast:
        params = force.PhysicsParams.from_contrast(phys["a_mu"], phys["a_e"])
    elif named == {"mu1", "mu2", "k0"}:
        params = force.PhysicsParams(phys["mu1"], phys["mu2"], phys["k0"])
    else:
        raise ConfigError("physics: need (mu1, mu2, k0) or (a_mu, a_e)")

    disc = cfg.get("discretization", {})
    m = int(disc.get("max_mode", 16))
    n = int(disc.get("grid_size", 4 * m))

    init = cfg.get("initial", {})
    circ = init.get("circle", {})
    base = spectral.circle_curve(
        circ.get("a", 1.0), circ.get("b", 0.0),
        circ.get("c", 0.0), circ.get("d", 0.0),
        max_mode=m, grid_size=n,
    )
    coeffs = base.coeffs.copy()
    for row in init.get("modes", []):
        if len(row) != 5:
            raise ConfigError("initial.modes rows must be [k, re1, im1, re2, im2]")
        k = int(row[0])
        if abs(k) > m:
            raise ConfigError("initial.modes: |k| = %d exceeds max_mode %d"
                              % (abs(k), m))
        add = np.array([row[1] + 1j * row[2], row[3] + 1j * row[4]])
        coeffs[k + m] += add
        if k != 0:
            coeffs[-k + m] += np.conj(add)
    curve = spectral.FourierCurve(coeffs, n)

    st = cfg.get("stepping", {})
    stepper = evolution.StepperConfig(
        dt=float(st.get("dt", 1e-3)),
        t_final=float(st.get("t_final", 1.0)),
        scheme=st.get("scheme", "exponential-euler"),
        record_every=int(st.get("record_every", 10)),
        nu_max=float(st.get("nu_max", 0.0)),
        arc_chord_floor=float(st.get("arc_chord_floor", 0.05)),
        force_method=st.get("force_method", "direct"),
    )
    return params, curve, stepper


def cmd_simulate(args):
    params, curve, stepper = load_config(args.config)
    os.makedirs(args.out, exist_ok=True)
    rec = evolution.run(curve, params, stepper)
    rec.to_csv(os.path.join(args.out, "trajectory.csv"))
    evolution.write_final_state(
        os.path.join(args.out, "final_state.txt"), rec.final_state
    )
    if rec.failure:
        print("DEGENERATE: %s" % rec.failure)
        return 2
    print("integrated to t = %g (%d rows recorded)" % (rec.t[-1], len(rec.t)))
    if math.isfinite(rec.script_C):
        cert = energy_certificate(rec, params, x0=rec.x0,
                                      nu_m=stepper.nu_max)
        for line in cert.lines():
            print(line)
        if not cert.ok:
            return 3
    else:
        print("certificate skipped: no positive margin at x0 = %.3e" % rec.x0)
    return 0


def cmd_kcurve(args):
    grid = np.linspace(args.amin, args.amax, args.points)
    workers = max(1, args.threads)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(k_threshold, grid))
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "kcurve.csv")
    with open(path, "w") as fh:
        fh.write("a_mu,k,k_lower_bound\n")
        for a, res in zip(grid, results):
            fh.write("%.16e,%.16e,%.16e\n" % (a, res["k"], res["lower_bound"]))
    bad = [a for a, r in zip(grid, results) if r["k"] <= r["lower_bound"]]
    worst = max(r["residual"] for r in results)
    print("wrote %s (%d points, worst residual %.2e)" % (path, len(grid), worst))
    if bad:
        print("threshold fell below its closed-form lower bound at %s" % bad)
        return 3
    return 0


def _random_tuple(rng, nmax, kmax):
    n = int(rng.integers(1, nmax + 1))
    while True:
        k = int(rng.integers(-kmax, kmax + 1))
        ks = [int(v) for v in rng.integers(-kmax, kmax + 1, size=2 * n)]
        if k != ks[0] and all(ks[j] != ks[j + 1] for j in range(2 * n - 1)):
            return k, ks


def cmd_lemma_check(args):
    rng = np.random.default_rng(args.seed)
    tuples = [_random_tuple(rng, args.nmax, args.kmax)
              for _ in range(args.count)]
    bound = 2.0 * np.pi * (1.0 + 1e-8)

    def one(item):
        k, ks = item
        num = multipliers.integral_In(k, ks)
        exact = multipliers.integral_Sn_exact(ks)
        quad = multipliers.integral_Sn_quadrature(ks)
        return k, ks, num, exact, abs(exact - quad), bound - abs(num)

    workers = max(1, args.threads)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(one, tuples))
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "lemma_check.csv")
    ok = True
    with open(path, "w") as fh:
        fh.write("n,k_tuple,numeric,exact,abs_err,bound_margin\n")
        for k, ks, num, exact, err, margin in rows:
            fh.write('%d,"%s",%.16e,%.16e,%.3e,%.3e\n'
                     % (len(ks) // 2, " ".join(str(v) for v in [k] + ks),
                        num.imag, exact, err, margin))
            if err > 1e-8 or margin < 0:
                ok = False
    print("wrote %s (%d tuples)" % (path, len(rows)))
    if not ok:
        print("FAIL: a quadrature/closed-form mismatch or bound violation")
        return 3
    print("all tuples within tolerance and the 2*pi bound")
    return 0


def cmd_constants(args):
    try:
        rep = constants_chain(args.x, args.a_mu, args.nu_m, args.a_e)
    except OutOfRegimeError as exc:
        print("out of regime (%s): %s" % (exc.constant_name, exc))
        return 3
    flat = rep.as_flat_dict()
    text = json.dumps(flat, indent=2)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "constants.json")
        with open(path, "w") as fh:
            fh.write(text + "\n")
        print("wrote %s" % path)
    else:
        print(text)
    return 0


def cmd_verify_linear(args):
    params = force.PhysicsParams.from_contrast(args.a_mu, args.a_e)
    modes = [int(v) for v in args.modes.split(",")]
    m = max(modes) + 6
    n = 4 * m
    eps = args.eps
    worst = 0.0
    for k in modes:
        coeffs = spectral.circle_curve(max_mode=m, grid_size=n).coeffs.copy()
        add = eps * np.array([1.0 + 0.4j, 0.7 - 0.3j])
        coeffs[k + m] += add
        coeffs[-k + m] += np.conj(add)
        curve = spectral.FourierCurve(coeffs, n)
        f = force.solve_force(curve, params)
        u = evolution.velocity_on_curve(curve, f)
        dy = spectral.to_Y(spectral.analyze(u, m)).coeffs[k + m]
        y = spectral.to_Y(curve).coeffs[k + m]
        pred = -0.5 * params.a_e * np.array([k + 1.0, k - 1.0]) * y
        rel = np.linalg.norm(dy - pred) / np.linalg.norm(pred)
        worst = max(worst, rel)
        print("mode %3d: measured vs linear rate, rel err %.3e" % (k, rel))
    if worst > args.tol:
        print("FAIL: worst relative error %.3e > %.1e" % (worst, args.tol))
        return 3
    print("linearized rates confirmed (worst rel err %.3e)" % worst)
    return 0


def build_parser():
    p = _Parser(prog="peskin2d",
                description="Two-phase elastic-interface spectral toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a time integration")
    s.add_argument("--config", required=True, help="JSON run configuration")
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("kcurve", help="tabulate the threshold k(a_mu)")
    s.add_argument("--out", required=True)
    s.add_argument("--points", type=int, default=50)
    s.add_argument("--amin", type=float, default=-0.95)
    s.add_argument("--amax", type=float, default=0.95)
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_kcurve)

    s = sub.add_parser("lemma-check", help="random multiplier-integral audit")
    s.add_argument("--out", required=True)
    s.add_argument("--count", type=int, default=1000)
    s.add_argument("--nmax", type=int, default=3)
    s.add_argument("--kmax", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_lemma_check)

    s = sub.add_parser("constants", help="evaluate the constants chain")
    s.add_argument("--x", type=float, required=True,
                   help="deviation norm ||X||_{F^{1,1}_nu}")
    s.add_argument("--a-mu", type=float, default=0.0, dest="a_mu")
    s.add_argument("--nu-m", type=float, default=0.0, dest="nu_m")
    s.add_argument("--a-e", type=float, default=None, dest="a_e")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("verify-linear", help="check linearized decay rates")
    s.add_argument("--a-mu", type=float, default=0.0, dest="a_mu")
    s.add_argument("--a-e", type=float, default=1.0, dest="a_e")
    s.add_argument("--modes", default="2,3,5,10")
    s.add_argument("--eps", type=float, default=1e-5)
    s.add_argument("--tol", type=float, default=1e-3)
    s.set_defaults(func=cmd_verify_linear)

    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except spectral.CurveDegenerateError as exc:
        print("degenerate geometry: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
