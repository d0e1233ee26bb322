"""Command-line driver.

Curve configs are JSON files:

    {"r": 1, "s": 2, "branch_points": [[0, 0], [1, 0], [-1.3, 0.4]], "seed": 0}

Branch points are [re, im] pairs or plain numbers, ordered as the roots of
k_s followed by the roots of k_r.  Without "branch_points", r + s points are
drawn from the annulus 0.5 <= |z| <= 2 with the given seed.  Complex numbers
in the output are [re, im] pairs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .basis import canonical_divisor_data, holomorphic_basis, phi_hat_basis
from .curve import CurveError, build_curve, check_nonsingular, expand_at_infinity, relation_residuals
from .semigroup import (SemigroupError, build_semigroup, is_symmetric, is_telescopic_any_order,
                        young_diagram)

CHECKS = ("omega", "legendre", "schur", "inversion", "vanishing")
PRECISION_RANGE = (1e-12, 1e-4)


class ConfigError(ValueError):
    pass


# JSON helpers ----------------------------------------------------------------------

def to_json(obj):
    """Recursively convert complex numbers and arrays to JSON-friendly lists."""
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_json(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _parse_complex(v):
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise ConfigError(f"cannot read {v!r} as a complex number")


def annulus_points(n, rng, inner=0.5, outer=2.0):
    rad = np.sqrt(rng.uniform(inner ** 2, outer ** 2, n))
    return rad * np.exp(2j * np.pi * rng.uniform(size=n))


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict) or "r" not in cfg or "s" not in cfg:
        raise ConfigError("config must be an object with integer fields r and s")
    try:
        cfg["r"], cfg["s"] = int(cfg["r"]), int(cfg["s"])
    except (TypeError, ValueError) as exc:
        raise ConfigError("r and s must be integers") from exc
    n = cfg["r"] + cfg["s"]
    if "branch_points" in cfg:
        b = [_parse_complex(v) for v in cfg["branch_points"]]
        if len(b) != n:
            raise ConfigError(f"need r + s = {n} branch points, got {len(b)}")
    else:
        b = list(annulus_points(n, np.random.default_rng(int(cfg.get("seed", 0)))))
    cfg["branch_points"] = b
    return cfg


def make_curve(cfg):
    try:
        return build_curve(cfg["r"], cfg["s"], cfg["branch_points"])
    except (SemigroupError, CurveError) as exc:
        raise ConfigError(str(exc)) from exc


def parse_u(text, g):
    try:
        vals = [complex(t.replace(" ", "")) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse u = {text!r}: {exc}") from exc
    if len(vals) != g:
        raise ConfigError(f"u needs {g} components, got {len(vals)}")
    return np.array(vals)


# commands -----------------------------------------------------------------------------

def cmd_semigroup(args):
    H = build_semigroup(args.r, args.s)
    D = young_diagram(H)
    lines = [
        f"semigroup  <{', '.join(map(str, H.generators))}>",
        f"genus      {H.genus}",
        f"gaps       {', '.join(map(str, H.gaps))}",
        f"Lambda     {', '.join(map(str, D.rows))}",
        f"alpha(L)   {', '.join(map(str, D.schubert))}",
        f"telescopic {is_telescopic_any_order(H.generators)}",
        f"symmetric  {is_symmetric(H)}",
    ]
    return "\n".join(lines), 0


def cmd_curve_check(args):
    cfg = load_config(args.curve)
    curve = make_curve(cfg)
    ok, pair = check_nonsingular(curve)
    rng = np.random.default_rng(args.seed)
    from .curve import lift_x
    res = max(max(relation_residuals(curve, P))
              for x in annulus_points(10, rng) for P in lift_x(curve, x))
    exp = expand_at_infinity(curve, 4)
    rep = {"curve": [curve.r, curve.s], "genus": curve.genus, "nonsingular": ok, "coincident": pair,
           "r_hat": curve.r_hat, "s_hat": curve.s_hat, "branch_points": curve.branch_points,
           "relation_residual": res, "pole_orders_at_infinity": list(exp.pole_orders()),
           "pass": bool(ok and res < args.precision)}
    return rep, 0 if rep["pass"] else 1


def cmd_basis(args):
    cfg = load_config(args.curve)
    curve = make_curve(cfg)
    g = curve.genus
    B = phi_hat_basis(curve, g + 3)
    rep = {"curve": [curve.r, curve.s], "genus": g,
           "phi_hat": [{"monomial": list(m), "weight": int(w)} for m, w in zip(B.monomials, B.weights)],
           "holomorphic": [d.describe() for d in holomorphic_basis(curve)],
           "divisors": canonical_divisor_data(curve)}
    return rep, 0


def _pipeline(cfg, seed):
    from .periods import period_matrices
    from .sigma import find_characteristic
    curve = make_curve(cfg)
    pd = period_matrices(curve, seed=seed)
    find_characteristic(curve, pd, seed=seed)
    return curve, pd


def cmd_periods(args):
    cfg = load_config(args.curve)
    curve, pd = _pipeline(cfg, args.seed)
    res = pd.legendre_residual()
    rep = {"curve": [curve.r, curve.s], "genus": curve.genus,
           "omega1": pd.omega1, "omega2": pd.omega2, "eta1": pd.eta1, "eta2": pd.eta2,
           "tau": pd.tau, "delta": pd.delta, "legendre_residual": res,
           "pass": bool(res < args.precision)}
    return rep, 0 if rep["pass"] else 1


def cmd_sigma_eval(args):
    from .sigma import SigmaError, build_sigma
    cfg = load_config(args.curve)
    curve, pd = _pipeline(cfg, args.seed)
    ev = build_sigma(curve, pd, seed=args.seed, centered=args.centered)
    u = parse_u(args.u, curve.genus)
    s0, grad, _ = ev.gradient_hessian(u)
    rep = {"curve": [curve.r, curve.s], "u": u, "centered": args.centered,
           "calibrated": ev.calibrated, "sigma": s0, "gradient": grad}
    try:
        rep["wp"] = ev.wp_matrix(u)
    except SigmaError as exc:
        rep["wp"] = None
        rep["wp_error"] = str(exc)
    return rep, 0


# verification ----------------------------------------------------------------------

def _check_omega(curve, pd, ev, rng, samples, precision):
    from .forms import diagonal_coefficients, eq34_residual, omega_symmetry_residual, second_kind_basis
    from .inversion import random_points
    basis = second_kind_basis(curve)
    worst = 0.0
    for _ in range(samples):
        P, Q = random_points(curve, 2, rng)
        worst = max(worst, omega_symmetry_residual(curve, P, Q, basis), eq34_residual(curve, P, Q, basis))
        lead, res = diagonal_coefficients(curve, P, basis)
        worst = max(worst, abs(lead - 1), abs(res))
    return {"max_residual": worst, "target": precision}


def _check_legendre(curve, pd, ev, rng, samples, precision):
    return {"max_residual": pd.legendre_residual(), "target": precision, "samples": 1}


def _check_schur(curve, pd, ev, rng, samples, precision):
    """Schur leading term of sigma centered at -w(B); sigma(0) is reported alongside."""
    from .sigma import build_sigma, schur_polynomial
    cen = build_sigma(curve, pd, centered=True)
    S = schur_polynomial(cen.rows)
    eps = 1e-2
    worst = 0.0
    for _ in range(samples):
        v = rng.normal(size=curve.genus) + 1j * rng.normal(size=curve.genus)
        v /= np.linalg.norm(v)
        worst = max(worst, abs(cen.scaled(v, eps) - S(v)))
    plain = cen.raw_partials(np.zeros(curve.genus), [tuple([0] * curve.genus)])[0] * cen.c
    return {"max_residual": worst, "target": 10 * eps, "epsilon": eps, "center": "-w(B)",
            "sigma_at_origin": plain}


def _check_inversion(curve, pd, ev, rng, samples, precision):
    from .inversion import alpha_abel_residual, jacobi_inversion_check, random_points
    g = curve.genus
    worst = 0.0
    for _ in range(samples):
        D = random_points(curve, g, rng)
        worst = max(worst, jacobi_inversion_check(curve, pd, ev, D, random_points(curve, 2, rng))["residual"])
        worst = max(worst, alpha_abel_residual(curve, pd, "phi_hat", D))
    return {"max_residual": worst, "target": precision}


def _check_vanishing(curve, pd, ev, rng, samples, precision):
    from .inversion import random_points, vanishing_check
    g = curve.genus
    worst = 0.0
    for _ in range(samples):
        for k in range(1, g + 1):
            rep = vanishing_check(curve, pd, ev, random_points(curve, k, rng))
            worst = max(worst, rep["ratio_residual"], rep["low_order"])
            if not rep["ug_order_ok"]:
                worst = max(worst, 1.0)
            if "phi_ratio" in rep:
                worst = max(worst, abs(rep["ratios"][0] - rep["phi_ratio"]) / abs(rep["phi_ratio"]))
    return {"max_residual": worst, "target": precision}


_CHECKS = {"omega": _check_omega, "legendre": _check_legendre, "schur": _check_schur,
           "inversion": _check_inversion, "vanishing": _check_vanishing}


def cmd_verify(args):
    from .sigma import build_sigma
    cfg = load_config(args.curve)
    curve, pd = _pipeline(cfg, args.seed)
    ev = build_sigma(curve, pd, seed=args.seed)
    names = CHECKS if args.which == "all" else (args.which,)
    reports = []
    for name in names:
        rng = np.random.default_rng([args.seed, CHECKS.index(name)])
        rep = _CHECKS[name](curve, pd, ev, rng, args.samples, args.precision)
        rep = {"check": name, "curve": [curve.r, curve.s], "samples": rep.pop("samples", args.samples),
               **rep}
        rep["pass"] = bool(rep["max_residual"] < rep["target"])
        reports.append(rep)
    return reports, 0 if all(r["pass"] for r in reports) else 1


# entry point ----------------------------------------------------------------------------

def _precision(text):
    v = float(text)
    if not PRECISION_RANGE[0] <= v <= PRECISION_RANGE[1]:
        raise argparse.ArgumentTypeError(f"precision must lie in [{PRECISION_RANGE[0]}, {PRECISION_RANGE[1]}]")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="trigonal-sigma", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, curve=True):
        if curve:
            sp.add_argument("--curve", required=True, help="curve config (JSON)")
        sp.add_argument("--precision", type=_precision, default=1e-6, help="residual target")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="write the JSON report here instead of stdout")

    sp = sub.add_parser("semigroup", help="gaps, Young diagram and flags of <3, 2r+s, r+2s>")
    sp.add_argument("r", type=int)
    sp.add_argument("s", type=int)
    common(sp, curve=False)
    sp.set_defaults(func=cmd_semigroup)

    sp = sub.add_parser("curve-check", help="nonsingularity and defining relations")
    common(sp)
    sp.set_defaults(func=cmd_curve_check)

    sp = sub.add_parser("basis", help="monomial basis and holomorphic differentials")
    common(sp)
    sp.set_defaults(func=cmd_basis)

    sp = sub.add_parser("periods", help="period matrices, tau, characteristic, Legendre residual")
    common(sp)
    sp.set_defaults(func=cmd_periods)

    sp = sub.add_parser("sigma-eval", help="sigma, its gradient and the wp matrix at u")
    common(sp)
    sp.add_argument("--u", required=True, help="comma-separated complex components, e.g. '0.1+0.2j,0.3'")
    sp.add_argument("--centered", action="store_true", help="evaluate sigma(u - w(B)) instead of sigma(u)")
    sp.set_defaults(func=cmd_sigma_eval)

    sp = sub.add_parser("verify", help="run numerical checks and report residuals")
    common(sp)
    sp.add_argument("--which", choices=("all",) + CHECKS, default="all")
    sp.add_argument("--samples", type=int, default=5)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, code = args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SemigroupError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    text = out if isinstance(out, str) else json.dumps(to_json(out), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
