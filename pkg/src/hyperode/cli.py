"""Command-line interface: ``hyperode {geodesic,solve,map,verify,reduce}``.

Every command writes samples plus a verification block.  The exit status is
0 when all checks pass, 1 when a check fails, 2 for malformed input
(including expressions that do not parse), 3 for domain or degeneracy
errors and 4 for numerical failures.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _export, halfplane as hp, solutions as sol
from .errors import DomainError, NumericalError, ParseError, UnboundParameterError
from .expr import HFunction
from .geodesic import (GeodesicState, MinusOmega2, PlusOmega2, Zero, closed_form_domain,
                       closed_form_geodesic, closed_form_h, integrate_explicit, integrate_geodesic)
from .geometry import MhPoint
from .suite import Check, run_suite

SCHEMA = 1
DEFAULT_TOL = 1e-10
EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_DOMAIN, EXIT_NUMERIC = 0, 1, 2, 3, 4


class ConfigError(ValueError):
    pass


@dataclass
class Report:
    command: str
    config: dict
    columns: list[str] = field(default_factory=list)
    rows: list = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    notices: list[str] = field(default_factory=list)
    curves: list = field(default_factory=list)
    axes: tuple[str, str] = ("x", "y")

    def check(self, name: str, ref: str, value: float, tol: float) -> None:
        self.checks.append(Check(name, ref, float(value), float(tol)))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> str:
        doc = {
            "schema": SCHEMA,
            "command": self.command,
            "config": self.config,
            "samples": {"columns": self.columns, "rows": [list(map(float, r)) for r in self.rows]},
            "verification": [c.as_dict() for c in self.checks],
            "summary": self.summary,
            "notices": self.notices,
        }
        return json.dumps(_export.json_safe(doc), indent=2) + "\n"

    def to_csv(self) -> str:
        return _export.csv_text(self.columns, self.rows)

    def to_svg(self) -> str:
        return _export.svg_text(self.curves, *self.axes)


# --------------------------------------------------------------------------- helpers


def _default_tol() -> float:
    env = os.environ.get("HYPERODE_TOL")
    if env is None:
        return DEFAULT_TOL
    try:
        v = float(env)
    except ValueError:
        raise ConfigError(f"HYPERODE_TOL={env!r} is not a number") from None
    return v


def _bindings(pairs) -> dict:
    out = {}
    for item in pairs or ():
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise ConfigError(f"--param expects NAME=VALUE, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"--param {name}: {value!r} is not a number") from None
    return out


def _preset(args):
    ex = args.example
    if ex == "zero":
        return Zero(args.C1, args.C2)
    if ex == "minus-omega2":
        return MinusOmega2(args.omega)
    if ex == "plus-omega2":
        return PlusOmega2(args.omega, args.xbar, args.xtilde, args.k)
    raise ConfigError(f"unknown example {ex!r}")


def _h(args, variable: str = "x") -> HFunction:
    if getattr(args, "example", None):
        return closed_form_h(_preset(args))
    if args.h is None:
        raise ConfigError("give --h or --example")
    return HFunction.parse(args.h, variable=variable, **_bindings(args.param))


def _tol(args) -> float:
    tol = args.tol if args.tol is not None else _default_tol()
    if not tol > 0:
        raise ConfigError("tolerance must be positive")
    return tol


def _span(values, name="--span") -> Optional[tuple[float, float]]:
    if values is None:
        return None
    a, b = values
    if not a < b:
        raise ConfigError(f"{name} must be a non-empty interval")
    return float(a), float(b)


def _geodesic(args, h, tol):
    """Explicit geodesic for the command: closed form for presets, integrated otherwise."""
    if args.example:
        kind = _preset(args)
        return closed_form_geodesic(kind, args.x0), kind
    if args.phi0 is None:
        raise ConfigError("give --phi0 (and optionally --x0, --dphi0)")
    x0 = 0.0 if args.x0 is None else args.x0
    return integrate_explicit(h, x0, args.phi0, args.dphi0, tol=tol), None


def _config(args, **extra) -> dict:
    skip = {"func", "output", "format"}
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    cfg.update(extra)
    return _export.json_safe(cfg)


# --------------------------------------------------------------------------- commands


def cmd_geodesic(args) -> Report:
    h = _h(args)
    tol = _tol(args)
    rep = Report("geodesic", _config(args, tol=tol))
    if args.parametric:
        if args.phi0 is None:
            raise ConfigError("give --phi0")
        s_span = _span(args.s_span, "--s-span") or (-5.0, 5.0)
        x0 = 0.0 if args.x0 is None else args.x0
        init = GeodesicState(x0, args.phi0, args.xdot, args.phidot)
        traj = integrate_geodesic(h, init, s_span, tol=tol)
        rep.columns = ["s", "x", "phi", "xdot", "phidot"]
        rep.rows = np.column_stack([traj.s, traj.states]).tolist()
        v0 = float(traj.speed2()[traj.i0])
        rep.check("speed_drift", "affine parametrization", traj.speed_drift(), 1e-8 * (1 + v0))
        rep.summary = {"termination": traj.termination.name,
                       "termination_backward": getattr(traj.termination_backward, "name", None),
                       "speed2": v0}
        rep.curves = [("Phi(x)", traj.states[:, 0], traj.states[:, 1])]
        rep.axes = ("x", "Phi")
        return rep

    if args.example:
        # integrate from the closed form's own initial data and compare
        kind = _preset(args)
        exact = closed_form_geodesic(kind, args.x0)
        phi0, dphi0, _ = exact(exact.x0)
        geo = integrate_explicit(h, exact.x0, phi0, dphi0, tol=tol)
        lo, hi = closed_form_domain(kind)
        if math.isfinite(lo) and geo.end_causes[0] != "extent":
            rep.check("x_minus_vs_closed_form", "domain end", abs(geo.x_minus - lo), 1e-6)
        if math.isfinite(hi) and geo.end_causes[1] != "extent":
            rep.check("x_plus_vs_closed_form", "domain end", abs(geo.x_plus - hi), 1e-6)
        a, b = geo.interior(0.02)
        xs = np.linspace(a, b, 101)
        rep.check("phi_vs_closed_form", "closed-form geodesic",
                  float(np.max(np.abs(geo.phi(xs) - exact.phi(xs)) / exact.phi(xs))), 1e-7)
    else:
        geo, _ = _geodesic(args, h, tol)
    mids = geo.regular_midpoints()
    d2 = geo(mids)[2]
    res = float(np.max(np.abs(geo.residual(mids)) / (1 + np.abs(d2))))
    rep.check("geodesic_residual", "explicit geodesic equation", res, tol)
    if "degeneracy-locus" in geo.end_causes:
        rep.notices.append("the curve runs into the locus Phi^2 = h; residuals are checked "
                           "only where |Phi^2 - h| > 1e-2 (1 + Phi^2 + |h|)")
    rep.columns = ["x", "phi", "dphi", "d2phi"]
    rep.rows = geo.samples.tolist()
    rep.summary = {"x_minus": geo.x_minus, "x_plus": geo.x_plus, "end_causes": list(geo.end_causes)}
    for side, cause in zip(("left", "right"), geo.end_causes):
        if cause == "extent":
            rep.notices.append(f"{side} end not reached within the integration window; "
                               "the curve may extend without bound")
    rep.curves = [("Phi(x)", geo.samples[:, 0], geo.samples[:, 1])]
    rep.axes = ("x", "Phi")
    return rep


def cmd_solve(args) -> Report:
    h = _h(args)
    tol = _tol(args)
    rep = Report("solve", _config(args, tol=tol))
    geo, kind = _geodesic(args, h, tol)
    pair = sol.build_solution_pair(h, geo)
    lo, hi = geo.interior(0.02)
    lo, hi = max(lo, pair.domain[0]), min(hi, pair.domain[1])
    window = _span(args.span)
    if window is not None:
        lo, hi = max(lo, window[0]), min(hi, window[1])
        if not lo < hi:
            raise ConfigError("--span does not meet the geodesic's domain")
    xs = np.linspace(lo, hi, args.n)
    ut, dut = pair.top(xs)
    ub, dub = pair.bot(xs)
    rep.columns = ["x", "u_top", "du_top", "u_bot", "du_bot"]
    rep.rows = np.column_stack([xs, ut, dut, ub, dub]).tolist()
    W = pair.wronskian
    rep.summary = {"x0": geo.x0, "wronskian": W, "x_minus": geo.x_minus, "x_plus": geo.x_plus}

    rep.check("wronskian_drift", "Wronskian constancy",
              float(np.max(np.abs(pair.wronskian_at(xs) - W)) / abs(W)), 1e-8)
    mids = geo.midpoints()
    mids = mids[(mids > lo) & (mids < hi)]
    if mids.size:
        rep.check("riccati_residual", "Riccati equation",
                  float(np.max(sol.riccati_residual(h, geo, mids))), 1e-7)
    phi, dphi, _ = geo(xs)
    t, b = sol.theta(h, phi, dphi, xs)
    rep.check("theta_product", "Theta_top Theta_bot = -Phi^2",
              float(np.max(np.abs(t * b + phi * phi) / (phi * phi))), 1e-12)
    worst = 0.0
    for s in (pair.top, pair.bot):
        u0, du0 = s(geo.x0)
        ref = sol.direct_solve(h, geo.x0, u0, du0, (min(lo, geo.x0), max(hi, geo.x0)))
        worst = max(worst, float(np.max(np.abs(s.u(xs) - ref.u(xs)) / np.abs(ref.u(xs)))))
    rep.check("solutions_vs_direct", "solutions from geodesics", worst, 1e-6)

    if isinstance(kind, Zero):
        xm, xp = closed_form_domain(kind)
        x0 = geo.x0
        rep.check("u_top_closed_form", "linear solutions",
                  float(np.max(np.abs(ut - (xs - xm) / (x0 - xm)))), 1e-7)
        rep.check("u_bot_closed_form", "linear solutions",
                  float(np.max(np.abs(ub - (xs - xp) / (x0 - xp)))), 1e-7)
        rep.check("wronskian_closed_form", "linear solutions",
                  abs(W - (xp - xm) / ((xp - x0) * (x0 - xm))), 1e-9)
    elif isinstance(kind, MinusOmega2):
        w = kind.omega
        rep.check("u_top_closed_form", "exponential solutions",
                  float(np.max(np.abs(ut / np.exp(w * (xs - geo.x0)) - 1))), 1e-8)
        rep.check("u_bot_closed_form", "exponential solutions",
                  float(np.max(np.abs(ub / np.exp(-w * (xs - geo.x0)) - 1))), 1e-8)
        rep.check("wronskian_closed_form", "exponential solutions", abs(W - 2 * w), 1e-9)
    elif isinstance(kind, PlusOmega2):
        a, b = closed_form_domain(kind)
        phi0, dphi0, _ = geo(geo.x0)
        num = integrate_explicit(h, geo.x0, phi0, dphi0, tol=min(tol, 1e-10))
        rep.check("x_minus_vs_closed_form", "domain end", abs(num.x_minus - a), 1e-6)
        rep.check("x_plus_vs_closed_form", "domain end", abs(num.x_plus - b), 1e-6)
        rep.summary["x_minus_integrated"] = num.x_minus
        rep.summary["x_plus_integrated"] = num.x_plus
    rep.curves = [("u_top", xs, ut), ("u_bot", xs, ub)]
    rep.axes = ("x", "u")
    return rep


def cmd_map(args) -> Report:
    h = _h(args)
    tol = _tol(args)
    rep = Report("map", _config(args, tol=tol))
    rep.axes = ("X", "Y")
    kind = _preset(args) if args.example else None

    if isinstance(kind, MinusOmega2):
        w = kind.omega
        spec = hp.exponential_spec(w)
        xg, pg = np.meshgrid(np.linspace(-1, 1, 20), np.linspace(0.25 * w, 4 * w, 20))
        x, p = xg.ravel(), pg.ravel()
        X, Y = hp.map_points(spec, x, p)
        Xc, Yc = hp.exponential_map(w, x, p)
        xi, pi_ = hp.exponential_inverse(w, X, Y)
        det = np.array([hp.jacobian_det(spec, h, MhPoint(a, b)) for a, b in zip(x, p)])
        rep.check("closed_form_map", "exponential chart",
                  float(max(np.max(np.abs(X - Xc) / (1 + np.abs(Xc))), np.max(np.abs(Y - Yc) / Yc))),
                  1e-12)
        rep.check("inverse_round_trip", "exponential chart inverse",
                  float(max(np.max(np.abs(xi - x)), np.max(np.abs(pi_ - p) / p))), 1e-12)
        rep.check("pullback", "chart is an isometry onto H",
                  max(hp.pullback_check(spec, h, MhPoint(a, b)) for a, b in zip(x, p)), 1e-10)
        rep.columns = ["x", "phi", "X", "Y", "detJ"]
        rep.rows = np.column_stack([x, p, X, Y, det]).tolist()
        rep.curves = [(f"x={xg[0, j]:.2f}", X.reshape(xg.shape)[:, j], Y.reshape(xg.shape)[:, j])
                      for j in range(0, 20, 4)]
        return rep

    if isinstance(kind, PlusOmega2):
        w = kind.omega
        phi_c = args.phi_fixed
        if not phi_c > 0 or abs(phi_c - w) < 1e-9:
            raise ConfigError("--phi-fixed must be positive and different from omega")
        spec = hp.trig_spec(w, kind.xbar)
        span = math.pi / (2 * w)
        x = kind.xbar + span * np.linspace(0.01, 0.99, args.n)
        X, Y = hp.map_points(spec, x, phi_c)
        (cx, cy), r, res = hp.fit_circle(X, Y)
        (ex, ey), er = hp.trig_fixed_phi_circle(w, phi_c)
        rep.check("circle_center", "fixed-Phi image circle", float(np.hypot(cx - ex, cy - ey)), 1e-8)
        rep.check("circle_radius", "fixed-Phi image circle", abs(r - er), 1e-8)
        right = phi_c < w
        side = float(-np.min(X)) if right else float(np.max(X))
        rep.check("semicircle_side", "right semicircle for Phi < omega", max(side, 0.0), 0.0)
        det = np.array([hp.jacobian_det(spec, h, MhPoint(a, phi_c)) for a in x])
        rep.columns = ["x", "phi", "X", "Y", "detJ"]
        rep.rows = np.column_stack([x, np.full_like(x, phi_c), X, Y, det]).tolist()
        rep.summary = {"center": [cx, cy], "radius": r, "fit_residual": res,
                       "expected_center": [ex, ey], "expected_radius": er}
        rep.curves = [(f"Phi={phi_c:g}", X, Y)]
        return rep

    geo, _ = _geodesic(args, h, tol)
    lo, hi = geo.interior(0.02)
    xs = np.linspace(lo, hi, args.n)
    if args.chart == "own":
        pair = sol.build_solution_pair(h, geo)
        spec = hp.spec_from_pair(pair, X0=args.X0, sign=args.sign)
    else:
        pad = 0.01 * (hi - lo)
        a, b = lo - pad, hi + pad
        u1 = sol.direct_solve(h, geo.x0, 1.0, 1.0, (a, b))
        u2 = sol.direct_solve(h, geo.x0, 0.0, 1.0, (a, b))
        spec = hp.DiffeoSpec(u1, u2, -1.0, args.X0, args.sign)
    X, Y = hp.map_points(spec, xs, geo.phi(xs))
    img = hp.geodesic_image(spec, geo, xs)
    if args.chart == "own":
        rep.check("vertical_image", "geodesic image X = X0", float(np.max(np.abs(X - spec.X0))), 1e-8)
    rep.check("image_classified", "geodesics map to lines or semicircles",
              0.0 if isinstance(img, (hp.VerticalLine, hp.Semicircle)) else img.residual, 1e-6)
    pull = 0.0
    for xv in xs[:: max(1, len(xs) // 20)]:
        for f in (0.8, 1.25):
            p = MhPoint(float(xv), float(geo.phi(xv)) * f)
            try:
                pull = max(pull, hp.pullback_check(spec, h, p))
            except DomainError:
                continue
    rep.check("pullback", "chart is an isometry onto H", pull, 1e-7)
    det = np.array([hp.jacobian_det(spec, h, MhPoint(a, b)) for a, b in zip(xs, geo.phi(xs))])
    rep.columns = ["x", "phi", "X", "Y", "detJ"]
    rep.rows = np.column_stack([xs, geo.phi(xs), X, Y, det]).tolist()
    rep.summary = {"image": type(img).__name__,
                   **{k: v for k, v in vars(img).items() if k != "samples"}}
    rep.curves = [("image", X, Y)]
    return rep


def cmd_verify(args) -> Report:
    h = _h(args)
    tol = _tol(args)
    rep = Report("verify", _config(args, tol=tol))
    rep.checks = run_suite(h, seed=args.seed, tol=tol)
    rep.columns = ["name", "value", "tolerance", "pass"]
    rep.rows = []
    rep.summary = {"passed": sum(c.passed for c in rep.checks), "total": len(rep.checks)}
    vals = np.array([math.log10(max(c.value, 1e-300) / c.tolerance) for c in rep.checks])
    rep.curves = [("log10(value/tolerance)", np.arange(len(vals)), vals)]
    rep.axes = ("check", "log10 ratio")
    return rep


def cmd_reduce(args) -> Report:
    binds = _bindings(args.param)
    a = HFunction.parse(args.a, variable="t", **binds)
    b = HFunction.parse(args.b, variable="t", **binds)
    tol = _tol(args)
    span = _span(args.span) or (args.t0 - 1.0, args.t0 + 1.0)
    rep = Report("reduce", _config(args, tol=tol))
    form = sol.reduce_general(a, b, args.t0, span)
    ts = np.linspace(span[0], span[1], args.n)
    xs = form.x_of_t(ts)
    hj = form.h.jet(xs)
    rep.columns = ["t", "x", "h", "dh"]
    rep.rows = np.column_stack([ts, xs, hj.v, hj.d1]).tolist()
    reduced = sol.direct_solve(form.h, 0.0, args.u0, args.du0 * float(a(args.t0)),
                               (min(form.x_span[0], 0.0), max(form.x_span[1], 0.0)),
                               tol=min(tol, 1e-12))
    u_red, du_red = form.pullback(reduced, ts)
    orig = sol.solve_original(a, b, args.t0, args.u0, args.du0, span, tol=min(tol, 1e-12))
    u_org, du_org = orig(ts)
    scale = 1 + np.max(np.abs(u_org))
    rep.check("pullback_vs_original", "normal-form reduction",
              float(np.max(np.abs(u_red - u_org)) / scale), 1e-8)
    rep.check("derivative_vs_original", "normal-form reduction",
              float(np.max(np.abs(du_red - du_org)) / (1 + np.max(np.abs(du_org)))), 1e-8)
    rep.summary = {"x_span": list(form.x_span)}
    rep.curves = [("h(x)", xs, hj.v)]
    rep.axes = ("x", "h")
    return rep


# --------------------------------------------------------------------------- parser


def _add_common(p, with_h=True, with_preset=True):
    if with_h:
        p.add_argument("--h", help="coefficient h(x), e.g. 'sin(x) + 2'")
    p.add_argument("--param", action="append", metavar="NAME=VALUE",
                   help="bind a named parameter of the expressions (repeatable)")
    if with_preset:
        p.add_argument("--example", choices=("zero", "minus-omega2", "plus-omega2"),
                       help="closed-form preset (overrides --h)")
        p.add_argument("--C1", type=float, default=2.0)
        p.add_argument("--C2", type=float, default=0.0)
        p.add_argument("--omega", type=float, default=1.0)
        p.add_argument("--xbar", type=float, default=0.0)
        p.add_argument("--xtilde", type=float, default=math.pi / 6)
        p.add_argument("--k", type=int, default=0)
    p.add_argument("--tol", type=float, default=None,
                   help=f"integration tolerance (default {DEFAULT_TOL:g} or $HYPERODE_TOL)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=101, help="number of output samples")
    p.add_argument("--format", choices=("json", "csv", "svg"), default="json")
    p.add_argument("-o", "--output", default="-", help="output file ('-' for stdout)")


def _add_initial(p):
    p.add_argument("--x0", type=float, default=None)
    p.add_argument("--phi0", type=float, default=None)
    p.add_argument("--dphi0", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperode",
        description="Solve u'' + h(x) u = 0 through geodesics of a hyperbolic half-plane.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("geodesic", help="integrate a geodesic")
    _add_common(p)
    _add_initial(p)
    p.add_argument("--parametric", action="store_true",
                   help="integrate in the affine parameter instead of as a graph Phi(x)")
    p.add_argument("--xdot", type=float, default=1.0)
    p.add_argument("--phidot", type=float, default=0.0)
    p.add_argument("--s-span", type=float, nargs=2, metavar=("S0", "S1"))
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("solve", help="solutions u_top, u_bot from a geodesic")
    _add_common(p)
    _add_initial(p)
    p.add_argument("--span", type=float, nargs=2, metavar=("A", "B"), help="sampling window")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("map", help="map into the upper half-plane")
    _add_common(p)
    _add_initial(p)
    p.add_argument("--chart", choices=("own", "oracle"), default="own",
                   help="own: the geodesic's (u_top, u_bot); oracle: u1(x0)=1, u1'(x0)=1, "
                        "u2(x0)=0, u2'(x0)=1")
    p.add_argument("--X0", type=float, default=0.0)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--phi-fixed", "--phi", dest="phi_fixed", type=float, default=0.5,
                   help="Phi of the coordinate line swept by the plus-omega2 preset")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("verify", help="run the invariant suite on h")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", help="reduce (a u')' + b u = 0 to normal form")
    _add_common(p, with_h=False, with_preset=False)
    p.add_argument("--a", required=True, help="a(t)")
    p.add_argument("--b", required=True, help="b(t)")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--span", type=float, nargs=2, metavar=("T0", "T1"))
    p.add_argument("--u0", type=float, default=1.0)
    p.add_argument("--du0", type=float, default=0.0)
    p.set_defaults(func=cmd_reduce)
    return parser


def _emit(rep: Report, fmt: str, output: str) -> None:
    text = {"json": rep.to_json, "csv": rep.to_csv, "svg": rep.to_svg}[fmt]()
    if fmt == "csv" and rep.command == "verify":
        text = _export.csv_text(["name", "paper_ref", "value", "tolerance", "pass"],
                                [[c.name, c.paper_ref, c.value, c.tolerance, str(c.passed)]
                                 for c in rep.checks])
    if output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if fmt != "json":
        for c in rep.checks:
            print(f"{'PASS' if c.passed else 'FAIL'} {c.name} {c.value:.3e} <= {c.tolerance:.1e}",
                  file=sys.stderr)
        for n in rep.notices:
            print(f"note: {n}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.n < 2:
        parser.error("--n must be at least 2")
    try:
        rep = args.func(args)
    except (ParseError, UnboundParameterError, ConfigError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as e:
        print(f"domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(rep, args.format, args.output)
    return EXIT_OK if rep.passed else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
