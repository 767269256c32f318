"""Command-line front end.

Subcommands: eval, section, check-convexity, fit, compare, realize.
Structured results go to stdout (or --output) as JSON, curves as CSV or
SVG; diagnostics go to stderr.  Exit codes: 0 success, 1 usage error,
2 domain or validation error (including an inadmissible convexity report),
3 fit did not converge.

Unless --unchecked is passed, any subcommand that consumes criterion
parameters certifies them for convexity before computing.  Angles are
radians by default; pass --degrees to use degrees on the command line.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .calibration import FitProblem, fit, load_dataset
from .convexity import certify
from .criterion import (
    Criterion,
    criterion_from_dict,
    gradient,
    surface_q,
    yield_value,
)
from .errors import YieldCritError
from .invariants import invariants
from .limits import (
    CoulombMohr,
    DruckerPrager,
    ModifiedCamClay,
    ModifiedTresca,
    Tresca,
    VonMises,
    gurson_equivalent,
    gurson_meridian_q,
    newman_invariants,
    realize,
)
from .sections import curve_to_csv, curve_to_svg, sample_biaxial, sample_deviatoric, sample_meridian

USAGE_EXIT = 1
DOMAIN_EXIT = 2
NOT_CONVERGED_EXIT = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract reserves 2
    # for domain errors and uses 1 for usage.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _emit(text: str, output: str | None):
    if output:
        # YIELDCRIT_OUTPUT_DIR prefixes relative output paths when set.
        base = os.environ.get("YIELDCRIT_OUTPUT_DIR")
        if base and not os.path.isabs(output):
            output = os.path.join(base, output)
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_criterion(args) -> Criterion:
    if args.params:
        with open(args.params, encoding="utf-8") as fh:
            d = json.load(fh)
    else:
        names = ("M", "pc", "c", "m", "alpha", "beta", "gamma")
        missing = [n for n in names if getattr(args, n) is None]
        if missing:
            raise YieldCritError(
                f"no --params file given and inline flags missing: {', '.join('--' + n for n in missing)}"
            )
        d = {n: getattr(args, n) for n in names}
        if args.A is not None:
            d["A"] = args.A
        if args.B is not None:
            d["B"] = args.B
    crit = criterion_from_dict(d, unchecked=args.unchecked)
    if not args.unchecked:
        report = certify(crit)
        if not report.admissible:
            raise YieldCritError(
                "parameters fail convexity certification "
                f"(notes: {'; '.join(report.notes) or 'none'}); pass --unchecked to bypass"
            )
    return crit


def _add_params_args(p: argparse.ArgumentParser):
    p.add_argument("--params", help="criterion parameter JSON file")
    for name in ("M", "pc", "c", "m", "alpha", "beta", "gamma", "A", "B"):
        p.add_argument(f"--{name}", type=float, default=None, help=argparse.SUPPRESS)
    p.add_argument(
        "--unchecked", action="store_true", help="skip convexity certification of the parameters"
    )


def _finite_or_str(x: float):
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return x


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_eval(args) -> int:
    crit = _load_criterion(args)
    try:
        parts = [float(v) for v in args.stress.split(",")]
    except ValueError:
        raise YieldCritError(f"--stress must be three comma-separated numbers, got {args.stress!r}")
    if len(parts) != 3:
        raise YieldCritError(f"--stress must have exactly three components, got {len(parts)}")
    inv = invariants(parts)
    F = yield_value(parts, crit)
    out = {
        "p": inv.p,
        "q": inv.q,
        "theta": math.degrees(inv.theta) if args.degrees else inv.theta,
        "F": _finite_or_str(F),
    }
    try:
        dec = gradient(parts, crit)
        out["gradient"] = [float(v) for v in dec.tensor]
        out["unit_normal"] = [float(v) for v in dec.unit_normal]
    except YieldCritError as exc:
        out["gradient"] = None
        out["unit_normal"] = None
        out["note"] = str(exc)
    _emit(_json_dumps(out), args.output)
    return 0


def _cmd_section(args) -> int:
    crit = _load_criterion(args)
    theta = math.radians(args.theta) if args.degrees else args.theta
    if args.which == "meridian":
        curve = sample_meridian(crit, theta, args.n)
    elif args.which == "deviatoric":
        curve = sample_deviatoric(crit, args.p, args.n, normalize=args.normalize)
    else:
        curve = sample_biaxial(crit, args.n, normalize=args.normalize)
    text = curve_to_svg(curve) if args.format == "svg" else curve_to_csv(curve)
    _emit(text, args.output)
    return 0


def _cmd_check(args) -> int:
    with open(args.params, encoding="utf-8") as fh:
        d = json.load(fh)
    crit = criterion_from_dict(d, unchecked=True)
    report = certify(crit)
    _emit(_json_dumps(report.to_dict()), args.output)
    return 0 if report.admissible else DOMAIN_EXIT


def _cmd_fit(args) -> int:
    with open(args.problem, encoding="utf-8") as fh:
        spec = json.load(fh)
    try:
        template = criterion_from_dict(spec["criterion"], unchecked=True)
        free = tuple(spec["free"])
    except KeyError as exc:
        raise YieldCritError(f"problem JSON is missing the {exc.args[0]!r} key")
    bounds = tuple((k, (float(v[0]), float(v[1]))) for k, v in spec.get("bounds", {}).items())
    problem = FitProblem(
        template=template,
        free=free,
        bounds=bounds,
        residual_mode=spec.get("residual_mode", "meridian_distance"),
    )
    dataset = load_dataset(args.data)
    init = spec.get("init")
    result = fit(problem, dataset, init=init, seed=int(spec.get("seed", 0)))
    _emit(_json_dumps(result.to_dict()), args.output)
    if not result.converged:
        print("fit did not converge; best parameters so far were written", file=sys.stderr)
        return NOT_CONVERGED_EXIT
    return 0


def _cmd_compare(args) -> int:
    rows = ["p,q_model,q_reference"]
    if args.which == "gurson":
        params = gurson_equivalent(args.f, args.sigma_m, args.q1, args.q2, args.q3)
        crit = params.criterion()
        header = {
            "comparison": "gurson",
            "f": args.f,
            "sigma_m": args.sigma_m,
            "q1": args.q1,
            "q2": args.q2,
            "q3": args.q3,
            **crit.to_dict(),
        }
        ps = np.linspace(-params.c, params.pc, args.n)
        for p in ps:
            qm = surface_q(float(p), 0.0, crit)
            qr = gurson_meridian_q(float(p), args.f, args.sigma_m, args.q1, args.q2, args.q3)
            rows.append(f"{float(p)!r},{float(qm)!r},{float(qr)!r}")
    else:
        crit = _load_criterion(args)
        header = {"comparison": "newman", "fc": args.fc, **crit.to_dict()}
        s3s = np.linspace(0.0, args.sigma3_max * args.fc, args.n)
        for s3 in s3s:
            p, q_ref, theta = newman_invariants(float(s3), args.fc)
            qm = surface_q(p, theta, crit)
            rows.append(f"{p!r},{float('nan') if qm is None else float(qm)!r},{q_ref!r}")
    text = "# " + json.dumps(header) + "\n" + "\n".join(rows) + "\n"
    _emit(text, args.output)
    return 0


_REALIZE_BUILDERS = {
    "von-mises": lambda a: VonMises(ft=_req(a, "ft")),
    "tresca": lambda a: Tresca(ft=_req(a, "ft")),
    "drucker-prager": lambda a: DruckerPrager(fc=_req(a, "fc"), r=_req(a, "r")),
    "modified-tresca": lambda a: ModifiedTresca(fc=_req(a, "fc"), r=_req(a, "r")),
    "coulomb-mohr": lambda a: CoulombMohr(fc=_req(a, "fc"), r=_req(a, "r")),
    "cam-clay": lambda a: ModifiedCamClay(M=_req(a, "M"), pc=_req(a, "pc")),
}


def _req(args, name: str) -> float:
    v = getattr(args, name)
    if v is None:
        raise YieldCritError(f"realize {args.which} requires --{name}")
    return v


def _cmd_realize(args) -> int:
    criterion = _REALIZE_BUILDERS[args.which](args)
    real = realize(criterion, scale_exponent=args.k)
    out = real.criterion().to_dict()
    out["scale_exponent"] = real.scale_exponent
    if real.warnings:
        out["warnings"] = list(real.warnings)
    _emit(_json_dumps(out), args.output)
    return 0


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="yieldcrit", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="invariants, F and gradient at a stress state")
    _add_params_args(p)
    p.add_argument(
        "--stress",
        required=True,
        help="principal stresses s1,s2,s3 (use --stress=-1,0,0 for negative leads)",
    )
    p.add_argument("--degrees", action="store_true", help="report theta in degrees")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("section", help="sample a surface section")
    p.add_argument("which", choices=["meridian", "deviatoric", "biaxial"])
    _add_params_args(p)
    p.add_argument("--theta", type=float, default=0.0, help="Lode angle for meridian sections")
    p.add_argument("--degrees", action="store_true", help="interpret --theta in degrees")
    p.add_argument("--p", type=float, default=0.0, help="pressure for deviatoric sections")
    p.add_argument("-n", type=int, default=200, help="sample count")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--format", choices=["csv", "svg"], default="csv")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=_cmd_section)

    p = sub.add_parser("check-convexity", help="certify parameters and emit the report")
    p.add_argument("--params", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("fit", help="calibrate parameters against a yield-point CSV")
    p.add_argument("--data", required=True, help="dataset CSV path")
    p.add_argument("--problem", required=True, help="fit problem JSON path")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=_cmd_fit)

    p = sub.add_parser("compare", help="paired model/reference meridian curves")
    cw = p.add_subparsers(dest="which", required=True)
    pg = cw.add_parser("gurson")
    pg.add_argument("--f", type=float, required=True, help="void volume fraction")
    pg.add_argument("--sigma-m", dest="sigma_m", type=float, required=True)
    pg.add_argument("--q1", type=float, default=1.5)
    pg.add_argument("--q2", type=float, default=1.0)
    pg.add_argument("--q3", type=float, default=2.25)
    pg.add_argument("-n", type=int, default=101)
    pg.add_argument("-o", "--output")
    pg.set_defaults(handler=_cmd_compare)
    pn = cw.add_parser("newman")
    _add_params_args(pn)
    pn.add_argument("--fc", type=float, required=True, help="uniaxial compressive strength")
    pn.add_argument("--sigma3-max", dest="sigma3_max", type=float, default=2.0)
    pn.add_argument("-n", type=int, default=20)
    pn.add_argument("-o", "--output")
    pn.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("realize", help="parameter JSON for a classical criterion")
    p.add_argument("which", choices=sorted(_REALIZE_BUILDERS))
    p.add_argument("--ft", type=float, help="uniaxial tensile strength")
    p.add_argument("--fc", type=float, help="uniaxial compressive strength")
    p.add_argument("--r", type=float, help="strength ratio fc/ft")
    p.add_argument("--M", type=float, help="pressure sensitivity (cam-clay)")
    p.add_argument("--pc", type=float, help="compression strength (cam-clay)")
    p.add_argument("--k", type=int, default=6, help="scale exponent for the infinite limits")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=_cmd_realize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except YieldCritError as exc:
        print(f"yieldcrit: {exc}", file=sys.stderr)
        return DOMAIN_EXIT
    except OSError as exc:
        print(f"yieldcrit: {exc}", file=sys.stderr)
        return DOMAIN_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
