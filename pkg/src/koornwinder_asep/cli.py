"""Command line for exact and numerical steady states of the open two-species exclusion process.

Subcommands: ``steady``, ``verify``, ``partition``, ``observables``,
``phase``, ``simulate`` and ``reference`` (prints the option reference as
Markdown).  Parameter files are TOML with rationals written as ``"p/q"``
strings; every output embeds the resolved parameters and a schema version.
Exit status is 0 exactly when every requested check passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import List, Optional

import tomli

from . import __version__
from .exact import Q, rational_to_str
from .model import SectorError
from .montecarlo import SimConfigError
from .params import ParamPoint, ParameterError, ResonanceError

SCHEMA_VERSION = 1
SUITES = ("hecke", "ybe", "qkz", "recursions", "fugacity", "hcoeff", "aw-contiguous", "mimachi")
PRESETS = ("maximal_current", "a_dominated", "c_dominated")
EXIT_FAIL = 1
EXIT_USAGE = 2


class SizeError(ValueError):
    pass


# ---------------------------------------------------------------- parameters


def load_params(path: Optional[str], overrides: List[str]) -> ParamPoint:
    """Read a parameter file (or a shipped preset name) and apply ``key=value`` overrides."""
    data = {}
    if path is None:
        path = "maximal_current"
    if path in PRESETS:
        text = resources.files("koornwinder_asep").joinpath(f"presets/{path}.toml").read_text()
    else:
        text = Path(path).read_text()
    data = tomli.loads(text)
    for ov in overrides or []:
        if "=" not in ov:
            raise ParameterError(f"override {ov!r} is not of the form key=value")
        k, v = ov.split("=", 1)
        data[k.strip()] = v.strip()
    for k, v in data.items():
        if isinstance(v, float):
            raise ParameterError(f"parameter {k} given as a float; write it as \"p/q\"")
        if isinstance(v, int):
            data[k] = str(v)
    unknown = set(data) - {"s", "a", "b", "c", "d", "xi"}
    if unknown:
        raise ParameterError(f"unknown parameter keys: {', '.join(sorted(unknown))}")
    try:
        return ParamPoint.from_dict(data)
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(str(exc)) from exc


def _envelope(cmd: str, params: ParamPoint, body: dict) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "command": cmd, "version": __version__, "params": params.to_dict()}
    out.update(body)
    return out


def _current(value, convention: str):
    """The default sign is the net first-class flux through the left boundary,
    i.e. left-to-right; ``leftward`` flips it."""
    if convention == "leftward":
        return -value
    return value


def _num(x):
    try:
        return rational_to_str(Q(x))
    except (TypeError, ValueError):
        return float(x)


def _emit(args, payload, csv_text: Optional[str] = None):
    if args.format == "csv" and csv_text is not None:
        text = csv_text
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands


def cmd_steady(args, params: ParamPoint) -> int:
    from .model import exact_nullspace, markov_matrix
    from .observables import density_first_class, partition_function, steady_current
    from .qkz import build_state

    N, m = args.n, args.m
    if N > args.cap:
        raise SizeError(f"N={N} exceeds the cap {args.cap}; raise it with --cap (cost grows like 3^N)")
    st = build_state(N, m, params)
    data = partition_function(st)
    vec = st.at_one()
    M = markov_matrix(st.sector, params, formal=True)
    stationary = not any(M.matvec(vec))
    body = st.to_json_obj()
    body.pop("params", None)
    body.pop("schema_version", None)
    kernel_dim = len(exact_nullspace(M)) if args.kernel else None
    body.update(
        {
            "Z": rational_to_str(data.Zhom),
            "current": rational_to_str(_current(steady_current(N, m, params), args.current_convention)) if N else None,
            "current_convention": args.current_convention,
            "density_first_class": rational_to_str(density_first_class(N, m, params)) if N else None,
            "checks": {"M_psi_zero": stationary, "kernel_dimension": kernel_dim},
        }
    )
    _emit(args, _envelope("steady", params, body))
    return 0 if stationary and kernel_dim in (None, 1) else EXIT_FAIL


def _suite_entries(args, params: ParamPoint) -> List[dict]:
    suite = args.suite
    N, m = args.n, args.m
    if suite == "hecke":
        from .hecke import verify_hecke_relations

        return verify_hecke_relations(N, params, degree=args.degree)
    if suite == "ybe":
        from .model import verify_integrability

        return verify_integrability(N, m, params, npoints=args.points)
    if suite == "qkz":
        from .qkz import build_state, verify_exchange_equations

        return verify_exchange_equations(build_state(N, m, params), npoints=args.points)
    if suite == "recursions":
        from .qkz import verify_recursions

        return verify_recursions(N, m, params)
    if suite == "fugacity":
        from .qkz import verify_fugacity_covariance

        return verify_fugacity_covariance(N, m, params, Q(args.xi))
    if suite == "hcoeff":
        from .qkz import h_closed_form, h_sequence, verify_h_duality

        hs = h_sequence(params.a, params.b, params.c, params.d, params.t, args.nmax)
        closed = [h_closed_form(n, params) for n in range(args.nmax + 1)]
        return [
            {"check": "h_n recursion = closed form", "nmax": args.nmax, "pass": hs == closed},
            {"check": "h_n duality (a,b,c,d,t) <-> (1/c,1/d,1/a,1/b,1/t)", "pass": verify_h_duality(params, args.nmax)},
        ]
    if suite == "aw-contiguous":
        from .qseries import aw_by_contiguous_chain, askey_wilson, contiguous_relation_suite

        zs = [Q("3/2"), Q("-2/7"), Q("5/3")]
        rep = contiguous_relation_suite(params.a, params.b, params.c, params.d, params.s, range(args.mmax + 1), zs)
        chain = all(
            aw_by_contiguous_chain(n, z, params.a, params.b, params.c, params.d, params.t)
            == askey_wilson(n, z, params.a, params.b, params.c, params.d, params.t)
            for n in range(min(args.mmax, 6) + 1)
            for z in zs[:1]
        )
        rep.append({"relation": "p_n from p_0 by omega(m+1,m)", "pass": chain, "required": True})
        return rep
    if suite == "mimachi":
        from .observables import exact_partition, mimachi_partition

        ex = float(exact_partition(N, m, params).Zhom)
        num = mimachi_partition(N, m, params, tol=min(args.tol * 1e-3, 1e-10))
        err = abs(num - ex) / abs(ex)
        return [{"check": "contour integral = exact Z(1)", "N": N, "m": m, "exact": ex, "integral": num,
                 "relative_error": err, "pass": err < args.tol}]
    raise ValueError(suite)


def cmd_verify(args, params: ParamPoint) -> int:
    entries = _suite_entries(args, params)
    gating = [e for e in entries if e.get("required", True)]
    ok = all(e["pass"] for e in gating)
    _emit(args, _envelope("verify", params, {"suite": args.suite, "pass": ok, "entries": _jsonable(entries)}))
    return 0 if ok else EXIT_FAIL


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    return _num(obj)


def cmd_partition(args, params: ParamPoint) -> int:
    from .observables import exact_partition, mimachi_partition

    N, m = args.n, args.m
    if args.method == "exact":
        if N > args.cap:
            raise SizeError(f"N={N} exceeds the cap {args.cap}; use --method mimachi for large systems")
        data = exact_partition(N, m, params, check=True)
        body = {
            "N": N,
            "m": m,
            "Z_poly": data.Zpoly.to_json_obj(),
            "Z": rational_to_str(data.Zhom),
            "Z_by_first_class": {str(k): rational_to_str(sum(p.terms.values(), Q(0))) for k, p in
                                 sorted(data.Zweighted.items())},
        }
        if args.xi is not None:
            body["xi"] = args.xi
            body["Z_xi"] = rational_to_str(data.weighted_hom(Q(args.xi)))
    else:
        xi = Q(args.xi) if args.xi is not None else Q(1)
        # the integral gives Z(xi^2); report Z at fugacity xi
        root = float(xi) ** 0.5
        body = {"N": N, "m": m, "xi": rational_to_str(xi),
                "Z_xi": mimachi_partition(N, m, params, xi=root, tol=args.tol)}
    body["method"] = args.method
    _emit(args, _envelope("partition", params, body))
    return 0


def cmd_observables(args, params: ParamPoint) -> int:
    from .observables import density_first_class, mimachi_current, mimachi_density, steady_current

    N, m = args.n, args.m
    conv = args.current_convention
    if args.method == "exact":
        if N > args.cap:
            raise SizeError(f"N={N} exceeds the cap {args.cap}; use --method mimachi for large systems")
        J1 = steady_current(N, m, params, "ratio")
        J2 = steady_current(N, m, params, "flux")
        r1 = density_first_class(N, m, params, "direct")
        r2 = density_first_class(N, m, params, "log-derivative")
        body = {
            "current": rational_to_str(_current(J1, conv)),
            "current_flux_route": rational_to_str(_current(J2, conv)),
            "density_first_class": rational_to_str(r1),
            "density_log_derivative": rational_to_str(r2),
            "checks": {"current_routes_agree": J1 == J2, "density_routes_agree": r1 == r2},
        }
        ok = J1 == J2 and r1 == r2
    else:
        body = {
            "current": _current(mimachi_current(N, m, params), conv),
            "density_first_class": mimachi_density(N, m, params),
        }
        ok = True
    body.update({"N": N, "m": m, "method": args.method, "current_convention": conv})
    _emit(args, _envelope("observables", params, body))
    return 0 if ok else EXIT_FAIL


def _rho_grid(spec: str):
    """``"0.2"``, ``"0,1/5,2/5"`` or ``"start:stop:count"`` (inclusive)."""
    if ":" in spec:
        lo, hi, n = spec.split(":")
        lo, hi, n = Q(lo), Q(hi), int(n)
        if n < 1:
            raise ValueError("grid needs at least one point")
        if n == 1:
            return [lo]
        return [lo + (hi - lo) * k / (n - 1) for k in range(n)]
    return [Q(x) for x in spec.split(",")]


def cmd_phase(args, params: ParamPoint) -> int:
    from .observables import phase_diagram, rows_to_csv, sweep_rows

    if not (params.a < 0 and params.c < 0):
        raise ParameterError("the phase diagram needs a < 0 and c < 0")
    sizes = [int(x) for x in args.sizes.split(",")] if args.sizes else []
    rows = []
    for rho in _rho_grid(args.rho):
        if not 0 <= rho < 1:
            raise ParameterError(f"rho_star={rho} outside [0, 1)")
        ph = phase_diagram(rho, params)
        rows.append({
            "N": "", "m": "", "rho_star": rational_to_str(rho), "t": rational_to_str(params.t),
            "a": rational_to_str(params.a), "b": rational_to_str(params.b), "c": rational_to_str(params.c),
            "d": rational_to_str(params.d), "xi": "1", "Z": "", "J": repr(_current(ph.J, args.current_convention)),
            "rho_bullet": repr(ph.rho_bullet), "phase": ph.phase, "method": "asymptotic",
        })
        if sizes:
            for r in sweep_rows(params, sizes, rho, method="mimachi"):
                r["J"] = repr(_current(float(r["J"]), args.current_convention))
                rows.append(r)
    _emit(args, _envelope("phase", params, {"current_convention": args.current_convention, "rows": rows}),
          csv_text=rows_to_csv(rows))
    return 0


def _parse_count(text: str) -> int:
    v = float(text)
    if v != int(v) or v < 0:
        raise argparse.ArgumentTypeError(f"{text!r} is not a non-negative integer")
    return int(v)


def cmd_simulate(args, params: ParamPoint) -> int:
    from .montecarlo import SimConfig, compare, simulate
    from .qkz import build_state

    cfg = SimConfig(args.n, args.m, params, events=args.events, burn_in=args.burn_in, seed=args.seed,
                    stride=args.stride, batches=args.batches)
    res = simulate(cfg)
    body = res.to_json_obj()
    body["current"]["mean"] = _current(body["current"]["mean"], args.current_convention)
    body["current"]["convention"] = args.current_convention
    ok = True
    if args.compare and args.n <= args.cap:
        rep = compare(res, build_state(args.n, args.m, params), tv_threshold=args.tv_threshold)
        rep["current_exact"] = _current(rep["current_exact"], args.current_convention)
        rep["current_sim"] = _current(rep["current_sim"], args.current_convention)
        rep["current_pass"] = abs(rep["current_z"]) < args.z_threshold
        body["comparison"] = rep
        ok = rep["tv_pass"] and rep["current_pass"]
    _emit(args, _envelope("simulate", params, body))
    return 0 if ok else EXIT_FAIL


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--params", help=f"TOML parameter file or preset name ({', '.join(PRESETS)})")
    g.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=P/Q",
                   help="override one parameter (repeatable)")
    g.add_argument("--out", help="write output here instead of stdout")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--current-convention", choices=("paper", "rightward", "leftward"), default="paper",
                   help="sign of reported currents; 'paper' and 'rightward' coincide")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--tol", type=float, default=1e-8)
    g.add_argument("--cap", type=int, default=8, help="largest N for exact construction")

    p = argparse.ArgumentParser(prog="koornwinder-asep", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("steady", parents=[common], help="exact stationary components, Z, current, density")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--kernel", action="store_true", help="also compute the kernel dimension of M")

    v = sub.add_parser("verify", parents=[common], help="run an identity suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--n", type=int, default=3)
    v.add_argument("--m", type=int, default=1)
    v.add_argument("--nmax", type=int, default=12, help="hcoeff: largest n")
    v.add_argument("--mmax", type=int, default=8, help="aw-contiguous: largest degree")
    v.add_argument("--xi", default="2", help="fugacity: rational fugacity")
    v.add_argument("--degree", type=int, default=3, help="hecke: monomial degree bound")
    v.add_argument("--points", type=int, default=5, help="random points per identity")

    pa = sub.add_parser("partition", parents=[common], help="partition function Z_{N,m}")
    pa.add_argument("--n", type=int, required=True)
    pa.add_argument("--m", type=int, default=0)
    pa.add_argument("--xi", default=None, help="fugacity per first-class particle")
    pa.add_argument("--method", choices=("exact", "mimachi"), default="exact")

    o = sub.add_parser("observables", parents=[common], help="current and first-class density")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--m", type=int, default=0)
    o.add_argument("--method", choices=("exact", "mimachi"), default="exact")

    ph = sub.add_parser("phase", parents=[common], help="large-N phase diagram and finite-size scans")
    ph.add_argument("--rho", default="0", help="second-class density: value, list or start:stop:count")
    ph.add_argument("--sizes", default="", help="comma-separated N for finite-size rows (contour integral)")

    si = sub.add_parser("simulate", parents=[common], help="Gillespie simulation and comparison")
    si.add_argument("--n", type=int, required=True)
    si.add_argument("--m", type=int, default=0)
    si.add_argument("--events", type=_parse_count, default=10_000_000)
    si.add_argument("--burn-in", type=_parse_count, default=100_000)
    si.add_argument("--stride", type=int, default=1)
    si.add_argument("--batches", type=int, default=50)
    si.add_argument("--no-compare", dest="compare", action="store_false")
    si.add_argument("--tv-threshold", type=float, default=0.01)
    si.add_argument("--z-threshold", type=float, default=3.0)

    sub.add_parser("reference", help="print the option reference as Markdown")
    return p


def reference_markdown(parser: Optional[argparse.ArgumentParser] = None) -> str:
    parser = parser or build_parser()
    lines = ["# koornwinder-asep command reference", "", "```", parser.format_help().rstrip(), "```", ""]
    for action in parser._subparsers._group_actions:  # noqa: SLF001 - argparse has no public accessor
        for name, sp in action.choices.items():
            lines += [f"## {name}", "", "```", sp.format_help().rstrip(), "```", ""]
    return "\n".join(lines)


COMMANDS = {
    "steady": cmd_steady,
    "verify": cmd_verify,
    "partition": cmd_partition,
    "observables": cmd_observables,
    "phase": cmd_phase,
    "simulate": cmd_simulate,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "reference":
        sys.stdout.write(reference_markdown(parser))
        return 0
    try:
        params = load_params(args.params, args.overrides)
        return COMMANDS[args.command](args, params)
    except (ParameterError, ResonanceError, SectorError, SizeError, SimConfigError, FileNotFoundError,
            tomli.TOMLDecodeError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
