"""Command-line front end: every command prints one JSON document on stdout.

Exit codes: 0 success, 1 invalid input, 2 internal or certification failure,
3 not found / no witness.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from sympy import isprime

from . import cmfield, curves, embedding, quaternion
from .errors import InvalidInput, SexticCMError
from .exactmath import format_rational, spec_from_json


def _resolve(path: str) -> Path:
    """A path on disk, or the name of a bundled fixture (e.g. ``zeta7.json``)."""
    p = Path(path)
    if p.exists():
        return p
    bundled = resources.files("sexticcm") / "data" / path
    if bundled.is_file():
        return Path(str(bundled))
    raise InvalidInput(f"{path}: no such file (and no bundled fixture of that name)")


def _read_json(path: str):
    try:
        return json.loads(_resolve(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: invalid JSON ({exc})") from exc


def _spec(args):
    if not args.spec:
        raise InvalidInput("--spec is required")
    return spec_from_json(_read_json(args.spec))


def _prime(args) -> int:
    if args.prime is None:
        raise InvalidInput("--prime is required")
    if not isprime(args.prime):
        raise InvalidInput(f"{args.prime} is not prime")
    return args.prime


def _curve(args):
    if bool(args.cover) == bool(args.picard):
        raise InvalidInput("give exactly one of --cover N,a1,a2 or --picard FILE")
    if args.cover:
        return curves.CoverSpec.parse(args.cover)
    return curves.PicardSpec.from_json(_read_json(args.picard))


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args):
    return cmfield.field_report(_spec(args))


def cmd_cm_types(args):
    spec = _spec(args)
    galois = cmfield.classify(spec)
    types = cmfield.enumerate_cm_types(spec, galois)
    return {
        "case": galois.case_index,
        "cm_types": [t.to_json() for t in types],
        "imprimitive": sum(1 for t in types if not t.primitive),
    }


def cmd_bound(args):
    spec = _spec(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        b = cmfield.prime_bound(spec)
    return {
        "trace": format_rational(b.trace),
        "bound": format_rational(b.bound),
        "max_prime": b.max_prime,
        "applicable": b.applicable,
    }


def cmd_quat_info(args):
    p = _prime(args)
    alg = quaternion.build_algebra(p)
    order = quaternion.maximal_order(alg)
    order.certify()
    ram = quaternion.ramification_set(alg)
    return {
        "p": p,
        "a": alg.a,
        "b": alg.b,
        "epsilon": alg.epsilon,
        "q": alg.q,
        "ramification": sorted(str(v) for v in ram),
        "order": order.to_json(),
        "reduced_discriminant": format_rational(order.reduced_discriminant()),
    }


def cmd_search_embedding(args):
    spec, p = _spec(args), _prime(args)
    outcome = embedding.search_solutions(spec, p, budget=args.budget, workers=args.workers)
    out = outcome.to_json()
    if args.output:
        Path(args.output).write_text(json.dumps(out, indent=1) + "\n", encoding="utf-8")
    return out


def cmd_check_embedding(args):
    if not args.solution:
        raise InvalidInput("--solution FILE is required")
    reports = embedding.check_certificate(_read_json(args.solution))
    return {
        "all_pass": all(r.overall for r in reports),
        "checked": len(reports),
        "reports": [r.to_json() for r in reports],
    }


def cmd_degenerate(args):
    spec, p = _spec(args), _prime(args)
    cand = embedding.degenerate_solution(spec, p, max_denominator=args.max_denominator)
    out = embedding.certificate_json(spec, p, [cand])
    if args.output:
        Path(args.output).write_text(json.dumps(out, indent=1) + "\n", encoding="utf-8")
    return out


def cmd_curve_genus(args):
    curve = _curve(args)
    out = {"curve": curve.to_json(), "genus": curves.genus(curve)}
    if isinstance(curve, curves.CoverSpec):
        out["normal_form"] = list(curves.normalize_cover(curve))
    return out


def cmd_curve_cmtype(args):
    curve = _curve(args)
    if not isinstance(curve, curves.CoverSpec):
        raise InvalidInput("curve-cmtype needs --cover")
    return {"curve": curve.to_json(), **curves.cover_cm_type(curve).to_json()}


def cmd_curve_zeta(args):
    curve, p = _curve(args), _prime(args)
    out = curves.zeta_classify(curve, p).to_json(curve)
    if args.ext:
        out["ext_counts"] = [curves.count_points(curve, p, k) for k in range(1, args.ext + 1)]
    return out


def _sweep_one(payload):
    curve, p = payload
    return curves.sweep_row(curve, p)


def cmd_sweep(args):
    curve = _curve(args)
    primes = [p for p in range(2, args.max_prime) if isprime(p)]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_one, [(curve, p) for p in primes]))
    else:
        rows = [curves.sweep_row(curve, p) for p in primes]
    return {"curve": curve.to_json(), "max_prime": args.max_prime, "rows": rows}


COMMANDS = {
    "classify": (cmd_classify, "Galois classification and CM-type report of a sextic CM-field"),
    "cm-types": (cmd_cm_types, "CM-types of the field up to complex conjugation"),
    "bound": (cmd_bound, "prime bound 4 Tr(alpha)^6 / 3^6"),
    "quat-info": (cmd_quat_info, "quaternion algebra ramified at p and infinity, with a maximal order"),
    "search-embedding": (cmd_search_embedding, "exhaustive search for embeddings into M3(B)"),
    "check-embedding": (cmd_check_embedding, "re-check a solution file"),
    "degenerate": (cmd_degenerate, "explicit embedding for fields containing an imaginary quadratic field"),
    "curve-genus": (cmd_curve_genus, "genus of a cyclic cover or Picard curve"),
    "curve-cmtype": (cmd_curve_cmtype, "eigenspace dimensions and CM-type of a cyclic cover"),
    "curve-zeta": (cmd_curve_zeta, "L-polynomial, Newton slopes and reduction type at p"),
    "sweep": (cmd_sweep, "reduction types at all primes below a cap"),
}


class _Parser(argparse.ArgumentParser):
    # usage errors become InvalidInput so they reach stdout as JSON like every other failure
    def error(self, message):
        raise InvalidInput(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sexticcm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--spec", help="field spec JSON (path or bundled fixture name)")
        sp.add_argument("--prime", type=int)
        sp.add_argument("--ext", type=int, default=0, help="also count points over F_{p^k} for k up to this")
        sp.add_argument("--cover", help="N,a1,a2 for y^N = x^a1 (x-1)^a2")
        sp.add_argument("--picard", help="Picard curve JSON (path or bundled fixture name)")
        sp.add_argument("--budget", type=int, help="override the norm budget -Tr(alpha)")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--max-denominator", type=int, default=1)
        sp.add_argument("--max-prime", type=int, default=100)
        sp.add_argument("--solution", help="solution file to check")
        sp.add_argument("--output", help="also write the result JSON to this file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help
        return 0 if not exc.code else 1
    except InvalidInput as exc:
        json.dump({"error": {"type": "InvalidInput", "message": str(exc)}}, sys.stdout, indent=1)
        sys.stdout.write("\n")
        return 1
    handler = COMMANDS[args.command][0]
    try:
        if args.workers < 1:
            raise InvalidInput("--workers must be at least 1")
        if args.ext < 0:
            raise InvalidInput("--ext must be non-negative")
        result = handler(args)
        code = 0
        if args.command == "check-embedding" and not result["all_pass"]:
            code = 2
    except SexticCMError as exc:
        result = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        code = exc.exit_code
    json.dump(result, sys.stdout, indent=1)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
