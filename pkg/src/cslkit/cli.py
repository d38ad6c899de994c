"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 certificate or verification
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import certify, replay, report
from .errors import CertificateFailure, InvalidInput
from .interp import as_vector
from .lattice import Lattice, SymbolicNest, complete_lattice

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CERT = 3


def lattice_from_document(doc, *, strict: bool = False) -> Lattice:
    if not isinstance(doc, dict) or "dimension" not in doc or "members" not in doc:
        raise InvalidInput("lattice document needs 'dimension' and 'members'")
    d, members = doc["dimension"], doc["members"]
    if not isinstance(d, int) or isinstance(d, bool) or not isinstance(members, list) \
            or not all(isinstance(m, list) for m in members):
        raise InvalidInput("'dimension' must be an integer and 'members' an array of arrays")
    return complete_lattice(members, d, strict=strict)


def parse_lattice_file(path: str, *, strict: bool = False) -> Lattice:
    """Read a lattice document; non-closed families are closed unless ``strict``."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: malformed document: {exc}") from exc
    return lattice_from_document(doc, strict=strict)


def dump_lattice(L: Lattice) -> str:
    return json.dumps(L.to_dict(), sort_keys=True) + "\n"


def parse_vector(text: str):
    text = text.strip()
    if text.startswith("["):
        try:
            vals = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"malformed vector {text!r}") from exc
        if not isinstance(vals, list):
            raise InvalidInput(f"malformed vector {text!r}")
    else:
        vals = [v for v in text.split(",")]
    return as_vector(str(v) if not isinstance(v, str) else v for v in vals)


def _emit(obj, json_path=None, out=None) -> None:
    out = out or sys.stdout
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    out.write(text)
    if json_path:
        with open(json_path, "w") as fh:
            fh.write(text)


def _load(args) -> Lattice:
    return parse_lattice_file(args.lattice, strict=args.strict)


def _cmd_analyze(args) -> int:
    if args.symbolic:
        nest = SymbolicNest.omega() if args.symbolic == "omega" else SymbolicNest.omega_star()
        _emit(report.analyze_symbolic(nest), args.json)
        return EXIT_OK
    if not args.lattice:
        raise InvalidInput("analyze needs a lattice file or --symbolic")
    _emit(report.analyze_lattice(_load(args)), args.json)
    return EXIT_OK


def _cmd_lance(args) -> int:
    L = _load(args)
    _emit(report.lance_report(L, as_vector(parse_vector(args.x), L.dimension),
                              as_vector(parse_vector(args.y), L.dimension)), args.json)
    return EXIT_OK


def _cmd_orbit(args) -> int:
    L = _load(args)
    _emit(report.orbit_report(L, as_vector(parse_vector(args.x), L.dimension)), args.json)
    return EXIT_OK


def _cmd_rank_one(args) -> int:
    L = _load(args)
    _emit(report.rank_one_report(L, as_vector(parse_vector(args.x), L.dimension),
                                 as_vector(parse_vector(args.y), L.dimension)), args.json)
    return EXIT_OK


def _cmd_interpolate(args) -> int:
    L = _load(args)
    if args.tol <= 0:
        raise InvalidInput("--tol must be positive")
    _emit(report.interpolate_report(L, as_vector(parse_vector(args.x), L.dimension),
                                    as_vector(parse_vector(args.y), L.dimension), args.tol), args.json)
    return EXIT_OK


def _csv_rows(doc) -> list:
    c = doc["construction"]
    if c == "A":
        return [(r["k"], replay.unq(r["ratio"]), replay.unq(r["threshold"])) for r in doc["records"]]
    if c == "C":
        return [(r["k"], replay.unq(r["lower_bound"]), replay.unq(r["threshold"])) for r in doc["records"]]
    if c == "N":
        ex = doc["exclusion"]
        return [(ex["k"], replay.unq(ex["ratio"]), replay.unq(ex["threshold"]))]
    # B: exclusion witnesses, x against D_lambda at even n and y against D_mu at odd n
    rows = []
    for m in doc["memberships"]:
        if m["verdict"] == "outside":
            rows += [(n, replay.unq(t), Fraction(1)) for n, t in m["witnesses"]]
    return sorted(rows)


def _write_csv(path, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "certified_ratio_lower_bound", "threshold"])
    for k, v, t in rows:
        w.writerow([k, report.render(v), report.render(t)])
    with open(path, "w") as fh:
        fh.write(buf.getvalue())


def _cmd_counterexample(args) -> int:
    limit = certify.depth_limit()
    for name in ("kmax", "depth"):
        v = getattr(args, name)
        if v is not None and v < 1:
            raise InvalidInput(f"--{name} must be positive")
    if args.depth is not None and args.depth > limit:
        raise InvalidInput(f"--depth {args.depth} exceeds CSLKIT_DEPTH_LIMIT={limit}")
    if args.id == "A" and (args.kmax or 50) >= (args.depth or 200):
        raise InvalidInput("--kmax must be below --depth")
    eps_sq = None
    if args.id == "N":
        if args.eps_sq is not None:
            eps_sq = replay.unq(args.eps_sq)
        elif args.eps is not None:
            eps_sq = replay.unq(args.eps) ** 2
        else:
            eps_sq = Fraction(1, 1000)
        if not isinstance(eps_sq, Fraction) or eps_sq <= 0:
            raise InvalidInput("epsilon must be a positive rational")
    doc = replay.build_document(args.id, k_max=args.kmax, depth=args.depth, eps_sq=eps_sq)
    text = replay.dumps(doc)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.csv:
        _write_csv(args.csv, _csv_rows(doc))
    fails = replay.verify_document(doc)
    if fails or not doc["conclusion"]:
        for f in fails:
            print(f"FAIL {f}", file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        with open(args.certificate) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {args.certificate}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"malformed certificate: {exc}") from exc
    fails = replay.verify_document(doc)
    if fails:
        for f in fails:
            print(f"FAIL {f}", file=sys.stderr)
        raise CertificateFailure(f"{len(fails)} check(s) failed")
    print(f"OK construction {doc['construction']} ({doc['cert_status']})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cslkit", description="Invariant manifolds and interpolation for CSL-algebras")
    sub = p.add_subparsers(dest="command", required=True)

    def lattice_args(sp, optional=False):
        if optional:
            sp.add_argument("lattice", nargs="?")
        else:
            sp.add_argument("lattice")
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--complete", dest="strict", action="store_false",
                       help="close the family under meet and join (default)")
        g.add_argument("--strict", dest="strict", action="store_true",
                       help="reject families that are not already lattices")
        sp.set_defaults(strict=False)
        sp.add_argument("--json", metavar="PATH")

    sp = sub.add_parser("analyze", help="report the lattice conditions")
    lattice_args(sp, optional=True)
    sp.add_argument("--symbolic", choices=["omega", "omega-star"])
    sp.set_defaults(func=_cmd_analyze)

    for name, func, needs_y in (("lance", _cmd_lance, True), ("orbit", _cmd_orbit, False),
                                ("rank-one", _cmd_rank_one, True), ("interpolate", _cmd_interpolate, True)):
        sp = sub.add_parser(name)
        lattice_args(sp)
        sp.add_argument("--x", required=True, help='vector, e.g. "1,1/2,0" or \'["1","1/2",0]\'')
        if needs_y:
            sp.add_argument("--y", required=True)
        if name == "interpolate":
            sp.add_argument("--tol", type=float, default=1e-7)
        sp.set_defaults(func=func)

    sp = sub.add_parser("counterexample", help="emit a certificate for construction A, B, C or N")
    sp.add_argument("id", choices=["A", "B", "C", "N"])
    sp.add_argument("--kmax", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--eps", help="rational epsilon for N (its square is used)")
    sp.add_argument("--eps-sq", dest="eps_sq", help="rational epsilon^2 for N")
    sp.add_argument("--csv", metavar="PATH")
    sp.add_argument("--json", metavar="PATH", help="write the certificate here instead of stdout")
    sp.set_defaults(func=_cmd_counterexample)

    sp = sub.add_parser("verify", help="replay a serialized certificate")
    sp.add_argument("certificate")
    sp.set_defaults(func=_cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CertificateFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CERT


if __name__ == "__main__":
    sys.exit(main())
