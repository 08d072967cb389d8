"""Command-line driver: ``frobkill <command> ...``.

Exit codes: 0 ok, 2 precondition, 3 budget, 4 verify-fail, 5 parse.
Errors are reported on stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import budget
from .cech import CechComplex, Cochain, lc_graded_piece
from .errors import BudgetExceeded, FrobKillError, ParseError, PreconditionError
from .frobenius import ClassHandle, find_relation
from .groebner import hilbert_function
from .kill import bundle, kill_all, kill_class, trivialize_relation, verify_certificate
from .ringfile import atomic_write, canonical_json, read_ring, ring_hash, seal, tower_to_text

BUDGET_ENV = "CHARP_KILL_BUDGET_MS"


def degree_range(text):
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise argparse.ArgumentTypeError(f"empty degree range {text!r}")
    return a, b


def _emit(args, obj, out):
    text = canonical_json(obj)
    if args.out:
        atomic_write(args.out, text)
        print(f"wrote {args.out}", file=out)
    else:
        out.write(text)


def _load_class(path, pres, cx):
    fname, _, idx = path.partition(":") if not os.path.exists(path) else (path, "", "")
    try:
        with open(fname, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read class file {fname}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"class file {fname} is not JSON: {exc}") from None
    if "classes" in data:
        data = data["classes"][int(idx or 0)]
    if data.get("ring_hash") not in (None, ring_hash(pres)):
        raise PreconditionError("class file belongs to a different ring")
    try:
        c = Cochain.from_json(cx, data["cocycle"])
        return ClassHandle(c, int(data["degree"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed class file: {exc}") from None


def _class_json(pres, c, t, index):
    return {"ring_hash": ring_hash(pres), "level": c.level, "degree": t, "index": index,
            "cocycle": c.to_json()}


def cmd_hilbert(args, out):
    pres = read_ring(args.ring)
    pres.require_graded()
    lo, hi = args.degrees
    for t in range(lo, hi + 1):
        print(f"{t}\t{hilbert_function(pres.ideal, t) if t >= 0 else 0}", file=out)
    return 0


def cmd_lc(args, out):
    pres = read_ring(args.ring)
    cx = CechComplex(pres)
    lo, hi = args.degrees
    names = [pres.ring.names[j] for j in pres.cech]
    print(f"# H^{args.i} with respect to ({', '.join(names)}), p = {pres.p}", file=out)
    print("t\tdim\tkoszul_level", file=out)
    classes = []
    for t in range(lo, hi + 1):
        pc = lc_graded_piece(cx, args.i, t, args.koszul_cap)
        print(f"{t}\t{pc.dimension}\t{pc.koszul_level}", file=out)
        for k, c in enumerate(pc.basis):
            classes.append(_class_json(pres, c, t, k))
    for cl in classes:
        comps = ", ".join(
            f"{list(J)}: ({num})/{den}" for J, num, den in cl["cocycle"]["components"]
        )
        print(f"class t={cl['degree']} #{cl['index']}: {{{comps}}}", file=out)
    if args.out:
        atomic_write(args.out, canonical_json({"kind": "lc-classes", "level": args.i,
                                               "classes": classes}))
        print(f"wrote {args.out}", file=out)
    return 0


def _auto_class(args, pres, cx):
    lo, hi = args.degrees
    for t in range(lo, hi + 1):
        pc = lc_graded_piece(cx, args.i, t, args.koszul_cap)
        if pc.dimension:
            return ClassHandle(pc.basis[0], t, (args.i, t, 0))
    raise PreconditionError(f"H^{args.i} vanishes on degrees {lo}..{hi}; no class to use")


def cmd_frob(args, out):
    pres = read_ring(args.ring)
    cx = CechComplex(pres)
    if args.cls:
        alpha = _load_class(args.cls, pres, cx)
    else:
        alpha = _auto_class(args, pres, cx)
    rel = find_relation(alpha, orbit_cap=args.orbit_cap, exp_cap=args.exp_cap)
    print(f"class degree {alpha.degree}", file=out)
    print(f"g(T) = {rel.g.describe()}", file=out)
    if not rel.degenerate:
        print(f"beta (Koszul level {rel.koszul_level}):", file=out)
        for J, num, den in rel.beta.to_json()["components"]:
            print(f"  {list(J)}: ({num})/{den}", file=out)
    if args.out:
        atomic_write(args.out, canonical_json(seal({
            "kind": "frobenius-relation", "ring_hash": ring_hash(pres),
            "class": alpha.cocycle.to_json(), "degree": alpha.degree,
            "g": rel.g.to_json(), "beta": rel.beta.to_json(),
        })))
        print(f"wrote {args.out}", file=out)
    return 0


def cmd_kill(args, out):
    pres = read_ring(args.ring)
    pres.require_graded()
    cx = CechComplex(pres)
    if args.cls:
        alpha = _load_class(args.cls, pres, cx)
        T, cert = kill_class(alpha, cx, orbit_cap=args.orbit_cap, exp_cap=args.exp_cap)
        obj = cert.data
    else:
        T, certs = kill_all(pres, args.i, cx, args.degrees, args.guard, args.koszul_cap,
                            args.orbit_cap, args.exp_cap)
        obj = bundle(pres, args.i, T, certs, args.degrees, args.guard)
    if args.out:
        out.write(tower_to_text(T))
    _emit(args, obj, out)
    return 0


def cmd_trivialize(args, out):
    pres = read_ring(args.ring)
    pres.require_graded()
    params = [pres.ring.parse(x) for x in args.params.split(",") if x.strip()]
    w = pres.ring.parse(args.witness)
    cert = trivialize_relation(pres, params, w, args.degrees, args.guard, args.koszul_cap,
                               args.orbit_cap, args.exp_cap)
    if args.out:
        out.write(tower_to_text(cert.tower))
        out.write("cofactors = " + ", ".join(c.to_string() for c in cert.cofactors) + "\n")
    _emit(args, cert.data, out)
    return 0


def cmd_verify(args, out):
    pres = read_ring(args.ring)
    try:
        with open(args.cert, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read certificate {args.cert}: {exc.strerror}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        print(f"  FAIL format: not JSON ({exc})\nFAIL", file=out)
        return 4
    report = verify_certificate(data, pres)
    print(report, file=out)
    return 0 if report.ok else 4


def build_parser():
    ap = argparse.ArgumentParser(prog="frobkill", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, degrees=(-3, 3)):
        p.add_argument("ring", help="ring file")
        p.add_argument("--degrees", type=degree_range, default=degrees, metavar="A..B")
        p.add_argument("--pair-cap", type=int, default=None, help="Gröbner pair budget")
        p.add_argument("--exp-cap", type=int, default=None, help="Koszul level cap for boundary search")
        p.add_argument("--koszul-cap", type=int, default=12, help="Koszul level cap for stabilization")
        p.add_argument("--orbit-cap", type=int, default=4, help="largest Frobenius exponent s tried")
        p.add_argument("--guard", type=int, default=3, help="guard band width")
        p.add_argument("--out", default=None, help="output file (atomic write)")

    p = sub.add_parser("hilbert", help="Hilbert function table")
    common(p, (0, 6))
    p.set_defaults(fn=cmd_hilbert)
    p = sub.add_parser("lc", help="graded local cohomology table and basis cocycles")
    common(p)
    p.add_argument("--i", type=int, required=True)
    p.set_defaults(fn=cmd_lc)
    p = sub.add_parser("frob", help="Frobenius relation g with g(alpha) = 0")
    common(p)
    p.add_argument("--i", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--class", dest="cls", metavar="FILE")
    g.add_argument("--auto", action="store_true")
    p.set_defaults(fn=cmd_frob)
    p = sub.add_parser("kill", help="kill a class (or all of H^i) in a finite extension")
    common(p)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--class", dest="cls", metavar="FILE")
    p.set_defaults(fn=cmd_kill)
    p = sub.add_parser("trivialize", help="trivialize a colon relation in a tower")
    common(p)
    p.add_argument("--params", required=True, help="comma-separated parameters")
    p.add_argument("--witness", required=True)
    p.set_defaults(fn=cmd_trivialize)
    p = sub.add_parser("verify", help="re-check a certificate against a ring")
    p.add_argument("cert")
    p.add_argument("ring")
    p.set_defaults(fn=cmd_verify)
    return ap


def _budget_ms():
    raw = os.environ.get(BUDGET_ENV)
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{BUDGET_ENV} must be an integer number of milliseconds") from None


def _glue_negative(argv):
    """Let ``--degrees -2..4`` through argparse (it would read -2..4 as a flag)."""
    out = []
    it = iter(argv)
    for a in it:
        if a == "--degrees":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--degrees={nxt}")
        else:
            out.append(a)
    return out


def run_command(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(_glue_negative(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as exc:
        return 5 if exc.code else 0
    try:
        with budget.time_budget(_budget_ms()), budget.pair_cap(getattr(args, "pair_cap", None)):
            if getattr(args, "i", None) is not None and args.i < 0:
                raise PreconditionError("cohomological degree must be >= 0")
            return args.fn(args, out)
    except FrobKillError as exc:
        err.write(json.dumps({"error": exc.category, "message": str(exc)}) + "\n")
        return exc.exit_code
    except RecursionError:
        err.write(json.dumps({"error": BudgetExceeded.category, "message": "recursion limit"}) + "\n")
        return BudgetExceeded.exit_code


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
