"""Command-line interface: ``leafy <command> ...``.

Exit codes: 0 verified / ok, 1 mismatch or malformed input, 2 resource limit.
Human-readable text goes to stdout; ``--json`` switches to a JSON report.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from leafy.lattice import LatticeKind
from leafy.polyform import Polyform

LATTICES = ("square", "hex", "tri", "cubic")
EXIT_OK, EXIT_MISMATCH, EXIT_LIMIT = 0, 1, 2

# default brute-force ranges of the verification command
DEFAULT_VERIFY = {"square": (2, 12), "hex": (2, 12), "tri": (2, 14), "cubic": (2, 9)}


class InputError(ValueError):
    """Malformed user input (file contents or option values)."""


@dataclass
class RunConfig:
    command: str
    lattice: str = None
    ranges: dict = field(default_factory=dict)
    symmetry: str = "free"
    workers: int = 1
    out: str = None
    max_mem_mb: float = None
    seed: int = 0

    def validate(self):
        if self.lattice is not None and self.lattice not in LATTICES:
            raise InputError(f"unknown lattice {self.lattice!r}")
        if self.symmetry not in ("fixed", "free"):
            raise InputError(f"symmetry must be 'fixed' or 'free', got {self.symmetry!r}")
        if self.workers < 1:
            raise InputError("--workers must be positive")
        for k, (lo, hi) in self.ranges.items():
            if k not in LATTICES:
                raise InputError(f"unknown lattice {k!r} in range")
            if lo < 2 or hi < lo:
                raise InputError(f"bad range {lo}..{hi} for {k}")
        return self


def parse_range(text: str) -> tuple:
    """``"a..b"`` or ``"a"`` -> ``(a, b)``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 2..12, got {text!r}") from None


def parse_lattice_range(text: str) -> tuple:
    """``"square:2..12"`` -> ``("square", (2, 12))``."""
    name, sep, rng = text.partition(":")
    if not sep or name not in LATTICES:
        raise argparse.ArgumentTypeError(f"expected lattice:a..b with lattice in {LATTICES}, got {text!r}")
    return name, parse_range(rng)


def read_polyform(path: str) -> Polyform:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    try:
        return Polyform.from_dict(data)
    except (ValueError, TypeError) as e:
        raise InputError(f"{path}: {e}") from None


def emit(args, payload: dict, text: str):
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def write_out(path: str, lines):
    with open(path, "w") as fh:
        for line in lines:
            fh.write(line + "\n")


# ---------------------------------------------------------------------------
# commands

def cmd_enumerate(args) -> int:
    from leafy.enumerate import enumerate_trees
    forms = list(enumerate_trees(args.lattice, args.size, args.symmetry, args.workers))
    if args.out:
        write_out(args.out, (P.to_json() for P in forms))
    if args.count_only or args.out:
        emit(args, {"lattice": args.lattice, "size": args.size, "symmetry": args.symmetry,
                    "count": len(forms)}, str(len(forms)))
    else:
        for P in forms:
            print(P.to_json())
    return EXIT_OK


def cmd_max_leaves(args) -> int:
    from leafy.enumerate import max_leaves
    rep = max_leaves(args.lattice, args.size, args.symmetry, args.witnesses, args.workers)
    if args.json:
        print(json.dumps(rep.to_dict(), sort_keys=True))
        return EXIT_OK
    print(f"{args.lattice} n={args.size} ({args.symmetry}): {rep.total} trees, "
          f"max leaves {rep.max_leaves}, {rep.witness_count} witnesses")
    for w in rep.witnesses:
        print(w.to_json())
    return EXIT_OK


def cmd_leaffn(args) -> int:
    from leafy.leaffn import ell, table
    if args.table:
        lo, hi = args.table
        rows = table(args.lattice, lo, hi)
        if args.json:
            print(json.dumps([{"n": n, "ell": e, "upper": str(u), "lower": str(l)}
                              for n, e, u, l in rows]))
        else:
            for n, e, u, l in rows:
                print(f"{n}\t{e}\t{u}\t{l}")
        return EXIT_OK
    if args.n is None:
        raise InputError("leaffn needs --n or --table")
    emit(args, {"lattice": args.lattice, "n": args.n, "ell": ell(args.lattice, args.n)},
         str(ell(args.lattice, args.n)))
    return EXIT_OK


def _ell_table(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            raw = json.load(fh)
        return {(k, int(n)): int(v) for k, row in raw.items() for n, v in row.items()}
    except (OSError, json.JSONDecodeError, AttributeError, ValueError) as e:
        raise InputError(f"{path}: cannot read leaf table: {e}") from None


def cmd_verify(args) -> int:
    from leafy.enumerate import LimitExceededError, max_leaves
    from leafy.leaffn import ell
    cfg = RunConfig("verify", ranges=dict(args.range or DEFAULT_VERIFY), workers=args.workers).validate()
    override = _ell_table(args.ell_table)
    rows, status = [], EXIT_OK
    try:
        for kind, (lo, hi) in cfg.ranges.items():
            for n in range(lo, hi + 1):
                L = max_leaves(kind, n, "free", 1, cfg.workers).max_leaves
                e = override.get((kind, n), ell(kind, n))
                rows.append({"lattice": kind, "n": n, "L": L, "ell": e, "ok": L == e})
    except LimitExceededError as e:
        status = EXIT_LIMIT
        note = str(e)
    else:
        note = ""
    bad = [r for r in rows if not r["ok"]]
    if bad and status == EXIT_OK:
        status = EXIT_MISMATCH
    rows = bad + [r for r in rows if r["ok"]]
    if args.json:
        print(json.dumps({"status": status, "mismatches": len(bad), "rows": rows, "note": note}))
    else:
        for r in rows:
            print(f"{r['lattice']}\t{r['n']}\tL={r['L']}\tell={r['ell']}\t{'ok' if r['ok'] else 'MISMATCH'}")
        if note:
            print(f"limit exceeded: {note}")
        print("verified" if status == EXIT_OK else f"{len(bad)} mismatch(es)" if status == EXIT_MISMATCH
              else "incomplete")
    return status


def _family(kind: str, lattice: str, n: int) -> Polyform:
    from leafy.enumerate import family_linear, family_polyomino
    from leafy.graft import family_polycube
    if kind == "polyomino":
        return family_polyomino(n)
    if kind == "linear":
        return family_linear(lattice or "hex", n)
    return family_polycube(n)


def cmd_family(args) -> int:
    from leafy.leaffn import ell
    from leafy.polyform import is_tree
    lo, hi = args.n
    status = EXIT_OK
    rows = []
    for n in range(lo, hi + 1):
        P = _family(args.kind, args.lattice, n)
        ok = len(P) == n and is_tree(P) and P.n1 == ell(P.lattice, n)
        status = status if ok else EXIT_MISMATCH
        rows.append((n, P, ok))
    if args.out:
        write_out(args.out, (P.to_json() for _, P, _ in rows))
    if args.json:
        print(json.dumps([{"n": n, "leaves": P.n1, "ok": ok, **P.to_dict()} for n, P, ok in rows]))
    else:
        for n, P, ok in rows:
            print(f"{n}\t{P.n1}\t{'ok' if ok else 'FAIL'}" if lo != hi or args.out else P.to_json())
    return status


def cmd_abundant(args) -> int:
    from leafy.graft import BudgetExceeded, abundant_branches
    from leafy.leaffn import ell

    def progress(i, a, f, t):
        if not args.json:
            print(f"height {i}: |A|={a} |F|={f} ({t:.1f}s)", flush=True)

    try:
        cat = abundant_branches(args.height, seed=args.seed_atomics, max_size=args.max_size,
                                time_budget=args.time_budget, out_dir=args.out,
                                resume=args.resume, progress=progress)
    except BudgetExceeded as e:
        print(f"limit exceeded: {e}", file=sys.stderr)
        return EXIT_LIMIT
    a, f = cat.counts(cat.complete_height)
    bound_ok = all(m.n1 <= ell(LatticeKind.CUBIC, m.n) for m in cat.members(final=True))
    report = {"height": cat.complete_height, "A_counts": a, "F_counts": f,
              "final_bound_ok": bound_ok, "incomplete": cat.incomplete, "note": cat.note}
    emit(args, report, f"A_counts={a} F_counts={f} final members within leaf bound: {bound_ok}")
    if cat.incomplete:
        return EXIT_LIMIT
    return EXIT_OK if bound_ok else EXIT_MISMATCH


def cmd_bijection(args) -> int:
    from leafy import saturated as S
    if (args.forward is None) == (args.inverse is None):
        raise InputError("give exactly one of --forward / --inverse")
    P = read_polyform(args.forward or args.inverse)
    try:
        if args.map == "cross":
            Q = S.cross_map(P) if args.forward else S.cross_unmap(P)
        elif args.map == "phi":
            Q = S.phi(S.FourTree(P)) if args.forward else S.phi_inverse(P).polyform
        else:
            if args.inverse:
                raise InputError("tri-hex has no inverse command; it maps polyiamonds to polyhexes")
            Q = S.tri_to_hex(P)
    except (S.NotSaturatedError, S.MalformedInputError, S.InvalidFourTreeError) as e:
        raise InputError(str(e)) from None
    if args.out:
        write_out(args.out, [Q.to_json()])
    print(Q.to_json())
    return EXIT_OK


def cmd_saturated(args) -> int:
    from leafy import saturated as S
    if args.action == "count":
        if args.half_size is not None:
            n = 2 * args.half_size if args.lattice in ("hex", "tri") else 4 * args.half_size + 1
        elif args.size is not None:
            n = args.size
        else:
            raise InputError("saturated count needs --half-size or --size")
        c = S.saturated_count(args.lattice, n, args.symmetry)
        emit(args, {"lattice": args.lattice, "size": n, "symmetry": args.symmetry, "count": c}, str(c))
        return EXIT_OK
    if args.size is None:
        raise InputError("saturated witnesses needs --size")
    ws = S.saturated_witnesses(args.lattice, args.size, args.symmetry)
    if args.json:
        print(json.dumps([w.to_dict() for w in ws]))
    else:
        for w in ws:
            print(w.to_json())
    return EXIT_OK


def cmd_render(args) -> int:
    from leafy.polyform import render
    print(render(read_polyform(args.file), degrees=args.degrees))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="leafy", description="Tree-like polyforms with many leaves.")
    ap.add_argument("--max-mem-mb", type=float, default=None,
                    help="cap on the deduplication memory (also LEAFY_MAX_MEM_MB)")
    sub = ap.add_subparsers(dest="command", required=True)
    workers = os.cpu_count() or 1

    def common(p, lattice=True, sym=True):
        if lattice:
            p.add_argument("--lattice", choices=LATTICES, required=True)
        if sym:
            p.add_argument("--symmetry", choices=("fixed", "free"), default="free")
        p.add_argument("--workers", type=int, default=workers)
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("enumerate", help="all tree-like polyforms of one size")
    common(p)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("max-leaves", help="brute-force maximum leaf count")
    common(p)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--witnesses", type=int, default=5)
    p.set_defaults(func=cmd_max_leaves)

    p = sub.add_parser("leaffn", help="closed-form leaf function")
    common(p, sym=False)
    p.add_argument("--n", type=int)
    p.add_argument("--table", type=parse_range)
    p.set_defaults(func=cmd_leaffn)

    p = sub.add_parser("verify", help="brute force against the leaf function")
    common(p, lattice=False, sym=False)
    p.add_argument("--range", type=parse_lattice_range, action="append",
                   help="lattice:a..b, repeatable (default: all four lattices)")
    p.add_argument("--ell-table", help="JSON {lattice: {n: value}} overriding leaf-function values")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("family", help="fully leafed witness families")
    p.add_argument("--kind", choices=("polyomino", "linear", "polycube"), required=True)
    p.add_argument("--lattice", choices=("hex", "tri"), help="lattice of the linear family")
    p.add_argument("--n", type=parse_range, required=True, help="size or range a..b")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("abundant", help="height-stratified abundant branch catalog")
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--max-size", type=int)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--seed-atomics", choices=("all", "5-6"), default="all",
                   help="atomic bases: all sizes or only sizes 5 and 6")
    p.add_argument("--time-budget", type=float, help="seconds before giving up (exit 2)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_abundant)

    p = sub.add_parser("bijection", help="saturated-structure bijections")
    p.add_argument("map", choices=("cross", "phi", "tri-hex"))
    p.add_argument("--forward")
    p.add_argument("--inverse")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bijection)

    p = sub.add_parser("saturated", help="saturated tree counts and witnesses")
    p.add_argument("action", choices=("count", "witnesses"))
    common(p)
    p.add_argument("--half-size", type=int)
    p.add_argument("--size", type=int)
    p.set_defaults(func=cmd_saturated)

    p = sub.add_parser("render", help="ASCII picture of a polyform JSON file")
    p.add_argument("file")
    p.add_argument("--degrees", action="store_true", help="degree-coded glyphs")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    from leafy.enumerate import LimitExceededError
    args = build_parser().parse_args(argv)
    if args.max_mem_mb is not None:
        os.environ["LEAFY_MAX_MEM_MB"] = str(args.max_mem_mb)
    if getattr(args, "workers", 1) < 1:
        print("error: --workers must be positive", file=sys.stderr)
        return EXIT_MISMATCH
    try:
        return args.func(args)
    except LimitExceededError as e:
        print(f"limit exceeded: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    except MemoryError:
        print("limit exceeded: out of memory", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
