"""matchkast command line.

Exit status: 0 when every check in the invocation passed, 1 when a check
failed (reproducer files are written and their paths printed), 2 on usage
or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Iterable, TextIO

from . import ciucu, compound, corpus, regions
from .graph import GraphError
from .kasteleyn import construct_sign_function, count_matchings, format_signs, verify_sign_function
from .oracle import BudgetExceeded, enumerate_matchings, oracle_count
from .pbg import PbgParseError, format_pbg, read_pbg
from .report import FAIL, PASS, VerificationReport
from .ring import RingError, format_poly


class UsageError(Exception):
    pass


class Session:
    """Collects reports for one invocation and writes reproducers."""

    def __init__(self, out: TextIO, report_path: str | None, report_format: str, repro_dir: str):
        self.out = out
        self.report_path = report_path
        self.report_format = report_format
        self.repro_dir = Path(repro_dir)
        self.reports: list[VerificationReport] = []

    def add(self, rep: VerificationReport, echo: bool = True) -> None:
        self.reports.append(rep)
        if echo:
            print("\t".join(rep.tsv_fields()), file=self.out)
        if rep.status == FAIL:
            d = self.repro_dir / _safe(f"{len(self.reports):04d}-{rep.subject}")
            d.mkdir(parents=True, exist_ok=True)
            for name, text in sorted((rep.reproducer or {}).items()):
                (d / name).write_text(text, encoding="utf-8")
            print(f"FAIL {rep.subject}: reproducer in {d}", file=sys.stderr)

    def finish(self) -> int:
        if self.report_path:
            with open(self.report_path, "w", encoding="utf-8") as fh:
                if self.report_format == "jsonl":
                    for r in self.reports:
                        fh.write(r.to_json() + "\n")
                else:
                    fh.write("subject\tclaim\tstatus\twitness\n")
                    for r in self.reports:
                        fh.write("\t".join(r.tsv_fields()) + "\n")
        return 1 if any(r.status == FAIL for r in self.reports) else 0


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in name)


def _emit(text: str, path: str | None, out: TextIO) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        out.write(text)


# ------------------------------------------------------------------ commands


def cmd_count(args, s: Session) -> None:
    g = read_pbg(args.graph)
    print(format_poly(count_matchings(g)), file=s.out)


def cmd_oracle(args, s: Session) -> None:
    g = read_pbg(args.graph)
    if args.list:
        for m in enumerate_matchings(g, args.budget):
            print(" ".join(m.sorted_edges()), file=s.out)
    else:
        print(format_poly(oracle_count(g, args.budget)), file=s.out)


def cmd_signs(args, s: Session) -> None:
    g = read_pbg(args.graph)
    sf = construct_sign_function(g)
    s.out.write(format_signs(sf))
    if args.verify:
        budget = None if args.cycles < 0 else args.cycles
        s.add(verify_sign_function(g, sf, budget), echo=False)


def _load_compound(args) -> compound.CompoundGraph:
    src = args.source
    if src.endswith(".cpd"):
        return compound.read_cpd(src)
    if not (args.map and args.base and args.super):
        raise UsageError("a pbg source needs --map, --base and --super")
    return compound.load_compound(src, args.map, args.base, args.super)


def cmd_compound(args, s: Session) -> None:
    cg = _load_compound(args)
    if args.action == "build":
        if args.out:
            Path(args.out + ".pbg").write_text(format_pbg(cg.graph), encoding="utf-8")
            Path(args.out + ".cpdmap").write_text(compound.format_cpdmap(cg), encoding="utf-8")
            Path(args.out + ".reduced.pbg").write_text(format_pbg(cg.reduced()), encoding="utf-8")
        else:
            s.out.write(format_pbg(cg.graph))
    elif args.action == "zero-sum":
        leaves = [args.leaf] if args.leaf else sorted(cg.leaves)
        for leaf in leaves:
            s.add(compound.verify_zero_sum(compound.family(cg, leaf)))
    elif args.action == "divide":
        s.add(compound.verify_divisibility(cg))
    elif args.action == "odd-leaves":
        ok = compound.check_odd_leaves(cg)
        s.add(VerificationReport(
            "odd-leaves", "every inner reduced face holds an odd number of leaves",
            PASS if ok else FAIL, {},
            None if ok else {
                "graph.pbg": format_pbg(cg.graph), "graph.cpdmap": compound.format_cpdmap(cg),
                "base.pbg": format_pbg(cg.base), "super.pbg": format_pbg(cg.supergraph),
            },
        ))


def cmd_rect(args, s: Session) -> None:
    g = regions.rectangle(args.m, args.n, variables=args.vars, origin_black=not args.origin_white)
    _emit(format_pbg(g), args.output, s.out)


def cmd_pillow(args, s: Session) -> None:
    _emit(format_pbg(regions.aztec_pillow(args.order)), args.output, s.out)


def cmd_decompose(args, s: Session) -> None:
    total = 0
    odd = True
    out_dir = Path(args.out) if args.out else None
    print("term\tdominoes\tcount\todd_leaves", file=s.out)
    for k, term in enumerate(regions.decompose_rectangle(args.A, args.B, args.a, args.b)):
        cg = term.compound
        c = count_matchings(cg.graph).constant_value()
        ok = compound.check_odd_leaves(cg)
        total += c
        odd &= ok
        print(f"{k}\t{len(term.dominoes)}\t{c}\t{int(ok)}", file=s.out)
        if out_dir:
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / f"term-{k:06d}.pbg").write_text(format_pbg(cg.graph), encoding="utf-8")
            (out_dir / f"term-{k:06d}.cpdmap").write_text(compound.format_cpdmap(cg), encoding="utf-8")
    if args.verify:
        big = count_matchings(regions.rectangle(args.A, args.B)).constant_value()
        params = f"{args.A},{args.B},{args.a},{args.b}"
        ok = total == big and odd
        s.add(VerificationReport(
            f"decompose:{params}", "sum of term counts equals #R(A,B); every term has odd leaves",
            PASS if ok else FAIL, {"sum": total, "count": big, "odd_leaves": odd},
            None if ok else {"params.txt": params + "\n"},
        ))


def _scan_rows(s: Session, rep: regions.ScanReport) -> None:
    print("params\tsmall\tlarge\tquotient\tstatus\tnote", file=s.out)
    for row in rep.rows:
        print("\t".join(row.tsv_fields()), file=s.out)
    for r in rep.reports():
        s.add(r, echo=False)


def cmd_scan_rect(args, s: Session) -> None:
    _scan_rows(s, regions.rect_divisibility_scan(args.a, args.b, args.max_A, args.max_B))


def cmd_scan_pillow(args, s: Session) -> None:
    _scan_rows(s, regions.pillow_divisibility_scan(args.max_order))


def _load_symmetric(args) -> ciucu.SymmetricCompound:
    half = read_pbg(args.half)
    axis = ciucu.parse_axis(Path(args.axis).read_text(encoding="utf-8"), args.axis)
    return ciucu.build_symmetric(half, axis)


def cmd_ciucu(args, s: Session) -> None:
    sc = _load_symmetric(args)
    if args.action == "build":
        _emit(format_pbg(sc.graph), args.output, s.out)
    elif args.action == "verify-lemma":
        leaves = [args.leaf] if args.leaf else list(sc.leaves)
        if not leaves:
            raise UsageError("the axis has no leaves")
        for leaf in leaves:
            s.add(ciucu.verify_ciucu_lemma(sc, leaf))
    elif args.action == "factorize":
        s.add(ciucu.verify_factorization(sc))


def cmd_gen_corpus(args, s: Session) -> None:
    entries = corpus.gen_corpus(args.seed, args.budget, args.graphs, args.compounds, args.symmetric)
    paths = corpus.write_corpus(entries, args.out)
    print(f"{len(entries)} entries, {len(paths)} files in {args.out}", file=s.out)


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="matchkast", description=__doc__.splitlines()[0])
    p.add_argument("--report", metavar="PATH", help="also write all check results to PATH")
    p.add_argument("--report-format", choices=("tsv", "jsonl"), default="tsv")
    p.add_argument("--repro-dir", default="matchkast-repro", help="where failing inputs are written")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="weighted matching count via the Kasteleyn determinant")
    c.add_argument("graph")
    c.set_defaults(func=cmd_count)

    c = sub.add_parser("oracle", help="brute-force count, or list every matching")
    c.add_argument("graph")
    c.add_argument("--list", action="store_true")
    c.add_argument("--budget", type=int, default=10**7)
    c.set_defaults(func=cmd_oracle)

    c = sub.add_parser("signs", help="print a constructed sign function")
    c.add_argument("graph")
    c.add_argument("--verify", action="store_true")
    c.add_argument("--cycles", type=int, default=-1, help="cycle budget; -1 checks all simple cycles")
    c.set_defaults(func=cmd_signs)

    c = sub.add_parser("compound", help="build and check compound graphs")
    c.add_argument("action", choices=("build", "zero-sum", "divide", "odd-leaves"))
    c.add_argument("source", help="a .cpd script, or a compound .pbg with --map/--base/--super")
    c.add_argument("--map")
    c.add_argument("--base")
    c.add_argument("--super")
    c.add_argument("--leaf")
    c.add_argument("--out", help="output prefix for build")
    c.set_defaults(func=cmd_compound)

    c = sub.add_parser("rect", help="emit R(m,n)")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--vars", action="store_true", help="one variable per edge")
    c.add_argument("--origin-white", action="store_true")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_rect)

    c = sub.add_parser("pillow", help="emit the Aztec 3-pillow of the given order")
    c.add_argument("--order", type=int, required=True)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_pillow)

    c = sub.add_parser("decompose", help="root decomposition of R(A,B) over R(a,b)")
    for name in ("A", "B", "a", "b"):
        c.add_argument(f"--{name}", type=int, required=True)
    c.add_argument("--verify", action="store_true")
    c.add_argument("--out", help="directory for the term graphs")
    c.set_defaults(func=cmd_decompose)

    c = sub.add_parser("scan-rect", help="rectangle divisibility scan")
    c.add_argument("--a", type=int, required=True)
    c.add_argument("--b", type=int, required=True)
    c.add_argument("--max-A", dest="max_A", type=int, required=True)
    c.add_argument("--max-B", dest="max_B", type=int, required=True)
    c.set_defaults(func=cmd_scan_rect)

    c = sub.add_parser("scan-pillow", help="Aztec pillow divisibility scan")
    c.add_argument("--max-order", type=int, required=True)
    c.set_defaults(func=cmd_scan_pillow)

    c = sub.add_parser("ciucu", help="symmetric compound graphs")
    c.add_argument("action", choices=("build", "verify-lemma", "factorize"))
    c.add_argument("half")
    c.add_argument("axis")
    c.add_argument("--leaf")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_ciucu)

    c = sub.add_parser("gen-corpus", help="write the deterministic test corpus")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--budget", type=int, default=corpus.DEFAULT_BUDGET)
    c.add_argument("--graphs", type=int, default=500)
    c.add_argument("--compounds", type=int, default=60)
    c.add_argument("--symmetric", type=int, default=40)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_gen_corpus)
    return p


INPUT_ERRORS = (
    OSError, PbgParseError, GraphError, RingError, ValueError,
    compound.CompoundError, ciucu.SymmetricError, BudgetExceeded,
)


def main(argv: Iterable[str] | None = None, out: TextIO | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    s = Session(out or sys.stdout, args.report, args.report_format, args.repro_dir)
    try:
        args.func(args, s)
    except UsageError as exc:
        print(f"matchkast: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"matchkast: file not found: {exc.filename}", file=sys.stderr)
        return 2
    except INPUT_ERRORS as exc:
        print(f"matchkast: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return s.finish()


if __name__ == "__main__":
    sys.exit(main())
