"""Command-line interface.

Usage: sl3ho [OPTIONS] braid|pd|dt NOTATION

Computes integral or rational, reduced or unreduced homology of a link
diagram and, for knots, the s3 concordance invariant, reporting in the
classic session format (girth line, homology polynomials, total rank,
duality verdicts, torsion polynomials, s3 lines).
"""

from __future__ import annotations

import json
import sys
import time

from .notation import (parse_braid, parse_pd, parse_dt, plan_gluing,
                       Diagram, NotationError)
from .complexes import run_plan, ComplexError
from .homology import homology_of, HomologyError
from .invariants import s3_of_diagram, InvariantError
from .poly import format_tq

HELP = """sl3ho, a sl3-homology calculator.

Usage: sl3ho [OPTIONS] braid | pd | dt NOTATION

For example, the following three commands all compute the figure-8-knot's
integral homology:

                   sl3ho braid aBaB
                   sl3ho pd "[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]"
                   sl3ho dt "[4,6,8,2]"

Options:
-q                 Compute rational homology instead of integral.
-r                 Compute reduced homology instead of unreduced. You may
                   give a number right after -r to indicate the marked
                   strand (useful for links).

-g                 Do not attempt to optimise the girth.
-v                 Display some progress information.
-vv                Display more detailed progress information.
-t                 Display time and memory consumption.
--tree             Glue along a sub-tangle tree instead of one crossing
                   at a time.
--json             Emit the results as JSON.
-h                 Display this help message and exit.
"""


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def parse_args(argv):
    cfg = {"rational": False, "reduced": None, "skip_girth": False,
           "verbose": 0, "timing": False, "tree": False, "json": False,
           "notation": None, "input": None}
    pos = []
    for arg in argv:
        if arg == "-h" or arg == "--help":
            cfg["help"] = True
            return cfg
        elif arg == "-q":
            cfg["rational"] = True
        elif arg == "-r" or (arg.startswith("-r") and arg[2:].isdigit()):
            cfg["reduced"] = int(arg[2:]) if arg[2:] else 0
        elif arg == "-g":
            cfg["skip_girth"] = True
        elif arg == "-v":
            cfg["verbose"] = max(cfg["verbose"], 1)
        elif arg == "-vv":
            cfg["verbose"] = 2
        elif arg == "-t":
            cfg["timing"] = True
        elif arg == "--tree":
            cfg["tree"] = True
        elif arg == "--json":
            cfg["json"] = True
        elif arg.startswith("-"):
            raise CliError(f"unknown option {arg}", 2)
        else:
            pos.append(arg)
    if len(pos) != 2:
        raise CliError("expected: NOTATION-KIND DIAGRAM (see -h)", 2)
    kind, text = pos
    if kind not in ("braid", "pd", "dt"):
        raise CliError(f"unknown notation {kind!r} (braid, pd or dt)", 2)
    cfg["notation"] = kind
    cfg["input"] = text
    return cfg


def _wrap(line, width=74, indent="    "):
    if len(line) <= width:
        return line
    out = []
    cur = ""
    for piece in line.split(" "):
        cand = piece if not cur else cur + " " + piece
        if len(cand) > width and cur:
            out.append(cur)
            cur = indent + piece
        else:
            cur = cand
    out.append(cur)
    return "\n".join(out)


def run(argv, out=sys.stdout):
    try:
        cfg = parse_args(argv)
    except CliError as exc:
        print(f"error: {exc}", file=out)
        return exc.code
    if cfg.get("help"):
        print(HELP, file=out)
        return 0
    t_start = time.perf_counter()
    try:
        parser = {"braid": parse_braid, "pd": parse_pd, "dt": parse_dt}
        diagram = parser[cfg["notation"]](cfg["input"])
    except NotationError as exc:
        print(f"parse error: {exc}", file=out)
        return 2
    try:
        result = compute(diagram, cfg)
    except (ComplexError, HomologyError, InvariantError, CliError) as exc:
        code = getattr(exc, "code", 3)
        print(f"error: {exc}", file=out)
        return code
    if cfg["json"]:
        print(json.dumps(result["json"], indent=2, sort_keys=True), file=out)
    else:
        for line in result["lines"]:
            print(_wrap(line), file=out)
    if cfg["timing"] and not cfg["json"]:
        print(f"Run time in seconds: {time.perf_counter() - t_start:.0f}",
              file=out)
        print(f"Memory consumption in megabytes: {_peak_memory_mb()}",
              file=out)
    return 0


def compute(diagram: Diagram, cfg):
    plan = plan_gluing(diagram, use_tree=cfg["tree"],
                       optimise=not cfg["skip_girth"])
    lines = []
    echo = _echo_pd(diagram, plan)
    lines.append("Girth-optimised link diagram (modified pd notation) "
                 f"{echo}.")
    lines.append(f"Girth: {plan.girth}.")
    lines.append("Calculating...")
    cut = None
    if cfg["reduced"] is not None:
        comps = diagram.components()
        if diagram.n == 0:
            raise CliError("reduced homology needs at least one crossing", 3)
        if not (0 <= cfg["reduced"] < len(comps)):
            raise CliError(f"no component {cfg['reduced']} "
                           f"(diagram has {len(comps)})", 3)
        cut = comps[cfg["reduced"]][0]
    complex_ = run_plan(diagram, plan, cut_label=cut,
                        verbose=cfg["verbose"])
    ring = "rationals" if cfg["rational"] else "integers"
    table = homology_of(complex_, ring=ring, reduced=cut is not None)
    lines.append("Done. Result:")
    poincare = table.poincare()
    lines.append(f"Rational homology: {format_tq(poincare)}")
    lines.append(f"Total rank: {table.total_rank()}")
    if table.rational_self_dual():
        lines.append("Rational homology is self-dual.")
    else:
        lines.append("Rational homology is not self-dual => "
                     "the link is chiral.")
    jout = {
        "girth": plan.girth,
        "plan": plan.kind,
        "homology": {
            "free": sorted([t, q, r] for (t, q), r in table.free.items()),
            "torsion": sorted([t, q, f] for (t, q), fs in
                              table.torsion.items() for f in fs),
        },
        "total_rank": table.total_rank(),
        "rational_self_dual": table.rational_self_dual(),
    }
    if ring == "integers":
        primes = table.torsion_primes()
        if not primes:
            lines.append("Torsion-free integral homology.")
        for p in primes:
            lines.append(f"{p}-torsion: {format_tq(table.torsion_poly(p))}")
            if table.torsion_self_dual(p):
                lines.append(f"The {p}-torsion part of homology is "
                             "self-dual.")
            else:
                lines.append(f"The {p}-torsion part of homology is not "
                             "self-dual => the link is chiral.")
        jout["torsion_self_dual"] = {
            str(p): table.torsion_self_dual(p) for p in primes}
    ncomp = len(diagram.components()) + diagram.free_loops
    if cut is None and ncomp == 1:
        report = s3_of_diagram(diagram, table)
        vals = report.possible_raw_values()
        if report.raw_value is not None and len(vals) == 1:
            lines.append(f"s_3-concordance invariant: {report.raw_value}")
            lines.append(f"normalized s_3: {report.normalized_value}")
        else:
            second = report.preferred.center if report.preferred else None
            lines.append("s_3-concordance invariant: possible values "
                         f"{{{', '.join(map(str, vals))}}}"
                         + (f"; second page: {second}"
                            if second is not None else ""))
            if second is not None:
                lines.append(f"normalized s_3 (second page): {-second // 2}")
        jout["s3"] = {
            "possible_raw": vals,
            "raw": report.raw_value,
            "normalized": report.normalized_value,
            "second_page_raw": (report.preferred.center
                                if report.preferred else None),
        }
    return {"lines": lines, "json": jout}


def _echo_pd(diagram, plan):
    if plan.kind == "linear" and plan.order:
        reordered = Diagram(tuple(diagram.crossings[ci]
                                  for ci in plan.order),
                            diagram.free_loops)
        return reordered.to_pd()
    return diagram.to_pd()


def _peak_memory_mb():
    try:
        import resource
        kb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
        return f"{kb / 1024:.1f}"
    except Exception:
        return "n/a"


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
