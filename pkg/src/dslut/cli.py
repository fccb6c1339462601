"""Command-line front end: npn, lib, gen, match, coverage, tree, model, map.

Exit codes: 0 success, 1 no-match/infeasible result, 2 usage error,
3 parse error.  Every randomized stage prints its seed; identical
arguments, files and seed give byte-identical stdout.
"""

import argparse
import os
import sys
from multiprocessing import Pool

from . import cuts, data, gen, mapper, model, muxtree, plb
from .boolfn import TruthTable, count_npn_classes, npn_canonical, npn_enum_class
from .errors import DslutError, ParseError, UsageError
from .netlist import parse_aiger

EXIT_OK = 0
EXIT_NOMATCH = 1
EXIT_USAGE = 2
EXIT_PARSE = 3


def _read_aig(path):
    try:
        with open(path, "rb") as handle:
            return parse_aiger(handle.read())
    except OSError as exc:
        raise ParseError("%s: %s" % (path, exc)) from None
    except ParseError as exc:
        raise ParseError("%s: %s" % (path, exc)) from None


def _fmt(value, digits=3):
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return "%.*f" % (digits, value)


# ---------------------------------------------------------------------------
# subcommands


def cmd_npn(args):
    if args.action == "count":
        print(count_npn_classes(args.k, allow_slow=args.allow_slow))
        return EXIT_OK
    tt = TruthTable.from_hex(args.tt)
    if args.action == "canon":
        canon, t = npn_canonical(tt)
        print("canonical %s perm=%s mask=%d outneg=%d" % (
            canon.to_hex(), ",".join(str(p) for p in t.perm), t.in_mask, int(t.out_neg)))
        return EXIT_OK
    members = npn_enum_class(tt)
    print("class size %d" % len(members))
    for member in sorted(members, key=lambda m: m.bits):
        print(member.to_hex())
    return EXIT_OK


def cmd_lib(args):
    if args.action == "build":
        aigs = [_read_aig(p) for p in args.netlists]
        lib = cuts.harvest_library(aigs, args.k, cut_limit=args.cut_limit,
                                   exhaustive=args.exhaustive_cuts)
        cuts.save_lib(lib, args.output)
        print("funclib K=%d classes=%d netlists=%d -> %s" % (
            args.k, len(lib), len(aigs), args.output))
        return EXIT_OK
    lib = cuts.load_lib(args.lib)
    rows = cuts.occurrence_report(lib, nvars=args.nvars, top_n=args.top)
    print("rank,tt,nvars,n_enum,n_cutset,n_cut_best,rate,cumulative")
    for r in rows:
        e = r.entry
        print("%d,%s,%d,%d,%d,%d,%.6f,%.6f" % (
            r.rank, e.tt.to_hex(), e.nvars, e.n_enum, e.n_cutset, e.n_cut_best,
            r.rate, r.cumulative))
    if args.plot:
        if not rows:
            raise UsageError("nothing to plot: the filtered report is empty")
        from . import plots

        plots.save_occurrence_figure(rows, args.plot)
        print("figure -> %s" % args.plot)
    return EXIT_OK


def cmd_gen(args):
    seed = int(os.environ.get("DSLUT_SEED", args.seed))
    lib = cuts.load_lib(args.lib)
    print("seed %d" % seed)
    objective = None
    if args.objective == "classes":
        lo = 3
        objective = gen.coverage_objective(lib, range(lo, args.k + 1), weighted=False)
    result = gen.generate(lib, args.k, args.bits, evals=args.evals, seed=seed,
                          num_top_funcs=args.top_funcs, log=print, objective=objective)
    plb.save_ba(result.ba, args.output)
    print("init bits=%d extended bits=%d lut4=%d" % (
        result.init.b, result.extended.b, int(result.lut4_extended)))
    print("bit assignment K=%d B=%d -> %s" % (result.ba.k, result.ba.b, args.output))
    return EXIT_OK


def cmd_match(args):
    ba = plb.load_ba(args.ba)
    tt = TruthTable.from_hex(args.tt)
    if args.method == "cegar":
        sol = plb.match_cegar(ba, tt)
    else:
        sol = plb.match(ba, tt)
    if sol is None:
        print("NOMATCH")
        return EXIT_NOMATCH
    print("MATCH pins=%s pinv=%d sram=%s" % (
        ",".join(str(v) for v, _ in sol.pin_map),
        sol.pinv_mask,
        "".join(str(b) for b in sol.sram)))
    return EXIT_OK


def _coverage_worker(payload):
    ba, hex_tt = payload
    return plb.match(ba, TruthTable.from_hex(hex_tt)) is not None


def cmd_coverage(args):
    ba = plb.load_ba(args.ba)
    lib = cuts.load_lib(args.lib)
    nvars_list = [args.nvars] if args.nvars else list(range(3, ba.k + 1))
    reports = []
    for nv in nvars_list:
        if args.jobs > 1:
            entries = lib.select(nv)
            with Pool(args.jobs) as pool:
                hits = pool.map(_coverage_worker, [(ba, e.tt.to_hex()) for e in entries])
            matched = sum(1 for h in hits if h)
            matched_w = sum(e.n_cut_best for e, h in zip(entries, hits) if h)
            rep = plb.CoverageReport(nv, matched, len(entries), matched_w,
                                     sum(e.n_cut_best for e in entries))
        else:
            rep = plb.coverage(ba, lib, nv)
        reports.append(rep)
    print("nvars,matched,total,rate,weighted_rate")
    for rep in reports:
        print("%d,%d,%d,%.6f,%.6f" % (rep.nvars, rep.matched, rep.total, rep.rate,
                                      rep.weighted_rate))
    if args.plot:
        from . import plots

        plots.save_coverage_figure(reports, args.plot)
        print("figure -> %s" % args.plot)
    return EXIT_OK


def cmd_tree(args):
    ba = plb.load_ba(args.ba)
    tree = muxtree.build_and_prune(ba)
    rep = muxtree.transistor_report(tree)
    print("transistors=%d pruned_identical=%d pruned_strash=%d" % (
        rep["transistors"], rep["pruned_identical"], rep["pruned_strash"]))
    stages = muxtree.path_stages(tree)
    print("input_stages=%s" % ",".join(str(s) for s in stages))
    if args.dot:
        with open(args.dot, "w", encoding="ascii") as handle:
            handle.write(muxtree.to_dot(tree))
        print("dot -> %s" % args.dot)
    return EXIT_OK


def cmd_model(args):
    models = model.load_arch(args.arch) if args.arch else model.default_arch()
    names = [args.variant] if args.variant else sorted(models)
    print("variant,num_sram,sram_area,mux_tree,input_buffer,other_buffer,"
          "total_plb,total_clb,avg_delay,avg_delay_pinv")
    for name in names:
        if name not in models:
            raise UsageError("variant %r not in arch file (have: %s)" % (
                name, ", ".join(sorted(models))))
        m = models[name]
        total = model.plb_area(m)
        print("%s,%d,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f,%.2f,%.2f" % (
            name, m.num_sram, m.num_sram * m.per_sram_area, m.mux_tree_area,
            m.input_buffer_area, m.other_buffer_area, total, model.clb_area(m),
            model.avg_delay(m), model.avg_delay(m, with_pinv=True)))
    return EXIT_OK


def _map_one(payload):
    path, k, cut_limit, ba_text, exhaustive, area_recovery, decisions = payload
    aig = _read_aig(path)
    ba = plb.ba_from_text(ba_text) if ba_text else None
    mapping = mapper.map_netlist(aig, k, cut_limit=cut_limit, ba=ba,
                                 exhaustive=exhaustive, decisions=decisions,
                                 area_recovery=area_recovery)
    name = os.path.basename(path)
    return name, mapping.max_level, mapping.n_plb, mapping.match_decisions


def cmd_map(args):
    ba = plb.load_ba(args.ba) if args.ba else None
    if args.arch:
        models = model.load_arch(args.arch)
    else:
        models = model.default_arch()
    variant = args.variant or (("dslut%d" % args.k) if ba else ("lut%d" % args.k))
    arch = models.get(variant)
    cell_area = model.plb_area(arch) if arch else None
    decisions = mapper.load_match_cache(args.match_cache) if args.match_cache else None

    payloads = [
        (path, args.k, args.cut_limit, plb.ba_to_text(ba) if ba else None,
         args.exhaustive_cuts, args.area_recovery, decisions)
        for path in args.netlists
    ]
    if args.jobs > 1:
        with Pool(args.jobs) as pool:
            results = pool.map(_map_one, payloads)
    else:
        results = [_map_one(p) for p in payloads]

    rows = []
    merged_decisions = dict(decisions or {})
    for name, max_level, n_plb, run_decisions in results:
        merged_decisions.update(run_decisions)
        row = mapper.ReportRow(name, max_level, n_plb)
        if cell_area is not None:
            row.area = n_plb * cell_area
            row.delay_area = max_level * model.avg_delay(arch) * row.area
        rows.append(row)
    print("netlist,max_level,n_plb,area,delay_area")
    for row in rows + [mapper.geomean_row(rows)]:
        print("%s,%s,%s,%s,%s" % (
            row.name, _fmt(row.max_level), _fmt(row.n_plb),
            _fmt(row.area), _fmt(row.delay_area)))
    if args.save_match_cache:
        mapper.save_match_cache(merged_decisions, args.save_match_cache)
        print("match cache -> %s" % args.save_match_cache)
    if args.plot:
        from . import plots

        plots.save_mapping_figure(rows, args.plot)
        print("figure -> %s" % args.plot)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument wiring


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dslut",
        description="Asymmetric-LUT design kit: harvest functions, generate and "
                    "evaluate SRAM bit assignments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("npn", help="NPN classification utilities")
    npn_sub = p.add_subparsers(dest="action", required=True)
    q = npn_sub.add_parser("count", help="count NPN classes exhaustively")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--allow-slow", action="store_true",
                   help="permit the multi-hour k=5 enumeration")
    q.set_defaults(func=cmd_npn)
    q = npn_sub.add_parser("canon", help="canonical form of a truth table")
    q.add_argument("--tt", required=True, help="hex truth table (arity from digits)")
    q.set_defaults(func=cmd_npn)
    q = npn_sub.add_parser("class", help="enumerate a full NPN class")
    q.add_argument("--tt", required=True)
    q.set_defaults(func=cmd_npn)

    p = sub.add_parser("lib", help="practical-function library")
    lib_sub = p.add_subparsers(dest="action", required=True)
    q = lib_sub.add_parser("build", help="harvest a library from netlists")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--cut-limit", type=int, default=8)
    q.add_argument("--exhaustive-cuts", action="store_true")
    q.add_argument("-o", "--output", required=True)
    q.add_argument("netlists", nargs="+")
    q.set_defaults(func=cmd_lib)
    q = lib_sub.add_parser("report", help="occurrence-rate report")
    q.add_argument("--lib", required=True)
    q.add_argument("--nvars", type=int)
    q.add_argument("--top", type=int, default=20)
    q.add_argument("--plot", help="write a rate/cumulative figure (png/pdf)")
    q.set_defaults(func=cmd_lib)

    p = sub.add_parser("gen", help="generate a bit assignment under a budget")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--top-funcs", type=int, default=8)
    p.add_argument("--evals", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lib", required=True)
    p.add_argument("--objective", choices=["weighted", "classes"], default="weighted")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("match", help="match one function against an assignment")
    p.add_argument("--ba", required=True)
    p.add_argument("--tt", required=True)
    p.add_argument("--method", choices=["partition", "cegar"], default="partition")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("coverage", help="NPN-class coverage of an assignment")
    p.add_argument("--ba", required=True)
    p.add_argument("--lib", required=True)
    p.add_argument("--nvars", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--plot")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("tree", help="MUX-tree statistics for an assignment")
    p.add_argument("--ba", required=True)
    p.add_argument("--dot", help="write a graphviz description")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("model", help="PLB/CLB area and delay arithmetic")
    p.add_argument("--arch", help="constants file (default: bundled 22nm models)")
    p.add_argument("--variant")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("map", help="depth-oriented technology mapping")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ba", help="bit assignment; omit for plain LUT-k")
    p.add_argument("--arch")
    p.add_argument("--variant", help="arch variant for areas (default lut<K>/dslut<K>)")
    p.add_argument("--cut-limit", type=int, default=8)
    p.add_argument("--exhaustive-cuts", action="store_true")
    p.add_argument("--area-recovery", action="store_true")
    p.add_argument("--match-cache", help="preload MATCH/NOMATCH decisions")
    p.add_argument("--save-match-cache")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--plot")
    p.add_argument("netlists", nargs="+")
    p.set_defaults(func=cmd_map)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except DslutError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
