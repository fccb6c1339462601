"""Depth-oriented technology mapping with a pluggable cell predicate.

LUT-k mode admits every K-feasible cut; DSLUT mode admits a cut only if
its function Boolean-matches the bit assignment, with match results
memoized per NPN-canonical class.  Covering picks, per needed node, the
first admissible cut in (depth, leaf count, lexicographic leaves) order,
so results are schedule-independent.
"""

import math
from dataclasses import dataclass, field

from . import cuts as cuts_mod
from . import model as model_mod
from . import muxtree, plb
from .boolfn import npn_canonical, shrink_to_support
from .errors import ParseError, UsageError


@dataclass
class MappedCell:
    node: int
    cut: cuts_mod.Cut
    tt: object                 # function over the cut leaves, ascending id order
    sol: object = None         # MatchSolution in DSLUT mode


@dataclass
class Mapping:
    k: int
    cell: str                  # "lut" or "dslut"
    cells: dict                # node id -> MappedCell
    max_level: int
    n_plb: int
    ba: object = None
    tree: object = None        # pruned MUX tree shared by all DSLUT cells
    match_decisions: dict = field(default_factory=dict)  # canonical hex -> bool


def map_netlist(aig, k, cut_limit=8, ba=None, exhaustive=False, decisions=None,
                area_recovery=False):
    """Map one netlist onto LUT-k (ba=None) or onto the given bit assignment."""
    if ba is not None and ba.k != k:
        raise UsageError("cut size %d != bit assignment arity %d" % (k, ba.k))
    sol_cache = {}
    fn_memo = {}
    decisions = dict(decisions) if decisions else {}

    def canon_of(v, cut):
        key = (v, cut.leaves)
        if key not in fn_memo:
            tt = cuts_mod.cut_function(aig, v, cut)
            small, nvars = shrink_to_support(tt)
            canon, _ = npn_canonical(small)
            fn_memo[key] = (tt, canon, nvars)
        return fn_memo[key]

    admissible = None
    if ba is not None:

        def admissible(v, cut):
            _, canon, nvars = canon_of(v, cut)
            key = (canon.to_hex(), nvars)
            if key not in sol_cache and canon.to_hex() in decisions:
                sol_cache[key] = True if decisions[canon.to_hex()] else None
            if key not in sol_cache:
                sol_cache[key] = plb.match(ba, canon)
            return sol_cache[key] is not None

    cut_pass = cuts_mod.enumerate_cuts(
        aig, k, cut_limit, exhaustive=exhaustive, admissible=admissible)
    selected = cuts_mod.extract_cover(
        aig, cut_pass, area_recovery=area_recovery, admissible=admissible)

    cells = {}
    for v, cut in selected:
        tt, canon, nvars = canon_of(v, cut)
        sol = None
        if ba is not None:
            sol = plb.match_with_cache(ba, tt, sol_cache)
        cells[v] = MappedCell(v, cut, tt, sol)

    max_level = 0
    for v, _ in aig.outputs:
        if aig.is_and[v]:
            max_level = max(max_level, cut_pass.arrival[v])
    for key, sol in sol_cache.items():
        decisions[key[0]] = sol is not None
    return Mapping(
        k=k,
        cell="lut" if ba is None else "dslut",
        cells=cells,
        max_level=int(max_level),
        n_plb=len(cells),
        ba=ba,
        tree=muxtree.build_and_prune(ba) if ba is not None else None,
        match_decisions=decisions,
    )


def simulate_mapping(mapping, aig, vector):
    """Evaluate the mapped network cell by cell; oracle for cover correctness."""
    if len(vector) != len(aig.inputs):
        raise UsageError("input vector length %d != %d inputs" % (len(vector), len(aig.inputs)))
    value = {0: 0}
    for v, bit in zip(aig.inputs, vector):
        value[v] = int(bit)
    for v in sorted(mapping.cells):
        cell = mapping.cells[v]
        u = 0
        for j, leaf in enumerate(cell.cut.leaves):
            if value[leaf]:
                u |= 1 << j
        if cell.sol is None:
            value[v] = cell.tt.eval(u)
        else:
            word = 0
            for j, (var, neg) in enumerate(cell.sol.pin_map):
                if ((u >> var) & 1) ^ neg:
                    word |= 1 << j
            value[v] = muxtree.tree_eval(mapping.tree, cell.sol.sram, word)
    return [value[v] ^ int(c) for v, c in aig.outputs]


@dataclass
class ReportRow:
    name: str
    max_level: int
    n_plb: int
    area: float = None
    delay_area: float = None


def report(mapping, arch=None, cell_area=None, name=""):
    """Area = nPLB x cell area; delay-area = maxLevel x average cell delay x area."""
    row = ReportRow(name, mapping.max_level, mapping.n_plb)
    if cell_area is None and arch is not None:
        cell_area = model_mod.plb_area(arch)
    if cell_area is not None:
        row.area = mapping.n_plb * cell_area
        if arch is not None:
            row.delay_area = mapping.max_level * model_mod.avg_delay(arch) * row.area
    return row


def geomean_row(rows):
    """Geometric mean across netlists, as used for multi-circuit summaries."""

    def geomean(values):
        if any(v is None for v in values):
            return None
        if any(v == 0 for v in values):
            return 0.0
        return math.exp(sum(math.log(v) for v in values) / len(values))

    return ReportRow(
        "geomean",
        geomean([r.max_level for r in rows]),
        geomean([r.n_plb for r in rows]),
        geomean([r.area for r in rows]),
        geomean([r.delay_area for r in rows]),
    )


def load_match_cache(path):
    """Match-cache file: one 'hex_tt MATCH|NOMATCH' line per canonical function."""
    decisions = {}
    with open(path, "r", encoding="ascii") as handle:
        for i, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2 or parts[1] not in ("MATCH", "NOMATCH"):
                raise ParseError("expected '<hex> MATCH|NOMATCH', got %r" % line.strip(), i)
            decisions[parts[0]] = parts[1] == "MATCH"
    return decisions


def save_match_cache(decisions, path):
    with open(path, "w", encoding="ascii") as handle:
        for key in sorted(decisions):
            handle.write("%s %s\n" % (key, "MATCH" if decisions[key] else "NOMATCH"))
