"""K-feasible cut enumeration, cut functions, and the practical-function library.

The enumeration is the classic priority-cuts pass: a node's cuts are the
trivial cut plus up to C non-dominated merges of its fanin cuts, kept in
(depth, leaf count, lexicographic leaves) order.  Per-node arrival depths
drive both the ordering and depth-oriented covering; a pluggable
admissibility predicate lets the same pass serve plain LUT-k mapping and
Boolean-matched DSLUT mapping.

Harvesting tallies three occurrence counters per NPN class: every
successful feasible merge (n_enum), every non-trivial cut retained in a
final cut set (n_cutset), and every cut selected by the depth-oriented
cover (n_cut_best).  Counter merging is commutative, so netlists may be
harvested in any order or in parallel.
"""

from dataclasses import dataclass, field

from .boolfn import MIN_VARS, TruthTable, npn_canonical, shrink_to_support
from .errors import InternalError, ParseError, UsageError

INF = float("inf")


@dataclass(frozen=True)
class Cut:
    leaves: tuple
    sign: int

    def dominates(self, other):
        """True when self's leaves are a subset of other's."""
        return self.sign & ~other.sign == 0 and set(self.leaves) <= set(other.leaves)


def make_cut(leaves):
    sign = 0
    for leaf in leaves:
        sign |= 1 << (leaf & 63)
    return Cut(tuple(leaves), sign)


@dataclass
class CutPass:
    """Result of one enumeration pass over a netlist."""

    k: int
    cut_sets: dict       # node id -> [trivial, retained non-trivial cuts...]
    arrival: dict        # node id -> depth in cells (INF when unmappable)
    best: dict           # node id -> chosen Cut or None


def enumerate_cuts(aig, k, cut_limit=8, exhaustive=False, admissible=None,
                   on_merge=None, on_retained=None):
    """Priority-cuts pass; deterministic for fixed inputs.

    `admissible(node, cut)` gates which cuts may implement a node (None
    accepts all); inadmissible cuts still participate in fanout merges.
    `on_merge` fires once per successful feasible merge, before dominance
    pruning and truncation; `on_retained` once per retained non-trivial cut.
    """
    if k < 2:
        raise UsageError("cut size must be at least 2, got %r" % k)
    if not exhaustive and cut_limit < 1:
        raise UsageError("cut limit must be at least 1, got %r" % cut_limit)
    cut_sets = {0: [make_cut(())]}
    arrival = {0: 0}
    best = {}
    for v in aig.inputs:
        cut_sets[v] = [make_cut((v,))]
        arrival[v] = 0

    def cut_depth(cut):
        if not cut.leaves:
            return 1
        return 1 + max(arrival[l] for l in cut.leaves)

    for v in range(1, aig.n_vars + 1):
        if not aig.is_and[v]:
            continue
        (a, _), (b, _) = aig.fanins(v)
        candidates = {}
        for ca in cut_sets[a]:
            for cb in cut_sets[b]:
                # sound reject: hashed bits never outnumber distinct leaves
                if bin(ca.sign | cb.sign).count("1") > k:
                    continue
                leaves = tuple(sorted(set(ca.leaves) | set(cb.leaves)))
                if len(leaves) > k:
                    continue
                cut = make_cut(leaves)
                if on_merge:
                    on_merge(v, cut)
                candidates.setdefault(leaves, cut)
        cuts = list(candidates.values())
        # drop dominated cuts: strict supersets of another candidate
        kept = []
        for c in cuts:
            if not any(o is not c and o.dominates(c) for o in cuts):
                kept.append(c)
        kept.sort(key=lambda c: (cut_depth(c), len(c.leaves), c.leaves))
        if not exhaustive:
            kept = kept[:cut_limit]
        chosen = None
        for c in kept:
            if on_retained:
                on_retained(v, c)
            if chosen is None and (admissible is None or admissible(v, c)):
                chosen = c
        best[v] = chosen
        arrival[v] = cut_depth(chosen) if chosen is not None else INF
        cut_sets[v] = [make_cut((v,))] + kept
    return CutPass(k=k, cut_sets=cut_sets, arrival=arrival, best=best)


_VAR_PATTERNS = {}


def _var_patterns(s):
    if s not in _VAR_PATTERNS:
        n = 1 << s
        _VAR_PATTERNS[s] = [
            sum(1 << u for u in range(n) if (u >> j) & 1) for j in range(s)
        ]
    return _VAR_PATTERNS[s]


def cut_function(aig, node, cut, complement=False):
    """Truth table of `node` over the cut leaves, by bitwise simulation.

    Leaf order is ascending id; the result is padded up to two inputs
    when the cut has a single leaf (the extra input is ignored).
    `complement` reads the inverted edge of the node (an OR is the
    complement of an AND in this representation).
    """
    leaves = cut.leaves
    s = len(leaves)
    if s > 6:
        raise UsageError("cut with %d leaves exceeds 6-input truth tables" % s)
    n = 1 << s
    full = (1 << n) - 1
    value = {0: 0}
    for j, leaf in enumerate(leaves):
        value[leaf] = _var_patterns(s)[j]

    def eval_node(v):
        if v in value:
            return value[v]
        if not aig.is_and[v]:
            raise InternalError("cut %r does not cover input %d of node %d" % (leaves, v, node))
        (f0, c0), (f1, c1) = aig.fanins(v)
        r0 = eval_node(f0) ^ (full if c0 else 0)
        r1 = eval_node(f1) ^ (full if c1 else 0)
        value[v] = r0 & r1
        return value[v]

    bits = eval_node(node)
    if complement:
        bits ^= full
    k2 = max(MIN_VARS, s)
    span = n
    for _ in range(k2 - s):
        bits |= bits << span
        span <<= 1
    return TruthTable(k2, bits)


# ---------------------------------------------------------------------------
# Function library


@dataclass
class FuncLibEntry:
    tt: TruthTable       # NPN-canonical form
    nvars: int           # true support size (canonical table is padded below 2)
    n_enum: int = 0
    n_cutset: int = 0
    n_cut_best: int = 0

    @property
    def key(self):
        return (self.tt.to_hex(), self.nvars)


class FuncLib:
    """NPN-canonical truth tables with the three occurrence counters."""

    def __init__(self, k):
        self.k = k
        self.entries = {}

    def __len__(self):
        return len(self.entries)

    def bump(self, canon_tt, nvars, counter, amount=1):
        key = (canon_tt.to_hex(), nvars)
        entry = self.entries.get(key)
        if entry is None:
            entry = self.entries[key] = FuncLibEntry(canon_tt, nvars)
        setattr(entry, counter, getattr(entry, counter) + amount)

    def select(self, nvars):
        """Entries at one support size, most frequently selected first."""
        rows = [e for e in self.entries.values() if e.nvars == nvars]
        rows.sort(key=lambda e: (-e.n_cut_best, e.tt.to_hex()))
        return rows

    def sorted_entries(self):
        return sorted(self.entries.values(), key=lambda e: (e.nvars, e.tt.to_hex()))

    def merge(self, other):
        for entry in other.entries.values():
            self.bump(entry.tt, entry.nvars, "n_enum", entry.n_enum)
            self.bump(entry.tt, entry.nvars, "n_cutset", entry.n_cutset)
            self.bump(entry.tt, entry.nvars, "n_cut_best", entry.n_cut_best)

    def to_text(self):
        lines = ["funclib v1 K=%d" % self.k]
        for e in self.sorted_entries():
            lines.append("%s %d %d %d %d" % (e.tt.to_hex(), e.nvars, e.n_enum, e.n_cutset, e.n_cut_best))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = text.splitlines()
        if not lines or not lines[0].startswith("funclib v1 K="):
            raise ParseError("missing 'funclib v1 K=<K>' header", line=1)
        try:
            k = int(lines[0].split("K=", 1)[1])
        except ValueError:
            raise ParseError("bad K in header %r" % lines[0], line=1) from None
        lib = cls(k)
        for i, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 5:
                raise ParseError("expected 5 fields, got %r" % line, i)
            try:
                tt = TruthTable.from_hex(parts[0])
                nvars, n_enum, n_cutset, n_best = (int(x) for x in parts[1:])
            except (ValueError, UsageError) as exc:
                raise ParseError(str(exc), i) from None
            entry = FuncLibEntry(tt, nvars, n_enum, n_cutset, n_best)
            lib.entries[entry.key] = entry
        return lib


def load_lib(path):
    with open(path, "r", encoding="ascii") as handle:
        return FuncLib.from_text(handle.read())


def save_lib(lib, path):
    with open(path, "w", encoding="ascii") as handle:
        handle.write(lib.to_text())


def _canon_key(aig, node, cut, memo):
    key = (node, cut.leaves)
    if key in memo:
        return memo[key]
    tt = cut_function(aig, node, cut)
    small, nvars = shrink_to_support(tt)
    canon, _ = npn_canonical(small)
    memo[key] = (canon, nvars)
    return memo[key]


def harvest_library(aigs, k, cut_limit=8, exhaustive=False):
    """Build a FuncLib from netlists: enumerate, retain, then map with LUT-k.

    Trivial cuts never reach the counters (their functions are bare
    wires), which keeps n_cut_best <= n_cutset <= n_enum for every entry.
    """
    lib = FuncLib(k)
    for aig in aigs:
        memo = {}

        def on_merge(v, cut, _memo=memo, _aig=aig):
            canon, nvars = _canon_key(_aig, v, cut, _memo)
            lib.bump(canon, nvars, "n_enum")

        def on_retained(v, cut, _memo=memo, _aig=aig):
            canon, nvars = _canon_key(_aig, v, cut, _memo)
            lib.bump(canon, nvars, "n_cutset")

        cut_pass = enumerate_cuts(aig, k, cut_limit, exhaustive=exhaustive,
                                  on_merge=on_merge, on_retained=on_retained)
        for v, cut in extract_cover(aig, cut_pass):
            canon, nvars = _canon_key(aig, v, cut, memo)
            lib.bump(canon, nvars, "n_cut_best")
    return lib


def extract_cover(aig, cut_pass, area_recovery=False, admissible=None):
    """Depth-oriented cover: chosen (node, cut) pairs reachable from the outputs.

    With `area_recovery`, nodes are visited outputs-first and each picks,
    among its depth-optimal admissible cuts, the one demanding the fewest
    cells not already in the cover (ties: fewer leaves, then lexicographic).
    """
    arrival = cut_pass.arrival

    def depth_of(cut):
        if not cut.leaves:
            return 1
        return 1 + max(arrival[l] for l in cut.leaves)

    selected = []
    seen = set()
    pending = {v for v, _ in aig.outputs if aig.is_and[v]}
    while pending:
        v = max(pending)  # all fanout demand on v is known before it is popped
        pending.discard(v)
        if v in seen:
            continue
        seen.add(v)
        cut = cut_pass.best.get(v)
        if cut is None:
            raise InternalError("node %d has no admissible cut" % v)
        if area_recovery:
            best_cost = None
            for cand in cut_pass.cut_sets[v]:
                if cand.leaves == (v,) or depth_of(cand) != arrival[v]:
                    continue
                if admissible is not None and not admissible(v, cand):
                    continue
                new_cells = sum(
                    1 for l in cand.leaves if aig.is_and[l] and l not in seen and l not in pending
                )
                cost = (new_cells, len(cand.leaves), cand.leaves)
                if best_cost is None or cost < best_cost:
                    best_cost = cost
                    cut = cand
        selected.append((v, cut))
        for leaf in cut.leaves:
            if aig.is_and[leaf] and leaf not in seen:
                pending.add(leaf)
    selected.sort()
    return selected


# ---------------------------------------------------------------------------
# Occurrence reporting


@dataclass
class OccurrenceRow:
    rank: int
    entry: FuncLibEntry
    rate: float
    cumulative: float


def occurrence_report(lib, nvars=None, top_n=20):
    """Entries ranked by selected-cut occurrences, with occurrence rates.

    Rates divide each entry's n_cut_best by the total over the filtered
    set; the cumulative column is non-decreasing and ends at <= 1.
    """
    if top_n < 1:
        raise UsageError("top_n must be at least 1, got %r" % top_n)
    rows = [e for e in lib.entries.values() if nvars is None or e.nvars == nvars]
    if not rows:
        return []
    rows.sort(key=lambda e: (-e.n_cut_best, e.tt.to_hex()))
    total = sum(e.n_cut_best for e in rows)
    out = []
    cum = 0.0
    for i, entry in enumerate(rows[:top_n], start=1):
        rate = entry.n_cut_best / total if total else 0.0
        cum += rate
        out.append(OccurrenceRow(i, entry, rate, cum))
    return out
