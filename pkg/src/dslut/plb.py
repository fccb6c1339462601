"""Bit assignments and Boolean matching against them.

A bit assignment wires each of the 2^k MUX-tree data positions to one of
b SRAM bits; every input additionally carries a programmable inverter
(PINV).  A function is implementable under a fixed pin wiring iff no
SRAM bit drives two care positions that want different values.  Input
permutation comes from routing, input negation from the PINVs, functions
with fewer variables from bridging one signal onto several pins, and
output negation from flipping every SRAM bit, so coverage only ever
needs one representative per NPN class.

Two matching routes are provided: the direct partition test (`match`)
and a CEGAR loop over a SAT encoding of the pruned MUX tree
(`match_cegar` / `cegar_match`); they must agree.
"""

from dataclasses import dataclass
from itertools import permutations, product

from . import muxtree, sat
from .boolfn import MIN_VARS, TruthTable, _position_map, npn_canonical, shrink_to_support
from .errors import InternalError, ParseError, UsageError


@dataclass(frozen=True)
class BitAssignment:
    k: int
    b: int
    assign: tuple
    pinv: bool = True  # every input has a programmable inverter

    def __post_init__(self):
        if not MIN_VARS <= self.k <= 6:
            raise UsageError("bit assignment arity %r outside [2, 6]" % self.k)
        if len(self.assign) != 1 << self.k:
            raise UsageError("assignment needs %d positions, got %d" % (1 << self.k, len(self.assign)))
        if set(self.assign) != set(range(self.b)):
            raise UsageError("bit ids must be contiguous from 0 and all used")

    @classmethod
    def full_lut(cls, k):
        return cls(k, 1 << k, tuple(range(1 << k)))

    def classes(self):
        """Positions driven by each bit id."""
        out = [[] for _ in range(self.b)]
        for p, c in enumerate(self.assign):
            out[c].append(p)
        return [tuple(ps) for ps in out]

    def is_lut4_compatible(self):
        """True when positions 0..15 all hold distinct bit ids."""
        if self.k < 4:
            return False
        head = self.assign[:16]
        return len(set(head)) == 16

    def refines(self, other):
        """True when every SRAM class of self is a subset of a class of other."""
        if self.k != other.k:
            return False
        rep = {}
        for p in range(1 << self.k):
            c = self.assign[p]
            if c in rep and rep[c] != other.assign[p]:
                return False
            rep[c] = other.assign[p]
        return True


@dataclass(frozen=True)
class MatchSolution:
    k: int
    pin_map: tuple  # per pin: (function variable index, negated flag)
    sram: tuple

    @property
    def pinv_mask(self):
        return sum(1 << j for j, (_, neg) in enumerate(self.pin_map) if neg)


def implements_direct(ba, tt, care=None):
    """SRAM vector implementing `tt` on the care positions, or None.

    Succeeds iff no SRAM class holds two care positions with different
    table bits; classes without care positions default to 0.
    """
    if tt.k != ba.k:
        raise UsageError("table arity %d != assignment arity %d" % (tt.k, ba.k))
    n = 1 << ba.k
    if care is None:
        care = (1 << n) - 1
    if care == 0:
        raise UsageError("care set must be non-empty")
    sram = [None] * ba.b
    bits = tt.bits
    assign = ba.assign
    for p in range(n):
        if (care >> p) & 1:
            c = assign[p]
            v = (bits >> p) & 1
            if sram[c] is None:
                sram[c] = v
            elif sram[c] != v:
                return None
    return [v if v is not None else 0 for v in sram]


def _constant_solution(ba, f):
    value = f.bits & 1
    pins = [(0, False)] * ba.k
    if ba.k >= 2:
        pins[1] = (0, True)  # opposite-polarity bridge, for the record
    return MatchSolution(ba.k, tuple(pins), tuple([value] * ba.b))


def _support_and_table(ba, f):
    sup = sorted(f.support())
    s = len(sup)
    if s > ba.k:
        raise UsageError("function support %d exceeds %d pins" % (s, ba.k))
    if s == 0:
        return sup, None
    g, _ = shrink_to_support(f)
    return sup, g


def match(ba, f):
    """Partition-based Boolean match of `f` (support size <= k) against `ba`.

    Pin maps are searched lexicographically and PINV masks in ascending
    order; the first hit is returned as a MatchSolution, else None.
    """
    sup, g = _support_and_table(ba, f)
    s = len(sup)
    if s == 0:
        return _constant_solution(ba, f)
    gbits = g.bits
    k = ba.k
    n = 1 << k
    assign = ba.assign
    b = ba.b
    vals = [0] * b
    stamp = [0] * b
    run = 0

    if s == k:
        for perm in permutations(range(s)):
            pmap = _position_map(perm)
            for mask in range(n):
                run += 1
                ok = True
                for p in range(n):
                    c = assign[p]
                    v = (gbits >> pmap[p ^ mask]) & 1
                    if stamp[c] != run:
                        stamp[c] = run
                        vals[c] = v
                    elif vals[c] != v:
                        ok = False
                        break
                if ok:
                    sram = tuple(vals[c] if stamp[c] == run else 0 for c in range(b))
                    pins = tuple((sup[perm[j]], bool((mask >> j) & 1)) for j in range(k))
                    return MatchSolution(k, pins, sram)
        return None

    literals = [(v, neg) for v in range(s) for neg in (False, True)]
    all_vars = set(range(s))
    for lits in product(literals, repeat=k):
        if {v for v, _ in lits} != all_vars:
            continue
        run += 1
        ok = True
        for u in range(1 << s):
            p = 0
            for j, (v, neg) in enumerate(lits):
                if ((u >> v) & 1) ^ neg:
                    p |= 1 << j
            c = assign[p]
            val = (gbits >> u) & 1
            if stamp[c] != run:
                stamp[c] = run
                vals[c] = val
            elif vals[c] != val:
                ok = False
                break
        if ok:
            sram = tuple(vals[c] if stamp[c] == run else 0 for c in range(b))
            pins = tuple((sup[v], neg) for v, neg in lits)
            return MatchSolution(k, pins, sram)
    return None


def match_with_cache(ba, f, cache):
    """Match through the NPN-canonical form, memoizing one result per class.

    `cache` maps canonical (hex, nvars) to a MatchSolution for the
    canonical table, None for NOMATCH, or True for a known-matchable
    class whose witness has not been computed yet (preloaded decisions).
    The returned solution is rewritten to f's own variables.
    """
    sup, g = _support_and_table(ba, f)
    s = len(sup)
    if s == 0:
        return _constant_solution(ba, f)
    canon, t = npn_canonical(g)
    key = (canon.to_hex(), s)
    cached = cache.get(key, True)
    if cached is True:
        cached = cache[key] = match(ba, canon)
    if cached is None:
        return None
    # g(p) = canon(perm(p ^ mask)) ^ neg: route each canonical pin back
    # through the inverse permutation and fold the mask into its polarity.
    inv = [0] * len(t.perm)
    for i, w in enumerate(t.perm):
        inv[w] = i
    pins = []
    for v, neg in cached.pin_map:
        src = inv[v]
        pins.append((sup[src], bool(neg ^ ((t.in_mask >> src) & 1))))
    sram = tuple(bit ^ 1 for bit in cached.sram) if t.out_neg else cached.sram
    return MatchSolution(ba.k, tuple(pins), sram)


def verify_solution(ba, f, sol):
    """Replay a MatchSolution through the pruned MUX tree on every minterm of f."""
    tree = muxtree.build_and_prune(ba)
    for u in range(1 << f.k):
        word = 0
        for j, (v, neg) in enumerate(sol.pin_map):
            if ((u >> v) & 1) ^ neg:
                word |= 1 << j
        if muxtree.tree_eval(tree, sol.sram, word) != f.eval(u):
            return False
    return True


@dataclass(frozen=True)
class CoverageReport:
    nvars: int
    matched: int
    total: int
    matched_weight: int
    total_weight: int

    @property
    def rate(self):
        return self.matched / self.total if self.total else 0.0

    @property
    def weighted_rate(self):
        return self.matched_weight / self.total_weight if self.total_weight else 0.0


def coverage(ba, lib, nvars):
    """Match one representative per NPN class at the given support size.

    NPN invariance of matching makes the canonical form sufficient.
    Weights are the classes' selected-cut occurrence counts.
    """
    if nvars > ba.k:
        raise UsageError("nvars %d exceeds assignment arity %d" % (nvars, ba.k))
    matched = total = matched_w = total_w = 0
    for entry in lib.select(nvars):
        total += 1
        total_w += entry.n_cut_best
        if match(ba, entry.tt) is not None:
            matched += 1
            matched_w += entry.n_cut_best
    return CoverageReport(nvars, matched, total, matched_w, total_w)


def coverage_table(ba, lib, nvars_list=None):
    if nvars_list is None:
        nvars_list = range(3, ba.k + 1)
    return [coverage(ba, lib, nv) for nv in nvars_list]


# ---------------------------------------------------------------------------
# SAT/CEGAR route


class PLBCircuit:
    """Single-output circuit: pin wiring -> optional PINVs -> pruned MUX tree.

    Configuration variables are the b SRAM bits (CNF vars 1..b) and,
    when PINVs are left programmable, one inversion bit per pin (vars
    b+1..b+k).  A minterm assigns the `n_inputs` circuit inputs;
    constants are propagated through the tree while encoding, so clauses
    range over configuration variables only.
    """

    def __init__(self, ba, pin_vars=None, pin_negs=None, with_pinv=True):
        self.ba = ba
        self.tree = muxtree.build_and_prune(ba)
        self.pin_vars = tuple(pin_vars) if pin_vars is not None else tuple(range(ba.k))
        self.pin_negs = tuple(pin_negs) if pin_negs is not None else (False,) * ba.k
        if len(self.pin_vars) != ba.k or len(self.pin_negs) != ba.k:
            raise UsageError("pin wiring must cover all %d pins" % ba.k)
        self.with_pinv = with_pinv
        self.n_inputs = max(self.pin_vars) + 1
        self.n_config = ba.b + (ba.k if with_pinv else 0)

    def _wired_word(self, minterm):
        word = 0
        for j, (v, neg) in enumerate(zip(self.pin_vars, self.pin_negs)):
            if ((minterm >> v) & 1) ^ neg:
                word |= 1 << j
        return word

    def _leaf(self, select_word):
        ref = self.tree.root
        nodes = self.tree.nodes
        while not muxtree.is_leaf(ref):
            level, c0, c1 = nodes[ref]
            ref = c1 if (select_word >> level) & 1 else c0
        return muxtree.leaf_bit(ref)

    def eval(self, config, minterm):
        word = self._wired_word(minterm)
        if self.with_pinv:
            for j in range(self.ba.k):
                if config[self.ba.b + j]:
                    word ^= 1 << j
        return int(config[self._leaf(word)])

    def clauses_for(self, minterm, want):
        """CNF forcing the output to `want` on `minterm`, over config vars."""
        base = self._wired_word(minterm)
        if not self.with_pinv:
            leaf = self._leaf(base)
            return [[(leaf + 1) if want else -(leaf + 1)]]
        out = []
        k = self.ba.k
        for w in range(1 << k):
            leaf = self._leaf(base ^ w)
            clause = []
            for j in range(k):
                pv = self.ba.b + 1 + j
                clause.append(-pv if (w >> j) & 1 else pv)
            clause.append((leaf + 1) if want else -(leaf + 1))
            out.append(clause)
        return out

    def to_dimacs(self, f, minterms):
        clauses = []
        for m in minterms:
            clauses.extend(self.clauses_for(m, (f.bits >> m) & 1))
        return sat.to_dimacs(self.n_config, clauses, comment="dslut match instance")


def encode_plb(ba, pin_vars=None, pin_negs=None, with_pinv=True):
    return PLBCircuit(ba, pin_vars, pin_negs, with_pinv)


def cegar_match(plb, f):
    """Solve exists-config forall-minterms via counterexample refinement.

    Maintains a growing minterm set, SAT-solves for configuration bits
    consistent with `f` on it, verifies candidates exhaustively, and
    refines with the first counterexample.  Returns a config bit list or
    None when the constraint set is unsatisfiable.
    """
    n_space = 1 << plb.n_inputs
    minterms = [0]
    clauses = list(plb.clauses_for(0, f.bits & 1))
    for _ in range(n_space + 1):
        model = sat.solve(plb.n_config, clauses)
        if model is None:
            return None
        config = [int(model[i + 1]) for i in range(plb.n_config)]
        counterexample = None
        for m in range(n_space):
            if plb.eval(config, m) != (f.bits >> m) & 1:
                counterexample = m
                break
        if counterexample is None:
            return config
        minterms.append(counterexample)
        clauses.extend(plb.clauses_for(counterexample, (f.bits >> counterexample) & 1))
    raise InternalError("CEGAR failed to converge in %d refinements" % (n_space + 1))


def match_cegar(ba, f):
    """CEGAR-backed equivalent of `match`: same pin-map enumeration, SAT kernel."""
    sup, g = _support_and_table(ba, f)
    s = len(sup)
    if s == 0:
        return _constant_solution(ba, f)
    k = ba.k
    if s == k:
        for perm in permutations(range(s)):
            for mask in range(1 << k):
                negs = tuple(bool((mask >> j) & 1) for j in range(k))
                plb = PLBCircuit(ba, pin_vars=perm, pin_negs=negs, with_pinv=False)
                config = cegar_match(plb, g)
                if config is not None:
                    pins = tuple((sup[perm[j]], negs[j]) for j in range(k))
                    return MatchSolution(k, pins, tuple(config[: ba.b]))
        return None
    literals = [(v, neg) for v in range(s) for neg in (False, True)]
    all_vars = set(range(s))
    for lits in product(literals, repeat=k):
        if {v for v, _ in lits} != all_vars:
            continue
        plb = PLBCircuit(
            ba,
            pin_vars=tuple(v for v, _ in lits),
            pin_negs=tuple(neg for _, neg in lits),
            with_pinv=False,
        )
        config = cegar_match(plb, g)
        if config is not None:
            pins = tuple((sup[v], neg) for v, neg in lits)
            return MatchSolution(k, pins, tuple(config[: ba.b]))
    return None


# ---------------------------------------------------------------------------
# Bit-assignment file format


def ba_to_text(ba):
    return "dslut v1\nK=%d\nB=%d\nPINV=%d\nASSIGN=%s\n" % (
        ba.k,
        ba.b,
        ba.k if ba.pinv else 0,
        " ".join(str(c) for c in ba.assign),
    )


def ba_from_text(text):
    fields = {}
    lines = [l for l in text.splitlines()]
    meaningful = [(i + 1, l.strip()) for i, l in enumerate(lines) if l.strip() and not l.strip().startswith("#")]
    if not meaningful or meaningful[0][1] != "dslut v1":
        raise ParseError("missing 'dslut v1' header", line=1)
    for line_no, line in meaningful[1:]:
        if "=" not in line:
            raise ParseError("expected key=value, got %r" % line, line_no)
        key, _, value = line.partition("=")
        fields[key.strip()] = (value.strip(), line_no)
    for key in ("K", "B", "PINV", "ASSIGN"):
        if key not in fields:
            raise ParseError("missing %s field" % key)
    try:
        k = int(fields["K"][0])
        b = int(fields["B"][0])
        pinv = int(fields["PINV"][0])
        assign = tuple(int(x) for x in fields["ASSIGN"][0].split())
    except ValueError as exc:
        raise ParseError("bad numeric field: %s" % exc) from None
    if pinv not in (0, k):
        raise ParseError("PINV must be 0 or K=%d, got %d" % (k, pinv), fields["PINV"][1])
    try:
        return BitAssignment(k, b, assign, pinv=bool(pinv))
    except UsageError as exc:
        raise ParseError(str(exc)) from None


def load_ba(path):
    with open(path, "r", encoding="ascii") as handle:
        return ba_from_text(handle.read())


def save_ba(ba, path):
    with open(path, "w", encoding="ascii") as handle:
        handle.write(ba_to_text(ba))
