"""Bit-assignment generation: heuristic seeding, LUT4 extension, stochastic search.

The initializer packs the most frequently selected k-input classes into
one assignment, picking for each class the NPN member that adds the
fewest SRAM bits.  The extension then splits positions 0..15 into
singletons so any assignment refining it behaves as a LUT4 on those
positions.  The search explores refinements of the extended assignment
under the bit budget; since refining a partition can only enlarge the
set of matchable functions, states always use the whole budget and the
result never scores below its starting point.
"""

import random
from dataclasses import dataclass

from . import plb
from .boolfn import npn_enum_class
from .errors import UsageError

LUT4_SPAN = 16


def compute_cost(tt_list):
    """Minimum SRAM bits implementing every listed table at once.

    Positions may share a bit iff they agree in every table, so the cost
    is the number of distinct position signatures.
    """
    if not tt_list:
        return 0
    k = tt_list[0].k
    if any(tt.k != k for tt in tt_list):
        raise UsageError("cost needs tables of equal arity")
    signatures = set()
    for p in range(1 << k):
        sig = 0
        for i, tt in enumerate(tt_list):
            sig |= ((tt.bits >> p) & 1) << i
        signatures.add(sig)
    return len(signatures)


def _assignment_from_signatures(k, tt_list):
    ids = {}
    assign = []
    for p in range(1 << k):
        sig = tuple((tt.bits >> p) & 1 for tt in tt_list)
        assign.append(ids.setdefault(sig, len(ids)))
    return plb.BitAssignment(k, len(ids), tuple(assign))


def heuristic_init(lib, k, num_top_funcs=8):
    """Seed assignment from the top practical k-input classes.

    The first class keeps its canonical table; every later class
    contributes the NPN member that minimizes the running bit cost
    (first strict improvement wins on ties).
    """
    entries = lib.select(k)
    if not entries:
        raise UsageError("library has no %d-input entries" % k)
    top = entries[:num_top_funcs]
    tt_list = [top[0].tt]
    # incremental signatures make each candidate's cost a single pass
    sigs = [(tt_list[0].bits >> p) & 1 for p in range(1 << k)]
    for entry in top[1:]:
        cost_min = None
        tt_best = None
        sig_best = None
        for cand in npn_enum_class(entry.tt):
            bits = cand.bits
            merged = [(sigs[p] << 1) | ((bits >> p) & 1) for p in range(1 << k)]
            cost = len(set(merged))
            if cost_min is None or cost < cost_min:
                cost_min = cost
                tt_best = cand
                sig_best = merged
        tt_list.append(tt_best)
        sigs = sig_best
    return _assignment_from_signatures(k, tt_list)


@dataclass(frozen=True)
class DistinctionMap:
    """Distinctions the search must preserve.

    Positions in different `ext_class`es may never share a bit;
    `forced` positions stay alone in their class.
    """

    ext_class: tuple
    forced: frozenset

    def compatible(self, p, q):
        return self.ext_class[p] == self.ext_class[q]


def _dm_of(ba, forced=()):
    return DistinctionMap(tuple(ba.assign), frozenset(forced))


def extend_ba(ba):
    """Split positions 0..15 into singletons (LUT4 compatibility).

    Positions past 15 keep their grouping; the returned DistinctionMap
    records every distinction so later refinement cannot undo one.
    Below k=4 there is nothing to extend and the assignment passes
    through unchanged.
    """
    if ba.k < 4:
        return ba, _dm_of(ba)
    ids = {}
    assign = []
    for p in range(1 << ba.k):
        key = ("pos", p) if p < LUT4_SPAN else ("cls", ba.assign[p])
        assign.append(ids.setdefault(key, len(ids)))
    ext = plb.BitAssignment(ba.k, len(ids), tuple(assign))
    return ext, _dm_of(ext, forced=range(LUT4_SPAN))


def _relabel(assign):
    ids = {}
    return tuple(ids.setdefault(c, len(ids)) for c in assign)


def _split_to_budget(assign, dm, budget, rng=None):
    """Refine until exactly `budget` classes (splitting never hurts coverage)."""
    assign = list(assign)
    while True:
        classes = {}
        for p, c in enumerate(assign):
            classes.setdefault(c, []).append(p)
        if len(classes) >= budget:
            break
        splittable = [c for c, ps in classes.items() if len(ps) > 1]
        if not splittable:
            break
        if rng is None:
            victim = max(splittable, key=lambda c: (len(classes[c]), -c))
            mover = classes[victim][-1]
        else:
            victim = rng.choice(sorted(splittable))
            mover = rng.choice(classes[victim])
        assign[mover] = len(classes)
    return _relabel(assign)


def _first_conflict_positions(ba, f):
    """Positions of some blocking pair under a fixed bridge wiring, or None."""
    sup = sorted(f.support())
    s = len(sup)
    if s == 0:
        return None
    g = f if s == f.k else None
    if g is None:
        from .boolfn import project

        g = project(f, sup)
    first = {}
    for u in range(1 << s):
        p = 0
        for j in range(ba.k):
            if (u >> min(j, s - 1)) & 1:
                p |= 1 << j
        c = ba.assign[p]
        v = (g.bits >> u) & 1
        if c in first and first[c][1] != v:
            return (first[c][0], p)
        first.setdefault(c, (p, v))
    return None


def coverage_objective(lib, nvars_range, weighted=True):
    """Pure objective: (score, blocking positions) for an assignment."""
    entries = []
    for nv in nvars_range:
        entries.extend(lib.select(nv))

    def evaluate(ba):
        matched = total = 0.0
        blockers = []
        for entry in entries:
            w = entry.n_cut_best if weighted else 1
            total += w
            if plb.match(ba, entry.tt) is not None:
                matched += w
            elif len(blockers) < 8:
                pair = _first_conflict_positions(ba, entry.tt)
                if pair:
                    blockers.extend(pair)
        score = matched / total if total else 1.0
        return score, blockers

    return evaluate


def search(ext, dm, budget, lib, evals, seed, objective=None, log=None):
    """Seeded stochastic maximization over budget-bounded refinements of `ext`.

    Mix of random restarts (25%) and hill-climbing moves guided by the
    positions that blocked failed matches (75%).  Deterministic for a
    fixed seed; with evals=0 the extended input is returned unchanged.
    """
    n_classes_ext = len(set(ext.assign))
    if budget < n_classes_ext:
        raise UsageError(
            "budget %d below the %d classes already forced" % (budget, n_classes_ext))
    if budget > 1 << ext.k:
        raise UsageError("budget %d exceeds 2^%d positions" % (budget, ext.k))
    if evals <= 0:
        return ext
    if objective is None:
        lo = 5 if (ext.k >= 5 and ext.is_lut4_compatible()) else 3
        objective = coverage_objective(lib, range(lo, ext.k + 1))

    rng = random.Random(seed)
    memo = {}
    evals_used = 0
    blame = {}

    def eval_state(assign):
        nonlocal evals_used
        evals_used += 1
        if assign not in memo:
            ba = plb.BitAssignment(ext.k, len(set(assign)), assign)
            score, blockers = objective(ba)
            memo[assign] = score
            for p in blockers:
                blame[p] = blame.get(p, 0) + 1
        if log and evals_used % 100 == 0:
            log("eval %d best %.4f" % (evals_used, best_score))
        return memo[assign]

    baseline = tuple(ext.assign)
    best_state = baseline
    best_score = eval_state(baseline)

    def better(score, assign):
        # refinement is free at equal score, so prefer the finer assignment
        return (score, len(set(assign))) > (best_score, len(set(best_state)))

    state = _split_to_budget(baseline, dm, budget)
    cur_score = best_score
    if state != baseline and evals_used < evals:
        cur_score = eval_state(state)
        if better(cur_score, state):
            best_score, best_state = cur_score, state

    movable = [p for p in range(1 << ext.k) if p not in dm.forced]

    def random_restart():
        return _split_to_budget(baseline, dm, budget, rng=rng)

    def guided_move(assign):
        assign = list(assign)
        if blame and rng.random() < 0.75:
            pool = sorted(blame)
            weights = [blame[p] for p in pool]
            p = rng.choices(pool, weights=weights)[0]
            if p in dm.forced:
                p = rng.choice(movable) if movable else None
        else:
            p = rng.choice(movable) if movable else None
        if p is None:
            return tuple(assign)
        peers = [
            c for c in set(assign)
            if c != assign[p]
            and all(dm.compatible(p, q) for q, cq in enumerate(assign) if cq == c)
        ]
        if not peers:
            return tuple(assign)
        assign[p] = rng.choice(sorted(peers))
        return _split_to_budget(_relabel(tuple(assign)), dm, budget)

    while evals_used < evals:
        if not movable:
            eval_state(state)
            continue
        candidate = random_restart() if rng.random() < 0.25 else guided_move(state)
        score = eval_state(candidate)
        if better(score, candidate):
            best_score, best_state = score, candidate
        if score >= cur_score:
            state, cur_score = candidate, score
    return plb.BitAssignment(ext.k, len(set(best_state)), best_state)


@dataclass
class GenResult:
    init: plb.BitAssignment
    extended: plb.BitAssignment
    dm: DistinctionMap
    ba: plb.BitAssignment
    lut4_extended: bool
    num_top_funcs: int
    notes: tuple


def generate(lib, k, bits, evals=2000, seed=0, num_top_funcs=8, log=None, objective=None):
    """Full generation pipeline: init, extend when the budget allows, search."""
    if not 1 <= bits <= (1 << k):
        raise UsageError("bit budget %d outside [1, %d]" % (bits, 1 << k))
    entries = lib.select(k)
    if not entries:
        raise UsageError("library has no %d-input entries" % k)
    notes = []
    n_top = min(num_top_funcs, len(entries))
    if n_top < num_top_funcs:
        notes.append("only %d k-input classes available" % n_top)
    init = heuristic_init(lib, k, n_top)
    while init.b > bits and n_top > 1:
        n_top -= 1
        init = heuristic_init(lib, k, n_top)
    if init.b > bits:
        raise UsageError(
            "budget %d cannot hold the top class (needs %d bits)" % (bits, init.b))
    if n_top < min(num_top_funcs, len(entries)):
        notes.append("dropped to top %d classes to fit the budget" % n_top)

    ext, dm = extend_ba(init)
    lut4_extended = ext is not init
    if lut4_extended and ext.b > bits:
        notes.append(
            "budget %d below the %d bits the LUT4 extension needs; extension skipped" % (bits, ext.b))
        ext, dm = init, _dm_of(init)
        lut4_extended = False
    if log:
        for note in notes:
            log("note: " + note)
    ba = search(ext, dm, bits, lib, evals, seed, objective=objective, log=log)
    return GenResult(init, ext, dm, ba, lut4_extended, n_top, tuple(notes))
