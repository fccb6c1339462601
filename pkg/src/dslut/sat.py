"""Minimal DPLL solver: two-watched-literal unit propagation, chronological backtracking.

The matching instances this package produces are tiny (tens of
variables), so there is no clause learning, no restarts and no activity
heuristic.  Branching is deterministic: lowest-index unassigned variable,
False before True, so unconstrained configuration bits come out 0.
"""

from .errors import UsageError


def solve(n_vars, clauses):
    """Return a model as a list indexed by variable (index 0 unused), or None.

    Clauses are lists of nonzero ints in the usual DIMACS convention.
    """
    assign = [None] * (n_vars + 1)
    watches = [[] for _ in range(2 * n_vars + 2)]  # slot for every literal

    def wslot(lit):
        return 2 * abs(lit) + (lit < 0)

    def value(lit):
        v = assign[abs(lit)]
        if v is None:
            return None
        return v if lit > 0 else not v

    db = []
    initial_units = []
    for clause in clauses:
        lits = sorted(set(clause), key=lambda l: (abs(l), l < 0))
        if not lits:
            return None
        if any(-l in lits for l in lits):
            continue  # tautology
        for l in lits:
            if not 1 <= abs(l) <= n_vars:
                raise UsageError("literal %d outside 1..%d" % (l, n_vars))
        if len(lits) == 1:
            initial_units.append(lits[0])
            continue
        idx = len(db)
        db.append(lits)
        watches[wslot(lits[0])].append(idx)
        watches[wslot(lits[1])].append(idx)

    trail = []  # (lit, is_decision)
    decisions = []  # (trail index, var, second_phase_tried)

    def enqueue(lit, is_decision=False):
        assign[abs(lit)] = lit > 0
        trail.append((lit, is_decision))

    def propagate(tp):
        """Propagate trail entries from index tp; True on success, False on conflict."""
        while tp < len(trail):
            lit = trail[tp][0]
            tp += 1
            falsified = -lit
            watch_list = watches[wslot(falsified)]
            i = 0
            while i < len(watch_list):
                ci = watch_list[i]
                lits = db[ci]
                # keep the falsified literal in slot 1
                if lits[0] == falsified:
                    lits[0], lits[1] = lits[1], lits[0]
                other = lits[0]
                if value(other) is True:
                    i += 1
                    continue
                moved = False
                for j in range(2, len(lits)):
                    if value(lits[j]) is not False:
                        lits[1], lits[j] = lits[j], lits[1]
                        watch_list[i] = watch_list[-1]
                        watch_list.pop()
                        watches[wslot(lits[1])].append(ci)
                        moved = True
                        break
                if moved:
                    continue
                if value(other) is False:
                    return False
                enqueue(other)
                i += 1
        return True

    for u in initial_units:
        if value(u) is False:
            return None
        if value(u) is None:
            enqueue(u)
    tp = 0

    while True:
        if propagate(tp):
            var = next((v for v in range(1, n_vars + 1) if assign[v] is None), None)
            if var is None:
                return list(assign)
            decisions.append((len(trail), var, False))
            enqueue(-var, True)  # try False first
            tp = len(trail) - 1
        else:
            # chronological backtrack to the last decision with an untried phase
            while decisions and decisions[-1][2]:
                mark, var, _ = decisions.pop()
                for lit, _ in trail[mark:]:
                    assign[abs(lit)] = None
                del trail[mark:]
            if not decisions:
                return None
            mark, var, _ = decisions[-1]
            for lit, _ in trail[mark:]:
                assign[abs(lit)] = None
            del trail[mark:]
            decisions[-1] = (mark, var, True)
            enqueue(var, True)  # second phase: True
            tp = len(trail) - 1


def to_dimacs(n_vars, clauses, comment=None):
    """Serialize to DIMACS CNF for cross-checking with external solvers."""
    lines = []
    if comment:
        for row in str(comment).splitlines():
            lines.append("c " + row)
    lines.append("p cnf %d %d" % (n_vars, len(clauses)))
    for clause in clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"
