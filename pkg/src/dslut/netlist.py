"""And-inverter graphs read from AIGER, with simulation and depth queries.

Latches are cut for a purely combinational view: every latch output
becomes an extra primary input and every next-state function an extra
primary output.  Node ids are AIGER variable indices; node 0 is the
constant false, and every AND refers only to smaller ids, so id order is
topological.  An Aig is immutable after parsing and safe to share across
threads.
"""

from dataclasses import dataclass, field

from .errors import ParseError, UsageError


@dataclass(frozen=True)
class Aig:
    n_vars: int
    inputs: tuple            # PI node ids, latch pseudo-inputs last
    outputs: tuple           # (node id, complemented) pairs, latch next-states last
    fanin0: tuple            # literal per var id; 0 for non-AND nodes
    fanin1: tuple
    is_and: tuple            # bool per var id
    n_latches: int = 0

    @property
    def ands(self):
        return [v for v in range(1, self.n_vars + 1) if self.is_and[v]]

    @property
    def n_ands(self):
        return sum(self.is_and[1:])

    def fanins(self, v):
        """((id, compl), (id, compl)) of an AND node."""
        f0, f1 = self.fanin0[v], self.fanin1[v]
        return (f0 >> 1, bool(f0 & 1)), (f1 >> 1, bool(f1 & 1))


def parse_aiger(data):
    """Parse ASCII ("aag") or binary ("aig") AIGER into an Aig."""
    if isinstance(data, str):
        data = data.encode("ascii", errors="replace")
    if data.startswith(b"aag"):
        return _parse_ascii(data)
    if data.startswith(b"aig"):
        return _parse_binary(data)
    raise ParseError("not an AIGER file (expected 'aag' or 'aig' header)", line=1)


def _parse_header(first_line, magic):
    parts = first_line.split()
    if len(parts) != 6 or parts[0] != magic:
        raise ParseError("malformed header %r" % first_line, line=1)
    try:
        m, i, l, o, a = (int(x) for x in parts[1:])
    except ValueError:
        raise ParseError("non-numeric header field in %r" % first_line, line=1) from None
    if min(m, i, l, o, a) < 0:
        raise ParseError("negative header field", line=1)
    return m, i, l, o, a


class _Build:
    def __init__(self, m, n_latches):
        self.m = m
        self.kind = [None] * (m + 1)  # 'pi' | 'and'
        self.fanin0 = [0] * (m + 1)
        self.fanin1 = [0] * (m + 1)
        self.inputs = []
        self.outputs = []
        self.n_latches = n_latches

    def add_input(self, var, line):
        if var < 1 or var > self.m:
            raise ParseError("input variable %d out of range" % var, line)
        if self.kind[var] is not None:
            raise ParseError("variable %d defined twice" % var, line)
        self.kind[var] = "pi"
        self.inputs.append(var)

    def add_and(self, lhs, rhs0, rhs1, line):
        var = lhs >> 1
        if lhs & 1:
            raise ParseError("AND left-hand side %d is complemented" % lhs, line)
        if var < 1 or var > self.m:
            raise ParseError("AND variable %d out of range" % var, line)
        if self.kind[var] is not None:
            raise ParseError("variable %d defined twice" % var, line)
        for rhs in (rhs0, rhs1):
            if rhs >> 1 >= var:
                raise ParseError(
                    "fanin literal %d not defined before node %d (out of order)" % (rhs, var), line)
        self.kind[var] = "and"
        self.fanin0[var] = rhs0
        self.fanin1[var] = rhs1

    def finish(self):
        # every referenced variable must be defined
        def check_lit(lit, what):
            var = lit >> 1
            if var > self.m:
                raise ParseError("%s literal %d out of range" % (what, lit))
            if var != 0 and self.kind[var] is None:
                raise ParseError("dangling %s literal %d (variable %d undefined)" % (what, lit, var))

        for var in range(1, self.m + 1):
            if self.kind[var] == "and":
                check_lit(self.fanin0[var], "fanin")
                check_lit(self.fanin1[var], "fanin")
        for lit in self.outputs:
            check_lit(lit, "output")
        return Aig(
            n_vars=self.m,
            inputs=tuple(self.inputs),
            outputs=tuple((lit >> 1, bool(lit & 1)) for lit in self.outputs),
            fanin0=tuple(self.fanin0),
            fanin1=tuple(self.fanin1),
            is_and=tuple(k == "and" for k in self.kind),
            n_latches=self.n_latches,
        )


def _parse_ascii(data):
    text = data.decode("ascii", errors="replace")
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", line=1)
    m, n_in, n_latch, n_out, n_and = _parse_header(lines[0], "aag")
    need = 1 + n_in + n_latch + n_out + n_and
    if len(lines) < need:
        raise ParseError("truncated file: %d lines, need %d" % (len(lines), need), line=len(lines))
    b = _Build(m, n_latch)

    def ints(line_no, count):
        parts = lines[line_no].split()
        if len(parts) != count:
            raise ParseError("expected %d fields, got %r" % (count, lines[line_no]), line_no + 1)
        try:
            return [int(x) for x in parts]
        except ValueError:
            raise ParseError("non-numeric field in %r" % lines[line_no], line_no + 1) from None

    ln = 1
    for _ in range(n_in):
        (lit,) = ints(ln, 1)
        if lit & 1 or lit == 0:
            raise ParseError("input literal %d must be even and nonzero" % lit, ln + 1)
        b.add_input(lit >> 1, ln + 1)
        ln += 1
    latch_next = []
    for _ in range(n_latch):
        cur, nxt = ints(ln, 2)
        if cur & 1 or cur == 0:
            raise ParseError("latch literal %d must be even and nonzero" % cur, ln + 1)
        b.add_input(cur >> 1, ln + 1)  # combinational frame: latch output is a PI
        latch_next.append(nxt)
        ln += 1
    for _ in range(n_out):
        (lit,) = ints(ln, 1)
        b.outputs.append(lit)
        ln += 1
    for _ in range(n_and):
        lhs, rhs0, rhs1 = ints(ln, 3)
        b.add_and(lhs, rhs0, rhs1, ln + 1)
        ln += 1
    b.outputs.extend(latch_next)  # next-state functions become extra POs
    return b.finish()


def _parse_binary(data):
    nl = data.find(b"\n")
    if nl < 0:
        raise ParseError("missing header newline", line=1)
    m, n_in, n_latch, n_out, n_and = _parse_header(data[:nl].decode("ascii", "replace"), "aig")
    if m != n_in + n_latch + n_and:
        raise ParseError("binary AIGER requires M = I + L + A", line=1)
    b = _Build(m, n_latch)
    for v in range(1, n_in + n_latch + 1):
        b.add_input(v, 1)
    pos = nl + 1
    latch_next = []
    for i in range(n_latch + n_out):
        end = data.find(b"\n", pos)
        if end < 0:
            raise ParseError("truncated latch/output section")
        try:
            lit = int(data[pos:end].split()[-1])
        except (ValueError, IndexError):
            raise ParseError("bad literal %r" % data[pos:end]) from None
        (latch_next if i < n_latch else b.outputs).append(lit)
        pos = end + 1

    def read_delta(pos):
        delta = 0
        shift = 0
        while True:
            if pos >= len(data):
                raise ParseError("truncated binary AND section")
            byte = data[pos]
            pos += 1
            delta |= (byte & 0x7F) << shift
            if not byte & 0x80:
                return delta, pos
            shift += 7

    for i in range(n_and):
        lhs = 2 * (n_in + n_latch + i + 1)
        d0, pos = read_delta(pos)
        d1, pos = read_delta(pos)
        rhs0 = lhs - d0
        rhs1 = rhs0 - d1
        if rhs0 < 0 or rhs1 < 0:
            raise ParseError("invalid delta encoding at AND %d" % i)
        b.add_and(lhs, rhs0, rhs1, None)
    b.outputs.extend(latch_next)
    return b.finish()


def to_aag(aig):
    """Serialize the combinational view as ASCII AIGER."""
    lines = ["aag %d %d 0 %d %d" % (aig.n_vars, len(aig.inputs), len(aig.outputs), aig.n_ands)]
    for v in aig.inputs:
        lines.append(str(2 * v))
    for v, c in aig.outputs:
        lines.append(str(2 * v + c))
    for v in aig.ands:
        lines.append("%d %d %d" % (2 * v, aig.fanin0[v], aig.fanin1[v]))
    return "\n".join(lines) + "\n"


def simulate(aig, vector):
    """Evaluate all outputs for one input assignment (list of 0/1 or bools)."""
    if len(vector) != len(aig.inputs):
        raise UsageError("input vector length %d != %d inputs" % (len(vector), len(aig.inputs)))
    value = [False] * (aig.n_vars + 1)
    for v, bit in zip(aig.inputs, vector):
        value[v] = bool(bit)
    for v in range(1, aig.n_vars + 1):
        if aig.is_and[v]:
            f0, f1 = aig.fanin0[v], aig.fanin1[v]
            value[v] = (value[f0 >> 1] ^ bool(f0 & 1)) and (value[f1 >> 1] ^ bool(f1 & 1))
    return [int(value[v] ^ c) for v, c in aig.outputs]


def levels(aig):
    """AND-depth per node id: inputs and constants at 0, ANDs at 1 + max fanin depth."""
    depth = [0] * (aig.n_vars + 1)
    for v in range(1, aig.n_vars + 1):
        if aig.is_and[v]:
            depth[v] = 1 + max(depth[aig.fanin0[v] >> 1], depth[aig.fanin1[v] >> 1])
    return depth


class AigBuilder:
    """Programmatic AIG construction in literal form (lit = 2*var + compl)."""

    FALSE = 0
    TRUE = 1

    def __init__(self):
        self._next = 1
        self._inputs = []
        self._outputs = []
        self._ands = []  # (lhs var, rhs0, rhs1)
        self._strash = {}

    def input(self):
        v = self._next
        self._next += 1
        self._inputs.append(v)
        return 2 * v

    def and_(self, a, b):
        if a > b:
            a, b = b, a
        if a == self.FALSE or a == (b ^ 1):
            return self.FALSE
        if a == self.TRUE:
            return b
        if a == b:
            return a
        key = (a, b)
        if key in self._strash:
            return self._strash[key]
        v = self._next
        self._next += 1
        self._ands.append((v, b, a))
        lit = 2 * v
        self._strash[key] = lit
        return lit

    def or_(self, a, b):
        return self.and_(a ^ 1, b ^ 1) ^ 1

    def xor_(self, a, b):
        return self.and_(self.and_(a, b) ^ 1, self.and_(a ^ 1, b ^ 1) ^ 1)

    def mux_(self, sel, on_true, on_false):
        return self.or_(self.and_(sel, on_true), self.and_(sel ^ 1, on_false))

    def output(self, lit):
        self._outputs.append(lit)

    def build(self):
        m = self._next - 1
        text = ["aag %d %d 0 %d %d" % (m, len(self._inputs), len(self._outputs), len(self._ands))]
        text += [str(2 * v) for v in self._inputs]
        text += [str(lit) for lit in self._outputs]
        text += ["%d %d %d" % (2 * v, r0, r1) for v, r0, r1 in self._ands]
        return parse_aiger("\n".join(text) + "\n")
