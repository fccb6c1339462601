"""Truth tables over 2..6 variables and exact NPN classification.

A function of k inputs is stored as the integer whose bit p holds f(x)
for the minterm with index p = sum(x_i * 2**i): variable 0 toggles
fastest.  For k=2 the positions 0..3 therefore read f(0,0), f(1,0),
f(0,1), f(1,1).

Everything here is a pure function on immutable values and safe to call
concurrently.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

from .errors import UsageError

MIN_VARS = 2
MAX_VARS = 6


@dataclass(frozen=True, order=True)
class TruthTable:
    k: int
    bits: int

    def __post_init__(self):
        if not MIN_VARS <= self.k <= MAX_VARS:
            raise UsageError("truth table arity %r outside [%d, %d]" % (self.k, MIN_VARS, MAX_VARS))
        if not 0 <= self.bits < (1 << (1 << self.k)):
            raise UsageError("truth table value 0x%x does not fit %d inputs" % (self.bits, self.k))

    @property
    def n_positions(self):
        return 1 << self.k

    def eval(self, minterm):
        """Bit of the table at the position encoded by `minterm`."""
        if not 0 <= minterm < self.n_positions:
            raise UsageError("minterm %d out of range for k=%d" % (minterm, self.k))
        return (self.bits >> minterm) & 1

    def support(self):
        """Set of variable indices the function actually depends on."""
        masks = _zero_cofactor_masks(self.k)
        bits = self.bits
        return {i for i in range(self.k) if ((bits >> (1 << i)) ^ bits) & masks[i]}

    def complement(self):
        return TruthTable(self.k, self.bits ^ ((1 << self.n_positions) - 1))

    def to_hex(self):
        """Lowercase hex, most-significant position first, 2^k/4 digits."""
        return format(self.bits, "0%dx" % (self.n_positions // 4))

    @staticmethod
    def from_hex(text):
        """Parse hex produced by to_hex; arity is implied by the digit count."""
        digits = len(text.strip())
        n = digits * 4
        if n & (n - 1) or not (1 << MIN_VARS) <= n <= (1 << MAX_VARS):
            raise UsageError("hex truth table must have 1, 2, 4, 8 or 16 digits, got %d" % digits)
        try:
            bits = int(text, 16)
        except ValueError:
            raise UsageError("invalid hex truth table %r" % text) from None
        return TruthTable(n.bit_length() - 1, bits)


@dataclass(frozen=True)
class NpnTransform:
    """Input permutation + input-negation mask + output negation.

    Applying (perm, mask, neg) moves the value at position p to position
    perm(p ^ mask), where perm acts on the bits of the position index,
    and XORs every value with neg.
    """

    perm: tuple
    in_mask: int
    out_neg: bool

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise UsageError("perm %r is not a permutation" % (self.perm,))


def identity_transform(k):
    return NpnTransform(tuple(range(k)), 0, False)


def inverse_transform(t):
    k = len(t.perm)
    inv = [0] * k
    for i, j in enumerate(t.perm):
        inv[j] = i
    pmap = _position_map(t.perm)
    return NpnTransform(tuple(inv), pmap[t.in_mask], t.out_neg)


def apply_transform(tt, t):
    """Image of `tt` under `t`; composing with inverse_transform(t) is the identity."""
    if len(t.perm) != tt.k:
        raise UsageError("transform arity %d != table arity %d" % (len(t.perm), tt.k))
    pmap = _position_map(t.perm)
    bits = tt.bits
    mask = t.in_mask
    out = 0
    for p in range(tt.n_positions):
        if (bits >> p) & 1:
            out |= 1 << pmap[p ^ mask]
    if t.out_neg:
        out ^= (1 << tt.n_positions) - 1
    return TruthTable(tt.k, out)


def _position_map(perm):
    """Table mapping position p to the position with bit j moved to bit perm[j]."""
    k = len(perm)
    out = []
    for p in range(1 << k):
        q = 0
        for j in range(k):
            if (p >> j) & 1:
                q |= 1 << perm[j]
        out.append(q)
    return out


@lru_cache(maxsize=None)
def _zero_cofactor_masks(k):
    n = 1 << k
    return tuple(
        sum(1 << p for p in range(n) if not (p >> i) & 1) for i in range(k)
    )


@lru_cache(maxsize=None)
def _perm_tables(k):
    """All input permutations with their position maps and inverse maps."""
    out = []
    for perm in permutations(range(k)):
        pmap = _position_map(perm)
        inv = [0] * len(pmap)
        for p, q in enumerate(pmap):
            inv[q] = p
        out.append((perm, tuple(pmap), tuple(inv)))
    return tuple(out)


@lru_cache(maxsize=1 << 16)
def _canonical_raw(k, bits):
    """Smallest table value over the whole transform group, plus a witness.

    Exhaustive over the 2^(k+1) * k! transforms; candidates are compared
    most-significant position first and abandoned as soon as their prefix
    exceeds the current best, which keeps the scan exact.
    """
    n = 1 << k
    best = bits
    best_t = (tuple(range(k)), 0, False)
    for perm, _, ipm in _perm_tables(k):
        for mask in range(n):
            for neg in (0, 1):
                cand = 0
                undecided = True
                q = n - 1
                while q >= 0:
                    b = ((bits >> (ipm[q] ^ mask)) & 1) ^ neg
                    cand = (cand << 1) | b
                    if undecided:
                        pref = best >> q
                        if cand > pref:
                            break
                        if cand < pref:
                            undecided = False
                    q -= 1
                else:
                    if cand < best:
                        best = cand
                        best_t = (perm, mask, bool(neg))
    return best, best_t


def npn_canonical(tt):
    """NPN-canonical form of `tt` and one transform that reaches it.

    The canonical form is the numerically smallest table over the whole
    negate/permute/negate group; two tables are NPN-equivalent iff their
    canonical forms coincide.
    """
    best, (perm, mask, neg) = _canonical_raw(tt.k, tt.bits)
    return TruthTable(tt.k, best), NpnTransform(perm, mask, neg)


def npn_enum_class(tt):
    """All distinct tables NPN-equivalent to `tt`, in first-seen transform order."""
    n = tt.n_positions
    full = (1 << n) - 1
    bits = tt.bits
    seen = set()
    out = []
    for _, pmap, _ in _perm_tables(tt.k):
        for mask in range(n):
            g = 0
            for p in range(n):
                if (bits >> p) & 1:
                    g |= 1 << pmap[p ^ mask]
            for cand in (g, g ^ full):
                if cand not in seen:
                    seen.add(cand)
                    out.append(TruthTable(tt.k, cand))
    return out


def count_npn_classes(k, allow_slow=False):
    """Number of NPN classes over all 2^(2^k) functions, by exhaustive orbits.

    k=5 enumerates 2^32 functions and runs for many hours; it is only
    attempted behind allow_slow.  k=6 is infeasible exhaustively.
    """
    if k < MIN_VARS or k > 5:
        raise UsageError("class counting supports k in [2, 5], got %r" % k)
    if k == 5 and not allow_slow:
        raise UsageError("k=5 enumerates 4.3e9 functions; rerun with allow_slow")
    n = 1 << k
    full = (1 << n) - 1
    n_funcs = 1 << n
    seen = bytearray(n_funcs)
    tables = [pmap for _, pmap, _ in _perm_tables(k)]
    count = 0
    for value in range(n_funcs):
        if seen[value]:
            continue
        count += 1
        for pmap in tables:
            for mask in range(n):
                g = 0
                v = value
                while v:
                    low = v & -v
                    g |= 1 << pmap[low.bit_length() - 1 ^ mask]
                    v ^= low
                seen[g] = 1
                seen[g ^ full] = 1
    return count


def project(tt, variables):
    """Table of `tt` over the ordered subset `variables`, other inputs held at 0.

    Faithful whenever `variables` covers the support.  Result arity is
    padded up to MIN_VARS when fewer than two variables are given.
    """
    s = len(variables)
    if any(not 0 <= v < tt.k for v in variables):
        raise UsageError("projection variables %r out of range for k=%d" % (variables, tt.k))
    out = 0
    for u in range(1 << s):
        p = 0
        for j, v in enumerate(variables):
            if (u >> j) & 1:
                p |= 1 << v
        if (tt.bits >> p) & 1:
            out |= 1 << u
    k2 = max(MIN_VARS, s)
    span = 1 << s
    for _ in range(k2 - s):
        out |= out << span
        span <<= 1
    return TruthTable(k2, out)


def shrink_to_support(tt):
    """(table over max(2, |support|) inputs, support size) with dead inputs dropped."""
    sup = sorted(tt.support())
    return project(tt, sup), len(sup)
