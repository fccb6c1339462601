import random
from itertools import product

import pytest

from dslut.boolfn import TruthTable, npn_enum_class
from dslut.errors import ParseError, UsageError
from dslut.muxtree import build_and_prune, tree_eval
from dslut.plb import (
    BitAssignment,
    PLBCircuit,
    ba_from_text,
    ba_to_text,
    cegar_match,
    encode_plb,
    implements_direct,
    match,
    match_cegar,
    verify_solution,
)

BA_0111 = BitAssignment(2, 2, (0, 1, 1, 1))
BA_0011 = BitAssignment(2, 2, (0, 0, 1, 1))
F_1000 = TruthTable(2, 0x1)  # truth table (1,0,0,0): high only at position 0


def brute_force_matchable(ba, f):
    """Oracle: try every wiring of pins to literals of f's variables."""
    k = ba.k
    lits = [(v, neg) for v in range(f.k) for neg in (False, True)]
    for wiring in product(lits, repeat=k):
        sram = [None] * ba.b
        ok = True
        for u in range(1 << f.k):
            pos = 0
            for j, (v, neg) in enumerate(wiring):
                if ((u >> v) & 1) ^ neg:
                    pos |= 1 << j
            c = ba.assign[pos]
            val = f.eval(u)
            if sram[c] is None:
                sram[c] = val
            elif sram[c] != val:
                ok = False
                break
        if ok:
            return True
    return False


def test_worked_examples_direct():
    assert implements_direct(BA_0111, F_1000) == [1, 0]
    assert implements_direct(BA_0011, F_1000) is None
    assert implements_direct(BA_0111, TruthTable(2, 0xE)) == [0, 1]


def test_direct_care_mask():
    # positions 0 and 1 conflict under full care but not when 1 is a don't-care
    assert implements_direct(BA_0011, F_1000, care=0b1101) == [1, 0]
    with pytest.raises(UsageError):
        implements_direct(BA_0011, F_1000, care=0)
    with pytest.raises(UsageError):
        implements_direct(BA_0111, TruthTable(3, 0x80))


def test_match_bridged_single_variable():
    sol = match(BA_0111, TruthTable(2, 0xA))  # f = a
    assert sol is not None
    assert sol.pin_map == ((0, False), (0, False))
    assert sol.sram == (0, 1)
    assert verify_solution(BA_0111, TruthTable(2, 0xA), sol)


def test_match_xor_impossible():
    assert match(BA_0111, TruthTable(2, 0x6)) is None


def test_match_xnor_three_bits():
    ba = BitAssignment(2, 3, (0, 1, 1, 2))
    sol = match(ba, TruthTable(2, 0x9))
    assert sol is not None
    assert sol.sram == (1, 0, 1)
    assert verify_solution(ba, TruthTable(2, 0x9), sol)


def test_full_lut_matches_everything():
    ba = BitAssignment.full_lut(3)
    rng = random.Random(31)
    for _ in range(40):
        f = TruthTable(3, rng.getrandbits(8))
        sol = match(ba, f)
        assert sol is not None
        assert verify_solution(ba, f, sol)


def test_single_bit_matches_only_constants():
    ba = BitAssignment(2, 1, (0, 0, 0, 0))
    assert match(ba, TruthTable(2, 0x8)) is None
    assert match(ba, TruthTable(2, 0x0)) is not None
    assert match(ba, TruthTable(2, 0xF)) is not None


def test_constant_solution_verifies():
    for bits in (0x0, 0xF):
        f = TruthTable(2, bits)
        sol = match(BA_0111, f)
        assert sol is not None
        assert verify_solution(BA_0111, f, sol)


def test_complement_freeness():
    rng = random.Random(32)
    for _ in range(60):
        k = rng.randint(2, 3)
        ba = _random_ba(rng, k)
        f = TruthTable(k, rng.getrandbits(1 << k))
        assert (match(ba, f) is None) == (match(ba, f.complement()) is None)


def test_npn_invariance():
    rng = random.Random(33)
    for _ in range(12):
        ba = _random_ba(rng, 2)
        f = TruthTable(2, rng.getrandbits(4))
        base = match(ba, f) is not None
        for member in npn_enum_class(f):
            assert (match(ba, member) is not None) == base


def test_refinement_monotonicity():
    rng = random.Random(34)
    for _ in range(40):
        k = rng.randint(2, 3)
        coarse = _random_ba(rng, k)
        fine = _refine(rng, coarse)
        assert fine.refines(coarse)
        f = TruthTable(k, rng.getrandbits(1 << k))
        if match(coarse, f) is not None:
            assert match(fine, f) is not None


def test_match_agrees_with_brute_force_k2():
    rng = random.Random(35)
    for _ in range(8):
        ba = _random_ba(rng, 2)
        for bits in range(16):
            f = TruthTable(2, bits)
            assert (match(ba, f) is not None) == brute_force_matchable(ba, f)


def test_direct_sram_drives_tree():
    rng = random.Random(36)
    for _ in range(40):
        k = rng.randint(2, 3)
        ba = _random_ba(rng, k)
        f = TruthTable(k, rng.getrandbits(1 << k))
        sram = implements_direct(ba, f)
        if sram is None:
            continue
        tree = build_and_prune(ba)
        assert all(tree_eval(tree, sram, m) == f.eval(m) for m in range(1 << k))


def test_cegar_agrees_with_direct():
    plb = encode_plb(BA_0111, with_pinv=False)
    config = cegar_match(plb, F_1000)
    assert config == [1, 0]
    assert cegar_match(plb, TruthTable(2, 0x6)) is None
    # PINV as configuration bits: negating both inputs maps 0x8 onto 0x1
    plb_pinv = encode_plb(BA_0111, with_pinv=True)
    config = cegar_match(plb_pinv, TruthTable(2, 0x8))
    assert config is not None
    assert all(plb_pinv.eval(config, m) == TruthTable(2, 0x8).eval(m) for m in range(4))


def test_cegar_wrapper_equals_match():
    rng = random.Random(37)
    for _ in range(30):
        k = rng.randint(2, 3)
        ba = _random_ba(rng, k)
        f = TruthTable(k, rng.getrandbits(1 << k))
        a = match(ba, f)
        b = match_cegar(ba, f)
        assert (a is None) == (b is None)
        if a is not None:
            assert a == b  # same enumeration order, same forced bits


def test_dimacs_export():
    plb = encode_plb(BA_0111, with_pinv=True)
    text = plb.to_dimacs(F_1000, [0, 3])
    assert text.startswith("c dslut")
    assert "p cnf %d" % plb.n_config in text


def test_ba_file_round_trip():
    text = ba_to_text(BA_0111)
    assert text.splitlines()[0] == "dslut v1"
    assert ba_from_text(text) == BA_0111
    with pytest.raises(ParseError):
        ba_from_text("dslut v2\n")
    with pytest.raises(ParseError):
        ba_from_text("dslut v1\nK=2\nB=2\nPINV=1\nASSIGN=0 1 1 1\n")
    with pytest.raises(ParseError):
        ba_from_text("dslut v1\nK=2\nB=3\nPINV=2\nASSIGN=0 1 1 1\n")


def test_ba_invariants():
    with pytest.raises(UsageError):
        BitAssignment(2, 2, (0, 0, 0, 0))  # id 1 unused
    with pytest.raises(UsageError):
        BitAssignment(2, 2, (0, 1, 1))


def _random_ba(rng, k):
    n = 1 << k
    b = rng.randint(1, n)
    assign = [rng.randrange(b) for _ in range(n)]
    for c in range(b):
        if c not in assign:
            assign[rng.randrange(n)] = c
    used = sorted(set(assign))
    remap = {c: i for i, c in enumerate(used)}
    return BitAssignment(k, len(used), tuple(remap[c] for c in assign))


def _refine(rng, ba):
    """Split one class of `ba` (when possible) to build a refinement."""
    assign = list(ba.assign)
    classes = ba.classes()
    splittable = [c for c, ps in enumerate(classes) if len(ps) > 1]
    if splittable:
        c = rng.choice(splittable)
        ps = classes[c]
        cut = rng.randint(1, len(ps) - 1)
        for p in ps[cut:]:
            assign[p] = ba.b
        return BitAssignment(ba.k, ba.b + 1, tuple(assign))
    return ba
