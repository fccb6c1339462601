import itertools
import random

import pytest

from dslut import data
from dslut.boolfn import TruthTable, npn_canonical
from dslut.cuts import (
    FuncLib,
    cut_function,
    enumerate_cuts,
    extract_cover,
    harvest_library,
    load_lib,
    make_cut,
    occurrence_report,
    save_lib,
)
from dslut.errors import ParseError, UsageError
from dslut.netlist import AigBuilder, parse_aiger, simulate


def single_and():
    return parse_aiger("aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n")


def and_tree(n_inputs):
    b = AigBuilder()
    layer = [b.input() for _ in range(n_inputs)]
    while len(layer) > 1:
        nxt = [b.and_(layer[i], layer[i + 1]) for i in range(0, len(layer) - 1, 2)]
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    b.output(layer[0])
    return b.build()


def test_single_and_cut_set():
    aig = single_and()
    cut_pass = enumerate_cuts(aig, 4)
    leaves = {c.leaves for c in cut_pass.cut_sets[3]}
    assert leaves == {(3,), (1, 2)}


def test_balanced_tree_cuts():
    aig = and_tree(4)
    root = max(v for v in range(1, aig.n_vars + 1) if aig.is_and[v])
    wide = enumerate_cuts(aig, 4, cut_limit=8)
    assert (1, 2, 3, 4) in {c.leaves for c in wide.cut_sets[root]}
    narrow = enumerate_cuts(aig, 2)
    assert (1, 2, 3, 4) not in {c.leaves for c in narrow.cut_sets[root]}


def test_cut_sets_feasible_and_non_dominated():
    rng = random.Random(41)
    for _ in range(20)	:
        aig = _random_aig(rng, rng.randint(2, 5), rng.randint(3, 25))
        k = rng.choice([2, 3, 4])
        cut_pass = enumerate_cuts(aig, k, cut_limit=rng.choice([2, 4, 8]))
        for v, cset in cut_pass.cut_sets.items():
            nontrivial = [c for c in cset if c.leaves != (v,)]
            for c in nontrivial:
                assert 0 < len(c.leaves) <= k or v == 0
                assert list(c.leaves) == sorted(set(c.leaves))
            for c1 in nontrivial:
                for c2 in nontrivial:
                    if c1 is not c2:
                        assert not set(c1.leaves) < set(c2.leaves)


def test_priority_subset_of_exhaustive():
    rng = random.Random(42)
    for _ in range(10):
        aig = _random_aig(rng, 4, 15)
        pri = enumerate_cuts(aig, 4, cut_limit=4)
        exh = enumerate_cuts(aig, 4, exhaustive=True)
        big = enumerate_cuts(aig, 4, cut_limit=10**6)
        for v in pri.cut_sets:
            assert {c.leaves for c in pri.cut_sets[v]} <= {c.leaves for c in exh.cut_sets[v]}
            assert {c.leaves for c in big.cut_sets[v]} == {c.leaves for c in exh.cut_sets[v]}


def test_cut_function_examples():
    aig = single_and()
    assert cut_function(aig, 3, make_cut((1, 2))) == TruthTable(2, 0x8)
    # OR is the complemented edge of not-a AND not-b
    orx = parse_aiger("aag 3 2 0 1 1\n2\n4\n7\n6 3 5\n")
    assert cut_function(orx, 3, make_cut((1, 2))) == TruthTable(2, 0x1)
    assert cut_function(orx, 3, make_cut((1, 2)), complement=True) == TruthTable(2, 0xE)
    assert cut_function(aig, 3, make_cut((3,))) == TruthTable(2, 0xA)


def test_cut_function_matches_simulation():
    for name in ("mux41.aag", "majority5.aag", "dec3to8.aag"):
        with open(data.path("netlists/" + name), "rb") as handle:
            aig = parse_aiger(handle.read())
        cut_pass = enumerate_cuts(aig, 6, exhaustive=True)
        pis = set(aig.inputs)
        for v, out_c in aig.outputs:
            if not aig.is_and[v]:
                continue
            full = next(
                (c for c in cut_pass.cut_sets[v] if set(c.leaves) <= pis and len(c.leaves) > 1),
                None,
            )
            if full is None:
                continue
            tt = cut_function(aig, v, full)
            index_of = {leaf: j for j, leaf in enumerate(full.leaves)}
            for bits in itertools.product([0, 1], repeat=len(aig.inputs)):
                vec = list(bits)
                want = simulate(aig, vec)[[o for o, _ in aig.outputs].index(v)] ^ out_c
                minterm = 0
                for leaf, j in index_of.items():
                    minterm |= vec[aig.inputs.index(leaf)] << j
                assert tt.eval(minterm) == want


def test_cut_function_invalid_cut():
    from dslut.errors import InternalError

    aig = and_tree(4)
    root = max(v for v in range(1, aig.n_vars + 1) if aig.is_and[v])
    with pytest.raises(InternalError):
        cut_function(aig, root, make_cut((1,)))


def test_harvest_single_and():
    lib = harvest_library([single_and()], 4)
    canon = npn_canonical(TruthTable(2, 0x8))[0]
    entry = lib.entries[(canon.to_hex(), 2)]
    assert entry.n_cut_best >= 1
    assert entry.n_cut_best <= entry.n_cutset <= entry.n_enum


def test_harvest_counts_structural_duplicates():
    text = "aag 6 4 0 2 2\n2\n4\n6\n8\n10\n12\n10 2 4\n12 6 8\n"
    lib = harvest_library([parse_aiger(text)], 4)
    canon = npn_canonical(TruthTable(2, 0x8))[0]
    assert lib.entries[(canon.to_hex(), 2)].n_cut_best >= 2


def test_harvest_empty():
    assert len(harvest_library([], 4)) == 0


def test_harvest_monotonicity_on_corpus():
    aigs = []
    for path in data.netlist_paths():
        with open(path, "rb") as handle:
            aigs.append(parse_aiger(handle.read()))
    lib = harvest_library(aigs, 4)
    assert len(lib) > 0
    for entry in lib.entries.values():
        assert entry.n_cut_best <= entry.n_cutset <= entry.n_enum
        small, nvars = entry.tt, entry.nvars
        assert npn_canonical(small)[0] == small
        assert len(small.support()) == nvars


def test_occurrence_report_arithmetic():
    lib = FuncLib(4)
    f = npn_canonical(TruthTable(2, 0x8))[0]
    g = npn_canonical(TruthTable(2, 0x6))[0]
    lib.bump(f, 2, "n_cut_best", 3)
    lib.bump(g, 2, "n_cut_best", 1)
    rows = occurrence_report(lib, nvars=2, top_n=10)
    assert [r.rate for r in rows] == [0.75, 0.25]
    assert [r.cumulative for r in rows] == [0.75, 1.0]
    assert occurrence_report(lib, nvars=5) == []
    with pytest.raises(UsageError):
        occurrence_report(lib, top_n=0)
    assert len(occurrence_report(lib, nvars=2, top_n=1)) == 1


def test_library_file_round_trip(tmp_path):
    aigs = []
    for path in data.netlist_paths()[:3]:
        with open(path, "rb") as handle:
            aigs.append(parse_aiger(handle.read()))
    lib = harvest_library(aigs, 4)
    target = tmp_path / "lib.fl"
    save_lib(lib, str(target))
    text = target.read_text()
    assert text.startswith("funclib v1 K=4\n")
    again = load_lib(str(target))
    assert again.to_text() == lib.to_text()
    # deterministic across a rerun
    rerun = harvest_library(aigs, 4)
    assert rerun.to_text() == lib.to_text()
    with pytest.raises(ParseError):
        FuncLib.from_text("nope\n")


def test_cover_leaves_are_pis_or_roots():
    for path in data.netlist_paths():
        with open(path, "rb") as handle:
            aig = parse_aiger(handle.read())
        cut_pass = enumerate_cuts(aig, 4)
        cover = extract_cover(aig, cut_pass)
        roots = {v for v, _ in cover}
        pis = set(aig.inputs) | {0}
        for v, cut in cover:
            for leaf in cut.leaves:
                assert leaf in pis or leaf in roots


def _random_aig(rng, n_inputs, n_ands):
    b = AigBuilder()
    lits = [b.input() for _ in range(n_inputs)]
    for _ in range(n_ands):
        x = rng.choice(lits) ^ rng.randint(0, 1)
        y = rng.choice(lits) ^ rng.randint(0, 1)
        lits.append(b.and_(x, y))
    b.output(lits[-1])
    b.output(rng.choice(lits) ^ 1)
    return b.build()
