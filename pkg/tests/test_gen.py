import random

import pytest

from dslut.boolfn import TruthTable, npn_canonical
from dslut.cuts import FuncLib, harvest_library
from dslut.errors import UsageError
from dslut.gen import (
    DistinctionMap,
    compute_cost,
    coverage_objective,
    extend_ba,
    generate,
    heuristic_init,
    search,
)
from dslut.netlist import parse_aiger
from dslut.plb import BitAssignment, coverage

AND2 = TruthTable(2, 0x8)
XNOR2 = TruthTable(2, 0x9)


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [first]] + part[i + 1 :]
        yield [[first]] + part


def min_bits_by_partition(tt_list):
    """Oracle: smallest block count over all set partitions of the positions."""
    k = tt_list[0].k
    best = None
    for part in set_partitions(list(range(1 << k))):
        ok = all(
            len({tt.eval(p) for p in block}) == 1 for block in part for tt in tt_list
        )
        if ok and (best is None or len(part) < best):
            best = len(part)
    return best


def mini_lib(weighted_entries, k=2):
    lib = FuncLib(k)
    for tt, count in weighted_entries:
        canon, _ = npn_canonical(tt)
        lib.bump(canon, len(canon.support()), "n_cut_best", count)
    return lib


def test_compute_cost_examples():
    assert compute_cost([AND2]) == 2
    assert compute_cost([AND2, XNOR2]) == 3
    assert compute_cost([AND2, AND2]) == compute_cost([AND2])
    assert compute_cost([]) == 0
    with pytest.raises(UsageError):
        compute_cost([AND2, TruthTable(3, 0x80)])


def test_compute_cost_matches_partition_oracle():
    rng = random.Random(61)
    for k in (2, 3):
        for _ in range(6 if k == 3 else 12):
            tts = [TruthTable(k, rng.getrandbits(1 << k)) for _ in range(rng.randint(1, 3))]
            assert compute_cost(tts) == min_bits_by_partition(tts)


def test_heuristic_init_single_function():
    ba = heuristic_init(mini_lib([(AND2, 5)]), 2)
    assert ba.b == 2
    # canonical of AND-shape is (1,0,0,0): one singleton class plus a triple
    sizes = sorted(len(ps) for ps in ba.classes())
    assert sizes == [1, 3]
    assert ba.assign == (0, 1, 1, 1)


def test_heuristic_init_two_functions():
    ba = heuristic_init(mini_lib([(AND2, 5), (TruthTable(2, 0x6), 1)]), 2)
    assert ba.b == 3
    assert [tuple(ps) for ps in ba.classes()] == [(0,), (1, 2), (3,)]


def test_heuristic_init_top1_matches_cost():
    lib = mini_lib([(AND2, 5), (TruthTable(2, 0x6), 1)])
    ba = heuristic_init(lib, 2, num_top_funcs=1)
    assert ba.b == compute_cost([lib.select(2)[0].tt])


def test_heuristic_init_requires_entries():
    with pytest.raises(UsageError):
        heuristic_init(FuncLib(4), 4)


def test_extend_ba_k4_is_lut4():
    ba = BitAssignment(4, 2, tuple([0] * 15 + [1]))
    ext, dm = extend_ba(ba)
    assert ext.b == 16
    assert ext.is_lut4_compatible()
    assert dm.forced == frozenset(range(16))


def test_extend_ba_splits_and_is_idempotent():
    assign = [0] * 32 + [1] * 32  # positions 0 and 1 share a bit
    ba = BitAssignment(6, 2, tuple(assign))
    ext, dm = extend_ba(ba)
    assert ext.assign[0] != ext.assign[1]
    assert not dm.compatible(0, 1)  # extension distinction is preserved
    again, _ = extend_ba(ext)
    assert again.assign == ext.assign
    # upper positions keep their old grouping
    assert len({ext.assign[p] for p in range(32, 64)}) == 1


def test_extend_ba_below_k4_passes_through():
    ba = BitAssignment(2, 2, (0, 1, 1, 1))
    ext, dm = extend_ba(ba)
    assert ext is ba
    assert dm.forced == frozenset()


def test_search_identity_when_no_evals():
    lib = mini_lib([(AND2, 3)])
    ext, dm = extend_ba(heuristic_init(lib, 2))
    out = search(ext, dm, budget=3, lib=lib, evals=0, seed=0)
    assert out == ext


def test_search_full_budget_reaches_full_lut():
    lib = mini_lib([(AND2, 3), (TruthTable(2, 0x6), 2)])
    ext, dm = extend_ba(heuristic_init(lib, 2))
    out = search(ext, dm, budget=4, lib=lib, evals=10, seed=1)
    assert out.b == 4
    for nv in (2,):
        rep = coverage(out, lib, nv)
        assert rep.matched == rep.total


def test_search_deterministic_and_monotone():
    aig = parse_aiger("aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n")
    lib = harvest_library([aig], 2)
    ext, dm = extend_ba(heuristic_init(lib, 2))
    a = search(ext, dm, budget=2, lib=lib, evals=60, seed=7,
               objective=coverage_objective(lib, [2]))
    b = search(ext, dm, budget=2, lib=lib, evals=60, seed=7,
               objective=coverage_objective(lib, [2]))
    assert a == b
    base = coverage_objective(lib, [2])(ext)[0]
    final = coverage_objective(lib, [2])(a)[0]
    assert final >= base


def test_search_rejects_infeasible_budget():
    lib = mini_lib([(TruthTable(4, 0x8000), 1)], k=4)
    ext, dm = extend_ba(heuristic_init(lib, 4))
    with pytest.raises(UsageError):
        search(ext, dm, budget=10, lib=lib, evals=5, seed=0)
    with pytest.raises(UsageError):
        search(ext, dm, budget=17, lib=lib, evals=5, seed=0)


def test_generate_full_budget_k4():
    lib = mini_lib([(TruthTable(4, 0x8000), 4), (TruthTable(4, 0x6666), 2)], k=4)
    result = generate(lib, 4, bits=16, evals=5, seed=0)
    assert result.lut4_extended
    assert result.ba.b == 16
    rep = coverage(result.ba, lib, 4)
    assert rep.matched == rep.total


def test_generate_small_budget_skips_extension():
    lib = mini_lib([(TruthTable(4, 0x8000), 4), (TruthTable(4, 0x6666), 2)], k=4)
    logs = []
    result = generate(lib, 4, bits=10, evals=40, seed=3, log=logs.append)
    assert not result.lut4_extended
    assert any("extension skipped" in note for note in result.notes)
    assert result.ba.b <= 10
    obj = coverage_objective(lib, [3, 4])
    assert obj(result.ba)[0] >= obj(result.extended)[0]


def test_generate_validates_budget():
    lib = mini_lib([(AND2, 1)])
    with pytest.raises(UsageError):
        generate(lib, 2, bits=0)
    with pytest.raises(UsageError):
        generate(lib, 2, bits=5)


def test_objective_is_pure():
    lib = mini_lib([(AND2, 3), (TruthTable(2, 0x6), 2)])
    obj = coverage_objective(lib, [2])
    ba = BitAssignment(2, 2, (0, 1, 1, 1))
    assert obj(ba)[0] == obj(ba)[0]


def test_search_progress_log():
    lib = mini_lib([(AND2, 3)])
    ext, dm = extend_ba(heuristic_init(lib, 2))
    lines = []
    search(ext, dm, budget=4, lib=lib, evals=250, seed=0, log=lines.append)
    assert any(line.startswith("eval 100 ") for line in lines)
    assert any(line.startswith("eval 200 ") for line in lines)
