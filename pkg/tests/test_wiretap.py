import itertools
from fractions import Fraction

import pytest

from rankcodes import (BudgetError, CodeFileError, FieldTower, HypothesisError,
                       LinearCode, build_c_opt, cartesian, composition_search,
                       coset_decode, coset_encode, gabidulin, grw_table_exact,
                       leakage_exact, linalg, reducible, stronger_security_bound)
from rankcodes import wiretap as wt
from rankcodes.rankmetric import GaloisClosedSpace

from conftest import random_full_rank


# -- coset coding -------------------------------------------------------------

def test_coset_encode_decode_roundtrip(f4):
    code = random_full_rank(f4, 4, 2, seed=2, label="coset")
    for seed in range(100):
        for x in [(0, 0), (1, 3), (2, 2)]:
            c = coset_encode(code, list(x), seed)
            assert coset_decode(code, c) == x


def test_coset_encode_full_rank_square(f4):
    code = gabidulin(f4, 2, 2)
    outs = {coset_encode(code, [1, 2], seed) for seed in range(10)}
    assert len(outs) == 1  # square invertible: no freedom


def test_coset_encode_zero_message_covers_kernel(f4):
    code = LinearCode(f4, 2, [[1, 0]])
    hits = {coset_encode(code, [0], seed) for seed in range(200)}
    assert hits == {(0, v) for v in range(4)}


def test_coset_encode_example_covers_coset(f4):
    code = LinearCode(f4, 2, [[1, 0]])
    hits = {coset_encode(code, [1], seed) for seed in range(200)}
    assert hits == {(1, v) for v in range(4)}


# -- exact leakage --------------------------------------------------------------

def test_leakage_exact_examples(f4):
    code = random_full_rank(f4, 3, 2, seed=5, label="leak")
    assert leakage_exact(code, []).leakage == 0
    assert leakage_exact(code, linalg.identity(3)).leakage == code.k
    with pytest.raises(ValueError):
        leakage_exact(code, [[2, 0, 0]])  # entry outside F_q


def test_leakage_copt_remark(f4):
    # two one-dim observation blocks: huge observed space, zero packets leaked
    copt = build_c_opt(f4, 2)
    B = [[1, 0, 0, 0], [0, 0, 1, 0]]
    rep = leakage_exact(copt.code(), B)
    assert rep.mu == 2 and rep.leakage == 0


def test_leakage_depends_only_on_rowspace(f4):
    code = random_full_rank(f4, 3, 2, seed=6, label="rowspace")
    B = [[1, 0, 1], [0, 1, 1]]
    base = leakage_exact(code, B).leakage
    swapped = [B[1], B[0]]
    summed = [B[0], [f4.add(a, b) for a, b in zip(B[0], B[1])]]
    for other in (swapped, summed):
        assert leakage_exact(code, other).leakage == base


def test_worst_case_r_from_table(f4):
    code = gabidulin(f4, 2, 1)
    table, _ = grw_table_exact(code)
    rep = leakage_exact(code, [[1, 0]], table=table)
    assert rep.worst_case_r == sum(1 for d in table if d <= 1)


# -- joint distribution ------------------------------------------------------------

def test_joint_enumeration_examples(f4):
    code = random_full_rank(f4, 2, 1, seed=9, label="joint")
    assert wt.leakage_joint_enumeration(code, []) == 0
    assert wt.leakage_joint_enumeration(code, linalg.identity(2)) == code.k


def test_joint_enumeration_derived_example(f4):
    y = f4.from_coeffs((0, 1))
    code = LinearCode(f4, 2, [[1, y]])
    # 2^4 codeword values; observation of the first link reveals nothing
    assert wt.leakage_joint_enumeration(code, [[1, 0]]) == 0


def test_joint_enumeration_matches_exact_everywhere(f4):
    code = random_full_rank(f4, 3, 2, seed=12, label="joint-all")
    for d in range(4):
        for B in linalg.subspace_bases(3, d, range(2)):
            val = wt.leakage_joint_enumeration(code, B)
            assert val == leakage_exact(code, B).leakage
            assert val.denominator == 1


def test_joint_enumeration_budget(f8):
    code = random_full_rank(f8, 4, 2, seed=1, label="joint-budget")
    with pytest.raises(BudgetError):
        wt.leakage_joint_enumeration(code, [], budget=10)
    with pytest.raises(BudgetError):
        wt.leakage_empirical(code, [], budget=10, sampling=False)
    est = wt.leakage_empirical(code, linalg.identity(4), budget=10,
                               sampling=True, trials=2000, seed=3)
    assert abs(float(est) - code.k) < 0.3


# -- stronger security ----------------------------------------------------------------

def test_stronger_security_zero_projections(f4):
    R = cartesian([gabidulin(f4, 2, 1), gabidulin(f4, 2, 1)])
    V = GaloisClosedSpace.from_fq_rows(f4, [], 4)
    res = stronger_security_bound(R, V, [0, 0])
    assert res.bound == 0


def test_stronger_security_remark_instance(f4):
    copt = build_c_opt(f4, 2)
    B = [[1, 0, 0, 0], [0, 0, 1, 0]]
    V = GaloisClosedSpace.from_fq_rows(f4, B, 4)
    assert V.dim == 2 * (f4.m - 1)  # k(m-1) = 2 >= d_1 = 2
    res = stronger_security_bound(copt, V, [1, 1])
    assert res.bound == 0 and res.zero_leakage
    assert leakage_exact(copt.code(), B).leakage == 0
    assert wt.copt_full_block_bound(copt, V) == 0


def test_stronger_security_hypothesis_gate(f4):
    copt = build_c_opt(f4, 2)
    V = GaloisClosedSpace.from_fq_rows(f4, linalg.identity(4), 4)
    with pytest.raises(HypothesisError):
        stronger_security_bound(copt, V, [0, 1])  # block projection too big for r=0
    res = stronger_security_bound(copt, V, [1, 1])
    assert res.bound == 2  # no strict blocks


def test_stronger_security_block_supported_space(f8):
    c1 = gabidulin(f8, 3, 1)   # d_1(C_1) = 3
    c2 = gabidulin(f8, 2, 1)
    R = reducible([c1, c2], seed=4)
    V = GaloisClosedSpace.from_fq_rows(f8, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]], 5)
    res = stronger_security_bound(R, V, [1, 0])
    assert res.bound == 0
    assert leakage_exact(R.code(), [list(r) for r in V.basis]).leakage == 0


def test_composition_search(f4):
    R = cartesian([gabidulin(f4, 2, 1), gabidulin(f4, 2, 1)])
    full = GaloisClosedSpace.from_fq_rows(f4, linalg.identity(4), 4)
    zero = GaloisClosedSpace.from_fq_rows(f4, [], 4)
    assert composition_search(R, zero).bound == 0
    assert composition_search(R, full).bound == R.k
    # product observation space: per-block caps add up
    V = GaloisClosedSpace.from_fq_rows(f4, [[1, 0, 0, 0], [0, 1, 0, 0]], 4)
    res = composition_search(R, V)
    assert res.applicable
    assert res.bound >= leakage_exact(R.code(), [list(r) for r in V.basis]).leakage


def test_composition_search_dominates_exact_everywhere(f4):
    R = reducible([gabidulin(f4, 2, 1), gabidulin(f4, 2, 1)], seed=17)
    tables = [grw_table_exact(R.main_component(i))[0] for i in range(R.l)]
    code = R.code()
    equality_seen = False
    for d in range(R.n + 1):
        for B in linalg.subspace_bases(R.n, d, range(2)):
            V = GaloisClosedSpace.from_fq_rows(f4, B, R.n)
            res = composition_search(R, V, tables=tables)
            leak = leakage_exact(code, B).leakage
            if res.applicable:
                assert res.bound >= leak
                equality_seen = equality_seen or res.bound == leak
    assert equality_seen


def test_copt_corollary_equals_search_on_product_spaces(f4):
    copt = build_c_opt(f4, 2)
    tables = [grw_table_exact(copt.main_component(i))[0] for i in range(copt.l)]
    for d1 in range(3):
        for d2 in range(3):
            rows = []
            for basis1 in linalg.subspace_bases(2, d1, range(2)):
                for basis2 in linalg.subspace_bases(2, d2, range(2)):
                    rows = [r + [0, 0] for r in basis1] + [[0, 0] + r for r in basis2]
                    break
                break
            V = GaloisClosedSpace.from_fq_rows(f4, rows, 4)
            res = composition_search(copt, V, tables=tables)
            assert res.applicable
            assert res.bound == wt.copt_full_block_bound(copt, V)


def test_leakage_report_for_reduction(f4):
    copt = build_c_opt(f4, 2)
    B = [[1, 0, 0, 0], [0, 0, 1, 0]]
    rep = wt.leakage_report_for_reduction(copt, B)
    assert rep.leakage == 0 and rep.theorem_bound == 0
    assert rep.lines()[-1] == "certified_bound=0"
    full = wt.leakage_report_for_reduction(copt, linalg.identity(4))
    assert full.leakage == copt.k == full.theorem_bound


# -- wiretap file format ------------------------------------------------------------

def test_wiretap_file_roundtrip(f4):
    B = [[1, 0, 1], [0, 1, 1]]
    text = wt.format_wiretap_file(f4, B)
    assert wt.parse_wiretap_file(f4, text, 3) == B


def test_wiretap_file_errors(f4):
    with pytest.raises(CodeFileError):
        wt.parse_wiretap_file(f4, "wiretap mu=1\nrow 0,1 0,0 0,0\n", 3)  # high digit
    with pytest.raises(CodeFileError):
        wt.parse_wiretap_file(f4, "wiretap mu=2\nrow 1,0 0,0 0,0\n", 3)  # count mismatch
    with pytest.raises(CodeFileError):
        wt.parse_wiretap_file(f4, "wiretap mu=1\nrow 1,0 0,0\n", 3)  # arity
