import itertools
import math

import numpy as np
import pytest
from scipy.optimize import linprog

from ncdistance.chains import (
    Chain,
    ChainDecomposition,
    bare_length,
    chain_bounds,
    closed_form_length,
    enumerate_decompositions,
    is_admissible_L1,
    is_admissible_R1,
    is_extremal,
    junction_determinants,
    l1,
    l1_decomposition,
    l2,
    lambda_chain,
    parity_sums,
    r1,
    r2,
    r_bare,
    three_chain_length,
)

C = Chain.parse


def test_chain_parse_and_validation():
    assert C("1-2-1.5").weights == (1.0, 2.0, 1.5)
    assert str(C("1-2-1.5")) == "1-2-1.5"
    assert C("1-2-3").n_vertices == 4
    for bad in ("", "1--2", "1-x", "1-0", "1--1"):
        with pytest.raises(ValueError):
            C(bad)
    with pytest.raises(ValueError):
        Chain((1.0, math.inf))


def test_parity_sums():
    chain = C("1-2-1-2-1")
    assert parity_sums(chain) == (3, 4)
    assert parity_sums(C("1-2-1"), 2) == (2, 2)
    assert parity_sums(C("2-1"), 3) == (1, 2)
    assert parity_sums(C("5")) == (5, 0)


def test_bare_lengths():
    assert bare_length(C("2-1-2-1-2")) == pytest.approx(math.sqrt(40))
    assert bare_length(C("3")) == 3 == r_bare(C("3"))
    assert bare_length(C("1-2-1-2-1")) == 5
    assert r_bare(C("1-2-1-2-1")) == 4


def test_enumerate_decompositions():
    assert [d.cuts for d in enumerate_decompositions(3)] == [()]
    assert [d.cuts for d in enumerate_decompositions(4)] == [(), (2,)]
    cuts = {d.cuts for d in enumerate_decompositions(7)}
    assert cuts == {(), (2,), (3,), (4,), (5,), (2, 4), (2, 5), (3, 5)}


def test_decomposition_counts_follow_recurrence():
    # a(m) = a(m-1) + a(m-2) - ... : count cut sets directly by brute force
    for m in range(1, 14):
        brute = sum(
            1
            for r in range(m)
            for cuts in itertools.combinations(range(2, m - 1), r)
            if all(b - a >= 2 for a, b in zip(cuts, cuts[1:]))
        )
        assert sum(1 for _ in enumerate_decompositions(m)) == brute


def test_decomposition_validation():
    with pytest.raises(ValueError):
        ChainDecomposition(5, (1,))
    with pytest.raises(ValueError):
        ChainDecomposition(6, (2, 3))
    d = ChainDecomposition(5, (2,))
    assert d.bounds() == [(1, 2), (3, 5)]
    assert [(off, str(c)) for off, c in d.pieces(C("1-2-3-4-5"))] == [(0, "1-2"), (2, "3-4-5")]


def test_admissibility_examples():
    chain = C("1-2-1-2-1")
    assert is_admissible_L1(chain, ChainDecomposition(5))
    assert is_admissible_R1(chain, ChainDecomposition(5))
    assert junction_determinants(chain, ChainDecomposition(5, (2,))) == [2]
    assert not is_admissible_L1(chain, ChainDecomposition(5, (2,)))
    # cut 3: pieces 1-2-1 (odd 2, even 2) and 2-1 (odd 1, even 2), determinant 2*1 - 2*2
    assert junction_determinants(chain, ChainDecomposition(5, (3,))) == [-2]
    assert not is_admissible_L1(chain, ChainDecomposition(5, (3,)))
    for m in range(4, 9):
        ones = Chain((1.0,) * m)
        for d in enumerate_decompositions(ones):
            if d.cuts:
                assert not is_admissible_L1(ones, d, strict=True)


def test_r1_admissibility_examples():
    chain = C("2-1-2-1-2")
    for d in enumerate_decompositions(chain):
        if d.cuts:
            assert not is_admissible_R1(chain, d)
    # 1-1-2-2 cut at 2: left piece balanced, right piece (3, 4) has odd 2 = even 2
    chain = C("1-1-2-2")
    d = ChainDecomposition(4, (2,))
    assert is_admissible_R1(chain, d)
    assert not is_admissible_R1(chain, d, strict=True)


def test_l1_r1_values():
    assert l1(C("1-2-1-2-1")) == pytest.approx(5.0)
    assert r1(C("2-1-2-1-2")) == 6
    assert l1(C("2-1-2-1-2")) == pytest.approx(math.sqrt(40))
    for k in range(1, 5):
        ones = Chain((1.0,) * (2 * k))
        assert l1(ones) == pytest.approx(k * math.sqrt(2))
        assert r1(ones) == k


def test_l2_r2():
    assert r2(C("1-1-1")) == pytest.approx(1.5 / math.cos(math.pi / 5))
    assert l2(C("1-1-1")) == 2
    assert l2(C("1-2-1-2-1")) == 6
    assert r2(C("1-2-1-2-1")) == pytest.approx(7 / (2 * math.cos(math.pi / 7)))
    assert r2(C("2.5")) == pytest.approx(2.5) and l2(C("2.5")) == 2.5


def test_lambda_examples():
    assert lambda_chain(C("1-2-1")) == pytest.approx(2.5)
    assert lambda_chain(C("2-1-2")) == pytest.approx(4)
    assert lambda_chain(C("1-1-1-1")) == pytest.approx(math.sqrt(6))
    assert lambda_chain(C("1-2-1-2-1")) == pytest.approx(math.sqrt(20), rel=1e-7)
    assert closed_form_length(C("1-2-1-2-1")) is None
    assert closed_form_length(C("3-1-3-1-3")) == 9


def test_closed_forms_match_solver():
    for text in ("1.3-0.4-2.2", "0.5-2-0.7", "2-1-2-1-2-1-2", "1-1-1-1-1-1", "0.7-1.9"):
        chain = C(text)
        assert lambda_chain(chain) == pytest.approx(lambda_chain(chain, numeric=True), rel=1e-7)


def test_lambda_not_additive():
    assert 2 * lambda_chain(C("1-1")) != pytest.approx(lambda_chain(C("1-1-1-1")))


def test_single_weight_all_bounds_agree():
    rep = chain_bounds("1.7")
    assert rep.bare == rep.r_bare == rep.l1 == rep.r1 == rep.l2 == pytest.approx(1.7)
    assert rep.r2 == pytest.approx(1.7) and rep.lam == pytest.approx(1.7)


def test_is_extremal():
    rng = np.random.default_rng(0)
    for m in (1, 2, 3):
        for _ in range(10):
            assert is_extremal(Chain(tuple(rng.uniform(0.2, 5, m))))
    for m in range(1, 10):
        assert is_extremal(Chain((2.0,) * m))
    assert not is_extremal(C("2-1-1-2-1-4-2"))


def test_seven_chain_example():
    chain = C("2-1-1-2-1-4-2")
    value, best = l1_decomposition(chain)
    assert best.cuts == (2,)
    assert value == pytest.approx(math.sqrt(5) + math.hypot(4, 6))
    assert is_admissible_L1(chain, ChainDecomposition(7, (2,)), strict=True)
    # (2-1-1-2)-(1-4-2) is admissible too, but not the maximiser
    assert is_admissible_L1(chain, ChainDecomposition(7, (4,)), strict=True)
    assert not any(len(d.cuts) == 2 for d in enumerate_decompositions(chain) if is_admissible_L1(chain, d))
    assert chain_bounds(chain).lower <= lambda_chain(chain) <= chain_bounds(chain).upper


def test_report_invariants():
    rep = chain_bounds("1-2-1-2-1")
    assert rep.r1 >= rep.r_bare and rep.l1 >= rep.bare
    assert rep.lower - 1e-6 <= rep.lam <= rep.upper + 1e-6
    d = rep.to_dict()
    assert d["chain"] == "1-2-1-2-1" and d["L2"] == 6


def test_three_chain_branch_continuity():
    w1, w3 = 1.3, 2.9
    w2 = math.sqrt(w1 * w3)
    assert three_chain_length(w1, w2 * (1 + 1e-15), w3) == pytest.approx(w1 + w3, abs=1e-9)


# --- independent optimisation oracles for L1 and R1 ---------------------------


def _socp_l1(w):
    cp = pytest.importorskip("cvxpy")
    x = cp.Variable(len(w))
    cons = [cp.norm(cp.hstack([x[k], x[k + 1]])) <= 1 for k in range(len(w) - 1)]
    prob = cp.Problem(cp.Maximize(np.asarray(w) @ x), cons)
    prob.solve(solver=cp.CLARABEL)
    return prob.value


def _lp_r1(w):
    m = len(w)
    a = np.zeros((m - 1, m))
    for k in range(m - 1):
        a[k, k] = a[k, k + 1] = 1
    res = linprog(-np.asarray(w), A_ub=a, b_ub=np.ones(m - 1), bounds=[(0, None)] * m, method="highs")
    return -res.fun


@pytest.mark.parametrize("seed", range(4))
def test_l1_matches_socp(seed):
    rng = np.random.default_rng(seed)
    for _ in range(15):
        w = rng.uniform(0.2, 5, rng.integers(2, 9))
        assert l1(Chain(tuple(w))) == pytest.approx(_socp_l1(w), rel=1e-6)


@pytest.mark.parametrize("seed", range(4))
def test_r1_matches_lp(seed):
    rng = np.random.default_rng(100 + seed)
    for _ in range(25):
        w = rng.uniform(0.2, 5, rng.integers(2, 10))
        assert r1(Chain(tuple(w))) == pytest.approx(_lp_r1(w), rel=1e-9)


def test_reversal_invariance():
    rng = np.random.default_rng(5)
    for _ in range(100):
        chain = Chain(tuple(rng.uniform(0.2, 5, rng.integers(1, 10))))
        assert l1(chain) == pytest.approx(l1(chain.reversed()), rel=1e-12)
        assert r1(chain) == pytest.approx(r1(chain.reversed()), rel=1e-12)


def test_subadditivity_under_concatenation():
    rng = np.random.default_rng(6)
    for _ in range(100):
        a = Chain(tuple(rng.uniform(0.2, 5, rng.integers(1, 6))))
        b = Chain(tuple(rng.uniform(0.2, 5, rng.integers(1, 6))))
        # the second chain's parity is shifted by len(a) inside a-b
        shifted = math.hypot(*parity_sums(b, len(a)))
        assert bare_length(a.concat(b)) <= bare_length(a) + shifted + 1e-12
        assert l1(a.concat(b)) <= l1(a) + l1(b) + 1e-12
