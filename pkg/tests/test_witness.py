import math

import numpy as np
import pytest

from lpldpc import (
    MapSpec,
    ProofParams,
    TannerGraph,
    boundary_set,
    chernoff_sigma_budget,
    check_expansion,
    check_feasible,
    derive_params,
    find_delta_matching,
    generate_regular,
    high_noise_prob,
    high_noise_set,
    lp_decode,
    neighbor_set,
    weights_from_matching,
    witness_search,
)
from lpldpc import ChannelParams, normalized_llr, transmit_awgn
from lpldpc.witness import ParameterError

from conftest import awgn_llr
from oracles import q_tail, var_regular_graph

THRESHOLD1 = MapSpec.threshold(1.0)


def tiny_params(d_v, delta_dv, w=1.0):
    """Hand-built ProofParams for matching unit tests at toy degrees.

    Bypasses derive_params (which legitimately requires d_v > 4(4w+2)); only
    the fields used by the matching and weight routines are meaningful.
    """
    delta = delta_dv / d_v
    return ProofParams(
        w=w, d_v=d_v, delta_hat=delta, delta=delta, delta_prime=2 * delta - 1,
        gamma=0.5, kappa_lo=0.0, kappa_hi=1.0, alpha_exp=None,
    )


def test_derive_params_requires_dv_above_floor():
    with pytest.raises(ParameterError, match="4"):
        derive_params(1.0, 24)
    derive_params(1.0, 25)  # smallest admissible integer for W = 1
    with pytest.raises(ParameterError):
        derive_params(0.5, 100)


def test_derive_params_example_values():
    p = derive_params(1.0, 25, delta_hat=0.93)
    assert p.delta == pytest.approx(23 / 25, rel=1e-15)
    assert p.delta_dv == 23
    assert p.delta_prime == pytest.approx(0.84, rel=1e-12)
    assert p.gamma == pytest.approx(2.0 / 3.0, rel=1e-12)
    assert p.kappa_lo == pytest.approx(1.0 / 21.0, rel=1e-12)
    assert p.kappa_hi == pytest.approx(0.125, rel=1e-12)
    assert p.kappa_lo < p.kappa_mid < p.kappa_hi


def test_derive_params_invariants_hold():
    for w, d_v in [(1.0, 25), (1.0, 40), (1.5, 33), (2.0, 41)]:
        p = derive_params(w, d_v)
        assert d_v > 4 * (4 * w + 2)
        assert 1 - 1 / d_v > p.delta_hat > 1 - 0.75 / (4 * w + 2)
        assert p.delta_hat - p.delta <= 1 / d_v + 1e-12
        assert p.delta > 1 - 1 / (4 * w + 2)
        assert 0 < p.gamma < 1
        assert p.kappa_lo < p.kappa_hi
        assert p.delta_dv == round(p.delta * d_v)
        assert (2 * p.delta - 1) / (4 * (1 - p.delta)) > w


def test_derive_params_delta_hat_interval():
    with pytest.raises(ParameterError, match="interval"):
        derive_params(1.0, 25, delta_hat=0.97)
    with pytest.raises(ParameterError, match="interval"):
        derive_params(1.0, 25, delta_hat=0.875)
    with pytest.raises(ParameterError, match="alpha_exp"):
        derive_params(1.0, 25, alpha_exp=1.5)


def test_high_noise_set_examples():
    assert high_noise_set(np.ones(4)) == frozenset()
    assert high_noise_set(np.array([0.49, 0.5, -2.0])) == frozenset({0, 2})


def test_high_noise_set_frequency_matches_prob():
    sigma = 0.45
    params = ChannelParams(sigma * sigma)
    p = high_noise_prob(params, THRESHOLD1)
    count = 0
    trials, n = 800, 500
    for t in range(trials):
        lam = THRESHOLD1.apply(normalized_llr(transmit_awgn(np.ones(n), params, 51, t), params))
        count += len(high_noise_set(lam))
    se = math.sqrt(p * (1 - p) / (trials * n))
    assert abs(count / (trials * n) - p) < 3 * se


def test_boundary_set_empty_when_u_empty(g34_small):
    params = tiny_params(3, 2)
    assert boundary_set(g34_small, frozenset(), params) == frozenset()


def test_boundary_set_hand_graph():
    # six variables, checks chosen so exactly one variable straddles N(U)
    g = TannerGraph(6, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [3, 4, 5], [1, 4, 5], [2, 4, 5]])
    params = tiny_params(3, 3)  # delta = 1, delta' = 1: threshold (1-delta')dv = 0
    u = frozenset({0})
    nu = neighbor_set(g, u)
    # independent set-intersection oracle
    expect = {
        i for i in range(6)
        if i not in u and sum(1 for j in g.var_nbrs[i] if j in nu) > 0
    }
    assert boundary_set(g, u, params) == frozenset(expect)


def test_boundary_full_overlap_is_member():
    # v1 shares all its checks with N({v0})
    g = TannerGraph(3, [[0, 1, 2], [0, 1, 2], [0, 1, 2]])
    params = tiny_params(3, 3)
    assert 1 in boundary_set(g, frozenset({0}), params)


def test_expansion_singletons_pass():
    g = generate_regular(16, 3, 4, seed=1)
    verdict = check_expansion(g, beta_exp=3.0, s_max=1)
    assert verdict.ok
    assert verdict.subsets_checked == 16


def test_expansion_finds_duplicate_neighborhood_pair():
    g = TannerGraph(4, [[0, 1], [0, 1], [0, 1], [2, 3], [2, 3], [2, 3]])
    verdict = check_expansion(g, beta_exp=3.0, s_max=2)
    assert not verdict.ok
    assert verdict.violating == (0, 1)
    assert verdict.neighbor_count == 3
    assert verdict.required == 6.0


def test_expansion_verdict_invariant_under_relabeling():
    g = generate_regular(12, 3, 4, seed=4)
    perm = np.random.default_rng(0).permutation(12)
    relabeled = TannerGraph(12, [sorted(int(perm[i]) for i in row) for row in g.check_nbrs])
    a = check_expansion(g, beta_exp=2.5, s_max=3)
    b = check_expansion(relabeled, beta_exp=2.5, s_max=3)
    assert a.ok == b.ok


def test_expansion_budget_enforced():
    g = generate_regular(40, 3, 4, seed=2)
    with pytest.raises(ValueError, match="budget"):
        check_expansion(g, beta_exp=2.0, s_max=20)


def test_empty_matching():
    g = generate_regular(12, 3, 4, seed=3)
    m = find_delta_matching(g, frozenset(), frozenset(), tiny_params(3, 2))
    assert m is not None and m.edges == frozenset()


def test_matching_single_variable_private_checks():
    # one variable with 3 private checks, delta*dv = 2 -> two matched edges
    g = TannerGraph(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3]])
    params = tiny_params(3, 2)
    m = find_delta_matching(g, frozenset({0}), frozenset(), params)
    assert m is not None
    assert len(m.edges) == 2
    assert all(i == 0 for i, _ in m.edges)
    checks = [j for _, j in m.edges]
    assert len(set(checks)) == 2


def test_matching_absent_when_checks_scarce():
    # two high-noise variables needing 2 private checks each, but only 3 checks
    g = TannerGraph(3, [[0, 1, 2], [0, 1, 2], [0, 1, 2]])
    params = tiny_params(3, 2)
    m = find_delta_matching(g, frozenset({0, 1}), frozenset(), params)
    assert m is None


def test_matching_exists_on_verified_expanders():
    # Proof-scale degrees: whenever the expansion is verified at sizes up to
    # s_max and |U| + |boundary| <= s_max, a matching must exist.
    params = derive_params(1.0, 25)
    s_max = 2
    qualifying = 0
    for seed in range(15):
        g = var_regular_graph(30, 25, 375, seed=seed)
        if not check_expansion(g, beta_exp=params.delta_dv, s_max=s_max).ok:
            continue
        for u in ({3}, {14}, {7, 19}, {2, 11}):
            u = frozenset(u)
            udot = boundary_set(g, u, params)
            if len(u) == 1:
                # pair expansion caps every overlap at (1 - delta') d_v
                assert udot == frozenset()
            if len(u) + len(udot) > s_max:
                continue  # outside the proposition's hypotheses
            qualifying += 1
            assert find_delta_matching(g, u, udot, params) is not None
    assert qualifying >= 12


def test_weights_from_empty_matching(g34_small):
    params = tiny_params(3, 2)
    m = find_delta_matching(g34_small, frozenset(), frozenset(), params)
    w = weights_from_matching(g34_small, m, frozenset(), 0.5, params)
    assert set(w.tau) == set(g34_small.edges())
    assert all(v == 0.0 for v in w.tau.values())


def test_weights_single_matched_check():
    g = TannerGraph(4, [[0, 1, 2, 3], [0, 1, 2, 3][:2]])
    params = tiny_params(2, 1)
    m = find_delta_matching(g, frozenset({0}), frozenset(), params)
    assert m is not None
    w = weights_from_matching(g, m, frozenset({0}), 0.25, params)
    (i, j), = m.edges
    assert w.tau[(i, j)] == -0.25
    others = [w.tau[(i2, j)] for i2 in g.check_nbrs[j] if i2 != i]
    assert all(v == 0.25 for v in others)


def test_weights_kappa_interval_enforced(g34_small):
    params = derive_params(1.0, 25)
    m = type("M", (), {"edges": frozenset()})()
    with pytest.raises(ValueError, match="kappa"):
        weights_from_matching(g34_small, m, frozenset(), params.kappa_hi, params)


def test_weights_always_satisfy_pairwise(g34_small):
    # at most one -kappa edge per matched check, everything else >= 0
    params = tiny_params(3, 2)
    u = frozenset({0, 5})
    udot = boundary_set(g34_small, u, params)
    m = find_delta_matching(g34_small, u, udot, params)
    if m is None:
        pytest.skip("no matching on this fixture")
    w = weights_from_matching(g34_small, m, u, 0.5, params)
    for j, nbrs in enumerate(g34_small.check_nbrs):
        vals = sorted(w.tau[(i, j)] for i in nbrs)
        assert vals[0] + vals[1] >= 0.0


def test_check_feasible_zero_weights(g34_small):
    zero = weights_from_matching(
        g34_small, find_delta_matching(g34_small, frozenset(), frozenset(), tiny_params(3, 2)),
        frozenset(), 0.5, tiny_params(3, 2),
    )
    verdict = check_feasible(g34_small, zero, np.ones(g34_small.n))
    assert verdict.ok and verdict.margin == pytest.approx(1.0)
    lam = np.ones(g34_small.n)
    lam[4] = 0.0
    verdict = check_feasible(g34_small, zero, lam)
    assert not verdict.ok and verdict.margin == 0.0


def test_check_feasible_requires_full_edge_cover(g34_small):
    from lpldpc import EdgeWeights

    with pytest.raises(ValueError, match="edge set"):
        check_feasible(g34_small, EdgeWeights({(0, 0): 0.0}), np.ones(g34_small.n))


def test_constructive_weights_feasible_and_decode_succeeds():
    # executable form of the final construction: matching + midpoint kappa
    # implies a feasible assignment and an all-zeros LP decode
    params = derive_params(1.0, 25)
    ch = ChannelParams(0.33 ** 2)
    done = 0
    for seed in (0, 1):
        g = var_regular_graph(14, 25, 170, seed=100 + seed)
        for t in range(20):
            lam = THRESHOLD1.apply(normalized_llr(
                transmit_awgn(np.ones(g.n), ch, 61 + seed, t), ch))
            u = high_noise_set(lam)
            udot = boundary_set(g, u, params)
            m = find_delta_matching(g, u, udot, params)
            if m is None:
                continue
            w = weights_from_matching(g, m, u, params.kappa_mid, params)
            verdict = check_feasible(g, w, lam)
            assert verdict.ok, f"margin {verdict.margin}"
            assert lp_decode(g, lam).is_zero_codeword()
            done += 1
    assert done >= 15


def test_witness_search_all_plus_one(single_check):
    assert witness_search(single_check, np.ones(3)) == pytest.approx(1.0, abs=1e-9)


def test_witness_search_all_minus_one(single_check):
    s = witness_search(single_check, -np.ones(3))
    assert s <= -1.0 + 1e-9


def test_witness_sign_matches_decoder(g34_small):
    checked = 0
    for t in range(40):
        lam = awgn_llr(g34_small, sigma=1.0, seed=71, trial=t)
        s = witness_search(g34_small, lam)
        if abs(s) <= 1e-7:
            continue
        checked += 1
        assert (s > 0) == lp_decode(g34_small, lam).is_zero_codeword()
    assert checked >= 35


def test_chernoff_budget_hits_quarter_sigma():
    # with target = Q(2), the boundary sits exactly at sigma = 1/4
    p = derive_params(1.0, 25, delta_hat=0.93)  # gamma = 2/3
    alpha = 2.0 * (1.0 + p.gamma) * q_tail(2.0)
    p = derive_params(1.0, 25, delta_hat=0.93, alpha_exp=alpha)
    budget = chernoff_sigma_budget(p, n=1000)
    assert budget.sigma_max == pytest.approx(0.25, rel=1e-9)
    assert budget.sigma2_max == pytest.approx(0.0625, rel=1e-9)
    assert budget.p_target == pytest.approx(q_tail(2.0), rel=1e-12)
    assert budget.u_cap_chernoff == pytest.approx(alpha * 1000 / (2 * (1 + p.gamma)))
    assert budget.u_cap_matching == pytest.approx((alpha * 1000 - 1) / (1 + p.gamma))


def test_chernoff_budget_increases_with_alpha():
    budgets = []
    for alpha in (0.02, 0.05, 0.1, 0.3):
        p = derive_params(1.0, 25, alpha_exp=alpha)
        budgets.append(chernoff_sigma_budget(p).sigma2_max)
    assert budgets == sorted(budgets)


def test_chernoff_budget_requires_alpha():
    p = derive_params(1.0, 25)
    with pytest.raises(ValueError, match="alpha_exp"):
        chernoff_sigma_budget(p)


def test_u_rarely_exceeds_cap_below_budget():
    # at half the budgeted sigma, |U| stays under the Chernoff cap
    p = derive_params(1.0, 25, delta_hat=0.93)
    alpha = 2.0 * (1.0 + p.gamma) * 0.01
    p = derive_params(1.0, 25, delta_hat=0.93, alpha_exp=alpha)
    budget = chernoff_sigma_budget(p, n=1000)
    sigma = budget.sigma_max / 2.0
    ch = ChannelParams(sigma * sigma)
    xbar = np.ones(1000)
    exceed = 0
    for t in range(1000):
        lam = THRESHOLD1.apply(normalized_llr(transmit_awgn(xbar, ch, 81, t), ch))
        exceed += len(high_noise_set(lam)) > budget.u_cap_chernoff
    assert exceed / 1000 < 0.01
