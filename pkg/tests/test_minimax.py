import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import grid_risk, random_instance, random_weights
from testability.errors import DimensionMismatch
from testability.hypotheses import Generators, contains, mean_at_least, mean_at_most
from testability.measures import Pmf, SampleSpace, TestFn, mix, tv_distance
from testability.minimax import (
    check_saddle_certificate,
    closest_pair,
    minimax_risk,
    optimal_test,
    verify_strong_duality,
    worst_case_level,
    worst_case_power,
)

GRID3 = SampleSpace.from_values([0, F(1, 2), 1])


def mean_pair(space=GRID3, mode="rational"):
    return mean_at_most(space, F(3, 10), mode), mean_at_least(space, F(7, 10), mode)


def test_mean_separation():
    P, Q = mean_pair()
    rep = minimax_risk(P, Q)
    assert (rep.risk, rep.tv, rep.duality_gap) == (F(3, 5), F(2, 5), 0)
    phi = TestFn(GRID3, GRID3.values)
    assert worst_case_level(phi, P) + 1 - worst_case_power(phi, Q) == F(3, 5)
    assert worst_case_level(phi, P) == F(3, 10)
    mu, nu = rep.closest_pair
    assert contains(P, mu) and contains(Q, nu) and tv_distance(mu, nu) == F(2, 5)


def test_mean_separation_pair_is_bernoullis_on_two_points():
    space = SampleSpace.from_values([0, 1])
    mu, nu, tv = closest_pair(*mean_pair(space))
    assert mu == Pmf.bernoulli(space, F(3, 10)) and nu == Pmf.bernoulli(space, F(7, 10))
    assert tv == F(2, 5)


def test_diracs_against_uniform():
    four = SampleSpace.labelled(4)
    rep = minimax_risk(Generators.diracs(four), Generators([Pmf.uniform(four)]))
    assert rep.risk == 1 and rep.tv == 0


def test_half_split():
    space = SampleSpace.from_values([0, F(1, 4), F(3, 4), 1])
    P = Generators.diracs(space, [0, 1])
    Q = Generators.diracs(space, [2, 3])
    rep = minimax_risk(P, Q)
    assert rep.risk == 0
    assert rep.optimal_test == TestFn.indicator(space, [2, 3])
    assert rep.worst_level == 0 and rep.worst_power == 1


def test_same_hypothesis_has_zero_distance():
    P, _ = mean_pair()
    assert closest_pair(P, P).tv == 0
    assert minimax_risk(P, P).risk == 1


def test_worst_case_trivial_tests():
    P, Q = mean_pair()
    one = TestFn.constant(GRID3, 1)
    assert worst_case_level(one, P) == 1 and worst_case_power(one, Q) == 1
    space = SampleSpace.labelled(2)
    assert worst_case_power(TestFn.indicator(space, [0]), Generators.diracs(space, [0])) == 1


def test_certificate_examples():
    P, Q = mean_pair()
    phi = TestFn(GRID3, GRID3.values)
    mu = Pmf(GRID3, [F(7, 10), 0, F(3, 10)])
    nu = Pmf(GRID3, [F(3, 10), 0, F(7, 10)])
    v = check_saddle_certificate(phi, mu, nu, P, Q)
    assert v.valid and v.gap == 0 and v.membership_ok == (True, True)

    mu2 = Pmf(GRID3, [F(4, 5), 0, F(1, 5)])
    v = check_saddle_certificate(phi, mu2, nu, P, Q)
    assert not v.valid
    assert v.membership_ok[0]
    assert v.risk_of_phi == F(3, 5) and v.tv_of_pair == F(1, 2)

    v = check_saddle_certificate(TestFn.constant(GRID3, 0), mu, nu, P, Q)
    assert not v.valid and v.risk_of_phi == 1


def test_certificate_with_outside_member_is_invalid():
    P, Q = mean_pair()
    phi = TestFn(GRID3, GRID3.values)
    outside = Pmf.dirac(GRID3, 2)
    v = check_saddle_certificate(phi, outside, outside, P, Q)
    assert v.membership_ok == (False, True) and not v.valid


def test_space_mismatch():
    with pytest.raises(DimensionMismatch):
        minimax_risk(Generators.diracs(SampleSpace.labelled(2)), Generators.diracs(SampleSpace.labelled(3)))


def test_float_mode_mean_separation():
    rep = minimax_risk(*mean_pair(mode="float"))
    assert rep.risk == pytest.approx(0.6, abs=1e-9)
    assert abs(rep.duality_gap) <= 1e-6


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_strong_duality_random(seed):
    rng = random.Random(seed)
    _, P, Q = random_instance(rng, atoms=(2, 5))
    assert verify_strong_duality(P, Q) == 0
    rep = minimax_risk(P, Q)
    assert 0 <= rep.risk <= 1
    assert rep.risk == rep.worst_level + 1 - rep.worst_power
    mu, nu = rep.closest_pair
    assert contains(P, mu) and contains(Q, nu) and tv_distance(mu, nu) == rep.tv


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_symmetry(seed):
    _, P, Q = random_instance(random.Random(seed), atoms=(2, 5))
    assert minimax_risk(P, Q).risk == minimax_risk(Q, P).risk


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_hull_invariance(seed):
    rng = random.Random(seed)
    _, P, Q = random_instance(rng, atoms=(2, 5))
    extra = [mix(random_weights(rng, len(P.pmfs)), P.pmfs) for _ in range(2)]
    assert minimax_risk(Generators(list(P.pmfs) + extra), Q).risk == minimax_risk(P, Q).risk


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_monotone_in_hypotheses(seed):
    rng = random.Random(seed)
    space, P, Q = random_instance(rng, atoms=(2, 5))
    bigger_P = Generators(list(P.pmfs) + [Pmf.dirac(space, rng.randrange(len(space)))])
    bigger_Q = Generators(list(Q.pmfs) + [Pmf.uniform(space)])
    base = minimax_risk(P, Q).risk
    assert base <= minimax_risk(bigger_P, Q).risk
    assert base <= minimax_risk(P, bigger_Q).risk


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_grid_search_never_beats_the_program(seed):
    _, P, Q = random_instance(random.Random(seed), atoms=(3, 3))
    risk = float(minimax_risk(P, Q).risk)
    g = grid_risk([p.values for p in P.pmfs], [q.values for q in Q.pmfs])
    assert g >= risk - 1e-12
    assert g - risk <= 0.05


def test_optimal_test_alone_matches_report():
    P, Q = mean_pair()
    phi, risk = optimal_test(P, Q)
    assert risk == F(3, 5)
    assert worst_case_level(phi, P) + 1 - worst_case_power(phi, Q) == risk
