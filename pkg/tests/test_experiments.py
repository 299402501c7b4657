from fractions import Fraction as F

import pytest

from oracles import simplex_weight_grid
from testability.errors import InvalidParams, UnknownExample
from testability.experiments import escaping_mass_generators, refinement_sweep, run_example
from testability.measures import mix


def test_mean_separation_default():
    rep = run_example("mean-separation", {"grid": [0, "1/2", 1], "m1": "3/10", "m2": "7/10"})
    rec = rep.records[0]
    assert (rec.risk, rec.tv) == (F(3, 5), F(2, 5))
    # the closest pair is not unique on this grid; the Bernoulli pair is checked as a certificate
    mu, nu = rec.closest_pair
    assert sum(abs(a - b) for a, b in zip(mu, nu)) / 2 == F(2, 5)
    assert "certificate valid: True" in rep.notes[0]
    assert rep.passed


def test_dirac_vs_uniform():
    rep = run_example("dirac-vs-uniform", {"n": 10})
    assert rep.records[0].risk == 1 and rep.passed


def test_escaping_mass_single_steps():
    assert run_example("escaping-mass", {"N": 4}).records[-1].tv == F(3, 4)
    rep = run_example("escaping-mass", {"N": 100})
    assert rep.records[-1].tv == F(51, 100)
    assert rep.limit_estimate == F(1, 2) and rep.passed


def test_escaping_mass_closed_form_against_weight_grid():
    # mass at 0 of a mixture is at most 1/2 - 1/N, reached by the last generator
    for N in (3, 4, 5):
        _, gens = escaping_mass_generators(N)
        best = max(mix(w, gens)[0] for w in simplex_weight_grid(len(gens), 12))
        assert best == F(1, 2) - F(1, N)
        assert 1 - best == run_example("escaping-mass", {"N": N}).records[-1].tv


def test_escaping_mass_sweep():
    rep = refinement_sweep("escaping-mass", [2, 4, 8, 16])
    assert [r.tv for r in rep.records] == [1, F(3, 4), F(5, 8), F(9, 16)]
    assert rep.trend == "decreasing"
    assert abs(rep.limit_estimate - F(1, 2)) <= F(1, 50)


def test_half_split_sweep():
    rep = refinement_sweep("half-split", [1, 2, 3, 5])
    assert all(r.risk == 0 and r.worst_level == 0 and r.worst_power == 1 for r in rep.records)
    assert rep.passed


def test_dirac_vs_uniform_sweep():
    rep = refinement_sweep("dirac-vs-uniform", [2, 4, 8, 16, 32, 64], {"mode": "float"})
    assert all(r.risk == pytest.approx(1.0, abs=1e-9) for r in rep.records)
    assert rep.passed


def test_tv_balls_regimes():
    c1 = [F(1, 10), F(2, 10), F(3, 10), F(4, 10)]
    c2 = list(reversed(c1))
    d = F(2, 5)  # tv between the centers
    radii = [0, F(1, 20), F(1, 10), F(3, 20), d / 2, F(3, 10)]
    rep = run_example("tv-balls", {"c1": c1, "c2": c2, "radii": radii})
    risks = [r.risk for r in rep.records]
    assert risks == sorted(risks)
    for r, rec in zip(radii, rep.records):
        assert rec.tv == max(0, d - 2 * r)
        if r >= d / 2:
            assert rec.risk == 1
    assert risks[0] < risks[1] < risks[2] < 1
    assert rep.passed


def test_symmetric_null_invariants():
    rep = run_example("symmetric-null", {"n": 3})
    rec = rep.records[0]
    assert rec.gap == 0 and 0 <= rec.risk <= 1
    assert rep.passed


def test_float_mode_runs():
    rep = run_example("mean-separation", {"mode": "float"})
    assert rep.records[0].risk == pytest.approx(0.6, abs=1e-9)


def test_errors():
    with pytest.raises(UnknownExample):
        run_example("nope")
    with pytest.raises(InvalidParams):
        run_example("escaping-mass", {"N": 1})
    with pytest.raises(InvalidParams):
        run_example("mean-separation", {"m1": "0.8", "m2": "0.2"})
    with pytest.raises(InvalidParams):
        refinement_sweep("half-split", [])
    with pytest.raises(InvalidParams):
        run_example("dirac-vs-uniform", {"n": "many"})
    assert run_example("dirac-vs-uniform", {"n": "3"}).records[0].risk == 1
