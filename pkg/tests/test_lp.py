import dataclasses
import random
from fractions import Fraction as F

import pytest

from oracles import random_lp, run_lp_regression
from testability import _kernel
from testability.errors import InputError
from testability.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LpBuilder, LpProblem, check_solution, solve


def test_simple_optimal():
    p = LpProblem(c=[-1, -1], A_ub=[[1, 1]], b_ub=[1])
    s = solve(p)
    assert s.status == OPTIMAL and s.objective == -1
    assert check_solution(p, s.primal, s.dual).worst() == 0


def test_infeasible():
    assert solve(LpProblem(c=[0], A_ub=[[1]], b_ub=[-1])).status == INFEASIBLE


def test_unbounded():
    assert solve(LpProblem(c=[-1])).status == UNBOUNDED


def test_perturbed_primal_is_flagged():
    p = LpProblem(c=[-1, -1], A_ub=[[1, 1]], b_ub=[1])
    s = solve(p)
    bumped = list(s.primal)
    bumped[0] += F(1, 10)
    assert check_solution(p, bumped, s.dual).primal_feasibility == F(1, 10)


def test_zeroed_duals_leave_a_gap():
    p = LpProblem(c=[-1, -1], A_ub=[[1, 1]], b_ub=[1])
    s = solve(p)
    r = check_solution(p, s.primal, [0] * len(s.dual))
    assert r.duality_gap == abs(s.objective - 0) == 1
    assert not r.ok()


def test_general_bounds_and_equalities():
    p = LpProblem(
        c=[1, 2, -1],
        A_eq=[[1, 1, 1]],
        b_eq=[5],
        A_ub=[[1, -1, 0], [0, 0, 1]],
        b_ub=[-1, 3],
        lower=[None, -2, 0],
        upper=[4, None, None],
    )
    s = solve(p)
    assert s.objective == F(1, 2)
    assert check_solution(p, s.primal, s.dual).worst() == 0


def test_beale_cycling_example_terminates():
    # cycles under the largest-coefficient rule
    c = [F(-3, 4), 20, F(-1, 2), 6]
    A = [[F(1, 4), -8, -1, 9], [F(1, 2), -12, F(-1, 2), 3], [0, 0, 1, 0]]
    p = LpProblem(c=c, A_ub=A, b_ub=[0, 0, 1])
    s = solve(p)
    assert s.objective == F(-5, 4)
    assert check_solution(p, s.primal, s.dual).worst() == 0


def test_redundant_equalities():
    p = LpProblem(c=[1, 1], A_eq=[[1, 1], [2, 2]], b_eq=[1, 2])
    s = solve(p)
    assert s.objective == 1
    assert check_solution(p, s.primal, s.dual).worst() == 0


def test_float_mode_residuals():
    p = LpProblem(c=[1, 2, -1], A_eq=[[1, 1, 1]], b_eq=[5], A_ub=[[1, -1, 0]], b_ub=[-1], upper=[4, 4, 4], mode="float")
    s = solve(p)
    assert check_solution(p, s.primal, s.dual).ok(1e-9)


def test_problem_validation():
    with pytest.raises(InputError):
        LpProblem(c=[1, 2], A_ub=[[1]], b_ub=[1])
    with pytest.raises(InputError):
        LpProblem(c=[1], lower=[2], upper=[1])


def test_builder_reports_row_duals_in_written_sign():
    b = LpBuilder()
    x = b.add_var()
    row = b.add_row({x: 1}, ">=", 2)
    b.set_cost({x: 1})
    s = solve(b.build())
    assert s.objective == 2
    assert b.dual_of(s, row) == 1  # d(obj)/d(rhs) for the >= row


def test_random_lps_match_vertex_enumeration():
    mismatches, bad_kkt, statuses = run_lp_regression(60, seed=11)
    assert not mismatches
    assert not bad_kkt
    assert statuses[OPTIMAL] > 10 and statuses[INFEASIBLE] > 0


@pytest.mark.parametrize("backend", ["python", "cython"])
def test_backends_agree(backend):
    try:
        k = _kernel.get_backend(backend)
    except ImportError:
        pytest.skip("compiled kernel not built")
    rng = random.Random(5)
    for _ in range(30):
        p = random_lp(rng)
        a = solve(p, kernel=k)
        b = solve(p, kernel=_kernel.get_backend("python"))
        assert (a.status, a.primal, a.dual, a.objective) == (b.status, b.primal, b.dual, b.objective)
        pf = dataclasses.replace(p, mode="float")
        a = solve(pf, kernel=k)
        b = solve(pf, kernel=_kernel.get_backend("python"))
        assert a.status == b.status
        if a.status == OPTIMAL:
            assert a.objective == pytest.approx(b.objective, abs=1e-9)
            assert check_solution(pf, a.primal, a.dual).ok(1e-8)


def test_float_matches_rational_on_random_lps():
    rng = random.Random(9)
    for _ in range(40):
        p = random_lp(rng)
        exact = solve(p)
        approx = solve(dataclasses.replace(p, mode="float"))
        assert exact.status == approx.status
        if exact.status == OPTIMAL:
            assert approx.objective == pytest.approx(float(exact.objective), abs=1e-9)


def test_empty_problem():
    assert solve(LpProblem(c=[])).status == OPTIMAL


def _dense_family_program(atoms, gens, mode, seed=1):
    # risk program for two dense generator families; degenerate and badly scaled
    from testability.hypotheses import Generators
    from testability.measures import SampleSpace

    rng = random.Random(seed)
    space = SampleSpace.labelled(atoms)

    def fam():
        rows = []
        for _ in range(gens):
            w = [rng.randint(0, 9) for _ in range(atoms)]
            w[0] += 1
            rows.append([F(x, sum(w)) for x in w])
        return Generators.from_rows(space, rows, mode)

    P, Q = fam(), fam()
    b = LpBuilder(mode)
    phi = b.add_vars(atoms, lower=0, upper=1)
    t, s = b.add_var(lower=None), b.add_var(lower=None)
    o, z = (1.0, 0.0) if mode == "float" else (F(1), F(0))
    P.add_support_bound(b, [({j: o}, z) for j in phi], ({t: o}, z))
    Q.add_support_bound(b, [({j: -o}, o) for j in phi], ({s: o}, z))
    b.set_cost({t: o, s: o})
    return b.build()


def test_float_mode_survives_degenerate_badly_scaled_programs():
    exact = solve(_dense_family_program(20, 15, "rational"))
    for backend in ("python", "cython"):
        try:
            k = _kernel.get_backend(backend)
        except ImportError:
            continue
        p = _dense_family_program(20, 15, "float")
        s = solve(p, kernel=k)
        assert s.objective == pytest.approx(float(exact.objective), abs=1e-9)
        assert check_solution(p, s.primal, s.dual).ok(1e-9)
        big = _dense_family_program(40, 40, "float", seed=3)
        s = solve(big, kernel=k)
        assert s.status == OPTIMAL and check_solution(big, s.primal, s.dual).ok(1e-9)
