import random
import time

import pytest

from helpers import (
    FIXTURES,
    brute_satisfiable,
    cnf_models,
    formula_models,
    pigeonhole,
    planted_2cnf,
    random_2cnf,
    random_formula,
    truth,
)
from slasat.bridge import BoolFormula, eval_formula, lift
from slasat.core import BoolSet, Clause, EvaluatorKind, IndicatorSpec, Sla, ValueKind
from slasat.dsl import parse_sla
from slasat.errors import ConstInFormula, NotTwoCnf
from slasat.expr import And, ClauseRef, Const, Not, Or, Var, size
from slasat.solver import (
    Aborted,
    Cnf,
    CnfClass,
    Sat,
    SolverConfig,
    SolverKind,
    Unsat,
    classify,
    cnf_to_formula,
    satisfies,
    solve_2sat,
    solve_dpll,
    solve_slas,
    to_cnf,
)

NIMBUS = parse_sla((FIXTURES / "nimbus.sla").read_text())


def verdict(result):
    assert not isinstance(result, Aborted)
    return isinstance(result, Sat)


# -- to_cnf -------------------------------------------------------------------


def test_to_cnf_passes_through_conjunction_of_units():
    cnf = to_cnf(BoolFormula(And(Var(1), Var(2)), 2))
    assert cnf.clauses == ((1,), (2,)) and cnf.num_vars == 2 and cnf.origin == {}


def test_to_cnf_passes_through_2cnf():
    f = And(Or(Var(1), Var(2)), Or(Not(Var(1)), Var(2)))
    cnf = to_cnf(BoolFormula(f, 2))
    assert cnf.clauses == ((1, 2), (-1, 2)) and cnf.num_vars == 2


def test_to_cnf_tseitin_negated_conjunction():
    f = BoolFormula(Not(And(Var(1), Var(2))), 2)
    # frozen oracle: every assignment except x1 = x2 = true satisfies the input
    models = formula_models(f.root, 2)
    assert models == [{1: False, 2: False}, {1: False, 2: True}, {1: True, 2: False}]
    cnf = to_cnf(f, {1: "a", 2: "b"})
    assert cnf.num_vars == 3 and cnf.origin == {1: "a", 2: "b", 3: "aux1"}
    out_models = cnf_models(cnf.clauses, cnf.num_vars)
    assert bool(out_models) == bool(models)
    # projections of the encoding's models are exactly the input's models
    projected = sorted({(m[1], m[2]) for m in out_models})
    assert projected == sorted((m[1], m[2]) for m in models)


def test_to_cnf_rejects_constants():
    with pytest.raises(ConstInFormula):
        to_cnf(BoolFormula(Or(Var(1), Const(True)), 1))


def test_to_cnf_is_equisatisfiable_and_linear():
    rng = random.Random(41)
    for _ in range(300):
        root, n = random_formula(rng, max_vars=6, max_depth=5)
        f = BoolFormula(root, n)
        cnf = to_cnf(f)
        assert brute_satisfiable(cnf.clauses, cnf.num_vars) == bool(formula_models(root, n))
        assert cnf.num_vars - n <= size(root)
        assert len(cnf.clauses) <= 3 * size(root) + 1


def test_cnf_to_formula_inverts_passthrough():
    cnf = Cnf(3, [[1, -2], [3], [-1, 2, -3]])
    assert to_cnf(cnf_to_formula(cnf)).clauses == cnf.clauses
    assert cnf_to_formula(Cnf(2, [])).root == Const(True)
    assert cnf_to_formula(Cnf(2, [[1], []])).root == Const(False)


def test_cnf_rejects_bad_literals():
    with pytest.raises(ValueError):
        Cnf(1, [[2]])
    with pytest.raises(ValueError):
        Cnf(1, [[0]])


# -- classify -----------------------------------------------------------------


@pytest.mark.parametrize(
    "clauses, expected",
    [([[1, 2], [-1, 2]], CnfClass.TWO_SAT), ([[1, 2, 3]], CnfClass.GENERAL), ([[1]], CnfClass.TWO_SAT), ([], CnfClass.TWO_SAT)],
)
def test_classify(clauses, expected):
    assert classify(Cnf(3, clauses)) is expected


# -- 2SAT ---------------------------------------------------------------------


def test_2sat_simple_model():
    clauses = [[1, 2], [-1, 2]]
    # frozen oracle: x2 must hold, x1 is free
    assert cnf_models(clauses, 2) == [{1: False, 2: True}, {1: True, 2: True}]
    result = solve_2sat(Cnf(2, clauses))
    assert isinstance(result, Sat)
    assert result.assignment in cnf_models(clauses, 2)


def test_2sat_contradiction():
    assert isinstance(solve_2sat(Cnf(1, [[1], [-1]])), Unsat)


def test_2sat_repeated_literal():
    result = solve_2sat(Cnf(1, [[1, 1]]))
    assert result == Sat({1: True})


def test_2sat_empty_clause_and_no_clauses():
    assert isinstance(solve_2sat(Cnf(2, [[1], []])), Unsat)
    assert isinstance(solve_2sat(Cnf(0, [])), Sat)


def test_2sat_rejects_wide_clauses():
    with pytest.raises(NotTwoCnf):
        solve_2sat(Cnf(3, [[1, 2, 3]]))


def test_2sat_matches_brute_force():
    rng = random.Random(42)
    for _ in range(500):
        clauses, n = random_2cnf(rng)
        cnf = Cnf(n, clauses)
        result = solve_2sat(cnf)
        assert verdict(result) == brute_satisfiable(clauses, n)
        if isinstance(result, Sat):
            assert satisfies(cnf, result.assignment)


def test_2sat_is_deterministic():
    rng = random.Random(43)
    clauses = planted_2cnf(rng, 50, 150)
    a = solve_2sat(Cnf(50, clauses))
    b = solve_2sat(Cnf(50, clauses))
    assert a == b and a.stats == b.stats


# -- DPLL ---------------------------------------------------------------------


def test_dpll_units_force_third_literal():
    result = solve_dpll(Cnf(3, [[1, 2, 3], [-1], [-2]]))
    assert result == Sat({1: False, 2: False, 3: True})


def test_dpll_pigeonhole_unsat():
    clauses, n = pigeonhole(3, 2)
    # frozen oracle: none of the 2**6 assignments satisfies PHP(3, 2)
    assert n == 6 and cnf_models(clauses, n) == []
    assert isinstance(solve_dpll(Cnf(n, clauses)), Unsat)


def test_dpll_larger_pigeonhole_unsat():
    clauses, n = pigeonhole(4, 3)
    assert isinstance(solve_dpll(Cnf(n, clauses)), Unsat)
    clauses, n = pigeonhole(3, 3)
    result = solve_dpll(Cnf(n, clauses))
    assert isinstance(result, Sat) and satisfies(Cnf(n, clauses), result.assignment)


def test_dpll_empty_formula_all_false():
    assert solve_dpll(Cnf(3, [])) == Sat({1: False, 2: False, 3: False})


def test_dpll_empty_clause_and_tautology():
    assert isinstance(solve_dpll(Cnf(1, [[]])), Unsat)
    assert solve_dpll(Cnf(1, [[1, -1]])) == Sat({1: False})


def test_dpll_decision_limit():
    clauses, n = pigeonhole(5, 4)
    result = solve_dpll(Cnf(n, clauses), decision_limit=2)
    assert result == Aborted("DecisionLimit")
    assert result.stats.decisions == 2


def test_dpll_matches_brute_force():
    rng = random.Random(44)
    for _ in range(400):
        n = rng.randint(1, 9)
        clauses = [
            [rng.choice((1, -1)) * rng.randint(1, n) for _ in range(rng.randint(1, 4))]
            for _ in range(rng.randint(0, 5 * n))
        ]
        cnf = Cnf(n, clauses)
        result = solve_dpll(cnf)
        assert verdict(result) == brute_satisfiable(clauses, n)
        if isinstance(result, Sat):
            assert satisfies(cnf, result.assignment)


def test_paths_agree_on_2cnf():
    rng = random.Random(45)
    for _ in range(300):
        clauses, n = random_2cnf(rng)
        cnf = Cnf(n, clauses)
        assert verdict(solve_2sat(cnf)) == verdict(solve_dpll(cnf))


# -- pipeline -----------------------------------------------------------------


def test_solve_nimbus():
    report = solve_slas([NIMBUS])
    assert isinstance(report.result, Sat)
    assert report.solver_used is SolverKind.TWO_SAT
    assert report.clause_requirements == {"nimbus.uptime": True, "nimbus.latency": True}


def test_solve_two_single_clause_slas():
    clause = Clause("c", IndicatorSpec("x", ValueKind.BOOLEAN), BoolSet([True]), EvaluatorKind.MEMBERSHIP)
    a = Sla("A", [clause], ClauseRef("c"))
    b = Sla("B", [clause], Not(ClauseRef("c")))
    report = solve_slas([a, b])
    assert report.clause_requirements == {"A.c": True, "B.c": False}
    assert report.solver_used is SolverKind.TWO_SAT


def test_solve_lifted_pigeonhole():
    # PHP(3, 2) has only one- and two-literal clauses, so it takes the 2SAT path
    clauses, n = pigeonhole(3, 2)
    sla, _ = lift(cnf_to_formula(Cnf(n, clauses)), "php32")
    report = solve_slas([sla])
    assert isinstance(report.result, Unsat)
    assert report.solver_used is SolverKind.TWO_SAT
    assert report.clause_requirements == {}
    # PHP(4, 3) has three-literal "some hole" clauses and needs DPLL
    clauses, n = pigeonhole(4, 3)
    sla, _ = lift(cnf_to_formula(Cnf(n, clauses)), "php43")
    report = solve_slas([sla])
    assert isinstance(report.result, Unsat)
    assert report.solver_used is SolverKind.DPLL


def test_solve_reports_abort():
    clauses, n = pigeonhole(6, 5)
    sla, _ = lift(cnf_to_formula(Cnf(n, clauses)), "php")
    report = solve_slas([sla], SolverConfig(decision_limit=3))
    assert isinstance(report.result, Aborted) and report.result.reason == "DecisionLimit"


def test_solve_models_are_sound():
    rng = random.Random(46)
    for _ in range(200):
        root, n = random_formula(rng, max_vars=8)
        sla, var_map = lift(BoolFormula(root, n), "f")
        report = solve_slas([sla])
        assert verdict(report.result) == bool(formula_models(root, n))
        if isinstance(report.result, Sat):
            env = {i: report.clause_requirements[f"f.{cid}"] for i, cid in var_map.items()}
            assert truth(root, env)
            assert eval_formula(BoolFormula(root, n), env)


def test_2sat_scales_linearly():
    rng = random.Random(47)
    clauses = planted_2cnf(rng, 2000, 8000)
    start = time.perf_counter()
    result = solve_2sat(Cnf(2000, clauses))
    elapsed = time.perf_counter() - start
    assert isinstance(result, Sat) and satisfies(Cnf(2000, clauses), result.assignment)
    assert elapsed < 2.0
