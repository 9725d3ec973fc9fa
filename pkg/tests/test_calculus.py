"""Hypersequent calculi: schemas, soundness, search, completeness."""

import math

import pytest

from dlc.calculus import (
    CALCULI,
    Hypersequent,
    ProofTree,
    Rule,
    RuleInstance,
    Sequent,
    check_proof,
    check_step,
    fixtures_dir,
    hypersequent_holds,
    limpl_ext_fixture,
    load_proof,
    premises_for,
    proof_from_json,
    proof_to_json,
    prove_bounded,
    random_derivation,
    rule_local_soundness,
    sequent_holds,
    soundness_fuzz,
    weak_completeness_goals,
    weak_completeness_suite,
)
from dlc.calculus import _atom
from dlc.core import DL2, GODEL, LUKASIEWICZ, STL_INFTY, And, BoolConst, Impl
from dlc.errors import (
    PremiseArityMismatch,
    RuleNotInCalculus,
    SchemaMismatch,
)

GOEDEL = CALCULI["goedel"]
LUKA = CALCULI["lukasiewicz"]
DL2C = CALCULI["dl2"]


def goedel_atom(i=1):
    return _atom(i, GOEDEL.profile)


class TestSchemas:
    def test_init_axiom(self):
        p = goedel_atom()
        h = Hypersequent([Sequent((p,), (p,))])
        inst = RuleInstance(Rule.INIT, {"c": 0})
        assert premises_for(GOEDEL, inst, h) == []

    def test_init_rejects_mismatch(self):
        h = Hypersequent([Sequent((goedel_atom(1),), (goedel_atom(2),))])
        with pytest.raises(SchemaMismatch):
            premises_for(GOEDEL, RuleInstance(Rule.INIT, {"c": 0}), h)

    def test_rule_not_in_calculus(self):
        p = goedel_atom()
        h = Hypersequent([Sequent((p, p), (p,))])
        with pytest.raises(RuleNotInCalculus):
            premises_for(GOEDEL, RuleInstance(Rule.SPLIT, {"c": 0}), h)

    def test_left_implication_goedel_two_premises(self):
        p, q = goedel_atom(1), goedel_atom(2)
        h = Hypersequent([Sequent((Impl(p, q),), (q,))])
        prem = premises_for(GOEDEL, RuleInstance(Rule.LIMPL, {"c": 0, "pos": 0}), h)
        assert len(prem) == 2
        assert prem[0] == Hypersequent([Sequent((), (p,))])
        assert prem[1] == Hypersequent([Sequent((q,), (q,))])

    def test_left_implication_luka_single_premise(self):
        pf = LUKA.profile
        p, q = _atom(1, pf), _atom(2, pf)
        h = Hypersequent([Sequent((Impl(p, q),), (p,))])
        prem = premises_for(LUKA, RuleInstance(Rule.LIMPL, {"c": 0, "pos": 0}), h)
        assert prem == [Hypersequent([Sequent((q,), (p, p))])]

    def test_check_step_counts_premises(self):
        p = goedel_atom()
        h = Hypersequent([Sequent((p,), (p,))])
        inst = RuleInstance(Rule.INIT, {"c": 0})
        with pytest.raises(PremiseArityMismatch):
            check_step(GOEDEL, inst, h, [h])

    def test_check_proof_validates_formulas(self):
        # a fuzzy-profile atom must not appear in a DL2 proof
        p = goedel_atom()
        h = Hypersequent([Sequent((p,), (p,))])
        tree = ProofTree(h, RuleInstance(Rule.INIT, {"c": 0}), ())
        with pytest.raises(Exception):
            check_proof(DL2C, tree)


class TestSemanticReading:
    def test_goedel_sequent(self):
        env_p = goedel_atom()  # value 1.0: 1 <= 2
        assert sequent_holds(GODEL, Sequent((env_p,), (env_p,)))
        assert sequent_holds(GODEL, Sequent((), ()), tol=1e-9) is False

    def test_empty_left_is_strongest(self):
        p = goedel_atom()
        assert sequent_holds(GODEL, Sequent((), (p,)))

    def test_luka_fold_is_unclamped(self):
        # two antecedents worth 1.0 each: the fold is 1.0, not clamped up
        pf = LUKA.profile
        true_atom = _atom(1, pf)
        false_like = BoolConst(False, pf)
        s = Sequent((true_atom, false_like), (false_like,))
        # left fold = 1 + 0 - 1 = 0 <= right 0
        assert sequent_holds(LUKASIEWICZ, s)

    def test_stl_infty_empty_sides(self):
        # empty antecedent folds to +inf (identity of min), so only a
        # top-valued succedent can satisfy it
        assert sequent_holds(STL_INFTY, Sequent((), ())) is False
        p = _atom(1, STL_INFTY.flag_profile)
        top = BoolConst(True, STL_INFTY.flag_profile)
        assert not sequent_holds(STL_INFTY, Sequent((), (p,)))
        assert sequent_holds(STL_INFTY, Sequent((), (top,)))
        assert sequent_holds(STL_INFTY, Sequent((p,), (p,)))

    def test_hypersequent_needs_one_component(self):
        pf = GOEDEL.profile
        good = Sequent((), (_atom(1, pf),))
        bad = Sequent((_atom(1, pf),), ())
        assert hypersequent_holds(GODEL, Hypersequent([bad, good]))
        assert not hypersequent_holds(GODEL, Hypersequent([bad]))


@pytest.mark.parametrize("name", sorted(CALCULI))
def test_random_derivations_check_and_hold(name):
    calc = CALCULI[name]
    for i in range(150):
        tree = random_derivation(calc, f"t/{i}", 5)
        check_proof(calc, tree)
        assert hypersequent_holds(calc.logic, tree.conclusion)


@pytest.mark.parametrize("name", sorted(CALCULI))
def test_random_derivation_deterministic(name):
    calc = CALCULI[name]
    a = random_derivation(calc, "seed", 6)
    b = random_derivation(calc, "seed", 6)
    assert a == b


def test_soundness_fuzz_report_shape():
    rep = soundness_fuzz(LUKA, 50, 5, "x")
    assert rep["passed"] and rep["violations"] == []
    assert rep["trials"] == 50


@pytest.mark.parametrize("name", sorted(CALCULI))
def test_rule_local_soundness_fast_sweep(name):
    calc = CALCULI[name]
    for rule in sorted(calc.rules, key=lambda r: r.value):
        rep = rule_local_soundness(calc, rule, 150, "sweep")
        assert rep["passed"], (name, rule.value, rep["violations"][:1])
        assert rep["premises_held"] > 0, (name, rule.value)


class TestSearch:
    def test_identity(self):
        p = goedel_atom()
        goal = Hypersequent([Sequent((p,), (p,))])
        tree = prove_bounded(GOEDEL, goal, 4)
        assert tree is not None
        check_proof(GOEDEL, tree)

    def test_projection_implication(self):
        p, q = goedel_atom(1), goedel_atom(2)
        goal = Hypersequent([Sequent((), (Impl(And((p, q)), p),))])
        tree = prove_bounded(GOEDEL, goal, 8)
        assert tree is not None
        check_proof(GOEDEL, tree)

    def test_unprovable_within_budget(self):
        p, q = goedel_atom(1), goedel_atom(2)
        goal = Hypersequent([Sequent((p,), (q,))])
        assert prove_bounded(GOEDEL, goal, 6) is None


@pytest.mark.parametrize("name", ["dl2", "stl-inf"])
def test_weak_completeness_all_goals(name):
    calc = CALCULI[name]
    rep = weak_completeness_suite(calc, depth_budget=12)
    assert rep["passed"], rep["goals"]
    assert len(rep["goals"]) == 17  # 9 axioms, both directions except one


def test_weak_completeness_goal_list():
    goals = weak_completeness_goals(DL2C)
    axioms = {g[0] for g in goals}
    assert axioms == {f"R{i}" for i in range(1, 10)}
    directions = [g[1] for g in goals if g[0] == "R7"]
    assert directions == ["le"]  # stated as an inequality only


class TestExtendedRuleFixture:
    def test_rechecks_under_lukasiewicz(self):
        tree = limpl_ext_fixture()
        check_proof(LUKA, tree)

    def test_uses_external_contraction(self):
        tree = limpl_ext_fixture()
        rules = set()

        def visit(t):
            rules.add(t.rule.rule)
            for p in t.premises:
                visit(p)

        visit(tree)
        assert Rule.EC in rules and Rule.LIMPL in rules

    def test_extended_rule_is_not_a_calculus_member(self):
        for calc in CALCULI.values():
            assert Rule.LIMPL_EXT not in calc.rules


class TestSerialization:
    def test_round_trip(self):
        tree = random_derivation(LUKA, "ser", 5)
        doc = proof_to_json("lukasiewicz", tree)
        name, back = proof_from_json(doc)
        assert name == "lukasiewicz" and back == tree

    def test_bundled_fixtures_recheck(self):
        root = fixtures_dir()
        for entry in ("init_goedel.json", "limpl_ext_luka.json"):
            name, tree = load_proof(str(root / entry))
            check_proof(CALCULI[name], tree)

    def test_version_gate(self):
        with pytest.raises(Exception):
            proof_from_json({"version": "other/9", "calculus": "dl2", "tree": {}})
