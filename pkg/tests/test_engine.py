"""Weakening, completing, strategy runs, and the worked-example tables.

Every frozen number in TestWorkedExampleTables was derived by hand from
the nine-axiom ontology before the engine existed: pool ranges were
enumerated from the stated subsumptions, candidate grids judged against
the oracle table, and the Pareto survivors picked by checking dominance
pairwise.  If one of these fails, the engine is wrong — do not update
the number without redoing the derivation.
"""

import pytest

from elrepair.eltext import parse_axiom, parse_tbox
from elrepair.engine import (
    STRATEGIES,
    STRATEGY_LABELS,
    CompletionStep,
    PreconditionError,
    StrategySpec,
    check_problem,
    compare_ontologies,
    completed_axiom_set,
    default_probe,
    prune_redundant,
    run_strategy,
    strategy_spec,
    verify_repair,
    weakened_axiom_set,
)
from elrepair.fixtures import mini_galen_problem, random_problem
from elrepair.model import Axiom, TBox, remove_axioms
from elrepair.oracle import DeclarativeOracle, RecordingOracle, ScriptedOracle
from elrepair.reasoner import SIMPLE_POOL, entails


def ax(text: str) -> Axiom:
    return parse_axiom(text)


def axs(*texts: str) -> set[Axiom]:
    return {parse_axiom(t) for t in texts}


def run(strategy, order=None, **kw):
    t, wrong, oracle = mini_galen_problem()
    return run_strategy(t, wrong, oracle, strategy, order=order, **kw)


# -- single weakening / completing steps -------------------------------------


class TestWeakeningStep:
    def test_weakening_may_be_empty(self, galen):
        t, wrong, oracle = galen
        ctx = remove_axioms(t, [wrong[2]])
        step = weakened_axiom_set(wrong[2], ctx, RecordingOracle(oracle))
        assert step.weakened == ()

    def test_survivors_are_pareto_maximal(self, galen):
        t, wrong, oracle = galen
        rec = RecordingOracle(oracle)
        ctx = remove_axioms(t, [wrong[0]])
        step = weakened_axiom_set(wrong[0], ctx, rec)
        # (PPr, NPr) is true and undominated; (E, NPr) is true but E sits
        # strictly below PPr in the context, so it loses
        assert set(step.weakened) == axs("PPr SubClassOf NPr")
        assert rec.memo[ax("E SubClassOf NPr")] is False

    def test_all_candidates_are_judged_in_pool_order(self, galen):
        t, wrong, oracle = galen
        ctx = remove_axioms(t, [wrong[0]])
        step = weakened_axiom_set(wrong[0], ctx, RecordingOracle(oracle))
        # sb ranges over [E, PPr], sp over [GPr, IPr, NPr], sb-major
        assert step.candidates[0] == ax("E SubClassOf GPr")
        assert len(step.candidates) == step.sub_size * step.sup_size

    def test_wrong_axiom_itself_never_survives(self, galen):
        # with the wrong axiom still in context its rhs range contains IPr,
        # and the oracle rejects the original statement
        t, wrong, oracle = galen
        step = weakened_axiom_set(wrong[0], t, RecordingOracle(oracle))
        assert wrong[0] not in step.weakened


class TestCompletionStep:
    def test_seed_must_be_oracle_true(self, galen):
        t, wrong, oracle = galen
        with pytest.raises(PreconditionError) as err:
            completed_axiom_set(ax("PPr SubClassOf IPr"), t, RecordingOracle(oracle))
        assert err.value.invariant == "completion-seed-judged-false"

    def test_result_always_contains_the_seed(self, galen):
        t, wrong, oracle = galen
        base = remove_axioms(t, wrong)
        step = completed_axiom_set(ax("PPr SubClassOf NPr"), base,
                                   RecordingOracle(oracle))
        assert ax("PPr SubClassOf NPr") in step.completed

    def test_strongest_true_candidate_wins_on_both_sides(self, galen):
        t, wrong, oracle = galen
        # completing E SubClassOf PPh against the full ontology: C sits
        # above E, CVD below PPh, and the oracle accepts C SubClassOf CVD,
        # which dominates every other true pairing
        step = completed_axiom_set(ax("E SubClassOf PPh"), t, RecordingOracle(oracle))
        assert step.accepted == (ax("C SubClassOf CVD"),)
        assert set(step.completed) == axs("E SubClassOf PPh", "C SubClassOf CVD")
        # C SubClassOf PPh is true but loses to the strictly stronger pair
        assert ax("C SubClassOf PPh") in step.candidates
        assert ax("C SubClassOf PPh") not in step.completed


class TestPruneRedundant:
    def test_drops_axiom_entailed_by_the_remaining_added_set(self):
        added = [ax("PPr SubClassOf NPr"), ax("IPr SubClassOf NPr"),
                 ax("IPr SubClassOf PPr")]
        assert set(prune_redundant(added)) == axs(
            "PPr SubClassOf NPr", "IPr SubClassOf PPr")

    def test_keeps_axioms_only_the_ontology_could_rederive(self):
        # B SubClassOf C alone does not entail A SubClassOf C
        added = [ax("A SubClassOf C"), ax("B SubClassOf C")]
        assert set(prune_redundant(added)) == set(added)

    def test_tautologies_vanish(self):
        assert prune_redundant([ax("A SubClassOf A"), ax("A SubClassOf Top")]) == ()

    def test_consequences_are_preserved(self):
        added = [ax("A SubClassOf B"), ax("B SubClassOf C"), ax("A SubClassOf C")]
        pruned = prune_redundant(added)
        assert len(pruned) == 2
        assert entails(TBox(list(pruned)), ax("A SubClassOf C"))


# -- the strategy catalogue ---------------------------------------------------


class TestStrategyCatalogue:
    def test_thirteen_strategies(self):
        assert len(STRATEGIES) == 13
        assert set(STRATEGIES) == {f"C{i}" for i in range(1, 14)}

    def test_labels_exist_for_all(self):
        assert set(STRATEGY_LABELS) == set(STRATEGIES)

    def test_interleaving_needs_immediate_scoped_weakening(self):
        interleaved = {name for name, spec in STRATEGIES.items() if spec.interleaved}
        assert interleaved == {"C6", "C7", "C8", "C13"}

    def test_spec_lookup_accepts_both_forms(self):
        assert strategy_spec("C9") is STRATEGIES["C9"]
        custom = StrategySpec("custom", weaken_removal="one",
                              weaken_add_back="one", weaken_update="end_all")
        assert strategy_spec(custom) is custom

    def test_bad_spec_rejected(self):
        with pytest.raises(ValueError):
            StrategySpec("bad", weaken_removal="sometimes",
                         weaken_add_back="one", weaken_update="end_all")

    def test_unknown_strategy_name(self):
        with pytest.raises(ValueError):
            strategy_spec("C14")


# -- frozen worked-example results -------------------------------------------


class TestWorkedExampleTables:
    def test_c1(self):
        r = run("C1")
        assert r.sup_sizes == (3, 2, 4)
        assert r.sub_sizes == (2, 3, 1)
        assert set(r.weakened_union) == axs("PPr SubClassOf NPr",
                                            "IPr SubClassOf NPr")
        assert r.weakening_step_for(3).weakened == ()
        assert r.queries_distinct == 9
        assert r.repair_valid

    def test_c2(self):
        r = run("C2")
        assert r.sup_sizes == (3, 2, 2)
        assert r.sub_sizes == (2, 1, 1)
        assert set(r.weakened_union) == axs("PPr SubClassOf NPr",
                                            "IPr SubClassOf NPr")

    def test_c3_and_c4_remove_everything_first(self):
        for s in ("C3", "C4"):
            r = run(s)
            assert r.sup_sizes == (1, 2, 1), s
            assert r.sub_sizes == (1, 1, 1), s
            assert set(r.weakened_union) == axs("IPr SubClassOf NPr"), s
            assert r.queries_distinct == 4, s

    def test_c5_sizes(self):
        r = run("C5")
        assert r.completion_sup_sizes == (4, 3)
        assert r.completion_sub_sizes == (5, 5)
        assert r.repair_valid

    def test_c6(self):
        r = run("C6")
        assert r.completion_sup_sizes == (1, 1)
        assert r.completion_sub_sizes == (3, 4)
        assert set(r.completed_union) == axs("IPr SubClassOf PPr",
                                             "PPr SubClassOf NPr")
        assert set(r.added) == axs("PPr SubClassOf NPr", "IPr SubClassOf PPr")

    def test_c7(self):
        r = run("C7")
        assert r.sup_sizes == (3, 2, 2)
        assert r.sub_sizes == (2, 1, 1)
        assert r.completion_sup_sizes == (1, 1)
        assert r.completion_sub_sizes == (3, 4)
        assert set(r.added) == axs("PPr SubClassOf NPr", "IPr SubClassOf PPr")

    def test_c8_completes_against_the_original_ontology(self):
        r = run("C8")
        # completion ranges match C5's: the completing context is the
        # unrepaired ontology even though weakening updated immediately
        assert r.completion_sup_sizes == (4, 3)
        assert r.completion_sub_sizes == (5, 5)

    def test_c9(self):
        r = run("C9")
        assert r.sup_sizes == (3, 2, 4)
        assert r.sub_sizes == (2, 3, 1)
        assert r.completion_sup_sizes == (1, 1)
        assert r.completion_sub_sizes == (2, 2)
        assert set(r.completed_union) == axs("PPr SubClassOf NPr",
                                             "IPr SubClassOf NPr")
        assert set(r.added) == axs("PPr SubClassOf NPr", "IPr SubClassOf NPr")
        assert r.queries_distinct == 9
        assert r.repair_valid

    def test_c9_question_sequence(self, galen):
        t, wrong, oracle = galen
        rec = RecordingOracle(oracle)
        run_strategy(t, wrong, rec, "C9")
        assert [a.axiom for a in rec.log] == [
            ax("PPr SubClassOf IPr"),    # confirmations, in identity order
            ax("IPr SubClassOf GPr"),
            ax("E SubClassOf PPr"),
            ax("E SubClassOf GPr"),      # weakening the first wrong axiom
            ax("E SubClassOf IPr"),
            ax("E SubClassOf NPr"),
            ax("PPr SubClassOf GPr"),
            ax("PPr SubClassOf NPr"),
            ax("IPr SubClassOf NPr"),    # weakening the second; rest memoized
        ]

    def test_c10_immediate_updates_grow_later_ranges(self):
        r = run("C10")
        assert r.completion_sup_sizes == (1, 1)
        assert r.completion_sub_sizes == (2, 3)
        assert set(r.completed_union) == axs("IPr SubClassOf PPr",
                                             "PPr SubClassOf NPr")
        assert set(r.added) == axs("PPr SubClassOf NPr", "IPr SubClassOf PPr")
        assert r.queries_distinct == 10

    def test_c10_pruning_drops_the_rederivable_weakening(self):
        r = run("C10")
        # IPr SubClassOf NPr was accepted during weakening but follows
        # from IPr SubClassOf PPr with PPr SubClassOf NPr
        assert ax("IPr SubClassOf NPr") in r.weakened_union
        assert ax("IPr SubClassOf NPr") not in r.added
        raw = run("C10", prune=False)
        assert ax("IPr SubClassOf NPr") in raw.added

    def test_c11_snapshots_per_seed(self):
        r = run("C11")
        assert r.completion_sup_sizes == (1, 1)
        assert r.completion_sub_sizes == (3, 4)
        assert set(r.added) == axs("PPr SubClassOf NPr", "IPr SubClassOf PPr")

    def test_c12_weakens_against_everything_at_once(self):
        r = run("C12")
        assert r.sup_sizes == (1, 2, 1)
        assert r.sub_sizes == (1, 1, 1)
        assert r.completion_sup_sizes == (1,)
        assert r.completion_sub_sizes == (2,)
        assert set(r.completed_union) == axs("IPr SubClassOf NPr")
        assert set(r.added) == axs("IPr SubClassOf NPr")

    def test_c13_matches_c12_here(self):
        r12, r13 = run("C12"), run("C13")
        assert set(r13.added) == set(r12.added) == axs("IPr SubClassOf NPr")
        assert r13.queries_distinct == 4

    def test_every_strategy_produces_a_valid_repair(self):
        for s in STRATEGIES:
            r = run(s)
            assert r.repair_valid, s
            base = remove_axioms(r.initial, r.wrong)
            for psi in r.wrong:
                assert not entails(r.final, psi), (s, psi)
            assert all(a in r.final for a in base.axioms), s


class TestOrderPermutations:
    # weakening ranges depend on what was already repaired, so the
    # processing order changes the numbers in a reproducible way
    C4_TABLE = {
        (1, 2, 3): ((1, 2, 1), (1, 1, 1)),
        (1, 3, 2): ((1, 2, 1), (1, 1, 1)),
        (2, 1, 3): ((2, 2, 2), (1, 1, 1)),
        (2, 3, 1): ((2, 2, 1), (1, 1, 1)),
        (3, 1, 2): ((1, 2, 1), (1, 1, 1)),
        (3, 2, 1): ((2, 2, 1), (1, 1, 1)),
    }

    @pytest.mark.parametrize("order", sorted(C4_TABLE))
    def test_c4_sweep(self, order):
        want_sup, want_sub = self.C4_TABLE[order]
        r = run("C4", order=order)
        assert r.sup_sizes == want_sup
        assert r.sub_sizes == want_sub
        assert r.processing_order == order

    def test_reversed_order_finds_the_second_weakening(self):
        r = run("C4", order=(3, 2, 1))
        assert set(r.weakened_union) == axs("IPr SubClassOf NPr",
                                            "PPr SubClassOf NPr")

    def test_identity_order_reporting(self):
        # vectors stay in identity order no matter the processing order
        r = run("C1", order=(3, 1, 2))
        assert r.sup_sizes == run("C1").sup_sizes == (3, 2, 4)

    def test_bad_orders_rejected(self):
        with pytest.raises(ValueError):
            run("C1", order=(1, 2))
        with pytest.raises(ValueError):
            run("C1", order=(1, 1, 2))


class TestEquivalenceExclusion:
    def test_c8_drops_candidates_shared_with_the_opposite_side(self):
        r = run("C8", equiv_exclude=True)
        assert r.source_sizes == (3, 2)
        assert r.target_sizes == (3, 2)
        assert set(r.completed_union) == axs(
            "GPr SubClassOf IPr", "PPr SubClassOf NPr", "IPr SubClassOf NPr")

    def test_c11_variant(self):
        r = run("C11", equiv_exclude=True)
        assert r.source_sizes == (1, 1)
        assert r.target_sizes == (3, 2)
        assert set(r.added) == axs("PPr SubClassOf NPr", "IPr SubClassOf NPr")

    def test_c12_and_c13_variants(self):
        for s in ("C12", "C13"):
            r = run(s, equiv_exclude=True)
            assert set(r.completed_union) == axs("IPr SubClassOf NPr"), s
            assert r.repair_valid, s

    def test_without_exclusion_ranges_match_pool_sizes(self):
        off, on = run("C9"), run("C9", equiv_exclude=True)
        for step_off, step_on in zip(off.completion_steps, on.completion_steps):
            assert step_on.source_size <= step_off.source_size
            assert step_on.target_size <= step_off.target_size


class TestSimplePool:
    def test_c1_on_the_simple_pool_still_validates(self, galen):
        t, wrong, oracle = galen
        r = run_strategy(t, wrong, oracle, "C1", pool=SIMPLE_POOL)
        assert r.repair_valid
        assert r.pool_mode == "simple"
        # atomic weakenings survive; the larger pool may add incomparable ones
        assert axs("PPr SubClassOf NPr") <= set(r.weakened_union) | set(r.added)


class TestPreconditions:
    def test_duplicate_wrong_axioms(self, galen):
        t, wrong, oracle = galen
        with pytest.raises(PreconditionError) as err:
            check_problem(t, (wrong[0], wrong[0]))
        assert err.value.invariant == "wrong-axioms-distinct"

    def test_wrong_axiom_missing_from_ontology(self, galen):
        t, _, _ = galen
        with pytest.raises(PreconditionError) as err:
            check_problem(t, (ax("F SubClassOf E"),))
        assert err.value.invariant == "wrong-axiom-in-ontology"

    def test_wrong_axiom_rederivable_after_removal(self):
        t, _ = parse_tbox("A SubClassOf B\nB SubClassOf C\nA SubClassOf C\n")
        with pytest.raises(PreconditionError) as err:
            check_problem(t, (ax("A SubClassOf C"),))
        assert err.value.invariant == "wrong-axiom-not-rederivable"

    def test_oracle_must_reject_every_wrong_axiom(self, galen):
        t, wrong, _ = galen
        yes_man = DeclarativeOracle(default=True)
        with pytest.raises(PreconditionError) as err:
            run_strategy(t, wrong, yes_man, "C1")
        assert err.value.invariant == "wrong-axiom-oracle-false"


class TestVerification:
    def test_contradictory_answers_produce_an_invalid_repair(self):
        # the validator rejects A SubClassOf C yet accepts D SubClassOf C;
        # together with the told A SubClassOf D, the completion rebuilds a
        # path to the rejected axiom, and verification catches it
        t, _ = parse_tbox("A SubClassOf D\nA SubClassOf C\nC SubClassOf B\n")
        wrong = (ax("A SubClassOf C"),)
        oracle = DeclarativeOracle([ax("A SubClassOf B"), ax("D SubClassOf C")],
                                   reflexive=True)
        r = run_strategy(t, wrong, oracle, "C9")
        assert set(r.added) == axs("A SubClassOf B", "D SubClassOf C")
        assert entails(r.final, ax("A SubClassOf C"))
        assert not r.repair_valid

    def test_verify_repair_recomputes_from_scratch(self, galen):
        t, wrong, oracle = galen
        r = run_strategy(t, wrong, oracle, "C1")
        again = verify_repair(t, wrong, r.final, mini_galen_problem()[2])
        assert again.valid
        assert set(again.added) == set(r.added)

    def test_verify_flags_smuggled_axioms(self, galen):
        t, wrong, oracle = galen
        from elrepair.model import add_axioms
        tampered = add_axioms(remove_axioms(t, wrong), [ax("E SubClassOf GPr")])
        result = verify_repair(t, wrong, tampered, oracle)
        assert not result.valid
        assert any("E SubClassOf GPr" in f for f in result.failures)


class TestComparison:
    def test_repaired_beats_broken_on_the_worked_example(self, galen):
        t, wrong, oracle = galen
        r = run_strategy(t, wrong, oracle.fresh(), "C9")
        c = compare_ontologies(t, r.final, oracle.fresh())
        assert c.incorrectness == "more"     # the original derives falsehoods
        assert ax("PPr SubClassOf IPr") in c.incorrect_left
        assert c.incorrect_right == ()

    def test_equal_ontologies(self, galen):
        t, _, oracle = galen
        c = compare_ontologies(t, t, oracle)
        assert c.incorrectness == "equal"
        assert c.completeness == "equal"

    def test_incomparable(self):
        left, _ = parse_tbox("A SubClassOf B\n")
        right, _ = parse_tbox("B SubClassOf A\n")
        oracle = DeclarativeOracle([ax("A SubClassOf B"), ax("B SubClassOf A")],
                                   reflexive=True)
        c = compare_ontologies(left, right, oracle)
        assert c.completeness == "incomparable"

    def test_default_probe_covers_all_atomic_pairs(self, galen):
        t, _, _ = galen
        probe = default_probe(t)
        assert len(probe) == 81


class TestRevisionReplay:
    def test_flipping_one_answer_changes_the_weakening(self, galen):
        t, wrong, oracle = galen
        rec = RecordingOracle(oracle)
        first = run_strategy(t, wrong, rec, "C1")
        assert ax("PPr SubClassOf NPr") in first.weakened_union

        rec.revise(ax("PPr SubClassOf NPr"), False)
        replay = RecordingOracle(ScriptedOracle(dict(rec.memo)))
        second = run_strategy(t, wrong, replay, "C1")
        assert set(second.weakened_union) == axs("IPr SubClassOf NPr")
        assert second.repair_valid


class TestRandomProblems:
    @pytest.mark.parametrize("seed", range(12))
    def test_every_strategy_repairs_generated_problems(self, seed):
        p = random_problem(seed)
        for s in STRATEGIES:
            r = run_strategy(p.tbox, p.wrong, p.oracle(), s)
            assert r.repair_valid, (seed, s)
            for psi in p.wrong:
                assert not entails(r.final, psi), (seed, s, psi)

    @pytest.mark.parametrize("seed", range(6))
    def test_added_axioms_are_ground_truth(self, seed):
        p = random_problem(seed)
        r = run_strategy(p.tbox, p.wrong, p.oracle(), "C9")
        for a in r.added:
            assert a in p.truth or a.lhs == a.rhs, (seed, a)
