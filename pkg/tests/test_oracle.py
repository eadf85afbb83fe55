"""Answer sources, recording, revision, and answer compatibility checks."""

import pytest

from elrepair.eltext import parse_axiom, parse_tbox
from elrepair.fixtures import mini_galen_oracle
from elrepair.model import Axiom, TBox
from elrepair.oracle import (
    FALSE_MARKED_BUT_DERIVABLE,
    TRUE_MARKED_BUT_CONTRADICTED,
    DeclarativeOracle,
    PendingAnswer,
    QueryRecord,
    QuestionContext,
    RecordingOracle,
    ScriptedOracle,
    check_compatibility,
)


def ax(text: str) -> Axiom:
    return parse_axiom(text)


class TestDeclarativeOracle:
    def test_explicit_trues_and_default(self):
        o = DeclarativeOracle([ax("A SubClassOf B")], default=False)
        assert o.judge(ax("A SubClassOf B"))
        assert not o.judge(ax("B SubClassOf A"))

    def test_reflexive_closure(self):
        o = DeclarativeOracle([], reflexive=True)
        assert o.judge(ax("X SubClassOf X"))
        assert o.judge(ax("(A and B) SubClassOf (A and B)"))

    def test_constructor_closure_for_existentials(self):
        o = DeclarativeOracle([ax("P SubClassOf Q")], constructors=True)
        assert o.judge(ax("(some r P) SubClassOf (some r Q)"))
        assert not o.judge(ax("(some s P) SubClassOf (some r Q)"))

    def test_constructor_closure_for_conjunctions(self):
        o = DeclarativeOracle([ax("P SubClassOf Q")], constructors=True)
        assert o.judge(ax("(P and X) SubClassOf Q"))
        assert not o.judge(ax("(X and Y) SubClassOf Q"))

    def test_transitive_closure_is_opt_in(self):
        table = [ax("A SubClassOf B"), ax("B SubClassOf C")]
        assert not DeclarativeOracle(table).judge(ax("A SubClassOf C"))
        assert DeclarativeOracle(table, transitive=True).judge(ax("A SubClassOf C"))

    def test_fresh_copy_answers_identically(self):
        o = mini_galen_oracle()
        probe = ax("E SubClassOf CVD")
        assert o.fresh().judge(probe) == o.judge(probe)

    def test_mini_galen_closure_answers(self):
        o = mini_galen_oracle()
        assert o.judge(ax("(some hAPr GPr) SubClassOf (some hAPr NPr)"))
        assert o.judge(ax("(E and F) SubClassOf PPh"))
        assert not o.judge(ax("PPr SubClassOf IPr"))
        assert not o.judge(ax("E SubClassOf NPr"))


class TestScriptedOracle:
    def test_answers_from_script(self):
        o = ScriptedOracle({ax("A SubClassOf B"): True})
        assert o.judge(ax("A SubClassOf B"))

    def test_missing_answer_raises_pending(self):
        o = ScriptedOracle({})
        with pytest.raises(PendingAnswer) as err:
            o.judge(ax("A SubClassOf B"))
        assert err.value.axiom == ax("A SubClassOf B")


class TestRecordingOracle:
    def test_each_distinct_question_hits_the_source_once(self):
        asked = []

        class Counting:
            def judge(self, axiom):
                asked.append(axiom)
                return False

        rec = RecordingOracle(Counting())
        for _ in range(3):
            rec.judge(ax("A SubClassOf B"))
        rec.judge(ax("B SubClassOf C"))
        assert len(asked) == 2
        assert rec.distinct_count == 2
        assert [r.axiom for r in rec.log] == [ax("A SubClassOf B"),
                                              ax("B SubClassOf C")]

    def test_pending_answers_carry_the_live_context(self):
        rec = RecordingOracle(ScriptedOracle({}))
        rec.context = QuestionContext(kind="weakening", wrong_axiom=ax("A SubClassOf B"))
        with pytest.raises(PendingAnswer) as err:
            rec.judge(ax("A SubClassOf C"))
        assert err.value.context.kind == "weakening"
        assert err.value.context.wrong_axiom == ax("A SubClassOf B")

    def test_revision_updates_memo_log_and_epoch(self):
        rec = RecordingOracle(ScriptedOracle({ax("A SubClassOf B"): True}))
        assert rec.judge(ax("A SubClassOf B")) is True
        epoch = rec.epoch
        rec.revise(ax("A SubClassOf B"), False)
        assert rec.judge(ax("A SubClassOf B")) is False
        assert rec.epoch == epoch + 1
        assert rec.log == [QueryRecord(ax("A SubClassOf B"), False, revised=True)]

    def test_revising_an_unasked_axiom_is_an_error(self):
        rec = RecordingOracle(ScriptedOracle({}))
        with pytest.raises(KeyError):
            rec.revise(ax("A SubClassOf B"), True)


class TestCompatibility:
    def test_false_marked_but_derivable_through_tbox(self):
        # the validator accepted A SubClassOf B, the TBox supplies
        # B SubClassOf C, yet A SubClassOf C was rejected
        t, _ = parse_tbox("B SubClassOf C\n")
        records = [QueryRecord(ax("A SubClassOf B"), True),
                   QueryRecord(ax("A SubClassOf C"), False)]
        warnings = check_compatibility(records, t)
        assert len(warnings) == 1
        w = warnings[0]
        assert w.kind == FALSE_MARKED_BUT_DERIVABLE
        assert w.axiom == ax("A SubClassOf C")
        assert set(w.support) == {ax("A SubClassOf B"), ax("B SubClassOf C")}

    def test_derivable_purely_from_true_answers(self):
        records = [QueryRecord(ax("A SubClassOf B"), True),
                   QueryRecord(ax("B SubClassOf C"), True),
                   QueryRecord(ax("A SubClassOf C"), False)]
        warnings = check_compatibility(records, TBox())
        assert [w.kind for w in warnings] == [FALSE_MARKED_BUT_DERIVABLE]

    def test_support_is_minimal(self):
        t, _ = parse_tbox("B SubClassOf C\nX SubClassOf Y\n")
        records = [QueryRecord(ax("A SubClassOf B"), True),
                   QueryRecord(ax("Q SubClassOf R"), True),
                   QueryRecord(ax("A SubClassOf C"), False)]
        (w,) = check_compatibility(records, t)
        assert ax("Q SubClassOf R") not in w.support
        assert ax("X SubClassOf Y") not in w.support

    def test_true_marked_but_contradicted(self):
        # under B equivalent-to C the two answers cannot both be right
        t, _ = parse_tbox("B SubClassOf C\nC SubClassOf B\n")
        records = [QueryRecord(ax("A SubClassOf B"), True),
                   QueryRecord(ax("A SubClassOf C"), False)]
        warnings = check_compatibility(records, t)
        kinds = {w.kind for w in warnings}
        assert TRUE_MARKED_BUT_CONTRADICTED in kinds
        contradicted = [w for w in warnings if w.kind == TRUE_MARKED_BUT_CONTRADICTED]
        assert contradicted[0].axiom == ax("A SubClassOf B")
        assert contradicted[0].support[0] == ax("A SubClassOf C")

    def test_consistent_answers_raise_nothing(self):
        t, _ = parse_tbox("B SubClassOf C\n")
        records = [QueryRecord(ax("A SubClassOf B"), True),
                   QueryRecord(ax("A SubClassOf C"), True),
                   QueryRecord(ax("C SubClassOf A"), False)]
        assert check_compatibility(records, t) == []
