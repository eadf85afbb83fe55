"""Answer sources for validation questions, plus session bookkeeping.

Every question the repair algorithms ask — "is this inclusion true in the
domain?" — goes through a :class:`RecordingOracle`, which memoizes answers
per axiom (a session never asks the same question twice) and keeps an
ordered log of first-asks.  The underlying source can be:

* :class:`DeclarativeOracle` — a fixed true-set with a default answer and
  optional closure rules (reflexivity, constructor decomposition,
  transitive chaining); used for scripted runs and tests;
* :class:`ScriptedOracle` — a partial answer table that raises
  :class:`PendingAnswer` on the first unknown question; the HTTP service
  uses it to park a run while a human answers.

``check_compatibility`` cross-examines the recorded answers against a
TBox and reports two kinds of suspicious patterns, each with a minimal
supporting axiom set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Protocol

from .eltext import parse_oracle
from .model import And, Axiom, Concept, Some, TBox, render_axiom
from .reasoner import entails


class AnswerSource(Protocol):
    def judge(self, axiom: Axiom) -> bool: ...


# ---------------------------------------------------------------------------
# Question context (what the asker was doing; surfaced by the service/UI)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuestionContext:
    """Why a question is being asked and what the candidate panes contain."""

    kind: str  # "confirm-wrong" | "weakening" | "completing" | "verification"
    wrong_axiom: Axiom | None = None
    seed_axiom: Axiom | None = None
    left_label: str = ""
    right_label: str = ""
    left_pane: tuple[Concept, ...] = ()
    right_pane: tuple[Concept, ...] = ()


@dataclass(frozen=True)
class QueryRecord:
    axiom: Axiom
    answer: bool
    revised: bool = False


class PendingAnswer(Exception):
    """No answer is on file for this axiom; a human has to decide."""

    def __init__(self, axiom: Axiom, context: QuestionContext | None = None) -> None:
        super().__init__(render_axiom(axiom))
        self.axiom = axiom
        self.context = context


# ---------------------------------------------------------------------------
# Answer sources
# ---------------------------------------------------------------------------


class DeclarativeOracle:
    """Fixed answer table: explicit true-set, default answer, closure rules.

    Closure rules (each opt-in):

    * ``reflexive`` — ``X SubClassOf X`` answers true;
    * ``constructors`` — ``some r.P SubClassOf some r.Q`` answers true
      when ``P SubClassOf Q`` does, and ``(X and Y) SubClassOf Q`` answers
      true when either conjunct alone is judged included in Q;
    * ``transitive`` — chains of true-set axioms answer true (checked
      after the other rules; hops are exact concept matches).
    """

    def __init__(
        self,
        true_axioms: Iterable[Axiom] = (),
        *,
        default: bool = False,
        reflexive: bool = True,
        constructors: bool = True,
        transitive: bool = False,
    ) -> None:
        self.true_axioms = frozenset(true_axioms)
        self.default = default
        self.reflexive = reflexive
        self.constructors = constructors
        self.transitive = transitive
        self._memo: dict[Axiom, bool] = {}
        self._edges: dict[Concept, list[Concept]] = {}
        for ax in self.true_axioms:
            self._edges.setdefault(ax.lhs, []).append(ax.rhs)

    @classmethod
    def from_text(cls, text: str) -> "DeclarativeOracle":
        spec = parse_oracle(text)
        return cls(
            spec.true_axioms,
            default=spec.default,
            reflexive=spec.reflexive,
            constructors=spec.constructors,
            transitive=spec.transitive,
        )

    def fresh(self) -> "DeclarativeOracle":
        """A copy with the same answer table and an empty memo."""
        return DeclarativeOracle(
            self.true_axioms,
            default=self.default,
            reflexive=self.reflexive,
            constructors=self.constructors,
            transitive=self.transitive,
        )

    def judge(self, axiom: Axiom) -> bool:
        got = self._memo.get(axiom)
        if got is None:
            got = self._judge(axiom)
            self._memo[axiom] = got
        return got

    def _judge(self, ax: Axiom) -> bool:
        if ax in self.true_axioms:
            return True
        if self.reflexive and ax.lhs == ax.rhs:
            return True
        if self.constructors:
            lhs, rhs = ax.lhs, ax.rhs
            if (
                isinstance(lhs, Some)
                and isinstance(rhs, Some)
                and lhs.role == rhs.role
                and self.judge(Axiom(lhs.filler, rhs.filler))
            ):
                return True
            if isinstance(lhs, And) and (
                self.judge(Axiom(lhs.left, rhs)) or self.judge(Axiom(lhs.right, rhs))
            ):
                return True
        if self.transitive and self._chain(ax.lhs, ax.rhs):
            return True
        return self.default

    def _chain(self, start: Concept, goal: Concept) -> bool:
        seen: set[Concept] = {start}
        stack = [start]
        while stack:
            c = stack.pop()
            for nxt in self._edges.get(c, ()):
                if nxt == goal:
                    return True
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return False


class ScriptedOracle:
    """Partial answer table; unknown questions raise :class:`PendingAnswer`."""

    def __init__(self, answers: dict[Axiom, bool] | None = None) -> None:
        self.answers: dict[Axiom, bool] = dict(answers or {})

    def judge(self, axiom: Axiom) -> bool:
        got = self.answers.get(axiom)
        if got is None:
            raise PendingAnswer(axiom)
        return got


# ---------------------------------------------------------------------------
# Session wrapper: memo + ordered log + revision
# ---------------------------------------------------------------------------


class RecordingOracle:
    """Memoizing, logging front for an answer source.

    Each distinct axiom is asked of the source at most once; the log keeps
    one :class:`QueryRecord` per distinct axiom in first-ask order, which
    is exactly the question sequence a human validator sees.  ``context``
    is stamped onto any :class:`PendingAnswer` the source raises.
    Revisions overwrite the memo in place and bump ``epoch`` so consumers
    can notice their runs went stale.
    """

    def __init__(self, source: AnswerSource) -> None:
        self.source = source
        self.memo: dict[Axiom, bool] = {}
        self.log: list[QueryRecord] = []
        self.context: QuestionContext | None = None
        self.epoch = 0

    def judge(self, axiom: Axiom) -> bool:
        got = self.memo.get(axiom)
        if got is not None:
            return got
        try:
            answer = self.source.judge(axiom)
        except PendingAnswer as pending:
            if pending.context is None:
                raise PendingAnswer(axiom, self.context) from None
            raise
        self.memo[axiom] = answer
        self.log.append(QueryRecord(axiom, answer))
        return answer

    @property
    def distinct_count(self) -> int:
        return len(self.memo)

    def revise(self, axiom: Axiom, answer: bool) -> None:
        if axiom not in self.memo:
            raise KeyError(f"never asked: {render_axiom(axiom)}")
        self.memo[axiom] = answer
        self.log = [
            QueryRecord(axiom, answer, revised=True) if rec.axiom == axiom else rec
            for rec in self.log
        ]
        self.epoch += 1


# ---------------------------------------------------------------------------
# Compatibility checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationWarning:
    """A suspicious pattern among recorded answers.

    * ``false-marked-but-derivable`` — an axiom answered false follows
      from the TBox together with the axioms answered true;
    * ``true-marked-but-contradicted`` — an axiom answered true and one
      answered false entail each other under the TBox, so the two answers
      cannot both be right.

    ``support`` is a minimal set of axioms witnessing the derivation
    (minimal by construction: each member was kept only because dropping
    it broke the derivation).
    """

    kind: str
    axiom: Axiom
    support: tuple[Axiom, ...]


FALSE_MARKED_BUT_DERIVABLE = "false-marked-but-derivable"
TRUE_MARKED_BUT_CONTRADICTED = "true-marked-but-contradicted"


def _shrink_support(
    axioms: list[Axiom], holds: Callable[[list[Axiom]], bool]
) -> tuple[Axiom, ...]:
    """Greedy minimization: drop axioms (newest first) while ``holds`` stays true."""
    kept = list(axioms)
    for ax in reversed(axioms):
        trial = [a for a in kept if a != ax]
        if holds(trial):
            kept = trial
    return tuple(kept)


def check_compatibility(
    records: Iterable[QueryRecord], t: TBox
) -> list[ValidationWarning]:
    """Cross-examine recorded answers against a TBox.

    ``t`` should be the ontology the answers are being collected for with
    the known-wrong axioms removed.
    """
    recs = list(records)
    trues = [r.axiom for r in recs if r.answer]
    falses = [r.axiom for r in recs if not r.answer]
    warnings: list[ValidationWarning] = []

    base_axioms = [a for a in t.axioms] + [a for a in trues if a not in t]
    for f in falses:
        pool = [a for a in base_axioms if a != f]
        if entails(TBox(pool), f):
            support = _shrink_support(pool, lambda axs: entails(TBox(axs), f))
            warnings.append(ValidationWarning(FALSE_MARKED_BUT_DERIVABLE, f, support))

    for a in trues:
        for f in falses:
            with_a = TBox(list(t.axioms) + [a])
            with_f = TBox(list(t.axioms) + [f])
            if entails(with_a, f) and entails(with_f, a):
                def both_hold(axs: list[Axiom], a: Axiom = a, f: Axiom = f) -> bool:
                    return entails(TBox(axs + [a]), f) and entails(TBox(axs + [f]), a)

                ctx = _shrink_support([x for x in t.axioms if x not in (a, f)], both_hold)
                warnings.append(
                    ValidationWarning(TRUE_MARKED_BUT_CONTRADICTED, a, (f, *ctx))
                )
    return warnings
