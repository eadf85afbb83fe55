"""Repairing a TBox that contains known-wrong axioms.

Given an ontology ``T``, a set ``W`` of axioms in ``T`` that the domain
oracle rejects, and an oracle for the domain, a repair removes ``W`` and
adds a set ``A`` of oracle-endorsed axioms such that no member of ``W``
is derivable afterwards.  Two primitive searches produce candidates:

* weakening a wrong axiom ``a SubClassOf b`` — replace it by the
  Pareto-maximal oracle-true inclusions ``sb SubClassOf sp`` with ``sb``
  below ``a`` and ``sp`` above ``b`` in the current TBox;
* completing a kept axiom ``a SubClassOf b`` — additionally adopt the
  Pareto-maximal oracle-true inclusions ``sp SubClassOf sb`` with ``sp``
  above ``a`` and ``sb`` below ``b`` (recovering knowledge that the
  removals destroyed).

Thirteen ready-made strategies (labels C1..C13) differ only in plumbing:
whether wrong axioms leave the working TBox all at once, one at a time,
or not at all during candidate generation; whether each wrong axiom is
put back after its turn; and whether accepted candidates enter the
working TBox immediately, after each wrong axiom, or only at the end.
``StrategySpec`` exposes those switches, so other combinations can be
composed and compared.

Every strategy ends the same way: the wrong axioms are removed, the
collected additions go in, and the result is re-verified against the
oracle and the reasoner before being reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .model import (
    Atom,
    Axiom,
    Concept,
    FreshNameGenerator,
    TBox,
    add_axioms,
    generator_for,
    is_normalized,
    normalize_axiom,
    remove_axioms,
    render_axiom,
    render_concept,
)
from .oracle import AnswerSource, QuestionContext, RecordingOracle
from .reasoner import (
    ATOMIC_POOL,
    ConceptPool,
    entails,
    strictly_entails_below,
    subconcepts,
    superconcepts,
)


class PreconditionError(ValueError):
    """A repair-problem invariant does not hold; ``invariant`` names it."""

    def __init__(self, invariant: str, detail: str) -> None:
        super().__init__(f"{invariant}: {detail}")
        self.invariant = invariant
        self.detail = detail


# ---------------------------------------------------------------------------
# Candidate generation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeakeningStep:
    """One weakening computation: ranges, judged candidates, survivors."""

    wrong_axiom: Axiom
    identity_index: int                      # 1-based position in the given W
    sub_size: int                            # |below lhs|
    sup_size: int                            # |above rhs|
    source_size: int                         # range actually used for sb
    target_size: int                         # range actually used for sp
    candidates: tuple[Axiom, ...]            # all judged pairs, ask order
    accepted: tuple[Axiom, ...]              # Pareto-maximal true pairs
    weakened: tuple[Axiom, ...]              # accepted, normalized


@dataclass(frozen=True)
class CompletionStep:
    """One completing computation for a single kept (weakened) axiom."""

    seed_axiom: Axiom
    wrong_axiom: Axiom
    identity_index: int
    sup_size: int                            # |above lhs|
    sub_size: int                            # |below rhs|
    source_size: int                         # range actually used for sp
    target_size: int                         # range actually used for sb
    candidates: tuple[Axiom, ...]
    accepted: tuple[Axiom, ...]
    completed: tuple[Axiom, ...]             # seed + accepted, normalized


def _ask_all(
    pairs: Sequence[tuple[Concept, Concept]],
    oracle: RecordingOracle,
    context: QuestionContext,
) -> dict[Axiom, bool]:
    """Judge every candidate pair, in order, under the given context."""
    previous = oracle.context
    oracle.context = context
    try:
        answers: dict[Axiom, bool] = {}
        for lhs, rhs in pairs:
            ax = Axiom(lhs, rhs)
            if ax not in answers:
                answers[ax] = oracle.judge(ax)
        return answers
    finally:
        oracle.context = previous


def weakened_axiom_set(
    wrong: Axiom,
    t: TBox,
    oracle: RecordingOracle,
    *,
    pool: ConceptPool = ATOMIC_POOL,
    equiv_exclude: bool = False,
    gen: FreshNameGenerator | None = None,
    identity_index: int = 1,
) -> WeakeningStep:
    """Pareto-maximal oracle-true weakenings of a wrong axiom.

    Candidates pair every ``sb`` derivably below ``wrong.lhs`` with every
    ``sp`` derivably above ``wrong.rhs`` (both drawn from the pool over
    the TBox signature).  A true candidate survives unless another true
    candidate covers at least as much on one side and strictly more on
    the other.  With ``equiv_exclude`` the ranges drop concepts shared
    with the opposite side's range, so no candidate can turn the repaired
    hierarchy's strict inclusions into equivalences.  The result may be
    empty.
    """
    if gen is None:
        gen = generator_for(t)
    below = subconcepts(wrong.lhs, t, pool)
    above = superconcepts(wrong.rhs, t, pool)
    if equiv_exclude:
        below_rhs = set(subconcepts(wrong.rhs, t, pool))
        above_lhs = set(superconcepts(wrong.lhs, t, pool))
        sb_range = tuple(c for c in below if c not in below_rhs)
        sp_range = tuple(c for c in above if c not in above_lhs)
    else:
        sb_range, sp_range = below, above
    context = QuestionContext(
        kind="weakening",
        wrong_axiom=wrong,
        left_label=f"below {render_concept(wrong.lhs)}",
        right_label=f"above {render_concept(wrong.rhs)}",
        left_pane=sb_range,
        right_pane=sp_range,
    )
    pairs = [(sb, sp) for sb in sb_range for sp in sp_range]
    answers = _ask_all(pairs, oracle, context)
    true_pairs = [(sb, sp) for sb, sp in pairs if answers[Axiom(sb, sp)]]

    def dominated(p: tuple[Concept, Concept]) -> bool:
        sb, sp = p
        for sb2, sp2 in true_pairs:
            if (sb2, sp2) == (sb, sp):
                continue
            if entails(t, Axiom(sb, sb2)) and strictly_entails_below(t, sp2, sp):
                return True
            if strictly_entails_below(t, sb, sb2) and entails(t, Axiom(sp2, sp)):
                return True
        return False

    accepted = tuple(Axiom(sb, sp) for sb, sp in true_pairs if not dominated((sb, sp)))
    weakened: list[Axiom] = []
    for ax in accepted:
        for n in normalize_axiom(ax, gen):
            if n not in weakened:
                weakened.append(n)
    return WeakeningStep(
        wrong_axiom=wrong,
        identity_index=identity_index,
        sub_size=len(below),
        sup_size=len(above),
        source_size=len(sb_range),
        target_size=len(sp_range),
        candidates=tuple(Axiom(sb, sp) for sb, sp in pairs),
        accepted=accepted,
        weakened=tuple(weakened),
    )


def completed_axiom_set(
    seed: Axiom,
    t: TBox,
    oracle: RecordingOracle,
    *,
    pool: ConceptPool = ATOMIC_POOL,
    equiv_exclude: bool = False,
    gen: FreshNameGenerator | None = None,
    wrong_axiom: Axiom | None = None,
    identity_index: int = 1,
) -> CompletionStep:
    """Pareto-maximal oracle-true strengthenings adopted alongside a kept axiom.

    The seed must itself be oracle-true (PreconditionError otherwise).
    Candidates pair every ``sp`` above ``seed.lhs`` with every ``sb``
    below ``seed.rhs``; a true candidate survives unless another true
    candidate is at least as strong on one side and strictly stronger on
    the other.  With ``equiv_exclude`` the ``sp`` range excludes concepts
    above ``seed.rhs`` and the ``sb`` range excludes concepts below
    ``seed.lhs`` (both for candidates and for the dominance guard).  The
    result always contains the seed.
    """
    if gen is None:
        gen = generator_for(t)
    if not oracle.judge(seed):
        raise PreconditionError(
            "completion-seed-judged-false",
            f"cannot complete an axiom the oracle rejects: {render_axiom(seed)}",
        )
    above = superconcepts(seed.lhs, t, pool)
    below = subconcepts(seed.rhs, t, pool)
    if equiv_exclude:
        above_rhs = set(superconcepts(seed.rhs, t, pool))
        below_lhs = set(subconcepts(seed.lhs, t, pool))
        sp_range = tuple(c for c in above if c not in above_rhs)
        sb_range = tuple(c for c in below if c not in below_lhs)
    else:
        sp_range, sb_range = above, below
    context = QuestionContext(
        kind="completing",
        wrong_axiom=wrong_axiom,
        seed_axiom=seed,
        left_label=f"above {render_concept(seed.lhs)}",
        right_label=f"below {render_concept(seed.rhs)}",
        left_pane=sp_range,
        right_pane=sb_range,
    )
    pairs = [(sp, sb) for sp in sp_range for sb in sb_range]
    answers = _ask_all(pairs, oracle, context)
    true_pairs = [(sp, sb) for sp, sb in pairs if answers[Axiom(sp, sb)]]

    def dominated(p: tuple[Concept, Concept]) -> bool:
        sp, sb = p
        for sp2, sb2 in true_pairs:
            if (sp2, sb2) == (sp, sb):
                continue
            if entails(t, Axiom(sp, sp2)) and strictly_entails_below(t, sb2, sb):
                return True
            if strictly_entails_below(t, sp, sp2) and entails(t, Axiom(sb2, sb)):
                return True
        return False

    accepted = tuple(Axiom(sp, sb) for sp, sb in true_pairs if not dominated((sp, sb)))
    completed: list[Axiom] = []
    for ax in (seed,) + accepted:
        parts = [ax] if is_normalized(ax) else normalize_axiom(ax, gen)
        for n in parts:
            if n not in completed:
                completed.append(n)
    return CompletionStep(
        seed_axiom=seed,
        wrong_axiom=wrong_axiom if wrong_axiom is not None else seed,
        identity_index=identity_index,
        sup_size=len(above),
        sub_size=len(below),
        source_size=len(sp_range),
        target_size=len(sb_range),
        candidates=tuple(Axiom(sp, sb) for sp, sb in pairs),
        accepted=accepted,
        completed=tuple(completed),
    )


# ---------------------------------------------------------------------------
# Redundancy pruning
# ---------------------------------------------------------------------------


def prune_redundant(axioms: Iterable[Axiom]) -> tuple[Axiom, ...]:
    """Drop axioms entailed by the remaining ones, newest first.

    The entailment check runs against the remaining axioms alone, so this
    never drops something only the enclosing ontology could re-derive.
    Tautologies vanish (they are entailed by the empty TBox).
    """
    kept: list[Axiom] = []
    for ax in axioms:
        if ax not in kept:
            kept.append(ax)
    for ax in reversed(list(kept)):
        rest = [a for a in kept if a != ax]
        if entails(TBox(rest), ax):
            kept = rest
    return tuple(kept)


# ---------------------------------------------------------------------------
# Strategy compositions
# ---------------------------------------------------------------------------

REMOVAL_MODES = ("all", "one", "none")
ADD_BACK_MODES = ("all", "one", "none")
UPDATE_MODES = ("now", "end_one", "end_all")


@dataclass(frozen=True)
class StrategySpec:
    """How candidate generation is plumbed into the working TBox.

    Weakening phase: ``weaken_removal`` says which wrong axioms leave the
    working TBox before a weakening computation ("all" up front, "one" at
    a time, "none"); ``weaken_add_back`` whether a removed axiom returns
    after its turn ("one") or stays out ("none"); ``weaken_update`` when
    accepted weakenings enter the working TBox.  ``weaken_scope`` "all"
    computes every weakened set against the phase-start TBox regardless
    of updates.  The completion phase mirrors these with its own three
    switches and runs only when ``completing`` is set.  When
    ``weaken_update`` is "now" and completion is on, each wrong axiom's
    weakenings are completed before the next wrong axiom is weakened.
    """

    label: str
    weaken_removal: str = "one"
    weaken_add_back: str = "one"
    weaken_update: str = "end_all"
    weaken_scope: str = "one"
    completing: bool = False
    complete_removal: str = "none"
    complete_add_back: str = "none"
    complete_update: str = "end_all"

    def __post_init__(self) -> None:
        for name, value, allowed in (
            ("weaken_removal", self.weaken_removal, REMOVAL_MODES),
            ("weaken_add_back", self.weaken_add_back, ADD_BACK_MODES),
            ("weaken_update", self.weaken_update, UPDATE_MODES),
            ("weaken_scope", self.weaken_scope, ("one", "all")),
            ("complete_removal", self.complete_removal, REMOVAL_MODES),
            ("complete_add_back", self.complete_add_back, ADD_BACK_MODES),
            ("complete_update", self.complete_update, UPDATE_MODES),
        ):
            if value not in allowed:
                raise ValueError(f"{name} must be one of {allowed}, got {value!r}")

    @property
    def interleaved(self) -> bool:
        return self.completing and self.weaken_update == "now" and self.weaken_scope == "one"


STRATEGIES: dict[str, StrategySpec] = {
    # Weakening only.
    "C1": StrategySpec("C1", weaken_removal="one", weaken_add_back="one",
                       weaken_update="end_all"),
    "C2": StrategySpec("C2", weaken_removal="one", weaken_add_back="none",
                       weaken_update="now"),
    "C3": StrategySpec("C3", weaken_removal="all", weaken_add_back="none",
                       weaken_update="end_all"),
    "C4": StrategySpec("C4", weaken_removal="all", weaken_add_back="none",
                       weaken_update="now"),
    # Weakening followed by completing, as separate phases.
    "C5": StrategySpec("C5", weaken_removal="one", weaken_add_back="one",
                       weaken_update="end_all", completing=True,
                       complete_removal="none", complete_update="end_all"),
    "C9": StrategySpec("C9", weaken_removal="one", weaken_add_back="one",
                       weaken_update="end_all", completing=True,
                       complete_removal="all", complete_update="end_all"),
    "C10": StrategySpec("C10", weaken_removal="one", weaken_add_back="one",
                        weaken_update="end_all", completing=True,
                        complete_removal="all", complete_update="now"),
    "C11": StrategySpec("C11", weaken_removal="one", weaken_add_back="one",
                        weaken_update="end_all", completing=True,
                        complete_removal="one", complete_add_back="one",
                        complete_update="now"),
    "C12": StrategySpec("C12", weaken_removal="all", weaken_add_back="none",
                        weaken_update="end_all", weaken_scope="all", completing=True,
                        complete_removal="all", complete_update="end_all"),
    # Weakening and completing interleaved per wrong axiom.
    "C6": StrategySpec("C6", weaken_removal="one", weaken_add_back="one",
                       weaken_update="now", completing=True,
                       complete_removal="one", complete_add_back="one",
                       complete_update="now"),
    "C7": StrategySpec("C7", weaken_removal="one", weaken_add_back="none",
                       weaken_update="now", completing=True,
                       complete_removal="one", complete_add_back="none",
                       complete_update="now"),
    "C8": StrategySpec("C8", weaken_removal="one", weaken_add_back="one",
                       weaken_update="now", completing=True,
                       complete_removal="none", complete_update="end_all"),
    "C13": StrategySpec("C13", weaken_removal="all", weaken_add_back="none",
                        weaken_update="now", completing=True,
                        complete_removal="all", complete_update="now"),
}

STRATEGY_LABELS = tuple(f"C{i}" for i in range(1, 14))


def strategy_spec(strategy: str | StrategySpec) -> StrategySpec:
    if isinstance(strategy, StrategySpec):
        return strategy
    got = STRATEGIES.get(strategy)
    if got is None:
        raise ValueError(
            f"unknown strategy {strategy!r} (expected one of {', '.join(STRATEGY_LABELS)})")
    return got


# ---------------------------------------------------------------------------
# Running a strategy
# ---------------------------------------------------------------------------


@dataclass
class RunReport:
    """Everything observable about one strategy run."""

    strategy: str
    spec: StrategySpec
    initial: TBox
    wrong: tuple[Axiom, ...]                 # identity order, as given
    processing_order: tuple[int, ...]        # 1-based identity indices
    pool_mode: str
    equiv_exclude: bool
    prune: bool
    seed: int
    weakening_steps: tuple[WeakeningStep, ...] = ()   # processing order
    completion_steps: tuple[CompletionStep, ...] = () # processing order
    weakened_union: tuple[Axiom, ...] = ()
    completed_union: tuple[Axiom, ...] = ()
    removed: tuple[Axiom, ...] = ()
    added: tuple[Axiom, ...] = ()
    final: TBox = field(default_factory=TBox)
    queries_distinct: int = 0
    repair_valid: bool = False

    def weakening_step_for(self, identity_index: int) -> WeakeningStep:
        for step in self.weakening_steps:
            if step.identity_index == identity_index:
                return step
        raise KeyError(identity_index)

    @property
    def sup_sizes(self) -> tuple[int, ...]:
        """|above rhs| per wrong axiom, in identity order."""
        return tuple(self.weakening_step_for(i).sup_size
                     for i in range(1, len(self.wrong) + 1))

    @property
    def sub_sizes(self) -> tuple[int, ...]:
        """|below lhs| per wrong axiom, in identity order."""
        return tuple(self.weakening_step_for(i).sub_size
                     for i in range(1, len(self.wrong) + 1))

    @property
    def completion_sup_sizes(self) -> tuple[int, ...]:
        return tuple(s.sup_size for s in self.completion_steps)

    @property
    def completion_sub_sizes(self) -> tuple[int, ...]:
        return tuple(s.sub_size for s in self.completion_steps)

    @property
    def source_sizes(self) -> tuple[int, ...]:
        return tuple(s.source_size for s in self.completion_steps)

    @property
    def target_sizes(self) -> tuple[int, ...]:
        return tuple(s.target_size for s in self.completion_steps)


def check_problem(t: TBox, wrong: Sequence[Axiom]) -> None:
    """Structural repair-problem invariants (no oracle involved)."""
    seen: set[Axiom] = set()
    for psi in wrong:
        if psi in seen:
            raise PreconditionError(
                "wrong-axioms-distinct", f"listed twice: {render_axiom(psi)}")
        seen.add(psi)
        if psi not in t:
            raise PreconditionError(
                "wrong-axiom-in-ontology", f"not in the ontology: {render_axiom(psi)}")
    base = remove_axioms(t, wrong)
    for psi in wrong:
        if entails(base, psi):
            raise PreconditionError(
                "wrong-axiom-not-rederivable",
                f"still derivable after removing the wrong set: {render_axiom(psi)}")


def _confirm_wrong(wrong: Sequence[Axiom], oracle: RecordingOracle) -> None:
    for psi in wrong:
        context = QuestionContext(kind="confirm-wrong", wrong_axiom=psi)
        previous = oracle.context
        oracle.context = context
        try:
            if oracle.judge(psi):
                raise PreconditionError(
                    "wrong-axiom-oracle-false",
                    f"oracle endorses a supposedly wrong axiom: {render_axiom(psi)}")
        finally:
            oracle.context = previous


def _order_indices(count: int, order: Sequence[int] | None) -> tuple[int, ...]:
    if order is None:
        return tuple(range(1, count + 1))
    idx = tuple(int(i) for i in order)
    if sorted(idx) != list(range(1, count + 1)):
        raise ValueError(
            f"order must be a permutation of 1..{count}, got {list(order)!r}")
    return idx


def run_strategy(
    t: TBox,
    wrong: Sequence[Axiom],
    source: AnswerSource | RecordingOracle,
    strategy: str | StrategySpec = "C1",
    *,
    order: Sequence[int] | None = None,
    pool: ConceptPool = ATOMIC_POOL,
    equiv_exclude: bool = False,
    prune: bool = True,
    seed: int = 0,
) -> RunReport:
    """Run one repair strategy to completion and verify the result.

    ``source`` answers validation questions; it is wrapped in (or used
    as) a :class:`RecordingOracle`, so each distinct question is asked
    once and the report's ``queries_distinct`` counts them.  ``order``
    permutes the processing order of the wrong axioms (1-based identity
    indices); reported per-axiom vectors stay in identity order.
    """
    spec = strategy_spec(strategy)
    wrong = tuple(wrong)
    oracle = source if isinstance(source, RecordingOracle) else RecordingOracle(source)
    check_problem(t, wrong)
    _confirm_wrong(wrong, oracle)

    indices = _order_indices(len(wrong), order)
    processing = [(i, wrong[i - 1]) for i in indices]
    gen = generator_for(t)
    kw = dict(pool=pool, equiv_exclude=equiv_exclude, gen=gen)

    working = t
    if spec.weaken_removal == "all":
        working = remove_axioms(working, wrong)
    phase_anchor = working   # completion base for complete_removal == "none"

    wsteps: list[WeakeningStep] = []
    w_sets: list[tuple[int, Axiom, tuple[Axiom, ...]]] = []  # (identity, ψ, weakened)
    csteps: list[CompletionStep] = []
    collected: list[Axiom] = []   # completions buffered for end_all

    def complete_one(seed_ax: Axiom, ctx: TBox, identity: int, psi: Axiom) -> CompletionStep:
        step = completed_axiom_set(
            seed_ax, ctx, oracle, wrong_axiom=psi, identity_index=identity, **kw)
        csteps.append(step)
        return step

    if spec.weaken_scope == "all":
        # Every weakened set is computed against the phase-start TBox.
        for identity, psi in processing:
            step = weakened_axiom_set(
                psi, working, oracle, identity_index=identity, **kw)
            wsteps.append(step)
            w_sets.append((identity, psi, step.weakened))
        if not spec.completing:
            working = add_axioms(
                working, [ax for _, _, ws in w_sets for ax in ws])
    else:
        for identity, psi in processing:
            if spec.weaken_removal == "one":
                if spec.weaken_add_back == "none":
                    working = remove_axioms(working, [psi])
                    wctx = working
                else:
                    wctx = remove_axioms(working, [psi])
            else:
                wctx = working
            step = weakened_axiom_set(
                psi, wctx, oracle, identity_index=identity, **kw)
            wsteps.append(step)
            w_sets.append((identity, psi, step.weakened))

            if spec.interleaved:
                if spec.complete_removal == "one" and spec.complete_add_back == "none":
                    working = remove_axioms(working, [psi])
                snapshot = (
                    remove_axioms(working, [psi])
                    if spec.complete_removal == "one" and spec.complete_add_back != "none"
                    else None
                )
                buffered: list[Axiom] = []
                for seed_ax in step.weakened:
                    if spec.complete_removal == "none":
                        cctx = phase_anchor
                    elif snapshot is not None:
                        cctx = snapshot
                    elif spec.complete_removal == "all":
                        cctx = remove_axioms(working, wrong)
                    else:
                        cctx = working
                    cstep = complete_one(seed_ax, cctx, identity, psi)
                    if spec.complete_update == "now":
                        working = add_axioms(working, cstep.completed)
                    elif spec.complete_update == "end_one":
                        buffered.extend(cstep.completed)
                    else:
                        collected.extend(cstep.completed)
                if buffered:
                    working = add_axioms(working, buffered)
            elif not spec.completing and spec.weaken_update in ("now", "end_one"):
                working = add_axioms(working, step.weakened)
        if not spec.completing and spec.weaken_update == "end_all":
            working = add_axioms(working, [ax for _, _, ws in w_sets for ax in ws])

    if spec.completing and not spec.interleaved:
        comp_working = working
        if spec.complete_removal == "all":
            comp_working = remove_axioms(comp_working, wrong)
        comp_anchor = comp_working if spec.complete_removal != "none" else working
        for identity, psi, weakened in w_sets:
            if spec.complete_removal == "one" and spec.complete_add_back == "none":
                comp_working = remove_axioms(comp_working, [psi])
            snapshot = (
                remove_axioms(comp_working, [psi])
                if spec.complete_removal == "one" and spec.complete_add_back != "none"
                else None
            )
            buffered = []
            for seed_ax in weakened:
                if spec.complete_removal == "none":
                    cctx = comp_anchor
                elif snapshot is not None:
                    cctx = snapshot
                else:
                    cctx = comp_working
                cstep = complete_one(seed_ax, cctx, identity, psi)
                if spec.complete_update == "now":
                    comp_working = add_axioms(comp_working, cstep.completed)
                elif spec.complete_update == "end_one":
                    buffered.extend(cstep.completed)
                else:
                    collected.extend(cstep.completed)
            if buffered:
                comp_working = add_axioms(comp_working, buffered)
        working = comp_working

    if collected:
        working = add_axioms(working, collected)
    working = remove_axioms(working, wrong)

    base = remove_axioms(t, wrong)
    added_raw = tuple(ax for ax in working.axioms if ax not in base)
    added = prune_redundant(added_raw) if prune else added_raw
    final = add_axioms(base, added)

    weakened_union_raw: list[Axiom] = []
    for i in range(1, len(wrong) + 1):
        for _, _, ws in (entry for entry in w_sets if entry[0] == i):
            for ax in ws:
                if ax not in weakened_union_raw:
                    weakened_union_raw.append(ax)
    completed_union_raw: list[Axiom] = []
    for cstep in csteps:
        for ax in cstep.completed:
            if ax not in completed_union_raw:
                completed_union_raw.append(ax)
    weakened_union = prune_redundant(weakened_union_raw) if prune else tuple(weakened_union_raw)
    completed_union = prune_redundant(completed_union_raw) if prune else tuple(completed_union_raw)

    verification = verify_repair(t, wrong, final, oracle)

    return RunReport(
        strategy=spec.label,
        spec=spec,
        initial=t,
        wrong=wrong,
        processing_order=indices,
        pool_mode=pool.mode,
        equiv_exclude=equiv_exclude,
        prune=prune,
        seed=seed,
        weakening_steps=tuple(wsteps),
        completion_steps=tuple(csteps),
        weakened_union=weakened_union,
        completed_union=completed_union,
        removed=wrong,
        added=added,
        final=final,
        queries_distinct=oracle.distinct_count,
        repair_valid=verification.valid,
    )


# ---------------------------------------------------------------------------
# Verification and comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationResult:
    valid: bool
    failures: tuple[str, ...]
    added: tuple[Axiom, ...]
    removed: tuple[Axiom, ...]


def verify_repair(
    initial: TBox,
    wrong: Sequence[Axiom],
    final: TBox,
    source: AnswerSource | RecordingOracle,
) -> VerificationResult:
    """Recompute, from scratch, whether ``final`` repairs the problem.

    Checks both halves of the contract: every added axiom is endorsed by
    the oracle, and no wrong axiom is derivable from the final TBox.
    """
    oracle = source if isinstance(source, RecordingOracle) else RecordingOracle(source)
    previous = oracle.context
    oracle.context = QuestionContext(kind="verification")
    failures: list[str] = []
    base = remove_axioms(initial, wrong)
    added = tuple(ax for ax in final.axioms if ax not in base)
    try:
        for ax in added:
            if not oracle.judge(ax):
                failures.append(f"added axiom judged false: {render_axiom(ax)}")
    finally:
        oracle.context = previous
    for psi in wrong:
        if entails(final, psi):
            failures.append(f"wrong axiom still derivable: {render_axiom(psi)}")
    return VerificationResult(
        valid=not failures,
        failures=tuple(failures),
        added=added,
        removed=tuple(wrong),
    )


@dataclass(frozen=True)
class ComparisonResult:
    """How two TBoxes relate on a probe set, judged against an oracle.

    ``incorrectness`` compares the sets of entailed-but-false probes;
    ``completeness`` compares the sets of entailed-and-true probes.  Both
    verdicts are from the first TBox's point of view: "less", "more",
    "equal" or "incomparable".
    """

    incorrectness: str
    completeness: str
    probe_size: int
    incorrect_left: tuple[Axiom, ...]
    incorrect_right: tuple[Axiom, ...]
    correct_left: tuple[Axiom, ...]
    correct_right: tuple[Axiom, ...]


def _set_verdict(left: frozenset, right: frozenset, smaller: str, larger: str) -> str:
    if left == right:
        return "equal"
    if left < right:
        return smaller
    if left > right:
        return larger
    return "incomparable"


def default_probe(*tboxes: TBox) -> tuple[Axiom, ...]:
    """All atomic inclusions over the union signature, in signature order."""
    names: list[str] = []
    seen: set[str] = set()
    for t in tboxes:
        for n in t.concept_names:
            if n not in seen:
                seen.add(n)
                names.append(n)
    return tuple(Axiom(Atom(a), Atom(b)) for a in names for b in names)


def compare_ontologies(
    left: TBox,
    right: TBox,
    source: AnswerSource | RecordingOracle,
    probe: Sequence[Axiom] | None = None,
) -> ComparisonResult:
    oracle = source if isinstance(source, RecordingOracle) else RecordingOracle(source)
    probes = tuple(probe) if probe is not None else default_probe(left, right)
    previous = oracle.context
    oracle.context = QuestionContext(kind="comparison")
    try:
        truth = {p: oracle.judge(p) for p in probes}
    finally:
        oracle.context = previous
    ent_left = [p for p in probes if entails(left, p)]
    ent_right = [p for p in probes if entails(right, p)]
    inc_left = tuple(p for p in ent_left if not truth[p])
    inc_right = tuple(p for p in ent_right if not truth[p])
    cor_left = tuple(p for p in ent_left if truth[p])
    cor_right = tuple(p for p in ent_right if truth[p])
    return ComparisonResult(
        incorrectness=_set_verdict(frozenset(inc_left), frozenset(inc_right), "less", "more"),
        completeness=_set_verdict(frozenset(cor_left), frozenset(cor_right), "less", "more"),
        probe_size=len(probes),
        incorrect_left=inc_left,
        incorrect_right=inc_right,
        correct_left=cor_left,
        correct_right=cor_right,
    )
