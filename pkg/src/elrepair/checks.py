"""Cross-strategy consistency checks.

The strategy compositions stand in provable relations to each other:
generating candidates against a larger TBox can only enlarge candidate
ranges, and immediate updates can only add derivable knowledge compared
to deferred ones.  Each check below runs two related configurations on
the same problem and asserts the corresponding containment; violations
come back as human-readable strings (empty means the family holds).

These power the ``hasse-check`` command and the acceptance tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .engine import (
    RunReport,
    StrategySpec,
    default_probe,
    run_strategy,
)
from .fixtures import GeneratedProblem, mini_galen_problem, random_problem
from .model import Axiom, TBox, remove_axioms, render_axiom
from .oracle import AnswerSource, RecordingOracle
from .reasoner import entails


@dataclass(frozen=True)
class CheckResult:
    name: str
    cases: int
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class Problem:
    """One repair problem plus a factory for fresh answer sources."""

    label: str
    tbox: TBox
    wrong: tuple[Axiom, ...]
    source_factory: Callable[[], AnswerSource]

    def fresh_oracle(self) -> RecordingOracle:
        return RecordingOracle(self.source_factory())


def problem_corpus(count: int, seed: int) -> list[Problem]:
    """The built-in demo problem plus ``count`` generated ones."""
    t, w, _ = mini_galen_problem()
    corpus = [Problem("mini-galen", t, w, lambda: mini_galen_problem()[2])]
    for i in range(count):
        gp: GeneratedProblem = random_problem(seed + i)
        corpus.append(Problem(f"random-{gp.seed}", gp.tbox, gp.wrong, gp.oracle))
    return corpus


def _entailed(t: TBox, probe: Sequence[Axiom]) -> frozenset[Axiom]:
    return frozenset(p for p in probe if entails(t, p))


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


def check_entailment_monotone(problems: Sequence[Problem]) -> CheckResult:
    """A sub-TBox never entails a probe its superset misses."""
    violations: list[str] = []
    cases = 0
    for p in problems:
        smaller = remove_axioms(p.tbox, p.wrong)
        probe = default_probe(p.tbox)
        pairs = [
            (smaller, p.tbox),
            (TBox(smaller.axioms[: len(smaller.axioms) // 2],
                  concept_names=smaller.concept_names,
                  role_names=smaller.role_names), smaller),
        ]
        for t1, t2 in pairs:
            cases += 1
            missing = _entailed(t1, probe) - _entailed(t2, probe)
            for ax in sorted(render_axiom(a) for a in missing):
                violations.append(
                    f"{p.label}: subset entails {ax} but superset does not")
    return CheckResult("entailment-monotone", cases, tuple(violations))


def _candidate_pair(problems: Sequence[Problem], big: str, small: str,
                    violations: list[str]) -> int:
    cases = 0
    for p in problems:
        cases += 1
        r_big = run_strategy(p.tbox, p.wrong, p.fresh_oracle(), big)
        r_small = run_strategy(p.tbox, p.wrong, p.fresh_oracle(), small)
        for i in range(1, len(p.wrong) + 1):
            cand_big = set(r_big.weakening_step_for(i).candidates)
            cand_small = set(r_small.weakening_step_for(i).candidates)
            if not cand_small <= cand_big:
                extra = ", ".join(sorted(
                    render_axiom(a) for a in cand_small - cand_big))
                violations.append(
                    f"{p.label}: {small} wrong {i} candidates not within {big}: {extra}")
        if r_big.queries_distinct < r_small.queries_distinct:
            violations.append(
                f"{p.label}: {big} asked {r_big.queries_distinct} distinct "
                f"questions, fewer than {small}'s {r_small.queries_distinct}")
    return cases


def check_candidate_monotone(problems: Sequence[Problem]) -> CheckResult:
    """Keeping unprocessed wrong axioms around only widens candidate ranges.

    C1 generates against TBoxes whose other wrong axioms are still in;
    C3 against the fully reduced TBox — so C3's candidate set for each
    wrong axiom is contained in C1's, and C1 asks at least as many
    distinct questions.  Same for C2 versus C4.
    """
    violations: list[str] = []
    cases = _candidate_pair(problems, "C1", "C3", violations)
    cases += _candidate_pair(problems, "C2", "C4", violations)
    return CheckResult("candidate-monotone", cases, tuple(violations))


def check_immediate_update_dominates(problems: Sequence[Problem]) -> CheckResult:
    """Immediate completion updates never lose derivable knowledge.

    C10 is C9 with completions fed back immediately; everything the C9
    repair derives, the C10 repair derives too.
    """
    violations: list[str] = []
    cases = 0
    for p in problems:
        cases += 1
        r9 = run_strategy(p.tbox, p.wrong, p.fresh_oracle(), "C9")
        r10 = run_strategy(p.tbox, p.wrong, p.fresh_oracle(), "C10")
        probe = default_probe(p.tbox)
        missing = _entailed(r9.final, probe) - _entailed(r10.final, probe)
        for ax in sorted(render_axiom(a) for a in missing):
            violations.append(f"{p.label}: C9 repair entails {ax}, C10 repair does not")
    return CheckResult("immediate-update-dominates", cases, tuple(violations))


def check_update_timing_identity(problems: Sequence[Problem]) -> CheckResult:
    """Per-axiom weakening makes "update now" and "update after each" equal.

    With one weakened set per wrong axiom there is nothing between the
    computation and the end of its iteration, so the two update policies
    must produce identical runs: same weakened sets, same question log,
    same final TBox.
    """
    now = StrategySpec("w-now", weaken_removal="all", weaken_add_back="none",
                       weaken_update="now")
    end_one = StrategySpec("w-end-one", weaken_removal="all", weaken_add_back="none",
                           weaken_update="end_one")
    violations: list[str] = []
    cases = 0
    for p in problems:
        cases += 1
        r1 = run_strategy(p.tbox, p.wrong, p.fresh_oracle(), now)
        r2 = run_strategy(p.tbox, p.wrong, p.fresh_oracle(), end_one)
        if r1.final.axioms != r2.final.axioms:
            violations.append(f"{p.label}: final TBoxes differ")
        for i in range(1, len(p.wrong) + 1):
            w1 = r1.weakening_step_for(i).weakened
            w2 = r2.weakening_step_for(i).weakened
            if w1 != w2:
                violations.append(f"{p.label}: weakened sets differ for wrong {i}")
        if [s.candidates for s in r1.weakening_steps] != \
                [s.candidates for s in r2.weakening_steps]:
            violations.append(f"{p.label}: question sequences differ")
    return CheckResult("update-timing-identity", cases, tuple(violations))


def check_completion_update_chain(problems: Sequence[Problem]) -> CheckResult:
    """Earlier completion updates derive at least as much as later ones."""
    base = dict(weaken_removal="one", weaken_add_back="one",
                weaken_update="end_all", completing=True, complete_removal="all")
    chain = [
        StrategySpec("c-now", complete_update="now", **base),
        StrategySpec("c-end-one", complete_update="end_one", **base),
        StrategySpec("c-end-all", complete_update="end_all", **base),
    ]
    violations: list[str] = []
    cases = 0
    for p in problems:
        cases += 1
        finals = [run_strategy(p.tbox, p.wrong, p.fresh_oracle(), s).final
                  for s in chain]
        probe = default_probe(p.tbox)
        sets = [_entailed(f, probe) for f in finals]
        for earlier, later, a, b in ((0, 1, "now", "end_one"), (1, 2, "end_one", "end_all")):
            missing = sets[later] - sets[earlier]
            for ax in sorted(render_axiom(x) for x in missing):
                violations.append(
                    f"{p.label}: update={b} repair entails {ax}, update={a} does not")
    return CheckResult("completion-update-chain", cases, tuple(violations))


ALL_CHECKS = (
    check_entailment_monotone,
    check_candidate_monotone,
    check_immediate_update_dominates,
    check_update_timing_identity,
    check_completion_update_chain,
)


def run_all_checks(problem_count: int, seed: int) -> list[CheckResult]:
    problems = problem_corpus(problem_count, seed)
    return [check(problems) for check in ALL_CHECKS]


def render_check_results(results: Sequence[CheckResult]) -> str:
    lines = []
    for res in results:
        status = "ok" if res.ok else f"{len(res.violations)} violations"
        lines.append(f"check {res.name}: {status} (cases={res.cases})")
        for v in res.violations:
            lines.append(f"  ! {v}")
    return "\n".join(lines) + "\n"
