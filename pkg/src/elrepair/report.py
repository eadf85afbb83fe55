"""Stable text rendering of run results.

The format is line-oriented ``key: value`` with two list styles: inline
``[a, b]`` for size vectors and indented ``  - item`` blocks for axiom
lists.  Field order is fixed and no filesystem paths appear, so two runs
with the same inputs render byte-identically no matter where they ran
(command line or service).
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .engine import ComparisonResult, RunReport
from .model import Axiom, render_axiom


def _ints(values: Iterable[int]) -> str:
    return "[" + ", ".join(str(v) for v in values) + "]"


def _inline_axioms(axioms: Iterable[Axiom]) -> str:
    return "[" + ", ".join(render_axiom(a) for a in axioms) + "]"


def _axiom_block(key: str, axioms: Sequence[Axiom]) -> list[str]:
    if not axioms:
        return [f"{key}: []"]
    return [f"{key}:"] + [f"  - {render_axiom(a)}" for a in axioms]


def render_report(r: RunReport) -> str:
    lines: list[str] = []
    lines.append(f"strategy: {r.strategy}")
    lines.append(f"order: {_ints(r.processing_order)}")
    lines.append(f"pool: {r.pool_mode}")
    lines.append(f"equiv_exclude: {'on' if r.equiv_exclude else 'off'}")
    lines.append(f"prune: {'on' if r.prune else 'off'}")
    lines.append(f"seed: {r.seed}")
    lines.extend(_axiom_block("wrong", r.wrong))
    lines.append(f"sup_sizes: {_ints(r.sup_sizes)}")
    lines.append(f"sub_sizes: {_ints(r.sub_sizes)}")
    lines.append("weakened_sets:")
    for i in range(1, len(r.wrong) + 1):
        step = r.weakening_step_for(i)
        lines.append(f"  - wrong {i}: {_inline_axioms(step.weakened)}")
    lines.extend(_axiom_block("weakened", r.weakened_union))
    lines.append(f"completion_sup_sizes: {_ints(r.completion_sup_sizes)}")
    lines.append(f"completion_sub_sizes: {_ints(r.completion_sub_sizes)}")
    lines.append(f"source_sizes: {_ints(r.source_sizes)}")
    lines.append(f"target_sizes: {_ints(r.target_sizes)}")
    if r.completion_steps:
        lines.append("completed_sets:")
        for step in r.completion_steps:
            lines.append(
                f"  - wrong {step.identity_index} seed "
                f"{render_axiom(step.seed_axiom)}: {_inline_axioms(step.completed)}")
    else:
        lines.append("completed_sets: []")
    lines.extend(_axiom_block("completed", r.completed_union))
    lines.extend(_axiom_block("removed", r.removed))
    lines.extend(_axiom_block("added", r.added))
    lines.append(f"queries_distinct: {r.queries_distinct}")
    lines.append(f"repair_valid: {'true' if r.repair_valid else 'false'}")
    lines.extend(_axiom_block("final_axioms", tuple(r.final.axioms)))
    return "\n".join(lines) + "\n"


def render_permutation_reports(reports: Sequence[RunReport]) -> str:
    blocks = [render_report(r) for r in reports]
    head = f"permutations: {len(reports)}\n"
    return head + "---\n" + "---\n".join(blocks)


def render_comparison(c: ComparisonResult) -> str:
    lines = [
        f"probe_size: {c.probe_size}",
        f"incorrectness: {c.incorrectness}",
        f"completeness: {c.completeness}",
    ]
    lines.extend(_axiom_block("incorrect_left", c.incorrect_left))
    lines.extend(_axiom_block("incorrect_right", c.incorrect_right))
    lines.append(f"correct_left_count: {len(c.correct_left)}")
    lines.append(f"correct_right_count: {len(c.correct_right)}")
    return "\n".join(lines) + "\n"
