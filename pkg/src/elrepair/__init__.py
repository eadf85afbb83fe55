"""Repair toolkit for EL ontologies with known-wrong axioms.

The package removes a set of axioms flagged as wrong, then interrogates a
domain oracle to weaken the removed statements into their strongest
acceptable forms and to complete the remainder with further facts the
oracle endorses.  Thirteen strategy compositions (C1..C13) vary when the
working ontology absorbs accepted axioms and how much context each
question is generated against.

Layers, bottom up:

- :mod:`elrepair.model` — concept/axiom terms, TBoxes, normalization
- :mod:`elrepair.eltext` — the ``.elt`` text format (parse/serialize)
- :mod:`elrepair.reasoner` — saturation-based entailment and concept pools
- :mod:`elrepair.oracle` — oracle protocols, recording, compatibility checks
- :mod:`elrepair.engine` — weakening/completing runs and strategy execution
- :mod:`elrepair.fixtures` — the built-in worked example and seeded generators
- :mod:`elrepair.report` — plain-text run reports
- :mod:`elrepair.checks` — cross-strategy consistency checks
- :mod:`elrepair.cli` / :mod:`elrepair.service` — command line and HTTP front ends
"""

from .engine import (
    ComparisonResult,
    CompletionStep,
    PreconditionError,
    RunReport,
    StrategySpec,
    STRATEGIES,
    VerificationResult,
    WeakeningStep,
    check_problem,
    compare_ontologies,
    completed_axiom_set,
    prune_redundant,
    run_strategy,
    strategy_spec,
    verify_repair,
    weakened_axiom_set,
)
from .eltext import (
    OracleSpec,
    ParseError,
    parse_axiom,
    parse_concept,
    parse_oracle,
    parse_tbox,
    serialize_oracle,
    serialize_tbox,
)
from .model import (
    And,
    Atom,
    Axiom,
    Concept,
    ShapeError,
    Some,
    TBox,
    Top,
    TOP,
    add_axioms,
    normalize_axiom,
    normalize_tbox,
    remove_axioms,
    render_axiom,
    render_concept,
)
from .oracle import (
    DeclarativeOracle,
    PendingAnswer,
    QueryRecord,
    QuestionContext,
    RecordingOracle,
    ScriptedOracle,
    ValidationWarning,
    check_compatibility,
)
from .reasoner import (
    ATOMIC_POOL,
    ConceptPool,
    SIMPLE_POOL,
    entails,
    pool_from_name,
    saturate,
    simple_concepts,
    subconcepts,
    superconcepts,
)

__version__ = "0.1.0"

__all__ = [
    "And",
    "Atom",
    "ATOMIC_POOL",
    "Axiom",
    "ComparisonResult",
    "CompletionStep",
    "Concept",
    "ConceptPool",
    "DeclarativeOracle",
    "OracleSpec",
    "ParseError",
    "PendingAnswer",
    "PreconditionError",
    "QueryRecord",
    "QuestionContext",
    "RecordingOracle",
    "RunReport",
    "ScriptedOracle",
    "ShapeError",
    "SIMPLE_POOL",
    "Some",
    "STRATEGIES",
    "StrategySpec",
    "TBox",
    "Top",
    "TOP",
    "ValidationWarning",
    "VerificationResult",
    "WeakeningStep",
    "add_axioms",
    "check_compatibility",
    "check_problem",
    "compare_ontologies",
    "completed_axiom_set",
    "entails",
    "normalize_axiom",
    "normalize_tbox",
    "parse_axiom",
    "parse_concept",
    "parse_oracle",
    "parse_tbox",
    "pool_from_name",
    "prune_redundant",
    "remove_axioms",
    "render_axiom",
    "render_concept",
    "run_strategy",
    "saturate",
    "serialize_oracle",
    "serialize_tbox",
    "simple_concepts",
    "strategy_spec",
    "subconcepts",
    "superconcepts",
    "verify_repair",
    "weakened_axiom_set",
]
