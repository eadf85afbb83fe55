"""Built-in demonstration problem and seeded random problem generators.

The demo terminology is a nine-concept, one-role medical toy hierarchy
with three deliberately wrong axioms (two reversed inclusions and one
over-commitment), plus an answer table for the intended domain.  All of
the worked examples in the tests run against it.

The generators produce arbitrarily many repair problems from a seed:
they first draw a random ground-truth hierarchy (a DAG closed under
transitivity), then emit an ontology mixing correct edges with wrong
ones, so every generated problem satisfies the repair preconditions by
construction and a consistent oracle exists.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .eltext import parse_axiom_lines, parse_tbox
from .model import TOP, And, Atom, Axiom, Some, TBox
from .oracle import DeclarativeOracle

# ---------------------------------------------------------------------------
# Built-in demo problem
# ---------------------------------------------------------------------------

MINI_GALEN_ONTOLOGY = """\
# Demonstration terminology: nine concepts, one role, nine axioms.
concept GPr
concept CVD
concept PPh
concept F
concept E
concept C
concept IPr
concept PPr
concept NPr
role hAPr

CVD SubClassOf PPh
F SubClassOf PPh
(some hAPr PPr) SubClassOf PPh
E SubClassOf C
E SubClassOf (some hAPr IPr)
GPr SubClassOf NPr
PPr SubClassOf IPr
IPr SubClassOf GPr
E SubClassOf PPr
"""

MINI_GALEN_WRONG = """\
# The three axioms known to be wrong, in their canonical order.
PPr SubClassOf IPr
IPr SubClassOf GPr
E SubClassOf PPr
"""

MINI_GALEN_ORACLE = """\
# Intended domain: GPr below IPr below PPr below NPr (the ontology has
# two of those inclusions reversed), E not a PPr.
default: false
closure: reflexive
closure: constructors
true: GPr SubClassOf IPr
true: GPr SubClassOf PPr
true: GPr SubClassOf NPr
true: IPr SubClassOf PPr
true: IPr SubClassOf NPr
true: PPr SubClassOf NPr
true: CVD SubClassOf PPh
true: F SubClassOf PPh
true: E SubClassOf PPh
true: E SubClassOf C
true: E SubClassOf CVD
true: C SubClassOf PPh
true: C SubClassOf CVD
true: (some hAPr PPr) SubClassOf PPh
true: (some hAPr IPr) SubClassOf PPh
true: E SubClassOf (some hAPr IPr)
true: E SubClassOf (some hAPr PPh)
"""

FIXTURES = {
    "mini-galen": {
        "ontology": MINI_GALEN_ONTOLOGY,
        "wrong": MINI_GALEN_WRONG,
        "oracle": MINI_GALEN_ORACLE,
    },
}


def fixture_texts(name: str) -> dict[str, str]:
    got = FIXTURES.get(name)
    if got is None:
        raise KeyError(f"unknown fixture {name!r} (have: {', '.join(sorted(FIXTURES))})")
    return dict(got)


def mini_galen_tbox() -> TBox:
    t, _ = parse_tbox(MINI_GALEN_ONTOLOGY)
    return t


def mini_galen_wrong() -> tuple[Axiom, ...]:
    axioms, _ = parse_axiom_lines(MINI_GALEN_WRONG)
    return axioms


def mini_galen_oracle() -> DeclarativeOracle:
    return DeclarativeOracle.from_text(MINI_GALEN_ORACLE)


def mini_galen_problem() -> tuple[TBox, tuple[Axiom, ...], DeclarativeOracle]:
    return mini_galen_tbox(), mini_galen_wrong(), mini_galen_oracle()


# ---------------------------------------------------------------------------
# Seeded random repair problems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratedProblem:
    """A random repair problem with a consistent ground truth."""

    tbox: TBox
    wrong: tuple[Axiom, ...]
    truth: frozenset[Axiom]          # the oracle's full atomic true-set
    seed: int

    def oracle(self) -> DeclarativeOracle:
        """Fresh answer source for this problem (memoization not shared)."""
        return DeclarativeOracle(self.truth, reflexive=True, constructors=True)


def _transitive_closure(pairs: set[tuple[int, int]], n: int) -> set[tuple[int, int]]:
    reach = {i: {j for (a, j) in pairs if a == i} for i in range(n)}
    changed = True
    while changed:
        changed = False
        for i in range(n):
            extra = set()
            for j in reach[i]:
                extra |= reach[j] - reach[i]
            if extra:
                reach[i] |= extra
                changed = True
    return {(i, j) for i in range(n) for j in reach[i]}


def random_problem(
    seed: int,
    *,
    max_concepts: int = 10,
    max_wrong: int = 3,
) -> GeneratedProblem:
    """A repair problem whose preconditions hold by construction.

    The ground truth is the transitive closure of a random DAG over the
    concept names; the ontology mixes a subset of the true edges with
    one to ``max_wrong`` axioms chosen outside the closure.  Removing the
    wrong axioms leaves only true edges, so no wrong axiom stays
    derivable, and the closure itself is the oracle's true-set.
    """
    rng = random.Random(seed)
    n = rng.randint(5, max_concepts)
    names = [f"N{i:02d}" for i in range(n)]
    edges: set[tuple[int, int]] = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.30:
                edges.add((i, j))
    closure = _transitive_closure(edges, n)

    correct = [e for e in sorted(edges) if rng.random() < 0.8]
    non_true = [
        (i, j)
        for i in range(n)
        for j in range(n)
        if i != j and (i, j) not in closure
    ]
    k = rng.randint(1, max_wrong)
    wrong_pairs = rng.sample(non_true, min(k, len(non_true))) if non_true else []
    if not wrong_pairs:  # fully connected closure; force a reversed edge
        i, j = sorted(closure)[0]
        wrong_pairs = [(j, i)]

    def ax(pair: tuple[int, int]) -> Axiom:
        return Axiom(Atom(names[pair[0]]), Atom(names[pair[1]]))

    axioms = [ax(p) for p in correct] + [ax(p) for p in wrong_pairs]
    rng.shuffle(axioms)
    wrong_axioms = [ax(p) for p in wrong_pairs]
    rng.shuffle(wrong_axioms)
    t = TBox(axioms, concept_names=names)
    truth = frozenset(ax(p) for p in sorted(closure))
    return GeneratedProblem(t, tuple(wrong_axioms), truth, seed)


# ---------------------------------------------------------------------------
# Seeded random TBoxes (no repair semantics; reasoner exercise material)
# ---------------------------------------------------------------------------


def random_edge_tbox(seed: int, *, max_concepts: int = 15) -> TBox:
    """Random atomic-edge TBox; cycles allowed, so equivalences arise."""
    rng = random.Random(seed)
    n = rng.randint(2, max_concepts)
    names = [f"N{i:02d}" for i in range(n)]
    axioms = []
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < 0.15:
                axioms.append(Axiom(Atom(names[i]), Atom(names[j])))
    return TBox(axioms, concept_names=names)


def random_normalized_tbox(
    seed: int, *, max_concepts: int = 8, max_roles: int = 2
) -> TBox:
    """Random TBox using all four basic axiom shapes."""
    rng = random.Random(seed)
    n = rng.randint(3, max_concepts)
    r = rng.randint(1, max_roles)
    names = [f"N{i:02d}" for i in range(n)]
    roles = [f"r{i}" for i in range(r)]
    atoms = [Atom(x) for x in names]

    def atom() -> Atom:
        return atoms[rng.randrange(n)]

    axioms = []
    for _ in range(rng.randint(3, 2 * n)):
        shape = rng.randrange(4)
        if shape == 0:
            axioms.append(Axiom(atom(), atom()))
        elif shape == 1:
            axioms.append(Axiom(And(atom(), atom()), atom()))
        elif shape == 2:
            axioms.append(Axiom(Some(roles[rng.randrange(r)], atom()), atom()))
        else:
            axioms.append(Axiom(atom(), Some(roles[rng.randrange(r)], atom())))
    return TBox(axioms, concept_names=names, role_names=roles)


def random_concept(rng: random.Random, atoms: list[Atom], roles: list[str], depth: int):
    """Random possibly-nested concept; Top appears occasionally."""
    roll = rng.random()
    if depth <= 0 or roll < 0.45:
        return atoms[rng.randrange(len(atoms))]
    if roll < 0.50:
        return TOP
    if roll < 0.75:
        return And(
            random_concept(rng, atoms, roles, depth - 1),
            random_concept(rng, atoms, roles, depth - 1),
        )
    return Some(
        roles[rng.randrange(len(roles))],
        random_concept(rng, atoms, roles, depth - 1),
    )


def random_nested_tbox(seed: int, *, max_concepts: int = 6) -> TBox:
    """Random TBox with nested conjunctions/existentials on both sides."""
    rng = random.Random(seed)
    n = rng.randint(3, max_concepts)
    names = [f"N{i:02d}" for i in range(n)]
    roles = ["r0", "r1"]
    atoms = [Atom(x) for x in names]
    axioms = []
    for _ in range(rng.randint(2, 6)):
        axioms.append(
            Axiom(
                random_concept(rng, atoms, roles, 2),
                random_concept(rng, atoms, roles, 2),
            )
        )
    return TBox(axioms, concept_names=names, role_names=roles)
