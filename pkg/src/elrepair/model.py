"""Core model for EL terminologies.

Concepts are built from atomic names, the universal concept Top, binary
conjunction and existential restriction.  An axiom is a general concept
inclusion ``lhs SubClassOf rhs``; a TBox is an ordered, duplicate-free
sequence of axioms together with a signature (concept and role names).

The module also provides normalization: every axiom whose sides are
"simple" concepts (atomic, a conjunction of two atoms, or an existential
restriction over an atom) can be rewritten into the four basic shapes

    P SubClassOf Q
    P1 and P2 SubClassOf Q
    some r.P SubClassOf Q
    P SubClassOf some r.Q

introducing fresh definitional names where needed, and a whole TBox with
arbitrarily nested concepts can be flattened the same way.  Fresh names
are derived from the concept they stand for (``Q-AND-R``, ``r-SOME-Q``)
so that normalization is reproducible run over run.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

NAME_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")

# Concept names containing these infixes collide with generated
# definitional names; parsers warn when user input uses them.
RESERVED_INFIXES = ("-AND-", "-SOME-")


class ShapeError(ValueError):
    """An axiom or concept does not have the shape an operation requires."""


# ---------------------------------------------------------------------------
# Concepts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Top:
    """The universal concept."""

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return "Top"


TOP = Top()


@dataclass(frozen=True)
class Atom:
    """An atomic concept name."""

    name: str

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Atom({self.name!r})"


@dataclass(frozen=True, init=False)
class And:
    """Conjunction of two concepts, stored in canonical (rendered) order.

    ``And(a, b)`` and ``And(b, a)`` construct the same value, so axiom and
    TBox equality is insensitive to the order conjuncts were written in.
    """

    left: "Concept"
    right: "Concept"

    def __init__(self, left: "Concept", right: "Concept") -> None:
        if render_concept(right) < render_concept(left):
            left, right = right, left
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)


@dataclass(frozen=True)
class Some:
    """Existential restriction ``some role.filler``."""

    role: str
    filler: "Concept"


Concept = Union[Top, Atom, And, Some]


def render_concept(c: Concept) -> str:
    """Canonical text form of a concept (also used as its ordering key)."""
    if isinstance(c, Atom):
        return c.name
    if isinstance(c, Top):
        return "Top"
    if isinstance(c, And):
        return f"({render_concept(c.left)} and {render_concept(c.right)})"
    if isinstance(c, Some):
        return f"(some {c.role} {render_concept(c.filler)})"
    raise TypeError(f"not a concept: {c!r}")


def is_atomic(c: Concept) -> bool:
    return isinstance(c, Atom)


def is_atom_like(c: Concept) -> bool:
    """Atomic or Top — the things allowed in atom positions of basic shapes."""
    return isinstance(c, (Atom, Top))


def is_simple(c: Concept) -> bool:
    """Atomic, a conjunction of two atoms, or an existential over an atom.

    These are the concepts eligible as candidate sides during repair; Top
    is deliberately excluded.
    """
    if isinstance(c, Atom):
        return True
    if isinstance(c, And):
        return is_atomic(c.left) and is_atomic(c.right)
    if isinstance(c, Some):
        return is_atomic(c.filler)
    return False


def concept_names_in(c: Concept) -> Iterator[str]:
    if isinstance(c, Atom):
        yield c.name
    elif isinstance(c, And):
        yield from concept_names_in(c.left)
        yield from concept_names_in(c.right)
    elif isinstance(c, Some):
        yield from concept_names_in(c.filler)


def role_names_in(c: Concept) -> Iterator[str]:
    if isinstance(c, And):
        yield from role_names_in(c.left)
        yield from role_names_in(c.right)
    elif isinstance(c, Some):
        yield c.role
        yield from role_names_in(c.filler)


# ---------------------------------------------------------------------------
# Axioms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Axiom:
    """A general concept inclusion ``lhs SubClassOf rhs``."""

    lhs: Concept
    rhs: Concept

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Axiom({render_axiom(self)!r})"


def render_axiom(ax: Axiom) -> str:
    return f"{render_concept(ax.lhs)} SubClassOf {render_concept(ax.rhs)}"


def is_normalized(ax: Axiom) -> bool:
    """True iff the axiom is one of the four basic shapes."""
    lhs, rhs = ax.lhs, ax.rhs
    if is_atom_like(rhs):
        if is_atom_like(lhs):
            return True
        if isinstance(lhs, And):
            return is_atom_like(lhs.left) and is_atom_like(lhs.right)
        if isinstance(lhs, Some):
            return is_atom_like(lhs.filler)
        return False
    if isinstance(rhs, Some) and is_atom_like(rhs.filler):
        return is_atom_like(lhs)
    return False


# ---------------------------------------------------------------------------
# TBoxes
# ---------------------------------------------------------------------------


def _dedup(items: Iterable[str]) -> tuple[str, ...]:
    seen: set[str] = set()
    out: list[str] = []
    for it in items:
        if it not in seen:
            seen.add(it)
            out.append(it)
    return tuple(out)


class TBox:
    """An ordered, duplicate-free sequence of axioms plus a signature.

    Duplicate axioms collapse keeping the first occurrence.  The signature
    always contains every concept/role name occurring in the axioms;
    explicitly declared names come first, in declaration order.  Axiom
    insertion order is part of the value; signature order is kept for
    deterministic iteration but compares as a set.
    """

    __slots__ = ("axioms", "concept_names", "role_names", "_axiom_set",
                 "_fingerprint", "_normal")

    def __init__(
        self,
        axioms: Iterable[Axiom] = (),
        concept_names: Iterable[str] = (),
        role_names: Iterable[str] = (),
    ) -> None:
        seen: set[Axiom] = set()
        kept: list[Axiom] = []
        for ax in axioms:
            if ax not in seen:
                seen.add(ax)
                kept.append(ax)
        cn = list(concept_names)
        rn = list(role_names)
        for ax in kept:
            for side in (ax.lhs, ax.rhs):
                cn.extend(concept_names_in(side))
                rn.extend(role_names_in(side))
        self.axioms: tuple[Axiom, ...] = tuple(kept)
        self.concept_names: tuple[str, ...] = _dedup(cn)
        self.role_names: tuple[str, ...] = _dedup(rn)
        self._axiom_set = seen
        self._fingerprint: str | None = None
        self._normal: bool | None = None

    # -- container protocol ------------------------------------------------

    def __iter__(self) -> Iterator[Axiom]:
        return iter(self.axioms)

    def __len__(self) -> int:
        return len(self.axioms)

    def __contains__(self, ax: object) -> bool:
        return ax in self._axiom_set

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TBox):
            return NotImplemented
        return (
            self.axioms == other.axioms
            and set(self.concept_names) == set(other.concept_names)
            and set(self.role_names) == set(other.role_names)
        )

    def __hash__(self) -> int:
        return hash((self.axioms, frozenset(self.concept_names),
                     frozenset(self.role_names)))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"TBox({len(self.axioms)} axioms, {len(self.concept_names)} concepts)"

    # -- derived attributes ------------------------------------------------

    @property
    def fingerprint(self) -> str:
        """Order-insensitive digest of the axiom set (signature excluded)."""
        if self._fingerprint is None:
            payload = "\n".join(sorted(render_axiom(a) for a in self.axioms))
            self._fingerprint = hashlib.sha256(payload.encode()).hexdigest()
        return self._fingerprint

    @property
    def all_normalized(self) -> bool:
        if self._normal is None:
            self._normal = all(is_normalized(a) for a in self.axioms)
        return self._normal


def remove_axioms(t: TBox, remove: Iterable[Axiom]) -> TBox:
    """TBox without the given axioms; order and signature are preserved."""
    drop = set(remove)
    return TBox(
        (a for a in t.axioms if a not in drop),
        concept_names=t.concept_names,
        role_names=t.role_names,
    )


def add_axioms(t: TBox, add: Iterable[Axiom]) -> TBox:
    """TBox with the given normalized axioms appended (duplicates skipped).

    Raises ShapeError if any added axiom is not in one of the four basic
    shapes; everything the repair algorithms add has been normalized first,
    so a violation here is a programming error worth failing loudly on.
    """
    additions = list(add)
    for ax in additions:
        if not is_normalized(ax):
            raise ShapeError(f"cannot add non-basic axiom: {render_axiom(ax)}")
    return TBox(
        list(t.axioms) + additions,
        concept_names=t.concept_names,
        role_names=t.role_names,
    )


# ---------------------------------------------------------------------------
# Fresh definitional names
# ---------------------------------------------------------------------------


class FreshNameGenerator:
    """Deterministic supply of definitional concept names.

    Names are derived from the concept they define (``Q-AND-R`` for a
    conjunction, ``r-SOME-Q`` for an existential, composed recursively for
    nested operands).  If a derived name is already taken by something
    else, numeric suffixes ``-2``, ``-3``, ... disambiguate.  Asking twice
    for the same concept returns the same name.
    """

    def __init__(self, taken: Iterable[str] = ()) -> None:
        self._taken: set[str] = set(taken)
        self._assigned: dict[Concept, str] = {}

    def name_for(self, concept: Concept) -> str:
        got = self._assigned.get(concept)
        if got is not None:
            return got
        base = self._derived(concept)
        name = base
        k = 2
        while name in self._taken:
            name = f"{base}-{k}"
            k += 1
        self._taken.add(name)
        self._assigned[concept] = name
        return name

    def _derived(self, c: Concept) -> str:
        if isinstance(c, And):
            return f"{self._part(c.left)}-AND-{self._part(c.right)}"
        if isinstance(c, Some):
            return f"{c.role}-SOME-{self._part(c.filler)}"
        raise ShapeError(f"no fresh name needed for {render_concept(c)}")

    def _part(self, c: Concept) -> str:
        if isinstance(c, Atom):
            return c.name
        if isinstance(c, Top):
            return "Top"
        return self._derived(c)


def generator_for(t: TBox) -> FreshNameGenerator:
    """Fresh-name generator that avoids every name in the TBox signature."""
    return FreshNameGenerator(tuple(t.concept_names) + tuple(t.role_names))


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------


def normalize_axiom(ax: Axiom, gen: FreshNameGenerator) -> tuple[Axiom, ...]:
    """Rewrite one axiom with simple sides into basic shapes.

    The case split:

    * rhs atomic — already basic, returned as is;
    * rhs a conjunction — split into one inclusion per conjunct;
    * rhs existential, lhs atomic — already basic;
    * rhs existential, lhs existential ``some r.P`` — introduce a fresh Z
      equivalent to the lhs: ``{lhs SubClassOf Z, Z SubClassOf lhs,
      Z SubClassOf rhs}``;
    * rhs existential, lhs conjunction ``Q and R`` — introduce a fresh Z:
      ``{lhs SubClassOf Z, Z SubClassOf Q, Z SubClassOf R,
      Z SubClassOf rhs}``.

    Both sides must be simple (ShapeError otherwise); in particular Top is
    not accepted here.
    """
    lhs, rhs = ax.lhs, ax.rhs
    if not (is_simple(lhs) and is_simple(rhs)):
        raise ShapeError(f"axiom sides must be simple concepts: {render_axiom(ax)}")
    if isinstance(rhs, Atom):
        return (ax,)
    if isinstance(rhs, And):
        return (Axiom(lhs, rhs.left), Axiom(lhs, rhs.right))
    # rhs is an existential restriction
    if isinstance(lhs, Atom):
        return (ax,)
    z = Atom(gen.name_for(lhs))
    if isinstance(lhs, Some):
        return (Axiom(lhs, z), Axiom(z, lhs), Axiom(z, rhs))
    # lhs is a conjunction of two atoms
    return (Axiom(lhs, z), Axiom(z, lhs.left), Axiom(z, lhs.right), Axiom(z, rhs))


def definitional_axioms(
    concept: Concept, gen: FreshNameGenerator
) -> tuple[str, list[Axiom]]:
    """Fresh atom name plus basic axioms making it equivalent to ``concept``.

    For a conjunction A the definition is ``{Z SubClassOf l, Z SubClassOf r,
    l and r SubClassOf Z}``; for an existential, ``{Z SubClassOf some r.f,
    some r.f SubClassOf Z}``; nested operands are defined recursively and
    replaced by their names.  Atoms define themselves (no axioms).
    """
    if isinstance(concept, Atom):
        return concept.name, []
    out: list[Axiom] = []
    name = _define(concept, gen, out)
    return name, out


def _define(concept: Concept, gen: FreshNameGenerator, out: list[Axiom]) -> str:
    already = gen._assigned.get(concept)
    fresh = already is None
    name = gen.name_for(concept)
    if not fresh:
        return name
    z = Atom(name)
    if isinstance(concept, And):
        ln = concept.left if is_atom_like(concept.left) else Atom(_define(concept.left, gen, out))
        rn = concept.right if is_atom_like(concept.right) else Atom(_define(concept.right, gen, out))
        out.append(Axiom(z, ln))
        out.append(Axiom(z, rn))
        out.append(Axiom(And(ln, rn), z))
    elif isinstance(concept, Some):
        f = concept.filler
        fn = f if is_atom_like(f) else Atom(_define(f, gen, out))
        body = Some(concept.role, fn)
        out.append(Axiom(z, body))
        out.append(Axiom(body, z))
    else:
        raise ShapeError(f"cannot define {render_concept(concept)}")
    return name


def _atomize(concept: Concept, gen: FreshNameGenerator, defs: list[Axiom]) -> Concept:
    """Replace a complex concept by its definitional atom (atoms/Top pass through)."""
    if is_atom_like(concept):
        return concept
    return Atom(_define(concept, gen, defs))


def _flatten(ax: Axiom, gen: FreshNameGenerator, out: list[Axiom]) -> None:
    """Append basic axioms equivalent to ``ax`` (arbitrary nesting allowed)."""
    lhs, rhs = ax.lhs, ax.rhs
    if isinstance(rhs, Top):
        return  # tautology, contributes nothing
    if isinstance(rhs, And):
        _flatten(Axiom(lhs, rhs.left), gen, out)
        _flatten(Axiom(lhs, rhs.right), gen, out)
        return
    if isinstance(rhs, Some):
        defs: list[Axiom] = []
        filler = _atomize(rhs.filler, gen, defs)
        subj = _atomize(lhs, gen, defs)
        out.append(Axiom(subj, Some(rhs.role, filler)))
        out.extend(defs)
        return
    # rhs is atom-like
    if is_atom_like(lhs):
        out.append(ax)
        return
    if isinstance(lhs, And):
        if isinstance(lhs.left, Top):
            _flatten(Axiom(lhs.right, rhs), gen, out)
            return
        if isinstance(lhs.right, Top):
            _flatten(Axiom(lhs.left, rhs), gen, out)
            return
        defs = []
        ln = _atomize(lhs.left, gen, defs)
        rn = _atomize(lhs.right, gen, defs)
        out.append(Axiom(And(ln, rn), rhs))
        out.extend(defs)
        return
    if isinstance(lhs, Some):
        defs = []
        filler = _atomize(lhs.filler, gen, defs)
        out.append(Axiom(Some(lhs.role, filler), rhs))
        out.extend(defs)
        return
    raise ShapeError(f"cannot normalize {render_axiom(ax)}")


def normalize_tbox(t: TBox, gen: FreshNameGenerator | None = None) -> TBox:
    """Rewrite a whole TBox into basic shapes.

    Axioms already in basic shape are kept verbatim (a normalized TBox
    normalizes to itself).  Fresh definitional names extend the signature;
    original declarations keep their positions.
    """
    if t.all_normalized:
        return t
    if gen is None:
        gen = generator_for(t)
    out: list[Axiom] = []
    for ax in t.axioms:
        if is_normalized(ax):
            out.append(ax)
        else:
            _flatten(ax, gen, out)
    return TBox(out, concept_names=t.concept_names, role_names=t.role_names)
