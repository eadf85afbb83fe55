"""Polynomial subsumption reasoning for EL TBoxes.

Classification works on TBoxes in the four basic shapes by saturating two
maps to a fixpoint:

* ``S[c]`` — the known subsumers of atomic concept ``c`` (initially
  ``{c, Top}``);
* ``R[r]`` — the known role links ``(c, d)`` meaning ``c SubClassOf
  some r.d`` is derivable.

The four closure rules::

    c' in S[c],  c' SubClassOf d            =>  d in S[c]
    c1, c2 in S[c],  c1 and c2 SubClassOf d =>  d in S[c]
    c' in S[c],  c' SubClassOf some r.d     =>  (c, d) in R[r]
    (c, d) in R[r],  d' in S[d],
                    some r.d' SubClassOf e  =>  e in S[c]

Saturations are memoized per TBox fingerprint (axiom set, order
insensitive), so repeated queries against the same TBox cost dictionary
lookups.  Entailment between arbitrary (possibly nested) concepts is
answered by extending a scratch copy of the TBox with definitional names
for the query sides; scratch names never leak into results.
"""

from __future__ import annotations

import threading
from collections import OrderedDict, deque
from dataclasses import dataclass, field

from .model import (
    TOP,
    And,
    Atom,
    Axiom,
    Concept,
    ShapeError,
    Some,
    TBox,
    Top,
    definitional_axioms,
    generator_for,
    is_normalized,
    normalize_tbox,
    render_axiom,
)

# Internal dictionary key for Top; not a legal concept name, cannot collide.
TOP_KEY = "⊤"


def _key(c: Concept) -> str:
    if isinstance(c, Atom):
        return c.name
    if isinstance(c, Top):
        return TOP_KEY
    raise ShapeError(f"not an atom position: {c!r}")


# ---------------------------------------------------------------------------
# Saturation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Saturation:
    """Fixpoint of the closure rules for one TBox.

    ``subsumers`` maps every atomic concept occurring in the axioms (plus
    Top) to its full subsumer set; ``links`` maps each role to its derived
    link set.  Two saturations of equal TBoxes compare equal.
    """

    fingerprint: str
    subsumers: dict[str, frozenset[str]]
    links: dict[str, frozenset[tuple[str, str]]]

    def subsumes(self, sub_name: str, super_name: str) -> bool:
        got = self.subsumers.get(sub_name)
        if got is None:
            # Unknown atoms subsume nothing beyond themselves and Top;
            # both cases are handled by callers before reaching here.
            return super_name == sub_name or super_name == TOP_KEY
        return super_name in got


def _saturate_axioms(axioms: tuple[Axiom, ...], fingerprint: str) -> Saturation:
    # Rule indexes, keyed by atom name.
    sub_rules: dict[str, list[str]] = {}              # p -> [q]           (p ⊑ q)
    conj_rules: dict[str, list[tuple[str, str]]] = {} # p -> [(p2, q)]     (p ⊓ p2 ⊑ q)
    ex_rhs: dict[str, list[tuple[str, str]]] = {}     # p -> [(r, q)]      (p ⊑ ∃r.q)
    ex_lhs: dict[tuple[str, str], list[str]] = {}     # (r, p) -> [q]      (∃r.p ⊑ q)
    atoms: set[str] = {TOP_KEY}

    for ax in axioms:
        if not is_normalized(ax):
            raise ShapeError(f"saturation requires basic shapes: {render_axiom(ax)}")
        lhs, rhs = ax.lhs, ax.rhs
        if isinstance(rhs, Some):
            p, r, q = _key(lhs), rhs.role, _key(rhs.filler)
            atoms.update((p, q))
            ex_rhs.setdefault(p, []).append((r, q))
        elif isinstance(lhs, And):
            p1, p2, q = _key(lhs.left), _key(lhs.right), _key(rhs)
            atoms.update((p1, p2, q))
            conj_rules.setdefault(p1, []).append((p2, q))
            if p2 != p1:
                conj_rules.setdefault(p2, []).append((p1, q))
        elif isinstance(lhs, Some):
            r, p, q = lhs.role, _key(lhs.filler), _key(rhs)
            atoms.update((p, q))
            ex_lhs.setdefault((r, p), []).append(q)
        else:
            p, q = _key(lhs), _key(rhs)
            atoms.update((p, q))
            sub_rules.setdefault(p, []).append(q)

    subsumers: dict[str, set[str]] = {a: {a, TOP_KEY} for a in atoms}
    subsumers[TOP_KEY] = {TOP_KEY}
    link_sets: dict[str, set[tuple[str, str]]] = {}
    in_links: dict[str, list[tuple[str, str]]] = {}   # d -> [(r, c)] with (c,d) in R[r]

    queue: deque[tuple[str, ...]] = deque()
    for c, ms in subsumers.items():
        for m in ms:
            queue.append(("s", c, m))

    def add_subsumer(c: str, m: str) -> None:
        got = subsumers.setdefault(c, {c, TOP_KEY})
        if m not in got:
            got.add(m)
            queue.append(("s", c, m))

    def add_link(r: str, c: str, d: str) -> None:
        got = link_sets.setdefault(r, set())
        if (c, d) not in got:
            got.add((c, d))
            in_links.setdefault(d, []).append((r, c))
            queue.append(("l", r, c, d))

    while queue:
        ev = queue.popleft()
        if ev[0] == "s":
            _, c, m = ev
            for q in sub_rules.get(m, ()):
                add_subsumer(c, q)
            for p2, q in conj_rules.get(m, ()):
                if p2 in subsumers[c]:
                    add_subsumer(c, q)
            for r, q in ex_rhs.get(m, ()):
                add_link(r, c, q)
            for r, x in in_links.get(c, ()):
                for q in ex_lhs.get((r, m), ()):
                    add_subsumer(x, q)
        else:
            _, r, c, d = ev
            for d2 in tuple(subsumers.get(d, (d, TOP_KEY))):
                for q in ex_lhs.get((r, d2), ()):
                    add_subsumer(c, q)

    return Saturation(
        fingerprint=fingerprint,
        subsumers={c: frozenset(ms) for c, ms in subsumers.items()},
        links={r: frozenset(ls) for r, ls in link_sets.items()},
    )


_CACHE_LIMIT = 4096
_sat_cache: OrderedDict[str, Saturation] = OrderedDict()
_sat_lock = threading.Lock()


def saturate(t: TBox) -> Saturation:
    """Saturation of a TBox in basic shapes (memoized by fingerprint)."""
    fp = t.fingerprint
    with _sat_lock:
        got = _sat_cache.get(fp)
        if got is not None:
            _sat_cache.move_to_end(fp)
            return got
    sat = _saturate_axioms(t.axioms, fp)
    with _sat_lock:
        _sat_cache[fp] = sat
        _sat_cache.move_to_end(fp)
        while len(_sat_cache) > _CACHE_LIMIT:
            _sat_cache.popitem(last=False)
    return sat


def clear_reasoner_cache() -> None:
    with _sat_lock:
        _sat_cache.clear()


# ---------------------------------------------------------------------------
# Entailment
# ---------------------------------------------------------------------------

_norm_cache: OrderedDict[str, TBox] = OrderedDict()


def _normal_form(t: TBox) -> TBox:
    if t.all_normalized:
        return t
    fp = t.fingerprint
    with _sat_lock:
        got = _norm_cache.get(fp)
    if got is not None:
        return got
    nt = normalize_tbox(t)
    with _sat_lock:
        _norm_cache[fp] = nt
        while len(_norm_cache) > _CACHE_LIMIT:
            _norm_cache.popitem(last=False)
    return nt


def entails(t: TBox, ax: Axiom) -> bool:
    """Does the TBox entail the inclusion?

    Works for arbitrary EL concepts on either side.  Atomic-to-atomic
    queries hit the memoized saturation directly; complex sides are given
    scratch definitional names first.
    """
    lhs, rhs = ax.lhs, ax.rhs
    if isinstance(rhs, Top) or lhs == rhs:
        return True
    if isinstance(lhs, Top) and isinstance(rhs, Atom):
        t = _normal_form(t)
        sat = saturate(t)
        return sat.subsumes(TOP_KEY, rhs.name)
    if isinstance(lhs, Atom) and isinstance(rhs, Atom):
        t = _normal_form(t)
        sat = saturate(t)
        return sat.subsumes(lhs.name, rhs.name)
    return _entails_complex(_normal_form(t), lhs, rhs)


def _entails_complex(t: TBox, lhs: Concept, rhs: Concept) -> bool:
    gen = generator_for(t)
    scratch: list[Axiom] = list(t.axioms)
    # Top takes no definition: it is already a saturation key
    if isinstance(lhs, Top):
        lk = TOP_KEY
    else:
        lk, left_defs = definitional_axioms(lhs, gen)
        scratch.extend(left_defs)
    if isinstance(rhs, Top):
        rk = TOP_KEY
    else:
        rk, right_defs = definitional_axioms(rhs, gen)
        scratch.extend(right_defs)
    ext = TBox(scratch, concept_names=t.concept_names, role_names=t.role_names)
    sat = saturate(ext)
    return sat.subsumes(lk, rk)


def strictly_entails_below(t: TBox, a: Concept, b: Concept) -> bool:
    """``a`` strictly below ``b``: a ⊑ b derivable but b ⊑ a not."""
    return entails(t, Axiom(a, b)) and not entails(t, Axiom(b, a))


# ---------------------------------------------------------------------------
# Candidate pools and sup/sub queries
# ---------------------------------------------------------------------------


def simple_concepts(t: TBox) -> tuple[Concept, ...]:
    """Every simple concept over the signature, in deterministic order.

    Atoms first (signature order), then two-atom conjunctions (index pairs
    i < j), then existentials (roles in signature order, atom fillers).
    Top is not included.  The count is n*(n+1)/2 + t*n for n concept and
    t role names.
    """
    atoms = [Atom(n) for n in t.concept_names]
    out: list[Concept] = list(atoms)
    for i in range(len(atoms)):
        for j in range(i + 1, len(atoms)):
            out.append(And(atoms[i], atoms[j]))
    for r in t.role_names:
        for a in atoms:
            out.append(Some(r, a))
    return tuple(out)


@dataclass(frozen=True)
class ConceptPool:
    """Where candidate concepts are drawn from: ``atomic`` or ``simple``."""

    mode: str = "atomic"

    def members(self, t: TBox) -> tuple[Concept, ...]:
        if self.mode == "atomic":
            return tuple(Atom(n) for n in t.concept_names)
        if self.mode == "simple":
            return simple_concepts(t)
        raise ValueError(f"unknown pool mode {self.mode!r}")


ATOMIC_POOL = ConceptPool("atomic")
SIMPLE_POOL = ConceptPool("simple")


def pool_from_name(name: str) -> ConceptPool:
    if name in ("atomic", "atoms"):
        return ATOMIC_POOL
    if name in ("simple", "scc"):
        return SIMPLE_POOL
    raise ValueError(f"unknown pool {name!r} (expected 'atomic' or 'simple')")


def _pooled_extension(t: TBox, concepts: tuple[Concept, ...]) -> tuple[TBox, dict[Concept, str]]:
    """Scratch TBox defining every non-atomic concept in one extension."""
    gen = generator_for(t)
    scratch: list[Axiom] = list(t.axioms)
    names: dict[Concept, str] = {}
    for c in concepts:
        if isinstance(c, Atom):
            names[c] = c.name
        elif isinstance(c, Top):
            names[c] = TOP_KEY
        else:
            name, defs = definitional_axioms(c, gen)
            names[c] = name
            scratch.extend(defs)
    ext = TBox(scratch, concept_names=t.concept_names, role_names=t.role_names)
    return ext, names


def _pool_query(c: Concept, t: TBox, pool: ConceptPool, above: bool) -> tuple[Concept, ...]:
    t = _normal_form(t)
    members = pool.members(t)
    targets = members + ((c,) if c not in members else ())
    ext, names = _pooled_extension(t, targets)
    sat = saturate(ext)
    ck = names[c]
    if above:
        return tuple(m for m in members if sat.subsumes(ck, names[m]))
    return tuple(m for m in members if sat.subsumes(names[m], ck))


def superconcepts(c: Concept, t: TBox, pool: ConceptPool = ATOMIC_POOL) -> tuple[Concept, ...]:
    """Pool members the concept is derivably included in (c itself among them)."""
    return _pool_query(c, t, pool, above=True)


def subconcepts(c: Concept, t: TBox, pool: ConceptPool = ATOMIC_POOL) -> tuple[Concept, ...]:
    """Pool members derivably included in the concept."""
    return _pool_query(c, t, pool, above=False)
