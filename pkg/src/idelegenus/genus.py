"""Genus theory of a cyclic branched cover of an integral homology sphere.

A 1-cycle upstairs is a formal sum of components over unbranched window
knots.  Its genus vector records ``lk(f_* z, K_i) mod e_i`` for each branch
knot ``K_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import InvariantViolation, PreconditionError, ValidationError
from .ideles import CoverIdele, decompose, norm
from .linalg import generated_subgroup, product_elements
from .link import (CoverSpec, LinkWindow, _check_branch_in_window, add_synthetic_knot,
                   branch_indices, splitting_from_characters, splitting_table)


@dataclass(frozen=True)
class Cycle1:
    """``sum coeff * J_{knot, component}`` over components of the cover."""

    terms: tuple[tuple[str, int, int], ...] = ()

    def __post_init__(self):
        terms = []
        for t in self.terms:
            if len(t) != 3:
                raise ValidationError(f"cycle term must be (knot, component, coeff), got {t!r}")
            knot, comp, coeff = t
            for x in (comp, coeff):
                if not isinstance(x, int) or isinstance(x, bool):
                    raise ValidationError(f"non-integer in cycle term {t!r}")
            terms.append((str(knot), comp, coeff))
        object.__setattr__(self, "terms", tuple(terms))

    def __add__(self, other: "Cycle1") -> "Cycle1":
        return Cycle1(self.terms + other.terms)

    def __rmul__(self, k: int) -> "Cycle1":
        return Cycle1(tuple((kn, j, k * c) for kn, j, c in self.terms))

    def totals(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for knot, _, coeff in self.terms:
            out[knot] = out.get(knot, 0) + coeff
        return out

    def to_json(self):
        return [{"knot": k, "component": j, "coeff": c} for k, j, c in self.terms]


@dataclass(frozen=True)
class GenusVector:
    """Residues ``(x_1, ..., x_r)`` with ``x_i`` taken mod ``e_i``."""

    entries: tuple[int, ...]
    moduli: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != len(self.moduli):
            raise ValidationError(
                f"genus vector has {len(self.entries)} entries for {len(self.moduli)} branch knots")
        object.__setattr__(self, "moduli", tuple(self.moduli))
        object.__setattr__(self, "entries",
                           tuple(x % e for x, e in zip(self.entries, self.moduli)))

    def __add__(self, other: "GenusVector") -> "GenusVector":
        if self.moduli != other.moduli:
            raise ValidationError("genus vectors over different branch data")
        return GenusVector(tuple(a + b for a, b in zip(self.entries, other.entries)), self.moduli)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def to_json(self):
        return list(self.entries)


def check_cycle(window: LinkWindow, cover: CoverSpec, z: Cycle1):
    _check_branch_in_window(window, cover)
    table = None
    for knot, comp, _ in z.terms:
        if knot not in window:
            raise ValidationError(f"cycle term over unknown knot {knot!r}")
        if cover.is_branched(knot):
            raise ValidationError(
                f"cycle term over branch knot {knot}; cycles must avoid the branch locus")
        table = table or splitting_table(window, cover)
        if not 0 <= comp < table[knot].c:
            raise ValidationError(
                f"component {comp} over {knot} out of range [0, {table[knot].c})")


def pushforward(window: LinkWindow, cover: CoverSpec, z: Cycle1) -> dict[str, int]:
    """Base 1-cycle ``f_* z``: each component over ``K`` maps with degree ``d_K``."""
    check_cycle(window, cover, z)
    table = splitting_table(window, cover)
    out = {}
    for knot, total in z.totals().items():
        if total:
            out[knot] = table[knot].d * total
    return out


def linking_residues(window: LinkWindow, cover: CoverSpec, base_cycle: Mapping[str, int],
                     meridians: Mapping[str, int] | None = None) -> GenusVector:
    """``(lk(x, K_i) mod e_i)_i`` for a base 1-cycle ``x`` plus meridian multiples.

    A meridian of ``K_i`` links ``K_i`` once and the other branch knots not at all.
    """
    _check_branch_in_window(window, cover)
    meridians = meridians or {}
    es = branch_indices(cover)
    entries = []
    for b in cover.branch_knots:
        total = meridians.get(b, 0)
        for knot, coeff in base_cycle.items():
            total += coeff * window.linking(knot, b)
        entries.append(total)
    return GenusVector(tuple(entries), es)


def chi(window: LinkWindow, cover: CoverSpec, z: Cycle1) -> GenusVector:
    """Genus vector ``(lk(f_* z, K_i) mod e_i)_i``."""
    return linking_residues(window, cover, pushforward(window, cover, z))


def same_genus(window: LinkWindow, cover: CoverSpec, z: Cycle1, w: Cycle1) -> bool:
    return chi(window, cover, z) == chi(window, cover, w)


def deck_act_cycle(window: LinkWindow, cover: CoverSpec, k: int, z: Cycle1) -> Cycle1:
    """``tau^k z``: the component index over each knot advances by ``k``."""
    check_cycle(window, cover, z)
    table = splitting_table(window, cover)
    return Cycle1(tuple((kn, (j + k) % table[kn].c, c) for kn, j, c in z.terms))


def _as_entries(x) -> tuple[int, ...]:
    return tuple(x.entries) if isinstance(x, GenusVector) else tuple(x)


def sigma(cover: CoverSpec, x) -> int:
    """``sum_i (n / e_i) x_i mod n``, independent of the lifts of the ``x_i``."""
    es = branch_indices(cover)
    entries = _as_entries(x)
    if len(entries) != len(es):
        raise ValidationError(f"expected {len(es)} entries, got {len(entries)}")
    return sum((cover.n // e) * xi for e, xi in zip(es, entries)) % cover.n


def galois_sum(cover: CoverSpec, x) -> int:
    """``sum_i a_i x_i mod n``: the image in the deck group of the inertia elements.

    This agrees with :func:`sigma` when every ``a_i = n / e_i``; in general the
    two differ by the units ``a_i / (n / e_i) mod e_i``.
    """
    entries = _as_entries(x)
    if len(entries) != cover.r:
        raise ValidationError(f"expected {cover.r} entries, got {len(entries)}")
    return sum(a * xi for (_, a), xi in zip(cover.branch, entries)) % cover.n


def is_normalized(cover: CoverSpec) -> bool:
    """True when every branch value is the standard generator ``n / e_i``."""
    return all(a == cover.n // e for (_, a), e in zip(cover.branch, branch_indices(cover)))


@lru_cache(maxsize=4096)
def _kernel_of_weights(n: int, moduli: tuple[int, ...], weights: tuple[int, ...]) -> tuple:
    out = []
    for x in product_elements(moduli):
        if sum(w * xi for w, xi in zip(weights, x)) % n == 0:
            out.append(x)
    return tuple(out)


@lru_cache(maxsize=4096)
def _kernel_vectors(n: int, moduli: tuple[int, ...], weights: tuple[int, ...]) -> tuple:
    return tuple(GenusVector(x, moduli) for x in _kernel_of_weights(n, moduli, weights))


def genus_image(cover: CoverSpec) -> list[GenusVector]:
    """Exhaustive list of ``x`` in ``prod Z/e_i`` with ``sigma(x) = 0``."""
    es = branch_indices(cover)
    weights = tuple(cover.n // e for e in es)
    return list(_kernel_vectors(cover.n, es, weights))


def galois_kernel(cover: CoverSpec) -> list[GenusVector]:
    """Exhaustive list of ``x`` in ``prod Z/e_i`` with ``galois_sum(x) = 0``."""
    es = branch_indices(cover)
    weights = tuple(a for _, a in cover.branch)
    return list(_kernel_vectors(cover.n, es, weights))


def genus_number(cover: CoverSpec) -> int:
    """``prod e_i / n``, checked for integrality and against the enumerated image."""
    prod = 1
    for e in branch_indices(cover):
        prod *= e
    if prod % cover.n:
        raise InvariantViolation(f"prod e_i = {prod} is not divisible by n = {cover.n}")
    g = prod // cover.n
    if g != len(genus_image(cover)):
        raise InvariantViolation(f"genus image has {len(genus_image(cover))} elements, expected {g}")
    return g


def frobenius(cover: CoverSpec, linking: Sequence[int]) -> int:
    """Character value of a knot linking the branch knots with the given numbers."""
    return sum(x * a for x, (_, a) in zip(linking, cover.branch)) % cover.n


def single_component_value(cover: CoverSpec, linking: Sequence[int]) -> tuple[int, ...]:
    """Genus vector of one component over a knot with branch-linking vector ``linking``.

    The component maps with degree ``d`` equal to the order of the knot's
    Frobenius, so the value is ``(d * x_i mod e_i)_i``.
    """
    s = splitting_from_characters("_", cover.n, 0, frobenius(cover, linking))
    return tuple(s.d * x % e for x, e in zip(linking, branch_indices(cover)))


def single_component_span(cover: CoverSpec) -> frozenset:
    """Subgroup of ``prod Z/e_i`` spanned by all single-component values."""
    es = branch_indices(cover)
    gens = {single_component_value(cover, x) for x in product_elements([cover.n] * cover.r)}
    return generated_subgroup(es, gens)


@dataclass(frozen=True)
class Realization:
    """A cycle on an enlarged window whose genus vector is the target."""

    window: LinkWindow
    cycle: Cycle1
    synthetic: tuple[tuple[str, tuple[int, ...]], ...]

    def to_json(self):
        return {"window": self.window.to_json(), "cycle": self.cycle.to_json(),
                "synthetic": [{"knot": k, "linking": list(v)} for k, v in self.synthetic]}


class SearchExhausted(PreconditionError):
    """No witness within the bound; ``generated`` is the subgroup that was reached."""

    def __init__(self, message, generated):
        super().__init__(message, {"generated": sorted(generated)})
        self.generated = frozenset(generated)


def _attach(window: LinkWindow, cover: CoverSpec, vectors: Iterable[Sequence[int]]):
    pos = [window.index(b) for b in cover.branch_knots]
    added = []
    for x in vectors:
        linking = [0] * len(window)
        for p, xi in zip(pos, x):
            linking[p] = xi
        window = add_synthetic_knot(window, linking)
        added.append((window.knots[-1], tuple(x)))
    return window, added


def realize_class(window: LinkWindow, cover: CoverSpec, target, bound: int | None = None
                  ) -> Realization:
    """Find a 1-cycle with genus vector ``target`` on synthetic auxiliary knots.

    Synthetic knots link the branch knots with numbers in ``[0, bound]``
    (default ``n - 1``) and nothing else.  A single component over a knot with
    trivial Frobenius is tried first; otherwise a shortest signed combination
    of single components is found by breadth-first search.  Targets with
    ``galois_sum != 0`` are never in the image and are rejected up front.
    """
    _check_branch_in_window(window, cover)
    es = branch_indices(cover)
    goal = GenusVector(_as_entries(target), es)
    if galois_sum(cover, goal) != 0:
        raise PreconditionError(
            f"target {list(goal.entries)} has galois_sum {galois_sum(cover, goal)} != 0; "
            "it is not the genus of any cycle", {"target": list(goal.entries)})
    if goal.is_zero():
        return Realization(window, Cycle1(), ())
    bound = cover.n - 1 if bound is None else bound
    box = list(product_elements([bound + 1] * cover.r))

    for x in box:
        if frobenius(cover, x) == 0 and tuple(xi % e for xi, e in zip(x, es)) == goal.entries:
            w, added = _attach(window, cover, [x])
            return _checked(w, cover, Cycle1(((added[0][0], 0, 1),)), goal, added)

    gens = {}
    for x in box:
        v = single_component_value(cover, x)
        if any(v):
            gens.setdefault(v, x)
    zero = tuple(0 for _ in es)
    parent = {zero: None}
    frontier = [zero]
    while frontier and goal.entries not in parent:
        nxt = []
        for v in frontier:
            for g, x in gens.items():
                for sign in (1, -1):
                    w = tuple((a + sign * b) % e for a, b, e in zip(v, g, es))
                    if w not in parent:
                        parent[w] = (v, x, sign)
                        nxt.append(w)
        frontier = nxt
    if goal.entries not in parent:
        raise SearchExhausted(
            f"target {list(goal.entries)} not reached with linking numbers <= {bound}",
            parent.keys())
    steps = []
    v = goal.entries
    while parent[v] is not None:
        v, x, sign = parent[v]
        steps.append((x, sign))
    steps.reverse()
    vectors = list(dict.fromkeys(x for x, _ in steps))
    w, added = _attach(window, cover, vectors)
    label = {x: lab for lab, x in added}
    coeff: dict[str, int] = {}
    for x, sign in steps:
        coeff[label[tuple(x)]] = coeff.get(label[tuple(x)], 0) + sign
    cycle = Cycle1(tuple((lab, 0, c) for lab, c in coeff.items() if c))
    return _checked(w, cover, cycle, goal, added)


def _checked(window, cover, cycle, goal, added) -> Realization:
    got = chi(window, cover, cycle)
    if got != goal:
        raise InvariantViolation(f"witness has genus {list(got.entries)}, expected {list(goal.entries)}")
    return Realization(window, cycle, tuple(added))


def lift_to_cover(window: LinkWindow, cover: CoverSpec, z: Cycle1) -> CoverIdele:
    """Cover idèle with ``l = coeff`` on each cited component (longitudes only)."""
    check_cycle(window, cover, z)
    table = splitting_table(window, cover)
    fibers: dict[str, list[list[int]]] = {}
    for knot, comp, coeff in z.terms:
        fib = fibers.setdefault(knot, [[0, 0] for _ in range(table[knot].c)])
        fib[comp][0] += coeff
    return CoverIdele(fibers)


def psi(window: LinkWindow, cover: CoverSpec, x) -> GenusVector:
    """Read ``r_{K_i} mod e_i`` off the unit part of ``x``."""
    _, u = decompose(window, x)
    es = branch_indices(cover)
    return GenusVector(tuple(u[b][1] for b in cover.branch_knots), es)


def diagram_routes(window: LinkWindow, cover: CoverSpec, z: Cycle1
                   ) -> tuple[GenusVector, GenusVector]:
    """``(chi(z), psi(norm(lift(z))))``: the two sides of the commuting square."""
    direct = chi(window, cover, z)
    via_ideles = psi(window, cover, norm(window, cover, lift_to_cover(window, cover, z)))
    return direct, via_ideles


def commuting_diagram_check(window: LinkWindow, cover: CoverSpec, z: Cycle1) -> bool:
    direct, via_ideles = diagram_routes(window, cover, z)
    return direct == via_ideles
