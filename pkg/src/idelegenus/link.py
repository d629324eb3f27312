"""Finite link windows in an integral homology sphere and cyclic branched covers.

A :class:`LinkWindow` records knot labels and their linking matrix; the zero
diagonal encodes preferred longitudes.  A :class:`CoverSpec` gives the degree
``n`` and the meridian character values of the branch knots; the deck
generator is the class of ``1 mod n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Mapping, Sequence

from .errors import ValidationError
from .linalg import cyclic_subgroup, torus_kernel_lattice


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    knots: tuple[str, ...] = ()
    position: tuple[int, int] | None = None

    def to_json(self):
        out = {"kind": self.kind, "message": self.message, "knots": list(self.knots)}
        if self.position is not None:
            out["position"] = list(self.position)
        return out


def window_violations(knots, lk) -> list[Violation]:
    """Every reason why ``(knots, lk)`` is not a valid window, in a stable order."""
    out = []
    if not isinstance(knots, (list, tuple)) or not all(isinstance(k, str) for k in knots):
        return [Violation("malformed", "knots must be a list of strings")]
    seen = set()
    for k in knots:
        if k in seen:
            out.append(Violation("duplicate label", f"knot label {k!r} repeated", (k,)))
        seen.add(k)
    if not isinstance(lk, (list, tuple)) or not all(isinstance(r, (list, tuple)) for r in lk):
        out.append(Violation("malformed", "lk must be a list of rows"))
        return out
    size = len(knots)
    if len(lk) != size or any(len(r) != size for r in lk):
        shape = f"{len(lk)}x{'/'.join(str(len(r)) for r in lk) or 0}"
        out.append(Violation(
            "non-square", f"lk has shape {shape}, expected {size}x{size}"))
        return out
    for i, row in enumerate(lk):
        for j, x in enumerate(row):
            if not isinstance(x, int) or isinstance(x, bool):
                out.append(Violation("non-integer", f"lk[{i}][{j}] = {x!r} is not an integer",
                                     (knots[i], knots[j]), (i, j)))
    if out:
        return out
    for i in range(size):
        if lk[i][i] != 0:
            out.append(Violation(
                "nonzero diagonal",
                f"lk({knots[i]},{knots[i]}) = {lk[i][i]}; self-linking must be 0",
                (knots[i],), (i, i)))
        for j in range(i + 1, size):
            if lk[i][j] != lk[j][i]:
                out.append(Violation(
                    "asymmetric",
                    f"lk({knots[i]},{knots[j]}) = {lk[i][j]} but "
                    f"lk({knots[j]},{knots[i]}) = {lk[j][i]}",
                    (knots[i], knots[j]), (i, j)))
    return out


@dataclass(frozen=True)
class LinkWindow:
    """Labeled knots with a symmetric, zero-diagonal linking matrix."""

    knots: tuple[str, ...]
    lk: tuple[tuple[int, ...], ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        knots = tuple(self.knots)
        lk = tuple(tuple(r) for r in self.lk)
        problems = window_violations(knots, lk)
        if problems:
            raise ValidationError("invalid link window", problems)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "lk", lk)
        object.__setattr__(self, "_index", {k: i for i, k in enumerate(knots)})

    def __len__(self):
        return len(self.knots)

    def __contains__(self, label):
        return label in self._index

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValidationError(f"knot {label!r} is not in the window") from None

    def linking(self, a: str, b: str) -> int:
        return self.lk[self.index(a)][self.index(b)]

    def row(self, label: str) -> tuple[int, ...]:
        return self.lk[self.index(label)]

    def to_json(self):
        return {"knots": list(self.knots), "lk": [list(r) for r in self.lk]}


def validate_window(raw) -> LinkWindow:
    """Build a window from a parsed ``{"knots": [...], "lk": [[...]]}`` document.

    Raises :class:`ValidationError` whose ``violations`` lists every problem
    found, with knot labels and matrix positions.
    """
    if not isinstance(raw, Mapping) or "knots" not in raw or "lk" not in raw:
        raise ValidationError("invalid link window", [
            Violation("malformed", "window must be an object with 'knots' and 'lk'")])
    problems = window_violations(raw["knots"], raw["lk"])
    if problems:
        raise ValidationError("invalid link window", problems)
    return LinkWindow(tuple(raw["knots"]), tuple(tuple(r) for r in raw["lk"]))


def add_synthetic_knot(window: LinkWindow, linking: Sequence[int],
                       label: str | None = None) -> LinkWindow:
    """Append a knot whose linking numbers with the existing knots are ``linking``.

    Any symmetric zero-diagonal integer matrix is realized by a link in S^3,
    so the result is again a window.  The default label is ``X<k>`` for the
    smallest unused ``k >= 1``.
    """
    linking = tuple(int(x) for x in linking)
    if len(linking) != len(window):
        raise ValidationError(
            f"linking vector has length {len(linking)}, window has {len(window)} knots")
    if label is None:
        k = 1
        while f"X{k}" in window:
            k += 1
        label = f"X{k}"
    elif label in window:
        raise ValidationError(f"knot {label!r} already in the window")
    lk = [list(r) + [x] for r, x in zip(window.lk, linking)]
    lk.append(list(linking) + [0])
    return LinkWindow(window.knots + (label,), tuple(tuple(r) for r in lk))


@dataclass(frozen=True)
class CoverSpec:
    """A connected cyclic cover of degree ``n`` branched over the listed knots.

    ``branch`` maps each branch knot to its meridian character value ``a_K``;
    the order of the mapping fixes the order of genus-vector coordinates.
    """

    n: int
    branch: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        items = self.branch.items() if isinstance(self.branch, Mapping) else self.branch
        items = tuple((str(k), v) for k, v in items)
        problems = []
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ValidationError(f"cover degree must be an integer >= 1, got {self.n!r}")
        labels = [k for k, _ in items]
        if len(set(labels)) != len(labels):
            problems.append(Violation("duplicate label", "branch knot listed twice"))
        for k, a in items:
            if not isinstance(a, int) or isinstance(a, bool):
                problems.append(Violation("non-integer", f"a({k}) = {a!r}", (k,)))
            elif a % self.n == 0:
                problems.append(Violation(
                    "unbranched", f"a({k}) = {a} is 0 mod {self.n}; drop the knot instead", (k,)))
        if not problems:
            g = self.n
            for _, a in items:
                g = gcd(g, a)
            if g != 1:
                problems.append(Violation(
                    "not surjective",
                    f"gcd of branch values and n is {g}; the cover would be disconnected"))
        if problems:
            raise ValidationError("invalid cover", problems)
        object.__setattr__(self, "branch", tuple((k, a % self.n) for k, a in items))

    @property
    def branch_knots(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.branch)

    @property
    def r(self) -> int:
        return len(self.branch)

    def value(self, knot: str) -> int:
        """Meridian character ``a_K`` (0 for knots off the branch locus)."""
        for k, a in self.branch:
            if k == knot:
                return a
        return 0

    def is_branched(self, knot: str) -> bool:
        return any(k == knot for k, _ in self.branch)

    def to_json(self):
        return {"n": self.n, "branch": {k: a for k, a in self.branch}}


@dataclass(frozen=True)
class KnotSplitting:
    """Hilbert splitting data of one base knot in the cover.

    ``c`` components lie over the knot, each mapping with degree ``d`` and
    branch index ``e``.  ``beta_mu = (e, 0)`` and ``beta_lambda = (t, d)``
    (meridian, longitude coordinates) span the image of each component's
    boundary torus.
    """

    knot: str
    n: int
    c: int
    d: int
    e: int
    mu_char: int
    lambda_char: int
    beta_mu: tuple[int, int]
    beta_lambda: tuple[int, int]

    def __post_init__(self):
        if self.c * self.d * self.e != self.n:
            raise ValidationError(
                f"splitting of {self.knot}: c*d*e = {self.c * self.d * self.e} != n = {self.n}")

    @property
    def t(self) -> int:
        return self.beta_lambda[0]

    @property
    def decomposition_order(self) -> int:
        """``|D| = d*e``, the stabilizer order of each component."""
        return self.d * self.e

    @property
    def diagonal_deviation(self) -> bool:
        """True when the longitude lift is not ``d*lambda`` (``t != 0``)."""
        return self.t != 0

    def to_json(self):
        return {"knot": self.knot, "c": self.c, "d": self.d, "e": self.e,
                "mu_char": self.mu_char, "lambda_char": self.lambda_char,
                "beta_mu": list(self.beta_mu), "beta_lambda": list(self.beta_lambda),
                "t": self.t}


def _check_branch_in_window(window: LinkWindow, cover: CoverSpec):
    missing = [k for k in cover.branch_knots if k not in window]
    if missing:
        raise ValidationError(f"branch knots missing from the window: {', '.join(missing)}",
                              [Violation("missing branch knot", f"{k} not in window", (k,))
                               for k in missing])


def extend_character(window: LinkWindow, cover: CoverSpec, knot: str) -> tuple[int, int]:
    """Character values of the knot's meridian and preferred longitude.

    The longitude is homologous in the branch complement to
    ``sum_j lk(K, K_j) * mu_j`` over branch knots ``K_j != K``.
    """
    _check_branch_in_window(window, cover)
    row = window.row(knot)
    n = cover.n
    lam = sum(row[window.index(k)] * a for k, a in cover.branch if k != knot) % n
    return cover.value(knot) % n, lam


def splitting_from_characters(knot: str, n: int, mu_char: int, lambda_char: int) -> KnotSplitting:
    mu_char %= n
    lambda_char %= n
    e, _ = cyclic_subgroup(n, [mu_char])
    de, _ = cyclic_subgroup(n, [mu_char, lambda_char])
    beta_mu, beta_lambda = torus_kernel_lattice(n, mu_char, lambda_char)
    return KnotSplitting(knot, n, n // de, de // e, e, mu_char, lambda_char, beta_mu, beta_lambda)


def splitting_invariants(window: LinkWindow, cover: CoverSpec, knot: str) -> KnotSplitting:
    mu, lam = extend_character(window, cover, knot)
    return splitting_from_characters(knot, cover.n, mu, lam)


@lru_cache(maxsize=4096)
def splitting_table(window: LinkWindow, cover: CoverSpec) -> dict[str, KnotSplitting]:
    """Splitting data of every window knot, keyed by label in window order."""
    _check_branch_in_window(window, cover)
    return {k: splitting_invariants(window, cover, k) for k in window.knots}


def branch_indices(cover: CoverSpec) -> tuple[int, ...]:
    """Branch indices ``e_i`` of the branch knots (orders of ``a_i`` mod ``n``)."""
    return tuple(cyclic_subgroup(cover.n, [a])[0] for _, a in cover.branch)
