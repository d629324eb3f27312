"""Window-truncated idèles on the base and on the cover.

A base idèle assigns ``l*lambda_K + m*mu_K`` to each window knot; a cover
idèle assigns one such pair to each component over a knot.  Components over
``K`` are indexed ``0..c_K-1`` by cosets of the decomposition group, and the
deck generator shifts the index by +1.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import InvariantViolation, ValidationError
from .linalg import (FinAbGroup, IntMatrix, cokernel, generated_subgroup,
                     product_elements, solve_integral)
from .link import (CoverSpec, LinkWindow, _check_branch_in_window, add_synthetic_knot,
                   branch_indices, splitting_table)


def _pair(v) -> tuple[int, int]:
    if isinstance(v, (str, bytes)) or len(v) != 2:
        raise ValidationError(f"expected an (l, m) pair, got {v!r}")
    l, m = v
    if any(not isinstance(x, int) or isinstance(x, bool) for x in (l, m)):
        raise ValidationError(f"idele coordinates must be integers, got {v!r}")
    return l, m


class BaseIdele:
    """Finitely supported ``knot -> (l, m)``; absent knots carry ``(0, 0)``."""

    __slots__ = ("_coords",)

    def __init__(self, coords: Mapping[str, Sequence[int]] | None = None):
        out = {}
        for k, v in (coords or {}).items():
            l, m = _pair(v)
            if l or m:
                out[str(k)] = (l, m)
        self._coords = out

    @classmethod
    def lam(cls, knot: str, k: int = 1) -> "BaseIdele":
        return cls({knot: (k, 0)})

    @classmethod
    def mu(cls, knot: str, k: int = 1) -> "BaseIdele":
        return cls({knot: (0, k)})

    def __getitem__(self, knot) -> tuple[int, int]:
        return self._coords.get(knot, (0, 0))

    def items(self):
        return self._coords.items()

    @property
    def support(self) -> frozenset:
        return frozenset(self._coords)

    def is_unit(self) -> bool:
        return all(l == 0 for l, _ in self._coords.values())

    def __add__(self, other: "BaseIdele") -> "BaseIdele":
        out = dict(self._coords)
        for k, (l, m) in other.items():
            a, b = out.get(k, (0, 0))
            out[k] = (a + l, b + m)
        return BaseIdele(out)

    def __neg__(self) -> "BaseIdele":
        return BaseIdele({k: (-l, -m) for k, (l, m) in self.items()})

    def __sub__(self, other: "BaseIdele") -> "BaseIdele":
        return self + (-other)

    def __rmul__(self, k: int) -> "BaseIdele":
        return BaseIdele({key: (k * l, k * m) for key, (l, m) in self.items()})

    def __eq__(self, other):
        return isinstance(other, BaseIdele) and self._coords == other._coords

    def __hash__(self):
        return hash(frozenset(self._coords.items()))

    def __repr__(self):
        return f"{type(self).__name__}({dict(sorted(self._coords.items()))!r})"

    def to_json(self, window: LinkWindow | None = None) -> dict:
        keys = window.knots if window is not None else sorted(self._coords)
        return {k: list(self._coords[k]) for k in keys if k in self._coords}


class UnitIdele(BaseIdele):
    """A base idèle with no longitude component."""

    __slots__ = ()

    def __init__(self, coords=None):
        super().__init__(coords)
        if not self.is_unit():
            raise ValidationError(f"unit idele with a longitude component: {self!r}")


class Chain2:
    """A 2-chain ``sum c_K [S_K]`` of Seifert surfaces of window knots."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[str, int] | None = None):
        out = {}
        for k, c in (coeffs or {}).items():
            if not isinstance(c, int) or isinstance(c, bool):
                raise ValidationError(f"chain coefficient of {k} must be an integer, got {c!r}")
            if c:
                out[str(k)] = c
        self.coeffs = out

    def __getitem__(self, knot):
        return self.coeffs.get(knot, 0)

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return Chain2(out)

    def __eq__(self, other):
        return isinstance(other, Chain2) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return f"Chain2({dict(sorted(self.coeffs.items()))!r})"

    def to_json(self, window=None):
        keys = window.knots if window is not None else sorted(self.coeffs)
        return {k: self.coeffs[k] for k in keys if k in self.coeffs}


class CoverIdele:
    """Cover idèle: ``knot -> ((l_0, m_0), ..., (l_{c-1}, m_{c-1}))``.

    Knots whose whole fiber vanishes are dropped, so equality is structural.
    """

    __slots__ = ("fibers",)

    def __init__(self, fibers: Mapping[str, Sequence[Sequence[int]]] | None = None):
        out = {}
        for k, fib in (fibers or {}).items():
            fib = tuple(_pair(p) for p in fib)
            if any(l or m for l, m in fib):
                out[str(k)] = fib
        self.fibers = out

    @classmethod
    def zero_fibers(cls, lengths: Mapping[str, int]) -> dict:
        return {k: [(0, 0)] * c for k, c in lengths.items()}

    def __getitem__(self, knot):
        return self.fibers.get(knot)

    def items(self):
        return self.fibers.items()

    def _combine(self, other, sign):
        out = {k: list(v) for k, v in self.fibers.items()}
        for k, fib in other.fibers.items():
            mine = out.get(k)
            if mine is None:
                out[k] = [(sign * l, sign * m) for l, m in fib]
            elif len(mine) != len(fib):
                raise ValidationError(f"fiber length mismatch at {k}: {len(mine)} vs {len(fib)}")
            else:
                out[k] = [(a + sign * l, b + sign * m) for (a, b), (l, m) in zip(mine, fib)]
        return CoverIdele(out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __eq__(self, other):
        return isinstance(other, CoverIdele) and self.fibers == other.fibers

    def __hash__(self):
        return hash(frozenset(self.fibers.items()))

    def __repr__(self):
        return f"CoverIdele({dict(sorted(self.fibers.items()))!r})"

    def to_json(self, window=None):
        keys = window.knots if window is not None else sorted(self.fibers)
        return {k: [list(p) for p in self.fibers[k]] for k in keys if k in self.fibers}


def _check_keys(window: LinkWindow, keys: Iterable[str]):
    unknown = [k for k in keys if k not in window]
    if unknown:
        raise ValidationError(f"unknown knot label(s): {', '.join(sorted(unknown))}")


def check_fibers(window: LinkWindow, cover: CoverSpec, a: CoverIdele):
    """Raise unless every fiber has length ``c_K``."""
    _check_keys(window, a.fibers)
    table = splitting_table(window, cover)
    for k, fib in a.items():
        if len(fib) != table[k].c:
            raise ValidationError(
                f"fiber over {k} has {len(fib)} entries, but {table[k].c} components lie over it")


def delta(window: LinkWindow, A: Chain2) -> BaseIdele:
    """Boundary idèle of ``A``: ``(c_K, -sum_{K' != K} lk(K, K') c_K')`` at each knot."""
    _check_keys(window, A.coeffs)
    coeffs = [A[k] for k in window.knots]
    out = {}
    for i, k in enumerate(window.knots):
        row = window.lk[i]
        out[k] = (coeffs[i], -sum(x * c for x, c in zip(row, coeffs)))
    return BaseIdele(out)


def decompose(window: LinkWindow, x: BaseIdele) -> tuple[Chain2, UnitIdele]:
    """The unique splitting ``x = delta(A) + u`` with ``u`` a unit idèle."""
    _check_keys(window, x.support)
    A = Chain2({k: l for k, (l, _) in x.items()})
    u = x - delta(window, A)
    if not u.is_unit():
        raise InvariantViolation(f"remainder {u!r} has a longitude component")
    return A, UnitIdele(dict(u.items()))


def norm(window: LinkWindow, cover: CoverSpec, a: CoverIdele) -> BaseIdele:
    """Push a cover idèle down to the base.

    With fiber sums ``L = sum l_j`` and ``M = sum m_j`` over ``K``, the result
    at ``K`` is ``L*(t*mu + d*lambda) + M*e*mu``.
    """
    check_fibers(window, cover, a)
    table = splitting_table(window, cover)
    out = {}
    for k, fib in a.items():
        s = table[k]
        L = sum(l for l, _ in fib)
        M = sum(m for _, m in fib)
        out[k] = (s.d * L, s.e * M + s.t * L)
    return BaseIdele(out)


def deck_act(cover: CoverSpec, k: int, a: CoverIdele) -> CoverIdele:
    """Apply ``tau^k``: the entry at index ``j`` moves to ``j + k``."""
    k %= cover.n
    out = {}
    for knot, fib in a.items():
        c = len(fib)
        out[knot] = [fib[(j - k) % c] for j in range(c)]
    return CoverIdele(out)


def artin_symbol(window: LinkWindow, cover: CoverSpec, x: BaseIdele) -> int:
    """Reciprocity symbol ``sum_K (l_K * lambda_char(K) + m_K * mu_char(K)) mod n``.

    It kills principal idèles and norms, and realizes the isomorphism of the
    idèle class group modulo norms with the deck group.
    """
    _check_branch_in_window(window, cover)
    _check_keys(window, x.support)
    table = splitting_table(window, cover)
    total = 0
    for k, (l, m) in x.items():
        s = table[k]
        total += l * s.lambda_char + m * s.mu_char
    return total % cover.n


def _basis_vector(window: LinkWindow, x: BaseIdele) -> tuple[int, ...]:
    # coordinate 2i is mu of knot i, 2i+1 is lambda
    v = [0] * (2 * len(window))
    for k, (l, m) in x.items():
        i = window.index(k)
        v[2 * i] = m
        v[2 * i + 1] = l
    return tuple(v)


def principal_relators(window: LinkWindow) -> list[tuple[int, ...]]:
    return [_basis_vector(window, delta(window, Chain2({k: 1}))) for k in window.knots]


def window_homology(window: LinkWindow, L: Iterable[str] = ()) -> FinAbGroup:
    """Window idèles modulo principal idèles and unit idèles off ``L``.

    For an integral homology sphere this is ``H_1`` of the complement of
    ``L``, free of rank ``|L|``.
    """
    L = set(L)
    _check_keys(window, L)
    cols = principal_relators(window)
    cols += [_basis_vector(window, BaseIdele.mu(k)) for k in window.knots if k not in L]
    return cokernel(IntMatrix.from_columns(cols, 2 * len(window)))


def norm_relators(window: LinkWindow, cover: CoverSpec) -> list[tuple[int, ...]]:
    table = splitting_table(window, cover)
    cols = []
    for k in window.knots:
        s = table[k]
        cols.append(_basis_vector(window, BaseIdele({k: (0, s.e)})))
        cols.append(_basis_vector(window, BaseIdele({k: (s.d, s.t)})))
    return cols


def reciprocity_quotient(window: LinkWindow, cover: CoverSpec) -> FinAbGroup:
    """Window idèles modulo principal idèles and norms from the cover."""
    _check_branch_in_window(window, cover)
    cols = principal_relators(window) + norm_relators(window, cover)
    return cokernel(IntMatrix.from_columns(cols, 2 * len(window)))


def symbol_generator(window: LinkWindow, cover: CoverSpec) -> BaseIdele:
    """A unit idèle supported on branch knots whose symbol is 1."""
    if cover.n == 1:
        return BaseIdele()
    knots = cover.branch_knots
    A = IntMatrix.from_rows([[cover.value(k) for k in knots] + [cover.n]])
    x = solve_integral(A, [1])
    if x is None:
        raise InvariantViolation("branch values do not generate Z/n")
    gen = BaseIdele({k: (0, c) for k, c in zip(knots, x)})
    if artin_symbol(window, cover, gen) != 1:
        raise InvariantViolation("symbol generator does not evaluate to 1")
    return gen


def relator_images(window: LinkWindow, cover: CoverSpec) -> list[tuple[int, ...]]:
    """Norm relators reduced to ``prod Z/e_i`` on branch meridians.

    Modulo principal idèles the longitude of ``K`` equals
    ``sum lk(K, K') mu_K'``, and meridians of unbranched knots are norms, so
    the window quotient is ``prod Z/e_i`` modulo these vectors.
    """
    table = splitting_table(window, cover)
    branch = cover.branch_knots
    es = [table[k].e for k in branch]
    out = []
    for k in window.knots:
        s = table[k]
        v = [s.d * window.linking(k, b) for b in branch]
        if cover.is_branched(k):
            v[branch.index(k)] += s.t
        out.append(tuple(x % e for x, e in zip(v, es)))
    return out


def enrich_window(window: LinkWindow, cover: CoverSpec) -> LinkWindow:
    """Add synthetic knots until the window's reciprocity quotient is ``Z/n``.

    Candidates link the branch knots with vectors in ``[0, n)^r`` (and link
    nothing else); they are tried in lexicographic order and kept only when
    they enlarge the subgroup spanned by the window's norm relators.
    """
    _check_branch_in_window(window, cover)
    es = branch_indices(cover)
    target = 1
    for e in es:
        target *= e
    target //= cover.n
    span = generated_subgroup(es, relator_images(window, cover))
    branch_pos = [window.index(b) for b in cover.branch_knots]
    for x in product_elements([cover.n] * cover.r):
        if len(span) == target:
            break
        frob = sum(xi * a for xi, (_, a) in zip(x, cover.branch)) % cover.n
        d = cover.n // gcd(cover.n, frob)
        gen = tuple(d * xi % e for xi, e in zip(x, es))
        if gen in span:
            continue
        linking = [0] * len(window)
        for p, xi in zip(branch_pos, x):
            linking[p] = xi
        window = add_synthetic_knot(window, linking)
        span = generated_subgroup(es, list(span) + [gen])
    if not reciprocity_quotient(window, cover).is_cyclic_of_order(cover.n):
        raise InvariantViolation("enriched window still has a quotient larger than Z/n")
    return window
