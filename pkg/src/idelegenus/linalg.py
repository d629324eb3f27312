"""Exact integer linear algebra.

Everything here works over Python ints, so entries never overflow.  The
central routine is :func:`smith_normal_form`; cokernels, kernels and integral
solving are all read off a Smith decomposition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .errors import ValidationError


@dataclass(frozen=True)
class IntMatrix:
    """An immutable ``rows x cols`` integer matrix.

    The shape is stored explicitly so that empty matrices such as ``2 x 0``
    keep their row count.
    """

    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValidationError(f"negative shape {self.rows}x{self.cols}")
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValidationError(
                f"entries do not form a {self.rows}x{self.cols} array")
        for row in self.data:
            for x in row:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise ValidationError(f"non-integer entry {x!r}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        """Build a matrix whose columns are the given vectors (each of length ``rows``)."""
        columns = [tuple(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise ValidationError(f"column of length {len(c)}, expected {rows}")
        data = tuple(tuple(c[i] for c in columns) for i in range(rows))
        return cls(rows, len(columns), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, size: int) -> "IntMatrix":
        return cls(size, size, tuple(
            tuple(1 if i == j else 0 for j in range(size)) for i in range(size)))

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> "IntMatrix":
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for k, x in enumerate(entries):
            out[k][k] = x
        return cls.from_rows(out, cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows([self.column(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValidationError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.columns()
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(row, col)) for col in ocols] for row in self.data],
            other.cols)

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        if len(vector) != self.cols:
            raise ValidationError(f"vector of length {len(vector)} for {self.shape} matrix")
        return tuple(sum(a * b for a, b in zip(row, vector)) for row in self.data)

    def _zip(self, other, op):
        if self.shape != other.shape:
            raise ValidationError(f"shape mismatch {self.shape} vs {other.shape}")
        return IntMatrix.from_rows(
            [[op(a, b) for a, b in zip(r, s)] for r, s in zip(self.data, other.data)],
            self.cols)

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return IntMatrix.from_rows([[-a for a in r] for r in self.data], self.cols)

    def __pow__(self, k: int) -> "IntMatrix":
        if self.rows != self.cols or k < 0:
            raise ValidationError("power needs a square matrix and k >= 0")
        result, base = IntMatrix.identity(self.rows), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValidationError("hstack needs equal row counts")
        return IntMatrix.from_rows(
            [r + s for r, s in zip(self.data, other.data)], self.cols + other.cols)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValidationError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == S`` with ``U``, ``V`` unimodular and ``S`` in Smith form."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[k, k] for k in range(min(self.S.rows, self.S.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def _find_pivot(a, k, m, n):
    best = None
    for i in range(k, m):
        row = a[i]
        for j in range(k, n):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
                if best[0] == 1:
                    return best
    return best


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transformation matrices.

    Pivots are chosen as the entry of smallest absolute value in the remaining
    block, ties broken by lowest row and then lowest column, so the output is
    a deterministic function of ``A``.  Diagonal entries are nonnegative and
    each divides the next.

    >>> smith_normal_form(IntMatrix.diagonal([2, 3])).diagonal
    (1, 6)
    """
    m, n = A.rows, A.cols
    a = A.tolist()
    u = IntMatrix.identity(m).tolist()
    # v is stored transposed so column operations become row operations
    vt = IntMatrix.identity(n).tolist()

    def add_row(dst, src, q):
        if q:
            a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        if q:
            for row in a:
                row[dst] += q * row[src]
            vt[dst] = [x + q * y for x, y in zip(vt[dst], vt[src])]

    for k in range(min(m, n)):
        while True:
            pivot = _find_pivot(a, k, m, n)
            if pivot is None:
                break
            _, pi, pj = pivot
            if pi != k:
                a[k], a[pi] = a[pi], a[k]
                u[k], u[pi] = u[pi], u[k]
            if pj != k:
                for row in a:
                    row[k], row[pj] = row[pj], row[k]
                vt[k], vt[pj] = vt[pj], vt[k]
            p = a[k][k]
            for i in range(k + 1, m):
                add_row(i, k, -(a[i][k] // p))
            for j in range(k + 1, n):
                add_col(j, k, -(a[k][j] // p))
            if any(a[i][k] for i in range(k + 1, m)) or any(a[k][j] for j in range(k + 1, n)):
                continue
            bad = next(((i, j) for i in range(k + 1, m) for j in range(k + 1, n)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(k, bad[0], 1)
        if pivot is None:
            break
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            u[k] = [-x for x in u[k]]

    return SmithDecomposition(
        U=IntMatrix.from_rows(u, m),
        S=IntMatrix.from_rows(a, n),
        V=IntMatrix.from_rows(vt, n).transpose() if n else IntMatrix.zeros(0, 0),
    )


@dataclass(frozen=True)
class FinAbGroup:
    """A finitely generated abelian group ``Z/f1 x ... x Z/fk x Z^free_rank``.

    Invariant factors are at least 2 and each divides the next.
    """

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        f = tuple(self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        if self.free_rank < 0:
            raise ValidationError("negative free rank")
        if any(x < 2 for x in f):
            raise ValidationError(f"invariant factors must be >= 2, got {f}")
        if any(b % a for a, b in zip(f, f[1:])):
            raise ValidationError(f"invariant factors must form a divisibility chain, got {f}")

    @classmethod
    def from_orders(cls, orders: Iterable[int] = (), free_rank: int = 0) -> "FinAbGroup":
        """Canonical form of ``Z/o1 x Z/o2 x ... x Z^free_rank`` for arbitrary orders.

        An order of 0 contributes a free summand, an order of 1 nothing.
        """
        orders = [abs(o) for o in orders]
        g = cokernel(IntMatrix.diagonal(orders))
        return cls(g.invariant_factors, g.free_rank + free_rank)

    def direct_sum(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup.from_orders(self.invariant_factors + other.invariant_factors,
                                      self.free_rank + other.free_rank)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        """Order of the group, or ``None`` when it is infinite."""
        if self.free_rank:
            return None
        out = 1
        for f in self.invariant_factors:
            out *= f
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and not self.free_rank

    def is_cyclic_of_order(self, n: int) -> bool:
        return self == FinAbGroup.from_orders([n])

    def to_json(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors),
                "free_rank": self.free_rank, "pretty": str(self)}

    def __str__(self):
        parts = [f"Z/{f}" for f in self.invariant_factors]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "0"


def cokernel(A: IntMatrix) -> FinAbGroup:
    """Isomorphism type of ``Z^rows / (column span of A)``."""
    snf = smith_normal_form(A)
    diag = snf.diagonal
    return FinAbGroup(tuple(x for x in diag if x > 1), A.rows - snf.rank)


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """A basis of ``{x : A x = 0}`` as the columns of a ``cols x k`` matrix.

    The basis spans a saturated sublattice (it is part of a unimodular basis).
    """
    snf = smith_normal_form(A)
    r = snf.rank
    cols = [snf.V.column(j) for j in range(r, A.cols)]
    return IntMatrix.from_columns(cols, A.cols)


def solve_integral(A: IntMatrix, b: Sequence[int],
                   snf: SmithDecomposition | None = None) -> tuple[int, ...] | None:
    """An integer vector ``x`` with ``A x = b``, or ``None`` if there is none."""
    snf = snf or smith_normal_form(A)
    ub = snf.U.apply(b)
    diag = snf.diagonal
    y = [0] * A.cols
    for k, rhs in enumerate(ub):
        s = diag[k] if k < len(diag) else 0
        if s == 0:
            if rhs:
                return None
        elif rhs % s:
            return None
        else:
            y[k] = rhs // s
    return snf.V.apply(y)


def subquotient(kernel_of: IntMatrix, image_of: IntMatrix) -> FinAbGroup:
    """``ker(kernel_of) / im(image_of)``, assuming the image lies in the kernel."""
    basis = kernel_basis(kernel_of)
    snf = smith_normal_form(basis)
    coords = []
    for col in image_of.columns():
        x = solve_integral(basis, col, snf)
        if x is None:
            raise ValidationError("image is not contained in the kernel")
        coords.append(x)
    return cokernel(IntMatrix.from_columns(coords, basis.cols))


def cyclic_subgroup(n: int, gens: Iterable[int]) -> tuple[int, int]:
    """Order and canonical generator of the subgroup of ``Z/n`` spanned by ``gens``.

    The subgroup is generated by ``g = gcd(n, *gens)``; its order is ``n // g``.
    The generator is returned reduced mod ``n`` (so the trivial subgroup has
    generator 0).
    """
    if n < 1:
        raise ValidationError(f"modulus must be >= 1, got {n}")
    g = n
    for x in gens:
        g = gcd(g, x)
    return n // g, g % n


def torus_kernel_lattice(n: int, mu_char: int, lambda_char: int
                         ) -> tuple[tuple[int, int], tuple[int, int]]:
    """Hermite basis of ``{(x, y) : x*mu_char + y*lambda_char = 0 mod n}``.

    Coordinates are (meridian, longitude).  Returns ``((e, 0), (t, d))`` where
    ``e`` is the order of ``mu_char``, ``d*e`` the order of the subgroup
    generated by both characters, and ``0 <= t < e``.
    """
    e, g_mu = cyclic_subgroup(n, [mu_char])
    de, _ = cyclic_subgroup(n, [mu_char, lambda_char])
    d = de // e
    if e == 1:
        return (1, 0), (0, d)
    # mu_char = g*u with u a unit mod e; solve g*u*t = -lambda_char*d (mod n = g*e)
    g = gcd(n, mu_char)
    rhs = (-lambda_char * d) % n
    if rhs % g:
        raise AssertionError("d*lambda_char is not in the meridian subgroup")
    u = (mu_char // g) % e
    t = (rhs // g) * pow(u, -1, e) % e
    return (e, 0), (t, d)


def generated_subgroup(moduli: Sequence[int], gens: Iterable[Sequence[int]]) -> frozenset:
    """All elements of ``Z/m1 x ... x Z/mr`` in the subgroup spanned by ``gens``."""
    moduli = tuple(moduli)
    reduced = {tuple(x % m for x, m in zip(g, moduli)) for g in gens}
    zero = tuple(0 for _ in moduli)
    reduced.discard(zero)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for v in frontier:
            for g in reduced:
                w = tuple((a + b) % m for a, b, m in zip(v, g, moduli))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return frozenset(seen)


def product_elements(moduli: Sequence[int]):
    """Iterate over ``Z/m1 x ... x Z/mr`` in lexicographic order."""
    return itertools.product(*(range(m) for m in moduli))
