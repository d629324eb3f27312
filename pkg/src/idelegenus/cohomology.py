"""Tate cohomology of the cyclic deck group and the Hilbert 90 solver.

Over a base knot with ``c`` components the cover idèles form ``c`` copies of
``Z^2`` permuted cyclically by the deck generator, i.e. the induced module
``Z[G/D] (x) Z^2``.  Tate groups are computed per knot block from exact
Smith forms and then summed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvariantViolation, PreconditionError, ValidationError
from .ideles import CoverIdele, check_fibers, deck_act
from .linalg import FinAbGroup, IntMatrix, subquotient
from .link import CoverSpec, LinkWindow, splitting_table


@dataclass(frozen=True)
class CyclicModule:
    """``Z^rank`` with a generator ``tau`` of a cyclic group of order ``order``."""

    rank: int
    tau: IntMatrix
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise ValidationError(f"group order must be >= 1, got {self.order}")
        if self.tau.shape != (self.rank, self.rank):
            raise ValidationError(f"tau has shape {self.tau.shape}, expected rank {self.rank}")
        if self.tau ** self.order != IntMatrix.identity(self.rank):
            raise ValidationError(f"tau^{self.order} is not the identity")
        if self.tau.det() not in (1, -1):
            raise ValidationError("tau is not invertible over Z")

    def norm_matrix(self) -> IntMatrix:
        total = IntMatrix.zeros(self.rank, self.rank)
        power = IntMatrix.identity(self.rank)
        for _ in range(self.order):
            total = total + power
            power = power @ self.tau
        return total

    def tau_minus_one(self) -> IntMatrix:
        return self.tau - IntMatrix.identity(self.rank)

    def direct_sum(self, other: "CyclicModule") -> "CyclicModule":
        if other.order != self.order:
            raise ValidationError("direct sum of modules over different groups")
        r = self.rank + other.rank
        rows = [list(row) + [0] * other.rank for row in self.tau.data]
        rows += [[0] * self.rank + list(row) for row in other.tau.data]
        return CyclicModule(r, IntMatrix.from_rows(rows, r), self.order)


def shift_matrix(c: int, block: int = 1) -> IntMatrix:
    """Block matrix sending block ``j`` to block ``j + 1 mod c``."""
    size = c * block
    rows = [[0] * size for _ in range(size)]
    for j in range(c):
        dst = (j + 1) % c
        for b in range(block):
            rows[dst * block + b][j * block + b] = 1
    return IntMatrix.from_rows(rows, size)


def permutation_module(n: int, c: int, block: int = 1) -> CyclicModule:
    """``Z[G/D]^block`` for ``G = Z/n`` and ``D`` the subgroup of index ``c``."""
    if c < 1 or n % c:
        raise ValidationError(f"index {c} does not divide group order {n}")
    return CyclicModule(c * block, shift_matrix(c, block), n)


def trivial_module(n: int, rank: int = 1) -> CyclicModule:
    return CyclicModule(rank, IntMatrix.identity(rank), n)


def induced_module(window: LinkWindow, cover: CoverSpec, knot: str) -> CyclicModule:
    """The cover idèle block over ``knot``: rank ``2c``, tau shifts fiber index by +1."""
    c = splitting_table(window, cover)[knot].c
    return permutation_module(cover.n, c, block=2)


def tate_h0(module: CyclicModule) -> FinAbGroup:
    """``ker(tau - 1) / im(N)`` with ``N = sum_k tau^k``."""
    return subquotient(module.tau_minus_one(), module.norm_matrix())


def tate_h1(module: CyclicModule) -> FinAbGroup:
    """``ker(N) / im(tau - 1)``."""
    return subquotient(module.norm_matrix(), module.tau_minus_one())


def window_tate(window: LinkWindow, cover: CoverSpec) -> dict:
    """Per-knot and total Tate groups of the window's cover idèle module."""
    per_knot = {}
    h0 = h1 = FinAbGroup()
    for k in window.knots:
        mod = induced_module(window, cover, k)
        g0, g1 = tate_h0(mod), tate_h1(mod)
        per_knot[k] = (g0, g1)
        h0, h1 = h0.direct_sum(g0), h1.direct_sum(g1)
    return {"per_knot": per_knot, "h0": h0, "h1": h1}


def fiber_sums(a: CoverIdele) -> dict[str, tuple[int, int]]:
    return {k: (sum(l for l, _ in fib), sum(m for _, m in fib)) for k, fib in a.items()}


def hilbert90_solve(window: LinkWindow, cover: CoverSpec, a: CoverIdele) -> CoverIdele:
    """Find ``b`` with ``tau(b) - b = a`` for a norm-zero cover idèle ``a``.

    Along each fiber ``b_0 = 0`` and ``b_j = -(a_1 + ... + a_j)``; the closing
    condition at ``j = 0`` is exactly that the fiber sums vanish.
    """
    check_fibers(window, cover, a)
    bad = {k: s for k, s in fiber_sums(a).items() if s != (0, 0)}
    if bad:
        knots = ", ".join(f"{k} (sum l = {l}, sum m = {m})" for k, (l, m) in bad.items())
        raise PreconditionError(f"norm is nonzero over {knots}",
                                {"fiber_sums": {k: list(v) for k, v in bad.items()}})
    b = {}
    for k, fib in a.items():
        out, l, m = [(0, 0)], 0, 0
        for lj, mj in fib[1:]:
            l, m = l - lj, m - mj
            out.append((l, m))
        b[k] = out
    b = CoverIdele(b)
    if deck_act(cover, 1, b) - b != a:
        raise InvariantViolation("prefix-sum solution fails (tau - 1) b = a")
    return b
