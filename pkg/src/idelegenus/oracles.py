"""Brute-force cross-checks that avoid Smith normal forms entirely.

These enumerate small lattices directly and are only meant for tiny inputs.
"""

from __future__ import annotations

import itertools
from math import gcd

from .linalg import FinAbGroup, IntMatrix, generated_subgroup


def torsion_profile(group: FinAbGroup, n: int) -> dict[int, int]:
    """``k -> |G[k]|`` for each divisor ``k`` of ``n`` (finite groups only)."""
    out = {}
    for k in range(1, n + 1):
        if n % k == 0:
            size = 1
            for f in group.invariant_factors:
                size *= gcd(k, f)
            out[k] = size
    return out


def brute_subquotient_profile(kernel_of: IntMatrix, image_of: IntMatrix, n: int,
                              box: int = 1) -> dict[int, int]:
    """Torsion profile of ``ker(kernel_of) / im(image_of)`` by enumeration mod ``n``.

    Valid when the quotient is killed by ``n``: then it equals
    ``(ker mod n) / (im mod n)`` inside ``(Z/n)^rank``.  Kernel generators are
    searched for in the box ``[-box, box]^rank``.
    """
    r = kernel_of.cols
    moduli = [n] * r
    kernel_gens = [v for v in itertools.product(range(-box, box + 1), repeat=r)
                   if not any(kernel_of.apply(v))]
    A = generated_subgroup(moduli, kernel_gens)
    B = generated_subgroup(moduli, image_of.columns())
    if not B <= A:
        raise AssertionError("image not inside kernel modulo n")
    out = {}
    for k in range(1, n + 1):
        if n % k == 0:
            hits = sum(1 for a in A if tuple(k * x % n for x in a) in B)
            out[k] = hits // len(B)
    return out


def kernel_points(n: int, mu: int, lam: int) -> set[tuple[int, int]]:
    """All ``(x, y)`` in ``[0, n)^2`` with ``x*mu + y*lam = 0 mod n``."""
    return {(x, y) for x in range(n) for y in range(n) if (x * mu + y * lam) % n == 0}


def lattice_points_mod(n: int, basis: tuple[tuple[int, int], tuple[int, int]]) -> set:
    """Residues mod ``n`` of the lattice spanned by ``basis``."""
    return set(generated_subgroup((n, n), basis))


def closure_order(n: int, gens) -> int:
    """Size of the additive closure of ``gens`` in ``Z/n``."""
    return len(generated_subgroup((n,), [(g,) for g in gens]))
