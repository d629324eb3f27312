import itertools
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from idelegenus.errors import ValidationError
from idelegenus.linalg import (FinAbGroup, IntMatrix, cokernel, cyclic_subgroup, kernel_basis,
                               smith_normal_form, solve_integral, subquotient,
                               torus_kernel_lattice)
from idelegenus.oracles import closure_order, kernel_points, lattice_points_mod


def matrices(max_dim=6, bound=9, min_dim=0):
    return st.integers(min_dim, max_dim).flatmap(lambda r: st.integers(min_dim, max_dim).flatmap(
        lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c),
                           min_size=r, max_size=r).map(lambda rows: IntMatrix.from_rows(rows, c))))


def determinantal_diagonal(A: IntMatrix) -> list[int]:
    """Invariant factors from gcds of k x k minors, independent of any elimination."""
    out, prev = [], 1
    for k in range(1, min(A.shape) + 1):
        g = 0
        for rows in itertools.combinations(range(A.rows), k):
            for cols in itertools.combinations(range(A.cols), k):
                g = gcd(g, IntMatrix.from_rows([[A[i, j] for j in cols] for i in rows]).det())
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def test_identity_snf():
    snf = smith_normal_form(IntMatrix.identity(2))
    assert snf.U == snf.V == snf.S == IntMatrix.identity(2)


def test_diag_2_3():
    A = IntMatrix.diagonal([2, 3])
    snf = smith_normal_form(A)
    assert snf.S == IntMatrix.diagonal([1, 6])
    assert snf.U @ A @ snf.V == snf.S


def test_zero_1x1():
    assert smith_normal_form(IntMatrix.zeros(1, 1)).S == IntMatrix.zeros(1, 1)


def test_cokernel_examples():
    assert cokernel(IntMatrix.from_rows([[2]])) == FinAbGroup((2,))
    assert cokernel(IntMatrix.diagonal([2, 3])) == FinAbGroup((6,))
    assert cokernel(IntMatrix.zeros(2, 0)) == FinAbGroup((), 2)


def test_cyclic_subgroup_examples():
    assert cyclic_subgroup(4, {2, 1}) == (4, 1)
    assert cyclic_subgroup(7, set())[0] == 1
    assert cyclic_subgroup(4, {2}) == (2, 2)


def test_torus_lattice_examples():
    assert torus_kernel_lattice(4, 2, 1) == ((2, 0), (1, 2))
    assert torus_kernel_lattice(5, 0, 0) == ((1, 0), (0, 1))
    assert torus_kernel_lattice(2, 1, 0) == ((2, 0), (0, 1))


def test_entries_must_be_integers():
    with pytest.raises(ValidationError):
        IntMatrix(1, 1, ((1.5,),))
    with pytest.raises(ValidationError):
        IntMatrix(1, 2, ((1,),))


def test_big_integers_stay_exact():
    big = 10**40 + 7
    A = IntMatrix.from_rows([[big, 0], [0, big * 3]])
    snf = smith_normal_form(A)
    assert snf.U @ A @ snf.V == snf.S
    assert snf.diagonal == (big, 3 * big)


@given(matrices())
def test_snf_factorization(A):
    snf = smith_normal_form(A)
    assert snf.U @ A @ snf.V == snf.S
    assert snf.U.det() in (1, -1) and snf.V.det() in (1, -1)
    d = snf.diagonal
    assert all(x >= 0 for x in d)
    nonzero = [x for x in d if x]
    assert d[:len(nonzero)] == tuple(nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    for i in range(A.rows):
        for j in range(A.cols):
            if i != j:
                assert snf.S[i, j] == 0


@given(matrices())
def test_snf_matches_sympy(A):
    ours = [x for x in smith_normal_form(A).diagonal if x]
    if A.rows and A.cols:
        M = sympy_snf(Matrix(A.tolist()), domain=ZZ)
        theirs = sorted(abs(int(M[k, k])) for k in range(min(A.shape)) if M[k, k])
    else:
        theirs = []
    assert sorted(ours) == theirs


@given(matrices(max_dim=4, bound=6))
def test_snf_matches_determinantal_divisors(A):
    assert [x for x in smith_normal_form(A).diagonal if x] == determinantal_diagonal(A)


@given(matrices(max_dim=5))
def test_snf_rank_and_determinism(A):
    first, second = smith_normal_form(A), smith_normal_form(A)
    assert first == second
    expected = Matrix(A.tolist()).rank() if A.rows and A.cols else 0
    assert first.rank == expected


@given(matrices(max_dim=5), st.randoms(use_true_random=False))
def test_cokernel_invariant_under_signed_permutations(A, rnd):
    rows, cols = list(range(A.rows)), list(range(A.cols))
    rnd.shuffle(rows)
    rnd.shuffle(cols)
    rs = [rnd.choice((1, -1)) for _ in rows]
    cs = [rnd.choice((1, -1)) for _ in cols]
    B = IntMatrix.from_rows([[rs[i] * cs[j] * A[rows[i], cols[j]] for j in range(A.cols)]
                             for i in range(A.rows)], A.cols)
    assert cokernel(A) == cokernel(B)


@given(matrices(max_dim=5))
def test_kernel_basis_is_saturated(A):
    K = kernel_basis(A)
    assert (A @ K).is_zero()
    assert K.cols == A.cols - smith_normal_form(A).rank
    # saturated: Z^cols / span(K) is torsion free
    assert cokernel(K).invariant_factors == ()


@given(matrices(max_dim=5), st.lists(st.integers(-9, 9), min_size=6, max_size=6))
def test_solve_integral(A, x):
    x = x[:A.cols]
    b = A.apply(x)
    y = solve_integral(A, b)
    assert y is not None and A.apply(y) == b


def test_solve_integral_reports_no_solution():
    assert solve_integral(IntMatrix.from_rows([[2]]), [1]) is None
    assert solve_integral(IntMatrix.zeros(1, 1), [1]) is None


def test_subquotient_simple():
    # ker 0 on Z^1 is Z; image 4Z gives Z/4
    assert subquotient(IntMatrix.zeros(1, 1), IntMatrix.from_rows([[4]])) == FinAbGroup((4,))
    with pytest.raises(ValidationError):
        subquotient(IntMatrix.from_rows([[1]]), IntMatrix.from_rows([[1]]))


def test_group_printing_and_order():
    g = FinAbGroup.from_orders([2, 4, 1, 3], free_rank=1)
    assert g.invariant_factors == (2, 12)
    assert str(g) == "Z/2 x Z/12 x Z"
    assert g.order is None
    assert FinAbGroup.from_orders([6]).order == 6
    assert str(FinAbGroup()) == "0"
    with pytest.raises(ValidationError):
        FinAbGroup((2, 3))


@pytest.mark.parametrize("n", range(1, 9))
def test_torus_lattice_spans_kernel(n):
    for mu in range(n):
        for lam in range(n):
            (e, z), (t, d) = torus_kernel_lattice(n, mu, lam)
            assert z == 0 and 0 <= t < e
            assert lattice_points_mod(n, ((e, 0), (t, d))) == kernel_points(n, mu, lam)
            # index of the kernel lattice in Z^2 is the order of <mu, lam>
            assert e * d == cyclic_subgroup(n, [mu, lam])[0]


@pytest.mark.parametrize("n", range(1, 25))
def test_cyclic_subgroup_matches_closure(n):
    for gens in itertools.chain(([],), ([a] for a in range(n)),
                                itertools.combinations(range(n), 2)):
        order, g = cyclic_subgroup(n, gens)
        assert order == closure_order(n, gens)
        assert closure_order(n, [g]) == order
