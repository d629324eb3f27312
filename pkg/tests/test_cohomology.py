import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import instances, window
from idelegenus.cohomology import (CyclicModule, hilbert90_solve, induced_module,
                                   permutation_module, shift_matrix, tate_h0, tate_h1,
                                   trivial_module, window_tate)
from idelegenus.errors import PreconditionError, ValidationError
from idelegenus.ideles import CoverIdele, deck_act
from idelegenus.linalg import FinAbGroup, IntMatrix
from idelegenus.link import CoverSpec, splitting_table
from idelegenus.oracles import brute_subquotient_profile, torsion_profile
from idelegenus.verify import random_norm_zero_idele


def unbranched_fiber_cover(c):
    """A two-knot window where K2 is unbranched and splits into c sheets."""
    return window([[0, 0], [0, 0]]), CoverSpec(c, {"K1": 1})


def test_induced_module_shapes():
    w, cover = unbranched_fiber_cover(2)
    assert induced_module(w, cover, "K1").tau == IntMatrix.identity(2)
    m = induced_module(w, cover, "K2")
    assert m.rank == 4
    assert m.tau == IntMatrix.from_rows([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    w, cover = unbranched_fiber_cover(3)
    m = induced_module(w, cover, "K2")
    assert m.rank == 6 and m.tau ** 3 == IntMatrix.identity(6)


def test_module_validation():
    with pytest.raises(ValidationError):
        CyclicModule(2, shift_matrix(2), 3)
    with pytest.raises(ValidationError):
        CyclicModule(1, IntMatrix.from_rows([[2]]), 1)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 12])
def test_trivial_module(n):
    m = trivial_module(n)
    assert tate_h0(m) == FinAbGroup.from_orders([n])
    assert tate_h1(m).is_trivial


def test_swap_module():
    m = permutation_module(4, 2)
    assert tate_h0(m) == FinAbGroup((2,))
    assert tate_h1(m).is_trivial


def test_sign_module_has_h1():
    # Z with tau = -1 over Z/2: H^0 = 0 and H^1 = Z/2, so it is not induced
    m = CyclicModule(1, IntMatrix.from_rows([[-1]]), 2)
    assert tate_h0(m).is_trivial
    assert tate_h1(m) == FinAbGroup((2,))


@pytest.mark.parametrize("n", range(1, 13))
def test_shapiro(n):
    for c in range(1, n + 1):
        if n % c:
            continue
        for block in (1, 2):
            m = permutation_module(n, c, block)
            assert tate_h0(m) == FinAbGroup.from_orders([n // c] * block)
            assert tate_h1(m).is_trivial


def _brute_modules():
    sign = CyclicModule(1, IntMatrix.from_rows([[-1]]), 2)
    yield sign
    yield sign.direct_sum(permutation_module(2, 2))
    yield CyclicModule(1, IntMatrix.from_rows([[-1]]), 4)
    yield CyclicModule(2, IntMatrix.from_rows([[0, -1], [1, 0]]), 4)
    yield CyclicModule(2, IntMatrix.from_rows([[0, -1], [1, -1]]), 3)
    for n in range(1, 7):
        for c in range(1, n + 1):
            if n % c == 0:
                yield permutation_module(n, c)
                if 2 * c <= 6:
                    yield permutation_module(n, c, 2)
        yield trivial_module(n, 2)


@pytest.mark.parametrize("module", list(_brute_modules()), ids=lambda m: f"n{m.order}r{m.rank}")
def test_brute_force_oracle(module):
    n = module.order
    t1, N = module.tau_minus_one(), module.norm_matrix()
    assert brute_subquotient_profile(t1, N, n) == torsion_profile(tate_h0(module), n)
    assert brute_subquotient_profile(N, t1, n) == torsion_profile(tate_h1(module), n)


def test_window_tate_blocks():
    w = window([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    cover = CoverSpec(2, {"K1": 1})
    t = window_tate(w, cover)
    assert t["per_knot"]["K3"] == (FinAbGroup(), FinAbGroup())
    assert t["per_knot"]["K1"][0] == FinAbGroup((2, 2))
    assert t["h1"].is_trivial
    assert t["h0"].order == 16


def test_hilbert90_examples():
    w, cover = unbranched_fiber_cover(3)
    a = CoverIdele({"K2": [(1, 0), (-1, 0), (0, 0)]})
    b = hilbert90_solve(w, cover, a)
    assert b == CoverIdele({"K2": [(0, 0), (1, 0), (1, 0)]})
    assert deck_act(cover, 1, b) - b == a
    assert hilbert90_solve(w, cover, CoverIdele()) == CoverIdele()

    w, cover = unbranched_fiber_cover(2)
    a = CoverIdele({"K2": [(1, 2), (-1, -2)]})
    b = hilbert90_solve(w, cover, a)
    assert b == CoverIdele({"K2": [(0, 0), (1, 2)]})
    assert deck_act(cover, 1, b) - b == a


def test_hilbert90_rejects_nonzero_norm():
    w, cover = unbranched_fiber_cover(2)
    with pytest.raises(PreconditionError) as exc:
        hilbert90_solve(w, cover, CoverIdele({"K2": [(1, 0), (0, 0)], "K1": [(0, 3)]}))
    assert exc.value.details["fiber_sums"] == {"K2": [1, 0], "K1": [0, 3]}


@given(instances())
def test_induced_modules_have_no_h1(inst):
    w, cover = inst
    t = window_tate(w, cover)
    table = splitting_table(w, cover)
    assert t["h1"].is_trivial
    for k, (h0, h1) in t["per_knot"].items():
        assert h0 == FinAbGroup.from_orders([table[k].d * table[k].e] * 2)


@given(instances(), st.randoms(use_true_random=False))
def test_hilbert90_roundtrip(inst, rnd):
    w, cover = inst
    a = random_norm_zero_idele(rnd, w, cover)
    b = hilbert90_solve(w, cover, a)
    assert deck_act(cover, 1, b) - b == a
    assert all(fib[0] == (0, 0) for _, fib in b.items())


def test_solution_unique_up_to_fixed_ideles():
    rng = random.Random(5)
    w, cover = unbranched_fiber_cover(4)
    a = random_norm_zero_idele(rng, w, cover)
    b = hilbert90_solve(w, cover, a)
    fixed = CoverIdele({"K2": [(3, -1)] * 4})
    b2 = b + fixed
    assert deck_act(cover, 1, b2) - b2 == a
