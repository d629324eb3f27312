import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import instances, window
from idelegenus.errors import PreconditionError, ValidationError
from idelegenus.genus import (Cycle1, GenusVector, SearchExhausted, chi, commuting_diagram_check,
                              deck_act_cycle, diagram_routes, galois_kernel, galois_sum,
                              genus_image, genus_number, is_normalized, linking_residues,
                              pushforward, realize_class, same_genus, sigma,
                              single_component_span, single_component_value)
from idelegenus.link import CoverSpec, branch_indices, splitting_table
from idelegenus.verify import all_covers, random_cycle


@pytest.fixture
def two_branch():
    """n = 2 over unlinked K1, K2 with auxiliary K3 (links both) and K4 (links K1)."""
    w = window([[0, 0, 1, 1], [0, 0, 1, 0], [1, 1, 0, 0], [1, 0, 0, 0]])
    return w, CoverSpec(2, {"K1": 1, "K2": 1})


def term(knot, comp=0, coeff=1):
    return Cycle1(((knot, comp, coeff),))


def test_pushforward(two_branch):
    w, cover = two_branch
    table = splitting_table(w, cover)
    assert table["K3"].d == 1 and table["K3"].c == 2
    assert table["K4"].d == 2 and table["K4"].c == 1
    assert pushforward(w, cover, term("K3")) == {"K3": 1}
    assert pushforward(w, cover, term("K4")) == {"K4": 2}
    assert pushforward(w, cover, Cycle1()) == {}


def test_chi_examples(two_branch):
    w, cover = two_branch
    assert chi(w, cover, term("K3")).entries == (1, 1)
    assert chi(w, cover, Cycle1()).entries == (0, 0)
    assert chi(w, cover, term("K4")).entries == (0, 0)


def test_same_genus(two_branch):
    w, cover = two_branch
    z = term("K3")
    assert same_genus(w, cover, z, z)
    assert not same_genus(w, cover, z, term("K4"))
    assert same_genus(w, cover, z, term("K3", comp=1))
    assert same_genus(w, cover, z, deck_act_cycle(w, cover, 1, z))


def test_cycles_avoid_branch_locus(two_branch):
    w, cover = two_branch
    with pytest.raises(ValidationError):
        chi(w, cover, term("K1"))
    with pytest.raises(ValidationError):
        chi(w, cover, term("K3", comp=2))
    with pytest.raises(ValidationError):
        chi(w, cover, term("K9"))


def test_sigma_examples():
    cover = CoverSpec(4, {"K1": 1, "K2": 2})
    assert branch_indices(cover) == (4, 2)
    assert sigma(cover, (0, 0)) == 0
    assert sigma(cover, (2, 1)) == 0
    assert sigma(cover, (1, 0)) == 1
    with pytest.raises(ValidationError):
        sigma(cover, (1,))


def test_genus_image_examples():
    cover = CoverSpec(4, {"K1": 1, "K2": 2})
    assert {v.entries for v in genus_image(cover)} == {(0, 0), (2, 1)}
    for n in range(2, 8):
        assert [v.entries for v in genus_image(CoverSpec(n, {"K1": 1}))] == [(0,)]
    cover = CoverSpec(2, {"K1": 1, "K2": 1})
    assert {v.entries for v in genus_image(cover)} == {(0, 0), (1, 1)}


def test_genus_number_examples():
    assert genus_number(CoverSpec(2, {"K1": 1})) == 1
    assert genus_number(CoverSpec(2, {"K1": 1, "K2": 1})) == 2
    assert genus_number(CoverSpec(4, {"K1": 1, "K2": 2})) == 2
    assert genus_number(CoverSpec(1, {})) == 1


def test_realize_example():
    w = window([[0, 0], [0, 0]])
    cover = CoverSpec(4, {"K1": 2, "K2": 1})
    r = realize_class(w, cover, (1, 2))
    assert r.synthetic == (("X1", (1, 2)),)
    assert r.cycle == term("X1")
    assert chi(r.window, cover, r.cycle).entries == (1, 2)
    assert realize_class(w, cover, (0, 0)).cycle == Cycle1()


def test_realize_rejects_unreachable_target():
    w = window([[0, 0], [0, 0]])
    cover = CoverSpec(4, {"K1": 2, "K2": 1})
    with pytest.raises(PreconditionError):
        realize_class(w, cover, (1, 0))


def test_realize_search_exhausted():
    w = window([[0, 0], [0, 0]])
    cover = CoverSpec(2, {"K1": 1, "K2": 1})
    with pytest.raises(SearchExhausted) as exc:
        realize_class(w, cover, (1, 1), bound=0)
    assert exc.value.generated == frozenset({(0, 0)})


def test_realize_needs_combination():
    # every single component over n = 4, a = (1, 1), e = (4, 4) has the form d*x;
    # the BFS phase must still find each kernel element
    w = window([[0, 0], [0, 0]])
    cover = CoverSpec(4, {"K1": 1, "K2": 1})
    for v in galois_kernel(cover):
        r = realize_class(w, cover, v.entries)
        assert chi(r.window, cover, r.cycle) == v


def test_commuting_examples(two_branch):
    w, cover = two_branch
    assert diagram_routes(w, cover, term("K3"))[1].entries == (1, 1)
    assert commuting_diagram_check(w, cover, term("K3"))
    assert commuting_diagram_check(w, cover, Cycle1())


def test_literal_sum_fails_for_non_normalized_values():
    # n = 3, a = (1, 2): K3 links both branch knots once, Frobenius 1 + 2 = 0
    w = window([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
    cover = CoverSpec(3, {"K1": 1, "K2": 2})
    assert not is_normalized(cover)
    v = chi(w, cover, term("K3"))
    assert v.entries == (1, 1)
    assert sigma(cover, v) == 2
    assert galois_sum(cover, v) == 0
    assert single_component_span(cover) == {(0, 0), (1, 1), (2, 2)}
    assert {g.entries for g in genus_image(cover)} == {(0, 0), (1, 2), (2, 1)}
    assert {g.entries for g in galois_kernel(cover)} == single_component_span(cover)


@pytest.mark.parametrize("n", range(1, 9))
def test_span_equals_galois_kernel(n):
    for r in range(0, 4):
        for cover in all_covers(n, r):
            assert single_component_span(cover) == {v.entries for v in galois_kernel(cover)}
            if is_normalized(cover):
                assert single_component_span(cover) == {v.entries for v in genus_image(cover)}


@pytest.mark.parametrize("n", range(1, 13))
def test_genus_count(n):
    for r in range(0, 5):
        for cover in all_covers(n, r):
            prod = 1
            for e in branch_indices(cover):
                prod *= e
            assert len(genus_image(cover)) * n == prod
            if r <= 3:
                assert len(galois_kernel(cover)) * n == prod


def test_single_component_value_examples():
    cover = CoverSpec(4, {"K1": 2, "K2": 1})
    assert single_component_value(cover, (1, 2)) == (1, 2)
    # Frobenius 2 + 0 = 2 has order 2
    assert single_component_value(cover, (1, 0)) == (0, 0)


@given(instances(unbranched=True), st.randoms(use_true_random=False))
def test_galois_sum_kills_chi(inst, rnd):
    w, cover = inst
    z = random_cycle(rnd, w, cover)
    v = chi(w, cover, z)
    assert galois_sum(cover, v) == 0
    if is_normalized(cover):
        assert sigma(cover, v) == 0


@given(instances(unbranched=True), st.randoms(use_true_random=False))
def test_chi_additive_and_deck_invariant(inst, rnd):
    w, cover = inst
    z, y = random_cycle(rnd, w, cover), random_cycle(rnd, w, cover)
    assert chi(w, cover, z + y) == chi(w, cover, z) + chi(w, cover, y)
    k = rnd.randrange(cover.n)
    assert chi(w, cover, deck_act_cycle(w, cover, k, z)) == chi(w, cover, z)
    # (tau - 1) z has trivial genus
    diff = deck_act_cycle(w, cover, 1, z) + (-1) * z
    assert chi(w, cover, diff).is_zero()


@given(instances(unbranched=True), st.randoms(use_true_random=False))
def test_meridian_multiples_do_not_change_chi(inst, rnd):
    w, cover = inst
    base = pushforward(w, cover, random_cycle(rnd, w, cover))
    plain = linking_residues(w, cover, base)
    for b, e in zip(cover.branch_knots, branch_indices(cover)):
        assert linking_residues(w, cover, base, {b: e * rnd.randint(-3, 3)}) == plain


@given(instances(unbranched=True), st.randoms(use_true_random=False))
def test_commuting_diagram(inst, rnd):
    w, cover = inst
    assert commuting_diagram_check(w, cover, random_cycle(rnd, w, cover))


@given(st.integers(0, 2**32))
def test_realize_hits_every_kernel_element(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 8)
    r = rng.randint(0 if n == 1 else 1, 0 if n == 1 else 3)
    covers = list(all_covers(n, r))
    cover = rng.choice(covers)
    w = window([[0] * r for _ in range(r)], [f"B{i + 1}" for i in range(r)])
    target = rng.choice(galois_kernel(cover))
    res = realize_class(w, cover, target)
    assert chi(res.window, cover, res.cycle) == target
    assert res.window.knots[:r] == w.knots


def test_genus_vector_reduces():
    v = GenusVector((5, -1), (4, 2))
    assert v.entries == (1, 1)
    with pytest.raises(ValidationError):
        GenusVector((1,), (2, 2))
