"""Kernel-level primitives, run against every available implementation.

The compiled kernel, when present, must agree with the pure-Python one on
everything; the parametrization below covers both without caring which one
the package selected at import.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liedescent import _kernel_py
from liedescent.rat import Q

IMPLS = [_kernel_py]
try:
    from liedescent import _kernel_c

    IMPLS.append(_kernel_c)
except ImportError:
    pass


@pytest.fixture(params=IMPLS, ids=lambda m: m.IMPL_NAME)
def impl(request):
    return request.param


# degrees for the level-1 alphabet A, dA, x1, dx1
DEGS = (1, 2, 0, 1)


def test_word_degree(impl):
    assert impl.word_degree((), DEGS) == 0
    assert impl.word_degree((0, 1, 2, 3), DEGS) == 4


def test_cyclic_canonical_identity_letter(impl):
    assert impl.cyclic_canonical((0,), DEGS) == ((0,), 1)


def test_cyclic_odd_square_vanishes(impl):
    # (A A): rotating one odd letter past the other costs -1
    assert impl.cyclic_canonical((0, 0), DEGS)[1] == 0
    assert impl.cyclic_canonical((3, 3), DEGS)[1] == 0


def test_cyclic_even_square_survives(impl):
    assert impl.cyclic_canonical((1, 1), DEGS) == ((1, 1), 1)


def test_cyclic_rotation_sign(impl):
    # (dA A) rotates to (A dA) with Koszul sign +1 (|dA| even)
    assert impl.cyclic_canonical((1, 0), DEGS) == ((0, 1), 1)
    # (dx1 A) rotates to (A dx1) with sign -1 (both odd)
    assert impl.cyclic_canonical((3, 0), DEGS) == ((0, 3), -1)
    assert impl.cyclic_canonical((0, 3), DEGS) == ((0, 3), 1)


def test_cyclic_reduce_cancels(impl):
    poly = {(1, 0): Q(1), (0, 1): Q(-1)}
    assert impl.cyclic_reduce(poly, DEGS) == {}


def test_poly_add_scaled_drops_zeros(impl):
    dst = {(0,): Q(1)}
    impl.poly_add_scaled(dst, {(0,): Q(-1), (1,): Q(2)}, Q(1))
    assert dst == {(1,): Q(2)}


def test_poly_mul_truncates(impl):
    p = {(0,): Q(1), (0, 0): Q(1)}
    q = {(1,): Q(1)}
    assert impl.poly_mul(p, q, 2) == {(0, 1): Q(1)}


def test_poly_bracket_signs(impl):
    # [A, A] = AA + AA since both degrees are odd
    a = {(0,): Q(1)}
    assert impl.poly_bracket(a, a, DEGS, 4) == {(0, 0): Q(2)}
    # [x1, x1] = 0
    x = {(2,): Q(1)}
    assert impl.poly_bracket(x, x, DEGS, 4) == {}
    # [A, dA] = A dA - dA A (odd times even anticommutator sign is -1)
    da = {(1,): Q(1)}
    assert impl.poly_bracket(a, da, DEGS, 4) == {(0, 1): Q(1), (1, 0): Q(-1)}


def test_derivation_apply_odd_sign(impl):
    # d(A A) = dA A - A dA for the odd de Rham differential
    images = {0: {(1,): Q(1)}}
    got = impl.derivation_apply({(0, 0): Q(1)}, images, DEGS, True, 4)
    assert got == {(1, 0): Q(1), (0, 1): Q(-1)}


def test_derivation_apply_even_no_sign(impl):
    images = {0: {(1,): Q(1)}}
    got = impl.derivation_apply({(0, 0): Q(1)}, images, DEGS, False, 4)
    assert got == {(1, 0): Q(1), (0, 1): Q(1)}


def test_derivation_truncation_room(impl):
    # image of the letter adds 1 to the word length, cap kills it
    images = {0: {(0, 0): Q(1)}}
    assert impl.derivation_apply({(0, 0): Q(1)}, images, DEGS, False, 2) == {}


def test_hom_apply_substitution(impl):
    # x1 -> x1 + dx1 on the word (x1 x1)
    images = {2: {(2,): Q(1), (3,): Q(1)}, 3: {(3,): Q(1)}}
    got = impl.hom_apply({(2, 2): Q(1)}, images, 4)
    assert got == {
        (2, 2): Q(1),
        (2, 3): Q(1),
        (3, 2): Q(1),
        (3, 3): Q(1),
    }


def test_hom_apply_zero_image_kills_word(impl):
    images = {2: {}, 3: {(3,): Q(1)}}
    assert impl.hom_apply({(2, 3): Q(1), (3,): Q(2)}, images, 4) == {(3,): Q(2)}


def test_hom_apply_requires_images(impl):
    with pytest.raises(KeyError):
        impl.hom_apply({(2,): Q(1)}, {}, 4)


def test_column_echelon_kernel_convention(impl):
    cols = [{0: Q(1)}, {0: Q(1)}]
    pivot_rows, reduced, exprs = impl.column_echelon(cols)
    assert pivot_rows == [0, -1]
    assert exprs[1] == {0: Q(-1), 1: Q(1)}
    assert reduced[1] == {}


words = st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=5).map(tuple)
polys = st.dictionaries(
    words, st.integers(min_value=-3, max_value=3).map(Q), min_size=0, max_size=5
)


@settings(max_examples=100, deadline=None)
@given(words)
def test_cyclic_canonical_is_rotation_invariant(w):
    canon, sign = _kernel_py.cyclic_canonical(w, DEGS)
    for i in range(len(w)):
        rot = w[i:] + w[:i]
        c2, s2 = _kernel_py.cyclic_canonical(rot, DEGS)
        if sign == 0:
            assert s2 == 0
        else:
            assert c2 == canon
            assert s2 in (1, -1)
    if sign != 0:
        assert canon == min(w[i:] + w[:i] for i in range(len(w)))


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_bracket_matches_independent_expansion(p, q):
    # [p, q] = pq - (-1)^(|w1||w2|) qp, reassembled word pair by word pair
    br = _kernel_py.poly_bracket(p, q, DEGS, 10)
    indep = {}
    for w1, c1 in p.items():
        d1 = _kernel_py.word_degree(w1, DEGS)
        for w2, c2 in q.items():
            d2 = _kernel_py.word_degree(w2, DEGS)
            _kernel_py.poly_add_scaled(indep, {w1 + w2: c1 * c2}, Q(1))
            koszul = Q(-1) if (d1 * d2) % 2 else Q(1)
            _kernel_py.poly_add_scaled(indep, {w2 + w1: c1 * c2}, -koszul)
    assert br == indep


images_st = st.dictionaries(
    st.integers(min_value=0, max_value=3),
    polys,
    min_size=4,
    max_size=4,
)


@pytest.mark.skipif(len(IMPLS) < 2, reason="compiled kernel not built")
@settings(max_examples=80, deadline=None)
@given(polys, polys)
def test_implementations_agree_on_products(p, q):
    fast = IMPLS[1]
    for nmax in (3, 6):
        a = _kernel_py.poly_mul(p, q, nmax)
        b = fast.poly_mul(p, q, nmax)
        assert list(a.items()) == list(b.items())  # values and insertion order
        a = _kernel_py.poly_bracket(p, q, DEGS, nmax)
        b = fast.poly_bracket(p, q, DEGS, nmax)
        assert list(a.items()) == list(b.items())
    a = _kernel_py.cyclic_reduce(p, DEGS)
    b = fast.cyclic_reduce(p, DEGS)
    assert list(a.items()) == list(b.items())


@pytest.mark.skipif(len(IMPLS) < 2, reason="compiled kernel not built")
@settings(max_examples=80, deadline=None)
@given(polys, images_st)
def test_implementations_agree_on_substitution(p, images):
    fast = IMPLS[1]
    pruned = {w: c for w, c in p.items() if all(g in images for g in w)}
    a = _kernel_py.hom_apply(pruned, images, 6)
    b = fast.hom_apply(pruned, images, 6)
    assert list(a.items()) == list(b.items())
    for odd in (False, True):
        a = _kernel_py.derivation_apply(p, images, DEGS, odd, 6)
        b = fast.derivation_apply(p, images, DEGS, odd, 6)
        assert list(a.items()) == list(b.items())


@pytest.mark.skipif(len(IMPLS) < 2, reason="compiled kernel not built")
@settings(max_examples=60, deadline=None)
@given(st.lists(st.dictionaries(st.integers(0, 6), st.integers(-3, 3).filter(bool).map(Q), max_size=4), max_size=6))
def test_implementations_agree_on_echelon(cols):
    fast = IMPLS[1]
    got_py = _kernel_py.column_echelon([dict(c) for c in cols])
    got_c = fast.column_echelon([dict(c) for c in cols])
    assert got_py == got_c
