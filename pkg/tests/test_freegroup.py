"""Word arithmetic: reduction, conjugacy, automorphisms, enumerations."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gwhitehead import freegroup as fg
from gwhitehead.errors import ValidationError

import oracles

letters = st.integers(min_value=-3, max_value=3).filter(lambda l: l != 0)
raw = st.lists(letters, max_size=12)
small_word = st.lists(letters, max_size=6).map(lambda ls: fg.reduce_word(ls))


@given(raw)
def test_reduce_idempotent(ls):
    once = fg.reduce_word(ls)
    assert fg.reduce_word(once) == once


@given(raw)
def test_reduce_matches_naive_oracle(ls):
    assert fg.reduce_word(ls) == oracles.naive_reduce(ls)


@given(small_word, small_word)
def test_product_length_bound_and_parity(u, v):
    w = fg.word_mul(u, v)
    assert len(w) <= len(u) + len(v)
    assert (len(w) - len(u) - len(v)) % 2 == 0


@given(small_word)
def test_inverse_involution_and_cancellation(w):
    assert fg.word_inv(fg.word_inv(w)) == w
    assert fg.word_mul(w, fg.word_inv(w)) == ()


def _auts(n=3):
    ids = fg.FreeAutomorphism.identity(n).images
    swaps = fg.FreeAutomorphism((ids[1], ids[0], ids[2]))
    inv = fg.FreeAutomorphism(((-1,), ids[1], ids[2]))
    mult = fg.FreeAutomorphism(((1, 2), ids[1], ids[2]))
    return [fg.FreeAutomorphism.identity(n), swaps, inv, mult,
            swaps.compose(mult), mult.compose(inv)]


@given(st.sampled_from(_auts()), st.sampled_from(_auts()), small_word)
def test_apply_aut_composition(phi, psi, w):
    assert fg.apply_aut(phi.compose(psi), w) == fg.apply_aut(phi, fg.apply_aut(psi, w))


@pytest.mark.parametrize("n,h", [(1, 4), (2, 3), (3, 2)])
def test_enumerate_words_order_and_count(n, h):
    words = fg.enumerate_words(n, h)
    keys = [fg.word_key(w) for w in words]
    assert keys == sorted(keys)
    assert len(keys) == len(set(keys))
    assert all(1 <= len(w) <= h and fg.is_reduced(w) for w in words)
    assert sorted(words) == sorted(oracles.brute_reduced_words(n, h))


def test_enumerate_words_rejects_bad_bounds():
    with pytest.raises(ValidationError):
        fg.enumerate_words(0, 3)
    with pytest.raises(ValidationError):
        fg.enumerate_words(2, 0)


@pytest.mark.parametrize("n,h", [(2, 3), (3, 2)])
def test_enumerate_classes_are_canonical(n, h):
    classes = fg.enumerate_classes(n, h)
    assert len(classes) == len(set(classes))
    for c in classes:
        assert fg.is_cyclically_reduced(c)
        assert c == fg.conj_class_rep(c)


@settings(max_examples=200)
@given(small_word, small_word)
def test_conj_class_matches_rotation_oracle(u, v):
    same = fg.conj_class_rep(u) == fg.conj_class_rep(v)
    assert same == oracles.conjugate_by_rotation(u, v)


@given(small_word, st.lists(letters, min_size=1, max_size=3))
def test_conjugates_share_class(w, c):
    conj = fg.word_mul(tuple(c), w, fg.word_inv(tuple(c)))
    assert fg.conj_class_rep(conj) == fg.conj_class_rep(w)


def test_conj_class_type_validates():
    assert fg.ConjClass.of((2, 1)).rep == (1, 2)
    with pytest.raises(ValidationError):
        fg.ConjClass((2, 1))


def test_generates_free_group():
    assert fg.generates_free_group([(1,), (2,)], 2)
    assert fg.generates_free_group([(1,), (2, 1)], 2)
    assert not fg.generates_free_group([(1,), (2, 2)], 2)
    assert not fg.generates_free_group([(1,)], 2)


def test_is_inverse_pair():
    phi = fg.FreeAutomorphism(((1, 2), (2,)))
    psi = fg.FreeAutomorphism(((1, -2), (2,)))
    assert fg.is_inverse_pair(phi, psi)
    assert not fg.is_inverse_pair(phi, phi)
