import pytest
from hypothesis import given
from hypothesis import strategies as st

from subsetcurrents import (Basis, Word, concat, cyclic_reduce, format_word,
                            invert, parse_word, reduce)
from subsetcurrents.errors import BasisMismatchError, LetterRangeError
from subsetcurrents.words import enumerate_reduced_words, free_reduce

letters = st.lists(st.integers(-2, 2).filter(bool), max_size=8)


def words(rank=2):
    return letters.map(lambda ls: reduce(ls, rank))


def test_reduce_examples():
    assert reduce([1, -1], 2).letters == ()
    assert reduce([1, 2, -2, 1], 2).letters == (1, 1)
    assert reduce([-1, 1, 2], 2).letters == (2,)


def test_reduce_rejects_out_of_range():
    with pytest.raises(LetterRangeError):
        reduce([3], 2)
    with pytest.raises(LetterRangeError):
        reduce([0], 2)


def test_concat_examples():
    assert concat(reduce([1], 2), reduce([-1], 2)).letters == ()
    assert concat(Word(2), reduce([2], 2)).letters == (2,)
    assert concat(reduce([1, 2], 2), reduce([-2, -1, 2], 2)).letters == (2,)


def test_concat_rejects_basis_mismatch():
    with pytest.raises(BasisMismatchError):
        concat(Word(2, (1,)), Word(3, (1,)))


def test_invert_examples():
    assert invert(reduce([1, 2], 2)).letters == (-2, -1)
    assert invert(Word(2)).letters == ()
    assert invert(reduce([-1], 2)).letters == (1,)


def test_cyclic_reduce_examples():
    core, conj = cyclic_reduce(reduce([1, 2, -1], 2))
    assert core.letters == (2,) and conj.letters == (1,)
    core, conj = cyclic_reduce(reduce([2], 2))
    assert core.letters == (2,) and conj.letters == ()
    core, conj = cyclic_reduce(Word(2))
    assert core.letters == () and conj.letters == ()


def test_word_constructor_requires_reduced():
    with pytest.raises(ValueError):
        Word(2, (1, -1))


def test_parse_and_format():
    assert parse_word("xyX", 2).letters == (1, 2, -1)
    assert parse_word("x y x^-1", 2).letters == (1, 2, -1)
    assert parse_word("y^2xy^-2", 2).letters == (2, 2, 1, -2, -2)
    assert parse_word("e", 2).letters == ()
    assert format_word(Word(2)) == "e"
    assert format_word(parse_word("xYz", 3)) == "xYz"
    with pytest.raises(LetterRangeError):
        parse_word("z", 2)


def test_basis_helpers():
    b = Basis(2)
    assert b.identity().is_identity()
    assert [w.letters for w in b.generators()] == [(1,), (2,)]
    assert b.word("xy").letters == (1, 2)


def test_enumerate_reduced_words_count():
    ws = list(enumerate_reduced_words(2, 2))
    assert len(ws) == 1 + 4 + 12
    assert len(set(ws)) == len(ws)


@given(letters)
def test_reduce_is_idempotent(ls):
    once = free_reduce(ls)
    assert free_reduce(once) == once


@given(words(), words(), words())
def test_concat_is_associative(a, b, c):
    assert concat(concat(a, b), c) == concat(a, concat(b, c))


@given(words())
def test_identity_is_two_sided(w):
    e = Word(2)
    assert concat(e, w) == w == concat(w, e)


@given(words())
def test_invert_is_involution(w):
    assert invert(invert(w)) == w
    assert concat(w, invert(w)).is_identity()


@given(words(), words())
def test_invert_is_antihomomorphism(a, b):
    assert invert(concat(a, b)) == concat(invert(b), invert(a))


@given(words())
def test_cyclic_reduce_roundtrip(w):
    core, conj = cyclic_reduce(w)
    assert concat(conj, concat(core, invert(conj))) == w
    assert core.is_identity() == w.is_identity()
    if not core.is_identity():
        assert core.letters[0] != -core.letters[-1]
