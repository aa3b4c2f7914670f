from __future__ import annotations

from functools import reduce as fold
from math import gcd

import pytest

from conftest import random_nontrivial_word, random_word
from magnus.errors import AlphabetMismatchError, PreconditionError, ResourceCapError
from magnus.freewords import Alphabet, exponent_sums, format_word, parse_word
from magnus.whitehead import (
    CyclicWord,
    WhiteheadAuto,
    apply,
    enumerate_autos,
    format_auto,
    invert_auto,
    is_primitive,
    minimize,
)

AB = Alphabet.from_names(["a", "b"])
A2 = Alphabet.numbered(2)
A3 = Alphabet.numbered(3)


def _w(text: str, alphabet: Alphabet = AB):
    return parse_word(text, alphabet)


def test_apply_examples():
    identity = WhiteheadAuto(2, "permutation", images=(1, 2))
    assert apply(identity, _w("a*b^-1*a")) == _w("a*b^-1*a")
    t = WhiteheadAuto(2, "type2", multiplier=-2, assignment=("xa", "x"))
    assert apply(t, _w("a*b")) == _w("a")
    inversion = WhiteheadAuto(2, "permutation", images=(-1, 2))
    assert apply(inversion, _w("a^2")) == _w("a^-2")
    conj = WhiteheadAuto(2, "type2", multiplier=1, assignment=("x", "a^-1xa"))
    assert format_word(apply(conj, _w("b"))) == "a^-1*b*a"


def test_apply_rank_mismatch():
    auto = WhiteheadAuto(3, "permutation", images=(1, 2, 3))
    with pytest.raises(AlphabetMismatchError):
        apply(auto, _w("a*b"))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(rank=2, kind="permutation", images=(1, 1)),
        dict(rank=2, kind="type2", multiplier=3, assignment=("x", "x")),
        dict(rank=2, kind="type2", multiplier=1, assignment=("xa", "x")),
        dict(rank=2, kind="type2", multiplier=1, assignment=("x", "ax")),
        dict(rank=2, kind="shear"),
    ],
)
def test_auto_validation(kwargs):
    with pytest.raises(ValueError):
        WhiteheadAuto(**kwargs)


def test_enumeration_counts():
    assert len(enumerate_autos(1)) == 2
    assert len(enumerate_autos(1, dedup=False)) == 4
    assert sum(1 for a in enumerate_autos(2, dedup=False) if a.kind == "type2") == 16
    assert sum(1 for a in enumerate_autos(3, dedup=False) if a.kind == "type2") == 96
    autos = enumerate_autos(2)
    kinds = [a.kind for a in autos]
    assert kinds == sorted(kinds, key=lambda k: k != "type2")
    with pytest.raises(ResourceCapError):
        enumerate_autos(6)
    with pytest.raises(ValueError):
        enumerate_autos(0)


def test_enumeration_is_deterministic():
    assert enumerate_autos(3) == enumerate_autos(3)


def test_autos_are_homomorphisms_and_invertible(rng):
    autos = enumerate_autos(3)
    for _ in range(100):
        auto = autos[int(rng.integers(0, len(autos)))]
        u, v = random_word(rng, A3, 6), random_word(rng, A3, 6)
        assert apply(auto, u * v) == apply(auto, u) * apply(auto, v)
        assert apply(invert_auto(auto), apply(auto, u)) == u
        assert apply(auto, apply(invert_auto(auto), u)) == u


def test_cyclic_word_canonical_form():
    assert str(CyclicWord.from_word(_w("b*a"))) == "a*b"
    assert str(CyclicWord.from_word(_w("a^-1*b*a"))) == "b"
    assert CyclicWord.from_word(_w("b^-1*a*b*a")) == CyclicWord.from_word(_w("a*b*a*b^-1"))
    assert len(CyclicWord.from_word(_w("a^-1*b^3*a"))) == 3
    assert len(CyclicWord.from_word(AB.identity())) == 0


def test_minimize_examples():
    minimal, path = minimize(_w("a*b"))
    assert len(minimal) == 1 and len(path) == 1
    minimal, path = minimize(_w("a^3*b"))
    assert len(minimal) == 1
    assert len(path) == 3
    assert str(minimal) == "b"
    minimal, path = minimize(_w("[a,b]"))
    assert len(minimal) == 4 and path == []
    minimal, _ = minimize(_w("a^2"))
    assert str(minimal) == "a^2"


def test_primitivity():
    assert is_primitive(_w("a"))
    assert is_primitive(_w("b^-1*a*b"))
    assert is_primitive(_w("a*b*a*b^2"))
    assert not is_primitive(_w("a^2"))
    assert not is_primitive(_w("[a,b]"))
    assert not is_primitive(_w("a^2*b^2"))
    with pytest.raises(PreconditionError):
        minimize(AB.identity())
    with pytest.raises(ResourceCapError):
        minimize(parse_word("x1", Alphabet.numbered(6)))


def test_minimize_path_replays(rng):
    for _ in range(30):
        w = random_nontrivial_word(rng, A2, 10)
        minimal, path = minimize(w)
        current = w
        lengths = [len(CyclicWord.from_word(w))]
        for auto in path:
            current = apply(auto, current)
            lengths.append(len(CyclicWord.from_word(current)))
        assert CyclicWord.from_word(current) == minimal
        assert all(a > b for a, b in zip(lengths, lengths[1:]))
        assert minimize(w) == (minimal, path)


def test_minimal_length_is_orbit_invariant(rng):
    autos = enumerate_autos(2)
    for _ in range(25):
        w = random_nontrivial_word(rng, A2, 8)
        image = w
        for _ in range(3):
            image = apply(autos[int(rng.integers(0, len(autos)))], image)
        assert len(minimize(image)[0]) == len(minimize(w)[0])


def test_primitive_words_have_coprime_exponent_sums(rng):
    for _ in range(40):
        w = random_nontrivial_word(rng, A2, 8)
        if is_primitive(w):
            assert fold(gcd, exponent_sums(w), 0) == 1


def test_format_auto():
    names = ("a", "b")
    assert format_auto(WhiteheadAuto(2, "permutation", images=(2, -1)), names) == "perm(a->b, b->a^-1)"
    t = WhiteheadAuto(2, "type2", multiplier=-2, assignment=("xa", "x"))
    assert format_auto(t, names) == "type2(mult=b^-1; a->a*b^-1)"
    still = WhiteheadAuto(2, "type2", multiplier=1, assignment=("x", "x"))
    assert format_auto(still, names) == "type2(mult=a; id)"
