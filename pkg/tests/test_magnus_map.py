from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from conftest import random_nontrivial_word, random_word
from magnus.errors import PreconditionError, ResourceCapError
from magnus.freewords import (
    Alphabet,
    ExpWord,
    exponent_sums,
    from_letters,
    invert,
    left_normed_commutator,
    parse_exp_word,
    parse_word,
)
from magnus.magnus_map import (
    GammaCertificate,
    Indeterminate,
    expand,
    expand_rational_word,
    format_certificate,
    gamma_weight,
    residual_witness,
)
from magnus.magnus_series import Series, format_series, homogeneous_component, sub, unit_inverse

A1 = Alphabet.numbered(1)
A2 = Alphabet.numbered(2)
A3 = Alphabet.numbered(3)


def test_inverse_generator_expansion():
    expected = Series(1, 5, {(): 1, (0,): -1, (0, 0): 1, (0, 0, 0): -1, (0, 0, 0, 0): 1, (0, 0, 0, 0, 0): -1})
    assert expand(parse_word("x1^-1", A1), 5) == expected


def test_commutator_expansion():
    assert format_series(expand(parse_word("[x1,x2]", A2), 2)) == "1 + x1.x2 - x2.x1"


def test_expand_is_multiplicative(rng):
    for _ in range(10_000):
        alphabet = Alphabet.numbered(int(rng.integers(1, 4)))
        n = int(rng.integers(1, 6))
        u, v = random_word(rng, alphabet, 10), random_word(rng, alphabet, 10)
        assert expand(u * v, n) == expand(u, n) * expand(v, n)


def test_expand_respects_inverses(rng):
    for _ in range(1000):
        alphabet = Alphabet.numbered(int(rng.integers(1, 4)))
        n = int(rng.integers(1, 6))
        u = random_word(rng, alphabet, 10)
        assert expand(invert(u), n) == unit_inverse(expand(u, n))


def test_degree_one_part_is_exponent_sum(rng):
    for _ in range(50):
        w = random_word(rng, A3, 10)
        linear = homogeneous_component(expand(w, 1), 1)
        assert tuple(linear.terms.get((i,), 0) for i in range(3)) == exponent_sums(w)


@pytest.mark.parametrize("weight", [2, 3, 4, 5])
def test_commutators_vanish_below_their_weight(rng, weight):
    for _ in range(8):
        rank = int(rng.integers(2, 4))
        alphabet = Alphabet.numbered(rank)
        seq = [int(x) for x in rng.integers(0, rank, size=weight)]
        if seq[0] == seq[1]:
            seq[1] = (seq[0] + 1) % rank
        c = left_normed_commutator([alphabet.gen(i) for i in seq])
        rest = sub(expand(c, weight), Series.one(rank, weight))
        for n in range(1, weight):
            assert homogeneous_component(rest, n).is_zero()
        assert not homogeneous_component(rest, weight).is_zero()


def test_gamma_weight_certificates():
    cert = gamma_weight(parse_word("x1^2", A2), 2)
    assert isinstance(cert, GammaCertificate)
    assert cert.weight == 1
    assert cert.witness == Series(2, 2, {(0,): 2})
    cert = gamma_weight(parse_word("[[x1,x2],x1]", A2), 4)
    assert cert.weight == 3
    assert format_certificate(cert).splitlines()[1] == "n=3"


def test_gamma_weight_indeterminate():
    result = gamma_weight(parse_word("[x1,x2]", A2), 1)
    assert isinstance(result, Indeterminate)
    assert result.truncation == 1
    with pytest.raises(PreconditionError):
        gamma_weight(A2.identity(), 3)


def test_residual_witness():
    cert = residual_witness(parse_word("x1^-1*x2^-1*x1*x2*x1^-1", A2))
    assert cert.weight == 1
    assert cert.truncation == 5
    assert residual_witness(parse_word("[x1,x2]", A2)).weight == 2
    with pytest.raises(ResourceCapError):
        residual_witness(parse_word("[[x1,x2],x1]", A2), cap=2)
    with pytest.raises(PreconditionError):
        residual_witness(A2.identity())


def test_residual_witness_random(rng):
    for _ in range(30):
        w = random_nontrivial_word(rng, A2, 6)
        cert = residual_witness(w)
        assert 1 <= cert.weight <= cert.truncation
        assert not cert.witness.is_zero()


def test_rational_conjugate_expansion():
    w = parse_exp_word("x1^(1/3)*x2*x1^(-1/3)*x2^-1", A2)
    s = expand_rational_word(w, 2)
    assert homogeneous_component(s, 1).is_zero()
    assert homogeneous_component(s, 2) == Series(2, 2, {(0, 1): Fraction(1, 3), (1, 0): Fraction(-1, 3)})


def test_rational_words_agree_with_integer_words(rng):
    for _ in range(30):
        w = random_word(rng, A2, 8)
        assert expand_rational_word(ExpWord.from_word(w), 4) == expand(w, 4)


def test_rational_expansion_is_multiplicative(rng):
    def random_exp_word() -> ExpWord:
        out = ExpWord(A2, ())
        for _ in range(int(rng.integers(1, 5))):
            e = Fraction(int(rng.choice([-3, -2, -1, 1, 2, 3])), int(rng.integers(1, 4)))
            out = out * ExpWord(A2, ((int(rng.integers(0, 2)), e),))
        return out

    for _ in range(1000):
        u, v = random_exp_word(), random_exp_word()
        assert expand_rational_word(u * v, 4) == expand_rational_word(u, 4) * expand_rational_word(v, 4)


def test_gamma_weight_is_conjugation_invariant(rng):
    for _ in range(200):
        w = random_nontrivial_word(rng, A2, 8)
        g = random_word(rng, A2, 4)
        plain, conjugated = gamma_weight(w, 5), gamma_weight(invert(g) * w * g, 5)
        if isinstance(plain, GammaCertificate):
            assert isinstance(conjugated, GammaCertificate)
            assert conjugated.weight == plain.weight
        else:
            assert isinstance(conjugated, Indeterminate)


def _reduced_letter_sequences(length: int):
    for seq in itertools.product((1, -1, 2, -2), repeat=length):
        if all(a != -b for a, b in zip(seq, seq[1:])):
            yield seq


def test_every_short_word_has_a_witness():
    # 秩 2、长度 <= 8 的全部既约非平凡词
    count = 0
    for length in range(1, 9):
        for seq in _reduced_letter_sequences(length):
            w = from_letters(A2, seq)
            assert len(w) == length
            cert = residual_witness(w)
            assert not cert.witness.is_zero()
            count += 1
    assert count == 13_120
