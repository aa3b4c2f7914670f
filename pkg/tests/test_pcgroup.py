from __future__ import annotations

import itertools

import pytest

from conftest import random_word
from magnus.freewords import Alphabet
from magnus.hall import basic_commutator_word, hall_basis
from magnus.lcs import free_nilpotent_presentation
from magnus.magnus_map import expand
from magnus.magnus_series import Series, mul, unit_pow_rational
from magnus.pcgroup import Collector, PcPresentation

ZERO3 = (0, 0, 0)


def _dihedral8() -> PcPresentation:
    return PcPresentation(
        weights=(1, 1, 2),
        orders=(2, 2, 2),
        commutators={(1, 0): (0, 0, 1)},
        powers={0: ZERO3, 1: ZERO3, 2: ZERO3},
    )


def test_dihedral_group_is_consistent():
    col = Collector(_dihedral8())
    assert col.consistency_check() == []
    elements = [tuple(v) for v in itertools.product(range(2), repeat=3)]
    for u in elements:
        assert col.multiply(col.inverse(u), u) == col.identity
        for v in elements:
            assert col.multiply(u, v) in elements
    for u, v, w in itertools.product(elements, repeat=3):
        assert col.multiply(col.multiply(u, v), w) == col.multiply(u, col.multiply(v, w))


def test_dihedral_collection():
    col = Collector(_dihedral8())
    g0, g1 = col.unit(0), col.unit(1)
    assert col.multiply(g0, g1) == (1, 1, 0)
    assert col.multiply(g1, g0) == (1, 1, 1)
    assert col.conjugate(1, 0, -1) == (0, 1, 1)
    assert col.power(col.multiply(g0, g1), 4) == col.identity
    assert col.commutator(g1, g0) == (0, 0, 1)
    assert col.collect([(1, 1), (0, 3)]) == (1, 1, 1)
    assert col.depth((0, 1, 1)) == 1
    assert col.depth(col.identity) is None


def test_inconsistent_presentation_is_reported():
    pres = PcPresentation(
        weights=(1, 1, 2),
        orders=(None, 2, None),
        commutators={(1, 0): (0, 0, 1)},
        powers={1: ZERO3},
    )
    failures = Collector(pres).consistency_check()
    assert failures
    assert any(f.startswith("g1^r g0") for f in failures)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(weights=(2, 1), orders=(None, None)),
        dict(weights=(1, 1, 1), orders=(None, None, None), commutators={(1, 0): (0, 0, 1)}),
        dict(weights=(1, 1), orders=(2, None)),
        dict(weights=(1, 1), orders=(None, None), powers={0: (0, 0)}),
        dict(weights=(1, 1), orders=(1, None), powers={0: (0, 0)}),
        dict(weights=(1, 1, 2), orders=(None, None, 2), commutators={(1, 0): (0, 0, 3)}, powers={2: ZERO3}),
        dict(weights=(1, 2), orders=(None, None), commutators={(0, 1): (0, 1)}),
        dict(weights=(1, 1), orders=(None, 2), powers={1: (1, 0)}),
        dict(weights=(1, 1, 2), orders=(2, None, None), powers={0: (0, 0, 0)}, commutators={(2, 1): (0, 1, 0)}),
    ],
)
def test_presentation_validation(kwargs):
    with pytest.raises(ValueError):
        PcPresentation(**kwargs)


def test_heisenberg_tail():
    pres = free_nilpotent_presentation(2, 2)
    assert dict(pres.commutators) == {(1, 0): (0, 0, 1)}
    assert pres.labels == ("x1", "x2", "[x2,x1]")


@pytest.mark.parametrize("rank,cls", [(2, 3), (2, 4), (3, 3)])
def test_free_nilpotent_presentations_are_consistent(rank, cls):
    assert Collector(free_nilpotent_presentation(rank, cls)).consistency_check() == []


def test_collection_agrees_with_magnus_expansion(rng):
    rank, cls = 2, 4
    alphabet = Alphabet.numbered(rank)
    basis = hall_basis(rank, cls)
    images = [expand(basic_commutator_word(basis, b.id, alphabet), cls) for b in basis]
    col = Collector(free_nilpotent_presentation(rank, cls))
    for _ in range(40):
        w = random_word(rng, alphabet, 10)
        v = col.collect(w.syllables)
        rebuilt = Series.one(rank, cls)
        for image, e in zip(images, v):
            if e:
                rebuilt = mul(rebuilt, unit_pow_rational(image, e))
        assert rebuilt == expand(w, cls)


def test_collector_group_laws(rng):
    col = Collector(free_nilpotent_presentation(2, 3))
    alphabet = Alphabet.numbered(2)
    for _ in range(40):
        u = col.collect(random_word(rng, alphabet, 6).syllables)
        v = col.collect(random_word(rng, alphabet, 6).syllables)
        assert col.multiply(u, col.inverse(u)) == col.identity
        assert col.inverse(col.multiply(u, v)) == col.multiply(col.inverse(v), col.inverse(u))
        assert col.power(u, 3) == col.multiply(u, col.multiply(u, u))
        assert col.power(u, -2) == col.inverse(col.multiply(u, u))


def test_power_tail_may_use_later_generator_of_same_weight():
    # Z + Z/2 写成 g0^4 = g1^-6
    pres = PcPresentation(weights=(1, 1), orders=(4, None), powers={0: (0, -6)})
    col = Collector(pres)
    assert col.consistency_check() == []
    assert col.power(col.unit(0), 4) == (0, -6)
    assert col.multiply(col.unit(0, 3), col.unit(0, 2)) == (1, -6)
    assert col.central == frozenset({1})


def test_central_generators():
    col = Collector(free_nilpotent_presentation(2, 3))
    assert col.central == frozenset({3, 4})
    assert Collector(_dihedral8()).central == frozenset()


def test_inverse_conjugates_on_central_extension():
    # Heisenberg 群再添一个中心尾：[g1,g0] = g2·g3
    pres = PcPresentation(
        weights=(1, 1, 2, 2),
        orders=(None, None, None, None),
        commutators={(1, 0): (0, 0, 1, 1)},
    )
    col = Collector(pres)
    assert col.conjugate(1, 0, -1) == (0, 1, -1, -1)
    g0, g1 = col.unit(0), col.unit(1)
    assert col.multiply(col.multiply(col.inverse(g0), col.conjugate(1, 0, -1)), g0) == g1
    assert col.consistency_check() == []


def test_consistency_tests_respect_weight_bound():
    col = Collector(free_nilpotent_presentation(2, 3))
    everything = list(col.consistency_tests())
    bounded = list(col.consistency_tests(max_weight=2))
    assert len(bounded) < len(everything)
    assert {label for label, _, _ in bounded} == {"g1^-1 (g1 g0)", "(g1 g0^-1) g0", "(g1^-1 g0^-1) g0"}
    assert list(col.consistency_tests(limit=1)) == []
    assert all(lhs == rhs for _, lhs, rhs in everything)
