from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from magnus.freewords import Alphabet, GroupWord, reduce


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


def random_word(rng: np.random.Generator, alphabet: Alphabet, max_len: int) -> GroupWord:
    n = int(rng.integers(0, max_len + 1))
    gens = rng.integers(0, alphabet.rank, size=n)
    signs = rng.choice([-1, 1], size=n)
    return reduce(alphabet, [(int(g), int(s)) for g, s in zip(gens, signs)])


def random_nontrivial_word(rng: np.random.Generator, alphabet: Alphabet, max_len: int) -> GroupWord:
    while True:
        w = random_word(rng, alphabet, max_len)
        if not w.is_identity():
            return w
