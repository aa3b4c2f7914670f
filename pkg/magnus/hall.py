from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius

from magnus.freewords import Alphabet, GroupWord, commutator


@dataclass(frozen=True)
class BasicCommutator:
    """
    权 1：generator 为生成元下标；
    权 >1：[left, right]（基本换位子 id），满足 left > right，且 left = [p, q] 时 q <= right。
    """

    id: int
    weight: int
    generator: Optional[int] = None
    left: Optional[int] = None
    right: Optional[int] = None

    @property
    def is_generator(self) -> bool:
        return self.generator is not None


def witt_number(rank: int, n: int) -> int:
    """(1/n) Σ_{d|n} μ(d) q^{n/d}：自由李环 n 次齐次部分的秩。"""
    if rank < 1 or n < 1:
        raise ValueError(f"rank、n 必须 >= 1，收到：rank={rank} n={n}")
    total = sum(int(mobius(d)) * rank ** (n // d) for d in divisors(n))
    return total // n


@lru_cache(maxsize=64)
def _hall_basis(rank: int, cls: int) -> tuple[BasicCommutator, ...]:
    basis = [BasicCommutator(i, 1, generator=i) for i in range(rank)]
    by_weight: dict[int, list[BasicCommutator]] = {1: list(basis)}
    for n in range(2, cls + 1):
        pairs: list[tuple[int, int]] = []
        # 顺序先按权，故 left > right 蕴含 weight(left) >= weight(right)
        for wl in range(n - 1, 0, -1):
            wr = n - wl
            if wr > wl:
                continue
            for left in by_weight[wl]:
                for right in by_weight[wr]:
                    if left.id <= right.id:
                        continue
                    if not left.is_generator and left.right > right.id:
                        continue
                    pairs.append((left.id, right.id))
        layer = []
        for left_id, right_id in sorted(pairs):
            c = BasicCommutator(len(basis), n, left=left_id, right=right_id)
            basis.append(c)
            layer.append(c)
        by_weight[n] = layer
    return tuple(basis)


def hall_basis(rank: int, cls: int) -> list[BasicCommutator]:
    if rank < 1 or cls < 1:
        raise ValueError(f"rank、class 必须 >= 1，收到：rank={rank} class={cls}")
    return list(_hall_basis(rank, cls))


def weight_counts(basis: Sequence[BasicCommutator], cls: int) -> list[int]:
    counts = [0] * cls
    for c in basis:
        counts[c.weight - 1] += 1
    return counts


def basic_commutator_word(basis: Sequence[BasicCommutator], cid: int, alphabet: Alphabet) -> GroupWord:
    c = basis[cid]
    if c.is_generator:
        return alphabet.gen(c.generator)
    return commutator(
        basic_commutator_word(basis, c.left, alphabet),
        basic_commutator_word(basis, c.right, alphabet),
    )


def format_basic(basis: Sequence[BasicCommutator], cid: int, names: Sequence[str]) -> str:
    c = basis[cid]
    if c.is_generator:
        return names[c.generator]
    return f"[{format_basic(basis, c.left, names)},{format_basic(basis, c.right, names)}]"
