"""
Magnus 嵌入 μ：x_i ↦ 1+ξ_i，x_i⁻¹ ↦ 1−ξ_i+ξ_i²−…，以及 γ-权证书。

证书只声明两个可靠方向：
- μ(w)−1 在 n 次以下全为零 => 下界 n；
- n 次分量非零 => w ∉ γ_{n+1}(F)（γ_{n+1} 中元素在 n 次及以下分量全为零的逆否）。
把 n 称为"精确"权依赖自由群维数子群等式 D_n(F) = γ_n(F)（经典结果），输出标签沿用这一点。
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

from magnus.config import NO_DEADLINE, Deadline
from magnus.errors import PreconditionError, ResourceCapError
from magnus.freewords import ExpWord, GroupWord, format_word
from magnus.magnus_series import (
    Series,
    format_series,
    homogeneous_component,
    mul,
    sub,
    unit_pow_rational,
    valuation,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GammaCertificate:
    word: GroupWord
    weight: int
    witness: Series  # μ(w)−1 的 weight 次齐次分量，非零
    truncation: int


@dataclass(frozen=True)
class Indeterminate:
    word: GroupWord
    truncation: int
    reason: str


@lru_cache(maxsize=4096)
def generator_image(index: int, exponent: Fraction, rank: int, trunc: int) -> Series:
    """μ(x_index^exponent) = (1+ξ_index)^exponent"""
    base = Series(rank, trunc, {(): 1, (index,): 1})
    return unit_pow_rational(base, exponent)


def expand(w: GroupWord, trunc: int) -> Series:
    if trunc < 1:
        raise ValueError(f"trunc 必须 >= 1，收到：{trunc}")
    rank = w.alphabet.rank
    acc = Series.one(rank, trunc)
    for gen, exp in w.syllables:
        acc = mul(acc, generator_image(gen, Fraction(exp), rank, trunc))
    return acc


def expand_rational_word(w: ExpWord, trunc: int) -> Series:
    """𝒟-群探针：(x_i, p/q) ↦ (1+ξ_i)^{p/q}，逐音节相乘。"""
    if trunc < 1:
        raise ValueError(f"trunc 必须 >= 1，收到：{trunc}")
    rank = w.alphabet.rank
    acc = Series.one(rank, trunc)
    for gen, exp in w.syllables:
        acc = mul(acc, generator_image(gen, exp, rank, trunc))
    return acc


def gamma_weight(w: GroupWord, n_max: int) -> Union[GammaCertificate, Indeterminate]:
    if w.is_identity():
        raise PreconditionError("单位元没有 γ-权证书")
    if n_max < 1:
        raise ValueError(f"n_max 必须 >= 1，收到：{n_max}")
    rest = sub(expand(w, n_max), Series.one(w.alphabet.rank, n_max))
    v = valuation(rest, truncated=True)
    if v.lower_bound:
        return Indeterminate(word=w, truncation=n_max, reason=f"valuation > {n_max}")
    return GammaCertificate(
        word=w,
        weight=v.value,
        witness=homogeneous_component(rest, v.value),
        truncation=n_max,
    )


def residual_witness(
    w: GroupWord,
    cap: int = 64,
    deadline: Deadline = NO_DEADLINE,
) -> GammaCertificate:
    """
    截断按 len(w), 2·len(w), 4·len(w)… 逐级加倍直到拿到证书。
    μ 单射保证非平凡 w 必然终止；cap 是显式硬上限。
    """
    if w.is_identity():
        raise PreconditionError("单位元没有剩余见证")
    n = min(max(1, len(w)), cap)
    while True:
        deadline.check()
        result = gamma_weight(w, n)
        if isinstance(result, GammaCertificate):
            return result
        if n >= cap:
            raise ResourceCapError(f"截断达到上限 {cap} 仍未找到证书：{format_word(w)}")
        logger.info("residual_witness: trunc=%d 全零，加倍", n)
        n = min(2 * n, cap)


def format_certificate(cert: GammaCertificate, names: Optional[Sequence[str]] = None) -> str:
    names = names if names is not None else cert.word.alphabet.names
    return "\n".join(
        [
            f"word={format_word(cert.word)}",
            f"n={cert.weight}",
            f"trunc={cert.truncation}",
            f"witness={format_series(cert.witness, names)}",
        ]
    )
