from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence, Union

Monomial = tuple[int, ...]  # ξ_{i1}…ξ_{in} 的下标序列，() 为常数单项式
Coefficient = Union[int, Fraction]


def monomial_key(m: Monomial) -> tuple[int, Monomial]:
    """规范序：先按次数，再按下标序列字典序。"""
    return len(m), m


class Series:
    """
    R 的截断元：ξ_1..ξ_q 上非交换幂级数，只保留次数 ≤ trunc 的项，系数为精确有理数。
    不可变；所有运算返回新对象。
    """

    __slots__ = ("rank", "trunc", "_terms")

    def __init__(self, rank: int, trunc: int, terms: Union[Mapping[Monomial, Coefficient], Iterable] = ()) -> None:
        if rank < 1:
            raise ValueError(f"rank 必须 >= 1，收到：{rank}")
        if trunc < 1:
            raise ValueError(f"trunc 必须 >= 1，收到：{trunc}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Monomial, Fraction] = {}
        for mono, coef in items:
            mono = tuple(mono)
            if len(mono) > trunc:
                raise ValueError(f"单项式次数 {len(mono)} 超过截断 {trunc}")
            if any(not 0 <= i < rank for i in mono):
                raise ValueError(f"单项式下标越界：{mono}（rank={rank}）")
            clean[mono] = clean.get(mono, Fraction(0)) + Fraction(coef)
        self.rank = rank
        self.trunc = trunc
        self._terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def _raw(cls, rank: int, trunc: int, terms: dict[Monomial, Fraction]) -> Series:
        obj = cls.__new__(cls)
        obj.rank = rank
        obj.trunc = trunc
        obj._terms = {m: c for m, c in terms.items() if c}
        return obj

    @classmethod
    def zero(cls, rank: int, trunc: int) -> Series:
        return cls(rank, trunc)

    @classmethod
    def scalar(cls, value: Coefficient, rank: int, trunc: int) -> Series:
        return cls(rank, trunc, {(): value})

    @classmethod
    def one(cls, rank: int, trunc: int) -> Series:
        return cls.scalar(1, rank, trunc)

    @classmethod
    def xi(cls, index: int, rank: int, trunc: int) -> Series:
        return cls(rank, trunc, {(index,): 1})

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def scalar_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: monomial_key(kv[0]))

    def degrees(self) -> list[int]:
        return sorted({len(m) for m in self._terms})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.rank == other.rank and self.trunc == other.trunc and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.rank, self.trunc, frozenset(self._terms.items())))

    def __add__(self, other: Series) -> Series:
        return add(self, other)

    def __sub__(self, other: Series) -> Series:
        return sub(self, other)

    def __neg__(self) -> Series:
        return negate(self)

    def __mul__(self, other: Union[Series, Coefficient]) -> Series:
        if isinstance(other, Series):
            return mul(self, other)
        if isinstance(other, Rational):
            return scalar_mul(self, other)
        return NotImplemented

    def __rmul__(self, other: Coefficient) -> Series:
        if isinstance(other, Rational):
            return scalar_mul(self, other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"Series(rank={self.rank}, trunc={self.trunc}, {format_series(self)!r})"

    def __str__(self) -> str:
        return format_series(self)


def _check_compatible(a: Series, b: Series) -> None:
    if a.rank != b.rank or a.trunc != b.trunc:
        raise ValueError(
            f"级数不兼容：rank/trunc {a.rank}/{a.trunc} vs {b.rank}/{b.trunc}（不做静默截断）"
        )


def add(a: Series, b: Series) -> Series:
    _check_compatible(a, b)
    out = dict(a._terms)
    for m, c in b._terms.items():
        out[m] = out.get(m, 0) + c
    return Series._raw(a.rank, a.trunc, out)


def negate(a: Series) -> Series:
    return Series._raw(a.rank, a.trunc, {m: -c for m, c in a._terms.items()})


def sub(a: Series, b: Series) -> Series:
    return add(a, negate(b))


def scalar_mul(a: Series, k: Coefficient) -> Series:
    k = Fraction(k)
    return Series._raw(a.rank, a.trunc, {m: c * k for m, c in a._terms.items()})


def mul(a: Series, b: Series) -> Series:
    """单项式拼接乘法，丢弃次数 > trunc 的乘积。"""
    _check_compatible(a, b)
    n = a.trunc
    by_degree: dict[int, list[tuple[Monomial, Fraction]]] = {}
    for m, c in b._terms.items():
        by_degree.setdefault(len(m), []).append((m, c))
    out: dict[Monomial, Fraction] = {}
    for m1, c1 in a._terms.items():
        room = n - len(m1)
        for d in range(room + 1):
            for m2, c2 in by_degree.get(d, ()):
                key = m1 + m2
                out[key] = out.get(key, 0) + c1 * c2
    return Series._raw(a.rank, n, out)


def unit_inverse(a: Series) -> Series:
    """a = r0(1+u) 时 a⁻¹ = r0⁻¹(1 − u + u² − …)，截断到 trunc。"""
    r0 = a.scalar_term
    if r0 == 0:
        raise ValueError("常数项为 0，不是 R 中的单位")
    inv0 = 1 / r0
    u = scalar_mul(sub(a, Series.scalar(r0, a.rank, a.trunc)), inv0)
    one = Series.one(a.rank, a.trunc)
    acc = one
    for _ in range(a.trunc):
        acc = sub(one, mul(u, acc))
    return scalar_mul(acc, inv0)


def binomial(e: Coefficient, k: int) -> Fraction:
    """广义二项式系数 C(e, k) = e(e−1)…(e−k+1)/k!"""
    out = Fraction(1)
    e = Fraction(e)
    for i in range(k):
        out = out * (e - i) / (i + 1)
    return out


def unit_pow_rational(a: Series, e: Coefficient) -> Series:
    """(1+u)^e = Σ C(e,k) u^k；要求常数项恰为 1。"""
    if a.scalar_term != 1:
        raise ValueError(f"unit_pow_rational 要求常数项为 1，收到：{a.scalar_term}")
    e = Fraction(e)
    one = Series.one(a.rank, a.trunc)
    u = sub(a, one)
    acc = dict(one._terms)
    power = one
    coef = Fraction(1)
    for k in range(1, a.trunc + 1):
        coef = coef * (e - k + 1) / k
        if coef == 0:
            break
        power = mul(power, u)
        if power.is_zero():
            break
        for m, c in power._terms.items():
            acc[m] = acc.get(m, 0) + coef * c
    return Series._raw(a.rank, a.trunc, acc)


def homogeneous_component(a: Series, n: int) -> Series:
    if not 0 <= n <= a.trunc:
        raise ValueError(f"次数 n 必须在 0~{a.trunc}，收到：{n}")
    return Series._raw(a.rank, a.trunc, {m: c for m, c in a._terms.items() if len(m) == n})


@dataclass(frozen=True)
class Valuation:
    value: Optional[int]  # None 表示 Infinite（零级数）
    lower_bound: bool = False  # True：截断内全为零，真实值只知 ≥ value

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        if self.value is None:
            return "inf"
        return f">={self.value}" if self.lower_bound else str(self.value)


INFINITE = Valuation(None)


def valuation(a: Series, truncated: bool = False) -> Valuation:
    """
    第一个非零齐次分量的次数（常数项算 0 次）。
    truncated=True 表示 a 是某个可能非零元素的截断：全零时报告 ≥ trunc+1。
    """
    if a.is_zero():
        return Valuation(a.trunc + 1, lower_bound=True) if truncated else INFINITE
    return Valuation(min(len(m) for m in a._terms))


def metric(a: Series) -> Fraction:
    """d(a, 0) = 2^{-valuation}，d(0, 0) = 0；只对 R⁺ 中元素定义。"""
    if a.scalar_term != 0:
        raise ValueError("metric 只对常数项为 0 的元素（R⁺）定义")
    v = valuation(a)
    if v.is_infinite:
        return Fraction(0)
    return Fraction(1, 2 ** v.value)


def default_names(rank: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(rank))


def format_series(a: Series, names: Optional[Sequence[str]] = None, header: bool = False) -> str:
    names = tuple(names) if names is not None else default_names(a.rank)
    if len(names) < a.rank:
        raise ValueError(f"名称个数 {len(names)} 少于 rank {a.rank}")
    parts: list[str] = []
    for mono, coef in a.sorted_terms():
        mag = abs(coef)
        if not mono:
            body = str(mag)
        else:
            word = ".".join(names[i] for i in mono)
            body = word if mag == 1 else f"{mag}*{word}"
        if not parts:
            parts.append(f"-{body}" if coef < 0 else body)
        else:
            parts.append(f"- {body}" if coef < 0 else f"+ {body}")
    text = " ".join(parts) if parts else "0"
    if header:
        return f"rank={a.rank} trunc={a.trunc}\n{text}"
    return text


_HEADER_RE = re.compile(r"rank=(\d+)\s+trunc=(\d+)")
_NUMBER_RE = re.compile(r"\d+(?:/\d+)?")


def parse_series(
    text: str,
    names: Optional[Sequence[str]] = None,
    rank: Optional[int] = None,
    trunc: Optional[int] = None,
) -> Series:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if lines and _HEADER_RE.fullmatch(lines[0]):
        m = _HEADER_RE.fullmatch(lines[0])
        rank, trunc = int(m.group(1)), int(m.group(2))
        lines = lines[1:]
    if rank is None or trunc is None:
        raise ValueError("缺少 rank/trunc：需要头部行 'rank=<q> trunc=<N>' 或显式参数")
    if len(lines) != 1:
        raise ValueError(f"级数正文必须恰好一行，收到 {len(lines)} 行")
    names = tuple(names) if names is not None else default_names(rank)
    lookup = {n: i for i, n in enumerate(names)}
    body = lines[0]
    if body == "0":
        return Series.zero(rank, trunc)
    tokens = re.split(r"\s*([+-])\s*", body)
    if tokens[0] == "":
        tokens = tokens[1:]
    else:
        tokens = ["+"] + tokens
    terms: dict[Monomial, Fraction] = {}
    for sign, term in zip(tokens[0::2], tokens[1::2]):
        if _NUMBER_RE.fullmatch(term):
            coef, word = Fraction(term), ""
        elif "*" in term:
            raw, word = term.split("*", 1)
            if not _NUMBER_RE.fullmatch(raw):
                raise ValueError(f"系数不合法：{raw!r}")
            coef = Fraction(raw)
        else:
            coef, word = Fraction(1), term
        try:
            mono = tuple(lookup[n] for n in word.split(".")) if word else ()
        except KeyError as ex:
            raise ValueError(f"未知不定元：{ex.args[0]!r}") from None
        value = -coef if sign == "-" else coef
        terms[mono] = terms.get(mono, Fraction(0)) + value
    return Series(rank, trunc, terms)
