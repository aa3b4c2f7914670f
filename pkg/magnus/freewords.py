from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence, Union

from magnus.errors import (
    AlphabetMismatchError,
    PreconditionError,
    UnknownGeneratorError,
    WordSyntaxError,
)

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_INT_RE = re.compile(r"-?[1-9][0-9]*")
_POS_INT_RE = re.compile(r"[1-9][0-9]*")

Syllable = tuple[int, int]
ExpSyllable = tuple[int, Fraction]


@dataclass(frozen=True)
class Generator:
    index: int
    name: str


@dataclass(frozen=True)
class Alphabet:
    generators: tuple[Generator, ...]
    _lookup: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        lookup: dict[str, int] = {}
        for pos, gen in enumerate(self.generators):
            if gen.index != pos:
                raise ValueError(f"生成元下标必须从 0 连续编号，收到：{gen!r} 位于 {pos}")
            if not _NAME_RE.fullmatch(gen.name):
                raise ValueError(f"生成元名称不合法：{gen.name!r}")
            if gen.name in lookup:
                raise ValueError(f"生成元名称重复：{gen.name!r}")
            lookup[gen.name] = pos
        object.__setattr__(self, "_lookup", lookup)

    @classmethod
    def from_names(cls, names: Iterable[str]) -> Alphabet:
        return cls(tuple(Generator(i, n) for i, n in enumerate(names)))

    @classmethod
    def numbered(cls, rank: int, prefix: str = "x") -> Alphabet:
        if rank < 1:
            raise ValueError(f"rank 必须 >= 1，收到：{rank}")
        return cls.from_names(f"{prefix}{i + 1}" for i in range(rank))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def index_of(self, name: str) -> int:
        try:
            return self._lookup[name]
        except KeyError:
            raise UnknownGeneratorError(f"未知生成元：{name!r}（字母表：{', '.join(self.names)}）") from None

    def identity(self) -> GroupWord:
        return GroupWord(self, ())

    def gen(self, key: Union[int, str], exponent: int = 1) -> GroupWord:
        index = self.index_of(key) if isinstance(key, str) else key
        return reduce(self, [(index, exponent)])

    def gens(self) -> tuple[GroupWord, ...]:
        return tuple(self.gen(i) for i in range(self.rank))


@dataclass(frozen=True)
class GroupWord:
    """
    自由群元素，按音节 (生成元下标, 非零整数指数) 存储的自由约化规范形。
    直接构造时校验规范性；任意输入请走 reduce()。
    """

    alphabet: Alphabet
    syllables: tuple[Syllable, ...] = ()

    def __post_init__(self) -> None:
        prev = -1
        for gen, exp in self.syllables:
            if not 0 <= gen < self.alphabet.rank:
                raise UnknownGeneratorError(f"生成元下标越界：{gen}")
            if exp == 0 or gen == prev:
                raise ValueError(f"音节序列不是约化规范形：{self.syllables!r}")
            prev = gen

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def is_identity(self) -> bool:
        return not self.syllables

    def __mul__(self, other: GroupWord) -> GroupWord:
        return multiply(self, other)

    def __pow__(self, k: int) -> GroupWord:
        return power(self, k)

    def inverse(self) -> GroupWord:
        return invert(self)

    def __str__(self) -> str:
        return format_word(self)


@dataclass(frozen=True)
class ExpWord:
    """有理指数词：𝒟-群里的 x^{p/q}，音节间生成元互异，分母为正。"""

    alphabet: Alphabet
    syllables: tuple[ExpSyllable, ...] = ()

    def __post_init__(self) -> None:
        prev = -1
        for gen, exp in self.syllables:
            if not 0 <= gen < self.alphabet.rank:
                raise UnknownGeneratorError(f"生成元下标越界：{gen}")
            if not isinstance(exp, Fraction) or exp == 0 or gen == prev:
                raise ValueError(f"有理指数音节不是约化规范形：{self.syllables!r}")
            prev = gen

    @classmethod
    def from_word(cls, word: GroupWord) -> ExpWord:
        return cls(word.alphabet, tuple((g, Fraction(e)) for g, e in word.syllables))

    def __mul__(self, other: ExpWord) -> ExpWord:
        _same_alphabet(self.alphabet, other.alphabet)
        return reduce_exp(self.alphabet, self.syllables + other.syllables)

    def inverse(self) -> ExpWord:
        return ExpWord(self.alphabet, tuple((g, -e) for g, e in reversed(self.syllables)))

    def __str__(self) -> str:
        return format_exp_word(self)


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relators: tuple[GroupWord, ...] = ()

    def __post_init__(self) -> None:
        for r in self.relators:
            _same_alphabet(self.alphabet, r.alphabet)

    @property
    def generators(self) -> tuple[Generator, ...]:
        return self.alphabet.generators

    @property
    def rank(self) -> int:
        return self.alphabet.rank

    def nontrivial_relators(self) -> tuple[GroupWord, ...]:
        return tuple(r for r in self.relators if not r.is_identity())


def _same_alphabet(a: Alphabet, b: Alphabet) -> None:
    if a != b:
        raise AlphabetMismatchError(f"字母表不一致：{', '.join(a.names)} vs {', '.join(b.names)}")


def _reduce_pairs(pairs: Iterable[tuple[int, object]]) -> list:
    out: list = []
    for gen, exp in pairs:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            total = out[-1][1] + exp
            if total:
                out[-1] = (gen, total)
            else:
                out.pop()
        else:
            out.append((gen, exp))
    return out


def reduce(alphabet: Alphabet, raw: Iterable[tuple[Union[int, Generator], int]]) -> GroupWord:
    pairs = []
    for gen, exp in raw:
        if isinstance(gen, Generator):
            if not 0 <= gen.index < alphabet.rank or alphabet.generators[gen.index] != gen:
                raise AlphabetMismatchError(f"生成元 {gen.name!r} 不属于字母表 {', '.join(alphabet.names)}")
            gen = gen.index
        if not 0 <= gen < alphabet.rank:
            raise UnknownGeneratorError(f"未知生成元下标：{gen}（rank={alphabet.rank}）")
        pairs.append((gen, int(exp)))
    return GroupWord(alphabet, tuple(_reduce_pairs(pairs)))


def reduce_exp(alphabet: Alphabet, raw: Iterable[tuple[int, object]]) -> ExpWord:
    pairs = []
    for gen, exp in raw:
        if not 0 <= gen < alphabet.rank:
            raise UnknownGeneratorError(f"未知生成元下标：{gen}（rank={alphabet.rank}）")
        pairs.append((gen, Fraction(exp)))
    return ExpWord(alphabet, tuple(_reduce_pairs(pairs)))


def multiply(u: GroupWord, v: GroupWord) -> GroupWord:
    _same_alphabet(u.alphabet, v.alphabet)
    return GroupWord(u.alphabet, tuple(_reduce_pairs(u.syllables + v.syllables)))


def invert(u: GroupWord) -> GroupWord:
    return GroupWord(u.alphabet, tuple((g, -e) for g, e in reversed(u.syllables)))


def power(u: GroupWord, k: int) -> GroupWord:
    if k < 0:
        u, k = invert(u), -k
    return GroupWord(u.alphabet, tuple(_reduce_pairs(u.syllables * k)))


def cyclic_reduce(u: GroupWord) -> tuple[GroupWord, GroupWord]:
    """
    返回 (core, conjugator)，满足 u = conjugator · core · conjugator⁻¹，
    且 core 首尾字母不互逆。
    """
    syl = list(u.syllables)
    conj: list[Syllable] = []
    while len(syl) >= 2 and syl[0][0] == syl[-1][0]:
        gen, a = syl[0]
        b = syl[-1][1]
        if (a > 0) == (b > 0):
            break
        sign = 1 if a > 0 else -1
        t = min(abs(a), abs(b))
        conj.append((gen, sign * t))
        inner = syl[1:-1]
        if a - sign * t:
            inner.insert(0, (gen, a - sign * t))
        if b + sign * t:
            inner.append((gen, b + sign * t))
        syl = inner
    core = GroupWord(u.alphabet, tuple(syl))
    return core, GroupWord(u.alphabet, tuple(_reduce_pairs(conj)))


def commutator(u: GroupWord, v: GroupWord) -> GroupWord:
    """[u, v] = u⁻¹ v⁻¹ u v"""
    _same_alphabet(u.alphabet, v.alphabet)
    return GroupWord(
        u.alphabet,
        tuple(_reduce_pairs(invert(u).syllables + invert(v).syllables + u.syllables + v.syllables)),
    )


def left_normed_commutator(words: Sequence[GroupWord]) -> GroupWord:
    if not words:
        raise PreconditionError("left_normed_commutator 需要非空序列")
    acc = words[0]
    for w in words[1:]:
        acc = commutator(acc, w)
    return acc


def letters(w: GroupWord) -> tuple[int, ...]:
    """展开为带符号字母：生成元 i 记作 i+1，其逆记作 -(i+1)。"""
    out: list[int] = []
    for gen, exp in w.syllables:
        letter = gen + 1 if exp > 0 else -(gen + 1)
        out.extend([letter] * abs(exp))
    return tuple(out)


def from_letters(alphabet: Alphabet, seq: Iterable[int]) -> GroupWord:
    return reduce(alphabet, ((abs(x) - 1, 1 if x > 0 else -1) for x in seq))


def exponent_sums(w: GroupWord) -> tuple[int, ...]:
    sums = [0] * w.alphabet.rank
    for gen, exp in w.syllables:
        sums[gen] += exp
    return tuple(sums)


def root(w: GroupWord) -> tuple[GroupWord, int]:
    """返回 (u, k)，w = u^k 且 k 最大；u 本身不是真幂。"""
    if w.is_identity():
        raise PreconditionError("单位元没有根")
    core, conj = cyclic_reduce(w)
    seq = letters(core)
    n = len(seq)
    for d in range(1, n + 1):
        if n % d == 0 and seq[:d] * (n // d) == seq:
            base = from_letters(w.alphabet, seq[:d])
            return multiply(multiply(conj, base), invert(conj)), n // d
    raise AssertionError("unreachable")


def is_proper_power(w: GroupWord) -> bool:
    return root(w)[1] >= 2


# ---------------------------------------------------------------------------
# 文本语法
#   word := term (('*'|' ') term)*
#   term := gen ('^' int)? | '1' | '[' word ',' word ']' | '(' word ')' ('^' int)?
#   int  := '-'? [1-9][0-9]*
# 有理模式下指数还可以是 p/q 或 (p/q)。
# ---------------------------------------------------------------------------


class _WordParser:
    def __init__(self, text: str, alphabet: Alphabet, rational: bool) -> None:
        self.text = text
        self.alphabet = alphabet
        self.rational = rational
        self.pos = 0

    def parse(self) -> list:
        self._skip_ws()
        if self.pos >= len(self.text):
            raise WordSyntaxError("空词", self.pos)
        pairs = self._word()
        self._skip_ws()
        if self.pos != len(self.text):
            raise WordSyntaxError(f"多余字符 {self.text[self.pos]!r}", self.pos)
        return pairs

    def _skip_ws(self) -> bool:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.pos > start

    def _peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expect(self, ch: str) -> None:
        if self._peek() != ch:
            found = self._peek() or "结尾"
            raise WordSyntaxError(f"期望 {ch!r}，遇到 {found!r}", self.pos)
        self.pos += 1

    def _word(self) -> list:
        pairs = self._term()
        while True:
            spaced = self._skip_ws()
            ch = self._peek()
            if ch in ("", ",", "]", ")"):
                return pairs
            if ch == "*":
                self.pos += 1
                self._skip_ws()
            elif not spaced:
                raise WordSyntaxError(f"项之间需要 '*' 或空格，遇到 {ch!r}", self.pos)
            pairs = _reduce_pairs(pairs + self._term())

    def _term(self) -> list:
        ch = self._peek()
        if ch == "[":
            self.pos += 1
            self._skip_ws()
            u = self._word()
            self._expect(",")
            self._skip_ws()
            v = self._word()
            self._expect("]")
            return _reduce_pairs(_inv(u) + _inv(v) + u + v)
        if ch == "(":
            self.pos += 1
            self._skip_ws()
            inner = self._word()
            self._expect(")")
            if self._peek() != "^":
                return inner
            exp_pos = self.pos + 1
            exp = self._exponent()
            if exp.denominator == 1:
                return _pow_pairs(inner, int(exp))
            if len(inner) != 1:
                raise WordSyntaxError("有理指数只能作用在单个生成元的幂上", exp_pos)
            gen, e = inner[0]
            return _reduce_pairs([(gen, e * exp)])
        if ch == "1" and not self.text[self.pos + 1 : self.pos + 2].isdigit():
            self.pos += 1
            return []
        m = _NAME_RE.match(self.text, self.pos)
        if not m:
            found = ch or "结尾"
            raise WordSyntaxError(f"期望生成元、'[' 或 '('，遇到 {found!r}", self.pos)
        self.pos = m.end()
        gen = self.alphabet.index_of(m.group())
        exp = self._exponent() if self._peek() == "^" else Fraction(1)
        return [(gen, exp)]

    def _exponent(self) -> Fraction:
        self._expect("^")
        wrapped = self.rational and self._peek() == "("
        if wrapped:
            self.pos += 1
        m = _INT_RE.match(self.text, self.pos)
        if not m:
            raise WordSyntaxError("指数必须是非零整数（不允许前导 0）", self.pos)
        self.pos = m.end()
        value = Fraction(int(m.group()))
        if self.rational and self._peek() == "/":
            self.pos += 1
            d = _POS_INT_RE.match(self.text, self.pos)
            if not d:
                raise WordSyntaxError("分母必须是正整数", self.pos)
            self.pos = d.end()
            value /= int(d.group())
        if wrapped:
            self._expect(")")
        return value


def _inv(pairs: list) -> list:
    return [(g, -e) for g, e in reversed(pairs)]


def _pow_pairs(pairs: list, k: int) -> list:
    if k < 0:
        pairs, k = _inv(pairs), -k
    return _reduce_pairs(pairs * k)


def parse_word(text: str, alphabet: Alphabet) -> GroupWord:
    pairs = _WordParser(text, alphabet, rational=False).parse()
    return GroupWord(alphabet, tuple((g, int(e)) for g, e in pairs))


def parse_exp_word(text: str, alphabet: Alphabet) -> ExpWord:
    pairs = _WordParser(text, alphabet, rational=True).parse()
    return ExpWord(alphabet, tuple((g, Fraction(e)) for g, e in pairs))


def format_word(w: GroupWord) -> str:
    if w.is_identity():
        return "1"
    names = w.alphabet.names
    return "*".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in w.syllables)


def format_exp_word(w: ExpWord) -> str:
    if not w.syllables:
        return "1"
    names = w.alphabet.names
    return "*".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in w.syllables)


def infer_alphabet(text: str) -> Alphabet:
    """
    从文本推断字母表：全部形如 x<k> 时取 x1..x_max，
    否则按首次出现顺序。
    """
    names: list[str] = []
    for m in _NAME_RE.finditer(text):
        if m.group() not in names:
            names.append(m.group())
    if not names:
        raise WordSyntaxError("文本中没有生成元", 0)
    numbered = [re.fullmatch(r"x([1-9][0-9]*)", n) for n in names]
    if all(numbered):
        return Alphabet.numbered(max(int(m.group(1)) for m in numbered if m))
    return Alphabet.from_names(names)


# ---------------------------------------------------------------------------
# 表示文件：
#   gens: x1, x2
#   rel: [x1,x2]
#   # 注释
# ---------------------------------------------------------------------------


def parse_presentation(text: str) -> Presentation:
    alphabet = None
    relators: list[GroupWord] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, body = line.partition(":")
        key = key.strip()
        if not sep or key not in ("gens", "rel"):
            raise WordSyntaxError(f"第 {lineno} 行：应以 'gens:' 或 'rel:' 开头")
        if key == "gens":
            if alphabet is not None:
                raise WordSyntaxError(f"第 {lineno} 行：重复的 gens 行")
            names = [n.strip() for n in body.split(",") if n.strip()]
            if not names:
                raise WordSyntaxError(f"第 {lineno} 行：gens 为空")
            try:
                alphabet = Alphabet.from_names(names)
            except ValueError as ex:
                raise WordSyntaxError(f"第 {lineno} 行：{ex}") from ex
            continue
        if alphabet is None:
            raise WordSyntaxError(f"第 {lineno} 行：rel 出现在 gens 之前")
        try:
            relators.append(parse_word(body, alphabet))
        except WordSyntaxError as ex:
            raise WordSyntaxError(f"第 {lineno} 行：{ex}") from ex
    if alphabet is None:
        raise WordSyntaxError("缺少 gens 行")
    return Presentation(alphabet, tuple(relators))


def format_presentation(p: Presentation) -> str:
    lines = [f"gens: {', '.join(p.alphabet.names)}"]
    lines += [f"rel: {format_word(r)}" for r in p.relators]
    return "\n".join(lines) + "\n"


def load_presentation(path: Union[str, Path]) -> Presentation:
    return parse_presentation(Path(path).read_text(encoding="utf-8"))
