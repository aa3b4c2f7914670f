"""
Whitehead 自同构与循环长度极小化。

第二类自同构由带符号乘子 a 与每个其余生成元 x 的取值 {x, xa, a⁻¹x, a⁻¹xa} 决定，
乘子所在生成元保持不动。极小化只做严格下降：某个第二类自同构能缩短循环长度就取缩短最多者，
并列时取枚举顺序中的第一个；Whitehead 峰值约化保证这样到达轨道上的最小长度。
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

from magnus.config import NO_DEADLINE, Deadline
from magnus.errors import AlphabetMismatchError, PreconditionError, ResourceCapError
from magnus.freewords import (
    Alphabet,
    GroupWord,
    cyclic_reduce,
    format_word,
    from_letters,
    is_proper_power,
    letters,
    multiply,
    power,
)

logger = logging.getLogger(__name__)

AutoKind = Literal["permutation", "type2"]
ASSIGNMENTS = ("x", "xa", "a^-1x", "a^-1xa")
DEFAULT_MAX_RANK = 5


@dataclass(frozen=True)
class WhiteheadAuto:
    """
    permutation：images[i] = ±(j+1) 表示 x_i ↦ x_j^{±1}；
    type2：multiplier = ±(m+1) 为乘子字母，assignment[i] 取自 ASSIGNMENTS，assignment[m] 必须为 "x"。
    """

    rank: int
    kind: AutoKind
    images: tuple[int, ...] = ()
    multiplier: int = 0
    assignment: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == "permutation":
            if sorted(abs(x) for x in self.images) != list(range(1, self.rank + 1)):
                raise ValueError(f"置换像不合法：{self.images}")
        elif self.kind == "type2":
            m = abs(self.multiplier) - 1
            if not 0 <= m < self.rank:
                raise ValueError(f"乘子字母越界：{self.multiplier}")
            if len(self.assignment) != self.rank or any(c not in ASSIGNMENTS for c in self.assignment):
                raise ValueError(f"取值不合法：{self.assignment}")
            if self.assignment[m] != "x":
                raise ValueError("乘子所在生成元必须保持不动")
        else:
            raise ValueError(f"未知自同构类型：{self.kind!r}")


@dataclass(frozen=True)
class CyclicWord:
    """共轭类代表：循环约化后取字母序（a < a⁻¹ < b < b⁻¹ …）最小的轮换。"""

    word: GroupWord

    @classmethod
    def from_word(cls, w: GroupWord) -> CyclicWord:
        core, _ = cyclic_reduce(w)
        seq = letters(core)
        if not seq:
            return cls(core)
        keys = [2 * (abs(x) - 1) + (x < 0) for x in seq]
        best = min(range(len(seq)), key=lambda k: keys[k:] + keys[:k])
        return cls(from_letters(w.alphabet, seq[best:] + seq[:best]))

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return format_word(self.word)


def _letter_word(alphabet: Alphabet, letter: int) -> GroupWord:
    return alphabet.gen(abs(letter) - 1, 1 if letter > 0 else -1)


def generator_images(auto: WhiteheadAuto, alphabet: Alphabet) -> list[GroupWord]:
    if auto.rank != alphabet.rank:
        raise AlphabetMismatchError(f"自同构 rank {auto.rank} 与字母表 rank {alphabet.rank} 不符")
    if auto.kind == "permutation":
        return [_letter_word(alphabet, x) for x in auto.images]
    a = _letter_word(alphabet, auto.multiplier)
    a_inv = a.inverse()
    out = []
    for i, code in enumerate(auto.assignment):
        x = alphabet.gen(i)
        if code == "xa":
            x = multiply(x, a)
        elif code == "a^-1x":
            x = multiply(a_inv, x)
        elif code == "a^-1xa":
            x = multiply(multiply(a_inv, x), a)
        out.append(x)
    return out


def apply(auto: WhiteheadAuto, w: GroupWord, images: Optional[Sequence[GroupWord]] = None) -> GroupWord:
    """把 w 中每个生成元替换成它的像，结果自由约化。"""
    if images is None:
        images = generator_images(auto, w.alphabet)
    out = w.alphabet.identity()
    for g, e in w.syllables:
        out = multiply(out, power(images[g], e))
    return out


def invert_auto(auto: WhiteheadAuto) -> WhiteheadAuto:
    if auto.kind == "type2":
        return WhiteheadAuto(auto.rank, "type2", multiplier=-auto.multiplier, assignment=auto.assignment)
    inverse = [0] * auto.rank
    for i, x in enumerate(auto.images):
        inverse[abs(x) - 1] = (i + 1) if x > 0 else -(i + 1)
    return WhiteheadAuto(auto.rank, "permutation", images=tuple(inverse))


def enumerate_autos(rank: int, dedup: bool = True, max_rank: int = DEFAULT_MAX_RANK) -> list[WhiteheadAuto]:
    """
    规范枚举顺序：先第二类（乘子下标升序，符号先正后负，取值按笛卡尔积顺序），
    再带符号置换。dedup=True 时按生成元像去重，保留首次出现者。
    """
    if rank < 1:
        raise ValueError(f"rank 必须 >= 1，收到：{rank}")
    if rank > max_rank:
        raise ResourceCapError(f"rank {rank} 超过 Whitehead 枚举上限 {max_rank}")
    autos: list[WhiteheadAuto] = []
    for m in range(rank):
        for sign in (1, -1):
            for choice in itertools.product(ASSIGNMENTS, repeat=rank - 1):
                assignment = choice[:m] + ("x",) + choice[m:]
                autos.append(WhiteheadAuto(rank, "type2", multiplier=sign * (m + 1), assignment=assignment))
    for perm in itertools.permutations(range(1, rank + 1)):
        for signs in itertools.product((1, -1), repeat=rank):
            autos.append(WhiteheadAuto(rank, "permutation", images=tuple(s * p for s, p in zip(signs, perm))))
    if not dedup:
        return autos
    alphabet = Alphabet.numbered(rank)
    seen: set[tuple] = set()
    unique = []
    for auto in autos:
        key = tuple(img.syllables for img in generator_images(auto, alphabet))
        if key not in seen:
            seen.add(key)
            unique.append(auto)
    return unique


def format_auto(auto: WhiteheadAuto, names: Sequence[str]) -> str:
    alphabet = Alphabet.from_names(names)
    images = generator_images(auto, alphabet)
    if auto.kind == "permutation":
        body = ", ".join(f"{n}->{format_word(img)}" for n, img in zip(names, images))
        return f"perm({body})"
    m = abs(auto.multiplier) - 1
    moved = [f"{names[i]}->{format_word(img)}" for i, img in enumerate(images) if i != m and auto.assignment[i] != "x"]
    mult = format_word(_letter_word(alphabet, auto.multiplier))
    return f"type2(mult={mult}; {', '.join(moved) or 'id'})"


def minimize(
    w: GroupWord,
    max_rank: int = DEFAULT_MAX_RANK,
    deadline: Deadline = NO_DEADLINE,
) -> tuple[CyclicWord, list[WhiteheadAuto]]:
    if w.is_identity():
        raise PreconditionError("单位元不能做 Whitehead 极小化")
    alphabet = w.alphabet
    moves = [
        (auto, generator_images(auto, alphabet))
        for auto in enumerate_autos(alphabet.rank, max_rank=max_rank)
        if auto.kind == "type2"
    ]
    current = CyclicWord.from_word(w)
    path: list[WhiteheadAuto] = []
    while True:
        deadline.check()
        best: Optional[tuple[WhiteheadAuto, CyclicWord]] = None
        best_len = len(current)
        for auto, images in moves:
            cand = CyclicWord.from_word(apply(auto, current.word, images))
            if len(cand) < best_len:
                best, best_len = (auto, cand), len(cand)
        if best is None:
            return current, path
        path.append(best[0])
        current = best[1]
        logger.debug("minimize: 第 %d 步，循环长度 -> %d", len(path), best_len)


def is_primitive(w: GroupWord, max_rank: int = DEFAULT_MAX_RANK) -> bool:
    if is_proper_power(w):
        return False
    minimal, _ = minimize(w, max_rank=max_rank)
    return len(minimal) == 1
