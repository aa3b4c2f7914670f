"""
下中心列：幂零商（逐层加尾、一致性检验）、自由幂零群的 Hall 基 pc 表示、
parafree 逐层比较、G_w 构造。

幂零商从 G/γ_1(G) = 1 出发逐层扩张：已有的一致 pc 表示 P = G/γ_n(G) 上，
每条不是"定义"的关系（生成元的像、权和 <= n 的换位子、幂关系）添一个中心尾生成元；
一致性检验的差值与关系子的像给出尾之间的整数关系。关系矩阵的 Smith 标准形即第 n 层，
Hermite 标准形给出下一层的新生成元。

F/γ_{c+1}(F) 的 Hall 基表示另有一条路：换位子关系的尾直接从 Magnus 展开逐层剥离读出。
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Optional, Sequence

import pandas as pd
from sympy import Matrix, Rational

from magnus.config import NO_DEADLINE, Deadline, ResourceCaps
from magnus.errors import PreconditionError, ResourceCapError
from magnus.freewords import (
    Alphabet,
    GroupWord,
    Presentation,
    commutator,
    exponent_sums,
    format_word,
    multiply,
    reduce,
)
from magnus.hall import basic_commutator_word, format_basic, hall_basis, witt_number
from magnus.magnus_map import expand
from magnus.magnus_series import Monomial, Series, homogeneous_component, mul, unit_inverse, unit_pow_rational
from magnus.pcgroup import Collector, PcPresentation, Vec
from magnus.smith import AbelianInvariants, IntMatrix, hermite_rows, pivot_columns

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LayerVerdict:
    layer: int
    group: AbelianInvariants
    reference: AbelianInvariants
    equal: bool
    detail: str = ""


# ---------------------------------------------------------------------------
# Hall 坐标：Magnus 级数 -> pc 指数向量
# ---------------------------------------------------------------------------


def _rational(x: Fraction) -> Rational:
    return Rational(x.numerator, x.denominator)


class _LayerSolver:
    """解 target = Σ e_b L_b，L_b 为 n 次基本换位子 Magnus 首项（线性无关），只接受整数解。"""

    def __init__(self, rows: Sequence[dict[Monomial, Fraction]]) -> None:
        self.columns = sorted({m for r in rows for m in r})
        self.known = frozenset(self.columns)
        self.system: Optional[Matrix] = None
        if not rows:
            return
        # system 的第 b 列是第 b 个首项，方程组 system · e = target
        self.system = Matrix(
            len(self.columns), len(rows), lambda i, j: _rational(rows[j].get(self.columns[i], Fraction(0)))
        )
        if self.system.rank() < len(rows):
            raise RuntimeError("基本换位子的 Magnus 首项线性相关")
        self.left_inverse = (self.system.T * self.system).inv() * self.system.T

    def solve(self, target: Series) -> list[int]:
        terms = target.terms
        if self.system is None or not self.known.issuperset(terms):
            raise RuntimeError("齐次分量不在基本换位子首项张成的空间里")
        rhs = Matrix([_rational(terms.get(c, Fraction(0))) for c in self.columns])
        coords = self.left_inverse * rhs
        if self.system * coords != rhs:
            raise RuntimeError("齐次分量不在基本换位子首项张成的空间里")
        if not all(x.is_integer for x in coords):
            raise RuntimeError(f"Hall 坐标不是整数：{list(coords)}")
        return [int(x) for x in coords]


class _HallCoordinates:
    def __init__(self, rank: int, cls: int) -> None:
        self.rank = rank
        self.cls = cls
        self.basis = hall_basis(rank, cls)
        alphabet = Alphabet.numbered(rank)
        self.images = [expand(basic_commutator_word(self.basis, b.id, alphabet), cls) for b in self.basis]
        self.layers = {n: [b.id for b in self.basis if b.weight == n] for n in range(1, cls + 1)}
        self.solvers = {
            n: _LayerSolver([dict(homogeneous_component(self.images[i], n).terms) for i in ids])
            for n, ids in self.layers.items()
        }

    def peel(self, s: Series) -> Vec:
        """μ(g) -> g 在 F/γ_{c+1}(F) 中的 pc 指数向量。"""
        one = Series.one(self.rank, self.cls)
        coords = [0] * len(self.basis)
        for n in range(1, self.cls + 1):
            part = homogeneous_component(s, n)
            if part.is_zero():
                continue
            factor = one
            for cid, e in zip(self.layers[n], self.solvers[n].solve(part)):
                if e:
                    coords[cid] = e
                    factor = mul(factor, unit_pow_rational(self.images[cid], e))
            s = mul(unit_inverse(factor), s)
        if s != one:
            raise RuntimeError("Hall 坐标剥离后残差非零")
        return tuple(coords)


def _check_class(cls: int, caps: ResourceCaps) -> None:
    if cls < 1:
        raise ValueError(f"class 必须 >= 1，收到：{cls}")
    if cls > caps.max_class:
        raise ResourceCapError(f"class {cls} 超过上限 {caps.max_class}（可用 MAGNUS_CAPS 调高）")


def _check_size(size: int, caps: ResourceCaps, what: str) -> None:
    if size > caps.max_pc_gens:
        raise ResourceCapError(f"pc 生成元个数 {size} 超过上限 {caps.max_pc_gens}（{what}）")


def _free_size(rank: int, cls: int, caps: ResourceCaps) -> None:
    _check_size(sum(witt_number(rank, n) for n in range(1, cls + 1)), caps, f"rank={rank} class={cls}")


@lru_cache(maxsize=16)
def _free_nilpotent(rank: int, cls: int) -> PcPresentation:
    coords = _HallCoordinates(rank, cls)
    basis = coords.basis
    alphabet = Alphabet.numbered(rank)
    words = [basic_commutator_word(basis, b.id, alphabet) for b in basis]
    comms: dict[tuple[int, int], Vec] = {}
    for j, bj in enumerate(basis):
        for i in range(j):
            if basis[i].weight + bj.weight > cls:
                break
            tail = coords.peel(expand(commutator(words[j], words[i]), cls))
            if any(tail):
                comms[(j, i)] = tail
    logger.info("free_nilpotent_presentation: rank=%d class=%d pc 生成元=%d 非平凡换位子=%d",
                rank, cls, len(basis), len(comms))
    return PcPresentation(
        weights=tuple(b.weight for b in basis),
        orders=(None,) * len(basis),
        commutators=MappingProxyType(comms),
        powers=MappingProxyType({}),
        labels=tuple(format_basic(basis, b.id, alphabet.names) for b in basis),
    )


def free_nilpotent_presentation(rank: int, cls: int, caps: Optional[ResourceCaps] = None) -> PcPresentation:
    """秩 rank 自由群的 class-cls 幂零商，pc 生成元为 Hall 基（前 rank 个即自由生成元）。"""
    if rank < 1:
        raise ValueError(f"rank 必须 >= 1，收到：{rank}")
    caps = caps or ResourceCaps()
    _check_class(cls, caps)
    _free_size(rank, cls, caps)
    return _free_nilpotent(rank, cls)


def hall_coordinates(
    w: GroupWord, cls: int, caps: Optional[ResourceCaps] = None
) -> list[tuple[str, int]]:
    """w 在 F/γ_{cls+1}(F) 中的收集形：按 Hall 基顺序给出非零指数的 (基本换位子, 指数)。"""
    pres = free_nilpotent_presentation(w.alphabet.rank, cls, caps)
    v = Collector(pres).collect(w.syllables)
    names = w.alphabet.names
    basis = hall_basis(w.alphabet.rank, cls)
    return [(format_basic(basis, k, names), e) for k, e in enumerate(v) if e]


# ---------------------------------------------------------------------------
# 幂零商：逐层加尾
# ---------------------------------------------------------------------------

# 关系的来源，同时用作 pc 生成元的"定义"：
# ("image", l) 生成元 x_l 的像；("commutator", j, i) 换位子 [g_j, g_i]；("power", i) g_i 的幂关系
Source = tuple


@dataclass(frozen=True)
class _Quotient:
    """G/γ_{n+1}(G) 的一致 pc 表示，images[l] 为 x_l 的像，definitions[k] 为 g_k 的来源关系。"""

    pres: PcPresentation
    images: tuple[Vec, ...]
    definitions: tuple[Source, ...]

    @classmethod
    def trivial(cls, rank: int) -> _Quotient:
        return cls(PcPresentation(weights=(), orders=()), ((),) * rank, ())


def _tail_sources(q: _Quotient, n: int) -> list[Source]:
    """需要添尾的关系：定义关系与权和超过 n 的换位子除外。"""
    pres, defined = q.pres, set(q.definitions)
    m = pres.size
    sources: list[Source] = [("image", l) for l in range(len(q.images))]
    sources += [
        ("commutator", j, i)
        for j in range(m)
        for i in range(j)
        if pres.weights[i] + pres.weights[j] <= n
    ]
    sources += [("power", i) for i in range(m) if pres.orders[i] is not None]
    return [s for s in sources if s not in defined]


class _Layer:
    """第 n 层：P 加上尾生成元得到的中心扩张 E，以及尾之间的关系。"""

    def __init__(self, q: _Quotient, n: int) -> None:
        self.q = q
        self.n = n
        pres = q.pres
        self.m = pres.size
        self.sources = _tail_sources(q, n)
        self.tail_of = {s: self.m + k for k, s in enumerate(self.sources)}
        self.t = len(self.sources)
        zero = (0,) * self.m
        comms = {
            key: self._with_tail(pres.commutators.get(key, zero), ("commutator", *key))
            for key in set(pres.commutators) | {s[1:] for s in self.sources if s[0] == "commutator"}
        }
        powers = {i: self._with_tail(tail, ("power", i)) for i, tail in pres.powers.items()}
        self.ext = PcPresentation(
            weights=pres.weights + (n,) * self.t,
            orders=pres.orders + (None,) * self.t,
            commutators=MappingProxyType(comms),
            powers=MappingProxyType(powers),
        )
        self.col = Collector(self.ext)
        self.images = [self._with_tail(v, ("image", l)) for l, v in enumerate(q.images)]
        self.relations: list[list[int]] = []

    def _with_tail(self, v: Vec, source: Source) -> Vec:
        out = list(v) + [0] * self.t
        k = self.tail_of.get(source)
        if k is not None:
            out[k] += 1
        return tuple(out)

    def _record(self, lhs: Vec, rhs: Vec, what: str) -> None:
        m = self.m
        if lhs[:m] != rhs[:m]:
            raise RuntimeError(f"第 {self.n} 层 {what}：差值不在尾生成元上，上一层的商不一致")
        row = [a - b for a, b in zip(lhs[m:], rhs[m:])]
        if any(row):
            self.relations.append(row)

    def impose_consistency(self, deadline: Deadline) -> None:
        for what, lhs, rhs in self.col.consistency_tests(max_weight=self.n, limit=self.m):
            deadline.check()
            self._record(lhs, rhs, what)

    def impose_relators(self, relators: Sequence[GroupWord], deadline: Deadline) -> None:
        col = self.col
        for r in relators:
            deadline.check()
            v = col.identity
            for g, e in r.syllables:
                v = col.multiply(v, col.power(self.images[g], e))
            self._record(v, col.identity, f"关系子 {format_word(r)}")

    def invariants(self) -> AbelianInvariants:
        return AbelianInvariants.from_relations(IntMatrix(self.relations, cols=self.t), self.t)

    def next_quotient(self) -> _Quotient:
        """按关系矩阵的 Hermite 标准形消去主元为 1 的尾，其余尾成为第 n 层的新生成元。"""
        h = hermite_rows(IntMatrix(self.relations, cols=self.t))
        rows = h.to_list()
        pivots = pivot_columns(h)
        pivot_at = {c: rows[r][c] for r, c in enumerate(pivots)}
        kept = [c for c in range(self.t) if pivot_at.get(c, 0) != 1]
        m = self.m

        def normal(v: Sequence[int]) -> Vec:
            v = list(v)
            for row, c in zip(rows, pivots):
                q = v[c] // row[c]
                if q:
                    v = [a - q * b for a, b in zip(v, row)]
            return tuple(v[c] for c in kept)

        def rewrite(v: Vec) -> Vec:
            return v[:m] + normal(v[m:])

        ext = self.ext
        comms = {key: rewrite(tail) for key, tail in ext.commutators.items()}
        powers = {i: rewrite(tail) for i, tail in ext.powers.items()}
        orders = list(ext.orders[:m])
        for k, c in enumerate(kept):
            d = pivot_at.get(c)
            orders.append(d)
            if d is not None:
                powers[m + k] = (0,) * m + normal([d if j == c else 0 for j in range(self.t)])
        pres = PcPresentation(
            weights=ext.weights[:m] + (self.n,) * len(kept),
            orders=tuple(orders),
            commutators=MappingProxyType({key: v for key, v in comms.items() if any(v)}),
            powers=MappingProxyType(powers),
        )
        return _Quotient(
            pres,
            tuple(rewrite(v) for v in self.images),
            self.q.definitions + tuple(self.sources[c] for c in kept),
        )


def _quotient_series(
    p: Presentation, cls: int, caps: ResourceCaps, deadline: Deadline
) -> list[tuple[_Quotient, AbelianInvariants]]:
    """逐层扩张到 G/γ_{cls+1}(G)；第 n 项为 (G/γ_{n+1}(G) 的表示, 第 n 层)。"""
    relators = p.nontrivial_relators()
    q = _Quotient.trivial(p.rank)
    out = []
    for n in range(1, cls + 1):
        deadline.check()
        layer = _Layer(q, n)
        layer.impose_consistency(deadline)
        layer.impose_relators(relators, deadline)
        q = layer.next_quotient()
        _check_size(q.pres.size, caps, f"class {n} 商")
        out.append((q, layer.invariants()))
        logger.info("nilpotent_quotient: layer %d = %s（尾 %d 个，关系 %d 条，商的 pc 生成元 %d 个）",
                    n, out[-1][1], layer.t, len(layer.relations), q.pres.size)
    return out


def abelianization(p: Presentation) -> AbelianInvariants:
    """关系子指数和矩阵直接做 Smith 标准形。"""
    rows = [list(exponent_sums(r)) for r in p.relators]
    return AbelianInvariants.from_relations(IntMatrix(rows, cols=p.rank), p.rank)


def nilpotent_quotient(
    p: Presentation,
    cls: int,
    caps: Optional[ResourceCaps] = None,
    deadline: Deadline = NO_DEADLINE,
) -> list[AbelianInvariants]:
    """返回 γ_n(G)/γ_{n+1}(G)，n = 1..cls。"""
    caps = caps or ResourceCaps()
    _check_class(cls, caps)
    if not p.nontrivial_relators():
        _free_size(p.rank, cls, caps)
        return [AbelianInvariants.free(witt_number(p.rank, n)) for n in range(1, cls + 1)]
    return [layer for _, layer in _quotient_series(p, cls, caps, deadline)]


def parafree_compare(
    p: Presentation,
    reference_rank: int,
    cls: int,
    caps: Optional[ResourceCaps] = None,
    deadline: Deadline = NO_DEADLINE,
) -> list[LayerVerdict]:
    """
    逐层与秩 reference_rank 的自由群比较。全部 Equal 只是 parafree 的必要条件，
    剩余幂零性不在这里判定。
    """
    if reference_rank < 1:
        raise ValueError(f"reference rank 必须 >= 1，收到：{reference_rank}")
    verdicts = []
    for n, group in enumerate(nilpotent_quotient(p, cls, caps, deadline), start=1):
        reference = AbelianInvariants.free(witt_number(reference_rank, n))
        equal = group == reference
        detail = "" if equal else f"{group.format()} != {reference.format()}"
        verdicts.append(LayerVerdict(n, group, reference, equal, detail))
    return verdicts


def parafree_remark(p: Presentation, reference_rank: int, verdicts: Sequence[LayerVerdict]) -> str:
    if not all(v.equal for v in verdicts):
        return "存在不一致的层：G 不与该秩自由群有相同的下中心商"
    tested = len(verdicts)
    if p.rank > reference_rank:
        return (
            f"前 {tested} 层一致；生成元 {p.rank} 个 > {reference_rank}："
            f"与秩 {reference_rank} 自由群下中心商相同而非自由的有限生成群必须多于 {reference_rank} 个生成元"
        )
    return f"前 {tested} 层一致（仅为 parafree 的必要条件）"


# ---------------------------------------------------------------------------
# 构造
# ---------------------------------------------------------------------------


def free_presentation(rank: int) -> Presentation:
    return Presentation(Alphabet.numbered(rank), ())


def gw_alphabet(q: int) -> Alphabet:
    if q < 1:
        raise ValueError(f"q 必须 >= 1，收到：{q}")
    return Alphabet.from_names(["s", "t"] + [f"a{i + 1}" for i in range(q)])


def build_gw(q: int, w: GroupWord) -> Presentation:
    """<s, t, a1..aq ; a1⁻¹·w·[s,t]>"""
    alphabet = gw_alphabet(q)
    if w.alphabet != alphabet:
        w = reduce(alphabet, ((alphabet.index_of(w.alphabet.names[g]), e) for g, e in w.syllables))
    used = {g for g, _ in w.syllables}
    if 0 in used:
        raise PreconditionError(f"w 不能含 s：{format_word(w)}")
    if 2 not in used:
        raise PreconditionError(f"w 必须含 a1：{format_word(w)}")
    sums = exponent_sums(w)
    if any(sums):
        detail = ", ".join(f"{n}={e}" for n, e in zip(alphabet.names, sums) if e)
        raise PreconditionError(f"w 的指数和必须全为 0（w 不在换位子子群里）：{detail}")
    s, t, a1 = alphabet.gen("s"), alphabet.gen("t"), alphabet.gen("a1")
    relator = multiply(multiply(a1.inverse(), w), commutator(s, t))
    return Presentation(alphabet, (relator,))


def build_surface(genus: int) -> Presentation:
    """<a1, b1, …, ag, bg ; [a1,b1]…[ag,bg]>"""
    if genus < 1:
        raise ValueError(f"genus 必须 >= 1，收到：{genus}")
    alphabet = Alphabet.from_names(n for i in range(genus) for n in (f"a{i + 1}", f"b{i + 1}"))
    relator = alphabet.identity()
    for i in range(genus):
        relator = multiply(relator, commutator(alphabet.gen(2 * i), alphabet.gen(2 * i + 1)))
    return Presentation(alphabet, (relator,))


# ---------------------------------------------------------------------------
# 输出
# ---------------------------------------------------------------------------


def _torsion_text(a: AbelianInvariants) -> str:
    return ",".join(str(d) for d in a.torsion)


def layer_table(layers: Sequence[AbelianInvariants]) -> str:
    df = pd.DataFrame(
        {
            "layer": list(range(1, len(layers) + 1)),
            "invariants": [a.format() for a in layers],
        }
    )
    return df.to_string(index=False)


def verdict_table(verdicts: Sequence[LayerVerdict]) -> str:
    df = pd.DataFrame(
        {
            "layer": [v.layer for v in verdicts],
            "group": [v.group.format() for v in verdicts],
            "reference": [v.reference.format() for v in verdicts],
            "verdict": ["Equal" if v.equal else "Differ" for v in verdicts],
        }
    )
    return df.to_string(index=False)


def layer_lines(layers: Sequence[AbelianInvariants]) -> list[str]:
    return [
        f"layer={n} rank={a.free_rank} torsion={_torsion_text(a)}"
        for n, a in enumerate(layers, start=1)
    ]


def verdict_lines(verdicts: Sequence[LayerVerdict]) -> list[str]:
    return [
        f"layer={v.layer} rank={v.group.free_rank} torsion={_torsion_text(v.group)} "
        f"verdict={'equal' if v.equal else 'differ'}"
        for v in verdicts
    ]
