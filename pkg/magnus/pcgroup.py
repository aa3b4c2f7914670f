"""
加权幂零 pc 表示与左收集。

元素用指数向量 (e_1, …, e_m) 表示 g_1^{e_1} … g_m^{e_m}；有限相对阶 r_i 时 0 <= e_i < r_i。
关系：
- 换位子 [g_j, g_i] = 尾（j > i），尾只含下标 > j、权 >= w_i + w_j 的生成元；
- 幂 g_i^{r_i} = 尾，尾只含下标 > i、权 >= w_i 的生成元（同层的有限阶生成元可以出现）。
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

logger = logging.getLogger(__name__)

Vec = tuple[int, ...]


@dataclass(frozen=True)
class PcPresentation:
    weights: tuple[int, ...]
    orders: tuple[Optional[int], ...]  # None 表示无限阶
    commutators: Mapping[tuple[int, int], Vec] = field(default_factory=dict)
    powers: Mapping[int, Vec] = field(default_factory=dict)
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        m = len(self.weights)
        if len(self.orders) != m:
            raise ValueError(f"orders 长度 {len(self.orders)} 与生成元个数 {m} 不符")
        if any(w < 1 for w in self.weights) or list(self.weights) != sorted(self.weights):
            raise ValueError(f"权必须为正且单调不减，收到：{self.weights}")
        if self.labels and len(self.labels) != m:
            raise ValueError(f"labels 长度 {len(self.labels)} 与生成元个数 {m} 不符")
        for i, r in enumerate(self.orders):
            if r is not None and r < 2:
                raise ValueError(f"g{i} 的相对阶必须 >= 2 或无限，收到：{r}")
            if (r is not None) != (i in self.powers):
                raise ValueError(f"g{i}：有限相对阶与幂关系必须同时给出")
        for (j, i), tail in self.commutators.items():
            if not 0 <= i < j < m:
                raise ValueError(f"换位子关系下标必须满足 j > i，收到：({j}, {i})")
            self._check_tail(tail, j, self.weights[i] + self.weights[j], f"[g{j},g{i}]")
        for i, tail in self.powers.items():
            self._check_tail(tail, i, self.weights[i], f"g{i}^{self.orders[i]}")

    def _check_tail(self, tail: Vec, after: int, min_weight: int, what: str) -> None:
        if len(tail) != len(self.weights):
            raise ValueError(f"{what} 的尾长度不符：{tail}")
        for k, e in enumerate(tail):
            if not e:
                continue
            if k <= after:
                raise ValueError(f"{what} 的尾含 g{k}，要求下标 > {after}")
            if self.weights[k] < min_weight:
                raise ValueError(f"{what} 的尾含权 {self.weights[k]} 的 g{k}，要求权 >= {min_weight}")
            r = self.orders[k]
            if r is not None and not 0 <= e < r:
                raise ValueError(f"{what} 的尾在 g{k} 处指数 {e} 不是规范形")

    @property
    def size(self) -> int:
        return len(self.weights)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"g{i + 1}"

    def layer(self, weight: int) -> list[int]:
        return [i for i, w in enumerate(self.weights) if w == weight]


class Collector:
    """左收集：把右乘一个生成元的幂化归为对更深生成元的递归乘法。"""

    def __init__(self, pres: PcPresentation) -> None:
        self.pres = pres
        self.m = pres.size
        self.identity: Vec = (0,) * self.m
        self._nontrivial = {key for key, tail in pres.commutators.items() if any(tail)}
        touched = {k for key in self._nontrivial for k in key}
        # 无限阶且不出现在任何非平凡换位子关系里的生成元是中心元
        self.central = frozenset(k for k in range(self.m) if pres.orders[k] is None and k not in touched)
        self._conj_minus: dict[tuple[int, int], Vec] = {}
        self._prepare_inverse_conjugates()

    # -- 基本构件 ---------------------------------------------------------

    def unit(self, i: int, e: int = 1) -> Vec:
        return self._times_gen_power(self.identity, i, e)

    def depth(self, v: Vec) -> Optional[int]:
        return next((k for k, e in enumerate(v) if e), None)

    def conjugate(self, j: int, i: int, sign: int) -> Vec:
        """g_i^{-sign} g_j g_i^{sign}，j > i。"""
        if (j, i) not in self._nontrivial:
            return self.identity[:j] + (1,) + self.identity[j + 1 :]
        if sign > 0:
            tail = self.pres.commutators[(j, i)]
            return tail[:j] + (1,) + tail[j + 1 :]
        return self._conj_minus[(j, i)]

    def _conjugate_vec(self, c: Vec, i: int) -> Vec:
        out = self.identity
        for k in range(i + 1, self.m):
            if c[k]:
                out = self.multiply(out, self.power(self.conjugate(k, i, 1), c[k]))
        return out

    def _prepare_inverse_conjugates(self) -> None:
        # 从最深的 i 开始：计算 g_i g_j g_i^{-1} 只用到下标 > i 的乘法。
        # 先让非中心位置收敛，再一次性扣掉像的中心部分；
        # 不一致的中心扩张上直接迭代到不动点可能循环。
        central = self.central
        for i in range(self.m - 1, -1, -1):
            for j in range(i + 1, self.m):
                if (j, i) not in self._nontrivial:
                    continue
                target = self.identity[:j] + (1,) + self.identity[j + 1 :]
                c = target
                for _ in range(self.m + 1):
                    image = self._conjugate_vec(c, i)
                    if all(image[k] == target[k] for k in range(self.m) if k not in central):
                        break
                    c = self.multiply(self.multiply(c, self.inverse(image)), target)
                else:
                    raise RuntimeError(f"g{i} 对 g{j} 的逆共轭迭代不收敛：表示不是加权幂零的")
                self._conj_minus[(j, i)] = tuple(e - image[k] if k in central else e for k, e in enumerate(c))

    # -- 乘法 -------------------------------------------------------------

    def _reduce_power(self, prefix: Vec, i: int, exp: int, tail: Vec) -> Vec:
        """拼出 prefix[:i] · g_i^exp · tail，必要时用幂关系把 exp 规约到 [0, r_i)。"""
        r = self.pres.orders[i]
        if r is not None and not 0 <= exp < r:
            q, exp = divmod(exp, r)
            tail = self.multiply(self.power(self.pres.powers[i], q), tail)
        return prefix[:i] + (exp,) + tail[i + 1 :]

    def _times_gen(self, v: Vec, i: int, sign: int) -> Vec:
        tail = self.identity
        for j in range(i + 1, self.m):
            if v[j]:
                tail = self.multiply(tail, self.power(self.conjugate(j, i, sign), v[j]))
        return self._reduce_power(v, i, v[i] + sign, tail)

    def _times_gen_power(self, v: Vec, i: int, e: int) -> Vec:
        if not e:
            return v
        if all((j, i) not in self._nontrivial for j in range(i + 1, self.m) if v[j]):
            # 后缀与 g_i 交换：整段指数一次加上
            tail = self.identity[: i + 1] + v[i + 1 :]
            return self._reduce_power(v, i, v[i] + e, tail)
        sign = 1 if e > 0 else -1
        for _ in range(abs(e)):
            v = self._times_gen(v, i, sign)
        return v

    def multiply(self, u: Vec, v: Vec) -> Vec:
        for k, e in enumerate(v):
            if e:
                u = self._times_gen_power(u, k, e)
        return u

    def collect(self, syllables: Iterable[tuple[int, int]]) -> Vec:
        v = self.identity
        for i, e in syllables:
            v = self._times_gen_power(v, i, e)
        return v

    def inverse(self, v: Vec) -> Vec:
        out = self.identity
        for k in range(self.m - 1, -1, -1):
            if v[k]:
                out = self._times_gen_power(out, k, -v[k])
        return out

    def power(self, v: Vec, e: int) -> Vec:
        if e < 0:
            v, e = self.inverse(v), -e
        out = self.identity
        while e:
            if e & 1:
                out = self.multiply(out, v)
            e >>= 1
            if e:
                v = self.multiply(v, v)
        return out

    def commutator(self, u: Vec, v: Vec) -> Vec:
        """[u, v] = u⁻¹ v⁻¹ u v"""
        return self.multiply(self.multiply(self.inverse(u), self.inverse(v)), self.multiply(u, v))

    # -- 一致性 -----------------------------------------------------------

    def consistency_tests(
        self, max_weight: Optional[int] = None, limit: Optional[int] = None
    ) -> Iterator[tuple[str, Vec, Vec]]:
        """
        逐个产出 (标签, 左边, 右边)：同一元素按两种结合方式收集的结果。
        只检验前 limit 个生成元；给出 max_weight 时跳过涉及生成元权和超过它的检验
        （那些差值落在更深的下中心项里）。
        """
        m = self.m if limit is None else limit
        weights, orders, powers = self.pres.weights, self.pres.orders, self.pres.powers
        g, mul = self.unit, self.multiply

        def within(*idx: int) -> bool:
            return max_weight is None or sum(weights[k] for k in idx) <= max_weight

        for i in range(m):
            for j in range(i + 1, m):
                for k in range(j + 1, m):
                    if within(i, j, k):
                        yield f"(g{k} g{j}) g{i}", mul(mul(g(k), g(j)), g(i)), mul(g(k), mul(g(j), g(i)))
                if not within(i, j):
                    continue
                if orders[j] is not None:
                    yield f"g{j}^r g{i}", mul(powers[j], g(i)), mul(g(j, orders[j] - 1), mul(g(j), g(i)))
                else:
                    yield f"g{j}^-1 (g{j} g{i})", g(i), mul(g(j, -1), mul(g(j), g(i)))
                if orders[i] is not None:
                    yield f"g{j} g{i}^r", mul(g(j), powers[i]), mul(mul(g(j), g(i)), g(i, orders[i] - 1))
                else:
                    yield f"(g{j} g{i}^-1) g{i}", g(j), mul(mul(g(j), g(i, -1)), g(i))
                    if orders[j] is None:
                        yield f"(g{j}^-1 g{i}^-1) g{i}", g(j, -1), mul(mul(g(j, -1), g(i, -1)), g(i))
            if orders[i] is not None and within(i, i):
                yield f"g{i}^r g{i}", mul(powers[i], g(i)), mul(g(i), powers[i])

    def consistency_check(self) -> list[str]:
        """
        收集结果与结合方式无关的检验（加权幂零表示的标准检验词）。
        返回失败描述列表，空列表表示一致。
        """
        failures = [f"{what}: {lhs} != {rhs}" for what, lhs, rhs in self.consistency_tests() if lhs != rhs]
        if failures:
            logger.info("consistency_check: %d 处不一致", len(failures))
        return failures
