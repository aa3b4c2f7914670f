from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np


class IntMatrix:
    """整数矩阵：numpy object 数组，元素为 Python int（任意精度，不会溢出）。"""

    def __init__(self, rows: Union[Sequence[Sequence[int]], np.ndarray], cols: Optional[int] = None) -> None:
        if isinstance(rows, np.ndarray):
            data = rows.astype(object)
        else:
            rows = [[int(x) for x in row] for row in rows]
            if rows:
                width = len(rows[0])
                if any(len(r) != width for r in rows):
                    raise ValueError("矩阵各行长度不一致")
                if cols is not None and cols != width:
                    raise ValueError(f"列数不符：声明 {cols}，实际 {width}")
                data = np.empty((len(rows), width), dtype=object)
                for i, r in enumerate(rows):
                    for j, x in enumerate(r):
                        data[i, j] = x
            else:
                data = np.zeros((0, cols or 0), dtype=object)
        if data.ndim != 2:
            raise ValueError(f"矩阵必须是二维，收到维数：{data.ndim}")
        self.entries = data

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diag(cls, values: Sequence[int]) -> IntMatrix:
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def to_list(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.entries]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and self.to_list() == other.to_list()

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_list()!r})"


@dataclass(frozen=True)
class SmithForm:
    divisors: tuple[int, ...]  # 非零对角元 d1 | d2 | …，均为正

    @property
    def rank(self) -> int:
        return len(self.divisors)


def _min_nonzero(a: np.ndarray, cells) -> Optional[tuple[int, int]]:
    best = None
    for i, j in cells:
        v = a[i, j]
        if v and (best is None or abs(v) < abs(a[best])):
            best = (i, j)
    return best


def smith_normal_form(m: IntMatrix) -> SmithForm:
    """
    初等行列变换对角化。每步选绝对值最小的非零元作主元，控制元素增长；
    主元不整除剩余子矩阵时把那一行加到主元行，继续消去。
    """
    a = m.entries.copy()
    nrows, ncols = a.shape
    t = 0
    while t < min(nrows, ncols):
        start = _min_nonzero(a, ((i, j) for i in range(t, nrows) for j in range(t, ncols)))
        if start is None:
            break
        i0, j0 = start
        a[[t, i0], :] = a[[i0, t], :]
        a[:, [t, j0]] = a[:, [j0, t]]
        while True:
            i0, j0 = _min_nonzero(a, [(t, j) for j in range(t, ncols)] + [(i, t) for i in range(t + 1, nrows)])
            a[[t, i0], :] = a[[i0, t], :]
            a[:, [t, j0]] = a[:, [j0, t]]
            p = a[t, t]
            for i in range(t + 1, nrows):
                if a[i, t]:
                    a[i, :] = a[i, :] - (a[i, t] // p) * a[t, :]
            for j in range(t + 1, ncols):
                if a[t, j]:
                    a[:, j] = a[:, j] - (a[t, j] // p) * a[:, t]
            if any(a[i, t] for i in range(t + 1, nrows)) or any(a[t, j] for j in range(t + 1, ncols)):
                continue
            bad = next(
                (i for i in range(t + 1, nrows) for j in range(t + 1, ncols) if a[i, j] % p),
                None,
            )
            if bad is None:
                break
            a[t, :] = a[t, :] + a[bad, :]
        t += 1
    return SmithForm(tuple(abs(int(a[i, i])) for i in range(t)))


def hermite_rows(m: IntMatrix) -> IntMatrix:
    """
    行 Hermite 标准形：只做行变换，结果为上阶梯形，主元为正，
    主元上方的元素规约到 [0, 主元)；零行丢弃。行张成的格不变。
    """
    a = m.entries.copy()
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        while True:
            live = [i for i in range(r, nrows) if a[i, c]]
            if not live:
                break
            p = min(live, key=lambda i: abs(a[i, c]))
            a[[r, p], :] = a[[p, r], :]
            if a[r, c] < 0:
                a[r, :] = -a[r, :]
            for i in range(r + 1, nrows):
                if a[i, c]:
                    a[i, :] = a[i, :] - (a[i, c] // a[r, c]) * a[r, :]
            if not any(a[i, c] for i in range(r + 1, nrows)):
                break
        if not a[r, c]:
            continue
        for i in range(r):
            if a[i, c]:
                a[i, :] = a[i, :] - (a[i, c] // a[r, c]) * a[r, :]
        r += 1
    return IntMatrix(a[:r, :])


def pivot_columns(h: IntMatrix) -> list[int]:
    """hermite_rows 结果每行首个非零元所在的列。"""
    return [next(j for j in range(h.cols) if h.entries[i, j]) for i in range(h.rows)]


@dataclass(frozen=True)
class AbelianInvariants:
    """Z^free_rank ⊕ Z/d1 ⊕ … ，d1 | d2 | …，每个 d_i >= 2。"""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError(f"free_rank 必须 >= 0，收到：{self.free_rank}")
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError(f"挠系数必须 >= 2，收到：{self.torsion}")
            if i and d % self.torsion[i - 1]:
                raise ValueError(f"挠系数必须构成整除链，收到：{self.torsion}")

    @classmethod
    def free(cls, rank: int) -> AbelianInvariants:
        return cls(rank, ())

    @classmethod
    def from_relations(cls, relations: IntMatrix, ngens: int) -> AbelianInvariants:
        """Z^ngens 模去 relations 行张成的子群。"""
        if relations.rows and relations.cols != ngens:
            raise ValueError(f"关系矩阵列数 {relations.cols} 与生成元个数 {ngens} 不符")
        snf = smith_normal_form(relations)
        return cls(ngens - snf.rank, tuple(d for d in snf.divisors if d > 1))

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def format(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.format()
