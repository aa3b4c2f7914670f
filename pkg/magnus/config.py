from __future__ import annotations

import os
import time
from dataclasses import dataclass, field, fields, replace
from typing import Literal, Optional

from magnus.errors import ResourceCapError

OutputFormat = Literal["human", "machine"]


@dataclass(frozen=True)
class ResourceCaps:
    max_class: int = 6
    max_pc_gens: int = 200
    max_whitehead_rank: int = 5
    max_truncation: int = 64  # residual_witness 逐级加倍的上限


@dataclass(frozen=True)
class MagnusConfig:
    trunc: Optional[int] = None  # None -> max(4, 词长)
    nq_class: int = 4
    rank: Optional[int] = None
    caps: ResourceCaps = field(default_factory=ResourceCaps)
    output: OutputFormat = "human"
    timeout: Optional[float] = None  # 秒

    def truncation_for(self, word_length: int) -> int:
        if self.trunc is not None:
            return self.trunc
        return max(4, word_length)


def parse_caps(text: str) -> ResourceCaps:
    """
    解析 "max_class=8,max_pc_gens=400" 形式的上限覆盖。
    只允许调高：低于默认值直接报错。
    """
    defaults = ResourceCaps()
    known = {f.name for f in fields(ResourceCaps)}
    overrides: dict[str, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, raw = part.partition("=")
        key = key.strip()
        if not sep or key not in known:
            raise ValueError(f"MAGNUS_CAPS 无法识别：{part!r}（可用键：{', '.join(sorted(known))}）")
        try:
            value = int(raw)
        except ValueError as ex:
            raise ValueError(f"{key} 必须为整数，收到：{raw!r}") from ex
        if value < getattr(defaults, key):
            raise ValueError(f"{key} 不能低于默认值 {getattr(defaults, key)}，收到：{value}")
        overrides[key] = value
    return replace(defaults, **overrides)


def caps_from_env() -> ResourceCaps:
    raw = os.getenv("MAGNUS_CAPS")
    if not raw:
        return ResourceCaps()
    return parse_caps(raw)


def log_level_from_env() -> str:
    return os.getenv("MAGNUS_LOG_LEVEL", "WARNING").upper()


class Deadline:
    """协作式超时：长循环里定期调用 check()。seconds=None 表示不限时。"""

    def __init__(self, seconds: Optional[float] = None) -> None:
        if seconds is not None and seconds <= 0:
            raise ValueError(f"timeout 必须 > 0，收到：{seconds}")
        self.seconds = seconds
        self._expire_at = None if seconds is None else time.monotonic() + seconds

    def check(self) -> None:
        if self._expire_at is not None and time.monotonic() > self._expire_at:
            raise ResourceCapError(f"计算超时（{self.seconds}s）")


NO_DEADLINE = Deadline()
