from __future__ import annotations

from typing import Optional


class WordSyntaxError(ValueError):
    """词/表示文本语法错误，position 为出错字符的 0 基下标。"""

    exit_code = 2

    def __init__(self, message: str, position: Optional[int] = None) -> None:
        self.position = position
        if position is not None:
            message = f"{message}（位置 {position}）"
        super().__init__(message)


class UnknownGeneratorError(ValueError):
    exit_code = 2


class AlphabetMismatchError(ValueError):
    exit_code = 2


class PreconditionError(ValueError):
    """输入合法但不满足运算前置条件（例如 build_gw 的 w 不合格）。"""

    exit_code = 4


class ResourceCapError(RuntimeError):
    """超出资源上限（class / pc 生成元个数 / 截断次数 / 超时）。显式失败，绝不给出错误答案。"""

    exit_code = 3
