from __future__ import annotations

import argparse
import contextlib
import io
import os
import sys
from dataclasses import dataclass
from pathlib import Path

# Ensure repo root is on sys.path when running as a script
REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from magnus.run_magnus import main as magnus_main

GOLDEN_PATH = REPO_ROOT / "tests" / "golden" / "corpus_machine_v1.txt"
PRES = "presentations"

CORPUS: list[list[str]] = [
    ["expand", "x1^-1", "--trunc", "3"],
    ["expand", "[x1,x2]", "--trunc", "2"],
    ["hall", "[x1,x2]*x1^2", "--class", "3"],
    ["expand", ""],
    ["weight", "[[x1,x2],x1]", "--max", "4"],
    ["weight", "x1^2", "--max", "2"],
    ["weight", "[x1,x2]", "--max", "1"],
    ["witness", "x1^-1*x2^-1*x1*x2*x1^-1"],
    ["witness", "[x1,x2]"],
    ["dgroup-expand", "x1^(1/3)*x2*x1^(-1/3)*x2^-1", "--trunc", "2"],
    ["dgroup-expand", "x1^1/2", "--trunc", "3"],
    ["nq", f"{PRES}/free_rank2.pres", "--class", "3"],
    ["nq", f"{PRES}/surface_genus2.pres", "--class", "2"],
    ["nq", f"{PRES}/cyclic2.pres", "--class", "2"],
    ["parafree", f"{PRES}/gw_q1.pres", "--rank", "2", "--class", "2"],
    ["parafree", f"{PRES}/x2_torsion.pres", "--rank", "2", "--class", "1"],
    ["parafree", f"{PRES}/free_rank2.pres", "--rank", "2", "--class", "4"],
    ["whitehead", "x1*x2"],
    ["whitehead", "[x1,x2]"],
    ["gw", "[a1,t]", "--q", "1"],
]


@dataclass(frozen=True)
class CorpusResult:
    argv: tuple[str, ...]
    exit_code: int
    stdout: str


def run_command(argv: list[str]) -> CorpusResult:
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        code = magnus_main(argv + ["--format", "machine"])
    return CorpusResult(tuple(argv), code, out.getvalue())


def render(results: list[CorpusResult]) -> str:
    blocks = []
    for r in results:
        quoted = " ".join(repr(a) if (not a or " " in a) else a for a in r.argv)
        blocks.append(f"$ magnus {quoted}\n{r.stdout}exit={r.exit_code}\n")
    return "\n".join(blocks)


def run_corpus() -> str:
    # 语料里的表示文件路径相对仓库根目录
    cwd = os.getcwd()
    os.chdir(REPO_ROOT)
    try:
        return render([run_command(argv) for argv in CORPUS])
    finally:
        os.chdir(cwd)


def _parse_args() -> argparse.Namespace:
    p = argparse.ArgumentParser(description="CLI 机器格式 golden 语料（20 条命令）")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--write", action="store_true", help="重新生成 golden 文件")
    mode.add_argument("--check", action="store_true", help="与 golden 文件逐字节比较")
    p.add_argument("--golden", default=str(GOLDEN_PATH))
    return p.parse_args()


def main() -> int:
    args = _parse_args()
    golden = Path(args.golden)
    text = run_corpus()
    if args.write:
        golden.parent.mkdir(parents=True, exist_ok=True)
        golden.write_text(text, encoding="utf-8")
        print(f"golden 已写入：{golden}（{len(CORPUS)} 条命令）")
        return 0

    if not golden.exists():
        raise RuntimeError(f"缺少 golden 文件：{golden}（先运行 --write）")
    expected = golden.read_text(encoding="utf-8")
    if text != expected:
        print(f"golden 不一致：{golden}", file=sys.stderr)
        for a, b in zip(expected.splitlines(), text.splitlines()):
            if a != b:
                print(f"  期望：{a}\n  实际：{b}", file=sys.stderr)
                break
        return 1
    print(f"golden 一致（{len(CORPUS)} 条命令）")
    return 0


if __name__ == "__main__":
    sys.exit(main())
