from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Optional, Sequence

from magnus.config import Deadline, MagnusConfig, caps_from_env, log_level_from_env
from magnus.errors import ResourceCapError
from magnus.freewords import (
    Alphabet,
    format_presentation,
    format_word,
    infer_alphabet,
    load_presentation,
    parse_exp_word,
    parse_word,
    root,
)
from magnus.lcs import (
    abelianization,
    build_gw,
    gw_alphabet,
    hall_coordinates,
    layer_lines,
    layer_table,
    nilpotent_quotient,
    parafree_compare,
    parafree_remark,
    verdict_lines,
    verdict_table,
)
from magnus.magnus_map import (
    GammaCertificate,
    expand,
    expand_rational_word,
    format_certificate,
    gamma_weight,
    residual_witness,
)
from magnus.magnus_series import format_series
from magnus.whitehead import format_auto, minimize

logger = logging.getLogger(__name__)

MACHINE_HEADER = "format=1"

Handler = Callable[[argparse.Namespace, MagnusConfig], list[str]]


def _parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["human", "machine"], default="human", dest="output")
    common.add_argument("--timeout", type=float, default=None, help="秒；超时按资源上限处理（退出码 3）")

    alpha = argparse.ArgumentParser(add_help=False)
    alpha.add_argument("--gens", default=None, help="生成元名称，逗号分隔，如 a,b")
    alpha.add_argument("--rank", type=int, default=None, help="使用 x1..x<rank>")

    p = argparse.ArgumentParser(prog="magnus", description="Magnus 嵌入 / 下中心列 / Whitehead 极小化（精确算术）")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("expand", parents=[common, alpha], help="μ(w) 截断到 N 次")
    s.add_argument("word")
    s.add_argument("--trunc", type=int, default=None)
    s.set_defaults(handler=_cmd_expand)

    s = sub.add_parser("weight", parents=[common, alpha], help="γ-权证书")
    s.add_argument("word")
    s.add_argument("--max", type=int, default=None, dest="trunc")
    s.set_defaults(handler=_cmd_weight)

    s = sub.add_parser("witness", parents=[common, alpha], help="截断逐级加倍直到拿到剩余见证")
    s.add_argument("word")
    s.set_defaults(handler=_cmd_witness)

    s = sub.add_parser("dgroup-expand", parents=[common, alpha], help="有理指数词的展开")
    s.add_argument("word")
    s.add_argument("--trunc", type=int, default=None)
    s.set_defaults(handler=_cmd_dgroup_expand)

    s = sub.add_parser("hall", parents=[common, alpha], help="在自由幂零商里按 Hall 基收集")
    s.add_argument("word")
    s.add_argument("--class", type=int, default=4, dest="cls")
    s.set_defaults(handler=_cmd_hall)

    s = sub.add_parser("nq", parents=[common], help="幂零商逐层不变量")
    s.add_argument("presentation")
    s.add_argument("--class", type=int, default=4, dest="cls")
    s.set_defaults(handler=_cmd_nq)

    s = sub.add_parser("parafree", parents=[common], help="逐层与自由群比较")
    s.add_argument("presentation")
    s.add_argument("--rank", type=int, default=None, help="参照自由群的秩，默认取交换化的自由秩")
    s.add_argument("--class", type=int, default=4, dest="cls")
    s.set_defaults(handler=_cmd_parafree)

    s = sub.add_parser("whitehead", parents=[common, alpha], help="Whitehead 循环长度极小化")
    s.add_argument("word")
    s.set_defaults(handler=_cmd_whitehead)

    s = sub.add_parser("gw", parents=[common], help="输出 G_w 的表示文件")
    s.add_argument("word", help="s,t,a1..aq 上的词 w")
    s.add_argument("--q", type=int, default=1)
    s.set_defaults(handler=_cmd_gw)

    return p.parse_args(argv)


def _config_from_args(args: argparse.Namespace) -> MagnusConfig:
    cfg = MagnusConfig(
        trunc=getattr(args, "trunc", None),
        nq_class=getattr(args, "cls", 4),
        rank=getattr(args, "rank", None),
        caps=caps_from_env(),
        output=args.output,
        timeout=args.timeout,
    )
    for name in ("trunc", "nq_class", "rank"):
        value = getattr(cfg, name)
        if value is not None and value < 1:
            raise ValueError(f"{name} 必须 >= 1，收到：{value}")
    return cfg


def _alphabet(args: argparse.Namespace) -> Alphabet:
    if args.gens:
        return Alphabet.from_names(n.strip() for n in args.gens.split(",") if n.strip())
    if args.rank is not None:
        return Alphabet.numbered(args.rank)
    return infer_alphabet(args.word)


def _truncation(cfg: MagnusConfig, word_length: int) -> int:
    n = cfg.truncation_for(word_length)
    if n > cfg.caps.max_truncation:
        raise ResourceCapError(f"截断 {n} 超过上限 {cfg.caps.max_truncation}")
    return n


def _with_header(cfg: MagnusConfig, lines: list[str]) -> list[str]:
    return [MACHINE_HEADER] + lines if cfg.output == "machine" else lines


def _cmd_expand(args: argparse.Namespace, cfg: MagnusConfig) -> list[str]:
    alphabet = _alphabet(args)
    w = parse_word(args.word, alphabet)
    series = expand(w, _truncation(cfg, len(w)))
    if cfg.output == "machine":
        return _with_header(cfg, format_series(series, alphabet.names, header=True).splitlines())
    return [format_series(series, alphabet.names)]


def _cmd_dgroup_expand(args: argparse.Namespace, cfg: MagnusConfig) -> list[str]:
    alphabet = _alphabet(args)
    w = parse_exp_word(args.word, alphabet)
    length = sum(int(abs(e)) or 1 for _, e in w.syllables)
    series = expand_rational_word(w, _truncation(cfg, length))
    if cfg.output == "machine":
        return _with_header(cfg, format_series(series, alphabet.names, header=True).splitlines())
    return [format_series(series, alphabet.names)]


def _cmd_weight(args: argparse.Namespace, cfg: MagnusConfig) -> list[str]:
    alphabet = _alphabet(args)
    w = parse_word(args.word, alphabet)
    result = gamma_weight(w, _truncation(cfg, len(w)))
    if isinstance(result, GammaCertificate):
        lines = format_certificate(result, alphabet.names).splitlines()
        if cfg.output == "human":
            lines.append(f"结论：{result.weight} 次以下分量全为零，{result.weight} 次分量非零")
        return _with_header(cfg, lines + ["status=certificate"])
    lines = [f"word={format_word(w)}", f"trunc={result.truncation}", f"reason={result.reason}"]
    return _with_header(cfg, lines + ["status=indeterminate"])


def _cmd_witness(args: argparse.Namespace, cfg: MagnusConfig) -> list[str]:
    alphabet = _alphabet(args)
    w = parse_word(args.word, alphabet)
    cert = residual_witness(w, cap=cfg.caps.max_truncation, deadline=Deadline(cfg.timeout))
    return _with_header(cfg, format_certificate(cert, alphabet.names).splitlines())


def _cmd_hall(args: argparse.Namespace, cfg: MagnusConfig) -> list[str]:
    alphabet = _alphabet(args)
    w = parse_word(args.word, alphabet)
    coords = hall_coordinates(w, cfg.nq_class, cfg.caps)
    if cfg.output == "machine":
        lines = [f"rank={alphabet.rank} class={cfg.nq_class}", f"word={format_word(w)}"]
        return _with_header(cfg, lines + [f"coord={label} exp={e}" for label, e in coords])
    collected = "*".join(label if e == 1 else f"{label}^{e}" for label, e in coords) or "1"
    return [f"词：{format_word(w)}", f"F/γ_{cfg.nq_class + 1} 中的收集形：{collected}"]


def _cmd_nq(args: argparse.Namespace, cfg: MagnusConfig) -> list[str]:
    p = load_presentation(args.presentation)
    layers = nilpotent_quotient(p, cfg.nq_class, cfg.caps, Deadline(cfg.timeout))
    if cfg.output == "machine":
        return _with_header(cfg, [f"class={cfg.nq_class} gens={p.rank}"] + layer_lines(layers))
    return [f"幂零商：class={cfg.nq_class} 生成元={', '.join(p.alphabet.names)}", layer_table(layers)]


def _cmd_parafree(args: argparse.Namespace, cfg: MagnusConfig) -> list[str]:
    p = load_presentation(args.presentation)
    reference = cfg.rank
    if reference is None:
        reference = abelianization(p).free_rank
        if reference < 1:
            raise ValueError("交换化自由秩为 0，请用 --rank 指定参照秩")
    verdicts = parafree_compare(p, reference, cfg.nq_class, cfg.caps, Deadline(cfg.timeout))
    if cfg.output == "machine":
        all_equal = "true" if all(v.equal for v in verdicts) else "false"
        lines = [f"reference_rank={reference} class={cfg.nq_class} gens={p.rank}"]
        return _with_header(cfg, lines + verdict_lines(verdicts) + [f"all_equal={all_equal}"])
    return [
        f"parafree 比较：参照秩={reference} class={cfg.nq_class}",
        verdict_table(verdicts),
        f"结论：{parafree_remark(p, reference, verdicts)}",
    ]


def _cmd_whitehead(args: argparse.Namespace, cfg: MagnusConfig) -> list[str]:
    alphabet = _alphabet(args)
    w = parse_word(args.word, alphabet)
    minimal, path = minimize(w, max_rank=cfg.caps.max_whitehead_rank, deadline=Deadline(cfg.timeout))
    primitive = "true" if len(minimal) == 1 else "false"
    base, exponent = root(w)
    steps = [format_auto(a, alphabet.names) for a in path]
    if cfg.output == "machine":
        return _with_header(
            cfg,
            [
                f"word={format_word(w)}",
                f"minimal={minimal}",
                f"minimal_length={len(minimal)} primitive={primitive}",
                f"path={';'.join(steps)}",
                f"root={format_word(base)} exponent={exponent}",
            ],
        )
    lines = [f"词：{format_word(w)}", f"极小循环词：{minimal}（长度 {len(minimal)}）", f"本原：{primitive}"]
    lines += [f"  {i}. {s}" for i, s in enumerate(steps, start=1)] or ["  （无需变换）"]
    if exponent > 1:
        lines.append(f"真幂：{format_word(base)} 的 {exponent} 次幂")
    return lines


def _cmd_gw(args: argparse.Namespace, cfg: MagnusConfig) -> list[str]:
    w = parse_word(args.word, gw_alphabet(args.q))
    lines = format_presentation(build_gw(args.q, w)).splitlines()
    # 表示文件里只能出现注释行，机器格式头写成注释，输出仍可直接 load_presentation
    return ([f"# {MACHINE_HEADER}"] if cfg.output == "machine" else []) + lines


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parse_args(argv)
    logging.basicConfig(
        level=log_level_from_env(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    handler: Handler = args.handler
    try:
        cfg = _config_from_args(args)
        lines = handler(args, cfg)
    except (ValueError, ResourceCapError, OSError) as ex:
        print(f"错误：{type(ex).__name__}: {ex}", file=sys.stderr)
        return getattr(ex, "exit_code", 2)
    print("\n".join(lines))
    return 0


if __name__ == "__main__":
    sys.exit(main())
