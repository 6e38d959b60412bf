"""
MCG 批处理命令行
用法：python -m mcg <simulate|sweep|eigen|fit-thermistor|table> [选项]
结果写到 stdout（key=value 或 CSV 文本），日志写到 stderr
"""
import argparse
import sys
from typing import List, Optional

from .commands import cmd_eigen, cmd_fit_thermistor, cmd_simulate, cmd_sweep, cmd_table, parse_analyses
from .config import coerce_value, load_schema
from .core import DEFAULT_BETA, DEFAULT_R0, MCGCore
from .errors import MCGError
from .storage.params_file import read_config_file
from .utils.logger import plugin_logger, setup_cli_logging


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mcg", description="MCG 忆阻电路混沌系统的仿真与分析")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="运行配置文件（key = value 文本或 JSON）；缺省使用研究参数组")
    common.add_argument("--out", help="输出目录，缺省取配置 output_dir")
    common.add_argument("--seed", type=int, help="保留参数，所有方法都是确定性的")
    common.add_argument("--verbose", action="store_true", help="输出调试日志")
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", parents=[common], help="单点积分与分析")
    simulate.add_argument("--alpha", type=float, help="覆盖配置中的 alpha")

    sweep = sub.add_parser("sweep", parents=[common], help="α 参数扫描（分岔图）")
    sweep.add_argument("--alpha-min", type=float, default=0.01)
    sweep.add_argument("--alpha-max", type=float, default=1.2)
    sweep.add_argument("--alpha-step", type=float, default=0.01)
    sweep.add_argument("--workers", type=int, help="并行进程数，缺省取配置 workers")
    sweep.add_argument("--analyses", default="maxima", help="逗号分隔：maxima,lce,classify")

    eigen = sub.add_parser("eigen", parents=[common], help="原点特征值表")
    eigen.add_argument("--alpha-min", type=float, default=0.5)
    eigen.add_argument("--alpha-max", type=float, default=6.0)
    eigen.add_argument("--alpha-step", type=float, default=0.5)

    fit = sub.add_parser("fit-thermistor", parents=[common], help="热敏电阻 Taylor 近似的 R²")
    fit.add_argument("--t0", type=float, help="室温 T0 (K)，缺省取配置 thermistor_t0")
    fit.add_argument("--r0", type=float, default=DEFAULT_R0, help="冷态电阻 R0 (Ω)")
    fit.add_argument("--beta", type=float, default=DEFAULT_BETA, help="材料常数 β (K)")

    sub.add_parser("table", parents=[common], help="在参考区间上重算 Lyapunov 指数表")
    return parser


def run(args: argparse.Namespace) -> List[str]:
    core = MCGCore()
    if args.command == "simulate":
        return cmd_simulate(core, args.config, args.alpha, args.out)
    if args.command == "sweep":
        return cmd_sweep(core, args.config, args.alpha_min, args.alpha_max, args.alpha_step,
                         parse_analyses(args.analyses), args.workers, args.out)
    if args.command == "eigen":
        return cmd_eigen(core, args.config, args.alpha_min, args.alpha_max, args.alpha_step)
    if args.command == "fit-thermistor":
        return _fit_thermistor(core, args)
    return cmd_table(core, args.config)


def _fit_thermistor(core: MCGCore, args: argparse.Namespace) -> List[str]:
    """配置文件里的 R0、beta、T0 与设置项优先于缺省值，命令行 --t0 优先于配置文件"""
    r0, beta, t0 = args.r0, args.beta, args.t0
    if args.config:
        mapping = read_config_file(args.config)
        schema = load_schema()
        core = core.with_overrides({key: coerce_value(key, value, schema)
                                    for key, value in mapping.items() if key in schema})
        r0 = float(mapping.get("R0", r0))
        beta = float(mapping.get("beta", beta))
        if t0 is None and "T0" in mapping:
            t0 = float(mapping["T0"])
    return cmd_fit_thermistor(core, t0, r0, beta, args.out)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_cli_logging(args.verbose)
    try:
        lines = run(args)
    except (MCGError, ValueError) as e:
        plugin_logger.debug(f"{args.command} 执行失败", exc_info=True)
        print(f"❌ {str(e)}".replace("\n", " "), file=sys.stderr)
        return 1
    for line in lines:
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
