from typing import List, Optional

from ..core import MCGCore, SingleRunReport
from ..utils.keys import format_float
from .common import base_run, format_complex, params_line


def report_lines(report: SingleRunReport) -> List[str]:
    """
    单点结果的 key=value 输出
    """
    eigen = report.eigen
    spectrum = report.spectrum
    lines = [
        f"alpha={format_float(report.params.alpha)}",
        f"lambda1={format_float(eigen.lambda1)}",
        f"lambda2={format_complex(eigen.lambda2)}",
        f"lambda3={format_complex(eigen.lambda3)}",
        f"fixed_point={eigen.classification.value}",
        f"alpha_star={format_float(eigen.alpha_star) if eigen.alpha_star is not None else 'none'}",
        f"l1={format_float(spectrum.exponents[0])}",
        f"l2={format_float(spectrum.exponents[1])}",
        f"l3={format_float(spectrum.exponents[2])}",
        f"lce_sum={format_float(spectrum.total)}",
        f"divergence_mean={format_float(spectrum.trace_average)}",
        f"ky_dim={format_float(report.ky_dim)}",
        f"class={report.attractor.label}",
    ]
    if report.attractor.period is not None:
        lines.append(f"period={report.attractor.period}")
    if report.period is not None:
        lines.append(f"period_status={report.period.status}")
    if report.attractor.double_spiral is not None:
        lines.append(f"double_spiral={'1' if report.attractor.double_spiral else '0'}")
    lines.append(f"maxima={len(report.maxima)}")
    lines.extend(f"file={path}" for path in report.files)
    return lines


def cmd_simulate(core: MCGCore, config_path: Optional[str] = None, alpha: Optional[float] = None,
                 out_dir: Optional[str] = None, write_files: bool = True) -> List[str]:
    """
    单点仿真命令
    物理参数配置会先输出映射后的模型参数
    """
    run = base_run(config_path, alpha)
    lines = []
    if run.physical is not None:
        lines.append(f"mapped {params_line(run.model)}")
    report = core.simulate(run, out_dir, write_files)
    lines.extend(report_lines(report))
    return lines
