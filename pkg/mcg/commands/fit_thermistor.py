from typing import List, Optional

from ..core import DEFAULT_BETA, DEFAULT_R0, MCGCore
from ..utils.keys import format_float


def cmd_fit_thermistor(core: MCGCore, t0: Optional[float] = None, r0: float = DEFAULT_R0,
                       beta: float = DEFAULT_BETA, out_dir: Optional[str] = None,
                       write_files: bool = True) -> List[str]:
    """
    热敏电阻 Taylor 近似拟合命令
    输出所用 T0 与 R²，随后是 T0 ∈ [250, 300] 的 t0,r2 扫描表
    """
    report = core.fit_thermistor(r0, beta, t0, out_dir, write_files)
    lines = [
        f"R0={format_float(r0)}",
        f"beta={format_float(beta)}",
        f"T0={format_float(report.physical.t0)}",
        f"r2={format_float(report.fit.r2)}",
        "t0,r2",
    ]
    lines.extend(f"{format_float(t)},{format_float(r2)}" for t, r2 in report.scan)
    lines.extend(f"file={path}" for path in report.files)
    return lines
