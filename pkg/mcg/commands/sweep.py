from typing import List, Optional, Sequence

from ..core import MCGCore
from ..utils.keys import format_float
from .common import base_run


def parse_analyses(text: str) -> List[str]:
    """解析逗号分隔的分析项，例如 maxima,lce,classify"""
    return [item.strip().lower() for item in text.split(",") if item.strip()]


def cmd_sweep(core: MCGCore, config_path: Optional[str] = None, alpha_min: float = 0.01,
              alpha_max: float = 1.2, alpha_step: float = 0.01, analyses: Sequence[str] = ("maxima",),
              workers: Optional[int] = None, out_dir: Optional[str] = None) -> List[str]:
    """
    参数扫描命令：写出分岔图与分析表，返回摘要
    """
    run = base_run(config_path)
    core = core.with_overrides(run.overrides)
    rows, files = core.sweep(run.model, alpha_min, alpha_max, alpha_step, analyses, workers, out_dir)
    diverged = [row for row in rows if row.diverged]
    lines = [
        f"alphas={len(rows)}",
        f"maxima={sum(len(row.maxima) for row in rows)}",
        f"diverged={len(diverged)}",
    ]
    lines.extend(f"diverged_alpha={format_float(row.alpha)}" for row in diverged)
    lines.extend(f"file={path}" for path in files)
    return lines
