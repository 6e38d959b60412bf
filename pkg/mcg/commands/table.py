from typing import List, Optional

from ..core import MCGCore
from ..utils.keys import format_float
from .common import base_run

TABLE_HEADER = "alpha_range,alpha,l1,l2,l3,ky_dim,class,expected_signs,expected_class,expected_dim"


def cmd_table(core: MCGCore, config_path: Optional[str] = None) -> List[str]:
    """
    在每个参考区间的代表 α 上重算指数谱，与参考值并列输出
    """
    run = base_run(config_path)
    core = core.with_overrides(run.overrides)
    lines = [TABLE_HEADER]
    for check in core.reference_table(run.model):
        regime = check.regime
        head = [f"[{regime.alpha_low:g};{regime.alpha_high:g}]", format_float(regime.representative_alpha)]
        tail = [regime.signs, regime.description, f"{regime.dimension:g}"]
        if check.spectrum is None:
            lines.append(",".join(head + ["", "", "", "", f"error: {check.error}"] + tail))
            continue
        measured = [format_float(v) for v in check.spectrum.exponents]
        measured += [format_float(check.ky_dim), check.attractor.label]
        lines.append(",".join(head + measured + tail))
    return lines
