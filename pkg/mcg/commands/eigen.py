from typing import List, Optional

from ..core import MCGCore
from ..services.sweep_service import alpha_grid
from ..utils.keys import format_float
from .common import base_run

EIGEN_HEADER = "alpha,lambda1,re_lambda23,im_lambda23,discriminant,classification"


def cmd_eigen(core: MCGCore, config_path: Optional[str] = None, alpha_min: float = 0.5,
              alpha_max: float = 6.0, alpha_step: float = 0.5) -> List[str]:
    """
    原点特征值表（CSV 文本），最后一行给出鞍焦点窗口边界 alpha_star
    """
    params = base_run(config_path).model
    reports = core.eigen_table(params, alpha_grid(alpha_min, alpha_max, alpha_step))
    lines = [EIGEN_HEADER]
    for rep in reports:
        lines.append(",".join([
            format_float(rep.alpha),
            format_float(rep.lambda1),
            format_float(rep.lambda2.real),
            format_float(abs(rep.lambda2.imag)),
            format_float(rep.discriminant),
            rep.classification.value,
        ]))
    alpha_star = reports[0].alpha_star
    lines.append(f"alpha_star={format_float(alpha_star) if alpha_star is not None else 'none'}")
    return lines
