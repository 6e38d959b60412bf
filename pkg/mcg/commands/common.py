from typing import Optional

from ..services.model import ModelParams, study_params
from ..storage.params_file import RunConfig, load_run_config
from ..utils.keys import format_float


def base_run(config_path: Optional[str] = None, alpha: Optional[float] = None) -> RunConfig:
    """
    读取运行配置；没有配置文件时使用研究参数组
    :param alpha: 不为 None 时覆盖配置中的 alpha
    """
    run = load_run_config(config_path) if config_path else RunConfig(model=study_params())
    if alpha is not None:
        run = RunConfig(model=run.model.with_alpha(alpha), physical=run.physical, overrides=run.overrides)
    return run


def params_line(params: ModelParams) -> str:
    return " ".join(f"{key}={format_float(value)}" for key, value in params.to_dict().items())


def format_complex(value: complex) -> str:
    sign = "+" if value.imag >= 0 else "-"
    return f"{format_float(value.real)}{sign}{format_float(abs(value.imag))}i"
