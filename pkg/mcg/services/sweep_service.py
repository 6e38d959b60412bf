"""
参数扫描服务模块
对一组 α 逐点积分并分析，结果按 α 升序返回，与并行进程数无关
"""
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import repeat
from typing import Iterable, List, Optional, Tuple

from ..errors import DivergenceError, ParameterError
from ..utils.logger import plugin_logger
from .analysis import (
    AttractorClass,
    AttractorKind,
    LyapunovSettings,
    LyapunovSpectrum,
    PeriodResult,
    classify_attractor,
    detect_double_spiral,
    detect_period,
    kaplan_yorke,
    lyapunov_spectrum,
    resolve_period,
)
from .integrator import IntegrationSettings, integrate, loop_maxima
from .model import ModelParams, make_field

ANALYSES = ("maxima", "lce", "classify")
DEFAULT_INITIAL_STATE = (0.1, 0.1, 0.1)


def alpha_grid(alpha_min: float, alpha_max: float, alpha_step: float) -> List[float]:
    """
    等间距 α 网格，两端包含在内，按 12 位小数取整
    :raises ParameterError: 步长不为正或区间反向
    """
    if not alpha_step > 0:
        raise ParameterError(f"alpha_step 必须大于 0，当前值：{alpha_step}")
    if alpha_max < alpha_min:
        raise ParameterError(f"alpha 区间为空：alpha_max ({alpha_max}) 小于 alpha_min ({alpha_min})")
    count = int(math.floor((alpha_max - alpha_min) / alpha_step + 1e-9))
    return [round(alpha_min + i * alpha_step, 12) for i in range(count + 1)]


@dataclass(frozen=True)
class SweepSpec:
    """
    扫描设置；base_params 中的 alpha 会被扫描值替换
    每个 α 都从同一个默认初值重新开始（不做延拓），保证可复现、与顺序无关
    """
    alpha_min: float
    alpha_max: float
    alpha_step: float
    base_params: ModelParams
    settings: IntegrationSettings = field(default_factory=IntegrationSettings)
    analyses: Tuple[str, ...] = ("maxima",)
    workers: int = 1
    lyapunov: LyapunovSettings = field(default_factory=LyapunovSettings)
    initial_state: Tuple[float, float, float] = DEFAULT_INITIAL_STATE
    zero_tol: float = 0.02
    cluster_tol_rel: float = 0.02
    sym_tol: float = 0.05

    def __post_init__(self):
        if not self.alpha_step > 0:
            raise ParameterError(f"alpha_step 必须大于 0，当前值：{self.alpha_step}")
        if not self.alpha_max > self.alpha_min:
            raise ParameterError(f"alpha 区间为空：alpha_max ({self.alpha_max}) 必须大于 alpha_min ({self.alpha_min})")
        if not self.alpha_min > 0:
            raise ParameterError(f"所有 alpha 都必须大于 0，当前 alpha_min={self.alpha_min}")
        unknown = [name for name in self.analyses if name not in ANALYSES]
        if unknown or not self.analyses:
            raise ParameterError(f"不支持的分析项：{unknown or '空'}，可选：{', '.join(ANALYSES)}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ParameterError(f"并行进程数必须是正整数，当前值：{self.workers}")
        if len(self.initial_state) != 3:
            raise ParameterError(f"初值必须是 3 维状态，当前：{self.initial_state}")
        if all(v == 0.0 for v in self.initial_state):
            # 原点是唯一不动点，轨迹不会离开，Lyapunov 切空间也无从定义
            raise ParameterError("初值不能是原点 (0,0,0)")

    def alphas(self) -> List[float]:
        return alpha_grid(self.alpha_min, self.alpha_max, self.alpha_step)

    @property
    def wants_spectrum(self) -> bool:
        return "lce" in self.analyses or "classify" in self.analyses


@dataclass(frozen=True)
class SweepRow:
    """单个 α 的扫描结果；发散时 diverged=True 且其余结果为空"""
    alpha: float
    maxima: Tuple[float, ...] = ()
    spectrum: Optional[LyapunovSpectrum] = None
    ky_dim: Optional[float] = None
    attractor: Optional[AttractorClass] = None
    period: Optional[PeriodResult] = None
    diverged: bool = False
    error: str = ""


def analyze_point(alpha: float, spec: SweepSpec) -> SweepRow:
    """
    对单个 α 执行积分与所请求的分析（工作进程入口，必须是模块级函数）
    发散只记录在结果里，不会中断整个扫描
    """
    p = spec.base_params.with_alpha(alpha)
    try:
        traj = integrate(make_field(p), spec.initial_state, spec.settings)
        maxima: Tuple[float, ...] = ()
        if len(traj) >= 3:
            maxima = tuple(value for _, value in loop_maxima(traj))
        if not spec.wants_spectrum:
            return SweepRow(alpha=alpha, maxima=maxima)

        spectrum = lyapunov_spectrum(p, spec.initial_state, spec.lyapunov)
        ky_dim = kaplan_yorke(spectrum, spec.zero_tol)
        attractor = period = None
        if "classify" in spec.analyses:
            attractor = classify_attractor(spectrum, spec.zero_tol)
            if attractor.is_periodic and len(maxima) >= 8:
                period = detect_period(maxima, spec.cluster_tol_rel)
                attractor = resolve_period(attractor, period)
            elif attractor.kind == AttractorKind.CHAOS and len(traj) >= 10_000:
                attractor = replace(attractor, double_spiral=detect_double_spiral(traj, spec.sym_tol))
        return SweepRow(alpha=alpha, maxima=maxima, spectrum=spectrum, ky_dim=ky_dim,
                        attractor=attractor, period=period)
    except DivergenceError as e:
        plugin_logger.warning(f"alpha={alpha} 的轨迹发散，已记录：{str(e)}")
        return SweepRow(alpha=alpha, diverged=True, error=str(e))


def run_sweep(spec: SweepSpec) -> List[SweepRow]:
    """
    执行参数扫描
    :return: 按 α 升序排列的结果（与进程完成顺序、进程数无关）
    """
    alphas = spec.alphas()
    plugin_logger.info(f"开始参数扫描：{len(alphas)} 个 alpha，分析项={','.join(spec.analyses)}，进程数={spec.workers}")
    if spec.workers == 1 or len(alphas) == 1:
        rows: Iterable[SweepRow] = [analyze_point(alpha, spec) for alpha in alphas]
    else:
        with ProcessPoolExecutor(max_workers=min(int(spec.workers), len(alphas))) as pool:
            rows = list(pool.map(analyze_point, alphas, repeat(spec)))
    ordered = sorted(rows, key=lambda row: row.alpha)
    diverged = sum(1 for row in ordered if row.diverged)
    plugin_logger.info(f"参数扫描完成：{len(ordered)} 行，其中发散 {diverged} 行")
    return ordered


class SweepService:
    """
    参数扫描服务类，根据插件配置构造扫描设置并执行
    """
    def __init__(self, config: dict):
        self.config = config
        self.zero_tol = float(self.config.get("zero_tol", 0.02))
        self.cluster_tol_rel = float(self.config.get("cluster_tol_rel", 0.02))
        self.sym_tol = float(self.config.get("sym_tol", 0.05))
        self.workers = int(self.config.get("workers", 1))

    def initial_state(self) -> Tuple[float, float, float]:
        return (
            float(self.config.get("x0", DEFAULT_INITIAL_STATE[0])),
            float(self.config.get("y0", DEFAULT_INITIAL_STATE[1])),
            float(self.config.get("z0", DEFAULT_INITIAL_STATE[2])),
        )

    def build_spec(self, alpha_min: float, alpha_max: float, alpha_step: float, base_params: ModelParams,
                   analyses: Tuple[str, ...] = ("maxima",), workers: Optional[int] = None) -> SweepSpec:
        """
        按配置构造扫描设置
        :param workers: 并行进程数，None 时使用配置值
        """
        return SweepSpec(
            alpha_min=alpha_min,
            alpha_max=alpha_max,
            alpha_step=alpha_step,
            base_params=base_params,
            settings=IntegrationSettings.from_config(self.config),
            analyses=tuple(analyses),
            workers=self.workers if workers is None else workers,
            lyapunov=LyapunovSettings.from_config(self.config),
            initial_state=self.initial_state(),
            zero_tol=self.zero_tol,
            cluster_tol_rel=self.cluster_tol_rel,
            sym_tol=self.sym_tol,
        )

    def run(self, spec: SweepSpec) -> List[SweepRow]:
        return run_sweep(spec)
