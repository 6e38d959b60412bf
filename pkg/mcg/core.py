"""
MCG 插件核心功能模块
包含配置管理与核心业务流程：单点仿真、参数扫描、特征值表、热敏电阻拟合、参考区间复现
命令行与 AstrBot 聊天命令共用这一层
"""
import os
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import merge_config
from .services.analysis import (
    REFERENCE_REGIMES,
    AttractorClass,
    AttractorKind,
    EigenReport,
    LyapunovSettings,
    LyapunovSpectrum,
    PeriodResult,
    ReferenceRegime,
    classify_attractor,
    detect_double_spiral,
    detect_period,
    kaplan_yorke,
    lyapunov_spectrum,
    origin_eigenvalues,
    resolve_period,
)
from .services.integrator import IntegrationSettings, Trajectory, integrate, loop_maxima
from .services.model import ModelParams, PhysicalParams, make_field
from .services.sweep_service import SweepRow, SweepService
from .services.thermistor import ThermistorFit, r2_versus_t0, thermistor_fit
from .storage.csv_store import (
    write_analysis_csv,
    write_bifurcation_csv,
    write_thermistor_csv,
    write_trajectory_csv,
)
from .storage.params_file import RunConfig, load_run_config
from .storage.svg_plot import AxesSpec, bifurcation_points, emit_svg_scatter, projection_points, series_points
from .utils.logger import plugin_logger

# 热敏电阻 B57236S0250M000 的数据手册参数
DEFAULT_R0 = 60.0
DEFAULT_BETA = 3000.0


@dataclass(frozen=True)
class SingleRunReport:
    """单点仿真与分析的全部结果"""
    params: ModelParams
    physical: Optional[PhysicalParams]
    eigen: EigenReport
    trajectory: Trajectory
    maxima: Tuple[float, ...]
    spectrum: LyapunovSpectrum
    ky_dim: float
    attractor: AttractorClass
    period: Optional[PeriodResult]
    files: Tuple[str, ...] = ()


@dataclass(frozen=True)
class ThermistorReport:
    """热敏电阻拟合结果与 R²(T0) 扫描"""
    physical: PhysicalParams
    fit: ThermistorFit
    scan: List[Tuple[float, float]]
    files: Tuple[str, ...] = ()


@dataclass(frozen=True)
class RegimeCheck:
    """参考区间的代表点与实测结果"""
    regime: ReferenceRegime
    spectrum: Optional[LyapunovSpectrum]
    ky_dim: Optional[float]
    attractor: Optional[AttractorClass]
    error: str = ""


class MCGCore:
    def __init__(self, config: Optional[Dict[str, Any]] = None):
        self.config = merge_config(config)
        self.output_dir = self.config.get("output_dir", "output")
        self.zero_tol = float(self.config.get("zero_tol", 0.02))
        self.cluster_tol_rel = float(self.config.get("cluster_tol_rel", 0.02))
        self.sym_tol = float(self.config.get("sym_tol", 0.05))
        self.sweep_service = SweepService(self.config)

    def with_overrides(self, overrides: Optional[Dict[str, Any]]) -> "MCGCore":
        """返回叠加了额外配置的新实例（运行配置文件中的设置项）"""
        if not overrides:
            return self
        return MCGCore({**self.config, **overrides})

    def integration_settings(self) -> IntegrationSettings:
        return IntegrationSettings.from_config(self.config)

    def lyapunov_settings(self) -> LyapunovSettings:
        return LyapunovSettings.from_config(self.config)

    def initial_state(self) -> Tuple[float, float, float]:
        return self.sweep_service.initial_state()

    def _out_path(self, out_dir: Optional[str], name: str) -> str:
        return os.path.join(out_dir or self.output_dir, name)

    # ------------------------------------------------------------ 特征值

    def eigen_table(self, params: ModelParams, alphas: Sequence[float]) -> List[EigenReport]:
        """逐个 α 计算原点特征值"""
        return [origin_eigenvalues(params.with_alpha(alpha)) for alpha in alphas]

    # ------------------------------------------------------------ 单点仿真

    def classify(self, params: ModelParams, spectrum: LyapunovSpectrum, trajectory: Trajectory,
                 maxima: Sequence[float]) -> Tuple[AttractorClass, Optional[PeriodResult]]:
        """
        指数谱分类，再用 z 极大值细化周期、用点云几何判断双螺旋
        """
        attractor = classify_attractor(spectrum, self.zero_tol)
        period = None
        if attractor.is_periodic and len(maxima) >= 8:
            period = detect_period(maxima, self.cluster_tol_rel)
            attractor = resolve_period(attractor, period)
        elif attractor.kind == AttractorKind.CHAOS and len(trajectory) >= 10_000:
            attractor = replace(attractor, double_spiral=detect_double_spiral(trajectory, self.sym_tol))
        plugin_logger.debug(f"alpha={params.alpha} 的吸引子类别：{attractor}")
        return attractor, period

    def simulate(self, run: RunConfig, out_dir: Optional[str] = None, write_files: bool = True) -> SingleRunReport:
        """
        单个参数点：积分 → 分析 → 输出文件
        """
        core = self.with_overrides(run.overrides)
        params = run.model
        plugin_logger.info(f"开始单点仿真：alpha={params.alpha}")
        eigen = origin_eigenvalues(params)
        trajectory = integrate(make_field(params), core.initial_state(), core.integration_settings())
        maxima: Tuple[float, ...] = ()
        if len(trajectory) >= 3:
            maxima = tuple(v for _, v in loop_maxima(trajectory))
        spectrum = lyapunov_spectrum(params, core.initial_state(), core.lyapunov_settings())
        ky_dim = kaplan_yorke(spectrum, core.zero_tol)
        attractor, period = core.classify(params, spectrum, trajectory, maxima)

        files: Tuple[str, ...] = ()
        if write_files:
            files = core._write_single_outputs(params, trajectory, spectrum, ky_dim, attractor, out_dir)
        plugin_logger.info(f"单点仿真完成：alpha={params.alpha}, 类别={attractor.label}, KY 维数={ky_dim:.4f}")
        return SingleRunReport(params, run.physical, eigen, trajectory, maxima, spectrum, ky_dim,
                               attractor, period, files)

    def run_single(self, config_path: str, out_dir: Optional[str] = None) -> SingleRunReport:
        """读取运行配置文件并执行单点仿真"""
        return self.simulate(load_run_config(config_path), out_dir)

    def _write_single_outputs(self, params: ModelParams, trajectory: Trajectory, spectrum: LyapunovSpectrum,
                              ky_dim: float, attractor: AttractorClass, out_dir: Optional[str]) -> Tuple[str, ...]:
        files = []
        path = self._out_path(out_dir, "trajectory.csv")
        write_trajectory_csv(trajectory, path)
        files.append(path)
        path = self._out_path(out_dir, "analysis.csv")
        write_analysis_csv([SweepRow(alpha=params.alpha, spectrum=spectrum, ky_dim=ky_dim, attractor=attractor)], path)
        files.append(path)
        if len(trajectory) > 0:
            for horizontal, vertical in (("x", "y"), ("x", "z"), ("y", "z")):
                path = self._out_path(out_dir, f"phase_{horizontal}{vertical}.svg")
                emit_svg_scatter(projection_points(trajectory, horizontal, vertical),
                                 AxesSpec(f"phase portrait alpha={params.alpha:g}", horizontal, vertical), path)
                files.append(path)
            path = self._out_path(out_dir, "series_z.svg")
            emit_svg_scatter(series_points(trajectory, "z"), AxesSpec(f"z(t) alpha={params.alpha:g}", "t", "z"), path)
            files.append(path)
        return tuple(files)

    # ------------------------------------------------------------ 参数扫描

    def sweep(self, base_params: ModelParams, alpha_min: float, alpha_max: float, alpha_step: float,
              analyses: Sequence[str] = ("maxima",), workers: Optional[int] = None,
              out_dir: Optional[str] = None) -> Tuple[List[SweepRow], Tuple[str, ...]]:
        """
        执行扫描并写出分岔图（CSV + SVG），请求了 lce/classify 时另写分析表
        """
        spec = self.sweep_service.build_spec(alpha_min, alpha_max, alpha_step, base_params, tuple(analyses), workers)
        rows = self.sweep_service.run(spec)
        files = []
        path = self._out_path(out_dir, "bifurcation.csv")
        write_bifurcation_csv(rows, path)
        files.append(path)
        points = bifurcation_points(rows)
        if points:
            path = self._out_path(out_dir, "bifurcation.svg")
            emit_svg_scatter(points, AxesSpec("bifurcation diagram z_max vs alpha", "alpha", "z_max",
                                              width=900, height=560, marker_radius=0.6), path)
            files.append(path)
        else:
            plugin_logger.warning("没有任何 z 极大值，跳过分岔图 SVG")
        if spec.wants_spectrum:
            path = self._out_path(out_dir, "analysis.csv")
            write_analysis_csv(rows, path)
            files.append(path)
        return rows, tuple(files)

    # ------------------------------------------------------------ 热敏电阻

    def fit_thermistor(self, r0: float = DEFAULT_R0, beta: float = DEFAULT_BETA, t0: Optional[float] = None,
                       out_dir: Optional[str] = None, write_files: bool = True) -> ThermistorReport:
        """
        β 模型与二阶 Taylor 近似在 [t_min, t_max] 上的 R²，以及 R² 随 T0 ∈ [250, 300] 的变化
        """
        t0 = float(self.config.get("thermistor_t0", 298.15) if t0 is None else t0)
        t_min = float(self.config.get("thermistor_t_min", 240.0))
        t_max = float(self.config.get("thermistor_t_max", 300.0))
        points = int(self.config.get("thermistor_points", 61))
        physical = PhysicalParams(capacitance=1.0, inductance=1.0, r0=r0, beta=beta, t0=t0,
                                  heat_capacitance=1.0, dissipation=1.0, a=0.0, b=0.0)
        fit = thermistor_fit(physical, t_min, t_max, points)
        scan = r2_versus_t0(r0, beta, np.linspace(250.0, 300.0, 51), t_min, t_max, points)
        plugin_logger.info(f"热敏电阻拟合：T0={t0}, R²={fit.r2:.6f}")

        files: Tuple[str, ...] = ()
        if write_files:
            csv_path = self._out_path(out_dir, "thermistor.csv")
            write_thermistor_csv(fit, csv_path)
            svg_path = self._out_path(out_dir, "thermistor.svg")
            curve = list(zip(fit.temperatures.tolist(), fit.exact.tolist()))
            curve += list(zip(fit.temperatures.tolist(), fit.taylor.tolist()))
            emit_svg_scatter(curve, AxesSpec(f"thermistor R(T) and Taylor surrogate, T0={t0:g}", "T (K)", "R (ohm)"),
                             svg_path)
            files = (csv_path, svg_path)
        return ThermistorReport(physical, fit, scan, files)

    # ------------------------------------------------------------ 参考区间

    def reference_table(self, base_params: ModelParams,
                        regimes: Sequence[ReferenceRegime] = tuple(REFERENCE_REGIMES)) -> List[RegimeCheck]:
        """在每个参考区间的代表 α 上计算指数谱、维数与类别"""
        checks = []
        for regime in regimes:
            params = base_params.with_alpha(regime.representative_alpha)
            run = RunConfig(model=params)
            try:
                report = self.simulate(run, write_files=False)
                checks.append(RegimeCheck(regime, report.spectrum, report.ky_dim, report.attractor))
            except Exception as e:
                plugin_logger.error(f"参考区间 alpha={regime.representative_alpha} 计算失败: {str(e)}")
                checks.append(RegimeCheck(regime, None, None, None, str(e)))
        return checks
