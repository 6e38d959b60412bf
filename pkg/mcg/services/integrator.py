"""
积分服务模块
三维自治流的显式积分（定步长 RK4 / 自适应 RK45）、轨迹采样与 z 极大值提取
"""
import math
from dataclasses import dataclass, field as dataclass_field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.signal import find_peaks

from ..errors import DivergenceError, ParameterError
from ..utils.logger import plugin_logger
from .model import Field

# 任何分量超过该阈值即视为发散（吸引子尺度为 O(1)）
DIVERGENCE_LIMIT = 1e12
METHODS = ("rk4", "rk45")


@dataclass(frozen=True)
class IntegrationSettings:
    """积分设置：步长、终止时间、暂态、采样间隔与方法"""
    step: float = 0.005
    t_end: float = 2000.0
    t_skip: float = 500.0
    stride: int = 4
    method: str = "rk4"
    atol: float = 1e-9
    rtol: float = 1e-9

    def __post_init__(self):
        if not self.step > 0:
            raise ParameterError(f"积分步长必须大于 0（h > 0 不成立），当前值：{self.step}")
        if not self.t_end > 0:
            raise ParameterError(f"终止时间必须大于 0，当前值：{self.t_end}")
        if not 0 <= self.t_skip < self.t_end:
            raise ParameterError(f"暂态时长必须满足 0 <= t_skip < t_end，当前值：{self.t_skip}")
        if int(self.stride) != self.stride or self.stride < 1:
            raise ParameterError(f"采样间隔必须是正整数，当前值：{self.stride}")
        if self.method not in METHODS:
            raise ParameterError(f"不支持的积分方法：{self.method}，支持：{', '.join(METHODS)}")
        if self.method == "rk45" and not (self.atol > 0 and self.rtol > 0):
            raise ParameterError(f"自适应方法的误差容限必须大于 0：atol={self.atol}, rtol={self.rtol}")

    @classmethod
    def from_config(cls, config: dict) -> "IntegrationSettings":
        defaults = cls()
        return cls(
            step=float(config.get("step", defaults.step)),
            t_end=float(config.get("t_end", defaults.t_end)),
            t_skip=float(config.get("t_skip", defaults.t_skip)),
            stride=int(config.get("stride", defaults.stride)),
            method=str(config.get("method", defaults.method)),
            atol=float(config.get("atol", defaults.atol)),
            rtol=float(config.get("rtol", defaults.rtol)),
        )


@dataclass(frozen=True)
class Trajectory:
    """采样后的轨迹：时间严格递增，states 形状为 (n, 维数)"""
    times: np.ndarray
    states: np.ndarray
    settings: IntegrationSettings = dataclass_field(default_factory=IntegrationSettings)

    def __post_init__(self):
        self.times.setflags(write=False)
        self.states.setflags(write=False)

    def __len__(self) -> int:
        return len(self.times)

    def component(self, name: str) -> np.ndarray:
        index = {"x": 0, "y": 1, "z": 2}.get(name)
        if index is None:
            raise ValueError(f"未知分量：{name}，可选 x / y / z")
        return self.states[:, index]

    @property
    def final_state(self) -> Tuple[float, ...]:
        return tuple(float(v) for v in self.states[-1])


def _steps(duration: float, h: float) -> int:
    """duration/h 的整数步数（接近整数时取整，否则向上取整）"""
    ratio = duration / h
    nearest = round(ratio)
    if abs(ratio - nearest) < 1e-9 * max(1.0, ratio):
        return int(nearest)
    return int(math.ceil(ratio))


def _is_bounded(s: Sequence[float]) -> bool:
    # NaN 的比较结果为 False，同样视为越界
    return all(abs(v) <= DIVERGENCE_LIMIT for v in s)


def rk4_step(field: Field, s: Tuple[float, ...], h: float) -> Tuple[float, ...]:
    """
    经典四阶 Runge-Kutta 单步（自治系统，不需要时间参数）
    :raises DivergenceError: 结果含非有限值，携带步前的最后有限状态
    """
    half = 0.5 * h
    k1 = field(s)
    k2 = field(tuple(si + half * ki for si, ki in zip(s, k1)))
    k3 = field(tuple(si + half * ki for si, ki in zip(s, k2)))
    k4 = field(tuple(si + h * ki for si, ki in zip(s, k3)))
    sixth = h / 6.0
    out = tuple(si + sixth * (a + 2.0 * b + 2.0 * c + d) for si, a, b, c, d in zip(s, k1, k2, k3, k4))
    if not all(math.isfinite(v) for v in out):
        raise DivergenceError(f"RK4 单步出现非有限值，步前状态：{s}", state=s)
    return out


def _integrate_fixed(field: Field, s0: Tuple[float, ...], cfg: IntegrationSettings) -> Trajectory:
    h = cfg.step
    n_steps = _steps(cfg.t_end, h)
    n_skip = _steps(cfg.t_skip, h) if cfg.t_skip > 0 else 0
    stride = int(cfg.stride)
    times: List[float] = []
    samples: List[Tuple[float, ...]] = []
    s = s0
    for i in range(n_steps + 1):
        if i >= n_skip and (i - n_skip) % stride == 0:
            times.append(i * h)
            samples.append(s)
        if i == n_steps:
            break
        try:
            nxt = rk4_step(field, s, h)
        except DivergenceError as e:
            raise DivergenceError(f"轨迹在 t={i * h:.6g} 发散", state=s, time=i * h) from e
        if not _is_bounded(nxt):
            raise DivergenceError(f"轨迹在 t={(i + 1) * h:.6g} 超出发散阈值 {DIVERGENCE_LIMIT:g}",
                                  state=s, time=(i + 1) * h)
        s = nxt
    return Trajectory(np.array(times), np.array(samples, dtype=float).reshape(len(times), len(s0)), cfg)


def _integrate_adaptive(field: Field, s0: Tuple[float, ...], cfg: IntegrationSettings) -> Trajectory:
    def rhs(_t, y):
        return field(tuple(y))

    def blow_up(_t, y):
        return DIVERGENCE_LIMIT - float(np.max(np.abs(y)))

    blow_up.terminal = True

    sol = solve_ivp(rhs, (0.0, cfg.t_end), np.asarray(s0, dtype=float), method="RK45",
                    rtol=cfg.rtol, atol=cfg.atol, events=blow_up)
    if sol.status == 1 or sol.status == -1 or not np.all(np.isfinite(sol.y)):
        finite = np.all(np.isfinite(sol.y), axis=0)
        last = int(np.flatnonzero(finite)[-1]) if finite.any() else 0
        raise DivergenceError(f"自适应积分在 t={sol.t[-1]:.6g} 失败：{sol.message}",
                              state=tuple(sol.y[:, last]), time=float(sol.t[-1]))
    keep = np.flatnonzero(sol.t >= cfg.t_skip)[:: int(cfg.stride)]
    return Trajectory(sol.t[keep].copy(), sol.y[:, keep].T.copy(), cfg)


def integrate(field: Field, s0: Sequence[float], cfg: Optional[IntegrationSettings] = None) -> Trajectory:
    """
    从 t=0 积分到 t_end，丢弃 t_skip 之前的样本
    :param field: 向量场，输入输出为浮点元组
    :param s0: 初始状态
    :param cfg: 积分设置，默认使用 IntegrationSettings()
    :raises DivergenceError: 出现非有限值或分量绝对值超过 1e12
    """
    cfg = cfg or IntegrationSettings()
    start = tuple(float(v) for v in s0)
    if not all(math.isfinite(v) for v in start):
        raise ValueError(f"初始状态必须是有限值，当前：{start}")
    plugin_logger.debug(f"开始积分：方法={cfg.method}, h={cfg.step}, t_end={cfg.t_end}, 初值={start}")
    if cfg.method == "rk45":
        return _integrate_adaptive(field, start, cfg)
    return _integrate_fixed(field, start, cfg)


def local_maxima(values: Sequence[float], times: Sequence[float]) -> List[Tuple[float, float]]:
    """
    提取严格的内部局部极大值，并用相邻三个样本的抛物线插值精修
    平台只报告一次（取平台第一个下标，不做插值）
    :return: [(时间, 值), ...]
    """
    v = np.asarray(values, dtype=float)
    t = np.asarray(times, dtype=float)
    if v.shape != t.shape or v.ndim != 1:
        raise ValueError(f"values 与 times 长度必须一致：{v.shape} vs {t.shape}")
    if v.size < 3:
        raise ValueError(f"至少需要 3 个样本，当前：{v.size}")
    _, props = find_peaks(v, plateau_size=1)
    maxima = []
    for i, size in zip(props["left_edges"], props["plateau_sizes"]):
        t0, t1, t2 = t[i - 1], t[i], t[i + 1]
        y0, y1, y2 = v[i - 1], v[i], v[i + 1]
        if size > 1:
            maxima.append((float(t1), float(y1)))
            continue
        d1 = (y1 - y0) / (t1 - t0)
        d2 = (y2 - y1) / (t2 - t1)
        curvature = (d2 - d1) / (t2 - t0)
        if curvature >= 0:
            maxima.append((float(t1), float(y1)))
            continue
        tv = 0.5 * (t0 + t1) - d1 / (2.0 * curvature)
        tv = min(max(tv, t0), t2)
        yv = y0 + d1 * (tv - t0) + curvature * (tv - t0) * (tv - t1)
        maxima.append((float(tv), float(yv)))
    return maxima


def _upward_crossings(y: np.ndarray) -> np.ndarray:
    """y 由负变非负的下标"""
    return np.flatnonzero((y[:-1] < 0.0) & (y[1:] >= 0.0)) + 1


def loop_maxima(traj: Trajectory) -> List[Tuple[float, float]]:
    """
    每个完整回转只取一个 z 极大值：以 y 的上穿零点切分回转，取区间内最高的局部极大值
    一圈内 y 的正负两个半摆各有一个 z 峰，逐峰采样会把同一条极限环拆成两支
    首尾不完整的回转丢弃；没有回转或回转内没有峰时返回空列表
    :return: [(时间, 值), ...]
    """
    if len(traj) < 3:
        return []
    peaks = local_maxima(traj.component("z"), traj.times)
    crossings = traj.times[_upward_crossings(traj.component("y"))]
    if len(crossings) < 2 or not peaks:
        return []
    peak_times = np.array([t for t, _ in peaks])
    loops = np.searchsorted(crossings, peak_times, side="right")
    best = {}
    for loop, peak in zip(loops, peaks):
        if loop == 0 or loop == len(crossings):
            continue
        if loop not in best or peak[1] > best[loop][1]:
            best[loop] = peak
    return [best[loop] for loop in sorted(best)]
