"""
NTC 热敏电阻特性服务模块
β 模型、二阶 Taylor 近似以及两者的拟合优度（决定系数 R²）
"""
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .model import PhysicalParams


def thermistor_resistance(T: float, ph: PhysicalParams) -> float:
    """
    β 模型：R(T) = R0·exp[β(1/T − 1/T0)]
    :param T: 温度（开尔文，必须大于 0）
    :return: 电阻（欧姆）
    """
    if not T > 0:
        raise ValueError(f"温度必须大于 0 K，当前值：{T}")
    return ph.r0 * math.exp(ph.beta * (1.0 / T - 1.0 / ph.t0))


def taylor_resistance(T: float, ph: PhysicalParams, order: int = 2) -> float:
    """
    β 模型在 T0 处的 Taylor 展开
    R0[1 − (β/T0²)(T−T0) + β(β+2T0)/(2T0⁴)(T−T0)²]
    :param order: 1 只保留线性项，2 为完整的二阶近似
    """
    if order not in (1, 2):
        raise ValueError(f"Taylor 展开阶数只能是 1 或 2，当前值：{order}")
    dt = T - ph.t0
    t0 = ph.t0
    value = 1.0 - ph.beta / (t0 * t0) * dt
    if order == 2:
        value += ph.beta * (ph.beta + 2.0 * t0) / (2.0 * t0 ** 4) * dt * dt
    return ph.r0 * value


def coefficient_of_determination(observed: Sequence[float], predicted: Sequence[float]) -> float:
    """
    决定系数 R² = 1 − SS_res/SS_tot（SS_tot 相对观测值均值）
    :raises ValueError: 长度不一致、为空，或观测值方差为零
    """
    obs = np.asarray(observed, dtype=float)
    pred = np.asarray(predicted, dtype=float)
    if obs.ndim != 1 or obs.shape != pred.shape:
        raise ValueError(f"观测值与预测值长度必须一致：{obs.shape} vs {pred.shape}")
    if obs.size == 0:
        raise ValueError("观测值不能为空")
    ss_tot = float(np.sum((obs - obs.mean()) ** 2))
    if ss_tot == 0.0:
        raise ValueError("观测值全部相同，R² 没有定义")
    ss_res = float(np.sum((obs - pred) ** 2))
    return 1.0 - ss_res / ss_tot


@dataclass(frozen=True)
class ThermistorFit:
    """热敏电阻曲线与其 Taylor 近似的对比结果"""
    temperatures: np.ndarray
    exact: np.ndarray
    taylor: np.ndarray
    r2: float


def thermistor_fit(ph: PhysicalParams, t_min: float = 240.0, t_max: float = 300.0,
                   points: int = 61, order: int = 2) -> ThermistorFit:
    """
    在均匀温度网格上比较 β 模型与 Taylor 近似
    :param points: 网格点数（至少 3）
    """
    if not 0 < t_min < t_max:
        raise ValueError(f"温度区间无效：[{t_min}, {t_max}]")
    if points < 3:
        raise ValueError(f"温度采样点数至少为 3，当前值：{points}")
    temps = np.linspace(t_min, t_max, points)
    exact = np.array([thermistor_resistance(t, ph) for t in temps])
    taylor = np.array([taylor_resistance(t, ph, order) for t in temps])
    return ThermistorFit(temps, exact, taylor, coefficient_of_determination(exact, taylor))


def r2_versus_t0(r0: float, beta: float, t0_grid: Sequence[float], t_min: float = 240.0,
                 t_max: float = 300.0, points: int = 61) -> List[Tuple[float, float]]:
    """
    R² 随室温 T0 的变化（T0 在原始数据中没有给出）
    其余物理量对 R(T) 没有影响，取占位值 1
    """
    rows = []
    for t0 in t0_grid:
        ph = PhysicalParams(capacitance=1.0, inductance=1.0, r0=r0, beta=beta, t0=float(t0),
                            heat_capacitance=1.0, dissipation=1.0, a=0.0, b=0.0)
        rows.append((float(t0), thermistor_fit(ph, t_min, t_max, points).r2))
    return rows
