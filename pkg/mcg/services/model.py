"""
MCG 系统模型服务模块
包含模型参数、物理参数、向量场、Jacobian 以及物理参数到无量纲参数的映射
"""
import math
from dataclasses import asdict, dataclass, replace
from typing import Callable, Dict, NamedTuple, Tuple

import numpy as np

from ..errors import ParameterError, TaylorSurrogateError

MODEL_KEYS = ("alpha", "eta", "a", "b", "mu", "gamma", "theta", "epsilon")
# 物理参数文件键名 → 数据类字段
PHYSICAL_KEYS = {
    "C": "capacitance",
    "L": "inductance",
    "R0": "r0",
    "beta": "beta",
    "T0": "t0",
    "c": "heat_capacitance",
    "delta": "dissipation",
    "a": "a",
    "b": "b",
}

POSITIVITY_INEQUALITY = "gamma^2 < 4*mu*theta"


class State(NamedTuple):
    """相空间中的一点：x = 电容电压，y = 电流，z = 温度偏移 T-T0"""
    x: float
    y: float
    z: float


Field = Callable[[Tuple[float, ...]], Tuple[float, ...]]


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ParameterError(f"参数 {name} 必须是有限实数，当前值：{value}")


def _require_positive(name: str, value: float) -> None:
    _require_finite(name, value)
    if not value > 0:
        raise ParameterError(f"参数 {name} 必须大于 0（{name} > 0 不成立），当前值：{value}")


@dataclass(frozen=True)
class ModelParams:
    """
    MCG 系统的无量纲参数
    构造时立即校验，之后所有运算都可以假定 R(z) > 0
    """
    alpha: float
    eta: float
    a: float
    b: float
    mu: float
    gamma: float
    theta: float
    epsilon: float

    def __post_init__(self):
        for name in MODEL_KEYS:
            object.__setattr__(self, name, float(getattr(self, name)))
            _require_finite(name, getattr(self, name))
        for name in ("alpha", "eta", "mu", "theta", "epsilon"):
            _require_positive(name, getattr(self, name))
        if not self.gamma * self.gamma < 4.0 * self.mu * self.theta:
            bound = 2.0 * math.sqrt(self.mu * self.theta)
            raise ParameterError(
                f"忆阻 R(z) 不是处处为正：{POSITIVITY_INEQUALITY} 不成立"
                f"（要求 {-bound:.6g} < gamma < {bound:.6g}，当前 gamma={self.gamma}）"
            )

    def with_alpha(self, alpha: float) -> "ModelParams":
        """返回只修改分岔参数 alpha 的副本"""
        return replace(self, alpha=alpha)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)

    @property
    def min_memristance(self) -> float:
        """R(z) 的全局最小值 θ − γ²/(4μ)"""
        return self.theta - self.gamma * self.gamma / (4.0 * self.mu)


@dataclass(frozen=True)
class PhysicalParams:
    """
    电路与热敏电阻的物理量
    capacitance C (F), inductance L (H), r0 冷态电阻 R0 (Ω), beta 材料常数 (K),
    t0 室温 T0 (K), heat_capacitance 热容 c (J/K), dissipation 耗散常数 δ (W/K),
    a (Ω), b (Ω/A²) 为非线性电阻系数
    """
    capacitance: float
    inductance: float
    r0: float
    beta: float
    t0: float
    heat_capacitance: float
    dissipation: float
    a: float
    b: float

    def __post_init__(self):
        for key, name in PHYSICAL_KEYS.items():
            object.__setattr__(self, name, float(getattr(self, name)))
            if name in ("a", "b"):
                _require_finite(key, getattr(self, name))
            else:
                _require_positive(key, getattr(self, name))

    def to_dict(self) -> Dict[str, float]:
        """按参数文件键名导出"""
        return {key: getattr(self, name) for key, name in PHYSICAL_KEYS.items()}

    @classmethod
    def from_dict(cls, values: Dict[str, float]) -> "PhysicalParams":
        return cls(**{name: values[key] for key, name in PHYSICAL_KEYS.items()})


def study_params(alpha: float = 0.5) -> ModelParams:
    """稳定性分析使用的参数组：a=-6, b=3, η=12.2, μ=3, γ=-2, θ=3, ε=0.6"""
    return ModelParams(alpha=alpha, eta=12.2, a=-6.0, b=3.0, mu=3.0, gamma=-2.0, theta=3.0, epsilon=0.6)


def memristance(z: float, p: ModelParams) -> float:
    """R(z) = μz² + γz + θ"""
    return (p.mu * z + p.gamma) * z + p.theta


def nonlinear_resistor(y: float, p: ModelParams) -> float:
    """f(y) = ay + by³（奇函数）"""
    return p.a * y + p.b * y * y * y


def mirror(s) -> State:
    """对称变换 (x, y, z) → (−x, −y, z)"""
    return State(-s[0], -s[1], s[2])


def make_field(p: ModelParams) -> Field:
    """
    生成MCG 系统的向量场闭包（输入输出都是浮点元组，供积分器高频调用）
    """
    inv_alpha = 1.0 / p.alpha
    inv_eta = 1.0 / p.eta
    a, b, mu, gamma, theta, eps = p.a, p.b, p.mu, p.gamma, p.theta, p.epsilon

    def field(s):
        x, y, z = s
        r = (mu * z + gamma) * z + theta
        return (
            y * inv_alpha,
            -(x + a * y + b * y * y * y + r * y) * inv_eta,
            r * y * y - eps * z,
        )

    return field


def vector_field(s, p: ModelParams) -> State:
    """
    计算 MCG 系统在状态 s 处的导数
    :raises ValueError: 状态含非有限分量
    """
    if not all(math.isfinite(v) for v in s):
        raise ValueError(f"状态必须是有限值，当前：{tuple(s)}")
    return State(*make_field(p)(tuple(s)))


def jacobian(s, p: ModelParams) -> np.ndarray:
    """MCG 系统的 Jacobian 矩阵（3×3）"""
    _, y, z = s
    r = memristance(z, p)
    dr = 2.0 * p.mu * z + p.gamma
    return np.array([
        [0.0, 1.0 / p.alpha, 0.0],
        [-1.0 / p.eta, -(p.a + 3.0 * p.b * y * y + r) / p.eta, -dr * y / p.eta],
        [0.0, 2.0 * r * y, dr * y * y - p.epsilon],
    ])


def divergence(s, p: ModelParams) -> float:
    """Jacobian 的迹，即相体积收缩率"""
    _, y, z = s
    r = memristance(z, p)
    return -(p.a + 3.0 * p.b * y * y + r) / p.eta + (2.0 * p.mu * z + p.gamma) * y * y - p.epsilon


def physical_to_model(ph: PhysicalParams) -> ModelParams:
    """
    物理参数映射为无量纲参数：
    α = C, η = L, θ = R0/c, γ = −(R0/c)(β/T0²), μ = (R0/c)·β(β+2T0)/(2T0⁴), ε = δ/c
    :raises TaylorSurrogateError: 映射结果不满足 γ² < 4μθ
    """
    scale = ph.r0 / ph.heat_capacitance
    t0 = ph.t0
    values = dict(
        alpha=ph.capacitance,
        eta=ph.inductance,
        a=ph.a,
        b=ph.b,
        mu=scale * ph.beta * (ph.beta + 2.0 * t0) / (2.0 * t0 ** 4),
        gamma=-scale * ph.beta / (t0 * t0),
        theta=scale,
        epsilon=ph.dissipation / ph.heat_capacitance,
    )
    if not values["gamma"] ** 2 < 4.0 * values["mu"] * values["theta"]:
        raise TaylorSurrogateError(
            f"Taylor surrogate not positive-definite：{POSITIVITY_INEQUALITY} 不成立"
            f"（gamma={values['gamma']:.6g}, mu={values['mu']:.6g}, theta={values['theta']:.6g}）"
        )
    try:
        return ModelParams(**values)
    except ParameterError as e:
        raise TaylorSurrogateError(f"Taylor surrogate not positive-definite：{str(e)}") from e
