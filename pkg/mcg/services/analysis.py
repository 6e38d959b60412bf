"""
动力学分析服务模块
原点特征值与不动点分类、Lyapunov 指数谱（Benettin 切空间 QR 方法）、Kaplan–Yorke 维数、
吸引子分类、周期检测以及双螺旋几何判别
"""
import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial import ConvexHull, QhullError, cKDTree

from ..errors import DivergenceError, ParameterError
from ..utils.logger import plugin_logger
from .integrator import (IntegrationSettings, Trajectory, _is_bounded, _steps, _upward_crossings, integrate,
                         local_maxima)
from .model import ModelParams, make_field


# ---------------------------------------------------------------- 不动点

class FixedPointType(str, Enum):
    SADDLE_FOCUS = "SaddleFocus"
    SADDLE_NODE = "SaddleNode"


@dataclass(frozen=True)
class EigenReport:
    """
    原点处的特征值报告
    lambda1 = −ε；lambda2/lambda3 为二次因子的两个根（共轭复数或两个实数）
    alpha_star = 4η/(a+θ)²，a+θ = 0 时为 None（不存在鞍焦点窗口边界）
    """
    alpha: float
    lambda1: float
    lambda2: complex
    lambda3: complex
    discriminant: float
    alpha_star: Optional[float]
    classification: FixedPointType

    @property
    def unstable_pair(self) -> bool:
        """λ2,3 的实部是否为正（a+θ<0 时成立）"""
        return self.lambda2.real > 0 and self.lambda3.real > 0

    @property
    def is_complex_pair(self) -> bool:
        return self.discriminant < 0


def classify_fixed_point(rep: EigenReport) -> FixedPointType:
    """判别式 < 0（即 0 < α < alpha_star）为鞍焦点，否则为鞍结点；边界 α = alpha_star 归为鞍结点"""
    return FixedPointType.SADDLE_FOCUS if rep.discriminant < 0 else FixedPointType.SADDLE_NODE


def origin_eigenvalues(p: ModelParams) -> EigenReport:
    """
    特征多项式 (λ+ε)[αηλ² + α(a+θ)λ + 1] = 0 的闭式根
    """
    s = p.a + p.theta
    if s == 0:
        alpha_star = None
        plugin_logger.debug("a + θ = 0：alpha_star 没有定义")
        discriminant = -4.0 * p.eta / p.alpha
    else:
        alpha_star = 4.0 * p.eta / (s * s)
        # 与 (a+θ)² − 4η/α 数学上相同，但在 α == alpha_star 时严格为 0
        discriminant = s * s * (1.0 - alpha_star / p.alpha)
    root = cmath.sqrt(discriminant)
    lambda2 = complex((-s + root) / (2.0 * p.eta))
    lambda3 = complex((-s - root) / (2.0 * p.eta))
    report = EigenReport(
        alpha=p.alpha,
        lambda1=-p.epsilon,
        lambda2=lambda2,
        lambda3=lambda3,
        discriminant=discriminant,
        alpha_star=alpha_star,
        classification=FixedPointType.SADDLE_NODE,
    )
    return replace(report, classification=classify_fixed_point(report))


# ---------------------------------------------------------------- Lyapunov 指数

@dataclass(frozen=True)
class LyapunovSettings:
    """Lyapunov 指数计算设置"""
    step: float = 0.005
    t_average: float = 5000.0
    t_transient: float = 500.0
    renorm_interval: float = 1.0

    def __post_init__(self):
        if not self.step > 0:
            raise ParameterError(f"积分步长必须大于 0，当前值：{self.step}")
        if not self.t_average > 0:
            raise ParameterError(f"平均时长必须大于 0，当前值：{self.t_average}")
        if not self.t_transient >= 0:
            raise ParameterError(f"暂态时长不能为负，当前值：{self.t_transient}")
        if not self.renorm_interval >= self.step:
            raise ParameterError(f"正交化间隔不能小于步长：{self.renorm_interval} < {self.step}")

    @classmethod
    def from_config(cls, config: dict) -> "LyapunovSettings":
        defaults = cls()
        return cls(
            step=float(config.get("step", defaults.step)),
            t_average=float(config.get("lce_time", defaults.t_average)),
            t_transient=float(config.get("lce_transient", defaults.t_transient)),
            renorm_interval=float(config.get("lce_renorm", defaults.renorm_interval)),
        )


@dataclass(frozen=True)
class LyapunovSpectrum:
    """
    Lyapunov 指数谱（按降序），附带收敛信息
    tail_variation: 最后 10% 平均时间内各指数滑动平均的最大漂移
    trace_average: 同一轨迹上 Jacobian 迹的时间平均（指数之和的独立校验）
    """
    exponents: Tuple[float, float, float]
    averaging_time: float
    renorm_interval: float
    tail_variation: float
    trace_average: float

    def __post_init__(self):
        if len(self.exponents) != 3:
            raise ValueError(f"指数谱必须恰好有 3 个指数，当前：{self.exponents}")
        if list(self.exponents) != sorted(self.exponents, reverse=True):
            raise ValueError(f"指数谱必须按降序排列：{self.exponents}")

    @property
    def total(self) -> float:
        return float(sum(self.exponents))


def _variational_rhs(u, c):
    """
    MCG 系统与切空间方程 dV/dt = J(s)·V 的右端
    u = (x, y, z, V 按行展开的 9 个分量)；同时返回 J 的迹
    """
    x, y, z, v0, v1, v2, v3, v4, v5, v6, v7, v8 = u
    inv_alpha, inv_eta, a, b, mu, gamma, theta, eps = c
    r = (mu * z + gamma) * z + theta
    dr = 2.0 * mu * z + gamma
    yy = y * y
    j22 = -(a + 3.0 * b * yy + r) * inv_eta
    j23 = -dr * y * inv_eta
    j32 = 2.0 * r * y
    j33 = dr * yy - eps
    return (
        y * inv_alpha,
        -(x + a * y + b * yy * y + r * y) * inv_eta,
        r * yy - eps * z,
        inv_alpha * v3, inv_alpha * v4, inv_alpha * v5,
        -inv_eta * v0 + j22 * v3 + j23 * v6,
        -inv_eta * v1 + j22 * v4 + j23 * v7,
        -inv_eta * v2 + j22 * v5 + j23 * v8,
        j32 * v3 + j33 * v6,
        j32 * v4 + j33 * v7,
        j32 * v5 + j33 * v8,
    ), j22 + j33


def _variational_step(u, h, c):
    """增广系统的 RK4 单步；第二个返回值是同一求积公式下 ∫tr(J)dt 的增量"""
    half = 0.5 * h
    k1, t1 = _variational_rhs(u, c)
    k2, t2 = _variational_rhs(tuple(ui + half * ki for ui, ki in zip(u, k1)), c)
    k3, t3 = _variational_rhs(tuple(ui + half * ki for ui, ki in zip(u, k2)), c)
    k4, t4 = _variational_rhs(tuple(ui + h * ki for ui, ki in zip(u, k3)), c)
    sixth = h / 6.0
    out = tuple(ui + sixth * (a + 2.0 * b + 2.0 * cc + d) for ui, a, b, cc, d in zip(u, k1, k2, k3, k4))
    return out, sixth * (t1 + 2.0 * t2 + 2.0 * t3 + t4)


def lyapunov_spectrum(p: ModelParams, s0: Sequence[float],
                      settings: Optional[LyapunovSettings] = None) -> LyapunovSpectrum:
    """
    Benettin 型切空间方法：状态与三个切向量同时积分，每隔 renorm_interval 做一次 QR 重新正交化，
    指数为对数伸缩因子的时间平均
    :raises ValueError: s0 是原点（不动点）
    :raises DivergenceError: 轨迹发散
    """
    settings = settings or LyapunovSettings()
    start = tuple(float(v) for v in s0)
    if all(v == 0.0 for v in start):
        raise ValueError("初始状态不能是原点（唯一不动点）")
    h = settings.step
    plugin_logger.debug(f"计算 Lyapunov 指数：alpha={p.alpha}, 初值={start}, 平均时长={settings.t_average}")

    if settings.t_transient > 0:
        transient = IntegrationSettings(step=h, t_end=settings.t_transient, t_skip=0.0,
                                        stride=max(1, _steps(settings.t_transient, h)))
        start = integrate(make_field(p), start, transient).final_state

    consts = (1.0 / p.alpha, 1.0 / p.eta, p.a, p.b, p.mu, p.gamma, p.theta, p.epsilon)
    steps_per_block = _steps(settings.renorm_interval, h)
    blocks = max(1, _steps(settings.t_average, steps_per_block * h))
    block_time = steps_per_block * h

    u = start + (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)
    log_sums = np.zeros(3)
    trace_integral = 0.0
    history = np.empty((blocks, 3))
    for block in range(blocks):
        for _ in range(steps_per_block):
            u, dtrace = _variational_step(u, h, consts)
            trace_integral += dtrace
        if not _is_bounded(u[:3]) or not all(math.isfinite(v) for v in u):
            t_fail = (block + 1) * block_time + settings.t_transient
            raise DivergenceError(f"Lyapunov 计算中轨迹在 t≈{t_fail:.6g} 发散", state=u[:3], time=t_fail)
        q, r = np.linalg.qr(np.array(u[3:]).reshape(3, 3))
        log_sums += np.log(np.abs(np.diag(r)))
        u = u[:3] + tuple(q.ravel().tolist())
        history[block] = log_sums / ((block + 1) * block_time)

    total_time = blocks * block_time
    tail = history[-max(1, blocks // 10):]
    tail_variation = float(np.max(tail.max(axis=0) - tail.min(axis=0)))
    exponents = tuple(sorted((float(v) for v in log_sums / total_time), reverse=True))
    spectrum = LyapunovSpectrum(
        exponents=exponents,
        averaging_time=total_time,
        renorm_interval=block_time,
        tail_variation=tail_variation,
        trace_average=trace_integral / total_time,
    )
    plugin_logger.debug(f"alpha={p.alpha} 的 Lyapunov 指数：{exponents}，尾部漂移 {tail_variation:.3g}")
    return spectrum


def kaplan_yorke(ls: LyapunovSpectrum, zero_tol: float = 0.0) -> float:
    """
    Kaplan–Yorke 维数 D = j + (Σ_{i≤j} λi)/|λ_{j+1}|，j 为部分和非负的最大下标
    :param zero_tol: |λ| < zero_tol 的指数按 0 处理（测量得到的零指数）
    """
    lams = [0.0 if abs(v) < zero_tol else float(v) for v in ls.exponents]
    if lams[0] < 0:
        return 0.0
    partial = 0.0
    for j, lam in enumerate(lams):
        if partial + lam < 0:
            return j + partial / abs(lam)
        partial += lam
    return float(len(lams))


# ---------------------------------------------------------------- 吸引子分类

class AttractorKind(str, Enum):
    TORUS2 = "Torus2"
    LIMIT_CYCLE1 = "LimitCycle1"
    PERIODIC_N = "PeriodicN"
    PERIODIC = "Periodic"  # 周期族，周期尚未确定
    CHAOS = "Chaos"
    UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class AttractorClass:
    """吸引子类别；double_spiral 只对 CHAOS 有意义"""
    kind: AttractorKind
    period: Optional[int] = None
    double_spiral: Optional[bool] = None
    signs: str = ""

    def __post_init__(self):
        if self.kind == AttractorKind.PERIODIC_N and (self.period is None or self.period < 2):
            raise ValueError(f"PeriodicN 的周期必须 >= 2，当前：{self.period}")

    @property
    def is_periodic(self) -> bool:
        return self.kind in (AttractorKind.LIMIT_CYCLE1, AttractorKind.PERIODIC_N, AttractorKind.PERIODIC)

    @property
    def label(self) -> str:
        if self.kind == AttractorKind.UNCLASSIFIED:
            return f"{self.kind.value}{self.signs}"
        return self.kind.value


def sign_pattern(exponents: Sequence[float], zero_tol: float) -> str:
    """把指数映射为 +/0/- 符号串，例如 "+0-" """
    return "".join("0" if abs(v) < zero_tol else ("+" if v > 0 else "-") for v in exponents)


_PATTERNS = {
    "+0-": AttractorKind.CHAOS,
    "00-": AttractorKind.TORUS2,
    "0--": AttractorKind.PERIODIC,
}


def classify_attractor(ls: LyapunovSpectrum, zero_tol: float = 0.02,
                       period: Optional["PeriodResult"] = None) -> AttractorClass:
    """
    按指数符号模式分类：(+,0,−) 混沌，(0,0,−) 二维环面，(0,−,−) 周期族；
    其余模式返回 UNCLASSIFIED（不在分类表内），不会强行归入已知类别
    :param period: 若给出周期检测结果，周期族会细分为 LimitCycle1 / PeriodicN
    """
    if not zero_tol > 0:
        raise ValueError(f"zero_tol 必须大于 0，当前值：{zero_tol}")
    signs = sign_pattern(ls.exponents, zero_tol)
    kind = _PATTERNS.get(signs, AttractorKind.UNCLASSIFIED)
    if kind == AttractorKind.UNCLASSIFIED:
        plugin_logger.warning(f"指数谱 {ls.exponents} 的符号模式 ({signs}) 不在分类表内")
        return AttractorClass(kind, signs=f"({signs})")
    cls = AttractorClass(kind, signs=signs)
    if kind == AttractorKind.PERIODIC and period is not None:
        return resolve_period(cls, period)
    return cls


def resolve_period(cls: AttractorClass, period: "PeriodResult") -> AttractorClass:
    """用周期检测结果细化周期族"""
    if not cls.is_periodic or period.period is None:
        return cls
    if period.period == 1:
        return AttractorClass(AttractorKind.LIMIT_CYCLE1, period=1, signs=cls.signs)
    return AttractorClass(AttractorKind.PERIODIC_N, period=period.period, signs=cls.signs)


# ---------------------------------------------------------------- 周期检测

@dataclass(frozen=True)
class PeriodResult:
    """
    周期检测结果
    status: periodic（周期确定）, ambiguous（聚类数随阈值变化）, aperiodic（填满区间或访问序列不周期）
    """
    period: Optional[int]
    clusters: int
    status: str


def _cluster_labels(values: np.ndarray, threshold: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    一维单链接聚类：合并距离不超过阈值的值
    :return: (每个值的簇编号, 每个簇的宽度)，簇编号按簇内最小值升序从 0 开始
    """
    tree = linkage(values.reshape(-1, 1), method="single")
    raw = fcluster(tree, t=threshold, criterion="distance")
    ids = np.unique(raw)
    lows = np.array([values[raw == i].min() for i in ids])
    rank = {int(i): k for k, i in enumerate(ids[np.argsort(lows, kind="stable")])}
    labels = np.array([rank[int(i)] for i in raw])
    widths = np.array([float(np.ptp(values[labels == k])) for k in range(len(ids))])
    return labels, widths


def _cluster_scale(values: np.ndarray) -> float:
    # 极差下限同时考虑量级，避免极限环上的数值噪声被当成多个簇
    return max(float(np.ptp(values)), 1e-3 * float(np.max(np.abs(values))), 1e-9)


def detect_period(z_maxima: Sequence[float], cluster_tol_rel: float = 0.02) -> PeriodResult:
    """
    按单链接聚类数确定周期，并检查簇的访问序列以该周期重复
    阈值 = cluster_tol_rel × 序列尺度；阈值放大/缩小 50% 后聚类数变化则判为 ambiguous
    :raises ValueError: 极大值少于 8 个
    """
    values = np.asarray(z_maxima, dtype=float)
    if values.size < 8:
        raise ValueError(f"周期检测至少需要 8 个极大值，当前：{values.size}")
    if not cluster_tol_rel > 0:
        raise ValueError(f"cluster_tol_rel 必须大于 0，当前值：{cluster_tol_rel}")
    scale = _cluster_scale(values)
    threshold = cluster_tol_rel * scale
    labels, widths = _cluster_labels(values, threshold)
    count = len(widths)

    perturbed = {len(_cluster_labels(values, factor * threshold)[1]) for factor in (0.5, 1.5)}
    if perturbed != {count}:
        plugin_logger.warning(f"周期检测不稳定：阈值扰动后的聚类数 {sorted(perturbed | {count})}")
        return PeriodResult(None, count, "ambiguous")
    if np.any(widths > threshold):
        return PeriodResult(None, count, "aperiodic")
    if count > 1 and not np.array_equal(labels[count:], labels[:-count]):
        return PeriodResult(None, count, "aperiodic")
    return PeriodResult(count, count, "periodic")


# ---------------------------------------------------------------- 双螺旋几何

# 少数螺旋朝向的最低占比
LOBE_MIN_SHARE = 0.1


def _cloud_diameter(points: np.ndarray) -> float:
    try:
        hull = points[ConvexHull(points).vertices]
    except (QhullError, ValueError):
        # 退化点云（共面/共线）退回包围盒对角线
        return float(np.linalg.norm(points.max(axis=0) - points.min(axis=0)))
    best = 0.0
    for vertex in hull:
        best = max(best, float(np.max(np.sum((hull - vertex) ** 2, axis=1))))
    return math.sqrt(best)


def lobe_share(traj: Trajectory, sym_tol: float = 0.05, min_loops: int = 8) -> Optional[float]:
    """
    按回转统计螺旋朝向：每圈比较 y>0 与 y<0 两个半摆上的 z 峰高，相差超过 sym_tol 即为有朝向的圈
    单螺旋的圈始终偏向同一侧，双螺旋在两侧之间切换
    :return: 少数朝向所占比例；完整回转不足 min_loops，或有朝向的圈不到一半时返回 None
    """
    if len(traj) < 3:
        return None
    times = traj.times
    y = traj.component("y")
    crossings = times[_upward_crossings(y)]
    if len(crossings) - 1 < min_loops:
        return None
    peaks = local_maxima(traj.component("z"), times)
    if not peaks:
        return None
    peak_times = np.array([t for t, _ in peaks])
    heights = np.array([v for _, v in peaks])
    sides = np.interp(peak_times, times, y) > 0
    loops = np.searchsorted(crossings, peak_times, side="right")
    oriented = []
    for loop in range(1, len(crossings)):
        inside = loops == loop
        upper = heights[inside & sides]
        lower = heights[inside & ~sides]
        if upper.size == 0 and lower.size == 0:
            continue
        if upper.size == 0 or lower.size == 0:
            oriented.append(upper.size > 0)
            continue
        hp, hn = float(upper.max()), float(lower.max())
        if abs(hp - hn) > sym_tol * max(abs(hp), abs(hn)):
            oriented.append(hp > hn)
    if len(oriented) < 0.5 * (len(crossings) - 1):
        return None
    positive = sum(oriented)
    return min(positive, len(oriented) - positive) / len(oriented)


def detect_double_spiral(traj: Trajectory, sym_tol: float = 0.05, min_samples: int = 10_000) -> bool:
    """
    启发式判断点云是否近似关于 (x,y,z)→(−x,−y,z) 自对称，并且同时占据 x>δ 与 x<−δ 两个半空间
    （各至少 25% 的样本，δ 为直径的 1%）。单个螺旋的镜像是与之共存的另一个吸引子，不是它自己
    回转数足够时还要求两种螺旋朝向都出现（少数朝向至少占 LOBE_MIN_SHARE）
    :raises ValueError: 样本数不足
    """
    points = np.asarray(traj.states, dtype=float)[:, :3]
    if len(points) < min_samples:
        raise ValueError(f"双螺旋判别至少需要 {min_samples} 个样本，当前：{len(points)}")
    diameter = _cloud_diameter(points)
    if diameter == 0.0:
        return False
    mirrored = points * np.array([-1.0, -1.0, 1.0])
    distances, _ = cKDTree(points).query(mirrored)
    symmetric_share = float(np.mean(distances <= sym_tol * diameter))
    delta = 0.01 * diameter
    right = float(np.mean(points[:, 0] > delta))
    left = float(np.mean(points[:, 0] < -delta))
    share = lobe_share(traj, sym_tol)
    plugin_logger.debug(f"双螺旋判别：对称比例={symmetric_share:.3f}, x>δ 占比={right:.3f}, x<-δ 占比={left:.3f}, "
                        f"少数朝向占比={share}")
    if share is not None and share < LOBE_MIN_SHARE:
        return False
    return symmetric_share >= 1.0 - sym_tol and right >= 0.25 and left >= 0.25


# ---------------------------------------------------------------- 参考区间

@dataclass(frozen=True)
class ReferenceRegime:
    """参考 α 区间、符号模式、吸引子类型与维数"""
    alpha_low: float
    alpha_high: float
    signs: str
    kind: AttractorKind
    description: str
    dimension: float
    representative_alpha: float
    double_spiral: bool = False


REFERENCE_REGIMES: List[ReferenceRegime] = [
    ReferenceRegime(0.001, 0.08, "00-", AttractorKind.TORUS2, "2-Torus", 2.0, 0.05),
    ReferenceRegime(0.08, 0.10, "0--", AttractorKind.LIMIT_CYCLE1, "1-Periodic motion (limit cycle)", 1.0, 0.09),
    ReferenceRegime(0.11, 0.13, "+0-", AttractorKind.CHAOS, "Spiral-chaos", 2.18, 0.12),
    ReferenceRegime(0.14, 0.19, "0--", AttractorKind.PERIODIC_N, "n-Periodic motion", 1.0, 0.165),
    ReferenceRegime(0.20, 0.20, "+0-", AttractorKind.CHAOS, "Spiral-chaos", 2.14, 0.20),
    ReferenceRegime(0.21, 0.23, "0--", AttractorKind.PERIODIC_N, "n-Periodic motion", 1.0, 0.22),
    ReferenceRegime(0.24, 0.28, "0--", AttractorKind.LIMIT_CYCLE1, "1-Periodic motion (limit cycle)", 1.0, 0.26),
    ReferenceRegime(0.29, 0.30, "0--", AttractorKind.PERIODIC_N, "n-Periodic motion", 1.0, 0.295),
    ReferenceRegime(0.30, 0.98, "+0-", AttractorKind.CHAOS, "Spiral-chaos", 2.21, 0.5),
    ReferenceRegime(1.0, 1.1, "0--", AttractorKind.LIMIT_CYCLE1, "1-Periodic motion (limit cycle)", 1.0, 1.05),
    ReferenceRegime(1.2, 2.9, "+0-", AttractorKind.CHAOS, "Double spiral-chaos", 2.19, 1.2, True),
]


def reference_regime(alpha: float) -> Optional[ReferenceRegime]:
    """查找包含 alpha 的参考区间（区间端点包含在内，先匹配先返回；空隙处返回 None）"""
    for regime in REFERENCE_REGIMES:
        if regime.alpha_low <= alpha <= regime.alpha_high:
            return regime
    return None
