"""
配置键名与数值格式化工具
"""
import numpy as np

# 常见写法 → 规范键名（大小写敏感：C 是电容，c 是热容）
KEY_ALIASES = {
    "R_0": "R0",
    "r0": "R0",
    "T_0": "T0",
    "t0": "T0",
    "β": "beta",
    "α": "alpha",
    "η": "eta",
    "μ": "mu",
    "γ": "gamma",
    "θ": "theta",
    "ε": "epsilon",
    "eps": "epsilon",
    "δ": "delta",
    "h": "step",
}


def normalize_key(key: str) -> str:
    """
    标准化配置键名
    示例：" R_0 " → R0，eps → epsilon，h → step
    """
    if key is None:
        raise ValueError("配置键不能为空")
    normalized = key.strip()
    if not normalized:
        raise ValueError("配置键不能为空")
    return KEY_ALIASES.get(normalized, normalized)


def format_float(value: float) -> str:
    """17 位有效数字，保证写出再读回时逐位一致"""
    return f"{float(value):.17g}"


def format_decimal(value: float) -> str:
    """十进制（非科学计数法）最短往返表示，用于参数文件"""
    return np.format_float_positional(float(value), trim="-")
