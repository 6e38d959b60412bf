"""
MCG 忆阻电路混沌系统：积分、稳定性分析、Lyapunov 指数与分岔扫描
"""
__version__ = "1.0.0"
