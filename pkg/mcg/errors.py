"""
MCG 插件异常定义
全部继承内置异常，调用方可以像以前一样捕获 ValueError / RuntimeError
"""
from typing import Optional, Sequence


class MCGError(Exception):
    """所有插件异常的基类"""


class ParameterError(MCGError, ValueError):
    """参数不满足约束（消息中写明违反的不等式）"""


class TaylorSurrogateError(ParameterError):
    """物理参数映射后的二阶 Taylor 忆阻不是正定的"""


class DivergenceError(MCGError, RuntimeError):
    """积分发散：携带最后一个有限状态和发散时刻"""

    def __init__(self, message: str, state: Optional[Sequence[float]] = None, time: Optional[float] = None):
        super().__init__(message)
        self.state = tuple(state) if state is not None else None
        self.time = time


class ConfigError(MCGError, ValueError):
    """配置文件格式错误：携带出错的键名和/或行号"""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        super().__init__(message)
        self.key = key
        self.line = line


class StorageError(MCGError, RuntimeError):
    """文件读写失败：携带文件路径"""

    def __init__(self, message: str, path=None):
        super().__init__(message)
        self.path = path
