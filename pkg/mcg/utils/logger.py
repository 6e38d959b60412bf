"""
插件日志工具
在 AstrBot 宿主内运行时直接使用宿主日志器，独立运行（命令行、测试）时使用标准 logging
"""
import logging
import sys

try:
    from astrbot.api import logger as plugin_logger
    HOSTED = True
except ImportError:
    plugin_logger = logging.getLogger("astrbot_plugin_mcg")
    HOSTED = False


def setup_cli_logging(verbose: bool = False) -> None:
    """
    命令行模式下配置日志输出（写到 stderr，保证 stdout 只有结果）
    :param verbose: 是否输出调试日志
    """
    if HOSTED:
        return
    level = logging.DEBUG if verbose else logging.INFO
    plugin_logger.setLevel(level)
    if not plugin_logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("[%(asctime)s] [%(levelname)s] %(message)s", "%H:%M:%S"))
        plugin_logger.addHandler(handler)
