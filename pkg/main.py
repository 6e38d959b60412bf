"""
AstrBot MCG 混沌电路插件入口文件
严格遵循官方规范
"""
import asyncio
from typing import Callable, List, Optional

from astrbot.api.star import register, Context, Star
from astrbot.api.event import filter, AstrMessageEvent
from astrbot.api import logger

# 导入核心模块
from .mcg.core import DEFAULT_BETA, DEFAULT_R0, MCGCore
from .mcg.commands import cmd_eigen, cmd_fit_thermistor, cmd_simulate
from .mcg.errors import MCGError

HELP_TEXT = (
    "📚 MCG 混沌电路插件命令列表\n"
    "=================\n"
    "/mcg_eigen <alpha> - 原点特征值与不动点类型\n"
    "  示例：/mcg_eigen 0.5\n"
    "\n"
    "/mcg_simulate <alpha> - 单点积分，输出 Lyapunov 指数、KY 维数与吸引子类别（耗时较长）\n"
    "  示例：/mcg_simulate 1.2\n"
    "\n"
    "/mcg_fit [T0] - 热敏电阻二阶 Taylor 近似的 R²（T0 单位 K）\n"
    "  示例：/mcg_fit 270\n"
    "\n"
    "/mcg_help - 显示本帮助"
)


def _argument(event: AstrMessageEvent) -> Optional[float]:
    parts = event.message_str.strip().split()
    if len(parts) < 2:
        return None
    return float(parts[1])


# 导出插件类
@register("astrbot_plugin_mcg", "MCG Plugin Developer", "忆阻电路混沌系统仿真与分析插件", "1.0.0")
class MCGPlugin(Star):
    def __init__(self, context: Context, config: Optional[dict] = None):
        super().__init__(context)
        self.mcg_core = MCGCore(dict(config or {}))
        logger.info("MCG 插件初始化成功")

    async def _run(self, handler: Callable[..., List[str]], *args) -> str:
        """在线程里执行计算，把结果行拼成一条消息"""
        try:
            lines = await asyncio.to_thread(handler, self.mcg_core, *args)
        except (MCGError, ValueError) as e:
            logger.error(f"{handler.__name__} 执行失败: {str(e)}")
            return f"❌ {str(e)}"
        return "\n".join(lines)

    @filter.command("mcg_eigen")
    async def handle_eigen(self, event: AstrMessageEvent):
        """原点特征值，使用方法：/mcg_eigen <alpha>，例如：/mcg_eigen 0.5"""
        try:
            alpha = _argument(event)
        except ValueError:
            yield event.plain_result("❌ alpha 必须是数字，例如：/mcg_eigen 0.5")
            return
        if alpha is None:
            yield event.plain_result("❌ 请输入 alpha，例如：/mcg_eigen 0.5")
            return
        result = await self._run(cmd_eigen, None, alpha, alpha, 1.0)
        yield event.plain_result(result)

    @filter.command("mcg_simulate")
    async def handle_simulate(self, event: AstrMessageEvent):
        """单点仿真与分析，使用方法：/mcg_simulate <alpha>，例如：/mcg_simulate 0.5"""
        try:
            alpha = _argument(event)
        except ValueError:
            yield event.plain_result("❌ alpha 必须是数字，例如：/mcg_simulate 0.5")
            return
        if alpha is None:
            yield event.plain_result("❌ 请输入 alpha，例如：/mcg_simulate 0.5")
            return
        yield event.plain_result(f"⏳ 正在计算 alpha={alpha:g}，请稍候……")
        result = await self._run(cmd_simulate, None, alpha, None, False)
        yield event.plain_result(result)

    @filter.command("mcg_fit")
    async def handle_fit(self, event: AstrMessageEvent):
        """热敏电阻 Taylor 近似拟合，使用方法：/mcg_fit [T0]，例如：/mcg_fit 270"""
        try:
            t0 = _argument(event)
        except ValueError:
            yield event.plain_result("❌ T0 必须是数字（单位 K），例如：/mcg_fit 270")
            return
        result = await self._run(cmd_fit_thermistor, t0, DEFAULT_R0, DEFAULT_BETA, None, False)
        yield event.plain_result(result)

    @filter.command("mcg_help")
    async def handle_help(self, event: AstrMessageEvent):
        """显示 MCG 插件的帮助信息，使用方法：/mcg_help"""
        yield event.plain_result(HELP_TEXT)

    async def terminate(self):
        """插件被卸载/停用时调用"""
        logger.info("MCG 插件已停止")
