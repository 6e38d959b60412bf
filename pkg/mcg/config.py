"""
配置管理
默认值唯一来源是插件根目录的 _conf_schema.json（与 AstrBot 管理界面共用）
"""
import json
import os
from typing import Any, Dict, Optional

from .errors import ConfigError
from .utils.logger import plugin_logger

PLUGIN_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SCHEMA_FILE = os.path.join(PLUGIN_DIR, "_conf_schema.json")

_CASTS = {
    "float": float,
    "int": int,
    "string": str,
    "bool": lambda v: str(v).strip().lower() in ("1", "true", "yes", "on"),
}


def load_schema(schema_file: str = SCHEMA_FILE) -> Dict[str, Dict[str, Any]]:
    """
    读取配置 schema
    :param schema_file: schema 文件路径
    :return: {键名: {description, type, default}}
    """
    try:
        with open(schema_file, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        plugin_logger.error(f"读取配置 schema 失败: {str(e)}")
        raise ConfigError(f"无法读取配置 schema：{schema_file}") from e


def load_schema_defaults(schema_file: str = SCHEMA_FILE) -> Dict[str, Any]:
    """返回 schema 中的全部默认值"""
    return {key: entry.get("default") for key, entry in load_schema(schema_file).items()}


def coerce_value(key: str, value: Any, schema: Optional[Dict[str, Dict[str, Any]]] = None) -> Any:
    """
    按 schema 声明的类型转换配置值（文本配置文件里的值都是字符串）
    :raises ConfigError: 无法转换时，错误信息包含键名
    """
    schema = schema if schema is not None else load_schema()
    entry = schema.get(key)
    if entry is None:
        return value
    cast = _CASTS.get(entry.get("type"), str)
    try:
        if entry.get("type") == "int" and isinstance(value, str):
            return int(float(value))
        return cast(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"配置项 {key} 的值无效：{value!r}", key=key) from e


def merge_config(overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """
    合并默认值与外部配置（宿主配置或命令行参数）
    :param overrides: 覆盖项，None 值会被忽略
    """
    schema = load_schema()
    config = {key: entry.get("default") for key, entry in schema.items()}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        config[key] = coerce_value(key, value, schema)
    return config
