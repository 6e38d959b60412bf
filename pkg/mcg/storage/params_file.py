"""
参数文件读写（扁平 key = value 文本，或 JSON）
自动识别格式，键名标准化后大小写敏感（C 是电容，c 是热容）
"""
import json
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Union

from ..config import coerce_value, load_schema
from ..errors import ConfigError, ParameterError, StorageError
from ..services.model import MODEL_KEYS, PHYSICAL_KEYS, ModelParams, PhysicalParams, physical_to_model
from ..utils.keys import format_decimal, normalize_key
from ..utils.logger import plugin_logger

PARAMS_DIRECTIVE = "params"


def parse_config_text(text: str) -> Dict[str, Any]:
    """
    解析配置文本
    文本格式：每行一个 key = value，# 之后为注释，空行忽略；以 { 开头按 JSON 解析
    :raises ConfigError: 格式错误，包含行号和/或键名
    """
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"JSON 配置第 {e.lineno} 行格式错误：{e.msg}", line=e.lineno) from e
        if not isinstance(data, dict):
            raise ConfigError("JSON 配置必须是一个对象")
        return {normalize_key(str(key)): value for key, value in data.items()}

    values: Dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"第 {lineno} 行格式错误，应为 key = value：{raw.strip()}", line=lineno)
        key, value = line.split("=", 1)
        try:
            key = normalize_key(key)
        except ValueError as e:
            raise ConfigError(f"第 {lineno} 行缺少键名", line=lineno) from e
        value = value.strip()
        if not value:
            raise ConfigError(f"第 {lineno} 行配置项 {key} 缺少取值", key=key, line=lineno)
        if key in values:
            raise ConfigError(f"第 {lineno} 行配置项 {key} 重复", key=key, line=lineno)
        values[key] = value
    return values


def read_config_file(path: str) -> Dict[str, Any]:
    """读取并解析配置文件"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise StorageError(f"无法读取配置文件：{path}（{e.strerror}）", path=path) from e
    if path.endswith(".json") and not text.lstrip().startswith("{"):
        raise ConfigError(f"JSON 配置文件必须以对象开头：{path}")
    return parse_config_text(text)


def _number(mapping: Dict[str, Any], key: str) -> float:
    if key not in mapping:
        raise ConfigError(f"缺少配置项 {key}", key=key)
    value = mapping[key]
    try:
        return float(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"配置项 {key} 不是有效数字：{value!r}", key=key) from e


def model_params_from_mapping(mapping: Dict[str, Any]) -> ModelParams:
    """从键值对构造 ModelParams（缺项或非数字时报错并指明键名）"""
    return ModelParams(**{key: _number(mapping, key) for key in MODEL_KEYS})


def physical_params_from_mapping(mapping: Dict[str, Any]) -> PhysicalParams:
    """从键值对构造 PhysicalParams"""
    return PhysicalParams.from_dict({key: _number(mapping, key) for key in PHYSICAL_KEYS})


def dump_params(params: Union[ModelParams, PhysicalParams]) -> str:
    """序列化为扁平文本（十进制表示，每行一个键）"""
    directive = "model" if isinstance(params, ModelParams) else "physical"
    lines = [f"{PARAMS_DIRECTIVE} = {directive}"]
    lines.extend(f"{key} = {format_decimal(value)}" for key, value in params.to_dict().items())
    return "\n".join(lines) + "\n"


def save_params(path: str, params: Union[ModelParams, PhysicalParams]) -> None:
    """保存参数文件（自动创建上级目录）"""
    try:
        dir_path = os.path.dirname(path)
        if dir_path:
            os.makedirs(dir_path, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(dump_params(params))
    except OSError as e:
        raise StorageError(f"无法写入参数文件：{path}（{e.strerror}）", path=path) from e


@dataclass(frozen=True)
class RunConfig:
    """
    单次运行配置
    physical 不为 None 时，model 由物理参数映射得到
    overrides 为文件中出现的插件配置项（已按 schema 转换类型）
    """
    model: ModelParams
    physical: Optional[PhysicalParams] = None
    overrides: Dict[str, Any] = field(default_factory=dict)


def run_config_from_mapping(mapping: Dict[str, Any]) -> RunConfig:
    """
    从键值对构造运行配置：params = model（默认）读取模型参数，params = physical 读取物理参数并映射
    """
    directive = str(mapping.get(PARAMS_DIRECTIVE, "model")).strip().lower()
    if directive not in ("model", "physical"):
        raise ConfigError(f"配置项 {PARAMS_DIRECTIVE} 只能是 model 或 physical，当前：{directive}",
                          key=PARAMS_DIRECTIVE)
    try:
        if directive == "physical":
            physical = physical_params_from_mapping(mapping)
            model = physical_to_model(physical)
            param_keys = set(PHYSICAL_KEYS)
        else:
            physical = None
            model = model_params_from_mapping(mapping)
            param_keys = set(MODEL_KEYS)
    except ParameterError as e:
        raise ConfigError(f"参数无效：{str(e)}") from e

    schema = load_schema()
    overrides = {}
    for key, value in mapping.items():
        if key in schema:
            overrides[key] = coerce_value(key, value, schema)
        elif key not in param_keys and key != PARAMS_DIRECTIVE:
            plugin_logger.warning(f"忽略未知配置项：{key}")
    return RunConfig(model=model, physical=physical, overrides=overrides)


def load_run_config(path: str) -> RunConfig:
    """读取单次运行配置文件"""
    return run_config_from_mapping(read_config_file(path))
