"""
CSV 结果文件读写
轨迹（t,x,y,z）、分岔图（alpha,zmax）与分析表（alpha,l1,l2,l3,ky_dim,class,period,double_spiral）
数值一律 17 位有效数字，读回后逐位一致
"""
import csv
import os
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import StorageError
from ..services.analysis import AttractorClass, LyapunovSpectrum
from ..services.integrator import Trajectory
from ..services.sweep_service import SweepRow
from ..services.thermistor import ThermistorFit
from ..utils.keys import format_float

TRAJECTORY_HEADER = ("t", "x", "y", "z")
BIFURCATION_HEADER = ("alpha", "zmax")
THERMISTOR_HEADER = ("T", "exact", "taylor")
ANALYSIS_HEADER = ("alpha", "l1", "l2", "l3", "ky_dim", "class", "period", "double_spiral")
# 发散行把标记写在 alpha 之后的第一个字段
DIVERGED_MARKER = "diverged=1"


def _write_rows(path: str, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    try:
        dir_path = os.path.dirname(path)
        if dir_path:
            os.makedirs(dir_path, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise StorageError(f"无法写入 CSV 文件：{path}（{e.strerror}）", path=path) from e


def _read_rows(path: str, header: Sequence[str]) -> List[List[str]]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise StorageError(f"无法读取 CSV 文件：{path}（{e.strerror}）", path=path) from e
    if not rows or tuple(rows[0]) != tuple(header):
        raise StorageError(f"CSV 表头不匹配：{path}，期望 {','.join(header)}", path=path)
    return rows[1:]


def write_trajectory_csv(traj: Trajectory, path: str) -> None:
    """导出轨迹，每行一个样本"""
    rows = [[format_float(t)] + [format_float(v) for v in state[:3]] for t, state in zip(traj.times, traj.states)]
    _write_rows(path, TRAJECTORY_HEADER, rows)


def read_trajectory_csv(path: str) -> List[Tuple[float, float, float, float]]:
    return [tuple(float(v) for v in row) for row in _read_rows(path, TRAJECTORY_HEADER)]


def write_bifurcation_csv(rows: Sequence[SweepRow], path: str) -> None:
    """
    分岔图文件：每个 (alpha, z_max) 一行；发散的 α 只写一行标记
    """
    if not rows:
        raise ValueError("没有可写出的扫描结果")
    lines = []
    for row in rows:
        if row.diverged:
            lines.append([format_float(row.alpha), DIVERGED_MARKER])
            continue
        lines.extend([format_float(row.alpha), format_float(value)] for value in row.maxima)
    _write_rows(path, BIFURCATION_HEADER, lines)


def read_bifurcation_csv(path: str) -> List[Tuple[float, Optional[float]]]:
    """读回分岔图文件；发散行的 zmax 为 None"""
    return [(float(alpha), None if zmax == DIVERGED_MARKER else float(zmax))
            for alpha, zmax in _read_rows(path, BIFURCATION_HEADER)]


def analysis_fields(alpha: float, spectrum: Optional[LyapunovSpectrum], ky_dim: Optional[float],
                    attractor: Optional[AttractorClass], diverged: bool = False) -> List[str]:
    """组装分析表的一行（缺失项留空）"""
    if diverged:
        return [format_float(alpha), DIVERGED_MARKER, "", "", "", "", "", ""]
    exponents = [format_float(v) for v in spectrum.exponents] if spectrum is not None else ["", "", ""]
    period = ""
    double_spiral = ""
    label = ""
    if attractor is not None:
        label = attractor.label
        period = str(attractor.period) if attractor.period is not None else ""
        if attractor.double_spiral is not None:
            double_spiral = "1" if attractor.double_spiral else "0"
    return [format_float(alpha)] + exponents + [
        format_float(ky_dim) if ky_dim is not None else "",
        label,
        period,
        double_spiral,
    ]


def write_analysis_csv(rows: Sequence[SweepRow], path: str) -> None:
    """分析表：每个 α 一行"""
    if not rows:
        raise ValueError("没有可写出的扫描结果")
    _write_rows(path, ANALYSIS_HEADER, [
        analysis_fields(row.alpha, row.spectrum, row.ky_dim, row.attractor, row.diverged) for row in rows
    ])


def read_analysis_csv(path: str) -> List[Dict[str, Optional[str]]]:
    """读回分析表，每行一个字典；空字段为 None"""
    return [{key: (value if value != "" else None) for key, value in zip(ANALYSIS_HEADER, row)}
            for row in _read_rows(path, ANALYSIS_HEADER)]


def write_thermistor_csv(fit: ThermistorFit, path: str) -> None:
    """热敏电阻曲线与 Taylor 近似的逐点对比"""
    _write_rows(path, THERMISTOR_HEADER, [
        [format_float(t), format_float(exact), format_float(approx)]
        for t, exact, approx in zip(fit.temperatures, fit.exact, fit.taylor)
    ])
