"""
SVG 散点图输出（分岔图、相图投影、时间序列）
只依赖标准库 xml.etree，生成的文件是合法 XML
"""
import math
import os
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import StorageError
from ..services.integrator import Trajectory
from ..services.sweep_service import SweepRow

SVG_NS = "http://www.w3.org/2000/svg"
MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 50
TICKS = 5


@dataclass(frozen=True)
class AxesSpec:
    """坐标轴说明：标题、轴标签与画布尺寸"""
    title: str
    x_label: str = "x"
    y_label: str = "y"
    width: int = 640
    height: int = 480
    marker_radius: float = 1.2


def _axis_range(values: np.ndarray) -> Tuple[float, float]:
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        # 退化区间自动按 5% 扩展
        pad = 0.05 * abs(lo) if lo != 0 else 0.05
        return lo - pad, hi + pad
    return lo, hi


def _text(parent, x, y, content, **attrs) -> ET.Element:
    node = ET.SubElement(parent, "text", {"x": f"{x:.2f}", "y": f"{y:.2f}", "font-family": "sans-serif",
                                          "font-size": "12", **attrs})
    node.text = content
    return node


def emit_svg_scatter(points: Sequence[Tuple[float, float]], axes: AxesSpec, path: str) -> None:
    """
    输出独立的 SVG 散点图：线性坐标轴、刻度标签、每个点一个标记
    :param points: [(横坐标, 纵坐标), ...]，非有限值会被跳过
    :raises ValueError: 没有可画的点
    :raises StorageError: 文件无法写入
    """
    data = np.asarray(points, dtype=float).reshape(-1, 2)
    data = data[np.all(np.isfinite(data), axis=1)]
    if data.size == 0:
        raise ValueError("没有可绘制的数据点")
    x_lo, x_hi = _axis_range(data[:, 0])
    y_lo, y_hi = _axis_range(data[:, 1])
    plot_w = axes.width - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = axes.height - MARGIN_TOP - MARGIN_BOTTOM

    def sx(v: float) -> float:
        return MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v: float) -> float:
        return MARGIN_TOP + (y_hi - v) / (y_hi - y_lo) * plot_h

    root = ET.Element("svg", {"xmlns": SVG_NS, "width": str(axes.width), "height": str(axes.height),
                              "viewBox": f"0 0 {axes.width} {axes.height}"})
    ET.SubElement(root, "rect", {"x": "0", "y": "0", "width": str(axes.width), "height": str(axes.height),
                                 "fill": "white"})
    _text(root, axes.width / 2, MARGIN_TOP / 2 + 5, axes.title, **{"text-anchor": "middle", "font-size": "15"})

    frame = ET.SubElement(root, "g", {"stroke": "black", "stroke-width": "1", "fill": "none"})
    ET.SubElement(frame, "rect", {"x": str(MARGIN_LEFT), "y": str(MARGIN_TOP),
                                  "width": str(plot_w), "height": str(plot_h)})
    labels = ET.SubElement(root, "g", {"fill": "black"})
    bottom = MARGIN_TOP + plot_h
    for value in np.linspace(x_lo, x_hi, TICKS):
        px = sx(value)
        ET.SubElement(frame, "line", {"x1": f"{px:.2f}", "y1": f"{bottom:.2f}", "x2": f"{px:.2f}", "y2": f"{bottom + 5:.2f}"})
        _text(labels, px, bottom + 18, f"{value:.4g}", **{"text-anchor": "middle"})
    for value in np.linspace(y_lo, y_hi, TICKS):
        py = sy(value)
        ET.SubElement(frame, "line", {"x1": f"{MARGIN_LEFT - 5}", "y1": f"{py:.2f}", "x2": f"{MARGIN_LEFT}", "y2": f"{py:.2f}"})
        _text(labels, MARGIN_LEFT - 8, py + 4, f"{value:.4g}", **{"text-anchor": "end"})
    _text(labels, MARGIN_LEFT + plot_w / 2, axes.height - 10, axes.x_label, **{"text-anchor": "middle"})
    _text(labels, 15, MARGIN_TOP + plot_h / 2, axes.y_label,
          **{"text-anchor": "middle", "transform": f"rotate(-90 15 {MARGIN_TOP + plot_h / 2:.2f})"})

    markers = ET.SubElement(root, "g", {"fill": "#1f4e9c", "stroke": "none"})
    radius = f"{axes.marker_radius:g}"
    for vx, vy in data:
        ET.SubElement(markers, "circle", {"cx": f"{sx(vx):.2f}", "cy": f"{sy(vy):.2f}", "r": radius})

    try:
        dir_path = os.path.dirname(path)
        if dir_path:
            os.makedirs(dir_path, exist_ok=True)
        ET.ElementTree(root).write(path, encoding="utf-8", xml_declaration=True)
    except OSError as e:
        raise StorageError(f"无法写入 SVG 文件：{path}（{e.strerror}）", path=path) from e


def bifurcation_points(rows: Sequence[SweepRow]) -> List[Tuple[float, float]]:
    """分岔图的点：每个 (alpha, z_max) 一个，跳过发散行"""
    return [(row.alpha, value) for row in rows if not row.diverged for value in row.maxima]


def projection_points(traj: Trajectory, horizontal: str = "x", vertical: str = "y",
                      limit: int = 20_000) -> List[Tuple[float, float]]:
    """
    相图的二维投影；点数超过 limit 时等间隔抽稀
    """
    every = max(1, math.ceil(len(traj) / limit))
    h = traj.component(horizontal)[::every]
    v = traj.component(vertical)[::every]
    return list(zip(h.tolist(), v.tolist()))


def series_points(traj: Trajectory, name: str = "z", limit: int = 20_000) -> List[Tuple[float, float]]:
    """时间序列 (t, 分量)"""
    every = max(1, math.ceil(len(traj) / limit))
    return list(zip(traj.times[::every].tolist(), traj.component(name)[::every].tolist()))
