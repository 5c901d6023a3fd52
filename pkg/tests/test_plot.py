import xml.etree.ElementTree as ET

import pytest

from runfall.ecdf import build_ecdf
from runfall.model import InvalidArgumentError
from runfall.plot import PlotSpec, render_ecdf_svg, render_scaling_svg
from runfall.runtime import ScalingPoint

NS = "{http://www.w3.org/2000/svg}"


def find(svg, cls):
    root = ET.fromstring(svg)
    return [e for e in root.iter() if e.get("class") == cls]


def test_ecdf_svg_structure():
    curve = build_ecdf([3, 30, 300, None], cross_x=1000.0)
    svg = render_ecdf_svg([("rs", curve)], PlotSpec("ecdf", metadata={"seed": 1, "N": 10}))
    root = ET.fromstring(svg)
    assert root.tag == NS + "svg" and root.get("viewBox") == "0 0 800 600"
    assert len(find(svg, "ecdf")) == 1
    assert len(find(svg, "cross")) == 1
    assert len(find(svg, "solved-dot")) == 1
    assert "<entry key=\"seed\">1</entry>" in svg


def test_ecdf_svg_one_polyline_per_curve_and_no_cross_without_failures():
    a = build_ecdf([1, 2, 3])
    b = build_ecdf([10, 20])
    svg = render_ecdf_svg([("a", a), ("b", b)])
    assert len(find(svg, "ecdf")) == 2
    assert find(svg, "cross") == []


def test_ecdf_svg_deterministic():
    curve = build_ecdf([5, 17, 17, 2000, None], cross_x=3000.0)
    assert render_ecdf_svg([("x", curve)]) == render_ecdf_svg([("x", curve)])


def test_ecdf_svg_empty():
    with pytest.raises(InvalidArgumentError):
        render_ecdf_svg([])


def test_ecdf_svg_y_range_is_unit_interval():
    svg = render_ecdf_svg([("x", build_ecdf([1, 10]))])
    (poly,) = find(svg, "ecdf")
    ys = [float(p.split(",")[1]) for p in poly.get("points").split()]
    # y=1 maps to the top margin, y=0 to the bottom margin
    assert min(ys) == 40.0 and max(ys) == 530.0


def test_scaling_constant_line():
    svg = render_scaling_svg([("rs", [ScalingPoint(2, 10.0), ScalingPoint(5, 10.0), ScalingPoint(20, 10.0)])])
    markers = find(svg, "marker")
    assert len(markers) == 3
    assert len({m.get("cy") for m in markers}) == 1
    assert find(svg, "missing-arrow") == []


def test_scaling_missing_point_arrow():
    svg = render_scaling_svg([("rs", [ScalingPoint(2, 10.0), ScalingPoint(5, 30.0), ScalingPoint(20, None)])])
    assert len(find(svg, "missing-arrow")) == 1
    assert len(find(svg, "marker")) == 2


def test_scaling_deterministic_and_empty():
    series = [("a", [ScalingPoint(3, 1.5), ScalingPoint(10, 7.0)])]
    assert render_scaling_svg(series) == render_scaling_svg(series)
    with pytest.raises(InvalidArgumentError):
        render_scaling_svg([])


def test_plot_spec_validation():
    with pytest.raises(InvalidArgumentError):
        PlotSpec("histogram")
