from __future__ import annotations

import pytest

from coregkit.dualcx import SncConfig, build_complex
from coregkit.figures import _lower_hull, complex_skeleton, newton_polygon, render_artifacts
from coregkit.polyring import parse_germ


def test_lower_hull():
    # x^3 + x*y^3 + x^2*y^2: the interior point lies above the segment
    assert _lower_hull([(3, 0), (1, 3), (2, 2)]) == [(1, 3), (3, 0)]
    assert _lower_hull([(2, 1), (0, 4), (1, 1)]) == [(0, 4), (1, 1)]


def test_png_outputs(tmp_path):
    p = newton_polygon(parse_germ("x1^2*x2 + x2^4", 2), tmp_path / "n.png")
    assert p.read_bytes()[:4] == b"\x89PNG"
    dc = build_complex(SncConfig.from_sets(2, ["C'", "E"], [([0], 1), ([1], 1), ([0, 1], 2)]))
    q = complex_skeleton(dc, tmp_path / "c.png")
    assert q.read_bytes()[:4] == b"\x89PNG"


def test_newton_polygon_needs_two_variables(tmp_path):
    with pytest.raises(ValueError):
        newton_polygon(parse_germ("x1^2 + x2^3 + x3^5", 3), tmp_path / "x.png")


def test_render_artifacts_skips_unplottable(tmp_path):
    g2 = parse_germ("x1^2 + x2^3", 2)
    g3 = parse_germ("x1^2 + x2^3 + x3^5", 3)
    paths = render_artifacts({"a": {"germ": g2}, "b": {"germ": g3}, "c": {}}, tmp_path / "out", prefix="s_")
    assert [p.name for p in paths] == ["s_a_newton.png"]
