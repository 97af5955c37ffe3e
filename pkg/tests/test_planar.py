from collections import Counter

import pytest

from grchi.mpoly import MPoly
from grchi.planar import (UnresolvedGrid, grid_regions, grid_total_chi, oracle_regions, pattern_counts,
                          random_planar_arrangement)

x, y = MPoly.variables(2)


def test_single_line():
    regs = oracle_regions([x + y * 0.3 - 0.1])
    assert sorted((r.sign_pattern, r.chi) for r in regs) == [("+", 1), ("-", 1)]


def test_circle_gives_disc_and_open_annulus():
    # inside is an open disc (chi 1); outside is an open annulus (chi 0)
    regs = oracle_regions([x * x + y * y - 1])
    assert sorted((r.sign_pattern, r.chi) for r in regs) == [("+", 0), ("-", 1)]


def test_two_concentric_circles():
    regs = oracle_regions([x * x + y * y - 1, x * x + y * y - 4])
    assert sorted((r.sign_pattern, r.chi) for r in regs) == [("++", 0), ("+-", 0), ("--", 1)]


def test_coordinate_axes():
    regs = oracle_regions([x, y])
    assert pattern_counts(regs) == Counter({"++": 1, "+-": 1, "-+": 1, "--": 1})
    assert grid_total_chi(regs) == 4


def test_three_generic_lines_count():
    fs = [x - 0.1, y + 0.2, x + y - 0.9]
    regs = oracle_regions(fs)
    assert len(regs) == 7
    assert all(r.chi == 1 for r in regs)


def test_needs_planar_polys():
    with pytest.raises(ValueError):
        grid_regions([MPoly.variables(3)[0]])


def test_nearly_tangent_curves_are_refused():
    # two circles touching within a sub-pixel gap
    fs = [x * x + y * y - 1, (x - 2.0005) * (x - 2.0005) + y * y - 1]
    with pytest.raises(UnresolvedGrid):
        oracle_regions(fs, resolutions=(400, 600))


def test_random_arrangement_is_reproducible():
    a = random_planar_arrangement(3)
    b = random_planar_arrangement(3)
    assert [p.terms for p in a] == [p.terms for p in b]
    assert 1 <= len(a) <= 3
