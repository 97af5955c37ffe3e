"""Brute-force regions of R^2 minus plane curves, used as an independent oracle.

Pixels of a fine grid are labelled by the sign vector of the curves at their
centres and grouped into 4-connected components.  A component is an open
surface, so its Euler characteristic equals the compactly supported one:
(#pixels) - (#interior edges) + (#interior vertices).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import ndimage

from .mpoly import MPoly


class UnresolvedGrid(RuntimeError):
    """The grid is too coarse for some feature (small-angle crossing, tiny region)."""


@dataclass
class GridRegion:
    sign_pattern: str
    chi: int
    pixels: int


def _eval_grid(p: MPoly, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    out = np.zeros_like(X)
    for (a, b), c in p.terms.items():
        out += float(c) * X**a * Y**b
    return out


def _component_chi(mask: np.ndarray) -> int:
    F = int(mask.sum())
    E = int((mask[1:, :] & mask[:-1, :]).sum() + (mask[:, 1:] & mask[:, :-1]).sum())
    V = int((mask[1:, 1:] & mask[:-1, 1:] & mask[1:, :-1] & mask[:-1, :-1]).sum())
    return F - E + V


def _grid_codes(fs: Sequence[MPoly], half_width: float, resolution: int) -> np.ndarray:
    for f in fs:
        if f.nvars != 2:
            raise ValueError("planar oracle needs polynomials in 2 variables")
    h = 2 * half_width / resolution
    # an irrational sub-pixel shift keeps pixel centres off simple curves such as rational lines
    c = -half_width + h * (np.arange(resolution) + 0.5 + (np.sqrt(2) - 1.4) / 2)
    X, Y = np.meshgrid(c, c, indexing="ij")
    code = np.zeros(X.shape, dtype=np.int64)
    for i, f in enumerate(fs):
        code |= (_eval_grid(f, X, Y) > 0).astype(np.int64) << i
    return code


_FOUR = ndimage.generate_binary_structure(2, 1)


def _components(code: np.ndarray, nfs: int) -> list[GridRegion]:
    out = []
    for val in np.unique(code):
        lab, n = ndimage.label(code == val, structure=_FOUR)
        pattern = "".join("+" if (val >> i) & 1 else "-" for i in range(nfs))
        sizes = ndimage.sum_labels(np.ones_like(lab), lab, index=np.arange(1, n + 1))
        for j in range(1, n + 1):
            out.append(GridRegion(pattern, _component_chi(lab == j), int(sizes[j - 1])))
    return out


def grid_regions(fs: Sequence[MPoly], half_width: float = 8.0, resolution: int = 1600) -> list[GridRegion]:
    """Regions of the box (-w, w)^2 minus the curves; valid once the box holds all the topology."""
    return _components(_grid_codes(fs, half_width, resolution), len(fs))


def oracle_regions(fs: Sequence[MPoly], half_width: float = 8.0, resolutions=(1600, 2400),
                   min_pixels: int = 25) -> list[GridRegion]:
    """grid_regions at two resolutions; refuses to answer unless both agree and every component is well resolved.

    Small components are not cleaned up: a sub-pixel wedge at a crossing and
    a sub-pixel neck between nearly tangent curves look the same on the grid.
    """
    runs = [grid_regions(fs, half_width, r) for r in resolutions]
    for regs in runs:
        small = [r for r in regs if r.pixels < min_pixels]
        if small:
            raise UnresolvedGrid(f"{len(small)} components below {min_pixels} pixels")
    if len({grid_signature(r) for r in runs}) != 1:
        raise UnresolvedGrid("signatures differ between resolutions")
    return runs[-1]


def grid_signature(regions: Sequence[GridRegion]) -> tuple:
    return tuple(sorted((r.sign_pattern, r.chi) for r in regions))


def grid_total_chi(regions: Sequence[GridRegion]) -> int:
    return sum(r.chi for r in regions)


def random_planar_arrangement(seed: int, max_curves: int = 3) -> list[MPoly]:
    """Up to ``max_curves`` random lines and ellipses meeting near the unit square."""
    rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, 0x91A7])
    x, y = MPoly.variables(2)
    count = int(rng.integers(1, max_curves + 1))
    fs = []
    for _ in range(count):
        if rng.random() < 0.5:
            a, b = rng.normal(size=2)
            px, py = rng.uniform(-1, 1, size=2)
            fs.append(x * float(a) + y * float(b) - float(a * px + b * py))
        else:
            cx, cy = rng.uniform(-1, 1, size=2)
            B = rng.uniform(-1, 1, size=(2, 2))
            A = B.T @ B + 0.5 * np.eye(2)
            r2 = float(rng.uniform(0.3, 1.5))
            dx, dy = x - float(cx), y - float(cy)
            fs.append(dx * dx * float(A[0, 0]) + dx * dy * float(2 * A[0, 1]) + dy * dy * float(A[1, 1]) - r2)
    return fs


def pattern_counts(regions) -> Counter:
    return Counter(r.sign_pattern for r in regions)
