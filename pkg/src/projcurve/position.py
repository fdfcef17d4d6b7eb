"""General-position measures for hyperplane families over a planar region.

For n+1 hyperplanes evaluated at a point, D is the absolute determinant of
the (n+1) x (n+1) coefficient matrix.  For a family of q >= n+1 hyperplanes,
the product measure multiplies D over every (n+1)-subset; the family is in
general position at z when that product is positive.  The uniform variant
takes the minimum over a rectangular grid.

All measures are computed on normalized hyperplane representatives (unit sup
coefficient norm); unnormalized inputs are normalized on the fly, fixed ones
against their constant norm and moving ones against the given region's grid.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import config
from ._kernels import detprod_grid
from .errors import DimensionMismatch, NotFixed, WrongCount
from .projective import MovingHyperplane


@dataclass(frozen=True)
class Region:
    """Axis-aligned rectangle in the plane with a sampling resolution."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    grid_nx: int
    grid_ny: int

    def __post_init__(self) -> None:
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("region must have positive width and height")
        if self.grid_nx < 2 or self.grid_ny < 2:
            raise ValueError("need at least 2 grid samples per axis")

    def grid_points(self) -> np.ndarray:
        """Flattened complex grid, y varying slowest (row-major)."""
        xs = np.linspace(self.x_min, self.x_max, self.grid_nx)
        ys = np.linspace(self.y_min, self.y_max, self.grid_ny)
        X, Y = np.meshgrid(xs, ys)
        return (X + 1j * Y).ravel()

    def refine(self) -> "Region":
        """Same rectangle at doubled resolution (2n-1 points per axis).

        The refined grid contains every point of the original bitwise, so
        grid minima can only decrease and grid maxima only increase.
        """
        return Region(self.x_min, self.x_max, self.y_min, self.y_max,
                      2 * self.grid_nx - 1, 2 * self.grid_ny - 1)

    @property
    def diameter(self) -> float:
        return math.hypot(self.x_max - self.x_min, self.y_max - self.y_min)

    @property
    def spacing(self) -> float:
        """Largest grid step along either axis."""
        return max((self.x_max - self.x_min) / (self.grid_nx - 1),
                   (self.y_max - self.y_min) / (self.grid_ny - 1))

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return (self.x_min - slack <= z.real <= self.x_max + slack
                and self.y_min - slack <= z.imag <= self.y_max + slack)

    def to_json(self) -> dict:
        return {"x_min": self.x_min, "x_max": self.x_max,
                "y_min": self.y_min, "y_max": self.y_max,
                "grid_nx": self.grid_nx, "grid_ny": self.grid_ny}

    @classmethod
    def from_json(cls, data: dict) -> "Region":
        return cls(float(data["x_min"]), float(data["x_max"]),
                   float(data["y_min"]), float(data["y_max"]),
                   int(data["grid_nx"]), int(data["grid_ny"]))


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

def normalize_hyperplanes(hypers: Sequence[MovingHyperplane],
                          region: Region) -> list[MovingHyperplane]:
    """Scale each hyperplane to unit sup coefficient norm over the grid."""
    return [h.normalized(region) for h in hypers]


def _canonical(hypers: Sequence[MovingHyperplane],
               region: Region | None) -> list[MovingHyperplane]:
    """Hyperplanes with a normalization in force, normalizing if needed."""
    out = []
    for h in hypers:
        if h.normalization is not None:
            out.append(h)
        elif region is not None:
            out.append(h.normalized(region))
        elif h.is_fixed:
            out.append(h.scaled(1.0 / h.norm(0.0)))
        else:
            raise NotFixed(
                "moving hyperplane needs a region to normalize against")
    return out


# ---------------------------------------------------------------------------
# determinant measures
# ---------------------------------------------------------------------------

def _check_family(hypers: Sequence[MovingHyperplane], n: int) -> None:
    if len(hypers) < n + 1:
        raise WrongCount(
            f"need at least {n + 1} hyperplanes, got {len(hypers)}")
    for h in hypers:
        if h.n != n:
            raise DimensionMismatch(
                f"hyperplane dimension {h.n} does not match n={n}")


def _pack_coeffs(hypers: Sequence[MovingHyperplane]) -> np.ndarray:
    """Zero-pad all coefficient polynomials into a (q, n+1, L) array."""
    q = len(hypers)
    P = hypers[0].n + 1
    L = max(max(p.coeffs.size for p in h.coeffs) for h in hypers)
    L = max(L, 1)
    out = np.zeros((q, P, L), dtype=np.complex128)
    for i, h in enumerate(hypers):
        for j, p in enumerate(h.coeffs):
            out[i, j, : p.coeffs.size] = p.coeffs
    return out


def gen_pos_det(hypers: Sequence[MovingHyperplane], z: complex,
                region: Region | None = None) -> float:
    """|det| of the coefficient matrix of exactly n+1 hyperplanes at z."""
    n = hypers[0].n
    if len(hypers) != n + 1:
        raise WrongCount(
            f"determinant needs exactly {n + 1} hyperplanes, got {len(hypers)}")
    _check_family(hypers, n)
    normed = _canonical(hypers, region)
    M = np.stack([h.at(z) for h in normed])
    return float(abs(np.linalg.det(M)))


def gen_pos_product(hypers: Sequence[MovingHyperplane], z: complex,
                    region: Region | None = None) -> float:
    """Product of |det| over all (n+1)-subsets of the family, at z."""
    n = hypers[0].n
    _check_family(hypers, n)
    normed = _canonical(hypers, region)
    A = np.stack([h.at(z) for h in normed])
    prod = 1.0
    for sub in itertools.combinations(range(len(normed)), n + 1):
        prod *= float(abs(np.linalg.det(A[list(sub)])))
    return prod


def gen_pos_product_grid(hypers: Sequence[MovingHyperplane],
                         region: Region) -> np.ndarray:
    """The subset-determinant product at every grid point, shape (ny*nx,).

    Hyperplanes are used as given; normalize first for meaningful values.
    """
    n = hypers[0].n
    _check_family(hypers, n)
    subsets = np.array(
        list(itertools.combinations(range(len(hypers)), n + 1)),
        dtype=np.int64)
    coeffs = _pack_coeffs(hypers)
    return detprod_grid(coeffs, region.grid_points(), subsets)


@dataclass(frozen=True)
class UniformDelta:
    """Grid minimum of the general-position product, with its location."""

    value: float
    argmin: complex


def uniform_delta(hypers: Sequence[MovingHyperplane],
                  region: Region) -> UniformDelta:
    """Minimum of the determinant product over the region's grid.

    Hyperplanes without a normalization record are normalized against the
    region first.  Grid minimization estimates the true infimum from above;
    see refinement_check for an undersampling guard.
    """
    n = hypers[0].n
    _check_family(hypers, n)
    normed = _canonical(hypers, region)
    vals = gen_pos_product_grid(normed, region)
    idx = int(np.argmin(vals))
    pts = region.grid_points()
    return UniformDelta(value=float(vals[idx]), argmin=complex(pts[idx]))


def refinement_check(hypers: Sequence[MovingHyperplane], region: Region,
                     delta: float) -> dict:
    """Guard against gross grid undersampling of the minimum.

    Recomputes uniform_delta on the doubled grid; flags inconsistency when
    the coarse grid clears delta but the fine grid falls to delta/2 or below.
    """
    coarse = uniform_delta(hypers, region)
    fine = uniform_delta(hypers, region.refine())
    flipped = coarse.value > delta and fine.value <= delta / 2.0
    return {"coarse_min": coarse.value, "fine_min": fine.value,
            "consistent": not flipped}


def is_general_position(hypers: Sequence[MovingHyperplane],
                        z: complex = 0.0,
                        tau_gp: float = config.TAU_GP,
                        region: Region | None = None) -> bool:
    """Whether the family is in general position at z.

    For fixed hyperplanes the verdict is z-independent and no region is
    needed; moving hyperplanes require a region to normalize against.
    """
    return gen_pos_product(hypers, z, region=region) > tau_gp
