"""Empirical normality detection and Zalcman-style rescaling.

Normality of a family is a limit property, so any finite computation can
only report a surrogate verdict.  The estimator here is Marty-flavored: the
Fubini-Study derivative of each member is maximized over a grid, and the
sequence of per-member sups is classified as bounded, blow-up, or
inconclusive under declared thresholds.  When the verdict is blow-up, the
rescaling explorer recenters each member at its sup location, scales by the
reciprocal sup (forcing unit derivative at the origin), and measures how the
rescaled curves converge on a disc.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import config
from .config import MartyThresholds, DEFAULT_MARTY
from ._kernels import fs_derivative_grid, pairwise_fs_grid
from .errors import (IdenticallyZero, NotBlowingUp, NotGeneralPosition,
                     WrongCount)
from .position import Region, is_general_position
from .projective import MovingHyperplane, ProjCurve, pair


# ---------------------------------------------------------------------------
# Fubini-Study derivative
# ---------------------------------------------------------------------------

def fs_derivative(curve: ProjCurve, z: complex) -> float:
    """Metric derivative of the curve at z.

    Equals sqrt(|f|^2 |f'|^2 - |<f,f'>|^2) / |f|^2 with Euclidean norms,
    evaluated in the cancellation-free cross-term form.  At n = 1 this is
    the classical spherical derivative |g'| / (1 + |g|^2) of g = f1/f0.
    """
    v = curve.at(z)
    dv = np.array([p(z) for p in curve.derivative_components()],
                  dtype=np.complex128)
    num = 0.0
    P = v.shape[0]
    for i in range(P):
        for j in range(i + 1, P):
            cross = v[i] * dv[j] - v[j] * dv[i]
            num += abs(cross) ** 2
    s2 = float(np.sum(np.abs(v) ** 2))
    return float(np.sqrt(num) / s2)


def _pack_curve(curve: ProjCurve) -> tuple[np.ndarray, np.ndarray]:
    comps = curve.components
    ders = curve.derivative_components()
    L = max(max(p.coeffs.size for p in comps), 1)
    Ld = max(max(p.coeffs.size for p in ders), 1)
    comp = np.zeros((len(comps), L), dtype=np.complex128)
    dcomp = np.zeros((len(comps), Ld), dtype=np.complex128)
    for i, p in enumerate(comps):
        comp[i, : p.coeffs.size] = p.coeffs
    for i, p in enumerate(ders):
        dcomp[i, : p.coeffs.size] = p.coeffs
    return comp, dcomp


def fs_derivative_on_grid(curve: ProjCurve, region: Region) -> np.ndarray:
    """Fubini-Study derivative at every grid point of the region."""
    comp, dcomp = _pack_curve(curve)
    return fs_derivative_grid(comp, dcomp, region.grid_points())


# ---------------------------------------------------------------------------
# Marty-type estimator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MemberMarty:
    sup: float
    argmax: complex


@dataclass(frozen=True)
class MartyStats:
    members: tuple[MemberMarty, ...]
    sups: tuple[float, ...]
    verdict: str
    thresholds: MartyThresholds

    def to_json(self) -> dict:
        return {
            "sups": list(self.sups),
            "argmax": [[m.argmax.real, m.argmax.imag] for m in self.members],
            "verdict": self.verdict,
            "thresholds": {
                "cap": self.thresholds.cap,
                "growth_factor": self.thresholds.growth_factor,
                "window": self.thresholds.window,
            },
        }


def _classify(sups: Sequence[float], th: MartyThresholds) -> str:
    """Empirical verdict over the per-member sup sequence.

    blow-up: the last `window` sups are strictly increasing and the final
    sup has grown by factor >= growth_factor over the sequence minimum.
    bounded: no blow-up and every sup is at most `cap`.
    inconclusive: too few members for a trend, or sups beyond the cap
    without a clean growth signature.
    """
    if len(sups) < th.window:
        return "inconclusive"
    tail = sups[-th.window:]
    increasing = all(tail[i] < tail[i + 1] for i in range(len(tail) - 1))
    if increasing and sups[-1] >= th.growth_factor * min(sups):
        return "blow-up"
    if max(sups) <= th.cap:
        return "bounded"
    return "inconclusive"


def marty_sup(members: Sequence[ProjCurve], region: Region,
              thresholds: MartyThresholds = DEFAULT_MARTY) -> MartyStats:
    """Grid sup of the Fubini-Study derivative per member, with a verdict."""
    members = list(members)
    if not members:
        raise WrongCount("need at least one member curve")
    pts = region.grid_points()
    per = []
    for f in members:
        vals = fs_derivative_on_grid(f, region)
        idx = int(np.argmax(vals))
        per.append(MemberMarty(sup=float(vals[idx]), argmax=complex(pts[idx])))
    sups = tuple(m.sup for m in per)
    return MartyStats(members=tuple(per), sups=sups,
                      verdict=_classify(sups, thresholds),
                      thresholds=thresholds)


# ---------------------------------------------------------------------------
# Zalcman-style rescaling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZalcmanTrace:
    centers: tuple[complex, ...]
    rhos: tuple[float, ...]
    rescaled: tuple[ProjCurve, ...]
    zeta_points: np.ndarray
    limit_candidate: np.ndarray
    residuals: tuple[float, ...]
    convergence_residual: float
    rho_decreasing: bool
    zeta_radius: float

    def to_json(self) -> dict:
        return {
            "centers": [[z.real, z.imag] for z in self.centers],
            "rhos": list(self.rhos),
            "rescaled": [g.to_json() for g in self.rescaled],
            "limit_candidate": self.rescaled[-1].to_json(),
            "residuals": list(self.residuals),
            "convergence_residual": self.convergence_residual,
            "rho_decreasing": self.rho_decreasing,
            "zeta_radius": self.zeta_radius,
            "num_zeta_points": int(self.zeta_points.size),
            "unit_derivative_at_zero": [
                fs_derivative(g, 0.0) for g in self.rescaled],
        }


def _zeta_disc(radius: float, per_axis: int) -> np.ndarray:
    xs = np.linspace(-radius, radius, per_axis)
    X, Y = np.meshgrid(xs, xs)
    zs = (X + 1j * Y).ravel()
    return zs[np.abs(zs) <= radius]


def zalcman_search(members: Sequence[ProjCurve], region: Region,
                   zeta_radius: float = 1.0, zeta_per_axis: int = 41,
                   thresholds: MartyThresholds = DEFAULT_MARTY
                   ) -> ZalcmanTrace:
    """Rescale a blowing-up family around its derivative maxima.

    For each member: center = grid argmax of the FS derivative, scale
    rho = 1 / sup, rescaled curve g(zeta) = f(center + rho * zeta) built by
    exact coefficient recomposition (Taylor shift plus power scaling), so
    the unit derivative at zeta = 0 and all residuals are free of sampling
    error.  Residuals are sups over the zeta disc of the Fubini-Study
    distance between successive rescaled members; the limit candidate is
    the last member's samples.
    """
    members = list(members)
    stats = marty_sup(members, region, thresholds=thresholds)
    if stats.verdict != "blow-up":
        raise NotBlowingUp(
            f"family verdict is {stats.verdict!r}; rescaling needs blow-up")
    centers = []
    rhos = []
    rescaled = []
    for f, mm in zip(members, stats.members):
        rho = 1.0 / mm.sup
        comps = [p.shift_scale(mm.argmax, rho) for p in f.components]
        centers.append(mm.argmax)
        rhos.append(rho)
        rescaled.append(ProjCurve(comps, check_reduced=False))
    zeta = _zeta_disc(zeta_radius, zeta_per_axis)
    samples = [g.at_many(zeta) for g in rescaled]
    residuals = tuple(
        float(np.max(pairwise_fs_grid(samples[i], samples[i + 1])))
        for i in range(len(samples) - 1))
    rho_arr = np.array(rhos)
    return ZalcmanTrace(
        centers=tuple(centers),
        rhos=tuple(rhos),
        rescaled=tuple(rescaled),
        zeta_points=zeta,
        limit_candidate=samples[-1],
        residuals=residuals,
        convergence_residual=residuals[-1] if residuals else 0.0,
        rho_decreasing=bool(np.all(np.diff(rho_arr) < 0)),
        zeta_radius=zeta_radius,
    )


# ---------------------------------------------------------------------------
# omission counting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GreenReport:
    omitted_count: int
    omitted: tuple[int, ...]
    witness_roots: dict
    consistent: bool

    def to_json(self) -> dict:
        return {
            "omitted_count": self.omitted_count,
            "omitted": list(self.omitted),
            "witness_roots": {
                str(j): [[z.real, z.imag] for z in roots]
                for j, roots in self.witness_roots.items()},
            "consistent": self.consistent,
        }


def green_omission_check(curve: ProjCurve,
                         hypers: Sequence[MovingHyperplane],
                         tau_gp: float = config.TAU_GP) -> GreenReport:
    """Count hyperplanes omitted by the curve, at polynomial scale.

    A pairing that is a nonzero constant has no zeros anywhere, so the
    hyperplane is omitted on all of C; a nonconstant pairing always has
    roots (returned as witnesses).  A nonconstant curve into P^n cannot
    omit 2n+1 hyperplanes in general position, so `consistent` asserts
    NOT(omitted_count = 2n+1 and curve nonconstant); for polynomial curves
    this must always hold.
    """
    n = curve.n
    expected = 2 * n + 1
    if len(hypers) != expected:
        raise WrongCount(
            f"expected 2n+1 = {expected} hyperplanes, got {len(hypers)}")
    if not is_general_position(hypers):
        raise NotGeneralPosition(
            "hyperplanes are not in general position")
    omitted = []
    witness_roots: dict[int, list[complex]] = {}
    for j, h in enumerate(hypers):
        p = pair(curve, h)
        if p.is_zero:
            raise IdenticallyZero(
                f"curve lies inside hyperplane {j}", hyperplane_index=j)
        if p.degree == 0:
            omitted.append(j)
        else:
            witness_roots[j] = [z for z, _ in p.roots()]
    count = len(omitted)
    consistent = not (count == expected and not curve.is_constant)
    return GreenReport(omitted_count=count, omitted=tuple(omitted),
                       witness_roots=witness_roots, consistent=consistent)
