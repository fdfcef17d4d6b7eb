"""Complex polynomials in one variable with numerically tolerant helpers.

Coefficients are stored ascending (constant term first) as complex128.
Construction trims trailing coefficients that are negligible relative to the
largest magnitude, so arithmetic keeps degrees honest.  Root finding goes
through the companion matrix, with one guarded Newton polish per root and a
clustering pass that merges eigenvalue splatter from multiple roots back
into (root, multiplicity) pairs.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import config
from .errors import AllZero, ZeroPolynomial


class ComplexPoly:
    """Immutable polynomial with ascending complex coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[complex],
                 tau_coeff: float = config.TAU_COEFF) -> None:
        arr = np.asarray(list(coeffs), dtype=np.complex128)
        if arr.ndim != 1:
            raise ValueError("coefficients must be a flat sequence")
        if arr.size:
            top = float(np.max(np.abs(arr)))
            cut = top * tau_coeff
            keep = arr.size
            while keep > 0 and abs(arr[keep - 1]) <= cut:
                keep -= 1
            arr = arr[:keep]
        self._coeffs = arr
        self._coeffs.setflags(write=False)

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls) -> "ComplexPoly":
        return cls([])

    @classmethod
    def one(cls) -> "ComplexPoly":
        return cls([1.0])

    @classmethod
    def constant(cls, c: complex) -> "ComplexPoly":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, coeff: complex = 1.0) -> "ComplexPoly":
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        return cls([0.0] * degree + [coeff])

    @classmethod
    def from_roots(cls, roots: Sequence[complex],
                   leading: complex = 1.0) -> "ComplexPoly":
        acc = np.array([leading], dtype=np.complex128)
        for r in roots:
            acc = np.convolve(acc, np.array([-r, 1.0], dtype=np.complex128))
        return cls(acc)

    # -- basic queries --------------------------------------------------

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return self._coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self._coeffs.size == 0

    @property
    def is_constant(self) -> bool:
        return self._coeffs.size <= 1

    def __repr__(self) -> str:
        return f"ComplexPoly({list(self._coeffs)!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return (self._coeffs.shape == other._coeffs.shape
                and bool(np.all(self._coeffs == other._coeffs)))

    def __hash__(self) -> int:
        return hash(tuple(self._coeffs.tolist()))

    # -- evaluation ------------------------------------------------------

    def __call__(self, z):
        """Horner evaluation; accepts scalars or numpy arrays."""
        if self._coeffs.size == 0:
            if isinstance(z, np.ndarray):
                return np.zeros(z.shape, dtype=np.complex128)
            return 0j
        if isinstance(z, np.ndarray):
            acc = np.full(z.shape, self._coeffs[-1], dtype=np.complex128)
            for c in self._coeffs[-2::-1]:
                acc = acc * z + c
            return acc
        acc = complex(self._coeffs[-1])
        zz = complex(z)
        for c in self._coeffs[-2::-1]:
            acc = acc * zz + complex(c)
        return acc

    # -- arithmetic --------------------------------------------------

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        a, b = self._coeffs, other._coeffs
        if a.size < b.size:
            a, b = b, a
        out = a.copy()
        out[: b.size] += b
        return ComplexPoly(out)

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        return self + (-other)

    def __neg__(self) -> "ComplexPoly":
        return ComplexPoly(-self._coeffs)

    def __mul__(self, other) -> "ComplexPoly":
        if isinstance(other, ComplexPoly):
            if self.is_zero or other.is_zero:
                return ComplexPoly.zero()
            return ComplexPoly(np.convolve(self._coeffs, other._coeffs))
        return ComplexPoly(self._coeffs * complex(other))

    def __rmul__(self, other) -> "ComplexPoly":
        return self.__mul__(other)

    def derivative(self) -> "ComplexPoly":
        if self._coeffs.size <= 1:
            return ComplexPoly.zero()
        k = np.arange(1, self._coeffs.size)
        return ComplexPoly(self._coeffs[1:] * k)

    def monic(self) -> "ComplexPoly":
        if self.is_zero:
            raise ZeroPolynomial("zero polynomial has no monic form")
        return ComplexPoly(self._coeffs / self._coeffs[-1])

    def shift_scale(self, center: complex, scale: complex) -> "ComplexPoly":
        """Return q with q(w) = p(center + scale * w), exactly in coefficients.

        The shift is repeated synthetic division (a Taylor shift), the scale
        multiplies coefficient j by scale**j.  Both steps are coefficient
        level, so recomposition introduces no sampling error.
        """
        if self.is_zero:
            return ComplexPoly.zero()
        work = np.array(self._coeffs, dtype=np.complex128)
        n = work.size
        # Taylor shift: after pass k, work[k] is the k-th Taylor coefficient
        # of p at `center`.
        for k in range(n - 1):
            for i in range(n - 2, k - 1, -1):
                work[i] += center * work[i + 1]
        scaled = work * (np.complex128(scale) ** np.arange(n))
        return ComplexPoly(scaled)

    # -- division helpers ----------------------------------------------

    def deflate(self, root: complex) -> "ComplexPoly":
        """Synthetic division by (z - root), discarding the remainder."""
        if self.is_zero:
            raise ZeroPolynomial("cannot deflate the zero polynomial")
        c = self._coeffs
        n = c.size
        out = np.empty(n - 1, dtype=np.complex128)
        acc = c[n - 1]
        for i in range(n - 2, -1, -1):
            out[i] = acc
            acc = c[i] + acc * root
        return ComplexPoly(out)

    # -- serialization --------------------------------------------------

    def to_json(self) -> list:
        return [[float(c.real), float(c.imag)] for c in self._coeffs]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[float]]) -> "ComplexPoly":
        return cls([complex(re, im) for re, im in data])

    # -- root finding ----------------------------------------------------

    def roots(self, tau_root: float = config.TAU_ROOT,
              tau_cluster: float = config.TAU_CLUSTER
              ) -> list[tuple[complex, int]]:
        """Roots with multiplicities, sorted by (real, imag).

        Companion-matrix eigenvalues, each polished with one guarded Newton
        step, then clustered: eigenvalues within ``tau_cluster`` of a cluster
        representative merge and their count is the multiplicity.
        """
        if self.is_zero:
            raise ZeroPolynomial("zero polynomial has every point as a root")
        if self.degree == 0:
            return []
        raw = _companion_roots(self._coeffs)
        polished = [_newton_polish(self, r) for r in raw]
        clusters = _cluster_points(polished, tau_cluster)
        clusters.sort(key=lambda rm: (rm[0].real, rm[0].imag))
        return clusters


def _companion_roots(coeffs: np.ndarray) -> np.ndarray:
    monic = coeffs / coeffs[-1]
    d = monic.size - 1
    if d == 1:
        return np.array([-monic[0]])
    C = np.zeros((d, d), dtype=np.complex128)
    C[1:, :-1] = np.eye(d - 1)
    C[:, -1] = -monic[:-1]
    return np.linalg.eigvals(C)


def _newton_polish(p: ComplexPoly, r: complex) -> complex:
    dp = p.derivative()
    fr = p(r)
    dfr = dp(r)
    if dfr == 0:
        return complex(r)
    cand = r - fr / dfr
    # Accept the step only if it actually reduced the residual.
    if abs(p(cand)) < abs(fr):
        return complex(cand)
    return complex(r)


def _cluster_points(points: Sequence[complex],
                    tau: float) -> list[tuple[complex, int]]:
    reps: list[complex] = []
    members: list[list[complex]] = []
    for pt in sorted(points, key=lambda c: (c.real, c.imag)):
        placed = False
        for i, rep in enumerate(reps):
            if abs(pt - rep) <= tau:
                members[i].append(pt)
                # Keep the representative at the running centroid so the
                # cluster does not drift past tau from its own members.
                reps[i] = sum(members[i]) / len(members[i])
                placed = True
                break
        if not placed:
            reps.append(pt)
            members.append([pt])
    return [(reps[i], len(members[i])) for i in range(len(reps))]


# ---------------------------------------------------------------------------
# polynomial combinators
# ---------------------------------------------------------------------------

def wronskian(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    """W(p, q) = p q' - p' q."""
    return p * q.derivative() - p.derivative() * q


def gcd_approx(polys: Sequence[ComplexPoly],
               tau_root: float = config.TAU_ROOT,
               tau_cluster: float = config.TAU_CLUSTER) -> ComplexPoly:
    """Monic approximate gcd via shared root clusters.

    The zero polynomial divides nothing here: zero entries are skipped.  A
    nonzero constant anywhere forces gcd 1.  Otherwise the root clusters of
    the lowest-degree polynomial are matched against every other polynomial's
    clusters within ``tau_root``; matched roots enter the gcd with the
    minimum multiplicity seen.
    """
    live = [p for p in polys if not p.is_zero]
    if not live:
        raise AllZero("gcd of all-zero inputs is undefined")
    if any(p.degree == 0 for p in live):
        return ComplexPoly.one()
    live.sort(key=lambda p: p.degree)
    base = live[0].roots(tau_root=tau_root, tau_cluster=tau_cluster)
    others = [p.roots(tau_root=tau_root, tau_cluster=tau_cluster)
              for p in live[1:]]
    shared: list[tuple[complex, int]] = []
    for root, mult in base:
        mmin = mult
        ok = True
        for rl in others:
            best = None
            for r2, m2 in rl:
                d = abs(r2 - root)
                if d <= tau_root and (best is None or d < best[0]):
                    best = (d, m2)
            if best is None:
                ok = False
                break
            mmin = min(mmin, best[1])
        if ok:
            shared.append((root, mmin))
    if not shared:
        return ComplexPoly.one()
    roots_flat: list[complex] = []
    for root, mult in shared:
        roots_flat.extend([root] * mult)
    return ComplexPoly.from_roots(roots_flat)


def divide_out(p: ComplexPoly, root: complex, mult: int,
               tau_root: float = config.TAU_ROOT) -> ComplexPoly:
    """Deflate ``p`` by its own root nearest ``root``, ``mult`` times.

    Deflating by the exact shared-cluster representative can leave a large
    remainder when p's own root sits a few ulps away, so each pass re-polishes
    against p's value before dividing.
    """
    out = p
    target = complex(root)
    for _ in range(mult):
        target = _newton_polish(out, target)
        out = out.deflate(target)
    return out
