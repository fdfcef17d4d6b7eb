"""Preimage zero sets, hyperplane sharing, and the hypothesis checker.

The checker evaluates, for a family of curves each carrying its own 2n+1
moving hyperplanes:
  - a uniform positive lower bound on the general-position product,
  - equality of the curve's and its derived map's preimage zero SETS per
    hyperplane (condition 1),
  - a first-coordinate lower bound |f_0(z)| >= epsilon * sup-norm at every
    preimage zero (condition 2),
  - an empirical normality verdict for each induced coefficient-curve family.

Set comparisons ignore multiplicities throughout; matching is bipartite
nearest-neighbor with mutual-nearest acceptance within tau_match.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import config
from .derived import derived_map
from .errors import IdenticallyZero, WrongCount, ValidationError
from .normality import MartyThresholds, DEFAULT_MARTY, marty_sup
from .position import Region, UniformDelta, uniform_delta
from .projective import (MovingHyperplane, ProjCurve, fs_distance,
                         induced_curve, pair, sup_norm)


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

class FamilyMember:
    """One curve with its wandering assignment of 2n+1 moving hyperplanes."""

    __slots__ = ("curve", "hyperplanes", "label")

    def __init__(self, curve: ProjCurve,
                 hyperplanes: Sequence[MovingHyperplane],
                 label: str) -> None:
        hypers = tuple(hyperplanes)
        expected = 2 * curve.n + 1
        if len(hypers) != expected:
            raise WrongCount(
                f"expected 2n+1 = {expected} hyperplanes, got {len(hypers)}")
        for h in hypers:
            if h.n != curve.n:
                raise WrongCount(
                    f"hyperplane dimension {h.n} does not match curve n={curve.n}")
        self.curve = curve
        self.hyperplanes = hypers
        self.label = str(label)

    def __repr__(self) -> str:
        return f"FamilyMember({self.label!r}, n={self.curve.n})"


@dataclass(frozen=True)
class CheckConfig:
    """Parameters of the hypothesis checker."""

    region: Region
    epsilon: float
    delta: float
    tau_match: float | None = None
    tau_root: float = config.TAU_ROOT
    tau_proj: float = config.TAU_PROJ
    marty: MartyThresholds = DEFAULT_MARTY

    def __post_init__(self) -> None:
        if not (0.0 < self.epsilon < 1.0):
            raise ValidationError(
                f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.delta <= 0.0:
            raise ValidationError(f"delta must be positive, got {self.delta}")
        if self.tau_match is not None and self.tau_match <= 0.0:
            raise ValidationError("tau_match must be positive")

    @property
    def match_tolerance(self) -> float:
        if self.tau_match is not None:
            return self.tau_match
        return config.TAU_MATCH_REL * self.region.diameter


# ---------------------------------------------------------------------------
# zero sets and matching
# ---------------------------------------------------------------------------

def preimage_zeros(curve: ProjCurve, hyper: MovingHyperplane, region: Region,
                   tau_match: float | None = None,
                   tau_root: float = config.TAU_ROOT
                   ) -> list[tuple[complex, int]]:
    """Zeros of the pairing inside the region (boundary-inclusive).

    Raises IdenticallyZero when the curve lies inside the hyperplane; that
    is a degenerate scene, reported upward rather than silently passed.
    """
    p = pair(curve, hyper)
    if p.is_zero:
        raise IdenticallyZero("curve lies inside the hyperplane")
    if p.degree == 0:
        return []
    slack = tau_match if tau_match is not None else (
        config.TAU_MATCH_REL * region.diameter)
    return [(z, m) for z, m in p.roots(tau_root=tau_root)
            if region.contains(z, slack=slack)]


def match_point_sets(a: Sequence[complex], b: Sequence[complex],
                     tau: float) -> tuple[list[tuple[int, int]],
                                          list[int], list[int]]:
    """Greedy nearest-first bipartite matching within tau.

    Returns (matched index pairs, unmatched indices of a, unmatched of b).
    Nearest-first greedy acceptance equals mutual-nearest matching whenever
    the sets are separated by more than 2*tau, the regime the checker
    operates in.
    """
    cand = sorted(
        (abs(pa - pb), i, j)
        for i, pa in enumerate(a) for j, pb in enumerate(b))
    used_a: set[int] = set()
    used_b: set[int] = set()
    pairs: list[tuple[int, int]] = []
    for d, i, j in cand:
        if d > tau:
            break
        if i in used_a or j in used_b:
            continue
        pairs.append((i, j))
        used_a.add(i)
        used_b.add(j)
    free_a = [i for i in range(len(a)) if i not in used_a]
    free_b = [j for j in range(len(b)) if j not in used_b]
    return pairs, free_a, free_b


def shares(f: ProjCurve, g: ProjCurve, hyper: MovingHyperplane,
           region: Region, tau_match: float | None = None,
           tau_proj: float = config.TAU_PROJ,
           tau_root: float = config.TAU_ROOT) -> bool:
    """Whether f and g share the hyperplane over the region.

    True iff the two preimage zero sets coincide as sets (multiplicities
    ignored) and the curves agree projectively at every matched zero.
    """
    if tau_match is None:
        tau_match = config.TAU_MATCH_REL * region.diameter
    za = [z for z, _ in preimage_zeros(f, hyper, region, tau_match, tau_root)]
    zb = [z for z, _ in preimage_zeros(g, hyper, region, tau_match, tau_root)]
    pairs, free_a, free_b = match_point_sets(za, zb, tau_match)
    if free_a or free_b:
        return False
    for i, j in pairs:
        if fs_distance(f.at(za[i]), g.at(zb[j])) > tau_proj:
            return False
    return True


# ---------------------------------------------------------------------------
# sharing-hypothesis conditions
# ---------------------------------------------------------------------------

def condition1_check(member: FamilyMember, cfg: CheckConfig) -> list[dict]:
    """Per-hyperplane SET equality of curve and derived-map preimages.

    Only set equality is tested; the value agreement demanded by `shares`
    is deliberately not required here.
    """
    nabla = derived_map(member.curve, tau_root=cfg.tau_root)
    tau = cfg.match_tolerance
    out = []
    for j, h in enumerate(member.hyperplanes):
        try:
            zf = [z for z, _ in preimage_zeros(
                member.curve, h, cfg.region, tau, cfg.tau_root)]
            zd = [z for z, _ in preimage_zeros(
                nabla, h, cfg.region, tau, cfg.tau_root)]
        except IdenticallyZero as exc:
            raise IdenticallyZero(
                f"hyperplane {j}: {exc}", hyperplane_index=j) from exc
        _, free_f, free_d = match_point_sets(zf, zd, tau)
        out.append({
            "hyperplane": j,
            "passed": not free_f and not free_d,
            "curve_only": [zf[i] for i in free_f],
            "derived_only": [zd[i] for i in free_d],
        })
    return out


def condition2_check(member: FamilyMember, cfg: CheckConfig) -> dict:
    """First-coordinate bound at every preimage zero across all hyperplanes.

    At each zero z of each pairing, requires
    |f_0(z)| >= epsilon * sup_norm(f, z); failures carry full witnesses.
    """
    f0 = member.curve.components[0]
    tau = cfg.match_tolerance
    witnesses = []
    checked = 0
    for j, h in enumerate(member.hyperplanes):
        try:
            zeros = preimage_zeros(member.curve, h, cfg.region, tau,
                                   cfg.tau_root)
        except IdenticallyZero as exc:
            raise IdenticallyZero(
                f"hyperplane {j}: {exc}", hyperplane_index=j) from exc
        for z, _ in zeros:
            checked += 1
            lhs = abs(f0(z))
            rhs = cfg.epsilon * sup_norm(member.curve, z)
            if lhs < rhs:
                witnesses.append({
                    "z": z, "hyperplane": j, "lhs": lhs, "rhs": rhs})
    return {"passed": not witnesses, "witnesses": witnesses,
            "zeros_checked": checked}


@dataclass
class MemberVerdict:
    label: str
    delta: UniformDelta
    delta_ok: bool
    condition1: list[dict] = field(default_factory=list)
    condition1_ok: bool = True
    condition2: dict = field(default_factory=dict)
    condition2_ok: bool = True


@dataclass
class ConditionReport:
    """Aggregated verdicts for a whole family."""

    members: list[MemberVerdict]
    delta_estimate: float
    delta_ok: bool
    condition1_ok: bool
    condition2_ok: bool
    induced_normality: list[dict]
    normality_ok: bool
    overall: bool
    warnings: list[str]

    def to_json(self) -> dict:
        return {
            "members": [{
                "label": m.label,
                "delta": {"min": m.delta.value,
                          "argmin": _c(m.delta.argmin)},
                "delta_ok": m.delta_ok,
                "condition1": [{
                    "hyperplane": v["hyperplane"],
                    "passed": v["passed"],
                    "curve_only": [_c(z) for z in v["curve_only"]],
                    "derived_only": [_c(z) for z in v["derived_only"]],
                } for v in m.condition1],
                "condition1_ok": m.condition1_ok,
                "condition2": {
                    "passed": m.condition2.get("passed", True),
                    "zeros_checked": m.condition2.get("zeros_checked", 0),
                    "witnesses": [{
                        "z": _c(w["z"]), "hyperplane": w["hyperplane"],
                        "lhs": w["lhs"], "rhs": w["rhs"],
                    } for w in m.condition2.get("witnesses", [])],
                },
                "condition2_ok": m.condition2_ok,
            } for m in self.members],
            "delta_estimate": self.delta_estimate,
            "delta_ok": self.delta_ok,
            "condition1_ok": self.condition1_ok,
            "condition2_ok": self.condition2_ok,
            "induced_normality": self.induced_normality,
            "normality_ok": self.normality_ok,
            "overall": self.overall,
            "warnings": self.warnings,
        }


def _c(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def hypotheses_check(members: Sequence[FamilyMember],
                     cfg: CheckConfig) -> ConditionReport:
    """Run every hypothesis check and aggregate the verdicts.

    Degenerate members (curve inside a hyperplane, zero first component)
    raise, annotated with the member label; they are scene defects, not
    check failures.
    """
    members = list(members)
    warnings: list[str] = []
    if not members:
        return ConditionReport(
            members=[], delta_estimate=float("inf"), delta_ok=True,
            condition1_ok=True, condition2_ok=True, induced_normality=[],
            normality_ok=True, overall=True,
            warnings=["empty family: all hypotheses hold vacuously"])

    verdicts: list[MemberVerdict] = []
    for m in members:
        try:
            ud = uniform_delta(m.hyperplanes, cfg.region)
            c1 = condition1_check(m, cfg)
            c2 = condition2_check(m, cfg)
        except IdenticallyZero as exc:
            raise IdenticallyZero(
                f"member {m.label}: {exc}",
                hyperplane_index=exc.hyperplane_index) from exc
        verdicts.append(MemberVerdict(
            label=m.label,
            delta=ud,
            delta_ok=ud.value > cfg.delta,
            condition1=c1,
            condition1_ok=all(v["passed"] for v in c1),
            condition2=c2,
            condition2_ok=c2["passed"],
        ))

    count = len(members[0].hyperplanes)
    induced = []
    for j in range(count):
        fam = [induced_curve(m.hyperplanes[j]) for m in members]
        stats = marty_sup(fam, cfg.region, thresholds=cfg.marty)
        induced.append({
            "hyperplane": j,
            "verdict": stats.verdict,
            "sups": list(stats.sups),
        })
    if len(members) < cfg.marty.window:
        warnings.append(
            "induced-family normality is inconclusive below "
            f"{cfg.marty.window} members")

    delta_ok = all(v.delta_ok for v in verdicts)
    c1_ok = all(v.condition1_ok for v in verdicts)
    c2_ok = all(v.condition2_ok for v in verdicts)
    normality_ok = all(e["verdict"] != "blow-up" for e in induced)
    return ConditionReport(
        members=verdicts,
        delta_estimate=min(v.delta.value for v in verdicts),
        delta_ok=delta_ok,
        condition1_ok=c1_ok,
        condition2_ok=c2_ok,
        induced_normality=induced,
        normality_ok=normality_ok,
        overall=delta_ok and c1_ok and c2_ok and normality_ok,
        warnings=warnings,
    )
