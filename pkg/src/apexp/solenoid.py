"""Truncated inverse limits of tori and the linear flow on them.

A SolenoidSystem stores the integer bonding matrices of a staged basis
construction; points carry one circle-coordinate vector per stage and
must be compatible under the bonding matrices mod 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circmath import circle_dist, circular_mean, circular_spread, frac
from .groups import BSequence, FinGenSubgroup
from .realfield import RealVector

__all__ = [
    "SolenoidSystem",
    "SolenoidPoint",
    "LinearFlowSpec",
    "InconsistentPointError",
    "NonConvergentError",
    "pi_solenoid",
    "flow_step",
    "point_add",
    "point_neg",
    "semiconjugacy_to_solenoid",
]

TOL_CONSIST = 1e-9
TOL_LIMIT = 1e-3


class InconsistentPointError(ValueError):
    """Stage coordinates fail the bonding-matrix compatibility check."""


class NonConvergentError(ValueError):
    """A coordinate sequence's tail spread exceeds the limit tolerance."""

    def __init__(self, stage: int, coord: int, spread: float):
        self.stage, self.coord, self.spread = stage, coord, spread
        super().__init__(f"stage {stage} coord {coord}: tail spread {spread:.3g}")


@dataclass
class SolenoidSystem:
    kappa: int
    matrices: list[np.ndarray]          # M_1 .. M_{n-1}, integer kappa x kappa
    stage_bases: list[list[RealVector]]  # bases used for pi evaluation

    def __post_init__(self):
        self.matrices = [np.asarray(m, dtype=np.int64) for m in self.matrices]
        for m in self.matrices:
            if m.shape != (self.kappa, self.kappa):
                raise ValueError("bonding matrix has wrong shape")
            if round(np.linalg.det(m.astype(float))) == 0:
                raise ValueError("bonding matrix is singular")
        if len(self.stage_bases) != len(self.matrices) + 1:
            raise ValueError("need one stage basis per torus stage")
        # cross-check the exact stage identities b_r^i = sum M_i[r,s] b_s^{i+1}
        for i, m in enumerate(self.matrices):
            for r in range(self.kappa):
                acc = self.stage_bases[0][0].basis.zero()
                for s in range(self.kappa):
                    acc = acc + self.stage_bases[i + 1][s].scale(int(m[r, s]))
                if acc != self.stage_bases[i][r]:
                    raise ValueError(f"stage identity fails at stage {i + 1} row {r}")

    @property
    def depth(self) -> int:
        return len(self.stage_bases)

    @classmethod
    def from_bsequence(cls, seq: BSequence) -> "SolenoidSystem":
        return cls(kappa=seq.kappa,
                   matrices=[np.asarray(s.matrix) for s in seq.stages[1:]],
                   stage_bases=[list(s.basis) for s in seq.stages])

    def dual_generator_group(self) -> FinGenSubgroup:
        """Subgroup of (R, +) generated by all stage basis values."""
        ctx = self.stage_bases[0][0].basis
        gens = [v for basis in self.stage_bases for v in basis]
        return FinGenSubgroup(ctx, gens)

    def to_json(self) -> dict:
        return {"kappa": self.kappa,
                "matrices": [m.tolist() for m in self.matrices],
                "basis": self.stage_bases[0][0].basis.to_json(),
                "stage_bases": [[v.to_json() for v in basis]
                                for basis in self.stage_bases]}

    @classmethod
    def from_json(cls, data: dict) -> "SolenoidSystem":
        from .realfield import SymbolBasis
        ctx = SymbolBasis.from_json(data["basis"])
        bases = [[RealVector.from_json(ctx, v) for v in basis]
                 for basis in data["stage_bases"]]
        return cls(kappa=data["kappa"], matrices=data["matrices"],
                   stage_bases=bases)


@dataclass
class SolenoidPoint:
    stages: list[np.ndarray]  # circle coordinates in [0,1), one vector per stage

    def __post_init__(self):
        self.stages = [np.asarray(s, dtype=float) % 1.0 for s in self.stages]

    def consistency_residual(self, system: SolenoidSystem) -> float:
        worst = 0.0
        for i, m in enumerate(system.matrices):
            image = (m @ self.stages[i + 1]) % 1.0
            for a, b in zip(image, self.stages[i]):
                worst = max(worst, circle_dist(a, b))
        return worst

    def check_consistent(self, system: SolenoidSystem, tol=TOL_CONSIST):
        r = self.consistency_residual(system)
        if r > tol:
            raise InconsistentPointError(f"consistency residual {r:.3g} > {tol:.3g}")

    def dist(self, other: "SolenoidPoint") -> float:
        return max(circle_dist(a, b)
                   for sa, sb in zip(self.stages, other.stages)
                   for a, b in zip(sa, sb))


def zero_point(system: SolenoidSystem) -> SolenoidPoint:
    return SolenoidPoint([np.zeros(system.kappa) for _ in range(system.depth)])


@dataclass
class LinearFlowSpec:
    system: SolenoidSystem
    omega: list[RealVector] = field(default=None)

    def __post_init__(self):
        stage1 = self.system.stage_bases[0]
        if self.omega is None:
            self.omega = list(stage1)
        elif list(self.omega) != list(stage1):
            raise ValueError("omega must equal the stage-1 basis")
        # frequency values per stage, precomputed for speed
        self._freqs = [np.array([v.eval() for v in basis])
                       for basis in self.system.stage_bases]


def pi_solenoid(spec: LinearFlowSpec, t: float) -> SolenoidPoint:
    """The one-parameter subgroup point: stage i coord j = frac(t * b_j^i)."""
    return SolenoidPoint([frac(t * f) for f in spec._freqs])


def flow_step(spec: LinearFlowSpec, t: float, x: SolenoidPoint,
              tol=TOL_CONSIST) -> SolenoidPoint:
    x.check_consistent(spec.system, tol)
    moved = pi_solenoid(spec, t)
    return point_add(x, moved)


def point_add(x: SolenoidPoint, y: SolenoidPoint) -> SolenoidPoint:
    if len(x.stages) != len(y.stages) or any(
            a.shape != b.shape for a, b in zip(x.stages, y.stages)):
        raise ValueError("points live on different systems")
    return SolenoidPoint([(a + b) % 1.0 for a, b in zip(x.stages, y.stages)])


def point_neg(x: SolenoidPoint) -> SolenoidPoint:
    return SolenoidPoint([(-a) % 1.0 for a in x.stages])


def semiconjugacy_to_solenoid(orbit, seq: BSequence, times,
                              tol_orbit=1e-6, tol_limit=TOL_LIMIT,
                              tail: int = 8) -> SolenoidPoint:
    """Evaluate the semiconjugacy image of the point presented by an
    f-sequence: stage coordinates are the numeric limits of
    frac(b_j^i * t_i).

    `orbit` is an OrbitEvaluator (used to verify the presentation is
    Cauchy); `times` is the f-sequence of reals.  Raises
    NonConvergentError if any coordinate tail spread exceeds tol_limit.
    """
    times = np.asarray(times, dtype=float)
    if orbit is not None:
        pts = [orbit.eval(t) for t in times[-tail:]]
        spread = max(orbit.metric(p, q) for p in pts for q in pts)
        if spread > tol_orbit:
            raise NonConvergentError(-1, -1, spread)
    stages = []
    for i, basis in enumerate(seq.stages):
        coords = []
        for j, v in enumerate(basis.basis):
            trace = frac(v.eval() * times)[-tail:]
            spread = circular_spread(trace)
            if spread > tol_limit:
                raise NonConvergentError(i, j, spread)
            coords.append(circular_mean(trace))
        stages.append(np.array(coords))
    return SolenoidPoint(stages)
