import math
from fractions import Fraction

import numpy as np
import pytest

from apexp.circle import SuspensionPoint, mu_rotation, rotation_lift
from apexp.circmath import METRIC_TORUS, circle_dist
from apexp.exponents import OrbitEvaluator
from apexp.groups import build_b_sequence
from apexp.realfield import SymbolBasis
from apexp.solenoid import (InconsistentPointError, LinearFlowSpec,
                            NonConvergentError, SolenoidPoint, SolenoidSystem,
                            flow_step, pi_solenoid, point_add, point_neg,
                            semiconjugacy_to_solenoid, zero_point)


@pytest.fixture(scope="module")
def dyadic():
    ctx = SymbolBasis([("1", 1.0)])
    one = ctx.symbol("1")
    elements = [ctx.zero()] + [one.scale(Fraction(1, 2 ** i))
                               for i in range(1, 8)]
    seq = build_b_sequence([one], elements, ctx)
    return seq, SolenoidSystem.from_bsequence(seq)


def test_pi_solenoid_values(dyadic):
    _, system = dyadic
    spec = LinearFlowSpec(system)
    assert pi_solenoid(spec, 0.0).dist(zero_point(system)) == 0.0
    pt = pi_solenoid(spec, 1.0)
    assert [float(s[0]) for s in pt.stages[:3]] == [0.0, 0.5, 0.25]
    pt4 = pi_solenoid(spec, 4.0)
    assert [float(s[0]) for s in pt4.stages[:3]] == [0.0, 0.0, 0.0]


def test_consistency_residual_grid(dyadic):
    _, system = dyadic
    spec = LinearFlowSpec(system)
    worst = max(pi_solenoid(spec, t).consistency_residual(system)
                for t in np.linspace(-100, 100, 2000))
    assert worst <= 1e-9


def test_flow_identity_and_cocycle(dyadic):
    _, system = dyadic
    spec = LinearFlowSpec(system)
    rng = np.random.default_rng(2)
    for _ in range(200):
        s, t = rng.uniform(-20, 20, size=2)
        x = pi_solenoid(spec, float(rng.uniform(-5, 5)))
        one_step = flow_step(spec, t + s, x)
        two_step = flow_step(spec, t, flow_step(spec, s, x))
        assert one_step.dist(two_step) <= 1e-9
    x = pi_solenoid(spec, 0.37)
    assert flow_step(spec, 0.0, x).dist(x) == 0.0


def test_group_structure(dyadic):
    _, system = dyadic
    spec = LinearFlowSpec(system)
    e = zero_point(system)
    x = pi_solenoid(spec, 1.0)
    assert point_add(x, e).dist(x) == 0.0
    assert point_add(x, point_neg(x)).dist(e) == 0.0
    two_x = point_add(x, x)
    assert [float(s[0]) for s in two_x.stages[:3]] == [0.0, 0.0, 0.5]
    two_x.check_consistent(system)


def test_inconsistent_point_rejected(dyadic):
    _, system = dyadic
    spec = LinearFlowSpec(system)
    bad = SolenoidPoint([np.array([0.0]), np.array([0.3]), np.array([0.0]),
                         *[np.array([0.0])] * 5])
    with pytest.raises(InconsistentPointError):
        flow_step(spec, 1.0, bad)


def test_stage_identity_enforced(dyadic):
    seq, system = dyadic
    with pytest.raises(ValueError):
        SolenoidSystem(kappa=1, matrices=[np.array([[3]])] * 7,
                       stage_bases=[list(s.basis) for s in seq.stages])


def test_dual_generators_recover_group(dyadic):
    seq, system = dyadic
    assert system.dual_generator_group().same_group(seq.group())


def test_json_roundtrip(dyadic):
    _, system = dyadic
    system2 = SolenoidSystem.from_json(system.to_json())
    spec, spec2 = LinearFlowSpec(system), LinearFlowSpec(system2)
    assert pi_solenoid(spec, 2.7).dist(pi_solenoid(spec2, 2.7)) == 0.0


class TestSemiconjugacy:
    def setup_method(self):
        self.ctx = SymbolBasis([("1", 1.0), ("theta", math.sqrt(2) / 2)],
                               check_independence=False)
        self.seq = build_b_sequence(
            [self.ctx.symbol("1"), self.ctx.symbol("theta")],
            [self.ctx.zero()], self.ctx)
        self.th = self.ctx.symbol("theta").eval()
        lift = rotation_lift(self.th)

        def ev(t):
            p = SuspensionPoint(0.0, 0.0)
            from apexp.circle import suspension_flow
            q = suspension_flow(lift, float(t), p)
            return np.array([q.s, q.x])

        self.orbit = OrbitEvaluator(eval=ev, metric_kind=METRIC_TORUS)

    def test_constant_sequence_maps_to_identity(self):
        times = np.zeros(12)
        pt = semiconjugacy_to_solenoid(self.orbit, self.seq, times)
        assert float(pt.stages[0][0]) == 0.0 and float(pt.stages[0][1]) == 0.0

    def test_matches_straightening_map(self):
        # times drifting to a fixed suspension point: the stage limits
        # must agree with the closed-form torus image of that point
        rng = np.random.default_rng(7)
        for _ in range(25):
            s = float(rng.uniform(0, 1))
            # returns to fiber coordinate x0 + k*theta happen at t = k + s
            ks = np.array([3363, 6726, 8119, 11482, 16238, 19601, 22964])
            times = ks + s
            pt = semiconjugacy_to_solenoid(self.orbit, self.seq, times,
                                           tol_orbit=2e-3, tol_limit=2e-3)
            p = SuspensionPoint(s, float((ks[-1] * self.th) % 1.0))
            a, b = mu_rotation(self.ctx.symbol("theta"), p)
            assert circle_dist(float(pt.stages[0][0]), b) <= 1e-2
            assert circle_dist(float(pt.stages[0][1]), a) <= 1e-2

    def test_non_convergent_rejected(self):
        times = np.arange(1.0, 13.0) * 0.37
        with pytest.raises(NonConvergentError):
            semiconjugacy_to_solenoid(None, self.seq, times)
