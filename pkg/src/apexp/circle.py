"""Circle maps via lifts, rotation numbers, a constructive blown-up
rotation (Denjoy-style) example, and suspension flows.

A lift F is normalized by F(0) in [0, 1); the induced circle map is
x -> frac(F(x)).  The blown-up rotation inserts geometric intervals
along one rotation orbit; the inverse of the insertion is the monotone
collapse back onto the rotation.
"""

from __future__ import annotations

import ast
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .circmath import circle_dist, frac
from .realfield import RealVector, parse_rational

__all__ = [
    "CircleLift",
    "DenjoyMap",
    "SuspensionPoint",
    "NotMonotoneError",
    "RationalThetaError",
    "PrecisionError",
    "rotation_lift",
    "closed_form_lift",
    "sampled_lift",
    "rotation_number",
    "build_denjoy",
    "suspension_flow",
    "mu_rotation",
    "suspension_semiconjugacy",
]


class NotMonotoneError(ValueError):
    """The lift fails its strict-monotonicity sampling check."""


class RationalThetaError(ValueError):
    """The requested rotation number has no irrational part."""


class PrecisionError(ValueError):
    """The truncation tail bound exceeds the requested precision."""


class CircleLift:
    """Lift of a degree-one orientation-preserving circle map."""

    CLOSED_FORM = "CLOSED_FORM"
    DENJOY = "DENJOY"
    SAMPLED = "SAMPLED"

    def __init__(self, f, kind: str, inverse=None, validate: bool = True):
        self.f = f
        self.kind = kind
        self._inverse = inverse
        if validate:
            self.validate()

    def __call__(self, x: float) -> float:
        return self.f(x)

    def validate(self, samples: int = 257, tol: float = 1e-9):
        f0 = self.f(0.0)
        if not 0.0 <= f0 < 1.0:
            raise ValueError(f"lift not normalized: F(0) = {f0}")
        xs = np.linspace(-1.0, 1.0, samples)
        ys = np.array([self.f(float(x)) for x in xs])
        if np.any(np.diff(ys) <= 0):
            raise NotMonotoneError("lift is not strictly increasing on samples")
        shifted = np.array([self.f(float(x) + 1.0) for x in xs])
        if np.max(np.abs(shifted - ys - 1.0)) > tol:
            raise ValueError("lift is not degree-one equivariant on samples")

    def circle_map(self, x: float) -> float:
        return frac(self.f(x))

    def inverse(self, y: float) -> float:
        """x with F(x) = y; bisection on the monotone lift if no closed
        form was supplied."""
        if self._inverse is not None:
            return self._inverse(y)
        lo, hi = y - 2.0, y + 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.f(mid) < y:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def iterate(self, x: float, n: int) -> float:
        """n-fold lift iterate, n may be negative."""
        for _ in range(n if n >= 0 else -n):
            x = self.f(x) if n >= 0 else self.inverse(x)
        return x

    def circle_iterate(self, x: float, n: int) -> float:
        return frac(self.iterate(frac(x), n))


def rotation_lift(theta: float) -> CircleLift:
    """Lift of the rigid rotation by theta."""
    t0 = frac(theta)
    return CircleLift(lambda x, _t=t0: x + _t, CircleLift.CLOSED_FORM,
                      inverse=lambda y, _t=t0: y - _t)


_ALLOWED_FUNCS = {"sin": math.sin, "cos": math.cos}
_ALLOWED_NAMES = {"pi": math.pi}


def _eval_expr(node, x: float) -> float:
    if isinstance(node, ast.Expression):
        return _eval_expr(node.body, x)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name):
        if node.id == "x":
            return x
        if node.id in _ALLOWED_NAMES:
            return _ALLOWED_NAMES[node.id]
        raise ValueError(f"unknown name {node.id!r}")
    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub,
                                                            ast.Mult, ast.Div)):
        a, b = _eval_expr(node.left, x), _eval_expr(node.right, x)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        return a / b
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_expr(node.operand, x)
        return -v if isinstance(node.op, ast.USub) else v
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
            and node.func.id in _ALLOWED_FUNCS and len(node.args) == 1):
        return _ALLOWED_FUNCS[node.func.id](_eval_expr(node.args[0], x))
    raise ValueError("expression uses an unsupported construct")


def closed_form_lift(expr: str) -> CircleLift:
    """Lift from a tiny arithmetic grammar: x, numbers, + - * /, sin, cos, pi."""
    tree = ast.parse(expr, mode="eval")
    return CircleLift(lambda x: _eval_expr(tree, x), CircleLift.CLOSED_FORM)


def sampled_lift(xs, ys) -> CircleLift:
    """Monotone piecewise-linear lift through samples of F on [0, 1)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    order = np.argsort(xs)
    xs, ys = xs[order], ys[order]
    # extend by degree-one equivariance so interpolation covers [0, 1]
    xg = np.concatenate([xs, xs[:1] + 1.0])
    yg = np.concatenate([ys, ys[:1] + 1.0])

    def f(x):
        k = math.floor(x)
        return float(np.interp(x - k, xg, yg)) + k

    return CircleLift(f, CircleLift.SAMPLED)


def rotation_number(lift: CircleLift, x0: float = 0.0, n: int = 10000):
    """(estimate, error_bound) with estimate = (F^n(x0) - x0)/n.

    The bound 2/n comes from applying |F^n(x) - x - n*rho| <= 1 twice.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    x = x0
    for _ in range(n):
        x = lift.f(x)
    return (x - x0) / n, 2.0 / n


# ---------------------------------------------------------------------------
# blown-up rotation (constructive non-transitive example)


@dataclass
class DenjoyMap:
    """Orientation-preserving circle homeomorphism with irrational
    rotation number and a Cantor minimal set, built by inserting
    intervals of geometric length along one rotation orbit."""

    theta: RealVector
    theta_val: float
    lam: float
    trunc: int                      # orbit indices |n| <= trunc are blown up
    tail_bound: float
    lift: CircleLift = field(repr=False)
    # sorted insertion data
    _pos: np.ndarray = field(repr=False)    # orbit points frac(n*theta), sorted
    _len: np.ndarray = field(repr=False)    # inserted lengths, same order
    _cum: np.ndarray = field(repr=False)    # prefix sums of _len (len K+1)
    _start: np.ndarray = field(repr=False)  # left endpoints of inserted intervals
    _nidx: np.ndarray = field(repr=False)   # orbit index n per sorted slot
    _total: float = field(repr=False)       # 1 + sum of inserted lengths

    def embed(self, x: float) -> float:
        """Position on the enlarged circle of base point x (the left
        endpoint when x is a blown-up orbit point)."""
        x = frac(x)
        k = int(np.searchsorted(self._pos, x, side="left"))
        return (x + self._cum[k]) / self._total

    def locate(self, y: float):
        """(base point, orbit index or None, interior coordinate)."""
        y = frac(y)
        k = bisect_right(self._start.tolist(), y) - 1
        if k >= 0:
            end = self._start[k] + self._len[k] / self._total
            if y < end:
                s = (y - self._start[k]) * self._total / self._len[k]
                return float(self._pos[k]), int(self._nidx[k]), float(s)
        x = y * self._total - self._cum[k + 1]
        return float(frac(x)), None, 0.0

    def collapse(self, y: float) -> float:
        """The monotone semiconjugacy h onto the rigid rotation."""
        return self.locate(y)[0]

    def interval(self, n: int):
        """Endpoints [a, b] of the inserted interval for orbit index n."""
        k = int(np.nonzero(self._nidx == n)[0][0])
        a = float(self._start[k])
        return a, a + float(self._len[k] / self._total)


def build_denjoy(theta: RealVector, lam=Fraction(1, 2), trunc: int = 40,
                 precision: float = 1e-6) -> DenjoyMap:
    """Blow up the orbit indices |n| <= trunc of the rotation by theta
    into intervals of length c*lam^|n| (c normalizes the total inserted
    length to 1) and build the induced circle homeomorphism."""
    unit = theta.basis.unit_index
    if all(i == unit for i in theta.coords):
        raise RationalThetaError("theta must have an irrational symbol part")
    lam = float(parse_rational(lam))
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda must lie in (0, 1)")
    if trunc < 10:
        raise ValueError("truncation depth must be >= 10")
    th = theta.eval()
    c = (1.0 - lam) / (1.0 + lam)
    tail = 2.0 * c * lam ** (trunc + 1) / (1.0 - lam)
    if tail > precision:
        raise PrecisionError(f"tail bound {tail:.3g} exceeds {precision:.3g}")

    ns = np.arange(-trunc, trunc + 1)
    pos = frac(ns * th)
    lens = c * lam ** np.abs(ns)
    order = np.argsort(pos)
    pos, lens, nidx = pos[order], lens[order], ns[order]
    cum = np.concatenate([[0.0], np.cumsum(lens)])
    total = 1.0 + cum[-1]
    start = (pos + cum[:-1]) / total

    d = DenjoyMap(theta=theta, theta_val=th, lam=lam, trunc=trunc,
                  tail_bound=tail, lift=None, _pos=pos, _len=lens, _cum=cum,
                  _start=start, _nidx=nidx, _total=total)

    k_of_n = {int(n): k for k, n in enumerate(nidx)}
    ghost = c * lam ** (trunc + 1)  # virtual width beyond the truncation

    def f0(y: float) -> float:
        x, n, s = d.locate(y)
        if n is not None:
            if n + 1 in k_of_n:
                k1 = k_of_n[n + 1]
                return float(start[k1]) + s * float(lens[k1]) / total
            return d.embed(frac((n + 1) * th)) + s * ghost / total
        return d.embed(frac(x + th))

    def f0_inv(y: float) -> float:
        x, n, s = d.locate(y)
        if n is not None:
            if n - 1 in k_of_n:
                k1 = k_of_n[n - 1]
                return float(start[k1]) + s * float(lens[k1]) / total
            return d.embed(frac((n - 1) * th)) + s * ghost / total
        return d.embed(frac(x - th))

    y0 = f0(0.0)

    def lift_f(x: float) -> float:
        k = math.floor(x)
        v = f0(x - k)
        if v < y0:
            v += 1.0
        return v + k

    def lift_inv(y: float) -> float:
        # lift_f maps [k, k+1) onto [y0 + k, y0 + k + 1), and f0_inv
        # inverts the underlying circle map
        k = math.floor(y - y0)
        return f0_inv((y - k) % 1.0) + k

    d.lift = CircleLift(lift_f, CircleLift.DENJOY, inverse=lift_inv)
    return d


# ---------------------------------------------------------------------------
# suspensions


@dataclass
class SuspensionPoint:
    s: float  # in [0, 1)
    x: float  # circle coordinate in [0, 1)

    def __post_init__(self):
        if not 0.0 <= self.s < 1.0:
            raise ValueError("use suspension_flow / normalize for non-canonical s")
        self.x = frac(self.x)

    def dist(self, other: "SuspensionPoint") -> float:
        return max(circle_dist(self.s, other.s), circle_dist(self.x, other.x))


def suspension_flow(lift: CircleLift, t: float, p: SuspensionPoint) -> SuspensionPoint:
    """sigma(t, [s, x]) = [t + s, x], renormalized by applying the
    return map floor(t+s) times to the fiber coordinate."""
    total = t + p.s
    k = math.floor(total)
    return SuspensionPoint(total - k, lift.circle_iterate(p.x, k))


def mu_rotation(theta, p: SuspensionPoint):
    """Torus image <x + frac(s*theta), s> of a rotation-suspension point."""
    th = theta.eval() if isinstance(theta, RealVector) else float(theta)
    return frac(p.x + p.s * th), p.s


def suspension_semiconjugacy(d: DenjoyMap, p: SuspensionPoint,
                             base: SuspensionPoint | None = None):
    """Collapse the fiber, straighten to the torus, then translate the
    designated base point to <0, 0>."""
    a = frac(d.collapse(p.x) + p.s * d.theta_val)
    b = p.s
    if base is not None:
        a0 = frac(d.collapse(base.x) + base.s * d.theta_val)
        a, b = frac(a - a0), frac(b - base.s)
    return a, b
