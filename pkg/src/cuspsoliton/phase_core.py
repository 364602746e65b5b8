"""Phase-plane core for the soliton profile equations.

With H = h' and F = f', the gradient-soliton equations for the metric
g = dr^2 + e^{2h(r)}(dx^2 + dy^2) reduce to the planar autonomous system

    H' = H F - 2 H^2 + eps/2
    F' = 2 H F - 2 H^2 + eps/2

where eps in {-1, 0, +1} is the shrinking / steady / expanding
normalization.  Only eps = +1 admits critical points, the saddles
(+-1/2, 0); the orbit structure around (1/2, 0) carries the whole
geometry downstream.

Besides the state (H, F), the integrator optionally transports

    sigma = -(H' + H^2),    sigma' = (F - H) sigma - H^3

which is the mixed sectional curvature of the reconstructed metric.  The
transport equation is an exact consequence of the system; integrating it
keeps sigma at full relative accuracy where the direct expression
-(H' + H^2) loses every digit to cancellation (along the bounded orbit
sigma decays like r^-4 while H', H^2 decay like r^-2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "PhasePoint", "PhaseVelocity", "Jacobian2", "IntegratorControls",
    "Trajectory", "CriticalSet", "IntegrationError",
    "vector_field", "critical_points", "linearize", "eigen_saddle",
    "integrate", "SADDLE",
    "EIGENVALUE_UNSTABLE", "EIGENVALUE_STABLE", "SLOPE_UNSTABLE", "SLOPE_STABLE",
]

_VALID_EPS = (-1, 0, 1)

_SQRT5 = math.sqrt(5.0)
#: positive and negative eigenvalues of the linearization at (1/2, 0)
EIGENVALUE_UNSTABLE = (-1.0 + _SQRT5) / 2.0
EIGENVALUE_STABLE = (-1.0 - _SQRT5) / 2.0
#: slopes dF/dH of the corresponding eigendirections
SLOPE_UNSTABLE = 3.0 + _SQRT5
SLOPE_STABLE = 3.0 - _SQRT5


class IntegrationError(RuntimeError):
    """Adaptive stepping failed (step-size underflow or non-finite state)."""


class PhasePoint(NamedTuple):
    """A point of the (H, F) phase plane; H = h', F = f'."""

    H: float
    F: float


class PhaseVelocity(NamedTuple):
    """Value of the vector field (dH/dr, dF/dr) at a phase point."""

    dH: float
    dF: float


SADDLE = PhasePoint(0.5, 0.0)


def _check_eps(eps: int) -> int:
    if eps not in _VALID_EPS:
        raise ValueError(f"eps must be one of {_VALID_EPS}, got {eps!r}")
    return eps


def vector_field(p, eps: int = 1) -> PhaseVelocity:
    """Right-hand side (H', F') of the system at ``p``.

    ``p`` may be a PhasePoint, a pair of floats, or a pair of arrays; the
    components are returned as a PhaseVelocity (array-valued components are
    allowed and broadcast).
    """
    _check_eps(eps)
    H, F = p
    common = -2.0 * np.asarray(H) ** 2 + 0.5 * eps
    return PhaseVelocity(H * F + common, 2.0 * H * F + common)


@dataclass(frozen=True)
class CriticalSet:
    """Critical points of the system; ``continuum`` flags a degenerate line."""

    points: tuple[PhasePoint, ...]
    continuum: str | None = None


def critical_points(eps: int = 1) -> CriticalSet:
    """Stationary solutions for the given normalization.

    eps=+1 gives the two saddles (+-1/2, 0); eps=-1 has no critical points;
    eps=0 degenerates to the whole line {H=0}, reported as a continuum.
    """
    _check_eps(eps)
    if eps == 1:
        return CriticalSet((PhasePoint(0.5, 0.0), PhasePoint(-0.5, 0.0)))
    if eps == -1:
        return CriticalSet(())
    return CriticalSet((), continuum="line H=0")


@dataclass(frozen=True)
class Jacobian2:
    """2x2 Jacobian of the vector field."""

    a11: float
    a12: float
    a21: float
    a22: float

    def as_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])

    def determinant(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    def trace(self) -> float:
        return self.a11 + self.a22


def linearize(p) -> Jacobian2:
    """Jacobian [[F-4H, H], [2F-4H, 2H]] at ``p``.

    Its determinant is -4H^2 <= 0 identically, so every critical point of
    the eps=+1 system is a saddle.
    """
    H, F = p
    return Jacobian2(F - 4.0 * H, H, 2.0 * F - 4.0 * H, 2.0 * H)


class EigenPair(NamedTuple):
    value: float
    vector: np.ndarray


def eigen_saddle(j: Jacobian2) -> tuple[EigenPair, EigenPair]:
    """Eigenvalue/eigenvector pairs of ``j``, sorted by descending eigenvalue.

    Requires real, distinct eigenvalues.  Eigenvectors are normalized to
    first component 1 when possible, otherwise to second component 1.
    """
    tr = j.trace()
    det = j.determinant()
    disc = tr * tr - 4.0 * det
    if disc <= 0.0:
        raise ValueError("eigenvalues are complex or repeated")
    root = math.sqrt(disc)
    pairs = []
    for lam in ((tr + root) / 2.0, (tr - root) / 2.0):
        # rows of (A - lam I) are proportional; use the better-conditioned one
        rows = [(j.a11 - lam, j.a12), (j.a21, j.a22 - lam)]
        a, b = max(rows, key=lambda row: math.hypot(*row))
        v = np.array([b, -a])  # solves a*v0 + b*v1 = 0
        if abs(v[0]) >= 1e-300:
            v = v / v[0]
        else:
            v = v / v[1]
        pairs.append(EigenPair(lam, v))
    return pairs[0], pairs[1]


@dataclass(frozen=True)
class IntegratorControls:
    """Tolerances, range and stop predicates for the adaptive integrator."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    r_min: float = -50.0
    r_max: float = 50.0
    h_floor: float | None = None       # stop when H drops below this
    f_ceiling: float | None = None     # stop when |F| exceeds this

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if not self.r_min < self.r_max:
            raise ValueError("require r_min < r_max")


@dataclass(frozen=True)
class _Leg:
    """One dense-output solution piece; raw solver time = r + shift."""

    r_lo: float
    r_hi: float
    shift: float
    sol: object  # scipy OdeSolution


@dataclass
class Trajectory:
    """A computed orbit: samples at the accepted steps plus dense output.

    ``r`` is strictly increasing.  ``sigma`` is the transported curvature
    state -(H' + H^2) when it was tracked, else None.
    """

    r: np.ndarray
    H: np.ndarray
    F: np.ndarray
    sigma: np.ndarray | None
    eps: int
    rel_tol: float
    abs_tol: float
    termination: str
    legs: tuple[_Leg, ...]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if np.any(np.diff(self.r) <= 0):
            raise ValueError("trajectory samples must be strictly increasing in r")
        for arr in (self.r, self.H, self.F, self.sigma):
            if arr is not None:
                arr.setflags(write=False)

    @property
    def r_lo(self) -> float:
        return float(self.r[0])

    @property
    def r_hi(self) -> float:
        return float(self.r[-1])

    def state_at(self, r) -> np.ndarray:
        """Dense-output states at ``r``; shape (ncomp, n) or (ncomp,)."""
        rq = np.asarray(r, dtype=float)
        scalar = rq.ndim == 0
        rq = np.atleast_1d(rq)
        if rq.size and (rq.min() < self.r_lo - 1e-9 or rq.max() > self.r_hi + 1e-9):
            raise ValueError(
                f"r range [{rq.min()}, {rq.max()}] outside computed "
                f"[{self.r_lo}, {self.r_hi}]")
        ncomp = 2 if self.sigma is None else 3
        out = np.empty((ncomp, rq.size))
        done = np.zeros(rq.size, dtype=bool)
        for leg in self.legs:
            m = ~done & (rq <= leg.r_hi + 1e-12)
            if np.any(m):
                out[:, m] = leg.sol(rq[m] + leg.shift)[:ncomp]
                done |= m
        if not np.all(done):  # numerical edge: clamp to last leg
            leg = self.legs[-1]
            m = ~done
            out[:, m] = leg.sol(np.clip(rq[m] + leg.shift,
                                        leg.r_lo + leg.shift,
                                        leg.r_hi + leg.shift))[:ncomp]
        return out[:, 0] if scalar else out

    def dense_grid(self, n: int) -> np.ndarray:
        """Uniform r-grid over the computed range (endpoints included)."""
        return np.linspace(self.r_lo, self.r_hi, int(n))

    def r_at_F(self, target: float) -> float:
        """First r at which F crosses ``target`` (dense-output bisection)."""
        from scipy.optimize import brentq

        g = self.F - target
        idx = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) <= 0)[0]
        if len(idx) == 0:
            raise ValueError(f"F never reaches {target} on the computed range")
        i = idx[0]
        if g[i] == 0.0:
            return float(self.r[i])
        return float(brentq(lambda rr: float(self.state_at(rr)[1]) - target,
                            self.r[i], self.r[i + 1], xtol=1e-12, rtol=1e-15))


def _sigma_init(H: float, F: float, eps: int) -> float:
    dH = H * F - 2.0 * H * H + 0.5 * eps
    return -(dH + H * H)


def _make_rhs(eps: int, track_sigma: bool) -> Callable:
    half = 0.5 * eps
    if track_sigma:
        def rhs(r, y):
            H, F, sig = y
            c = -2.0 * H * H + half
            return (H * F + c, 2.0 * H * F + c, (F - H) * sig - H ** 3)
    else:
        def rhs(r, y):
            H, F = y
            c = -2.0 * H * H + half
            return (H * F + c, 2.0 * H * F + c)
    return rhs


def _solve(rhs, y0, span, rel_tol, abs_tol, max_step, events=None):
    sol = solve_ivp(rhs, span, y0, method="DOP853", dense_output=True,
                    rtol=rel_tol, atol=abs_tol, max_step=max_step,
                    events=events)
    if sol.status == -1 or not np.all(np.isfinite(sol.y)):
        raise IntegrationError(sol.message)
    return sol


def integrate(start, r0: float, controls: IntegratorControls,
              eps: int = 1, direction: str = "forward",
              track_sigma: bool = True) -> Trajectory:
    """Integrate the system from ``start`` at r = r0.

    Forward runs extend to ``controls.r_max``, backward runs to
    ``controls.r_min``; a stop predicate (H floor, |F| ceiling) may end the
    run earlier, and the reason is recorded in ``termination``.
    """
    _check_eps(eps)
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    H0, F0 = float(start[0]), float(start[1])
    y0 = [H0, F0, _sigma_init(H0, F0, eps)] if track_sigma else [H0, F0]
    r_end = controls.r_max if direction == "forward" else controls.r_min
    if not math.isfinite(r_end):
        raise ValueError("integration endpoint must be finite")

    events = []
    names = []
    if controls.h_floor is not None:
        ev = lambda r, y: y[0] - controls.h_floor
        ev.terminal, ev.direction = True, -1
        events.append(ev)
        names.append("h_floor")
    if controls.f_ceiling is not None:
        ev = lambda r, y: abs(y[1]) - controls.f_ceiling
        ev.terminal, ev.direction = True, 1
        events.append(ev)
        names.append("f_ceiling")

    atol = [controls.abs_tol] * 2 + ([1e-21] if track_sigma else [])
    sol = _solve(_make_rhs(eps, track_sigma), y0, (r0, r_end),
                 controls.rel_tol, atol, controls.max_step, events or None)
    termination = "r_end"
    if sol.status == 1:
        hit = [i for i, te in enumerate(sol.t_events) if len(te)]
        termination = names[hit[0]] if hit else "event"

    ts, ys = sol.t, sol.y
    if direction == "backward":
        ts, ys = ts[::-1], ys[:, ::-1]
    leg = _Leg(float(ts[0]), float(ts[-1]), 0.0, sol.sol)
    return Trajectory(
        r=ts.copy(), H=ys[0].copy(), F=ys[1].copy(),
        sigma=ys[2].copy() if track_sigma else None,
        eps=eps, rel_tol=controls.rel_tol, abs_tol=controls.abs_tol,
        termination=termination, legs=(leg,),
        meta={"r0": r0, "direction": direction},
    )
