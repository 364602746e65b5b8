"""Metric profiles, curvature data, soliton identities and asymptotics.

For an orbit (H(r), F(r)) of the expanding system the metric data are

    h(r) = h_anchor + int_0^r H,      f(r) = f0 + int_{-inf}^r F,

and all curvatures are rational in (H, H'):

    sec_xy = -H^2                 R       = -4H' - 6H^2
    sec_rx = -(H^2 + H')          Ric_rr  = -2(H^2 + H')
    Ric_tangential = -(H' + 2H^2) (tangential coefficient over e^{2h})
    laplace f = 2HF + F'          |grad f|^2 = F^2

Derivatives are always taken from the vector field, never from finite
differences, so the identities

    R + laplace f + 3/2 = 0
    R' = 2 Ric_rr F
    d/dr (R + F^2 + f) = 0

hold exactly up to arithmetic rounding and integration drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .phase_core import Trajectory

__all__ = [
    "MetricProfile", "CurvatureTable", "SolitonResiduals",
    "RatioEntry", "AsymptoticsReport",
    "reconstruct_profiles", "curvatures", "soliton_residuals",
    "check_asymptotics",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(6)


class _Cumulative:
    """Cumulative integral of one dense-output component of a trajectory.

    Gauss-Legendre on each accepted step integrates the dense interpolant
    essentially exactly, so the result carries the integrator's accuracy.
    """

    def __init__(self, traj: Trajectory, component: int):
        self._traj = traj
        self._comp = component
        r = traj.r
        mid = 0.5 * (r[:-1] + r[1:])
        half = 0.5 * np.diff(r)
        nodes = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
        vals = traj.state_at(nodes)[component].reshape(-1, len(_GL_NODES))
        steps = half * (vals @ _GL_WEIGHTS)
        self.nodes = r
        self.cum = np.concatenate([[0.0], np.cumsum(steps)])

    def value_at(self, r) -> np.ndarray:
        """Integral from the first sample node to each query point."""
        rq = np.atleast_1d(np.asarray(r, dtype=float))
        idx = np.clip(np.searchsorted(self.nodes, rq) - 1, 0, len(self.nodes) - 2)
        out = np.empty_like(rq)
        for k, (i, rv) in enumerate(zip(idx, rq)):
            a = self.nodes[i]
            half = 0.5 * (rv - a)
            pts = a + half + half * _GL_NODES
            vals = self._traj.state_at(pts)[self._comp]
            out[k] = self.cum[i] + half * float(vals @ _GL_WEIGHTS)
        return out if np.ndim(r) else float(out[0])


def _fit_tail_alpha(traj: Trajectory, lo: float = 1e-7, hi: float = 1e-4) -> float:
    """Exponential rate of |F| in the near-saddle window lo <= |F| <= hi."""
    m = (np.abs(traj.F) >= lo) & (np.abs(traj.F) <= hi)
    if m.sum() < 8:
        m = (np.abs(traj.F) >= lo / 100) & (np.abs(traj.F) <= hi * 100)
    if m.sum() < 2:
        raise ValueError("not enough near-saddle samples to fit the tail rate")
    slope = np.polyfit(traj.r[m], np.log(np.abs(traj.F[m])), 1)[0]
    return float(slope)


@dataclass
class MetricProfile:
    """Co-sampled (r, h, f) for a trajectory, plus the gauge anchors.

    ``f0`` is the prescribed limit of f at the cusp end (free additive
    gauge); ``cusp_h_offset`` is the measured limit of h - r/2 there.  For
    non-separatrix orbits there is no cusp end: f is anchored directly at
    the first sample and the cusp fields are None.
    """

    r: np.ndarray
    h: np.ndarray
    f: np.ndarray
    h_anchor: float
    f0: float
    tail_alpha: float | None
    f_tail: float | None
    cusp_h_offset: float | None
    _h_cum: _Cumulative = field(repr=False, default=None)
    _f_cum: _Cumulative = field(repr=False, default=None)
    _h_base: float = field(repr=False, default=0.0)
    _f_base: float = field(repr=False, default=0.0)

    def h_at(self, r):
        return self._h_base + self._h_cum.value_at(r)

    def f_at(self, r):
        return self._f_base + self._f_cum.value_at(r)


def reconstruct_profiles(traj: Trajectory, h_anchor: float = 0.0,
                         f0: float = 0.0) -> MetricProfile:
    """Quadrature of H and F along ``traj`` into the profile functions.

    h is anchored by h(0) = h_anchor.  For a separatrix trajectory, f is
    anchored through the cusp limit: f(r_lo) = f0 + tail, where the tail
    int_{-inf}^{r_lo} F is estimated as F(r_lo)/alpha from the fitted
    exponential decay rate alpha.  The analogous tail for H - 1/2 yields
    the cusp offset c1 = lim (h - r/2).
    """
    if np.any(np.diff(traj.r) <= 0):
        raise ValueError("trajectory must be strictly monotone in r")
    h_cum = _Cumulative(traj, 0)
    f_cum = _Cumulative(traj, 1)

    r = traj.r
    if r[0] <= 0.0 <= r[-1]:
        h_base = h_anchor - h_cum.value_at(0.0)
    else:
        h_base = h_anchor - h_cum.value_at(r[0])
    h = h_base + h_cum.cum

    is_sep = traj.meta.get("kind") == "separatrix"
    if is_sep:
        alpha = _fit_tail_alpha(traj)
        f_tail = float(traj.F[0]) / alpha
        f_base = f0 + f_tail
        h_tail = (float(traj.H[0]) - 0.5) / alpha
        cusp_h_offset = float(h[0] - r[0] / 2.0 - h_tail)
    else:
        alpha = None
        f_tail = None
        f_base = f0
        cusp_h_offset = None
    f = f_base + f_cum.cum

    return MetricProfile(
        r=r, h=h, f=f, h_anchor=h_anchor, f0=f0,
        tail_alpha=alpha, f_tail=f_tail, cusp_h_offset=cusp_h_offset,
        _h_cum=h_cum, _f_cum=f_cum, _h_base=h_base, _f_base=f_base,
    )


@dataclass
class CurvatureTable:
    """Curvature data along a trajectory, one row per sample."""

    r: np.ndarray
    sec_xy: np.ndarray
    sec_rx: np.ndarray
    scalar: np.ndarray          # scalar curvature R
    ric_rr: np.ndarray
    ric_tangential: np.ndarray
    laplace_f: np.ndarray
    grad_f_sq: np.ndarray

    def columns(self) -> dict[str, np.ndarray]:
        return {
            "r": self.r, "sec_xy": self.sec_xy, "sec_rx": self.sec_rx,
            "R": self.scalar, "Ric_rr": self.ric_rr,
            "Ric_tangential": self.ric_tangential,
            "laplace_f": self.laplace_f, "grad_f_sq": self.grad_f_sq,
        }


def curvatures(traj: Trajectory, r=None) -> CurvatureTable:
    """Curvatures along ``traj`` (at its samples, or at a given r grid).

    When the trajectory carries the transported curvature state, that is
    used for the mixed curvature and everything derived from it; otherwise
    the direct expressions in (H, H') are used, whose accuracy degrades by
    cancellation once |sec_rx| falls below the integration error.
    """
    if traj.eps != 1:
        raise ValueError("curvature formulas assume the expanding normalization")
    if r is None:
        rr, H, F = traj.r, traj.H, traj.F
        sig = traj.sigma
    else:
        rr = np.asarray(r, dtype=float)
        states = traj.state_at(rr)
        H, F = states[0], states[1]
        sig = states[2] if states.shape[0] > 2 else None
    dH = H * F - 2.0 * H ** 2 + 0.5
    dF = 2.0 * H * F - 2.0 * H ** 2 + 0.5
    if sig is None:
        sig = -(H ** 2 + dH)
    return CurvatureTable(
        r=rr,
        sec_xy=-H ** 2,
        sec_rx=sig,
        scalar=-2.0 * H ** 2 + 4.0 * sig,
        ric_rr=2.0 * sig,
        ric_tangential=sig - H ** 2,
        laplace_f=2.0 * H * F + dF,
        grad_f_sq=F ** 2,
    )


@dataclass
class SolitonResiduals:
    """Pointwise residuals of the three soliton identities along an orbit.

    ``identity_scalar`` and ``identity_gradient`` are algebraic in (H, F)
    and vanish identically; ``conserved`` is Q = R + F^2 + f, whose drift
    relative to Q(0) measures integration plus quadrature error.
    """

    r: np.ndarray
    identity_scalar: np.ndarray      # R + laplace f + 3/2
    identity_gradient: np.ndarray    # R' - 2 Ric_rr F
    conserved: np.ndarray            # Q = R + F^2 + f
    q_reference: float

    @property
    def q_drift(self) -> np.ndarray:
        return self.conserved - self.q_reference


def soliton_residuals(traj: Trajectory, profile: MetricProfile) -> SolitonResiduals:
    """Evaluate the identity residuals on the trajectory samples.

    The first two residuals use the direct field expressions, so they test
    the algebra of the implemented formulas independently of the
    integration; the conserved quantity uses the transported curvature for
    R so its drift reflects only integration and quadrature error.
    """
    if profile.r is not traj.r and not np.array_equal(profile.r, traj.r):
        raise ValueError("profile must be co-sampled with the trajectory")
    H, F = traj.H, traj.F
    dH = H * F - 2.0 * H ** 2 + 0.5
    dF = 2.0 * H * F - 2.0 * H ** 2 + 0.5
    ddH = dH * F + H * dF - 4.0 * H * dH
    R_direct = -4.0 * dH - 6.0 * H ** 2
    res1 = R_direct + (2.0 * H * F + dF) + 1.5
    Rp = -4.0 * ddH - 12.0 * H * dH
    res2 = Rp - 2.0 * (-2.0 * (H ** 2 + dH)) * F

    sig = traj.sigma if traj.sigma is not None else -(H ** 2 + dH)
    R_acc = -2.0 * H ** 2 + 4.0 * sig
    Q = R_acc + F ** 2 + profile.f
    if traj.r[0] <= 0.0 <= traj.r[-1]:
        q_ref = float(np.interp(0.0, traj.r, Q))
    else:
        q_ref = float(Q[0])
    return SolitonResiduals(r=traj.r, identity_scalar=res1,
                            identity_gradient=res2, conserved=Q,
                            q_reference=q_ref)


@dataclass
class RatioEntry:
    """One measured asymptotic ratio with its named target."""

    name: str
    r_at: float
    measured: float
    target: float
    ok: bool = True
    note: str = ""

    @property
    def residual(self) -> float:
        return self.measured - self.target


@dataclass
class AsymptoticsReport:
    """Measured asymptotic laws at one end of the manifold."""

    end: str                       # "cusp" (r -> -inf) or "flat" (r -> +inf)
    entries: list[RatioEntry]
    alpha_fit: float | None = None
    extras: dict = field(default_factory=dict)

    def entry(self, name: str) -> RatioEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


_SQRT5 = math.sqrt(5.0)


def check_asymptotics(traj: Trajectory, profile: MetricProfile,
                      r_cusp: float = -30.0, r_flat: float = 500.0,
                      trend_points: int = 9) -> tuple[AsymptoticsReport, AsymptoticsReport]:
    """Measure the asymptotic laws at both ends of the separatrix.

    Cusp end: h ~ r/2, f -> f0, and the deviations decay along the saddle
    eigendirection, so (f - f0)/(h - r/2 - c1) tends to the eigenvector
    slope 3 + sqrt5 (its reciprocal is reported as well); |F| decays like
    e^{alpha r}.  Flat end: H ~ 1/r, F ~ -r/2, HF -> -1/2, F' -> -1/2,
    h ~ ln r, f ~ -r^2/4, H/F -> 0.
    """
    if profile.cusp_h_offset is None:
        raise ValueError("asymptotics need a separatrix profile")
    entries_c: list[RatioEntry] = []
    slope = 3.0 + _SQRT5

    def cusp_entry(name, r_at, measured, target, ok=True, note=""):
        entries_c.append(RatioEntry(name, r_at, measured, target, ok, note))

    if r_cusp < traj.r_lo:
        for name, tgt in (("h_over_half_r", 1.0), ("f_dev_over_h_dev", slope),
                          ("h_dev_over_f_dev", 1.0 / slope)):
            cusp_entry(name, r_cusp, math.nan, tgt, ok=False,
                       note="insufficient range")
        alpha_report = None
    else:
        h_c = float(profile.h_at(r_cusp))
        f_c = float(profile.f_at(r_cusp))
        h_dev = h_c - r_cusp / 2.0 - profile.cusp_h_offset
        f_dev = f_c - profile.f0
        cusp_entry("h_over_half_r", r_cusp, h_c / (r_cusp / 2.0), 1.0)
        cusp_entry("f_dev_over_h_dev", r_cusp, f_dev / h_dev, slope)
        cusp_entry("h_dev_over_f_dev", r_cusp, h_dev / f_dev, 1.0 / slope)
        m = (traj.r >= r_cusp) & (traj.r <= r_cusp + 20.0) & (traj.F < 0)
        alpha_report = float(np.polyfit(traj.r[m],
                                        np.log(-traj.F[m]), 1)[0]) if m.sum() > 2 else None
        if alpha_report is not None:
            cusp_entry("log_F_slope", r_cusp, alpha_report, (-1.0 + _SQRT5) / 2.0)

    cusp = AsymptoticsReport("cusp", entries_c, alpha_fit=alpha_report,
                             extras={"f0": profile.f0,
                                     "cusp_h_offset": profile.cusp_h_offset,
                                     "tail_alpha": profile.tail_alpha})

    entries_f: list[RatioEntry] = []

    def flat_entry(name, r_at, measured, target, ok=True, note=""):
        entries_f.append(RatioEntry(name, r_at, measured, target, ok, note))

    r_hi = traj.r_hi
    if r_flat > r_hi:
        for name, tgt in (("H_times_r", 1.0), ("HF", -0.5), ("F_prime", -0.5),
                          ("F_over_neg_half_r", 1.0)):
            flat_entry(name, r_flat, math.nan, tgt, ok=False,
                       note="insufficient range")
        trend = {}
    else:
        Hp, Fp = traj.state_at(r_flat)[:2]
        flat_entry("H_times_r", r_flat, float(Hp * r_flat), 1.0)
        flat_entry("HF", r_flat, float(Hp * Fp), -0.5)
        flat_entry("F_prime", r_flat,
                   float(2.0 * Hp * Fp - 2.0 * Hp ** 2 + 0.5), -0.5)
        flat_entry("F_over_neg_half_r", r_flat, float(Fp / (-r_flat / 2.0)), 1.0)
        rg = np.geomspace(r_hi / 10.0, r_hi, trend_points)
        Hg = traj.state_at(rg)[0]
        trend = {"trend_r": rg, "trend_H_times_r_minus_1": np.abs(Hg * rg - 1.0)}

    Ht, Ft = float(traj.H[-1]), float(traj.F[-1])
    flat_entry("H_over_F", r_hi, Ht / Ft, 0.0)
    if r_hi > 1.0:
        flat_entry("h_over_log_r", r_hi,
                   float(profile.h[-1] / math.log(r_hi)), 1.0)
        flat_entry("f_over_neg_quarter_r2", r_hi,
                   float(profile.f[-1] / (-r_hi ** 2 / 4.0)), 1.0)

    flat = AsymptoticsReport("flat", entries_f, extras=trend)
    return cusp, flat
