"""Shooting for the bounded-curvature orbit and its barrier certificates.

The orbit S leaves the saddle (1/2, 0) along the unstable eigendirection
(1, 3+sqrt5) into the region {H < 1/2, F < 0} and ends on the vertical
asymptote H -> 0.  It is trapped between a family of explicit hyperbolas:
the isoclines where the field is vertical, horizontal or of fixed oblique
direction, plus the two curvature-sign curves {F' = 0} and
{H^2 - H F - 1/2 = 0}.  Each curve comes with a closed-form signed normal
product that certifies one-way crossing; scanning it along S at dense
resolution is the numerical counterpart of the trapping argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .phase_core import (
    SADDLE, SLOPE_UNSTABLE, IntegratorControls, IntegrationError, Trajectory,
    _Leg, _make_rhs, _sigma_init, _solve,
)

# The transversal contraction rate along the orbit grows like r/2, so an
# explicit method becomes stability-limited beyond moderate r.  The far
# forward leg therefore switches to an L-stable implicit pair; its step is
# capped so the dense interpolant keeps the accuracy the far-field scans
# need.
_STIFF_SWITCH = 150.0      # calibrated r at which the far leg takes over
_STIFF_MAX_STEP = 5.0


def _stiff_jacobian(r, y):
    H, F, sig = y
    return [[F - 4.0 * H, H, 0.0],
            [2.0 * F - 4.0 * H, 2.0 * H, 0.0],
            [-sig - 3.0 * H ** 2, sig, F - H]]

__all__ = [
    "ShootConfig", "BarrierReport", "ShootError",
    "isocline_F", "isocline_slopes_at_saddle", "oblique_barrier_margin",
    "shoot_separatrix", "certify_barriers", "BARRIER_CURVES",
]

ISOCLINE_KINDS = ("vertical", "horizontal", "oblique")

#: factor multiplying the base hyperbola 2H - 1/(2H) for each isocline
_ISOCLINE_FACTOR = {"vertical": 1.0, "horizontal": 0.5, "oblique": 2.0}


class ShootError(RuntimeError):
    """The shot orbit left the band 0 < H < 1/2 (bad offset or direction)."""


def isocline_F(kind: str, H):
    """F-value of the named isocline at H (H != 0).

    vertical {H'=0}:    F = 2H - 1/(2H)
    horizontal {F'=0}:  F = (1/2)(2H - 1/(2H))
    oblique (field parallel to (1,3)): F = 2(2H - 1/(2H))
    """
    if kind not in ISOCLINE_KINDS:
        raise ValueError(f"unknown isocline kind {kind!r}")
    H = np.asarray(H, dtype=float)
    if np.any(H == 0.0):
        raise ValueError("isoclines are undefined at H = 0")
    val = _ISOCLINE_FACTOR[kind] * (2.0 * H - 1.0 / (2.0 * H))
    return float(val) if val.ndim == 0 else val


def isocline_slopes_at_saddle() -> dict[str, float]:
    """Tangent slopes dF/dH of the three isoclines at the saddle (1/2, 0)."""
    return {"vertical": 4.0, "horizontal": 2.0, "oblique": 8.0}


def oblique_barrier_margin(H):
    """Signed normal product on the oblique isocline: -2H^2 + 1/(2H^2) - 3/2.

    Positive for 0 < H < 1/2, which makes the oblique isocline a one-way
    barrier below the orbit.
    """
    H = np.asarray(H, dtype=float)
    if np.any(H == 0.0):
        raise ValueError("margin undefined at H = 0")
    val = -2.0 * H ** 2 + 1.0 / (2.0 * H ** 2) - 1.5
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class ShootConfig:
    """Parameters of the saddle shot.

    ``offset`` is the distance along the unit unstable eigenvector;
    ``direction=-1`` selects the branch entering {H < 1/2, F < 0}.
    ``controls.r_max`` is the forward extent in the calibrated parameter
    (r = 0 at F = -1); the backward leg stops on the ``saddle_ball``.
    """

    offset: float = 1e-8
    direction: int = -1
    controls: IntegratorControls = field(default_factory=lambda: IntegratorControls(
        r_min=-60.0, r_max=2000.0, h_floor=1e-6))
    saddle_ball: float = 1e-9

    def __post_init__(self):
        if self.offset <= 0:
            raise ValueError("offset must be positive")
        if self.direction not in (-1, 1):
            raise ValueError("direction must be -1 or +1")


def _band_guard_events(h_floor):
    out_hi = lambda r, y: y[0] - 0.5
    out_hi.terminal, out_hi.direction = True, 1
    out_lo = lambda r, y: y[0] - (0.0 if h_floor is None else h_floor)
    out_lo.terminal, out_lo.direction = True, -1
    return out_hi, out_lo


def shoot_separatrix(cfg: ShootConfig | None = None) -> Trajectory:
    """Compute the bounded orbit S by shooting from the saddle.

    Starts at (1/2, 0) + direction * offset * (1, 3+sqrt5)/|(1, 3+sqrt5)|,
    integrates forward until H drops below the configured floor or the
    forward extent is reached, and backward until the state enters the
    ``saddle_ball`` around (1/2, 0).  The parameter is calibrated so that
    r = 0 at the unique point with F = -1 (the system is autonomous, so S
    is defined only up to translation; F is strictly monotone along S,
    which makes the anchor unique).
    """
    cfg = cfg or ShootConfig()
    ctl = cfg.controls
    u = np.array([1.0, SLOPE_UNSTABLE])
    u /= np.linalg.norm(u)
    start = np.array(SADDLE) + cfg.direction * cfg.offset * u
    if not 0.0 < start[0] < 0.5:
        raise ShootError("shot starts outside the band 0 < H < 1/2; "
                         "check offset/direction")
    y0 = [start[0], start[1], _sigma_init(start[0], start[1], 1)]
    rhs = _make_rhs(1, track_sigma=True)
    atol = [ctl.abs_tol, ctl.abs_tol, 1e-21]

    # probe: raw parameter distance from the shot point to F = -1
    anchor = lambda r, y: y[1] + 1.0
    anchor.terminal, anchor.direction = True, -1
    guard_hi, guard_lo = _band_guard_events(ctl.h_floor)
    probe = _solve(rhs, y0, (0.0, 1e4), ctl.rel_tol, atol, ctl.max_step,
                   events=[anchor, guard_hi])
    if len(probe.t_events[1]):
        raise ShootError("orbit left the band H < 1/2; check offset/direction")
    if not len(probe.t_events[0]):
        raise ShootError("orbit never reached the calibration anchor F = -1")
    r_star = float(probe.t_events[0][0])

    # forward legs out to the requested calibrated extent: explicit pair on
    # the near region, implicit pair once the contraction rate is large
    raw_end = r_star + ctl.r_max
    raw_split = min(r_star + _STIFF_SWITCH, raw_end)
    fwd = _solve(rhs, y0, (0.0, raw_split), ctl.rel_tol, atol,
                 ctl.max_step, events=[guard_hi, guard_lo])
    if len(fwd.t_events[0]):
        raise ShootError("orbit left the band H < 1/2; check offset/direction")
    termination = "h_floor" if len(fwd.t_events[1]) else "r_max"
    far = None
    if fwd.status != 1 and raw_end > raw_split:
        far = solve_ivp(rhs, (raw_split, raw_end), fwd.y[:, -1],
                        method="Radau", jac=_stiff_jacobian,
                        dense_output=True, rtol=ctl.rel_tol, atol=atol,
                        max_step=min(ctl.max_step, _STIFF_MAX_STEP),
                        events=[guard_hi, guard_lo])
        if far.status == -1 or not np.all(np.isfinite(far.y)):
            raise IntegrationError(far.message)
        if len(far.t_events[0]):
            raise ShootError("orbit left the band H < 1/2; check offset/direction")
        termination = "h_floor" if len(far.t_events[1]) else "r_max"

    # backward leg, stopped on the saddle ball; tighter absolute control
    # because transversal errors are amplified by the reverse-time dynamics
    ball = lambda r, y: math.hypot(y[0] - 0.5, y[1]) - cfg.saddle_ball
    ball.terminal, ball.direction = True, -1
    atol_b = [min(ctl.abs_tol, 1e-14)] * 2 + [1e-21]
    span_back = math.log(cfg.offset / cfg.saddle_ball) / 0.618 + 20.0
    bwd = _solve(rhs, y0, (0.0, -span_back), ctl.rel_tol, atol_b,
                 ctl.max_step, events=[ball])
    if not len(bwd.t_events[0]):
        raise ShootError("backward leg failed to reach the saddle ball")

    tb, yb = bwd.t[::-1], bwd.y[:, ::-1]
    tf, yf = fwd.t, fwd.y
    legs = [
        _Leg(float(tb[0] - r_star), float(-r_star), r_star, bwd.sol),
        _Leg(float(-r_star), float(tf[-1] - r_star), r_star, fwd.sol),
    ]
    pieces_t = [tb[:-1], tf]
    pieces_y = [yb[:, :-1], yf]
    if far is not None:
        pieces_t.append(far.t[1:])
        pieces_y.append(far.y[:, 1:])
        legs.append(_Leg(float(far.t[0] - r_star), float(far.t[-1] - r_star),
                         r_star, far.sol))
    r = np.concatenate(pieces_t) - r_star   # shared points dropped
    y = np.concatenate(pieces_y, axis=1)
    legs = tuple(legs)
    traj = Trajectory(
        r=r, H=y[0].copy(), F=y[1].copy(), sigma=y[2].copy(),
        eps=1, rel_tol=ctl.rel_tol, abs_tol=ctl.abs_tol,
        termination=termination, legs=legs,
        meta={
            "kind": "separatrix",
            "offset": cfg.offset,
            "direction": cfg.direction,
            "saddle_ball": cfg.saddle_ball,
            "r_star_raw": r_star,
            "backward_limit": "saddle (1/2, 0); truncated at saddle_ball",
        },
    )
    if np.any(traj.H <= 0.0) or np.any(traj.H >= 0.5):
        raise ShootError("computed samples left the band 0 < H < 1/2")
    return traj


# ---------------------------------------------------------------------------
# barrier certificates
#
# Each named curve is written as a graph F = g(H) over 0 < H < 1/2.  The
# signed product <nu, (H', F')> is evaluated *on the curve* at the H-values
# visited by S, with the normal nu oriented toward the side S occupies, so
# a positive product certifies that the flow never crosses toward S's side
# boundary:  the curve is a one-way barrier.

def _product_vertical(H):
    # nu = (g', -1); on {H'=0} this reduces to -F' = 1/2 - 2H^2
    return 0.5 - 2.0 * H ** 2


def _product_horizontal(H):
    # nu = (g', -1); on {F'=0}: g' * H' = (1 + 1/(4H^2)) (1/4 - H^2)
    return (1.0 + 1.0 / (4.0 * H ** 2)) * (0.25 - H ** 2)


def _product_oblique(H):
    return oblique_barrier_margin(H)


def _product_fprime_zero(H):
    # gradient form of the horizontal certificate: <-grad F', V> on {F'=0}
    return (2.0 * H + 1.0 / (2.0 * H)) * (0.25 - H ** 2)


def _product_sec_mixed_zero(H):
    # on {H^2 - HF - 1/2 = 0}: <-grad, V> = H^3
    return H ** 3


BARRIER_CURVES = {
    "vertical_isocline": _product_vertical,
    "horizontal_isocline": _product_horizontal,
    "oblique_isocline": _product_oblique,
    "f_prime_zero": _product_fprime_zero,
    "sec_mixed_zero": _product_sec_mixed_zero,
}

#: separation sign along S (curve value minus F, or F minus curve value)
_SIDE = {
    "vertical_isocline": ("below", "vertical"),
    "horizontal_isocline": ("below", "horizontal"),
    "oblique_isocline": ("above", "oblique"),
    "f_prime_zero": ("below", "horizontal"),
    "sec_mixed_zero": ("above", None),  # F = H - 1/(2H)
}


@dataclass
class BarrierReport:
    """Signed normal product of one named curve scanned along S."""

    curve_id: str
    r: np.ndarray
    product: np.ndarray
    min_product: float
    argmin_r: float
    side: str
    min_separation: float
    verdict: str

    @property
    def is_barrier(self) -> bool:
        return self.verdict == "barrier"


def _separation(curve_id: str, H, F, sigma=None):
    if curve_id == "sec_mixed_zero" and sigma is not None:
        # F - (H - 1/(2H)) = -sigma/H; the direct difference cancels to
        # below the orbit's accuracy at the flat end
        return -sigma / H
    side, kind = _SIDE[curve_id]
    g = isocline_F(kind, H) if kind else (H - 1.0 / (2.0 * H))
    return (g - F) if side == "below" else (F - g)


def certify_barriers(traj: Trajectory, n_samples: int = 20001) -> list[BarrierReport]:
    """Scan every named curve along ``traj`` at >= n_samples dense points.

    Verdict is "barrier" iff the minimum signed normal product is strictly
    positive over the scan.  The report also carries the minimum signed
    separation between S and the curve (positive means S never touches it).
    """
    rg = traj.dense_grid(max(int(n_samples), 10001))
    states = traj.state_at(rg)
    H, F = states[0], states[1]
    sigma = states[2] if states.shape[0] > 2 else None
    reports = []
    for cid, prod_fn in BARRIER_CURVES.items():
        prod = np.asarray(prod_fn(H))
        i = int(np.argmin(prod))
        sep = _separation(cid, H, F, sigma)
        reports.append(BarrierReport(
            curve_id=cid,
            r=rg,
            product=prod,
            min_product=float(prod[i]),
            argmin_r=float(rg[i]),
            side=_SIDE[cid][0],
            min_separation=float(np.min(sep)),
            verdict="barrier" if prod[i] > 0.0 else "violated",
        ))
    return reports
