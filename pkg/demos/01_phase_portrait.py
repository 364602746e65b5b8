"""Tour of the phase plane behind the soliton profile equations.

The metric ansatz dr^2 + e^{2h}(dx^2 + dy^2) with potential f(r) turns the
gradient-soliton equation into a planar system for (H, F) = (h', f').  This
script surveys its critical points for the three normalizations, the saddle
linearization, and a few integrated orbits.
"""

import numpy as np

import cuspsoliton as cs


def main():
    print("vector field  H' = HF - 2H^2 + eps/2,  F' = 2HF - 2H^2 + eps/2")
    for eps, label in ((-1, "shrinking"), (0, "steady"), (1, "expanding")):
        crit = cs.critical_points(eps)
        desc = crit.continuum or (crit.points if crit.points else "none")
        print(f"  eps = {eps:+d} ({label:9s}): critical points {desc}")

    print("\nonly the expanding case has isolated critical points; both are "
          "saddles:")
    j = cs.linearize((0.5, 0.0))
    print(f"  Jacobian at (1/2, 0): {j.as_array().tolist()}, det {j.determinant()}")
    (l1, v1), (l2, v2) = cs.eigen_saddle(j)
    print(f"  unstable: lambda = {l1:.12f}, direction (1, {v1[1]:.12f})")
    print(f"  stable:   lambda = {l2:.12f}, direction (1, {v2[1]:.12f})")
    print(f"  (slopes are 3 +/- sqrt(5); det = -4H^2 <= 0 at every point)")

    print("\na few orbits (eps = +1), integrated with the adaptive pair:")
    ctl = cs.IntegratorControls(r_max=6.0, f_ceiling=25.0)
    for start in [(0.45, -0.2), (0.2, 0.5), (0.45, 0.3)]:
        traj = cs.integrate(start, 0.0, ctl)
        print(f"  start {start}: r in [0, {traj.r[-1]:.3f}], "
              f"end state ({traj.H[-1]:+.4f}, {traj.F[-1]:+.4f}), "
              f"stopped by {traj.termination}")

    print("\nthe stationary orbit at the saddle is the constant-curvature "
          "cusp metric:")
    st = cs.integrate((0.5, 0.0), 0.0, cs.IntegratorControls(r_max=10.0))
    print(f"  max |H - 1/2| = {np.abs(st.H - 0.5).max():.1e}, "
          f"max |F| = {np.abs(st.F).max():.1e}")

    print("\ncentral symmetry: (H, F, r) -> (-H, -F, -r) maps orbits to orbits:")
    fwd = cs.integrate((0.3, -0.4), 0.0, cs.IntegratorControls(r_min=-5, r_max=5))
    bwd = cs.integrate((-0.3, 0.4), 0.0,
                       cs.IntegratorControls(r_min=-5, r_max=5),
                       direction="backward")
    rq = np.linspace(0, 5, 11)
    gap = np.abs(fwd.state_at(rq)[:2] + bwd.state_at(-rq)[:2]).max()
    print(f"  max mismatch between mirrored orbits: {gap:.2e}")


if __name__ == "__main__":
    main()
