"""Reproducible command-line runs.

Subcommands: separatrix | curvature | asymptotics | evolve | blowup | all.
Each run writes deterministic data files (CSV with fixed 17-significant-
digit scientific notation, JSON for structured reports, optional gnuplot
two-column variants) plus a manifest with content digests.  Identical
configurations produce byte-identical data files; wall time and other
volatile facts live only in the manifest.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .phase_core import IntegratorControls, IntegrationError
from .separatrix import ShootConfig, ShootError, isocline_F, shoot_separatrix, certify_barriers
from .geometry import reconstruct_profiles, curvatures, soliton_residuals, check_asymptotics
from .evolution import find_crossings, scan_psi, scan_delta_threshold, pointwise_R_history
from .blowup import BlowupError, run_sequence

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_RANGE = 4

ENV_OUT = "CUSPSOLITON_OUT"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Flat run configuration; every key has a default."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    shoot_offset: float = 1e-8
    saddle_ball: float = 1e-9
    r_max: float = 2000.0
    r_min: float = -60.0
    h_floor: float = 1e-6
    h_anchor: float = 0.0
    f0: float = 0.0
    barrier_samples: int = 20001
    crossing_grid: int = 400001
    psi_points: int = 1200
    y_floor: float = -1e3
    t_values: tuple = (-0.7, -0.2, 0.0, 1.0, 10.0)
    t_grid_min: float = -0.9
    t_grid_max: float = -0.01
    t_grid_n: int = 24
    history_anchors_F: tuple = (-1.0, -10.0)
    history_t_max: float = 200.0
    history_points: int = 240
    r_cusp_probe: float = -30.0
    r_flat_probe: float = 500.0
    table_rows: int = 4001
    out_dir: str = "."
    format: str = "csv"

    def shoot_config(self) -> ShootConfig:
        return ShootConfig(
            offset=self.shoot_offset,
            saddle_ball=self.saddle_ball,
            controls=IntegratorControls(
                rel_tol=self.rel_tol, abs_tol=self.abs_tol,
                r_min=self.r_min, r_max=self.r_max, h_floor=self.h_floor),
        )


_TUPLE_KEYS = {"t_values", "history_anchors_F"}


def load_config(path: str | None, overrides: dict | None = None) -> RunConfig:
    """Parse a flat key=value file; unknown keys are rejected."""
    known = {f.name: f.type for f in fields(RunConfig)}
    data: dict = {}
    if path:
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, val = (p.strip() for p in line.split("=", 1))
            if key not in known:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            data[key] = val
    cfg = RunConfig()
    for key, val in data.items():
        cur = getattr(cfg, key)
        try:
            if key in _TUPLE_KEYS:
                parsed = tuple(float(v) for v in val.split(",") if v.strip())
            elif isinstance(cur, bool):
                parsed = val.lower() in ("1", "true", "yes")
            elif isinstance(cur, int):
                parsed = int(val)
            elif isinstance(cur, float):
                parsed = float(val)
            else:
                parsed = val
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {val!r}") from exc
        cfg = replace(cfg, **{key: parsed})
    if overrides:
        cfg = replace(cfg, **overrides)
    if cfg.format not in ("csv", "json", "plot"):
        raise ConfigError(f"unknown format {cfg.format!r}")
    if any(t <= -1.0 for t in cfg.t_values):
        raise ConfigError("t_values must satisfy t > -1")
    if not -1.0 < cfg.t_grid_min < cfg.t_grid_max < 0.0:
        raise ConfigError("t_grid bounds must satisfy -1 < min < max < 0")
    try:
        cfg.shoot_config()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


# ---------------------------------------------------------------------------
# deterministic writers

def _fmt(x: float) -> str:
    return f"{x:.16e}"


def write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_fmt(float(v)) for v in row) + "\n")


def write_dat(path: Path, col_a, col_b) -> None:
    with open(path, "w") as fh:
        for a, b in zip(col_a, col_b):
            fh.write(f"{_fmt(float(a))} {_fmt(float(b))}\n")


def _jsonable(obj):
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def write_json(path: Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


class Emitter:
    """Collects output files for the manifest and handles format variants."""

    def __init__(self, out_dir: Path, fmt: str, quiet: bool):
        self.out_dir = out_dir
        self.fmt = fmt
        self.quiet = quiet
        self.files: list[Path] = []

    def note(self, msg: str) -> None:
        if not self.quiet:
            print(msg)

    def table(self, name: str, header: list[str], columns) -> None:
        columns = [np.asarray(c, dtype=float) for c in columns]
        if self.fmt == "json":
            path = self.out_dir / f"{name}.json"
            write_json(path, {h: c for h, c in zip(header, columns)})
            self.files.append(path)
        elif self.fmt == "plot":
            base = header[0]
            for h, c in zip(header[1:], columns[1:]):
                path = self.out_dir / f"{name}_{base}_{h}.dat"
                write_dat(path, columns[0], c)
                self.files.append(path)
        else:
            path = self.out_dir / f"{name}.csv"
            write_csv(path, header, columns)
            self.files.append(path)

    def report(self, name: str, obj) -> None:
        path = self.out_dir / f"{name}.json"
        write_json(path, obj)
        self.files.append(path)

    def text(self, name: str, content: str) -> None:
        path = self.out_dir / f"{name}.txt"
        path.write_text(content + "\n")
        self.files.append(path)

    def manifest(self, command: str, cfg: RunConfig, wall: float) -> None:
        digests = {}
        for p in sorted(self.files):
            digests[p.name] = hashlib.sha256(p.read_bytes()).hexdigest()
        write_json(self.out_dir / "manifest.json", {
            "command": command,
            "config": {f.name: getattr(cfg, f.name) for f in fields(RunConfig)},
            "version": __version__,
            "wall_time_s": wall,
            "files": digests,
        })


# ---------------------------------------------------------------------------
# shared computation

def _thin(n_total: int, n_keep: int) -> np.ndarray:
    if n_total <= n_keep:
        return np.arange(n_total)
    return np.unique(np.linspace(0, n_total - 1, n_keep).astype(int))


class _Session:
    """Computes the orbit and derived data once per process invocation."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.traj = shoot_separatrix(cfg.shoot_config())
        self.profile = reconstruct_profiles(self.traj, cfg.h_anchor, cfg.f0)


def cmd_separatrix(session: _Session, em: Emitter) -> int:
    cfg = session.cfg
    traj, prof = session.traj, session.profile
    idx = _thin(len(traj.r), cfg.table_rows)
    em.table("separatrix", ["r", "H", "F", "h", "f"],
             [traj.r[idx], traj.H[idx], traj.F[idx], prof.h[idx], prof.f[idx]])
    Hg = np.linspace(0.02, 0.75, 400)
    em.table("isoclines", ["H", "F_vertical", "F_horizontal", "F_oblique"],
             [Hg, isocline_F("vertical", Hg), isocline_F("horizontal", Hg),
              isocline_F("oblique", Hg)])
    reports = certify_barriers(traj, cfg.barrier_samples)
    em.report("barriers", [{
        "curve": bp.curve_id, "verdict": bp.verdict,
        "min_product": bp.min_product, "argmin_r": bp.argmin_r,
        "min_separation": bp.min_separation, "samples": len(bp.r),
    } for bp in reports])
    em.note("separatrix: r in [%.3f, %.1f], %d barrier curves, all %s" % (
        traj.r_lo, traj.r_hi, len(reports),
        "barriers" if all(b.is_barrier for b in reports) else "NOT barriers"))
    return EXIT_OK


def cmd_curvature(session: _Session, em: Emitter) -> int:
    cfg = session.cfg
    table = curvatures(session.traj)
    idx = _thin(len(table.r), cfg.table_rows)
    cols = table.columns()
    em.table("curvature", list(cols), [cols[k][idx] for k in cols])
    res = soliton_residuals(session.traj, session.profile)
    m = (session.traj.r >= -30.0) & (session.traj.r <= 100.0)
    em.report("identities", {
        "max_abs_scalar_identity": float(np.abs(res.identity_scalar).max()),
        "max_abs_gradient_identity": float(np.abs(res.identity_gradient).max()),
        "max_abs_q_drift_minus30_100": float(np.abs(res.q_drift[m]).max()) if m.any() else None,
        "q_reference": res.q_reference,
    })
    em.note("curvature: R at saddle end %.6f, terminal max |curv| %.3e" % (
        table.scalar[0],
        max(abs(table.columns()[k][-1]) for k in
            ("sec_xy", "sec_rx", "R", "Ric_rr", "Ric_tangential"))))
    return EXIT_OK


def cmd_asymptotics(session: _Session, em: Emitter) -> int:
    cfg = session.cfg
    cusp, flat = check_asymptotics(session.traj, session.profile,
                                   cfg.r_cusp_probe, cfg.r_flat_probe)
    payload = {}
    insufficient = False
    for rep in (cusp, flat):
        payload[rep.end] = {
            "alpha_fit": rep.alpha_fit,
            "entries": [{
                "name": e.name, "r_at": e.r_at, "measured": e.measured,
                "target": e.target,
                "residual": None if not e.ok else e.residual,
                "ok": e.ok, "note": e.note,
            } for e in rep.entries],
            "extras": _jsonable(rep.extras),
        }
        insufficient |= any(not e.ok for e in rep.entries)
    em.report("asymptotics", payload)
    em.note("asymptotics: cusp slope ratio %.8f (target %.8f)" % (
        cusp.entry("f_dev_over_h_dev").measured,
        cusp.entry("f_dev_over_h_dev").target))
    if insufficient:
        em.note("asymptotics: some probes outside the computed range")
        return EXIT_RANGE
    return EXIT_OK


def cmd_evolve(session: _Session, em: Emitter) -> int:
    cfg = session.cfg
    traj = session.traj
    crossings = []
    for t in cfg.t_values:
        rep = find_crossings(traj, t, cfg.crossing_grid)
        crossings.append({
            "t": t, "count": rep.count, "sign_pattern": rep.sign_pattern,
            "crossings": [{"r": r, "H": H, "F": F} for r, H, F in rep.crossings],
        })
    em.report("crossings", crossings)

    scans = []
    for t in cfg.t_values:
        if t <= -1.0 or cfg.y_floor >= -1.0 / np.sqrt(t + 1.0):
            continue
        sc = scan_psi(t, cfg.y_floor, cfg.psi_points)
        scans.append({
            "t": t, "verdict": sc.verdict, "min_value": sc.min_value,
            "argmin_y": sc.argmin_y, "tail_sign": sc.tail_sign,
            "tail_match": sc.tail_match,
        })
        if em.fmt != "json":
            em.table(f"psi_t_{t:+.3f}".replace("+", "p").replace("-", "m")
                     .replace(".", "_"), ["y", "psi"], [sc.y, sc.values])
    em.report("psi_scans", scans)

    tg = np.linspace(cfg.t_grid_min, cfg.t_grid_max, cfg.t_grid_n)
    ds = scan_delta_threshold(traj, tg)
    em.report("delta", {
        "crossing_bracket": list(ds.crossing_bracket),
        "barrier_bracket": list(ds.barrier_bracket),
        "t_grid": ds.t_grid, "crossing_counts": ds.crossing_counts,
        "psi_verdicts": {f"{k:.6f}": v for k, v in ds.psi_verdicts.items()},
    })

    hist_t = np.geomspace(0.02, cfg.history_t_max + 1.0, cfg.history_points) - 1.0
    rows_t, rows_r0, rows_r, rows_R, rows_d = [], [], [], [], []
    for Fa in cfg.history_anchors_F:
        r0 = traj.r_at_F(Fa)
        h = pointwise_R_history(r0, hist_t, traj)
        rows_t.append(h.t)
        rows_r0.append(np.full_like(h.t, h.r0))
        rows_r.append(h.r_of_t)
        rows_R.append(h.R)
        rows_d.append(h.dRdt)
    em.table("histories", ["t", "r0", "r_of_t", "R", "dRdt"],
             [np.concatenate(rows_t), np.concatenate(rows_r0),
              np.concatenate(rows_r), np.concatenate(rows_R),
              np.concatenate(rows_d)])
    em.note("evolve: crossing bracket (%.5f, %.5f), barrier bracket (%.5f, %.5f)"
            % (*ds.crossing_bracket, *ds.barrier_bracket))
    return EXIT_OK


def cmd_blowup(session: _Session | None, em: Emitter) -> int:
    rep_g = run_sequence("generic")
    rep_0 = run_sequence("t0")
    em.text("blowup_generic", rep_g.to_text())
    em.text("blowup_t0", rep_0.to_text())
    em.report("blowup", {
        "generic": {
            "blowups": rep_g.n_blowups, "contact_order": rep_g.contact_order,
            "curve_abscissa": rep_g.curve_abscissa.text(),
            "translations": [[k, str(a)] for k, a in rep_g.translations],
        },
        "t0": {
            "blowups": rep_0.n_blowups, "contact_order": rep_0.contact_order,
            "curve_abscissa": str(rep_0.curve_abscissa),
            "translations": [[k, str(a)] for k, a in rep_0.translations],
        },
    })
    em.note("blowup: generic %d blow-ups (contact %d), t=0 %d blow-ups (contact %d)"
            % (rep_g.n_blowups, rep_g.contact_order,
               rep_0.n_blowups, rep_0.contact_order))
    return EXIT_OK


_COMMANDS = {
    "separatrix": cmd_separatrix,
    "curvature": cmd_curvature,
    "asymptotics": cmd_asymptotics,
    "evolve": cmd_evolve,
    "blowup": cmd_blowup,
}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cuspsoliton",
        description="Reproduce the cusped-soliton phase-plane computations.")
    ap.add_argument("command", choices=[*_COMMANDS, "all"])
    ap.add_argument("--config", metavar="PATH", default=None,
                    help="flat key=value configuration file")
    ap.add_argument("--out", metavar="DIR", default=None,
                    help=f"output directory (overrides ${ENV_OUT} and config)")
    ap.add_argument("--format", choices=["csv", "json", "plot"], default=None)
    ap.add_argument("--t", action="append", type=float, default=None,
                    help="flow time for evolve scans (repeatable)")
    ap.add_argument("--quiet", action="store_true")
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = {}
    if args.format:
        overrides["format"] = args.format
    if args.t:
        overrides["t_values"] = tuple(args.t)
    try:
        cfg = load_config(args.config, overrides)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_dir = Path(args.out or os.environ.get(ENV_OUT) or cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    em = Emitter(out_dir, cfg.format, args.quiet)

    t0 = time.monotonic()
    status = EXIT_OK
    try:
        if args.command == "blowup":
            status = cmd_blowup(None, em)
        else:
            session = _Session(cfg)
            if args.command == "all":
                for name in ("separatrix", "curvature", "asymptotics", "evolve"):
                    status = max(status, _COMMANDS[name](session, em))
                status = max(status, cmd_blowup(session, em))
            else:
                status = _COMMANDS[args.command](session, em)
    except (ShootError, IntegrationError, BlowupError, ValueError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    em.manifest(args.command, cfg, time.monotonic() - t0)
    em.note(f"wrote {len(em.files) + 1} files to {out_dir}")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
