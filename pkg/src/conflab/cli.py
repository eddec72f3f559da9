"""Command-line interface: samplers, artifact emission and the verify gate.

Configuration values come from an optional key=value file (--config) with
command-line flags taking precedence; unknown keys are rejected.  Every
artifact records the seed it was produced from, and rerunning with the same
configuration reproduces data artifacts byte for byte (the report's
wall-clock field is the one intentionally volatile value).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import acceptance
from . import brownian as br
from . import cle as cle_mod
from . import gff as gff_mod
from . import loopmodels as lm
from . import percolation as perco
from . import sle as sle_mod
from . import spin as spin_mod
from .io_utils import emit_csv, emit_json, emit_pgm, emit_svg
from .lattice import LatticeRhombus, Rect, build_domain
from .rng import RngStream

USAGE_ERROR = 2

GLOBAL_KEYS = {
    "seed": int, "samples": int, "mesh": float, "kappa": float, "c": float,
    "p": float, "q": int, "beta": float, "theta": float, "n": float,
    "lambda": float, "out": str, "format": str,
    # per-command extras
    "lattice": str, "nmax": int, "sweeps": int, "size": int, "depth": int,
    "tmax": float, "dt": float, "steps": int, "tmin": float, "cutoff": float,
}

DEFAULTS = {
    "seed": 0, "samples": 1000, "mesh": 1 / 32, "kappa": 6.0, "c": 1.0,
    "p": 0.5, "q": 2, "beta": 0.5, "theta": 0.5, "n": 1.0, "lambda": 4.0,
    "out": ".", "format": "json", "lattice": "hexagonal", "nmax": 14,
    "sweeps": 2000, "size": 16, "depth": 8, "tmax": 1.0, "dt": 1e-3,
    "steps": 1024, "tmin": 0.02, "cutoff": 4.0,
}


class UsageError(ValueError):
    pass


def parse_config_file(path: str) -> dict:
    out = {}
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{line_no}: expected key=value")
        key, val = (part.strip() for part in line.split("=", 1))
        if key not in GLOBAL_KEYS:
            raise UsageError(f"{path}:{line_no}: unknown key {key!r}")
        out[key] = GLOBAL_KEYS[key](val)
    return out


def build_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(parse_config_file(args.config))
    for key in GLOBAL_KEYS:
        flag = getattr(args, key.replace("-", "_"), None)
        if flag is not None:
            cfg[key] = GLOBAL_KEYS[key](flag)
    return cfg


def _report(command: str, cfg: dict, checks: list, artifacts: list,
            started: float) -> dict:
    return {
        "command": command,
        "config": {k: cfg[k] for k in sorted(cfg)},
        "version": __version__,
        "checks": [
            {"name": c.name, "value": c.value, "std_error": c.std_error,
             "target": c.target, "pass": bool(c.passed), "details": c.details}
            for c in checks
        ],
        "artifacts": sorted(str(a) for a in artifacts),
        "wall_clock_s": round(time.time() - started, 3),
    }


def _outpath(cfg, name):
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out / name


def _check(name, value, target, passed, se=None, details=""):
    return acceptance.CheckResult(name, value, target, passed, se, details)


# --- command handlers --------------------------------------------------------

def cmd_perco(cfg):
    rng = RngStream(cfg["seed"])
    dom = build_domain("triangular", LatticeRhombus(cfg["size"]), 1.0)
    a, b = perco.rhombus_arcs(dom, "lr")
    est = perco.estimate_crossing(dom, cfg["p"], a, b, cfg["samples"], rng)
    checks = [_check("rhombus crossing", est.mean,
                     "0.5 within 3 sigma at p=1/2",
                     abs(est.mean - 0.5) <= 3 * est.std_error + 1e-12
                     if cfg["p"] == 0.5 else True, est.std_error)]
    arts = []
    loops = perco.sample_cluster_loops(dom, rng.derive(1), p=cfg["p"])
    if loops:
        arts.append(emit_svg(_outpath(cfg, "cluster_loops.svg"),
                             [l.vertices for l in loops],
                             comment=f"seed={cfg['seed']}"))
    rows = [(k, l.length, l.area()) for k, l in enumerate(loops)]
    arts.append(emit_csv(_outpath(cfg, "cluster_loops.csv"),
                         ["loop", "length", "area"], rows,
                         comment=f"seed={cfg['seed']} p={cfg['p']} size={cfg['size']}"))
    return checks, arts


def cmd_spin(cfg):
    g = spin_mod.grid_graph(cfg["size"], cfg["size"])
    chain = spin_mod.PottsSW(g, cfg["q"], cfg["beta"], None, RngStream(cfg["seed"]))
    chain.run(cfg["sweeps"])
    spins = chain.spins.reshape(cfg["size"], cfg["size"])
    arts = [emit_pgm(_outpath(cfg, "spins.pgm"), spins,
                     comment=f"seed={cfg['seed']}")]
    h = spin_mod.hamiltonian(chain.config())
    checks = [_check("final disagreement count", h, "recorded", True, None,
                     f"q={cfg['q']} beta={cfg['beta']} seed={cfg['seed']}")]
    return checks, arts


def cmd_fk(cfg):
    g = spin_mod.grid_graph(3, 3)
    p, q = cfg["p"], cfg["q"]
    lhs, rhs, ok = spin_mod.correlation_identity_check(g, p, q, 0, 8)
    checks = [_check("F=(1-1/q)P(x<->y) on 3x3", abs(lhs - rhs),
                     "agreement to 1e-12", ok)]
    cfg_b = spin_mod.sample_fk_sw(g, p, q, cfg["sweeps"], RngStream(cfg["seed"]))
    rows = [(int(a), int(b), int(o)) for (a, b), o in
            zip(g.edge_array, cfg_b.open_edges)]
    arts = [emit_csv(_outpath(cfg, "fk_bonds.csv"), ["a", "b", "open"], rows,
                     comment=f"seed={cfg['seed']} p={p} q={q}")]
    return checks, arts


def cmd_ust(cfg):
    g = spin_mod.grid_graph(cfg["size"], cfg["size"])
    tree = spin_mod.sample_ust_wilson(g, RngStream(cfg["seed"]))
    n_open = int(tree.open_edges.sum())
    checks = [_check("spanning tree edge count", n_open,
                     f"{g.n_sites - 1}", n_open == g.n_sites - 1)]
    segs = []
    for (a, b), o in zip(g.edge_array, tree.open_edges):
        if o:
            ax, ay = a % cfg["size"], a // cfg["size"]
            bx, by = b % cfg["size"], b // cfg["size"]
            segs.append(np.array([[ax, ay], [bx, by]], float))
    arts = [emit_svg(_outpath(cfg, "ust.svg"), segs, closed=False,
                     comment=f"seed={cfg['seed']}")]
    return checks, arts


def cmd_onmodel(cfg):
    dom = lm.honeycomb_face_block(max(cfg["size"] // 8, 2), 2)
    config = lm.sample_on_model(dom, cfg["n"], cfg["theta"], cfg["sweeps"],
                                RngStream(cfg["seed"]))
    checks = [_check("loop configuration valid", None, "degrees in {0,2}",
                     config.is_valid(), None,
                     f"loops={config.loop_count()} length={config.total_length()}")]
    cycles = config.extract_cycles()
    arts = []
    if cycles:
        polys = [np.vstack([dom.positions[c], dom.positions[c[:1]]])
                 for c in cycles]
        arts.append(emit_svg(_outpath(cfg, "loopgas.svg"), polys,
                             comment=f"seed={cfg['seed']}"))
    return checks, arts


def cmd_saw(cfg):
    lattice = {"hex": "hexagonal", "tri": "triangular", "sq": "square"}.get(
        cfg["lattice"], cfg["lattice"])
    table = lm.enumerate_saw(lattice, cfg["nmax"])
    sub = table.check_submultiplicative()
    est = lm.estimate_connective_constant(table) if cfg["nmax"] >= 8 else None
    checks = [_check("submultiplicativity", None, "exact", sub)]
    if est:
        checks.append(_check("growth-constant bracket", est.root,
                             f"[{est.bracket[0]:.4f}, {est.bracket[1]:.4f}]",
                             True, None, f"ratio {est.ratio:.4f}"))
    out = _outpath(cfg, "counts.csv") if cfg["out"] else Path("counts.csv")
    table.to_csv(out)
    return checks, [out]


def cmd_loopsoup(cfg):
    soup = br.sample_loop_soup(br.DiscRegion(), cfg["c"],
                               (cfg["tmin"], cfg["cutoff"]), cfg["steps"],
                               RngStream(cfg["seed"]))
    checks = [_check("kept loop count", soup.count,
                     f"Poisson(c * window mass), mass={soup.candidate_mass:.2f}",
                     True, None, f"candidates={soup.n_candidates}")]
    arts = []
    if soup.loops:
        arts.append(emit_svg(_outpath(cfg, "loopsoup.svg"),
                             [l.xy() for l in soup.loops],
                             comment=f"seed={cfg['seed']}"))
        rows = []
        for k, l in enumerate(soup.loops):
            for t_k, z in zip(l.times, l.points):
                rows.append((k, f"{t_k:.6g}", f"{z.real:.8g}", f"{z.imag:.8g}"))
        arts.append(emit_csv(_outpath(cfg, "loopsoup.csv"),
                             ["loop", "t", "x", "y"], rows,
                             comment=f"seed={cfg['seed']} c={cfg['c']}"))
    return checks, arts


def cmd_cle(cfg):
    sampler = cle_mod.SoupBoundarySampler(c=cfg["c"],
                                          t_window=(cfg["tmin"], cfg["cutoff"]),
                                          steps=cfg["steps"])
    ensemble = sampler(br.DiscRegion(), RngStream(cfg["seed"]))
    ensemble.validate()
    checks = [_check("simple configuration invariants", len(ensemble.loops),
                     "disjoint and non-nested", True)]
    arts = []
    if ensemble.loops:
        arts.append(emit_svg(_outpath(cfg, "cle.svg"),
                             [l.vertices for l in ensemble.loops],
                             comment=f"seed={cfg['seed']}"))
        arts.append(emit_json(_outpath(cfg, "cle.json"), {
            "seed": cfg["seed"], "c": cfg["c"],
            "loops": [l.vertices.tolist() for l in ensemble.loops]}))
    return checks, arts


def cmd_sle(cfg):
    trace = sle_mod.sample_trace(cfg["kappa"], cfg["tmax"], cfg["dt"],
                                 RngStream(cfg["seed"]))
    arts = [emit_svg(_outpath(cfg, "trace.svg"), [trace.xy()], closed=False,
                     comment=f"seed={cfg['seed']}"),
            emit_csv(_outpath(cfg, "trace.csv"), ["t", "re", "im"],
                     [(f"{t:.6g}", f"{z.real:.8g}", f"{z.imag:.8g}")
                      for t, z in zip(trace.driving.times, trace.points)],
                     comment=f"seed={cfg['seed']} kappa={cfg['kappa']}")]
    checks = [_check("trace computed", len(trace.points), "grid points", True)]
    if len(trace.points) >= 2000:
        est = sle_mod.trace_dimension(cfg["kappa"],
                                      min(len(trace.points), 30000),
                                      RngStream(cfg["seed"], 1),
                                      t_max=cfg["tmax"])
        target = 1 + cfg["kappa"] / 8
        checks.append(_check("box-count dimension", est.mean,
                             f"{target:.4g} (asymptotic)", True,
                             est.std_error))
    return checks, arts


def cmd_cardy(cfg):
    return acceptance.cardy_checks(), []


def cmd_gff(cfg):
    size = cfg["size"]
    dom = build_domain("square", Rect(0, size + 1, 0, size + 1), 1.0)
    green = gff_mod.green_matrix(dom)
    field = gff_mod.sample_dgff(green, RngStream(cfg["seed"]))
    grid = np.zeros((size + 2, size + 2))
    for s, key in enumerate(dom.keys):
        grid[key[1], key[0]] = field.values[s]
    arts = [emit_pgm(_outpath(cfg, "field.pgm"), grid,
                     comment=f"seed={cfg['seed']}"),
            emit_csv(_outpath(cfg, "field.csv"), ["i", "j", "h"],
                     [(k[0], k[1], f"{v:.8g}") for k, v in
                      zip(dom.keys, field.values)],
                     comment=f"seed={cfg['seed']} size={size}")]
    i = green.index_of_site(dom.index_of((size // 2, size // 2)))
    checks = [_check("center variance (Green diagonal)",
                     green.matrix[i, i], "matches covariance law", True)]
    return checks, arts


def cmd_verify(cfg, suites):
    names = suites or sorted(acceptance.SUITES)
    for name in names:
        if name not in acceptance.SUITES:
            raise UsageError(f"unknown suite {name!r}; choose from "
                             f"{sorted(acceptance.SUITES)}")
    all_checks = []
    for name in names:
        print(f"== {name}")
        all_checks.extend(acceptance.run_suite(name))
    return all_checks, []


COMMANDS = {
    "perco": cmd_perco, "spin": cmd_spin, "fk": cmd_fk, "ust": cmd_ust,
    "onmodel": cmd_onmodel, "saw": cmd_saw, "loopsoup": cmd_loopsoup,
    "cle": cmd_cle, "sle": cmd_sle, "cardy": cmd_cardy, "gff": cmd_gff,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="conflab",
        description="Critical 2D lattice models and their continuum limits")
    parser.add_argument("command", choices=sorted(COMMANDS) + ["verify"])
    parser.add_argument("suites", nargs="*",
                        help="suite names for verify")
    parser.add_argument("--config", help="key=value configuration file")
    for key, typ in GLOBAL_KEYS.items():
        parser.add_argument(f"--{key}", type=typ, default=None)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    started = time.time()
    try:
        cfg = build_config(args)
        if args.command == "verify":
            checks, artifacts = cmd_verify(cfg, args.suites)
        else:
            if args.suites:
                raise UsageError(f"unexpected arguments: {args.suites}")
            checks, artifacts = COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    report = _report(args.command, cfg, checks, artifacts, started)
    report_path = _outpath(cfg, "report.json") if cfg["out"] else None
    if report_path:
        emit_json(report_path, report)
    if args.command != "verify":
        for c in checks:
            print(c.line())
    n_fail = sum(1 for c in checks if not c.passed)
    print(f"{len(checks) - n_fail}/{len(checks)} checks passed"
          + (f"; report: {report_path}" if report_path else ""))
    return 0 if n_fail == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
