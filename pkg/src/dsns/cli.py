"""Command-line front end: simulate / picard / selfsim / strichartz / norms.

Every run writes its artifacts plus a manifest (canonical config, content
hash, seed, library versions) into the output directory.  Exit codes:
0 success, 2 configuration error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, load_config
from .duhamel import picard_solve
from .errors import ConfigurationError, NumericsError
from .fields import Field, GridSpec, Trajectory, lp_norm
from .io import (format_cell, read_field, read_trajectory, sniff_format,
                 write_csv, write_trajectory)
from .lorentz import SampledMeasureSpace, mixed_norm, weak_lp_norm, weak_spacetime_norm
from .propagator import ModelParams, split_step_evolve
from .selfsim import (HomogeneousData, SeriesParams, cw_profile_field,
                      distribution_bound_check, homogeneous_field,
                      profile_decay_fit, scaling_residual_table)
from .strichartz import ExponentQuad, strichartz_ratio_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _write_manifest(out_dir: Path, config_items, seed=None, extra=None) -> None:
    import hashlib

    text = "\n".join(f"{k}={v}" for k, v in config_items)
    manifest = {
        "config": dict(config_items),
        "config_hash": hashlib.sha256(text.encode()).hexdigest(),
        "seed": seed,
        "versions": {
            "dsns": __version__,
            "numpy": np.__version__,
            "python": ".".join(str(v) for v in sys.version_info[:3]),
        },
    }
    if extra:
        manifest.update(extra)
    out_dir.joinpath("manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _initial_field(cfg: RunConfig) -> Field:
    spec = GridSpec(cfg.n, cfg.N, cfg.L)
    if cfg.data_kind == "gaussian":
        r2 = sum(x ** 2 for x in spec.coordinate_arrays())
        vals = cfg.eps * np.exp(-np.pi * r2 / cfg.width ** 2)
        return Field(spec, np.broadcast_to(vals, spec.shape).astype(np.complex128), 0.0)
    if cfg.data_kind == "homogeneous":
        hd = HomogeneousData(cfg.eps, cfg.alpha, cfg.core_cutoff)
        return homogeneous_field(hd, spec)
    f = read_field(cfg.data_path)
    if f.spec != spec:
        raise ConfigurationError("field file grid does not match [grid] section")
    return f


def _model(cfg: RunConfig) -> ModelParams:
    return ModelParams(cfg.delta, cfg.chi, cfg.b, cfg.m, cfg.alpha, cfg.n)


def _norm_rows(u: Trajectory, mp: ModelParams):
    p_weak = mp.alpha * (mp.n + 2) / 2.0
    rows = [("weak_spacetime", p_weak, "", "", weak_spacetime_norm(u, p_weak)),
            ("mass_initial", 2.0, "", "", lp_norm(u.slices[0], 2.0)),
            ("mass_final", 2.0, "", "", lp_norm(u.slices[-1], 2.0))]
    return rows


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    out = Path(args.out or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    u0 = _initial_field(cfg)
    mp = _model(cfg)
    u = split_step_evolve(u0, cfg.T, cfg.dt, mp, order=2, store_every=cfg.store_every)
    mass0 = lp_norm(u.slices[0], 2.0)
    mass1 = lp_norm(u.slices[-1], 2.0)
    drift = abs(mass1 - mass0) / mass0 if mass0 > 0 else 0.0
    if "trj" in cfg.formats:
        write_trajectory(out / "trajectory.dstrj", u)
    if "csv" in cfg.formats:
        write_csv(out / "norms.csv", ("norm_name", "p", "q", "r", "value"),
                  _norm_rows(u, mp))
    _write_manifest(out, cfg.canonical_items(), extra={"mass_drift": format_cell(drift)})
    if drift > 1e-8:
        print(f"mass drift {drift:g} exceeds tolerance", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_picard(args) -> int:
    cfg = load_config(args.config)
    out = Path(args.out or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    u0 = _initial_field(cfg)
    mp = _model(cfg)
    u, report = picard_solve(u0, mp, cfg.T, cfg.dt, cfg.max_iter, cfg.tol)
    rows = [(k + 1, wd, ld) for k, (wd, ld) in
            enumerate(zip(report.weak_dists, report.l2_dists))]
    if "csv" in cfg.formats:
        write_csv(out / "picard.csv", ("iter", "weak_dist", "l2_dist"), rows)
    if "trj" in cfg.formats:
        write_trajectory(out / "trajectory.dstrj", u)
    _write_manifest(out, cfg.canonical_items(), extra={
        "picard_iterates": report.iterates,
        "picard_converged": report.converged,
        "contraction_ratio": format_cell(report.contraction_ratio),
    })
    if not report.converged:
        print("picard iteration did not converge", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_selfsim(args) -> int:
    n = args.n
    spec = GridSpec(n, args.grid_n, args.box_l)
    h = max(L / N for L, N in zip(spec.L, spec.N))
    hd = HomogeneousData(args.eps, args.alpha, max(2.5 * h, args.core_cutoff))
    mp = ModelParams(1.0, 1.0, args.b, args.m, args.alpha, n)
    u0 = homogeneous_field(hd, spec)
    steps = max(8, int(round(args.time / args.dt)))
    dt = args.time / steps
    u = split_step_evolve(u0, args.time, dt, mp)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    for beta in args.beta:
        try:
            table = scaling_residual_table(u, beta, args.alpha,
                                           inner_radius=4.0 * hd.core_cutoff)
        except ValueError as err:
            print(f"beta={beta:g}: {err}", file=sys.stderr)
            continue
        rows.extend((beta, t, res) for t, res in table)
    write_csv(out / "selfsim_residual.csv", ("beta", "time", "residual"), rows)

    sp = SeriesParams(2.0 / args.alpha, n)
    profile = cw_profile_field(spec, 1.0, sp, r_floor=1.1 * np.sqrt(4.0 * sp.z_floor))
    sigma_hat = profile_decay_fit(profile, args.alpha, n)
    sigma_pred = (2.0 / args.alpha if args.alpha >= 4.0 / n else n - 2.0 / args.alpha)
    write_csv(out / "selfsim_fit.csv", ("sigma_hat", "sigma_predicted"),
              [(sigma_hat, sigma_pred)])

    free = distribution_bound_check(_free_traj(u0, args.time, dt), args.alpha, n)
    write_csv(out / "selfsim_distribution.csv", ("lambda", "distribution", "bound"),
              [(lam, meas, lam ** free.target_exponent)
               for lam, meas in zip(free.lambdas, free.measures)])
    _write_manifest(out, [("selfsim.alpha", format_cell(args.alpha)),
                          ("selfsim.eps", format_cell(args.eps)),
                          ("selfsim.n", str(n)),
                          ("selfsim.beta", ",".join(format_cell(b) for b in args.beta)),
                          ("selfsim.grid_n", str(args.grid_n)),
                          ("selfsim.box_l", format_cell(args.box_l)),
                          ("selfsim.time", format_cell(args.time)),
                          ("selfsim.dt", format_cell(dt))],
                    extra={"sigma_hat": format_cell(sigma_hat),
                           "fitted_exponent": format_cell(free.fitted_exponent)})
    return EXIT_OK


def _free_traj(u0: Field, T: float, dt: float) -> Trajectory:
    from .propagator import free_trajectory

    return free_trajectory(u0, T, dt, 1.0)


def cmd_strichartz(args) -> int:
    quad = ExponentQuad(args.q, args.r, args.qt, args.rt, args.n)
    if not quad.admissible:
        print("inadmissible exponents: " + "; ".join(quad.violations), file=sys.stderr)
        return EXIT_CONFIG
    report = strichartz_ratio_sweep(quad, args.seed, args.scales, args.samples,
                                    num_slices=args.slices)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = [(quad.q, quad.r, quad.qt, quad.rt, row.beta, row.sample,
             row.ratio_G, row.ratio_TT) for row in report.rows]
    write_csv(out / "strichartz.csv",
              ("q", "r", "qt", "rt", "beta", "sample", "ratio_G", "ratio_TTstar"), rows)
    _write_manifest(out, [("strichartz.q", format_cell(args.q)),
                          ("strichartz.r", format_cell(args.r)),
                          ("strichartz.qt", format_cell(args.qt)),
                          ("strichartz.rt", format_cell(args.rt)),
                          ("strichartz.n", str(args.n)),
                          ("strichartz.samples", str(args.samples)),
                          ("strichartz.scales", ",".join(format_cell(s) for s in args.scales)),
                          ("strichartz.slices", str(args.slices))],
                    seed=args.seed,
                    extra={"spread_G": format_cell(report.spread_G),
                           "spread_TT": format_cell(report.spread_TT)})
    if not (np.isfinite(report.spread_G) and np.isfinite(report.spread_TT)):
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_norms(args) -> int:
    kind = sniff_format(args.input)
    rows = []
    if kind == "field":
        f = read_field(args.input)
        s = SampledMeasureSpace.from_field(f)
        for p in args.p:
            rows.append(("lp", p, "", "", lp_norm(f, p)))
            rows.append(("weak_lp", p, "", "", weak_lp_norm(s, p)))
    elif kind == "trajectory":
        u = read_trajectory(args.input)
        for p in args.p:
            rows.append(("weak_spacetime", p, "", "", weak_spacetime_norm(u, p)))
        if args.q is not None and args.r is not None:
            rows.append(("mixed", "", args.q, args.r, mixed_norm(u, args.q, args.r)))
    else:
        print(f"unrecognized file format: {args.input}", file=sys.stderr)
        return EXIT_IO
    if args.out:
        write_csv(args.out, ("norm_name", "p", "q", "r", "value"), rows)
    else:
        print(",".join(("norm_name", "p", "q", "r", "value")))
        for row in rows:
            print(",".join(format_cell(v) for v in row))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ds", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="split-step run from a config file")
    sim.add_argument("--config", required=True)
    sim.add_argument("--out", default=None)
    sim.set_defaults(fn=cmd_simulate)

    pic = sub.add_parser("picard", help="fixed-point solve from a config file")
    pic.add_argument("--config", required=True)
    pic.add_argument("--out", default=None)
    pic.set_defaults(fn=cmd_picard)

    ss = sub.add_parser("selfsim", help="self-similar scaling diagnostics")
    ss.add_argument("--alpha", type=float, required=True)
    ss.add_argument("--eps", type=float, required=True)
    ss.add_argument("--n", type=int, required=True)
    ss.add_argument("--beta", type=float, nargs="*", default=[1.0, 2.0])
    ss.add_argument("--b", type=float, default=1.0)
    ss.add_argument("--m", type=float, default=1.0)
    ss.add_argument("--grid-n", type=int, default=128)
    ss.add_argument("--box-l", type=float, default=20.0)
    ss.add_argument("--time", type=float, default=0.064)
    ss.add_argument("--dt", type=float, default=0.002)
    ss.add_argument("--core-cutoff", type=float, default=0.0)
    ss.add_argument("--out", default="out")
    ss.set_defaults(fn=cmd_selfsim)

    st = sub.add_parser("strichartz", help="constant-stability ratio sweep")
    st.add_argument("--n", type=int, required=True)
    st.add_argument("--seed", type=int, required=True)
    st.add_argument("--samples", type=int, default=3)
    st.add_argument("--q", type=float, default=4.0)
    st.add_argument("--r", type=float, default=4.0)
    st.add_argument("--qt", type=float, default=4.0)
    st.add_argument("--rt", type=float, default=4.0)
    st.add_argument("--scales", type=float, nargs="*",
                    default=[0.25, 0.5, 1.0, 2.0, 4.0])
    st.add_argument("--slices", type=int, default=32)
    st.add_argument("--out", default="out")
    st.set_defaults(fn=cmd_strichartz)

    no = sub.add_parser("norms", help="norms of stored fields/trajectories")
    no.add_argument("--input", required=True)
    no.add_argument("--p", type=float, nargs="+", required=True)
    no.add_argument("--q", type=float, default=None)
    no.add_argument("--r", type=float, default=None)
    no.add_argument("--out", default=None)
    no.set_defaults(fn=cmd_norms)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigurationError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericsError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
