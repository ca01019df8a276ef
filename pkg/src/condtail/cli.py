"""Command-line interface: ``condtail <command> ...``.

Every command writes CSV tables plus a ``<stem>.manifest.json`` run manifest;
``--figure PATH`` additionally renders a PNG.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import asymptotics, diagnostics, io, selection, weights
from .errors import CondTailError, DomainError, EmptyWindow, InsufficientData, SpecError
from .estimator import estimate, with_ci
from .model import MetricSpec
from .window import log_spacings, select_window


class GridError(CondTailError):
    pass


def parse_t_grid(spec: str) -> list[np.ndarray]:
    """Parse a grid of covariate points.

    ``chelmer`` -> the years x mid-month-days preset; an existing file ->
    CSV whose columns are the coordinates (header row required); otherwise
    per-axis specs joined by ``;``, each ``start:stop:num`` or ``v1,v2,...``.
    """
    spec = spec.strip()
    if spec == "chelmer":
        return selection.chelmer_grid()
    if Path(spec).is_file():
        rows = io.read_table(spec)
        pts = [np.array([float(v) for v in r.values()]) for r in rows]
    else:
        axes = []
        for token in filter(None, (s.strip() for s in spec.split(";"))):
            if ":" in token:
                a, b, n = token.split(":")
                axes.append(np.linspace(float(a), float(b), int(n)))
            else:
                axes.append([float(v) for v in token.split(",") if v.strip()])
        pts = selection.product_grid(*axes) if axes and all(len(a) for a in axes) else []
    if not pts:
        raise GridError("empty t-grid")
    return pts


def _metric(args) -> MetricSpec:
    return MetricSpec(args.metric, tuple(args.scale) if args.scale else None)


def _scheme(args):
    return weights.from_name(args.scheme, args.rho_star)


def _t_cols(p):
    return [f"t{j}" for j in range(1, p + 1)]


def _figure_sidecar(path, suffix):
    path = Path(path)
    return path.with_name(path.stem + suffix + path.suffix)


def cmd_estimate(args) -> int:
    data = io.read_dataset(args.data)
    grid = parse_t_grid(args.t_grid)
    metric = _metric(args)
    scheme = _scheme(args)
    rows, skipped = [], 0
    for t in grid:
        if t.size != data.p:
            raise GridError(f"t-grid point {t.tolist()} has dimension {t.size}, data has p={data.p}")
        try:
            win = select_window(data, t, args.h, metric)
            fit = estimate(win, args.k, scheme)
        except (EmptyWindow, InsufficientData) as exc:
            if args.skip_infeasible:
                skipped += 1
                continue
            raise CondTailError(f"infeasible grid point t={t.tolist()}: {exc}") from exc
        row = dict(zip(_t_cols(data.p), t.tolist()))
        row.update(m_t=win.m, k=args.k, gamma_hat=fit.gamma_hat)
        if args.ci is not None:
            fit = with_ci(fit, args.ci, rho=args.rho, b=args.b)
            row.update(ci_lower=fit.ci[0], ci_upper=fit.ci[1])
        if args.diagnostics:
            if fit.gamma_hat > 0 and args.k >= 5 * args.bins:
                res = diagnostics.chi2_exponential(log_spacings(win, args.k), fit.gamma_hat, args.bins)
                row.update(chi2=res.statistic, chi2_df=res.df, chi2_p=res.p_value)
            else:
                row.update(chi2=None, chi2_df=None, chi2_p=None)
        rows.append(row)
    if not rows:
        raise GridError("no feasible grid point")
    io.write_table(args.out, rows)
    outputs = [args.out]
    if args.figure:
        from . import plotting

        outputs.append(plotting.plot_estimates(rows, args.figure, data.p))
        if args.diagnostics:
            stats = [r["chi2"] for r in rows if r["chi2"] is not None]
            if stats:
                outputs.append(plotting.plot_chi2_histogram(stats, args.bins - 1,
                                                            _figure_sidecar(args.figure, "_chi2")))
    io.write_manifest(args.out, "estimate", vars_for_manifest(args), outputs=outputs)
    msg = f"wrote {len(rows)} rows to {args.out}"
    if skipped:
        msg += f" ({skipped} infeasible grid points skipped)"
    if args.diagnostics:
        ps = [r["chi2_p"] for r in rows if r["chi2_p"] is not None]
        if ps:
            msg += f"; chi2 rejections at 5%: {np.mean(np.array(ps) < 0.05):.1%}"
    print(msg)
    return 0


def _int_list(values):
    return [int(v) for v in values]


def cmd_select(args) -> int:
    data = io.read_dataset(args.data)
    grid = parse_t_grid(args.t_grid)
    metric = _metric(args)
    hs = args.h_grid or selection.default_h_candidates(data, metric)
    if args.k_grid:
        ks = _int_list(args.k_grid)
    else:
        h_max = max(hs)
        m_min = min(int(np.sum(metric.distances(data.covariates, t) <= h_max)) for t in grid)
        ks = selection.default_k_candidates(m_min)
    res = selection.select_h_k(data, grid, hs, ks, metric)
    rows = [dict(h=r.h, k=r.k, objective=r.objective if r.feasible else None,
                 feasible=int(r.feasible), worst_t=r.worst_t) for r in res.table]
    io.write_table(args.out, rows)
    outputs = [args.out]
    if args.figure:
        from . import plotting

        outputs.append(plotting.plot_selection(rows, args.figure))
    io.write_manifest(args.out, "select", vars_for_manifest(args), outputs=outputs)
    print(f"selected h={res.h!r} k={res.k} objective={res.objective!r}")
    return 0


def cmd_simulate(args) -> int:
    from . import simulate

    try:
        raw = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecError("spec", f"invalid JSON: {exc}") from None
    if args.seed is not None:
        raw["seed"] = args.seed
    spec = io.parse_sim_spec(raw)
    outputs = []
    if args.out:
        ds = simulate.generate_conditional(spec)
        io.write_dataset(ds, args.out)
        outputs.append(args.out)
    if args.report:
        mc = dict(raw.get("monte_carlo", {}))
        for key in ("t", "h", "k", "reps"):
            val = getattr(args, key)
            if val is not None:
                mc[key] = val
        missing = [key for key in ("t", "h", "k") if key not in mc]
        if missing:
            raise DomainError(f"monte_carlo report needs {', '.join(missing)} (spec or flags)")
        names = args.schemes or mc.get("schemes", ["hill", "zipf"])
        rho_star = args.rho_star if args.rho_star is not None else mc.get("rho_star")
        schemes = [weights.from_name(nm, rho_star) for nm in names]
        rep = simulate.monte_carlo_normality(spec, schemes, np.atleast_1d(mc["t"]), float(mc["h"]),
                                             int(mc["k"]), int(mc.get("reps", 1000)),
                                             metric=MetricSpec(mc.get("metric", "sup")))
        io.write_table(args.report, rep.rows())
        outputs.append(args.report)
        for s in rep.summaries:
            print(f"{s.scheme}: mean={s.mean:.5f} std={s.std:.5f} z_std={s.z_std:.3f} "
                  f"normality_p={s.normality_p:.3g}")
    if not outputs:
        raise DomainError("nothing to do: pass --out and/or --report")
    io.write_manifest(outputs[0], "simulate", vars_for_manifest(args), seed=spec.seed, outputs=outputs)
    print("wrote " + ", ".join(str(o) for o in outputs))
    return 0


def cmd_regions(args) -> int:
    res = asymptotics.region_grid(tuple(args.rho_range), tuple(args.rho_star_range),
                                  tuple(args.resolution), literal=args.literal)
    rows = []
    for r in res:
        consistent = r.area_consistent()
        rows.append(dict(
            rho=r.rho, rho_star=r.rho_star, area=r.area, half_plane=r.half_plane,
            bias_order=" < ".join(r.bias_order), var_order=" < ".join(r.var_order),
            area_agrees="" if consistent is None else int(consistent),
            **{f"abs_ab_{n}": r.abs_bias[n] for n in asymptotics.ESTIMATORS},
            **{f"av_{n}": r.variance[n] for n in asymptotics.ESTIMATORS},
        ))
    io.write_table(args.out, rows)
    outputs = [args.out]
    if args.figure:
        from . import plotting

        outputs.append(plotting.plot_regions(rows, args.figure))
    io.write_manifest(args.out, "regions", vars_for_manifest(args), outputs=outputs)
    bad = sum(1 for r in rows if r["area_agrees"] == 0)
    covered = sum(1 for r in rows if r["area_agrees"] != "")
    print(f"wrote {len(rows)} rows to {args.out}; {covered} covered, {bad} disagree with direct ordering")
    return 0


def cmd_density(args) -> int:
    schemes = [weights.from_name(args.scheme, rs) for rs in args.rho_star]
    if args.with_hill_zipf:
        schemes = [weights.hill(), weights.zipf()] + schemes
    grid, curves = asymptotics.density_curves(args.gamma, args.rho, schemes, args.k, args.b)
    rows = [dict(x=x, **{lab: float(d[i]) for lab, d in curves.items()}) for i, x in enumerate(grid)]
    io.write_table(args.out, rows)
    outputs = [args.out]
    if args.figure:
        from . import plotting

        outputs.append(plotting.plot_densities(grid, curves, args.gamma, args.figure))
    io.write_manifest(args.out, "density", vars_for_manifest(args), outputs=outputs)
    for sch in schemes:
        mean, std = asymptotics.asymptotic_law(args.gamma, args.rho, sch, args.k, args.b)
        print(f"{sch.label}: mean={mean:.5f} std={std:.5f}")
    return 0


def cmd_prepare_chelmer(args) -> int:
    counts = io.convert_daily_flow(args.raw, args.out)
    io.write_manifest(args.out, "prepare-chelmer", vars_for_manifest(args))
    print(f"wrote {counts['rows']} rows to {args.out} "
          f"(dropped {counts['leap_days']} leap days, {counts['non_positive']} bad flows)")
    return 0


def vars_for_manifest(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def _add_metric(p):
    p.add_argument("--metric", choices=["sup", "euclid"], default="sup")
    p.add_argument("--scale", type=float, nargs="+", metavar="S",
                   help="per-coordinate divisors applied before the metric")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="condtail", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="tail index over a covariate grid")
    p.add_argument("--data", required=True)
    p.add_argument("--t-grid", required=True,
                   help="'chelmer', a CSV of points, or axes like '0.1:0.9:9;1,2,3'")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--scheme", choices=["hill", "zipf", "hz", "opt"], default="zipf")
    p.add_argument("--rho-star", type=float)
    _add_metric(p)
    p.add_argument("--ci", type=float, metavar="LEVEL", help="add normal confidence bounds")
    p.add_argument("--rho", type=float, help="second-order parameter for bias correction")
    p.add_argument("--b", type=float, help="bias-function value for bias correction")
    p.add_argument("--diagnostics", action="store_true", help="add chi-square exponentiality columns")
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--skip-infeasible", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--figure")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("select", help="choose (h, k) by the Hill-Zipf discrepancy")
    p.add_argument("--data", required=True)
    p.add_argument("--t-grid", required=True)
    p.add_argument("--h-grid", type=float, nargs="+")
    p.add_argument("--k-grid", type=int, nargs="+")
    _add_metric(p)
    p.add_argument("--out", required=True)
    p.add_argument("--figure")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("simulate", help="simulate a dataset and/or a Monte Carlo report")
    p.add_argument("--spec", required=True, help="JSON simulation spec")
    p.add_argument("--out", help="dataset CSV")
    p.add_argument("--report", help="Monte Carlo report CSV")
    p.add_argument("--seed", type=int)
    p.add_argument("--t", type=float, nargs="+")
    p.add_argument("--h", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--reps", type=int)
    p.add_argument("--schemes", nargs="+", choices=["hill", "zipf", "hz", "opt"])
    p.add_argument("--rho-star", type=float)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("regions", help="(rho, rho*) comparison map")
    p.add_argument("--rho-range", type=float, nargs=2, default=[-10.0, 0.0], metavar=("LO", "HI"))
    p.add_argument("--rho-star-range", type=float, nargs=2, default=[-4.0, 0.0], metavar=("LO", "HI"))
    p.add_argument("--resolution", type=int, nargs=2, default=[200, 200], metavar=("NRHO", "NSTAR"))
    p.add_argument("--literal", action="store_true",
                   help="use the D/E frontier conditions exactly as originally printed")
    p.add_argument("--out", required=True)
    p.add_argument("--figure")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("density", help="limiting normal densities of several estimators")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--rho-star", type=float, nargs="+", required=True)
    p.add_argument("--scheme", choices=["hz", "opt"], default="hz")
    p.add_argument("--with-hill-zipf", action="store_true")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--figure")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("prepare-chelmer", help="convert a date,flow CSV to x1=year,x2=day,y")
    p.add_argument("--raw", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_prepare_chelmer)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CondTailError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
