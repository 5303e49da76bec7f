"""Command-line surface: lr, volume, grid, ehrhart, covolume, sample.

Weights are comma-separated Dynkin labels.  The gamma-plane commands (grid,
sample b2) read alpha and beta in orthonormal coordinates by default, which
is the basis the Horn inequalities and singular lines are stated in; pass
--basis dynkin to convert.  Exact rationals are always printed as p/q.

Every subcommand is deterministic given its flags (plus seed) and exits
nonzero when an internal cross-check fails.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction as Q

from .bzpolytope import (
    bz_polygon_b2,
    degeneracy_info,
    lattice_point_count,
    boundary_interior_counts,
    pick_relation_check,
)
from .covolume import covolume_markdown, covolume_report, covolume_table
from .ehrhart import leading_coefficient, stretching_quasi_polynomial
from .multiplicity import lr_klimyk, lr_steinberg
from .rootsys import build_root_system, is_compatible, UnsupportedAlgebraError
from .volume import (
    b2_dynkin_to_ortho,
    horn_polygon,
    j_b2,
    pdf_b2,
    singular_lines_b2,
    volume_routes,
)

SCHEMA_VERSION = 1


class CliError(Exception):
    pass


def parse_algebra(token: str):
    token = token.strip().upper()
    if token in ("E6", "E7", "E8", "F4", "G2"):
        return build_root_system(token)
    if len(token) >= 2 and token[0] in "ABCD" and token[1:].isdigit():
        return build_root_system(token[0], int(token[1:]))
    raise CliError(f"cannot parse algebra {token!r} (expected e.g. B2, A3, G2)")


def parse_weight(token: str, rank: int) -> tuple[Q, ...]:
    parts = token.split(",")
    if len(parts) != rank:
        raise CliError(f"weight {token!r} needs {rank} comma-separated labels")
    return tuple(Q(p) for p in parts)


def parse_pair(token: str) -> tuple[Q, Q]:
    parts = token.split(",")
    if len(parts) != 2:
        raise CliError(f"{token!r}: expected two comma-separated rationals")
    return (Q(parts[0]), Q(parts[1]))


def _int_weight(w) -> tuple[int, ...]:
    if any(v.denominator != 1 for v in w):
        raise CliError(f"weight {w} must have integer Dynkin labels")
    return tuple(int(v) for v in w)


def _emit_json(payload: dict, stream) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    json.dump(payload, stream, indent=2, sort_keys=True)
    stream.write("\n")


# ---------------------------------------------------------------------------
# lr


def cmd_lr(args) -> int:
    rs = parse_algebra(args.algebra)
    lam, mu, nu = (
        _int_weight(parse_weight(t, rs.rank)) for t in (args.lam, args.mu, args.nu)
    )
    methods = ["klimyk", "steinberg", "bz"] if args.method == "all" else [args.method]
    values = {}
    for m in methods:
        if m == "klimyk":
            values[m] = lr_klimyk(rs, lam, mu, nu)
        elif m == "steinberg":
            values[m] = lr_steinberg(rs, lam, mu, nu)
        elif m == "bz":
            if not (rs.family, rs.rank) == ("B", 2):
                raise CliError("the bz method is only available for B2")
            values[m] = lattice_point_count(bz_polygon_b2(lam, mu, nu))
    agree = len(set(values.values())) == 1
    if args.format == "json":
        _emit_json(
            {"algebra": args.algebra, "lam": lam, "mu": mu, "nu": nu,
             "multiplicity": values, "agree": agree},
            sys.stdout,
        )
    else:
        for m in methods:
            print(f"{m}: {values[m]}")
        if len(values) > 1:
            print(f"agree: {'yes' if agree else 'NO'}")
    return 0 if agree else 1


# ---------------------------------------------------------------------------
# volume


def cmd_volume(args) -> int:
    rs = parse_algebra(args.algebra)
    is_b2 = (rs.family, rs.rank) == ("B", 2)
    lam, mu, nu = (
        _int_weight(parse_weight(t, rs.rank)) for t in (args.lam, args.mu, args.nu)
    )
    if args.route == "all":
        routes = ("direct", "lr", "ehrhart", "polytope") if is_b2 else ("lr", "ehrhart")
    else:
        routes = (args.route,)
    if not is_b2 and any(r in ("direct", "polytope") for r in routes):
        raise CliError("routes direct and polytope are B2-only")
    if any(r in ("lr", "ehrhart") for r in routes) and not is_compatible(rs, lam, mu, nu):
        raise CliError("routes lr and ehrhart need a compatible triple")
    try:
        vr = volume_routes(lam, mu, nu, routes, rs=rs)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    values = vr.values()
    payload = {
        "algebra": args.algebra,
        "lam": lam, "mu": mu, "nu": nu,
        "volume": {k: str(v) for k, v in values.items()},
        "agree": vr.agree(),
    }
    degen = None
    if is_b2:
        P = bz_polygon_b2(lam, mu, nu)
        degen = degeneracy_info(P)
        payload["polygon"] = {"degeneracy": str(degen), **P.to_json_dict()}
        if degen.kind == "Full":
            pick = pick_relation_check(P)
            b, i = boundary_interior_counts(P)
            payload["polygon"]["lattice_points"] = pick.count
            payload["polygon"]["boundary_points"] = b
            payload["polygon"]["interior_points"] = i
            payload["polygon"]["pick_p"] = str(pick.p) if pick.p is not None else None
    if args.format == "json":
        _emit_json(payload, sys.stdout)
    else:
        for k, v in values.items():
            print(f"{k}: {v}")
        if degen is not None:
            print(f"degeneracy: {degen}")
        if len(values) > 1:
            print(f"agree: {'yes' if vr.agree() else 'NO'}")
    return 0 if vr.agree() else 1


# ---------------------------------------------------------------------------
# grid


def _gamma_basis_pair(token: str, basis: str) -> tuple[Q, Q]:
    pair = parse_pair(token)
    if basis == "dynkin":
        return b2_dynkin_to_ortho(pair)
    return pair


def cmd_grid(args) -> int:
    alpha = _gamma_basis_pair(args.alpha, args.basis)
    beta = _gamma_basis_pair(args.beta, args.basis)
    poly = horn_polygon(alpha, beta)
    lines = singular_lines_b2(alpha, beta, within_horn=True)
    xs = [v[0] for v in poly.vertices]
    ys = [v[1] for v in poly.vertices]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    res = args.res

    def write_rows(fh):
        writer = csv.writer(fh)
        writer.writerow(["gamma1", "gamma2", "J", "pdf"])
        for i in range(res + 1):
            for j in range(res + 1):
                g = (x0 + (x1 - x0) * Q(i, res), y0 + (y1 - y0) * Q(j, res))
                jval = j_b2(alpha, beta, g) if poly.contains(g) else Q(0)
                pval = pdf_b2(alpha, beta, g) if jval else Q(0)
                writer.writerow([str(g[0]), str(g[1]), str(jval), str(pval)])

    if args.csv == "-":
        write_rows(sys.stdout)
    else:
        with open(args.csv, "w", newline="") as fh:
            write_rows(fh)
    cell_diagram = None
    if args.cells:
        from .volume import piecewise_analyze_b2

        cell_diagram = piecewise_analyze_b2(alpha, beta).to_json_dict()
        with open(args.cells, "w") as fh:
            _emit_json(cell_diagram, fh)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(_grid_svg(poly, lines, cell_diagram))
    return 0


def _grid_svg(poly, lines, cell_diagram=None) -> str:
    xs = [float(v[0]) for v in poly.vertices]
    ys = [float(v[1]) for v in poly.vertices]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    W, H, M = 600.0, 450.0, 30.0
    sx = (W - 2 * M) / (x1 - x0)
    sy = (H - 2 * M) / (y1 - y0)

    def T(p):
        return (M + (float(p[0]) - x0) * sx, H - M - (float(p[1]) - y0) * sy)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W:.0f}" height="{H:.0f}">',
    ]
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in (T(v) for v in poly.vertices))
    out.append(f'<polygon points="{pts}" fill="#eeeeee" stroke="black" stroke-width="1.5"/>')
    if cell_diagram is not None:
        for cell in cell_diagram["cells"]:
            cpts = " ".join(
                f"{x:.2f},{y:.2f}"
                for x, y in (T((Q(vx), Q(vy))) for vx, vy in cell["vertices"])
            )
            out.append(f'<polygon points="{cpts}" fill="none" stroke="#bbbbbb" stroke-width="0.6"/>')
    # dashed chamber walls where they bound the polygon
    n = len(poly.vertices)
    for i in range(n):
        p, q = poly.vertices[i], poly.vertices[(i + 1) % n]
        on_g2 = p[1] == 0 and q[1] == 0
        on_diag = p[0] == p[1] and q[0] == q[1]
        if on_g2 or on_diag:
            (xa, ya), (xb, yb) = T(p), T(q)
            out.append(
                f'<line x1="{xa:.2f}" y1="{ya:.2f}" x2="{xb:.2f}" y2="{yb:.2f}" '
                'stroke="blue" stroke-width="2" stroke-dasharray="8,5"/>'
            )
    for ln in lines:
        seg = _line_segment_in_polygon(ln, poly)
        if seg is None:
            continue
        (xa, ya), (xb, yb) = T(seg[0]), T(seg[1])
        out.append(
            f'<line x1="{xa:.2f}" y1="{ya:.2f}" x2="{xb:.2f}" y2="{yb:.2f}" '
            f'stroke="red" stroke-width="1.2"><title>{ln.kind} = {ln.level} ({ln.source})</title></line>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _line_segment_in_polygon(ln, poly):
    hits = []
    n = len(poly.vertices)
    a, b = ln.normal
    for i in range(n):
        p, q = poly.vertices[i], poly.vertices[(i + 1) % n]
        vp, vq = ln.value(p), ln.value(q)
        if vp == 0:
            hits.append(p)
        if (vp > 0 > vq) or (vp < 0 < vq):
            t = vp / (vp - vq)
            hits.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    hits = sorted(set(hits))
    return (hits[0], hits[-1]) if len(hits) >= 2 else None


# ---------------------------------------------------------------------------
# ehrhart


def cmd_ehrhart(args) -> int:
    rs = parse_algebra(args.algebra)
    lam, mu, nu = (
        _int_weight(parse_weight(t, rs.rank)) for t in (args.lam, args.mu, args.nu)
    )
    if not is_compatible(rs, lam, mu, nu):
        raise CliError(f"triple {lam}, {mu}, {nu} is not compatible (lam+mu-nu not in the root lattice)")
    quasi, samples = stretching_quasi_polynomial(
        rs, lam, mu, nu, period=args.period, smax=args.smax
    )
    payload = {
        "algebra": args.algebra,
        "lam": lam, "mu": mu, "nu": nu,
        "samples": {str(s): v for s, v in sorted(samples.items())},
        "quasi_polynomial": quasi.to_json_dict(),
        "leading_coefficient": str(leading_coefficient(quasi, skip_zero_classes=True)),
    }
    _emit_json(payload, sys.stdout)
    return 0


# ---------------------------------------------------------------------------
# covolume


def cmd_covolume(args) -> int:
    if args.family:
        fam = args.family.upper()
        if fam in ("E6", "E7", "E8", "F4", "G2"):
            reports = [covolume_report(fam)]
        else:
            minimum = {"A": 1, "B": 2, "C": 2, "D": 3}.get(fam)
            if minimum is None:
                raise CliError(f"unknown family {args.family!r}")
            reports = [covolume_report(fam, r) for r in range(minimum, args.max_rank + 1)]
    else:
        reports = covolume_table(max_rank=args.max_rank)
    ok = all(r.agree for r in reports)
    if args.format == "json":
        _emit_json({"reports": [r.to_json_dict() for r in reports], "agree": ok}, sys.stdout)
    else:
        sys.stdout.write(covolume_markdown(reports))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# sample


def cmd_sample(args) -> int:
    from .sampler import (
        chi_square_vs_pdf,
        ks_distance_so2,
        sample_b2_spectrum,
        sample_so2_symmetric,
        so2_samples,
    )

    if args.n_samples < 1:
        raise CliError("N must be >= 1")
    prefix = args.out
    if args.mode == "b2":
        alpha = _gamma_basis_pair(args.alpha, args.basis)
        beta = _gamma_basis_pair(args.beta, args.basis)
        hist = sample_b2_spectrum(alpha, beta, args.n_samples, args.seed, bins=args.bins)
        summary = chi_square_vs_pdf(hist, alpha, beta)
        ex, ey = hist.edges
        with open(prefix + ".csv", "w", newline="") as fh:
            fh.write(json.dumps({"schema_version": SCHEMA_VERSION, "N": args.n_samples,
                                 "seed": args.seed, "mode": "b2"}) + "\n")
            w = csv.writer(fh)
            w.writerow(["gamma1_center", "gamma2_center", "count", "density"])
            dx = (ex[1] - ex[0]) * (ey[1] - ey[0])
            for i in range(len(ex) - 1):
                for j in range(len(ey) - 1):
                    c = hist.counts[i, j]
                    w.writerow([
                        f"{(ex[i] + ex[i+1]) / 2:.6f}", f"{(ey[j] + ey[j+1]) / 2:.6f}",
                        int(c), f"{c / (args.n_samples * dx):.8g}",
                    ])
        report = {
            "mode": "b2", "N": args.n_samples, "seed": args.seed,
            "samples_outside_support": hist.samples_outside_support,
            "chi_square": {"statistic": summary.statistic, "dof": summary.dof,
                           "p_value": summary.p_value, "bins_used": summary.bins_used},
        }
        ok = hist.samples_outside_support == 0 and summary.p_value > 1e-3
    else:
        a12, b12 = Q(args.alpha12), Q(args.beta12)
        hist = sample_so2_symmetric(a12, b12, args.n_samples, args.seed, bins=args.bins)
        ks = ks_distance_so2(so2_samples(a12, b12, args.n_samples, args.seed), a12, b12)
        edges = hist.edges[0]
        with open(prefix + ".csv", "w", newline="") as fh:
            fh.write(json.dumps({"schema_version": SCHEMA_VERSION, "N": args.n_samples,
                                 "seed": args.seed, "mode": "so2"}) + "\n")
            w = csv.writer(fh)
            w.writerow(["gamma12_center", "count", "density"])
            for i in range(len(edges) - 1):
                c = int(hist.counts[i])
                w.writerow([f"{(edges[i] + edges[i+1]) / 2:.6f}", c,
                            f"{c / (args.n_samples * (edges[i+1] - edges[i])):.8g}"])
        # KS critical value at significance 1e-3, never tighter than the
        # 0.005 bound used for N = 10^6 runs
        threshold = max(0.005, 1.949 / args.n_samples**0.5)
        report = {
            "mode": "so2", "N": args.n_samples, "seed": args.seed,
            "support": [str(v) for v in (hist.sample_min[0], hist.sample_max[0])],
            "samples_outside_support": hist.samples_outside_support,
            "ks_distance": ks,
            "ks_threshold": threshold,
        }
        ok = hist.samples_outside_support == 0 and ks < threshold
    with open(prefix + ".json", "w") as fh:
        _emit_json(report, fh)
    print(json.dumps(report, sort_keys=True))
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hornvol", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lr", help="tensor-product multiplicity by one or all methods")
    p.add_argument("algebra")
    p.add_argument("lam")
    p.add_argument("mu")
    p.add_argument("nu")
    p.add_argument("--method", choices=["klimyk", "steinberg", "bz", "all"], default="all")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_lr)

    p = sub.add_parser("volume", help="BZ-polytope volume by one or all routes")
    p.add_argument("algebra")
    p.add_argument("lam")
    p.add_argument("mu")
    p.add_argument("nu")
    p.add_argument("--route", choices=["direct", "lr", "ehrhart", "polytope", "all"], default="all")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("grid", help="CSV/SVG of J and the PDF over the gamma-plane")
    p.add_argument("alpha")
    p.add_argument("beta")
    p.add_argument("--res", type=int, default=40)
    p.add_argument("--basis", choices=["orthonormal", "dynkin"], default="orthonormal")
    p.add_argument("--csv", default="-")
    p.add_argument("--svg", default=None)
    p.add_argument("--cells", default=None,
                   help="write the piecewise-quadratic cell diagram as JSON and overlay it in the SVG")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("ehrhart", help="fit the stretching quasi-polynomial of a triple")
    p.add_argument("algebra")
    p.add_argument("lam")
    p.add_argument("mu")
    p.add_argument("nu")
    p.add_argument("--period", type=int, default=None)
    p.add_argument("--smax", type=int, default=None)
    p.set_defaults(func=cmd_ehrhart)

    p = sub.add_parser("covolume", help="Gram vs closed-formula squared covolumes")
    p.add_argument("--family", default=None)
    p.add_argument("--max-rank", type=int, default=8)
    p.add_argument("--format", choices=["md", "json"], default="md")
    p.set_defaults(func=cmd_covolume)

    p = sub.add_parser("sample", help="Monte Carlo histograms vs the analytic laws")
    p.add_argument("mode", choices=["b2", "so2"])
    p.add_argument("--alpha", default="17,4")
    p.add_argument("--beta", default="15,9")
    p.add_argument("--alpha12", default="1")
    p.add_argument("--beta12", default="2")
    p.add_argument("--basis", choices=["orthonormal", "dynkin"], default="orthonormal")
    p.add_argument("-N", "--n-samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bins", type=int, default=40)
    p.add_argument("--out", default="hornvol_sample")
    p.set_defaults(func=cmd_sample)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, UnsupportedAlgebraError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
