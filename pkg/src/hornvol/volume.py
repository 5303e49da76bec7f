"""The B2 volume function and everything attached to it.

* exact Weyl-sum evaluation of J on the gamma-plane,
* Horn polygon membership and the candidate singular lines,
* piecewise-quadratic cell analysis with wall-jump classification,
* the two J-LR relations and the c_kappa / c-hat_kappa coefficients,
* the Horn PDF with its exact normalization integral,
* the SO(2) real-symmetric closed form.

Arguments named alpha/beta/gamma are pairs of rationals in the orthonormal
basis; lam/mu/nu are weights in Dynkin labels.  The B2 identification is
(a, b) Dynkin  <->  (a + b/2, b/2) orthonormal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Q

from ._exact import (
    Poly2,
    p2_eval,
    p2_integrate_polygon,
    p2_linear,
    p2_mul,
    p2_scale,
    p2_sub,
    qvec,
    solve_in_span,
    InconsistentSystemError,
    UnderdeterminedSystemError,
)
from .bzpolytope import (
    HalfPlane,
    RationalPolygon,
    bz_polygon_b2,
    cell_area,
    cell_centroid,
    clip_cell,
)
from .ehrhart import (
    QuasiPolynomial,
    leading_coefficient,
    stretching_quasi_polynomial,
)
from .multiplicity import lr_steinberg_table, lr_triple
from .rootsys import RootSystem, build_root_system, is_compatible

Pair = tuple[Q, Q]


class IncompatibleTripleError(ValueError):
    pass


class NotShiftableError(ValueError):
    pass


class PiecewiseFitError(ValueError):
    pass


def b2() -> RootSystem:
    return build_root_system("B", 2)


def b2_dynkin_to_ortho(w) -> Pair:
    a, b = qvec(w)
    return (a + b / 2, b / 2)


def _qpair(x) -> Pair:
    a, b = x
    return (Q(a), Q(b))


# ---------------------------------------------------------------------------
# Direct evaluation of J

#: the eight B2 Weyl elements as (swap, sign1, sign2, eps)
_B2W = tuple(
    (swap, s1, s2, (-1 if swap else 1) * s1 * s2)
    for swap in (0, 1)
    for s1 in (1, -1)
    for s2 in (1, -1)
)


def j_b2(alpha, beta, gamma) -> Q:
    """Exact J(alpha, beta; gamma) for B2, orthonormal coordinates.

    One Weyl sum is fixed to the identity and the result multiplied by 8;
    sign(0) counts as 0, which only affects a measure-zero set and keeps the
    function continuous.
    """
    a1, a2 = _qpair(alpha)
    b1, b2 = _qpair(beta)
    g1, g2 = _qpair(gamma)
    scale = 1
    for v in (a1, a2, b1, b2, g1, g2):
        d = v.denominator
        scale = scale * d // math.gcd(scale, d)
    ia1, ia2 = int(a1 * scale), int(a2 * scale)
    ib1, ib2 = int(b1 * scale), int(b2 * scale)
    ig1, ig2 = int(g1 * scale), int(g2 * scale)
    acc = 0
    for swap, s1, s2, e1 in _B2W:
        wa1, wa2 = (ia2, ia1) if swap else (ia1, ia2)
        wa1 *= s1
        wa2 *= s2
        for swap2, t1, t2, e2 in _B2W:
            wb1, wb2 = (ib2, ib1) if swap2 else (ib1, ib2)
            x = wa1 + t1 * wb1 - ig1
            y = wa2 + t2 * wb2 - ig2
            tot = x + y
            if tot == 0:
                continue
            d = x - y
            f = 4 * x * abs(x) - 4 * y * abs(y) - 2 * d * abs(d)
            if f == 0:
                continue
            acc += e1 * e2 * (f if tot > 0 else -f)
    return Q(acc, 32 * scale * scale)


# ---------------------------------------------------------------------------
# Horn polygon

_DASHED = "chamber"


def _check_regular_ordered(alpha: Pair, beta: Pair) -> None:
    a1, a2 = alpha
    b1, b2 = beta
    if not (a1 > a2 > 0 and b1 > b2 > 0):
        raise ValueError("alpha and beta must be regular ordered: x1 > x2 > 0")


def horn_halfplanes(alpha, beta) -> list[HalfPlane]:
    """The B2 Horn inequalities plus the chamber walls g1 >= g2 >= 0."""
    a1, a2 = _qpair(alpha)
    b1, b2 = _qpair(beta)
    hp = HalfPlane
    return [
        hp(1, 0, abs(a1 - b1), label="g1 >= |a1-b1|"),
        hp(1, 0, abs(a2 - b2), label="g1 >= |a2-b2|"),
        hp(-1, 0, -(a1 + b1), label="g1 <= a1+b1"),
        hp(0, 1, a2 - b1, label="g2 >= a2-b1"),
        hp(0, 1, b2 - a1, label="g2 >= b2-a1"),
        hp(0, -1, -(a1 + b2), label="g2 <= a1+b2"),
        hp(0, -1, -(a2 + b1), label="g2 <= a2+b1"),
        hp(1, 1, abs(a1 - b1) + abs(a2 - b2), label="g1+g2 >= |a1-b1|+|a2-b2|"),
        hp(-1, -1, -(a1 + a2 + b1 + b2), label="g1+g2 <= a1+a2+b1+b2"),
        hp(1, -1, a1 - a2 - b1 - b2, label="g1-g2 >= a1-a2-b1-b2"),
        hp(1, -1, b1 - b2 - a1 - a2, label="g1-g2 >= b1-b2-a1-a2"),
        hp(-1, 1, -(a1 + b1 - abs(a2 - b2)), label="g1-g2 <= a1+b1-|a2-b2|"),
        hp(0, 1, 0, label=f"{_DASHED} g2 >= 0"),
        hp(1, -1, 0, label=f"{_DASHED} g1 >= g2"),
    ]


def horn_polygon(alpha, beta) -> RationalPolygon:
    _check_regular_ordered(_qpair(alpha), _qpair(beta))
    return RationalPolygon(horn_halfplanes(alpha, beta))


def horn_contains_b2(alpha, beta, gamma) -> bool:
    """Membership of gamma in the closed Horn polygon (chamber included)."""
    alpha, beta, gamma = _qpair(alpha), _qpair(beta), _qpair(gamma)
    _check_regular_ordered(alpha, beta)
    return all(h.holds(gamma) for h in horn_halfplanes(alpha, beta))


# ---------------------------------------------------------------------------
# Singular lines

#: line kinds and their gamma-plane normals
_KINDS = {"g1": (1, 0), "g2": (0, 1), "g1+g2": (1, 1), "g1-g2": (1, -1)}


@dataclass(frozen=True)
class SingularLine:
    """A candidate non-C2 line {<normal, gamma> = level} with its provenance."""

    kind: str
    level: Q
    source: str

    @property
    def normal(self) -> tuple[int, int]:
        return _KINDS[self.kind]

    def delta_squared(self) -> Poly2:
        """Delta^2 with Delta the normalized signed distance to the line."""
        a, b = self.normal
        lin = p2_linear(a, b, -self.level)
        sq = p2_mul(lin, lin)
        if self.kind in ("g1+g2", "g1-g2"):
            sq = p2_scale(Q(1, 2), sq)
        return sq

    def value(self, p: Pair) -> Q:
        a, b = self.normal
        return a * p[0] + b * p[1] - self.level


def singular_lines_b2(alpha, beta, within_horn: bool = False) -> list[SingularLine]:
    """All candidate lines (five per kind, duplicates merged).

    With within_horn=True, keeps only lines that cross the open interior of
    the Horn polygon.
    """
    a1, a2 = _qpair(alpha)
    b1, b2 = _qpair(beta)
    _check_regular_ordered((a1, a2), (b1, b2))
    raw = {
        "g1": [
            (a1 + b2, "a1+b2"),
            (a2 + b1, "a2+b1"),
            (a2 + b2, "a2+b2"),
            (abs(a1 - b2), "|a1-b2|"),
            (abs(a2 - b1), "|a2-b1|"),
        ],
        "g2": [
            (a2 + b2, "a2+b2"),
            (abs(a1 - b2), "|a1-b2|"),
            (abs(a2 - b1), "|a2-b1|"),
            (abs(a2 - b2), "|a2-b2|"),
            (abs(a1 - b1), "|a1-b1|"),
        ],
        "g1+g2": [
            (a1 + a2 + b1 - b2, "a1+a2+b1-b2"),
            (abs(a1 + a2 - b1 + b2), "|a1+a2-b1+b2|"),
            (a1 - a2 + b1 + b2, "a1-a2+b1+b2"),
            (abs(-a1 + a2 + b1 + b2), "|-a1+a2+b1+b2|"),
            (a1 - a2 + b1 - b2, "a1-a2+b1-b2"),
        ],
        "g1-g2": [
            (abs(-a1 + a2 + b1 + b2), "|-a1+a2+b1+b2|"),
            (abs(a1 + a2 - b1 + b2), "|a1+a2-b1+b2|"),
            (a1 - a2 + b1 - b2, "a1-a2+b1-b2"),
            (abs(a1 - a2 - b1 + b2), "|a1-a2-b1+b2|"),
            (abs(a1 + a2 - b1 - b2), "|a1+a2-b1-b2|"),
        ],
    }
    merged: dict[tuple[str, Q], list[str]] = {}
    for kind, entries in raw.items():
        for level, src in entries:
            merged.setdefault((kind, level), []).append(src)
    lines = [SingularLine(kind, level, ",".join(srcs)) for (kind, level), srcs in merged.items()]
    if within_horn:
        poly = horn_polygon(alpha, beta).vertices
        kept = []
        for ln in lines:
            vals = [ln.value(p) for p in poly]
            if min(vals) < 0 < max(vals):
                kept.append(ln)
        lines = kept
    return sorted(lines, key=lambda l: (l.kind, l.level))


def four_prong_vertices(alpha, beta) -> dict[str, Pair]:
    """The four 4-fold intersection points I, J, K, L of the candidate lines."""
    a1, a2 = _qpair(alpha)
    b1, b2 = _qpair(beta)
    return {
        "I": (a1 + b2, abs(a2 - b1)),
        "J": (a2 + b1, abs(a1 - b2)),
        "K": (abs(b1 - a2), abs(a1 - b2)),
        "L": (a2 + b2, abs(a1 - b1)),
    }


# ---------------------------------------------------------------------------
# Piecewise-quadratic analysis

_QUAD_KEYS = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))


@dataclass(frozen=True)
class QuadCell:
    vertices: tuple[Pair, ...]
    coeffs: tuple[Q, ...]        # (1, x, y, x^2, xy, y^2) coefficients

    @property
    def poly(self) -> Poly2:
        return {k: c for k, c in zip(_QUAD_KEYS, self.coeffs) if c}

    def centroid(self) -> Pair:
        return cell_centroid(self.vertices)


@dataclass(frozen=True)
class Wall:
    """A maximal straight piece of a cell boundary with its jump class.

    classification is one of:
      'inactive'            zero jump across an internal wall
      'quadratic-ramp'      internal jump of the form +-(1/2) Delta^2
      'boundary-quadratic'  outer Horn facet, cell quadratic equals (1/2) Delta^2
      'boundary-linear'     dashed chamber wall, quadratic vanishes on the line
      'violation'           anything else (must not occur)
    """

    kind: str
    level: Q
    segment: tuple[Pair, Pair]
    cells: tuple[int, ...]       # adjacent cell indices (1 for boundary walls)
    classification: str
    jump_sign: int = 0           # sign of the (1/2) Delta^2 term, 0 if none


@dataclass(frozen=True)
class PiecewiseQuadratic:
    alpha: Pair
    beta: Pair
    swapped: bool
    cells: tuple[QuadCell, ...]
    walls: tuple[Wall, ...]
    lines: tuple[SingularLine, ...]

    def violations(self) -> list[Wall]:
        return [w for w in self.walls if w.classification == "violation"]

    def cell_at(self, p: Pair) -> int | None:
        for i, c in enumerate(self.cells):
            if _point_in_cell(c.vertices, p, strict=False):
                return i
        return None

    def evaluate(self, p: Pair) -> Q:
        i = self.cell_at(p)
        if i is None:
            return Q(0)
        return p2_eval(self.cells[i].poly, *p)

    def to_json_dict(self) -> dict:
        """Cell diagram as JSON polygon lists (the CLI's SVG emitter draws these)."""
        return {
            "alpha": [str(v) for v in self.alpha],
            "beta": [str(v) for v in self.beta],
            "swapped": self.swapped,
            "cells": [
                {
                    "vertices": [[str(x), str(y)] for x, y in c.vertices],
                    "coeffs": [str(v) for v in c.coeffs],
                }
                for c in self.cells
            ],
            "walls": [
                {
                    "kind": w.kind,
                    "level": str(w.level),
                    "classification": w.classification,
                    "jump_sign": w.jump_sign,
                    "segment": [[str(v) for v in p] for p in w.segment],
                }
                for w in self.walls
            ],
        }


def _point_in_cell(verts, p: Pair, strict: bool) -> bool:
    n = len(verts)
    for i in range(n):
        x1, y1 = verts[i]
        x2, y2 = verts[(i + 1) % n]
        cr = (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1)
        if cr < 0 or (strict and cr == 0):
            return False
    return True


def _cell_targets(verts) -> list[Pair]:
    """Vertices, edge midpoints and edge quarter-points of a cell, in order."""
    n = len(verts)
    out = list(verts)
    for i in range(n):
        p, q = verts[i], verts[(i + 1) % n]
        out.append(((p[0] + q[0]) / 2, (p[1] + q[1]) / 2))
    for i in range(n):
        p, q = verts[i], verts[(i + 1) % n]
        out.append(((3 * p[0] + q[0]) / 4, (3 * p[1] + q[1]) / 4))
    return out


def _fit_points(verts) -> tuple[list[Pair], list[Pair]]:
    """(fitting points, verification points), all strictly inside the cell.

    Rays from the centroid toward vertices alone can be rank-deficient (a
    parallelogram's vertex rays are its two diagonals), so edge midpoints
    and quarter points are included, and the verification set hugs the
    boundary where a missed singular line would clip a cell.
    """
    g = cell_centroid(verts)
    targets = _cell_targets(verts)
    fit: list[Pair] = [g]
    for t in (Q(1, 2), Q(3, 4), Q(1, 4)):
        for v in targets:
            fit.append((g[0] + t * (v[0] - g[0]), g[1] + t * (v[1] - g[1])))
    verify: list[Pair] = []
    for t in (Q(9, 10), Q(19, 20), Q(2, 3)):
        for v in targets:
            verify.append((g[0] + t * (v[0] - g[0]), g[1] + t * (v[1] - g[1])))
    seen = set(fit)
    verify = [p for p in verify if p not in seen]
    return list(dict.fromkeys(fit)), list(dict.fromkeys(verify))


def _fit_quadratic(verts, fn) -> tuple[Q, ...]:
    """Exact 6-coefficient quadratic matching fn on interior points of a cell.

    Fits a full-rank subset of interior points and verifies on the rest,
    including points close to every edge and corner; any mismatch means the
    cell straddles a change of determination (a missed singular line).
    """
    fit_pts, verify_pts = _fit_points(verts)
    rows = [(Q(1), x, y, x * x, x * y, y * y) for x, y in fit_pts]
    vals = [fn(p) for p in fit_pts]
    cols = [tuple(r[k] for r in rows) for k in range(6)]
    try:
        coeffs = tuple(solve_in_span(cols, vals, require_unique=True))
    except (InconsistentSystemError, UnderdeterminedSystemError) as exc:
        raise PiecewiseFitError(f"no unique quadratic fits cell with centroid {cell_centroid(verts)}") from exc
    poly = {k: c for k, c in zip(_QUAD_KEYS, coeffs) if c}
    for p in verify_pts:
        if p2_eval(poly, *p) != fn(p):
            raise PiecewiseFitError(f"quadratic fit fails off-sample at {p}")
    return coeffs


def _edge_line(p: Pair, q: Pair) -> tuple[str, Q] | None:
    dx, dy = q[0] - p[0], q[1] - p[1]
    if dx == 0 and dy == 0:
        return None
    if dx == 0:
        return ("g1", p[0])
    if dy == 0:
        return ("g2", p[1])
    s = dy / dx
    if s == -1:
        return ("g1+g2", p[0] + p[1])
    if s == 1:
        return ("g1-g2", p[0] - p[1])
    return None


def _cell_edges_on(verts, kind: str, level: Q):
    a, b = _KINDS[kind]
    n = len(verts)
    for i in range(n):
        p, q = verts[i], verts[(i + 1) % n]
        if a * p[0] + b * p[1] == level and a * q[0] + b * q[1] == level:
            yield (p, q)


def _overlap_1d(seg1, seg2):
    lo = max(min(seg1), min(seg2))
    hi = min(max(seg1), max(seg2))
    return (lo, hi) if lo < hi else None


def piecewise_analyze_b2(alpha, beta) -> PiecewiseQuadratic:
    """Partition the Horn polygon by the candidate lines and fit J on each cell.

    Inputs are swapped if needed so that |beta1 - alpha2| >= |alpha1 - beta2|.
    Raises PiecewiseFitError if some cell carries no single quadratic, which
    would signal a missed singular line.
    """
    alpha, beta = _qpair(alpha), _qpair(beta)
    _check_regular_ordered(alpha, beta)
    swapped = abs(beta[0] - alpha[1]) < abs(alpha[0] - beta[1])
    if swapped:
        alpha, beta = beta, alpha

    lines = singular_lines_b2(alpha, beta)
    horn = horn_polygon(alpha, beta)
    if horn.dim != 2:
        raise ValueError("Horn polygon is degenerate; alpha or beta not regular?")
    cells: list[tuple[Pair, ...]] = [horn.vertices]
    for ln in lines:
        a, b = ln.normal
        new: list[tuple[Pair, ...]] = []
        for cell in cells:
            plus = clip_cell(cell, a, b, ln.level)
            minus = clip_cell(cell, -a, -b, -ln.level)
            if cell_area(plus) > 0 and cell_area(minus) > 0:
                new.extend((plus, minus))
            else:
                new.append(cell)
        cells = new

    fn = lambda p: j_b2(alpha, beta, p)
    fitted = tuple(QuadCell(tuple(c), _fit_quadratic(c, fn)) for c in cells)

    # classify every maximal wall piece
    walls: list[Wall] = []
    # collect, per (kind, level), the edges of each cell lying on that line
    line_edges: dict[tuple[str, Q], list[tuple[int, tuple[Pair, Pair]]]] = {}
    for idx, cell in enumerate(fitted):
        n = len(cell.vertices)
        for i in range(n):
            p, q = cell.vertices[i], cell.vertices[(i + 1) % n]
            ident = _edge_line(p, q)
            if ident is None:
                continue
            line_edges.setdefault(ident, []).append((idx, (p, q)))

    dashed = {("g2", Q(0)), ("g1-g2", Q(0))}
    for (kind, level), entries in sorted(line_edges.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        a, b = _KINDS[kind]
        # axis used to parametrize positions along the line
        axis = (lambda s: s[1]) if kind == "g1" else (lambda s: s[0])
        sq = SingularLine(kind, level, "").delta_squared()
        matched: set[int] = set()
        for i in range(len(entries)):
            ci, (p1, q1) = entries[i]
            side_i = _side_of(fitted[ci].vertices, a, b, level)
            for j in range(i + 1, len(entries)):
                cj, (p2, q2) = entries[j]
                if _side_of(fitted[cj].vertices, a, b, level) == side_i:
                    continue
                ov = _overlap_1d((axis(p1), axis(q1)), (axis(p2), axis(q2)))
                if ov is None:
                    continue
                hi, lo = (ci, cj) if side_i > 0 else (cj, ci)
                diff = p2_sub(fitted[hi].poly, fitted[lo].poly)
                if not diff:
                    cls, sign = "inactive", 0
                elif diff == p2_scale(Q(1, 2), sq):
                    cls, sign = "quadratic-ramp", 1
                elif diff == p2_scale(Q(-1, 2), sq):
                    cls, sign = "quadratic-ramp", -1
                else:
                    cls, sign = "violation", 0
                seg = _clip_segment_on_line(kind, level, ov)
                walls.append(Wall(kind, level, seg, (hi, lo), cls, sign))
                matched.add(i)
                matched.add(j)
        for i in range(len(entries)):
            if i in matched:
                continue
            ci, seg = entries[i]
            qpoly = fitted[ci].poly
            if (kind, level) in dashed:
                ok = _vanishes_on_line(qpoly, kind, level)
                cls = "boundary-linear" if ok else "violation"
                sign = 0
            else:
                ok = qpoly == p2_scale(Q(1, 2), sq)
                cls = "boundary-quadratic" if ok else "violation"
                sign = 1 if ok else 0
            walls.append(Wall(kind, level, seg, (ci,), cls, sign))

    return PiecewiseQuadratic(
        alpha=alpha, beta=beta, swapped=swapped,
        cells=fitted, walls=tuple(walls), lines=tuple(lines),
    )


def _side_of(verts, a, b, level) -> int:
    g = cell_centroid(verts)
    v = a * g[0] + b * g[1] - level
    return 1 if v > 0 else (-1 if v < 0 else 0)


def _clip_segment_on_line(kind: str, level: Q, span: tuple[Q, Q]) -> tuple[Pair, Pair]:
    lo, hi = span
    if kind == "g1":
        return ((level, lo), (level, hi))
    if kind == "g2":
        return ((lo, level), (hi, level))
    if kind == "g1+g2":
        return ((lo, level - lo), (hi, level - hi))
    return ((lo, lo - level), (hi, hi - level))


def _vanishes_on_line(poly: Poly2, kind: str, level: Q) -> bool:
    # substitute the line parametrization and require the zero polynomial
    if kind == "g1":
        sub = lambda t: (level, t)
    elif kind == "g2":
        sub = lambda t: (t, level)
    elif kind == "g1+g2":
        sub = lambda t: (t, level - t)
    else:
        sub = lambda t: (t, t - level)
    return all(p2_eval(poly, *sub(Q(t))) == 0 for t in (0, 1, 2, -1, 5))


def c1_wall_discrepancies(pw: PiecewiseQuadratic, h: Q = Q(1, 10000)) -> list[tuple[Wall, Q]]:
    """One-sided finite-difference gradient mismatch across each internal wall.

    Uses exact rational steps along a quasi-unit normal; J is C1, so the
    discrepancy should be of the order of h times the second-derivative jump.
    """
    out = []
    root2_inv = Q(7071, 10000)  # rational approximation of 1/sqrt(2)
    for wall in pw.walls:
        if len(wall.cells) != 2:
            continue
        (p, q) = wall.segment
        a, b = _KINDS[wall.kind]
        n = (Q(a), Q(b)) if wall.kind in ("g1", "g2") else (Q(a) * root2_inv, Q(b) * root2_inv)
        for t in (Q(1, 2), Q(1, 3), Q(2, 3)):
            m = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
            plus = (m[0] + h * n[0], m[1] + h * n[1])
            minus = (m[0] - h * n[0], m[1] - h * n[1])
            hi, lo = wall.cells
            if _point_in_cell(pw.cells[hi].vertices, plus, True) and _point_in_cell(
                pw.cells[lo].vertices, minus, True
            ):
                j0 = j_b2(pw.alpha, pw.beta, m)
                d_plus = (j_b2(pw.alpha, pw.beta, plus) - j0) / h
                d_minus = (j0 - j_b2(pw.alpha, pw.beta, minus)) / h
                out.append((wall, abs(d_plus - d_minus)))
                break
    return out


# ---------------------------------------------------------------------------
# J-LR relations and the c_kappa coefficients


def kappa_coefficient_sets(rs: RootSystem) -> tuple[dict[tuple[int, ...], Q], dict[tuple[int, ...], Q]]:
    """(K with c_kappa, K-hat with c-hat_kappa) for the supported algebras."""
    if rs.family == "B" and rs.rank == 2:
        return (
            {(0, 0): Q(3, 8), (1, 0): Q(1, 8)},
            {(0, 1): Q(1, 4)},
        )
    if rs.family == "B" and rs.rank == 3:
        K = {
            (0, 0, 0): Q(7230, 92160),
            (1, 0, 0): Q(3995, 92160),
            (0, 1, 0): Q(1651, 92160),
            (2, 0, 0): Q(85, 92160),
            (0, 0, 2): Q(479, 92160),
            (1, 1, 0): Q(29, 92160),
            (1, 0, 2): Q(1, 92160),
        }
        Khat = {
            (0, 0, 1): Q(190, 2880),
            (1, 0, 1): Q(26, 2880),
            (0, 1, 1): Q(1, 2880),
        }
        return K, Khat
    raise ValueError(f"no c_kappa table for {rs.family}{rs.rank}")


def j_lr_shifted(lam, mu, nu, rs: RootSystem | None = None) -> Q:
    """J(lam', mu'; nu') as  sum_{kappa in K} c_kappa C_{lam mu kappa}^{nu}.

    Defaults to B2; works for every algebra with a c_kappa table (B2, B3).
    """
    if rs is None:
        rs = b2()
    if not is_compatible(rs, lam, mu, nu):
        raise IncompatibleTripleError(f"{lam}, {mu}, {nu} is not a compatible triple")
    K, _ = kappa_coefficient_sets(rs)
    return sum((c * lr_triple(rs, lam, mu, kap, nu) for kap, c in K.items()), Q(0))


def j_lr_unshifted(lam, mu, nu, rs: RootSystem | None = None) -> Q:
    """J(lam, mu; nu) as  sum_{kappa in K-hat} c-hat_kappa C_{(lam-rho)(mu-rho) kappa}^{nu-rho}."""
    if rs is None:
        rs = b2()
    if not is_compatible(rs, lam, mu, nu):
        raise IncompatibleTripleError(f"{lam}, {mu}, {nu} is not a compatible triple")
    lam, mu, nu = (tuple(int(v) for v in rs.dynkin(w)) for w in (lam, mu, nu))
    shifted = [tuple(v - 1 for v in w) for w in (lam, mu, nu)]
    if any(v < 0 for w in shifted for v in w):
        raise NotShiftableError("lam, mu, nu must all dominate rho")
    _, Khat = kappa_coefficient_sets(rs)
    sl, sm, sn = shifted
    return sum((c * lr_triple(rs, sl, sm, kap, sn) for kap, c in Khat.items()), Q(0))


def kissinger_quasi_polynomial(
    rs: RootSystem, kappa, period: int | None = None, degree: int | None = None
) -> tuple[QuasiPolynomial, dict[int, int]]:
    """Stretching quasi-polynomial of (s rho, s rho, s (kappa + rho))."""
    kappa = tuple(int(v) for v in rs.dynkin(kappa))
    rho = (1,) * rs.rank
    nu = tuple(k + 1 for k in kappa)
    if period is None:
        period = 2 if rs.rank == 2 else 4
    lr = None if rs.rank == 2 else lr_steinberg_table
    return stretching_quasi_polynomial(rs, rho, rho, nu, period=period, degree=degree, lr=lr)


def c_kappa_via_kissinger(rs: RootSystem, kappa, period: int | None = None, degree: int | None = None) -> Q:
    """c_kappa = J(rho, rho, kappa + rho), read off the stretched leading coefficient.

    Residue classes that vanish identically (the triple need not be
    compatible at every s) are skipped when extracting the leading
    coefficient.
    """
    K, Khat = kappa_coefficient_sets(rs)
    kap = tuple(int(v) for v in rs.dynkin(kappa))
    if kap not in K and kap not in Khat:
        raise ValueError(f"{kap} is not in K or K-hat of {rs.family}{rs.rank}")
    quasi, _ = kissinger_quasi_polynomial(rs, kap, period=period, degree=degree)
    return leading_coefficient(quasi, skip_zero_classes=True)


# ---------------------------------------------------------------------------
# Horn PDF


def delta_b2(x) -> Q:
    """Delta(x) = x1 x2 (x1^2 - x2^2), the product over the B2 positive roots."""
    x1, x2 = _qpair(x)
    return x1 * x2 * (x1 * x1 - x2 * x2)


def pdf_b2(alpha, beta, gamma) -> Q:
    """Horn probability density (3/2) |Delta(gamma)| / (|Delta(alpha)| |Delta(beta)|) J."""
    j = j_b2(alpha, beta, gamma)
    if j == 0:
        return Q(0)
    return Q(3, 2) * abs(delta_b2(gamma)) / (abs(delta_b2(alpha)) * abs(delta_b2(beta))) * j


def pdf_normalization_integral(alpha, beta, pw: PiecewiseQuadratic | None = None) -> Q:
    """Exact integral of the PDF over the Horn polygon (fan triangulation per cell)."""
    alpha, beta = _qpair(alpha), _qpair(beta)
    if pw is None:
        pw = piecewise_analyze_b2(alpha, beta)
    scale = Q(3, 2) / (abs(delta_b2(alpha)) * abs(delta_b2(beta)))
    vandermonde = {(3, 1): Q(1), (1, 3): Q(-1)}  # x^3 y - x y^3 = Delta(gamma)
    total = Q(0)
    for cell in pw.cells:
        integrand = p2_scale(scale, p2_mul(vandermonde, cell.poly))
        total += p2_integrate_polygon(integrand, cell.vertices)
    return total


# ---------------------------------------------------------------------------
# Four-route volume computation


@dataclass(frozen=True)
class VolumeRoutes:
    direct: Q | None = None
    lr: Q | None = None
    ehrhart: Q | None = None
    polytope: Q | None = None

    def values(self) -> dict[str, Q]:
        return {k: v for k, v in self.__dict__.items() if v is not None}

    def agree(self) -> bool:
        vals = set(self.values().values())
        return len(vals) <= 1


def volume_routes(lam, mu, nu, routes=("direct", "lr", "ehrhart", "polytope"),
                  rs: RootSystem | None = None) -> VolumeRoutes:
    """The BZ-polytope volume of a compatible triple by up to four routes.

    The direct and polytope routes are B2-specific; lr and ehrhart work for
    every algebra with a c_kappa table.  The lr route needs lam, mu, nu to
    dominate rho; when explicitly asked for it raises, but under "all
    routes" a non-shiftable triple just drops it.
    """
    if rs is None:
        rs = b2()
    is_b2 = (rs.family, rs.rank) == ("B", 2)
    out = {}
    if "direct" in routes:
        if not is_b2:
            raise ValueError("the direct J evaluation is B2-specific")
        out["direct"] = j_b2(b2_dynkin_to_ortho(lam), b2_dynkin_to_ortho(mu), b2_dynkin_to_ortho(nu))
    if "lr" in routes:
        try:
            out["lr"] = j_lr_unshifted(lam, mu, nu, rs)
        except NotShiftableError:
            if routes == ("lr",):
                raise
    if "ehrhart" in routes:
        quasi, _ = stretching_quasi_polynomial(rs, lam, mu, nu)
        out["ehrhart"] = leading_coefficient(quasi, skip_zero_classes=True)
    if "polytope" in routes:
        if not is_b2:
            raise ValueError("the BZ polygon construction is B2-specific")
        P = bz_polygon_b2(lam, mu, nu)
        out["polytope"] = P.area() if P.dim == 2 else Q(0)
    return VolumeRoutes(**out)


def multiplicity_one_scaling_diagnostic(max_label: int = 4, smax: int = 5) -> list[tuple]:
    """Sweep diagnostic for an open question: does C = 1 force C_s = 1 for B2?

    Returns the list of (lam, mu, nu, s, C_s) with C_{lam mu}^{nu} = 1 but
    C_{s lam, s mu}^{s nu} != 1.  A nonempty result is a reportable finding,
    not a failure: e.g. (2,2), (2,2), (1,0) has C = 1 on a segment polygon of
    relative length 1/2, whose doubled dilation holds two lattice points.
    """
    import itertools

    from .multiplicity import lr_steinberg

    rs = b2()
    found = []
    rng = range(max_label + 1)
    for lam in itertools.product(rng, rng):
        for mu in itertools.product(rng, rng):
            for nu in itertools.product(rng, rng):
                if (lam[1] + mu[1] - nu[1]) % 2:
                    continue
                if lr_steinberg(rs, lam, mu, nu) != 1:
                    continue
                for s in range(2, smax + 1):
                    cs = lr_steinberg(
                        rs,
                        tuple(s * v for v in lam),
                        tuple(s * v for v in mu),
                        tuple(s * v for v in nu),
                    )
                    if cs != 1:
                        found.append((lam, mu, nu, s, cs))
    return found


# ---------------------------------------------------------------------------
# SO(2) closed form (real symmetric 2x2 case)


def so2_support(alpha12, beta12) -> tuple[Q, Q]:
    a, b = Q(alpha12), Q(beta12)
    return (abs(a - b), a + b)


def j_so2_symmetric(alpha12, beta12, gamma12) -> float:
    """(2/pi^2) sqrt(a b g / (((a+b)^2 - g^2)(g^2 - (a-b)^2))) on the support.

    Returns 0.0 outside the closed support interval and math.inf exactly at
    its endpoints, where the density has an integrable divergence.
    """
    a, b = Q(alpha12), Q(beta12)
    if a <= 0 or b <= 0:
        raise ValueError("alpha12 and beta12 must be positive")
    g = Q(gamma12)
    lo, hi = so2_support(a, b)
    if g < lo or g > hi:
        return 0.0
    if g == lo or g == hi:
        return math.inf
    num = a * b * g
    den = ((a + b) ** 2 - g * g) * (g * g - (a - b) ** 2)
    return 2 / math.pi**2 * math.sqrt(num / den)


def so2_cdf(alpha12, beta12, gamma12: float) -> float:
    """Distribution function of the spectral gap gamma12 for the SO(2) Horn measure."""
    a, b = float(alpha12), float(beta12)
    A = (a + b) ** 2
    B = (a - b) ** 2
    g2 = float(gamma12) ** 2
    if g2 <= B:
        return 0.0
    if g2 >= A:
        return 1.0
    return (math.asin((2 * g2 - A - B) / (A - B)) + math.pi / 2) / math.pi
