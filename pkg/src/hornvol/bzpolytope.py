"""The B2 Berenstein-Zelevinsky polygon in the (t0(0), t1(1)) plane.

Four parameters t0(0), t-1(1), t0(1), t1(1) express sigma = lam + mu - nu
over the positive roots; the two equality constraints

    sigma = (t1(1) + t-1(1)) alpha1 + (t0(0) + t0(1)) alpha2

eliminate t-1(1) and t0(1), leaving a rational polygon in x = t0(0),
y = t1(1).  Its filtered integer points count C_{lam mu}^{nu}: a 2D lattice
point only counts when the two eliminated parameters are integers as well,
which for B2 is the statement that sigma lies in the root lattice.

All geometry (vertex enumeration, areas, lattice scans) is exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import cached_property
from math import ceil, floor, gcd
from typing import Iterable, Sequence

from .rootsys import RootSystem, Weight, build_root_system

Point = tuple[Q, Q]


class UnboundedPolygonError(ValueError):
    pass


class DegeneratePolygonError(ValueError):
    pass


@dataclass(frozen=True)
class HalfPlane:
    """The constraint a*x + b*y >= c (or > c when strict)."""

    a: Q
    b: Q
    c: Q
    strict: bool = False
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "a", Q(self.a))
        object.__setattr__(self, "b", Q(self.b))
        object.__setattr__(self, "c", Q(self.c))
        if self.a == 0 and self.b == 0:
            raise ValueError("degenerate half-plane")

    def value(self, p: Point) -> Q:
        return self.a * p[0] + self.b * p[1] - self.c

    def holds(self, p: Point, closure: bool = False) -> bool:
        v = self.value(p)
        return v >= 0 if (closure or not self.strict) else v > 0

    def scaled(self, s) -> "HalfPlane":
        return HalfPlane(self.a, self.b, self.c * Q(s), self.strict, self.label)


def _line_intersection(h1: HalfPlane, h2: HalfPlane) -> Point | None:
    det = h1.a * h2.b - h2.a * h1.b
    if det == 0:
        return None
    x = (h1.c * h2.b - h2.c * h1.b) / det
    y = (h1.a * h2.c - h2.a * h1.c) / det
    return (x, y)


def _convex_hull(points: list[Point]) -> list[Point]:
    """Andrew's monotone chain; exact; returns a CCW cycle without repeats."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2:
                (x1, y1), (x2, y2) = out[-2], out[-1]
                if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:  # all collinear
        return [pts[0], pts[-1]]
    return hull


class RationalPolygon:
    """Intersection of rational half-planes with a derived vertex cycle.

    `elim` carries the simple-root coordinates of sigma for BZ polygons, so
    lattice scans can demand integrality of the eliminated parameters.
    `dim` is 2 for a full polygon, 1 for a segment, 0 for a point and -1 for
    an empty intersection.
    """

    def __init__(self, halfplanes: Sequence[HalfPlane], elim: tuple[Q, Q] | None = None):
        self.halfplanes = tuple(halfplanes)
        self.elim = None if elim is None else (Q(elim[0]), Q(elim[1]))

    # -- geometry ----------------------------------------------------------
    def is_bounded(self) -> bool:
        if not self.halfplanes:
            return False
        for h in self.halfplanes:
            for d in ((-h.b, h.a), (h.b, -h.a)):
                if all(g.a * d[0] + g.b * d[1] >= 0 for g in self.halfplanes):
                    return False
        return True

    @cached_property
    def vertices(self) -> tuple[Point, ...]:
        hs = self.halfplanes
        pts: list[Point] = []
        for i in range(len(hs)):
            for j in range(i + 1, len(hs)):
                p = _line_intersection(hs[i], hs[j])
                if p is not None and all(h.holds(p, closure=True) for h in hs):
                    pts.append(p)
        return tuple(_convex_hull(pts))

    @cached_property
    def dim(self) -> int:
        v = self.vertices
        if not v:
            return -1
        if len(v) == 1:
            return 0
        if len(v) == 2:
            return 1
        return 2

    def contains(self, p: Point, closure: bool = False, strict: bool = False) -> bool:
        if strict:
            return all(h.value(p) > 0 for h in self.halfplanes)
        return all(h.holds(p, closure=closure) for h in self.halfplanes)

    def area(self) -> Q:
        v = self.vertices
        if len(v) < 3:
            return Q(0)
        s = Q(0)
        for i in range(len(v)):
            x1, y1 = v[i]
            x2, y2 = v[(i + 1) % len(v)]
            s += x1 * y2 - x2 * y1
        return abs(s) / 2

    def dilate(self, s) -> "RationalPolygon":
        s = Q(s)
        elim = None if self.elim is None else (self.elim[0] * s, self.elim[1] * s)
        return RationalPolygon([h.scaled(s) for h in self.halfplanes], elim)

    # -- lattice scans -------------------------------------------------------
    def _passes_filter(self) -> bool:
        """Integer (x, y) makes the eliminated parameters integral iff sigma is integral."""
        if self.elim is None:
            return True
        return self.elim[0].denominator == 1 and self.elim[1].denominator == 1

    def _y_bounds(self) -> tuple[Q, Q]:
        los = [h.c / h.b for h in self.halfplanes if h.a == 0 and h.b > 0]
        his = [h.c / h.b for h in self.halfplanes if h.a == 0 and h.b < 0]
        if los and his:
            return max(los), min(his)
        v = self.vertices
        if not v:
            return Q(1), Q(0)
        ys = [p[1] for p in v]
        return min(ys), max(ys)

    def _row_counts(self, strict_all: bool) -> Iterable[tuple[int, int, int]]:
        """Yield (y, xlo, xhi) for integer rows; honors per-constraint strictness."""
        if not self.is_bounded():
            raise UnboundedPolygonError("lattice scan of an unbounded region")
        ylo, yhi = self._y_bounds()
        if ylo > yhi:
            return
        for y in range(ceil(ylo), floor(yhi) + 1):
            lo, hi = None, None
            feasible = True
            for h in self.halfplanes:
                strict = strict_all or h.strict
                rhs = h.c - h.b * y
                if h.a == 0:
                    ok = (-rhs > 0) if strict else (-rhs >= 0)
                    if not ok:
                        feasible = False
                        break
                elif h.a > 0:
                    bound = rhs / h.a
                    v = floor(bound) + 1 if (strict and bound.denominator == 1) else ceil(bound)
                    lo = v if lo is None else max(lo, v)
                else:
                    bound = rhs / h.a
                    v = ceil(bound) - 1 if (strict and bound.denominator == 1) else floor(bound)
                    hi = v if hi is None else min(hi, v)
            if feasible and lo is not None and hi is not None and lo <= hi:
                yield (y, lo, hi)

    def lattice_count(self, integrality_filter: bool = True, strict_all: bool = False) -> int:
        if integrality_filter and not self._passes_filter():
            return 0
        return sum(hi - lo + 1 for _, lo, hi in self._row_counts(strict_all))

    # -- serialization -------------------------------------------------------
    def to_json_dict(self) -> dict:
        return {
            "halfplanes": [
                {"a": str(h.a), "b": str(h.b), "c": str(h.c), "strict": h.strict, "label": h.label}
                for h in self.halfplanes
            ],
            "vertices": [[str(x), str(y)] for x, y in self.vertices],
            "dim": self.dim,
        }


def clip_cell(vertices: Sequence[Point], a, b, c) -> tuple[Point, ...]:
    """Clip a convex CCW vertex cycle against a*x + b*y >= c (Sutherland-Hodgman)."""
    a, b, c = Q(a), Q(b), Q(c)
    out: list[Point] = []
    n = len(vertices)
    for i in range(n):
        p = vertices[i]
        q = vertices[(i + 1) % n]
        vp = a * p[0] + b * p[1] - c
        vq = a * q[0] + b * q[1] - c
        if vp >= 0:
            out.append(p)
        if (vp > 0 and vq < 0) or (vp < 0 and vq > 0):
            t = vp / (vp - vq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    dedup: list[Point] = []
    for p in out:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return tuple(dedup)


def cell_area(vertices: Sequence[Point]) -> Q:
    if len(vertices) < 3:
        return Q(0)
    s = Q(0)
    for i in range(len(vertices)):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % len(vertices)]
        s += x1 * y2 - x2 * y1
    return abs(s) / 2


def cell_centroid(vertices: Sequence[Point]) -> Point:
    n = len(vertices)
    return (
        sum((p[0] for p in vertices), Q(0)) / n,
        sum((p[1] for p in vertices), Q(0)) / n,
    )


# ---------------------------------------------------------------------------
# BZ polygon construction for B2


def _dynkin_q(rs: RootSystem, w) -> tuple[Q, Q]:
    a = rs.dynkin(w if isinstance(w, Weight) else Weight(tuple(w), "dynkin"))
    return (a[0], a[1])


def bz_polygon_b2(lam, mu, nu) -> RationalPolygon:
    """Half-plane system of the B2 BZ polygon for a dominant rational triple.

    An empty intersection is a legal result (dim metadata -1).
    """
    rs = build_root_system("B", 2)
    l1, l2 = _dynkin_q(rs, lam)
    m1, m2 = _dynkin_q(rs, mu)
    n1, n2 = _dynkin_q(rs, nu)
    for v in (l1, l2, m1, m2, n1, n2):
        if v < 0:
            raise ValueError("bz_polygon_b2 requires dominant weights")
    s1d, s2d = l1 + m1 - n1, l2 + m2 - n2
    # sigma in simple-root coordinates
    sq1 = s1d + s2d / 2
    sq2 = s1d + s2d
    hps = [
        HalfPlane(1, 0, 0, label="t0(0) >= 0"),
        HalfPlane(0, 1, 0, label="t1(1) >= 0"),
        HalfPlane(-1, -2, -sq2, label="t0(1) >= 2 t1(1)"),
        HalfPlane(1, -2, sq2 - 2 * sq1, label="2 t-1(1) >= t0(1)"),
        HalfPlane(0, -1, -l1, label="lam1 >= t1(1)"),
        HalfPlane(1, -1, sq2 - sq1 - l1, label="lam1 >= t0(1) - t-1(1)"),
        HalfPlane(1, 1, sq1 - l1, label="lam1 >= t-1(1) - t0(0)"),
        HalfPlane(-1, 0, -l2, label="lam2 >= t0(0)"),
        HalfPlane(-1, -1, sq1 - sq2 - m1, label="mu1 >= t-1(1) + 2 t1(1) - t0(1)"),
        HalfPlane(0, -1, -m1, label="mu1 >= t1(1)"),
        HalfPlane(1, 0, 2 * sq2 - 2 * sq1 - m2, label="mu2 >= t0(0) + 2(t0(1) - t-1(1) - t1(1))"),
        HalfPlane(1, 2, sq2 - m2, label="mu2 >= t0(1) - 2 t1(1)"),
    ]
    return RationalPolygon(hps, elim=(sq1, sq2))


def lattice_point_count(P: RationalPolygon, integrality_filter: bool = True) -> int:
    """Integer points of P whose back-substituted BZ parameters are integral.

    With integrality_filter=False this is the raw 2D lattice count
    (diagnostic mode).
    """
    return P.lattice_count(integrality_filter=integrality_filter)


def polygon_area(P: RationalPolygon) -> Q:
    """Exact shoelace area: the relative volume in BZ coordinates."""
    if P.dim < 2:
        raise DegeneratePolygonError(f"polygon has dim {P.dim}; see degeneracy_info")
    return P.area()


def _segment_relative_length(v0: Point, v1: Point) -> Q:
    """Length of the segment in units of the primitive lattice vector along it."""
    dx, dy = v1[0] - v0[0], v1[1] - v0[1]
    den = dx.denominator * dy.denominator // gcd(dx.denominator, dy.denominator)
    ix, iy = int(dx * den), int(dy * den)
    return Q(gcd(abs(ix), abs(iy)), den)


def boundary_interior_counts(P: RationalPolygon, integrality_filter: bool = True) -> tuple[int, int]:
    """(boundary, interior) lattice point counts; relative interior for dim < 2."""
    if integrality_filter and not P._passes_filter():
        return (0, 0)
    total = P.lattice_count(integrality_filter)
    if P.dim == 2:
        interior = P.lattice_count(integrality_filter, strict_all=True)
        return (total - interior, interior)
    if P.dim == 1:
        ends = sum(
            1
            for v in P.vertices
            if v[0].denominator == 1 and v[1].denominator == 1
        )
        return (ends, total - ends)
    if P.dim == 0:
        # the relative interior of a point is the point itself
        return (0, total)
    return (0, 0)


@dataclass(frozen=True)
class Degeneracy:
    kind: str                        # Empty | Point | Segment | Full
    relative_length: Q | None = None

    def __str__(self):
        if self.kind == "Segment":
            return f"Segment(relative length {self.relative_length})"
        return self.kind


def degeneracy_info(P: RationalPolygon) -> Degeneracy:
    d = P.dim
    if d == -1:
        return Degeneracy("Empty")
    if d == 0:
        return Degeneracy("Point")
    if d == 1:
        v0, v1 = P.vertices
        return Degeneracy("Segment", _segment_relative_length(v0, v1))
    return Degeneracy("Full")


@dataclass(frozen=True)
class PickReport:
    p: Q | None
    holds: bool
    count: int
    area: Q
    boundary: int
    interior: int
    L: Q | None
    notes: tuple[str, ...] = field(default_factory=tuple)


def pick_relation_check(P: RationalPolygon) -> PickReport:
    """Check 2C - 2V - L = 2(2p - 1), L = b, and Pick's theorem when p = 1.

    C, b, i come from lattice scans of P; V is the exact area; L is twice the
    sub-leading coefficient of the stretching quasi-polynomial fitted from
    the dilations of P.  Violated assumptions (a non-constant sub-leading
    coefficient) are reported in `notes`, never raised.
    """
    from .ehrhart import fit_quasi_polynomial  # local import, no cycle at module load

    if P.dim != 2:
        raise DegeneratePolygonError("pick_relation_check needs a dim-2 polygon")
    C = lattice_point_count(P)
    V = P.area()
    b, i = boundary_interior_counts(P)
    samples = {0: 1}
    for s in range(1, 7):
        samples[s] = lattice_point_count(P.dilate(s))
    quasi = fit_quasi_polynomial(samples, degree=2, period=2)
    notes: list[str] = []
    sub = {r: quasi.coeffs[r][1] for r in range(2)}
    if sub[0] != sub[1]:
        notes.append(f"sub-leading coefficient not constant: {sub[0]} vs {sub[1]}")
        return PickReport(None, False, C, V, b, i, None, tuple(notes))
    L = 2 * sub[0]
    p = Q(2 * C - 2 * V - L + 2, 4)
    holds = True
    if L != b:
        holds = False
        notes.append(f"L = {L} differs from boundary count b = {b}")
    if p == 1 and V != i + Q(b, 2) - 1:
        holds = False
        notes.append("Pick's theorem V = i + b/2 - 1 fails")
    odd_const = quasi.coeffs[1][0]
    if odd_const != 2 * p - 1:
        notes.append(f"odd-class constant {odd_const} differs from 2p-1 = {2 * p - 1}")
    return PickReport(p, holds, C, V, b, i, L, tuple(notes))
