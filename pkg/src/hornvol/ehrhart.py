"""Stretching quasi-polynomials P(s) = C_{s lam, s mu}^{s nu} and their fits.

A quasi-polynomial of period `period` stores one exact coefficient vector per
residue class of s.  Fitting solves the per-class Vandermonde systems over
the rationals; redundant samples must reproduce exactly, otherwise the
declared degree or period is wrong and fitting fails loudly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

from ._exact import solve_square
from .bzpolytope import RationalPolygon, boundary_interior_counts
from .rootsys import RootSystem, polytope_degree


class InsufficientSamplesError(ValueError):
    pass


class InconsistentSamplesError(ValueError):
    pass


class LeadingCoefficientError(ValueError):
    pass


@dataclass(frozen=True)
class QuasiPolynomial:
    """period and, per residue class mod period, coefficients (c0, ..., cd)."""

    period: int
    coeffs: dict[int, tuple[Q, ...]]

    @property
    def degree(self) -> int:
        return len(next(iter(self.coeffs.values()))) - 1

    def evaluate(self, s: int) -> Q:
        cs = self.coeffs[s % self.period]
        acc = Q(0)
        p = Q(1)
        for c in cs:
            acc += c * p
            p *= s
        return acc

    def class_is_zero(self, r: int) -> bool:
        return all(c == 0 for c in self.coeffs[r % self.period])

    def to_json_dict(self) -> dict:
        return {
            "period": self.period,
            "degree": self.degree,
            "classes": {str(r): [str(c) for c in cs] for r, cs in sorted(self.coeffs.items())},
        }


def fit_quasi_polynomial(samples: dict[int, int], degree: int, period: int) -> QuasiPolynomial:
    """Exact per-residue-class Vandermonde fit of integer samples.

    Raises InsufficientSamplesError when a class has fewer than degree+1
    samples and InconsistentSamplesError when redundant samples do not lie on
    the fitted polynomial (the signature of a wrong degree or period).
    """
    if 0 in samples and samples[0] != 1:
        raise InconsistentSamplesError("s=0 must evaluate to 1 for a closed convex polytope")
    coeffs: dict[int, tuple[Q, ...]] = {}
    for r in range(period):
        pts = sorted((s, v) for s, v in samples.items() if s % period == r)
        if len(pts) < degree + 1:
            raise InsufficientSamplesError(
                f"residue class {r} mod {period}: {len(pts)} samples for degree {degree}"
            )
        base = pts[: degree + 1]
        A = [[Q(s) ** k for k in range(degree + 1)] for s, _ in base]
        b = [Q(v) for _, v in base]
        cs = tuple(solve_square(A, b))
        for s, v in pts[degree + 1:]:
            got = sum((c * Q(s) ** k for k, c in enumerate(cs)), Q(0))
            if got != v:
                raise InconsistentSamplesError(
                    f"sample P({s}) = {v} clashes with fit {got} (class {r} mod {period})"
                )
        coeffs[r] = cs
    return QuasiPolynomial(period=period, coeffs=coeffs)


def leading_coefficient(quasi: QuasiPolynomial, skip_zero_classes: bool = False) -> Q:
    """The degree-d coefficient, required constant across residue classes.

    With skip_zero_classes=True, residue classes that vanish identically
    (count 0 at every dilation, as for non-compatible shifted triples) are
    ignored.
    """
    leads = {}
    for r, cs in quasi.coeffs.items():
        if skip_zero_classes and all(c == 0 for c in cs):
            continue
        leads[r] = cs[-1]
    if not leads:
        return Q(0)
    vals = set(leads.values())
    if len(vals) > 1:
        raise LeadingCoefficientError(f"leading coefficient varies across classes: {leads}")
    return vals.pop()


def reciprocity_check(quasi: QuasiPolynomial, P: RationalPolygon) -> bool:
    """Ehrhart-Macdonald: Q(-1) = (-1)^dim * (interior count)."""
    val = quasi.evaluate(-1)
    _, interior = boundary_interior_counts(P)
    return val == Q(-1) ** max(P.dim, 0) * interior


def default_period(rs: RootSystem) -> int:
    # stretching quasi-polynomials of compatible triples are genuine
    # polynomials for A_r and have period at most 2 for B/C/D
    return 1 if rs.family == "A" else 2


def _default_lr(rs: RootSystem):
    # stretched weight systems outgrow the Freudenthal size guard quickly;
    # the Steinberg routes have no such limit (integer fast path for B2,
    # batched Kostant table elsewhere)
    if (rs.family, rs.rank) == ("B", 2):
        from .multiplicity import lr_steinberg

        return lr_steinberg
    from .multiplicity import lr_steinberg_table

    return lr_steinberg_table


def stretching_samples(rs: RootSystem, lam, mu, nu, s_values, lr=None) -> dict[int, int]:
    if lr is None:
        lr = _default_lr(rs)
    lam, mu, nu = (tuple(int(v) for v in rs.dynkin(w)) for w in (lam, mu, nu))
    out = {}
    for s in s_values:
        if s == 0:
            out[0] = 1
            continue
        sl = tuple(s * v for v in lam)
        sm = tuple(s * v for v in mu)
        sn = tuple(s * v for v in nu)
        out[s] = lr(rs, sl, sm, sn)
    return out


def stretching_quasi_polynomial(
    rs: RootSystem,
    lam,
    mu,
    nu,
    period: int | None = None,
    degree: int | None = None,
    smax: int | None = None,
    lr=None,
) -> tuple[QuasiPolynomial, dict[int, int]]:
    """Fit P(s) = C_{s lam, s mu}^{s nu} from exact multiplicity evaluations.

    Samples run over s = 0 .. period*(degree+1) by default (one redundancy
    row per class).  s = 0 contributes its conventional value 1 only when
    the polytope is nonempty, i.e. when some positive dilation has a nonzero
    count.
    """
    if period is None:
        period = default_period(rs)
    if degree is None:
        degree = polytope_degree(rs.family, rs.rank)
    if smax is None:
        smax = period * (degree + 1)
    samples = stretching_samples(rs, lam, mu, nu, range(1, smax + 1), lr)
    if any(samples.values()):
        samples[0] = 1
    quasi = fit_quasi_polynomial(samples, degree=degree, period=period)
    return quasi, samples
