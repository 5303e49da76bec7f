"""Root systems, Weyl groups and exact basis conversions.

Every classical family A, B, C, D (arbitrary rank) and the five exceptional
algebras are realized with exact rational coordinates in an ambient
orthonormal basis:

    A_r : ambient R^{r+1},  alpha_i = e_i - e_{i+1}
    B_r : ambient R^r,      alpha_i = e_i - e_{i+1}, alpha_r = e_r
    C_r : ambient R^r,      alpha_i = e_i - e_{i+1}, alpha_r = 2 e_r
    D_r : ambient R^r,      alpha_i = e_i - e_{i+1}, alpha_r = e_{r-1} + e_r
    G2, F4, E6, E7, E8 :    standard Bourbaki realizations

In particular for B2 the long roots have squared length 2 and the short
roots squared length 1, which is the normalization in which all the B2
volume-function formulas of this package are stated.  Quantities that
depend on the overall scale of the inner product (`kappa_g`) are rescaled
internally to the convention <theta, theta> = 2 for a long root theta and
say so in their docstrings; ratios (Weyl dimensions, Cartan integers) are
scale-free.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

from ._exact import Vec, dot, qvec, solve_in_span, solve_square, vadd, vscale

CLASSICAL = ("A", "B", "C", "D")
EXCEPTIONAL_RANK = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}
FAMILIES = CLASSICAL + tuple(EXCEPTIONAL_RANK)

#: canonical basis names, with accepted aliases
BASIS_ALIASES = {
    "dynkin": "dynkin",
    "root": "root",
    "simpleroot": "root",
    "simple_root": "root",
    "ortho": "ortho",
    "orthonormal": "ortho",
}


class UnsupportedAlgebraError(ValueError):
    pass


class NonDominantWeightError(ValueError):
    pass


def _canon_basis(basis: str) -> str:
    try:
        return BASIS_ALIASES[basis.lower()]
    except KeyError:
        raise ValueError(f"unknown basis {basis!r}") from None


@dataclass(frozen=True)
class Weight:
    """Exact rational coordinate vector with a declared basis."""

    coords: Vec
    basis: str = "dynkin"

    def __post_init__(self):
        object.__setattr__(self, "coords", qvec(self.coords))
        object.__setattr__(self, "basis", _canon_basis(self.basis))


def as_weight(x, basis: str = "dynkin") -> Weight:
    if isinstance(x, Weight):
        return x
    return Weight(tuple(x), basis)


def _simple_roots(family: str, rank: int) -> list[Vec]:
    if family == "A":
        return [
            tuple(Q(1) if j == i else Q(-1) if j == i + 1 else Q(0) for j in range(rank + 1))
            for i in range(rank)
        ]
    if family in ("B", "C", "D"):
        roots = [
            tuple(Q(1) if j == i else Q(-1) if j == i + 1 else Q(0) for j in range(rank))
            for i in range(rank - 1)
        ]
        last = [Q(0)] * rank
        if family == "B":
            last[rank - 1] = Q(1)
        elif family == "C":
            last[rank - 1] = Q(2)
        else:
            last[rank - 2] = Q(1)
            last[rank - 1] = Q(1)
        roots.append(tuple(last))
        return roots
    if family == "G2":
        return [qvec((1, -1, 0)), qvec((-2, 1, 1))]
    if family == "F4":
        return [
            qvec((0, 1, -1, 0)),
            qvec((0, 0, 1, -1)),
            qvec((0, 0, 0, 1)),
            (Q(1, 2), Q(-1, 2), Q(-1, 2), Q(-1, 2)),
        ]
    if family in ("E6", "E7", "E8"):
        e8 = [
            (Q(1, 2), Q(-1, 2), Q(-1, 2), Q(-1, 2), Q(-1, 2), Q(-1, 2), Q(-1, 2), Q(1, 2)),
            qvec((1, 1, 0, 0, 0, 0, 0, 0)),
            qvec((-1, 1, 0, 0, 0, 0, 0, 0)),
            qvec((0, -1, 1, 0, 0, 0, 0, 0)),
            qvec((0, 0, -1, 1, 0, 0, 0, 0)),
            qvec((0, 0, 0, -1, 1, 0, 0, 0)),
            qvec((0, 0, 0, 0, -1, 1, 0, 0)),
            qvec((0, 0, 0, 0, 0, -1, 1, 0)),
        ]
        return e8[: EXCEPTIONAL_RANK[family]]
    raise UnsupportedAlgebraError(f"unknown family {family!r}")


def _exponents(family: str, rank: int) -> tuple[int, ...]:
    if family == "A":
        return tuple(range(1, rank + 1))
    if family in ("B", "C"):
        return tuple(range(1, 2 * rank, 2))
    if family == "D":
        return tuple(range(1, 2 * rank - 2, 2)) + (rank - 1,)
    return {
        "E6": (1, 4, 5, 7, 8, 11),
        "E7": (1, 5, 7, 9, 11, 13, 17),
        "E8": (1, 7, 11, 13, 17, 19, 23, 29),
        "F4": (1, 5, 7, 11),
        "G2": (1, 5),
    }[family]


def _dual_coxeter(family: str, rank: int) -> int:
    return {
        "A": rank + 1,
        "B": 2 * rank - 1,
        "C": rank + 1,
        "D": 2 * rank - 2,
        "E6": 12,
        "E7": 18,
        "E8": 30,
        "F4": 9,
        "G2": 4,
    }[family]


def positive_root_count(family: str, rank: int) -> int:
    """N_r: the number of positive roots."""
    return {
        "A": rank * (rank + 1) // 2,
        "B": rank * rank,
        "C": rank * rank,
        "D": rank * (rank - 1),
        "E6": 36,
        "E7": 63,
        "E8": 120,
        "F4": 24,
        "G2": 6,
    }[family]


def polytope_degree(family: str, rank: int) -> int:
    """d_r = N_r - r: the generic dimension of the BZ polytope."""
    return positive_root_count(family, rank) - rank


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    simple_roots: tuple[Vec, ...]
    positive_roots: tuple[Vec, ...]          # orthonormal coordinates
    positive_roots_rb: tuple[tuple[int, ...], ...]  # simple-root coordinates
    cartan_matrix: tuple[tuple[int, ...], ...]
    exponents: tuple[int, ...]
    dual_coxeter_number: int
    fundamental_weights_rb: tuple[Vec, ...]  # omega_i in the simple-root basis

    # -- derived quantities ------------------------------------------------
    @property
    def n_positive(self) -> int:
        return len(self.positive_roots)

    @property
    def weyl_vector(self) -> Weight:
        """rho, half the sum of the positive roots (Dynkin labels all 1)."""
        return Weight((1,) * self.rank, "dynkin")

    @property
    def rho_ortho(self) -> Vec:
        acc = (Q(0),) * len(self.simple_roots[0])
        for a in self.positive_roots:
            acc = vadd(acc, a)
        return vscale(Q(1, 2), acc)

    # -- basis conversions ---------------------------------------------------
    def dynkin_to_root(self, a: Sequence) -> Vec:
        # a_j = sum_i c_i C[i][j]  =>  solve the transposed system
        n = self.rank
        At = [[Q(self.cartan_matrix[i][j]) for i in range(n)] for j in range(n)]
        return tuple(solve_square(At, qvec(a)))

    def root_to_dynkin(self, c: Sequence) -> Vec:
        n = self.rank
        c = qvec(c)
        return tuple(sum((c[i] * self.cartan_matrix[i][j] for i in range(n)), Q(0)) for j in range(n))

    def root_to_ortho(self, c: Sequence) -> Vec:
        acc = (Q(0),) * len(self.simple_roots[0])
        for ci, alpha in zip(qvec(c), self.simple_roots):
            acc = vadd(acc, vscale(ci, alpha))
        return acc

    def ortho_to_root(self, x: Sequence) -> Vec:
        return tuple(solve_in_span(self.simple_roots, qvec(x)))

    def ortho_to_dynkin(self, x: Sequence) -> Vec:
        x = qvec(x)
        return tuple(2 * dot(x, a) / dot(a, a) for a in self.simple_roots)

    def to_basis(self, w: Weight, basis: str) -> Weight:
        basis = _canon_basis(basis)
        if w.basis == basis:
            return w
        if w.basis == "dynkin":
            rb = self.dynkin_to_root(w.coords)
        elif w.basis == "root":
            rb = w.coords
        else:
            rb = self.ortho_to_root(w.coords)
        if basis == "root":
            return Weight(rb, "root")
        if basis == "dynkin":
            return Weight(self.root_to_dynkin(rb), "dynkin")
        return Weight(self.root_to_ortho(rb), "ortho")

    def ortho(self, w) -> Vec:
        return self.to_basis(as_weight(w), "ortho").coords

    def dynkin(self, w) -> Vec:
        return self.to_basis(as_weight(w), "dynkin").coords

    # -- predicates ----------------------------------------------------------
    def is_dominant_integral(self, w) -> bool:
        a = self.dynkin(w)
        return all(x.denominator == 1 and x >= 0 for x in a)

    def long_norm2(self) -> Q:
        return max(dot(a, a) for a in self.positive_roots)


def _positive_closure(simple: Sequence[Vec]) -> tuple[list[Vec], list[tuple[int, ...]]]:
    """All positive roots by root-string closure over the simple roots."""
    rank = len(simple)
    norms = [dot(a, a) for a in simple]
    pos: dict[tuple[int, ...], Vec] = {}
    for i in range(rank):
        key = tuple(1 if j == i else 0 for j in range(rank))
        pos[key] = simple[i]
    frontier = list(pos.items())
    while frontier:
        new: list[tuple[tuple[int, ...], Vec]] = []
        for key, vec in frontier:
            for i in range(rank):
                # root string through `vec` in the alpha_i direction
                p = 0
                down = list(key)
                while True:
                    down[i] -= 1
                    if down[i] < 0 or tuple(down) not in pos:
                        break
                    p += 1
                pairing = 2 * dot(vec, simple[i]) / norms[i]
                if p - pairing >= 1:
                    up = list(key)
                    up[i] += 1
                    upk = tuple(up)
                    if upk not in pos:
                        cand = vadd(vec, simple[i])
                        pos[upk] = cand
                        new.append((upk, cand))
        frontier = new
    keys = sorted(pos, key=lambda k: (sum(k), k))
    return [pos[k] for k in keys], keys


@lru_cache(maxsize=None)
def build_root_system(family: str, rank: int | None = None) -> RootSystem:
    """Construct the root system for a classical family/rank or exceptional name.

    Raises UnsupportedAlgebraError for invalid pairs (A: r>=1, B: r>=2,
    C: r>=2, D: r>=3; exceptional ranks are fixed).
    """
    family = family.upper()
    if family in EXCEPTIONAL_RANK:
        fixed = EXCEPTIONAL_RANK[family]
        if rank is None:
            rank = fixed
        if rank != fixed:
            raise UnsupportedAlgebraError(f"{family} has rank {fixed}, not {rank}")
    elif family in CLASSICAL:
        if rank is None:
            raise UnsupportedAlgebraError(f"family {family} needs an explicit rank")
        minimum = {"A": 1, "B": 2, "C": 2, "D": 3}[family]
        if rank < minimum:
            raise UnsupportedAlgebraError(f"{family}_r requires r >= {minimum}")
    else:
        raise UnsupportedAlgebraError(f"unknown family {family!r}")

    simple = _simple_roots(family, rank)
    positive, keys = _positive_closure(simple)
    expected = positive_root_count(family, rank)
    if len(positive) != expected:
        raise AssertionError(f"{family}{rank}: closure found {len(positive)} roots, expected {expected}")
    cartan = tuple(
        tuple(int(2 * dot(a, b) / dot(b, b)) for b in simple) for a in simple
    )
    # fundamental weights in the simple-root basis: rows of (C^T)^{-1}
    n = rank
    fw = []
    for i in range(n):
        At = [[Q(cartan[k][j]) for k in range(n)] for j in range(n)]
        fw.append(tuple(solve_square(At, [Q(1) if j == i else Q(0) for j in range(n)])))
    return RootSystem(
        family=family,
        rank=rank,
        simple_roots=tuple(simple),
        positive_roots=tuple(positive),
        positive_roots_rb=tuple(keys),
        cartan_matrix=cartan,
        exponents=_exponents(family, rank),
        dual_coxeter_number=_dual_coxeter(family, rank),
        fundamental_weights_rb=tuple(fw),
    )


# ---------------------------------------------------------------------------
# Weyl group


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element as an exact matrix on simple-root coordinates."""

    matrix: tuple[tuple[Q, ...], ...]
    sign: int
    label: str = ""

    def act_root(self, c: Sequence) -> Vec:
        c = qvec(c)
        return tuple(dot(row, c) for row in self.matrix)


def _identity_matrix(n: int) -> tuple[tuple[Q, ...], ...]:
    return tuple(tuple(Q(1) if i == j else Q(0) for j in range(n)) for i in range(n))


def identity_element(rs: RootSystem) -> WeylElement:
    return WeylElement(_identity_matrix(rs.rank), 1, "e")


def simple_reflection(rs: RootSystem, i: int) -> WeylElement:
    """s_i acting on simple-root coordinates: c'_i = c_i - sum_j C[j][i] c_j."""
    n = rs.rank
    rows = []
    for k in range(n):
        row = [Q(1) if k == j else Q(0) for j in range(n)]
        if k == i:
            for j in range(n):
                row[j] -= Q(rs.cartan_matrix[j][i])
        rows.append(tuple(row))
    return WeylElement(tuple(rows), -1, f"s{i + 1}")


def weyl_element_from_word(rs: RootSystem, word: Iterable[int]) -> WeylElement:
    w = identity_element(rs)
    for i in word:
        s = simple_reflection(rs, i)
        w = WeylElement(
            tuple(tuple(dot(row, [s.matrix[k][j] for k in range(rs.rank)]) for j in range(rs.rank)) for row in w.matrix),
            w.sign * s.sign,
            (w.label + "." if w.label != "e" else "") + s.label,
        )
    return w


@lru_cache(maxsize=None)
def weyl_elements(rs_key: tuple[str, int]) -> tuple[WeylElement, ...]:
    """The full Weyl group by closure over the simple reflections (memoized)."""
    rs = build_root_system(*rs_key)
    n = rs.rank
    gens = [simple_reflection(rs, i) for i in range(n)]
    seen = {_identity_matrix(n): (1, "e")}
    frontier = [_identity_matrix(n)]
    while frontier:
        new = []
        for mat in frontier:
            sign, label = seen[mat]
            for g in gens:
                prod = tuple(
                    tuple(sum((g.matrix[i][k] * mat[k][j] for k in range(n)), Q(0)) for j in range(n))
                    for i in range(n)
                )
                if prod not in seen:
                    seen[prod] = (sign * g.sign, g.label + ("" if label == "e" else "." + label))
                    new.append(prod)
        frontier = new
    return tuple(WeylElement(m, s, lab) for m, (s, lab) in seen.items())


def weyl_group(rs: RootSystem) -> tuple[WeylElement, ...]:
    return weyl_elements((rs.family, rs.rank))


def b2_weyl_element(swap: bool, sign1: int, sign2: int) -> WeylElement:
    """B2 element acting on orthonormal pairs by optional swap then sign flips."""
    rs = build_root_system("B", 2)
    images = []
    for alpha in rs.simple_roots:
        a, b = alpha
        if swap:
            a, b = b, a
        images.append((sign1 * a, sign2 * b))
    cols = [rs.ortho_to_root(v) for v in images]
    mat = tuple(tuple(cols[j][i] for j in range(2)) for i in range(2))
    eps = (-1 if swap else 1) * sign1 * sign2
    return WeylElement(mat, eps, f"b2({int(swap)},{sign1:+d},{sign2:+d})")


def b2_weyl_table() -> tuple[WeylElement, ...]:
    """The eight B2 Weyl elements in a fixed order."""
    return tuple(
        b2_weyl_element(swap, s1, s2)
        for swap in (False, True)
        for s1 in (1, -1)
        for s2 in (1, -1)
    )


def apply_weyl(rs: RootSystem, w: WeylElement, x) -> Weight:
    """w . x, returned in the basis x was given in."""
    xw = as_weight(x, "ortho") if not isinstance(x, Weight) else x
    rb = rs.to_basis(xw, "root").coords
    out = Weight(w.act_root(rb), "root")
    return rs.to_basis(out, xw.basis)


def reflect_to_dominant(rs: RootSystem, a: Sequence) -> tuple[tuple, int]:
    """Reflect Dynkin labels into the dominant chamber.

    Returns (dominant labels, sign).  Sign is 0 when the terminal weight lies
    on a chamber wall (some label 0), which is the drop rule of the
    Racah-Speiser algorithm.
    """
    cart = rs.cartan_matrix
    a = list(a)
    n = rs.rank
    sign = 1
    while True:
        i = next((k for k in range(n) if a[k] < 0), None)
        if i is None:
            break
        ai = a[i]
        row = cart[i]
        for j in range(n):
            a[j] -= ai * row[j]
        sign = -sign
    if any(v == 0 for v in a):
        return tuple(a), 0
    return tuple(a), sign


# ---------------------------------------------------------------------------
# Scalar quantities


def weyl_dimension(rs: RootSystem, lam) -> int:
    """dim V_lambda = prod_{alpha>0} <alpha, lambda+rho> / <alpha, rho>."""
    a = rs.dynkin(lam)
    if not all(x.denominator == 1 and x >= 0 for x in a):
        raise NonDominantWeightError(f"{a} is not dominant integral")
    lam_rho = rs.ortho(Weight(tuple(x + 1 for x in a), "dynkin"))
    rho = rs.rho_ortho
    num = Q(1)
    den = Q(1)
    for alpha in rs.positive_roots:
        num *= dot(alpha, lam_rho)
        den *= dot(alpha, rho)
    d = num / den
    assert d.denominator == 1
    return int(d)


def delta_g(rs: RootSystem, x) -> Q:
    """prod_{alpha>0} <alpha, x> in the documented orthonormal realization."""
    xo = rs.ortho(as_weight(x, "ortho") if not isinstance(x, Weight) else x)
    out = Q(1)
    for alpha in rs.positive_roots:
        out *= dot(alpha, xo)
    return out


@dataclass(frozen=True)
class KappaG:
    """kappa_g = prefactor * (2*pi)**two_pi_exponent, plus the ratio factor K.

    The prefactor is 1/Delta(rho) in the normalization <theta,theta> = 2 for
    long roots theta; it equals K / prod_i (exponent_i!).
    """

    prefactor: Q
    two_pi_exponent: int
    K: int


def kappa_constants(rs: RootSystem) -> KappaG:
    theta2 = rs.long_norm2()
    K = Q(1)
    for alpha in rs.positive_roots:
        K *= theta2 / dot(alpha, alpha)
    assert K.denominator == 1
    scale = Q(2) / theta2
    delta_norm = delta_g(rs, Weight(rs.rho_ortho, "ortho")) * scale ** rs.n_positive
    return KappaG(prefactor=1 / delta_norm, two_pi_exponent=rs.n_positive, K=int(K))


@dataclass(frozen=True)
class KappaTheta:
    """kappa_theta = rational * pi**(sqrt_pi_exponent/2) * (2*pi)**two_pi_exponent."""

    rational: Q
    sqrt_pi_exponent: int
    two_pi_exponent: Q


def _gamma_ratio(theta: Q, j: int) -> tuple[Q, int]:
    """Gamma(1 + j*theta) / Gamma(1 + theta) as (rational, power of sqrt(pi))."""
    if theta == 1:
        return Q(factorial(j)), 0
    if theta == 2:
        return Q(factorial(2 * j), 2), 0
    if theta == Q(1, 2):
        if j % 2 == 0:
            m = j // 2
            return Q(2 * factorial(m)), -1
        m = (j - 1) // 2
        dfact = 1
        for k in range(2 * m + 1, 0, -2):
            dfact *= k
        return Q(dfact, 2**m), 0
    raise ValueError(f"unsupported theta {theta}")


def kappa_theta(theta, n: int) -> KappaTheta:
    """Normalization constant of the diagonalization Jacobian for theta in {1/2, 1, 2}.

    kappa_theta = (2 pi)^{n(n-1) theta / 2} n! / prod_{j=1}^n Gamma(1+j theta)/Gamma(1+theta),
    kept exact as a (rational, sqrt(pi) power, (2 pi) power) triple.
    """
    theta = Q(theta)
    if n < 2:
        raise ValueError("n >= 2 required")
    rat = Q(factorial(n))
    sqrtpi = 0
    for j in range(1, n + 1):
        r, s = _gamma_ratio(theta, j)
        rat /= r
        sqrtpi -= s
    return KappaTheta(rational=rat, sqrt_pi_exponent=sqrtpi, two_pi_exponent=Q(n * (n - 1)) * theta / 2)


def is_compatible(rs: RootSystem, lam, mu, nu) -> bool:
    """True iff lambda + mu - nu lies in the root lattice."""
    a = rs.dynkin(lam)
    b = rs.dynkin(mu)
    c = rs.dynkin(nu)
    sigma = tuple(x + y - z for x, y, z in zip(a, b, c))
    rb = rs.dynkin_to_root(sigma)
    return all(v.denominator == 1 for v in rb)
