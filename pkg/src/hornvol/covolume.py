"""Squared covolume delta_r of the lattice of integer points in aff(Part(sigma)).

Two independent computations are cross-checked:

* the Gram-determinant construction: express each non-simple positive root
  over the simple ones (matrix A), form G = I + A A^T and take det G;
* the closed formula (h_dual)^r / det(C) * prod_i <theta,theta>/<alpha_i,alpha_i>.

Both are compared against the tabulated closed-form values, which are
extrapolations for the classical families at high rank; a mismatch there
would be a finding about the table, not about the arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

from ._exact import det_bareiss, det_fraction, dot
from .rootsys import RootSystem, build_root_system


@dataclass(frozen=True)
class CovolumeReport:
    family: str
    rank: int
    delta_gram: int
    delta_formula: Q
    table1_value: int | None

    @property
    def agree(self) -> bool:
        vals = {self.delta_gram, self.delta_formula}
        if self.table1_value is not None:
            vals.add(self.table1_value)
        return len(vals) == 1

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "delta_gram": self.delta_gram,
            "delta_formula": str(self.delta_formula),
            "table1_value": self.table1_value,
            "agree": self.agree,
        }


def _nonsimple_in_simple_basis(rs: RootSystem) -> list[tuple[int, ...]]:
    simple_keys = set()
    for i in range(rs.rank):
        simple_keys.add(tuple(1 if j == i else 0 for j in range(rs.rank)))
    return [k for k in rs.positive_roots_rb if k not in simple_keys]


def gram_delta(rs: RootSystem) -> int:
    """det(I + A A^T) with A the non-simple positive roots over the simple ones."""
    A = _nonsimple_in_simple_basis(rs)
    m = len(A)
    G = [[(1 if a == b else 0) + sum(A[a][i] * A[b][i] for i in range(rs.rank)) for b in range(m)] for a in range(m)]
    d = det_bareiss(G)
    assert d >= 1
    return d


def formula_delta(rs: RootSystem) -> Q:
    """(h_dual)^r / det(Cartan) * prod over simple roots of <theta,theta>/<alpha_i,alpha_i>."""
    detC = det_fraction(rs.cartan_matrix)
    theta2 = rs.long_norm2()
    ratios = Q(1)
    for a in rs.simple_roots:
        ratios *= theta2 / dot(a, a)
    return Q(rs.dual_coxeter_number) ** rs.rank / detC * ratios


def table1_delta(family: str, rank: int) -> int:
    """The tabulated closed-form squared covolume."""
    if family == "A":
        return (rank + 1) ** (rank - 1)
    if family == "B":
        return (2 * rank - 1) ** rank
    if family == "C":
        return 2 ** (rank - 2) * (rank + 1) ** rank
    if family == "D":
        return 2 ** (rank - 2) * (rank - 1) ** rank
    return {
        "E6": 2**12 * 3**5,
        "E7": 2**6 * 3**14,
        "E8": 2**8 * 3**8 * 5**8,
        "F4": 2**2 * 3**8,
        "G2": 2**4 * 3,
    }[family]


def covolume_report(family: str, rank: int | None = None) -> CovolumeReport:
    rs = build_root_system(family, rank)
    return CovolumeReport(
        family=rs.family,
        rank=rs.rank,
        delta_gram=gram_delta(rs),
        delta_formula=formula_delta(rs),
        table1_value=table1_delta(rs.family, rs.rank),
    )


def covolume_table(families=("A", "B", "C", "D"), max_rank: int = 8, exceptional=("G2", "F4", "E6")) -> list[CovolumeReport]:
    """Reports for the classical families up to max_rank plus chosen exceptionals."""
    out = []
    minimum = {"A": 1, "B": 2, "C": 2, "D": 3}
    for fam in families:
        for r in range(minimum[fam], max_rank + 1):
            out.append(covolume_report(fam, r))
    for fam in exceptional:
        out.append(covolume_report(fam))
    return out


def covolume_markdown(reports: list[CovolumeReport]) -> str:
    lines = [
        "| algebra | N_r | d_r | delta (Gram) | delta (formula) | tabulated | agree |",
        "|---------|-----|-----|--------------|-----------------|-----------|-------|",
    ]
    for rep in reports:
        rs = build_root_system(rep.family, rep.rank)
        name = f"{rep.family}{rep.rank}" if rep.family in "ABCD" else rep.family
        lines.append(
            f"| {name} | {rs.n_positive} | {rs.n_positive - rs.rank} | {rep.delta_gram} "
            f"| {rep.delta_formula} | {rep.table1_value} | {'yes' if rep.agree else 'NO'} |"
        )
    return "\n".join(lines) + "\n"
