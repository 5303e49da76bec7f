import random
from fractions import Fraction as Q

import math
import pytest

from hornvol._exact import p2_add, p2_eval, p2_scale, p2_sub
from hornvol.bzpolytope import bz_polygon_b2
from hornvol.ehrhart import leading_coefficient, stretching_quasi_polynomial
from hornvol.rootsys import Weight, apply_weyl, b2_weyl_table, build_root_system
from hornvol.volume import (
    IncompatibleTripleError,
    NotShiftableError,
    SingularLine,
    b2_dynkin_to_ortho,
    c_kappa_via_kissinger,
    c1_wall_discrepancies,
    delta_b2,
    four_prong_vertices,
    horn_contains_b2,
    horn_polygon,
    j_b2,
    j_lr_shifted,
    j_lr_unshifted,
    j_so2_symmetric,
    kappa_coefficient_sets,
    kissinger_quasi_polynomial,
    pdf_b2,
    pdf_normalization_integral,
    piecewise_analyze_b2,
    singular_lines_b2,
    so2_support,
    volume_routes,
)

B2 = build_root_system("B", 2)
RHO = (Q(3, 2), Q(1, 2))


# -- direct evaluation ---------------------------------------------------------


def test_j_fig8_value():
    assert j_b2((Q(15, 2), Q(7, 2)), (Q(13, 2), Q(3, 2)), (4, 2)) == Q(7, 4)


def test_j_outside_horn_polygon_is_zero():
    assert j_b2((17, 4), (15, 9), (40, 1)) == 0
    assert j_b2((17, 4), (15, 9), (1, 0)) == 0


def test_j_homogeneity():
    base = j_b2((Q(15, 2), Q(7, 2)), (Q(13, 2), Q(3, 2)), (4, 2))
    assert j_b2((Q(45, 2), Q(21, 2)), (Q(39, 2), Q(9, 2)), (12, 6)) == 9 * base == Q(63, 4)
    s = Q(2, 3)
    scaled = j_b2(
        (Q(15, 2) * s, Q(7, 2) * s), (Q(13, 2) * s, Q(3, 2) * s), (4 * s, 2 * s)
    )
    assert scaled == s**2 * base


def test_j_weyl_skew_invariance():
    rng = random.Random(23)
    for _ in range(5):
        pts = [
            (Q(rng.randint(-9, 9), rng.randint(1, 4)), Q(rng.randint(-9, 9), rng.randint(1, 4)))
            for _ in range(3)
        ]
        alpha, beta, gamma = pts
        base = j_b2(alpha, beta, gamma)
        for w in b2_weyl_table():
            wa = apply_weyl(B2, w, Weight(alpha, "ortho")).coords
            assert j_b2(wa, beta, gamma) == w.sign * base
            wg = apply_weyl(B2, w, Weight(gamma, "ortho")).coords
            assert j_b2(alpha, beta, wg) == w.sign * base


def test_j_symmetric_in_alpha_beta():
    rng = random.Random(29)
    for _ in range(6):
        a = (Q(rng.randint(5, 20)), Q(rng.randint(1, 4)))
        b = (Q(rng.randint(5, 20)), Q(rng.randint(1, 4)))
        g = (Q(rng.randint(0, 25)), Q(rng.randint(0, 8)))
        assert j_b2(a, b, g) == j_b2(b, a, g)


def test_j_positive_inside_support():
    alpha, beta = (Q(17), Q(4)), (Q(15), Q(9))
    poly = horn_polygon(alpha, beta)
    rng = random.Random(31)
    xs = [v[0] for v in poly.vertices]
    ys = [v[1] for v in poly.vertices]
    found = 0
    while found < 60:
        p = (
            Q(rng.randint(int(min(xs) * 8), int(max(xs) * 8)), 8),
            Q(rng.randint(int(min(ys) * 8), int(max(ys) * 8)), 8),
        )
        if poly.contains(p, strict=True):
            assert j_b2(alpha, beta, p) > 0
            found += 1


# -- Horn polygon ---------------------------------------------------------------


def test_horn_contains_examples():
    assert horn_contains_b2((17, 4), (15, 9), (32, 13))   # top corner gamma = alpha + beta
    assert not horn_contains_b2((17, 4), (15, 9), (40, 0))
    with pytest.raises(ValueError):
        horn_contains_b2((4, 17), (15, 9), (10, 5))


def test_horn_polygon_is_support_of_j():
    # support containment holds on the dominant chamber g1 >= g2 >= 0
    # (outside the chamber J continues by Weyl skew-symmetry)
    alpha, beta = (Q(17), Q(4)), (Q(15), Q(9))
    poly = horn_polygon(alpha, beta)
    rng = random.Random(37)
    checked = 0
    while checked < 120:
        p = (Q(rng.randint(0, 400), 8), Q(rng.randint(0, 250), 8))
        if p[0] < p[1] or p[1] < 0:
            continue
        checked += 1
        if not poly.contains(p):
            assert j_b2(alpha, beta, p) == 0


# -- singular lines --------------------------------------------------------------


def test_singular_line_levels():
    lines = singular_lines_b2((17, 4), (15, 9))
    levels = {k: sorted(l.level for l in lines if l.kind == k) for k in ("g1", "g2", "g1+g2", "g1-g2")}
    assert levels["g1"] == [8, 11, 13, 19, 26]
    assert levels["g2"] == [2, 5, 8, 11, 13]
    assert levels["g1+g2"] == [11, 15, 19, 27, 37]
    assert levels["g1-g2"] == [3, 7, 11, 15, 19]


def test_four_prong_vertices_lie_on_four_lines():
    lines = singular_lines_b2((17, 4), (15, 9))
    for name, p in four_prong_vertices((17, 4), (15, 9)).items():
        assert sum(1 for l in lines if l.value(p) == 0) == 4, name


def test_equal_arguments_merge_lines():
    lines = singular_lines_b2((10, 3), (10, 3))
    # |a1-b1| = |a2-b2| = 0 merge into a single gamma2 = 0 candidate
    zero_lines = [l for l in lines if l.kind == "g2" and l.level == 0]
    assert len(zero_lines) == 1
    assert "," in zero_lines[0].source


def test_four_prong_identity():
    # x^2 + y^2 = ((x+y)/sqrt2)^2 + ((x-y)/sqrt2)^2 as exact polynomials
    for c1, c2 in [(Q(26), Q(11)), (Q(19), Q(8))]:
        g1 = SingularLine("g1", c1, "").delta_squared()
        g2 = SingularLine("g2", c2, "").delta_squared()
        gp = SingularLine("g1+g2", c1 + c2, "").delta_squared()
        gm = SingularLine("g1-g2", c1 - c2, "").delta_squared()
        assert p2_add(g1, g2) == p2_add(gp, gm)


# -- piecewise analysis -----------------------------------------------------------


@pytest.fixture(scope="module")
def pw_left():
    return piecewise_analyze_b2((17, 4), (15, 9))


@pytest.fixture(scope="module")
def pw_right():
    return piecewise_analyze_b2((15, 3), (17, 8))


def test_piecewise_no_violations(pw_left, pw_right):
    assert pw_left.violations() == []
    assert pw_right.violations() == []


def test_piecewise_swap_normalization():
    pw = piecewise_analyze_b2((15, 9), (17, 4))
    assert pw.swapped
    assert pw.alpha == (Q(17), Q(4))


def test_piecewise_cells_reproduce_j(pw_left):
    rng = random.Random(41)
    for _ in range(200):
        p = (Q(rng.randint(40, 260), 8), Q(rng.randint(0, 152), 8))
        i = pw_left.cell_at(p)
        if i is not None:
            assert p2_eval(pw_left.cells[i].poly, *p) == j_b2(pw_left.alpha, pw_left.beta, p)


def test_piecewise_wall_classes(pw_left):
    kinds = {w.classification for w in pw_left.walls}
    assert "quadratic-ramp" in kinds
    assert "boundary-linear" in kinds
    assert "violation" not in kinds
    for w in pw_left.walls:
        if w.classification == "quadratic-ramp":
            hi, lo = w.cells
            diff = p2_sub(pw_left.cells[hi].poly, pw_left.cells[lo].poly)
            expected = p2_scale(Q(w.jump_sign, 2), SingularLine(w.kind, w.level, "").delta_squared())
            assert diff == expected


def test_piecewise_jumps_telescope_around_loops(pw_left):
    # single-valuedness: summing the oriented jumps along any closed chain of
    # cells telescopes to zero
    cells = pw_left.cells
    walls = [w for w in pw_left.walls if len(w.cells) == 2]
    chain = [walls[0].cells[0]]
    acc = {}
    seen = set()
    cur = chain[0]
    for _ in range(6):
        nxt = next((w for w in walls if cur in w.cells and tuple(sorted(w.cells)) not in seen), None)
        if nxt is None:
            break
        other = nxt.cells[0] if nxt.cells[1] == cur else nxt.cells[1]
        seen.add(tuple(sorted(nxt.cells)))
        acc = p2_add(acc, p2_sub(cells[other].poly, cells[cur].poly))
        cur = other
    acc = p2_add(acc, p2_sub(cells[chain[0]].poly, cells[cur].poly))
    assert acc == {}


def test_piecewise_c1(pw_left):
    h = Q(1, 10000)
    disc = c1_wall_discrepancies(pw_left, h)
    assert disc
    assert all(d <= 10 * h for _, d in disc)


def test_dashed_walls_vanish_linearly(pw_left):
    dashed = [w for w in pw_left.walls if w.classification == "boundary-linear"]
    assert dashed
    for w in dashed:
        assert (w.kind, w.level) in {("g2", Q(0)), ("g1-g2", Q(0))}
        cell = pw_left.cells[w.cells[0]]
        (p, q) = w.segment
        mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
        assert p2_eval(cell.poly, *mid) == 0
        # normal derivative generically nonzero: the vanishing is linear, not quadratic
        assert cell.poly != {}


def test_detected_nonanalyticities_lie_on_candidate_lines(pw_left):
    candidates = {(l.kind, l.level) for l in pw_left.lines}
    for w in pw_left.walls:
        if w.classification == "quadratic-ramp" and w.jump_sign != 0:
            assert (w.kind, w.level) in candidates


# -- J-LR relations -----------------------------------------------------------


def test_kappa_sum_rules():
    from hornvol.rootsys import weyl_dimension

    K, Khat = kappa_coefficient_sets(B2)
    assert K == {(0, 0): Q(3, 8), (1, 0): Q(1, 8)}
    assert Khat == {(0, 1): Q(1, 4)}
    assert sum(c * weyl_dimension(B2, k) for k, c in K.items()) == 1
    assert sum(c * weyl_dimension(B2, k) for k, c in Khat.items()) == 1


def test_j_lr_shifted_examples():
    assert j_lr_shifted((0, 0), (0, 0), (0, 0)) == Q(3, 8)
    assert j_b2(RHO, RHO, RHO) == Q(3, 8)
    with pytest.raises(IncompatibleTripleError):
        j_lr_shifted((0, 1), (0, 1), (0, 1))


def test_j_lr_shifted_equals_direct_on_sweep():
    rng = random.Random(47)
    count = 0
    while count < 25:
        lam = (rng.randint(0, 4), rng.randint(0, 4))
        mu = (rng.randint(0, 4), rng.randint(0, 4))
        nu = (rng.randint(0, 5), rng.randint(0, 5))
        if (lam[1] + mu[1] - nu[1]) % 2:
            continue
        count += 1
        shifted = [b2_dynkin_to_ortho(tuple(v + 1 for v in w)) for w in (lam, mu, nu)]
        assert j_lr_shifted(lam, mu, nu) == j_b2(*shifted)


def test_j_lr_unshifted_examples():
    assert j_lr_unshifted((4, 7), (5, 3), (2, 4)) == Q(7, 4)
    with pytest.raises(NotShiftableError):
        j_lr_unshifted((0, 2), (1, 1), (1, 1))
    with pytest.raises(IncompatibleTripleError):
        j_lr_unshifted((1, 1), (1, 1), (1, 1))


def test_deep_nu_formula():
    # J(lam, mu; nu) = 1/4 sum_k C_{(lam-rho)(mu-rho)}^{nu-k}, k in the spinor shifts
    from hornvol.multiplicity import lr_klimyk

    lam, mu, nu = (4, 7), (5, 3), (2, 4)
    ks = [(2, 0), (1, 2), (1, 0), (0, 2)]
    total = Q(0)
    for k in ks:
        target = (nu[0] - k[0], nu[1] - k[1])
        if all(v >= 0 for v in target):
            total += lr_klimyk(B2, (3, 6), (4, 2), target)
    assert Q(1, 4) * total == Q(7, 4)


def test_j_lr_unshifted_equals_direct_on_sweep():
    rng = random.Random(53)
    count = 0
    while count < 25:
        lam = (rng.randint(1, 5), rng.randint(1, 5))
        mu = (rng.randint(1, 5), rng.randint(1, 5))
        nu = (rng.randint(1, 6), rng.randint(1, 6))
        if (lam[1] + mu[1] - nu[1]) % 2:
            continue
        count += 1
        direct = j_b2(b2_dynkin_to_ortho(lam), b2_dynkin_to_ortho(mu), b2_dynkin_to_ortho(nu))
        assert j_lr_unshifted(lam, mu, nu) == direct


# -- c_kappa ---------------------------------------------------------------------


def test_c_kappa_b2():
    assert c_kappa_via_kissinger(B2, (0, 0)) == Q(3, 8)
    assert c_kappa_via_kissinger(B2, (1, 0)) == Q(1, 8)
    assert c_kappa_via_kissinger(B2, (0, 1)) == Q(1, 4)
    with pytest.raises(ValueError):
        c_kappa_via_kissinger(B2, (2, 2))


def test_c_kappa_b2_quasi_polynomial_shape():
    quasi, samples = kissinger_quasi_polynomial(B2, (0, 0))
    assert quasi.coeffs[0] == (Q(1), Q(3, 4), Q(3, 8))
    assert quasi.coeffs[1] == (Q(0), Q(0), Q(0))
    assert [samples[s] for s in (0, 2, 4)] == [1, 4, 10]
    assert all(samples[s] == 0 for s in (1, 3, 5))


def test_c_kappa_matches_direct_j():
    for kappa in ((0, 0), (1, 0), (0, 1)):
        shifted = b2_dynkin_to_ortho((kappa[0] + 1, kappa[1] + 1))
        assert c_kappa_via_kissinger(B2, kappa) == j_b2(RHO, RHO, shifted)


# -- four routes ----------------------------------------------------------------


def test_four_route_agreement_pinned():
    vr = volume_routes((4, 7), (5, 3), (2, 4))
    assert set(vr.values().values()) == {Q(7, 4)}
    vr = volume_routes((5, 6), (3, 4), (5, 6))
    assert set(vr.values().values()) == {Q(6)}


def test_four_route_agreement_degenerate():
    vr = volume_routes((5, 6), (3, 4), (0, 10))
    assert vr.agree()
    assert set(vr.values().values()) == {Q(0)}


def test_shifted_identity_of_methods():
    # J(lam', mu'; nu') = K-sum = Ehrhart leading coefficient = polygon area,
    # everything evaluated on the rho-shifted (non-compatible) triple
    rng = random.Random(61)
    checked = 0
    while checked < 6:
        lam = (rng.randint(0, 3), rng.randint(0, 3))
        mu = (rng.randint(0, 3), rng.randint(0, 3))
        nu = (rng.randint(0, 4), rng.randint(0, 4))
        if (lam[1] + mu[1] - nu[1]) % 2:
            continue
        checked += 1
        shifted_dyn = [tuple(v + 1 for v in w) for w in (lam, mu, nu)]
        direct = j_b2(*(b2_dynkin_to_ortho(w) for w in shifted_dyn))
        assert direct == j_lr_shifted(lam, mu, nu)
        P = bz_polygon_b2(*shifted_dyn)
        assert direct == (P.area() if P.dim == 2 else Q(0))
        quasi, _ = stretching_quasi_polynomial(B2, *shifted_dyn)
        assert direct == leading_coefficient(quasi, skip_zero_classes=True)


def test_b3_lr_and_ehrhart_routes_agree():
    b3 = build_root_system("B", 3)
    for triple in [((1, 1, 2), (1, 1, 2), (1, 1, 2)), ((1, 1, 1), (1, 1, 1), (1, 1, 2))]:
        vr = volume_routes(*triple, routes=("lr", "ehrhart"), rs=b3)
        assert vr.agree() and len(vr.values()) == 2
    with pytest.raises(ValueError):
        volume_routes((1, 1, 1), (1, 1, 1), (1, 1, 1), routes=("direct",), rs=b3)


def test_route_identities_on_random_sweep():
    rng = random.Random(59)
    checked = 0
    while checked < 10:
        lam = (rng.randint(1, 4), rng.randint(1, 4))
        mu = (rng.randint(1, 4), rng.randint(1, 4))
        nu = (rng.randint(1, 5), rng.randint(1, 5))
        if (lam[1] + mu[1] - nu[1]) % 2:
            continue
        checked += 1
        assert volume_routes(lam, mu, nu).agree()


# -- PDF ------------------------------------------------------------------------


def test_pdf_zero_outside_and_on_wall():
    assert pdf_b2((17, 4), (15, 9), (40, 0)) == 0
    assert pdf_b2((17, 4), (15, 9), (20, 0)) == 0  # Delta vanishes on the wall
    assert delta_b2((20, 0)) == 0


def test_pdf_normalization_exact():
    assert pdf_normalization_integral((17, 4), (15, 9)) == 1
    assert pdf_normalization_integral((Q(11, 2), Q(3, 2)), (5, 2)) == 1


def test_multiplicity_one_scaling_diagnostic_runs():
    # an open question: never asserted, only reported
    from hornvol.volume import multiplicity_one_scaling_diagnostic

    found = multiplicity_one_scaling_diagnostic(max_label=2, smax=3)
    print(f"multiplicity-one scaling diagnostic: {len(found)} exception(s) found")
    for item in found:
        print("  finding:", item)


# -- SO(2) ----------------------------------------------------------------------


def test_so2_support_and_divergence():
    assert so2_support(1, 2) == (1, 3)
    assert j_so2_symmetric(1, 2, Q(1, 2)) == 0.0
    assert j_so2_symmetric(1, 2, 4) == 0.0
    assert j_so2_symmetric(1, 2, 1) == math.inf
    assert j_so2_symmetric(1, 2, 3) == math.inf
    assert j_so2_symmetric(1, 2, 2) > 0
    with pytest.raises(ValueError):
        j_so2_symmetric(0, 2, 1)


def test_so2_closed_form_value():
    # at gamma^2 = (A+B)/2 the arcsin argument is 0: the density there is
    # 2 gamma / (pi sqrt((A - g^2)(g^2 - B))) with A=9, B=1 for (1,2)
    g = math.sqrt(5.0)
    val = j_so2_symmetric(1, 2, Q(2236067977499790, 10**15))
    expect = 2 / math.pi**2 * math.sqrt((1 * 2 * math.sqrt(5)) / ((9 - 5) * (5 - 1)))
    assert abs(val - expect) < 1e-6
