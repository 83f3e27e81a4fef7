import numpy as np
import pytest

from gkcodes import codes as cd
from gkcodes import linalg
from gkcodes.curve import INFINITY
from gkcodes.divisors import Divisor, divisor_of, evaluate_over
from gkcodes.codes import (
    CodeSpec, OmegaVerificationError, auto_planes, build_code,
    certified_distance, dual_code, exhaustive_min_distance,
    formula_m_range, gamma0_frobenius_orbits, make_spec,
    omega_equivalence, singleton_defect, table_row,
    witness_function, witness_min_weight,
)


@pytest.fixture(scope="module")
def codeC(curve2):
    return build_code(curve2, CodeSpec("C", 3))


@pytest.fixture(scope="module")
def codeCp(curve2):
    return build_code(curve2, CodeSpec("Cprime", 3))


@pytest.fixture(scope="module")
def codeCbar(curve2):
    return build_code(curve2, make_spec(curve2, "Cbar", 2, 1))


@pytest.fixture(scope="module")
def codeCt(curve2):
    return build_code(curve2, make_spec(curve2, "Ctilde", 3, 0))


# ---------------------------------------------------------------------------
# family parameters
# ---------------------------------------------------------------------------

def test_code_C_parameters(codeC):
    assert (codeC.n, codeC.k, codeC.dstar) == (216, 18, 189)
    assert codeC.G.degree == 27
    assert codeC.matrix.shape == (18, 216)


def test_code_Cprime_parameters(codeCp):
    assert (codeCp.n, codeCp.k, codeCp.dstar) == (217, 18, 190)
    assert codeCp.places[-1] is INFINITY


def test_code_Cbar_parameters(codeCbar):
    assert (codeCbar.n, codeCbar.k, codeCbar.dstar) == (208, 25, 174)
    assert codeCbar.G.degree == 34
    # the two closed spellings of the designed distance agree
    q, m, s = 2, 2, 1
    assert codeCbar.dstar == codeCbar.n - codeCbar.G.degree
    assert codeCbar.dstar == q**8 - q**6 + q**5 - (m + 1) * (s + 1) * q**3 - m


def test_code_Ctilde_parameters(codeCt):
    assert (codeCt.n, codeCt.k, codeCt.dstar) == (217, 15, 193)
    assert codeCt.G.weight(INFINITY) == 0
    assert codeCt.places[-1] is INFINITY


def test_dimension_formulas_in_range(curve2, codeC, codeCp, codeCbar):
    g = curve2.genus
    assert codeC.k == codeC.G.degree + 1 - g
    assert codeCp.k == codeCp.G.degree + 1 - g
    assert codeCbar.k == 2 * (1 + 2 * 8) + 1 - g


def test_m_ranges(curve2):
    assert formula_m_range(curve2, CodeSpec("C", 3)) == (3, 23)
    assert formula_m_range(curve2, CodeSpec("Cprime", 3)) == (3, 24)
    assert formula_m_range(curve2, make_spec(curve2, "Cbar", 2, 1)) == (2, 12)
    assert formula_m_range(curve2, make_spec(curve2, "Ctilde", 3, 0)) == (3, 27)


def test_dimension_ladder_matches_formula(curve2):
    g = curve2.genus
    for m in (3, 7, 15, 23):
        code = build_code(curve2, CodeSpec("C", m))
        assert code.k == 9 * m + 1 - g


def test_coordinates_follow_enumeration_order(curve2, codeC):
    ids = [curve2.point_id[P] for P in codeC.places]
    assert ids == sorted(ids)


def test_spec_validation(curve2):
    with pytest.raises(ValueError):
        CodeSpec("Cquux", 3)
    with pytest.raises(ValueError):
        CodeSpec("C", 3, s=1, planes=(0, 5))
    with pytest.raises(ValueError):
        CodeSpec("Cbar", 2, s=1, planes=(5, 0))    # c_0 must lead
    with pytest.raises(ValueError):
        CodeSpec("Ctilde", 0)
    with pytest.raises(ValueError):
        make_spec(curve2, "Cbar", 2, 1, planes=(0, 3))   # 3 not in Gamma0


def test_dstar_positive_guard(curve2):
    with pytest.raises(ValueError):
        build_code(curve2, CodeSpec("C", 24))    # d* = 0 is refused


def test_out_of_formula_range_reports_instead(curve2):
    # m = 2 sits below the formula range; the build measures k = 10 (the
    # divisor is canonical) and the table reports the mismatch untripped
    code = build_code(curve2, CodeSpec("C", 2))
    assert code.k == 10
    row = table_row(curve2, code.spec, code)
    assert not row["m_in_range"]
    assert row["k_measured"] == 10 and row["k_formula"] == 9


# ---------------------------------------------------------------------------
# plane selection
# ---------------------------------------------------------------------------

def test_gamma0_orbits(curve2):
    orbits = gamma0_frobenius_orbits(curve2)
    assert sorted(len(o) for o in orbits) == [3, 6, 6, 6, 6]
    assert sum(len(o) for o in orbits) == 27
    tw = curve2.tower
    for orb in orbits:
        assert {tw.frobenius(c, 1) for c in orb} == set(orb)


def test_auto_planes(curve2):
    assert auto_planes(curve2, 0) == (0,)
    p3 = auto_planes(curve2, 3)
    assert len(p3) == 4 and p3[0] == 0
    tw = curve2.tower
    nonzero = set(p3) - {0}
    assert {tw.frobenius(c, 1) for c in nonzero} == nonzero
    p1 = auto_planes(curve2, 1)           # no closed union: sorted fallback
    assert p1 == (0, min(c for c in curve2.gamma0 if c))


# ---------------------------------------------------------------------------
# distance witnesses
# ---------------------------------------------------------------------------

def test_witness_weights(curve2, codeC, codeCp, codeCt):
    for code in (codeC, codeCp, codeCt):
        word = witness_min_weight(curve2, code.spec, code)
        assert int(np.count_nonzero(word)) == code.dstar


def test_witness_zero_pattern_C(curve2, codeC):
    word = witness_min_weight(curve2, codeC.spec, codeC)
    zeros = {codeC.places[i] for i in np.nonzero(word == 0)[0]}
    chosen = set()
    for a in curve2.full_fiber_abscissas[:3]:
        chosen |= set(curve2.plane_section_x(a))
    assert zeros == chosen and len(zeros) == 27


def test_witness_lengthening_shares_zero_count(curve2, codeC, codeCp):
    wc = witness_min_weight(curve2, codeC.spec, codeC)
    wp = witness_min_weight(curve2, codeCp.spec, codeCp)
    assert int((wc == 0).sum()) == int((wp == 0).sum()) == 27
    assert wp[-1] != 0      # the extended coordinate at infinity is nonzero
    assert codeC.n - codeC.dstar == codeCp.n - codeCp.dstar


def test_witness_is_a_codeword(curve2, codeC):
    tw = curve2.tower
    word = witness_min_weight(curve2, codeC.spec, codeC)
    assert linalg.rank(tw, np.vstack([codeC.matrix, word])) == codeC.k


def test_witness_pole_divisor_is_G(curve2, codeC):
    f = witness_function(curve2, codeC.spec)
    D = divisor_of(curve2, f)
    poles = Divisor({P: -w for P, w in D.items() if w < 0})
    assert poles == codeC.G


def test_witness_unavailable_for_Cbar(curve2, codeCbar):
    with pytest.raises(ValueError):
        witness_function(curve2, codeCbar.spec)
    assert certified_distance(codeCbar) is None


def test_witness_needs_enough_fibers_and_planes(curve2):
    with pytest.raises(ValueError):
        witness_function(curve2, CodeSpec("C", 25))        # 24 full fibers
    with pytest.raises(ValueError):
        witness_function(curve2, CodeSpec("Ctilde", 28))   # 27 spare planes


def test_singleton_defects(curve2, codeC, codeCp, codeCbar):
    assert singleton_defect(codeC) == 10 == curve2.genus
    assert singleton_defect(codeCp) == 10
    with pytest.raises(ValueError):
        singleton_defect(codeCbar)


# ---------------------------------------------------------------------------
# duals
# ---------------------------------------------------------------------------

def test_dual_dimension_and_orthogonality(curve2, codeC):
    tw = curve2.tower
    dual = dual_code(codeC)
    assert dual.k == 198 == codeC.n - codeC.G.degree + curve2.genus - 1
    assert not linalg.matmul(tw, codeC.matrix, dual.matrix.T).any()


def test_dual_involution(curve2, codeC):
    tw = curve2.tower
    dd = dual_code(dual_code(codeC))
    assert dd.k == codeC.k
    assert linalg.row_space_equal(tw, dd.matrix, codeC.matrix)


def test_dual_of_zero_code(curve2):
    zero = cd.LinearCode(curve2, None, np.zeros((0, 6), dtype=np.int64),
                         6, 0, None, None, tuple(range(6)))
    assert dual_code(zero).k == 6


# ---------------------------------------------------------------------------
# differential-code equivalence
# ---------------------------------------------------------------------------

def test_omega_equivalence(curve2):
    u = omega_equivalence(curve2, 3)
    assert len(u) == 216 and (u != 0).all()


def test_omega_degree_bookkeeping(curve2):
    q, g = 2, curve2.genus
    m = 3
    mprime = q**5 - q**3 + q * q - m - 2
    degK_D = 2 * g - 2 + 216
    assert (mprime + m) * 9 == degK_D


def test_omega_rejects_out_of_range(curve2):
    with pytest.raises(ValueError):
        omega_equivalence(curve2, 2**5 - 2**3 + 4 - 2)


# ---------------------------------------------------------------------------
# distance tooling
# ---------------------------------------------------------------------------

def test_exact_search_small_subcode(curve2, codeC):
    tw = curve2.tower
    sub = cd.LinearCode(curve2, None, codeC.matrix[:2], codeC.n, 2,
                        None, None, codeC.places)
    res = exhaustive_min_distance(sub, budget=1 << 13)
    assert res.exact and res.method == "exhaustive"
    # oracle: scan all 63 + 63*63 nonzero combinations directly
    best = codeC.n
    for i in range(1, 64):
        row = tw.mul_arr(np.int64(i), codeC.matrix[0])
        for j in range(64):
            word = tw.add_arr(row, tw.mul_arr(np.int64(j), codeC.matrix[1]))
            w = int(np.count_nonzero(word))
            if w:
                best = min(best, w)
    assert res.lower == best


def test_sandwich_certified_by_witness(codeC):
    res = exhaustive_min_distance(codeC, budget=1 << 10)
    assert res == (189, 189, True, "witness")


def test_interval_for_Cbar(codeCbar):
    res = exhaustive_min_distance(codeCbar, budget=1 << 12)
    assert res.lower == 174
    assert res.lower <= res.upper <= codeCbar.n
    assert not res.exact


# ---------------------------------------------------------------------------
# table rows
# ---------------------------------------------------------------------------

def test_table_row_C(curve2, codeC):
    row = table_row(curve2, codeC.spec, codeC)
    assert row["n"] == 216 and row["k_measured"] == 18 and row["d"] == 189
    assert row["m_in_range"] and row["m_range"] == [3, 23]


def test_table_row_Cbar_reports_bound(curve2, codeCbar):
    row = table_row(curve2, codeCbar.spec, codeCbar)
    assert row["d"] == ">= 174"
    assert row["k_measured"] == row["k_formula"] == 25


def test_table_row_Ctilde_flags_variant(curve2, codeCt):
    row = table_row(curve2, codeCt.spec, codeCt)
    assert row["k_measured"] == 15
    assert row["k_formula"] == 15
    assert row["k_formula_variant"] == 16
    assert row["k_matches"] == "riemann_roch"


def test_q3_instance(curve3):
    q, g = 3, curve3.genus
    code = build_code(curve3, CodeSpec("C", 8))
    assert code.n == q**8 - q**6 + q**5 - q**3 == 6048
    assert code.k == 8 * 28 + 1 - g == 126
    assert code.dstar == 6048 - 224
    word = witness_min_weight(curve3, code.spec, code)
    assert int(np.count_nonzero(word)) == code.dstar
