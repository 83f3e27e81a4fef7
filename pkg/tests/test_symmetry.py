import math
import random

import numpy as np
import pytest

from gkcodes import divisors as dv
from gkcodes import symmetry as sym
from gkcodes.codes import CodeSpec, build_code, make_spec
from gkcodes.curve import AffinePoint, INFINITY, P0
from gkcodes.divisors import Divisor, FunctionExpr, X, Y, Z
from gkcodes.symmetry import (
    Diagonal, FieldFrobenius, Inversion, Multiplier, Translation,
    apply_point, check_invariance, diagonal_generator, generators_for,
    induced_code_map, multiplier_generator, permutation_group_order,
    point_permutation, pullback, translation_generators, translations,
    transposition_map, validate_automorphism,
)


@pytest.fixture(scope="module")
def codeC(curve2):
    return build_code(curve2, CodeSpec("C", 3))


@pytest.fixture(scope="module")
def codeCt(curve2):
    return build_code(curve2, make_spec(curve2, "Ctilde", 3, 0))


def geometric_generators(curve):
    return translation_generators(curve) + [
        diagonal_generator(curve), multiplier_generator(curve)]


# ---------------------------------------------------------------------------
# the maps themselves
# ---------------------------------------------------------------------------

def test_validation_rejects_bad_parameters(curve2):
    with pytest.raises(ValueError):
        validate_automorphism(curve2, Translation(1, 0))   # 0^2+0 != 1^3
    with pytest.raises(ValueError):
        validate_automorphism(curve2, Diagonal(3, 1))      # lam not in F_4
    with pytest.raises(ValueError):
        validate_automorphism(curve2, Multiplier(curve2.tower.generator))


def test_every_generator_permutes_the_points(curve2, curve3):
    for cv in (curve2, curve3):
        gens = geometric_generators(cv) + [Inversion(), FieldFrobenius(1)]
        for g in gens:
            perm = point_permutation(cv, g)
            assert len(set(perm.tolist())) == cv.n_points


def test_translation_count_and_closure(curve2, curve3):
    for cv in (curve2, curve3):
        q = cv.q
        ts = translations(cv)
        assert len(ts) == q**3
        res = permutation_group_order(cv, translation_generators(cv))
        assert res.exact and res.order == q**3


def test_translation_orbits_divide_group_order(curve2):
    ts = translations(curve2)
    perms = [point_permutation(curve2, t) for t in ts]
    o2_ids = [curve2.point_id[P] for P in curve2.o2]
    seen = set()
    for i in o2_ids:
        if i in seen:
            continue
        orbit = {int(p[i]) for p in perms}
        assert 8 % len(orbit) == 0
        seen |= orbit


def test_multiplier_fixes_o1(curve2):
    eta = multiplier_generator(curve2)
    for P in curve2.o1:
        assert apply_point(curve2, eta, P) == P


def test_inversion_swaps_origin_and_infinity(curve2):
    inv = Inversion()
    assert apply_point(curve2, inv, P0) is INFINITY
    assert apply_point(curve2, inv, INFINITY) == P0
    perm = point_permutation(curve2, inv)
    perm2 = perm[perm]
    assert (perm2 == np.arange(curve2.n_points)).all()   # involution


def test_orbits_preserved(curve2):
    o1 = {curve2.point_id[P] for P in curve2.o1}
    for g in geometric_generators(curve2) + [Inversion(), FieldFrobenius(1)]:
        perm = point_permutation(curve2, g)
        assert {int(perm[i]) for i in o1} == o1


# ---------------------------------------------------------------------------
# group orders
# ---------------------------------------------------------------------------

def test_closure_orders_q2(curve2):
    q = 2
    stab = permutation_group_order(curve2, geometric_generators(curve2))
    assert stab == (72, True)
    assert stab.order == q**3 * (q * q - 1) * (q * q - q + 1)
    full = permutation_group_order(
        curve2, geometric_generators(curve2) + [Inversion()])
    assert full == (648, True)
    assert full.order == q**3 * (q**3 + 1) * (q * q - 1) * (q * q - q + 1)


def test_closure_multiplier_only(curve2):
    res = permutation_group_order(curve2, [multiplier_generator(curve2)])
    assert res == (3, True)


def test_closure_with_frobenius(curve2):
    full = geometric_generators(curve2) + [Inversion(), FieldFrobenius(1)]
    res = permutation_group_order(curve2, full, budget=10000)
    assert res == (3888, True)      # the semilinear part adds a factor 6


def test_budget_returns_lower_bound(curve2):
    res = permutation_group_order(
        curve2, geometric_generators(curve2) + [Inversion()], budget=100)
    assert not res.exact and res.order == 100


# ---------------------------------------------------------------------------
# induced code maps and invariance
# ---------------------------------------------------------------------------

def test_generators_for_families(curve2):
    gens = generators_for(curve2, CodeSpec("C", 3))
    kinds = [type(g) for g in gens]
    assert Inversion in kinds and FieldFrobenius in kinds
    gens_t = generators_for(curve2, make_spec(curve2, "Ctilde", 3, 0))
    assert Inversion not in [type(g) for g in gens_t]
    assert Multiplier in [type(g) for g in gens_t]


def test_invariance_all_generators_C(curve2, codeC):
    for g in generators_for(curve2, codeC.spec):
        cmap = induced_code_map(curve2, g, codeC)
        assert check_invariance(codeC, cmap), g


def test_invariance_all_generators_Ctilde(curve2, codeCt):
    for g in generators_for(curve2, codeCt.spec):
        cmap = induced_code_map(curve2, g, codeCt)
        assert check_invariance(codeCt, cmap), g


@pytest.fixture(scope="module")
def codeCp(curve2):
    return build_code(curve2, CodeSpec("Cprime", 3))


def test_invariance_all_generators_Cprime(curve2, codeCp):
    gens = generators_for(curve2, codeCp.spec)
    assert Inversion not in [type(g) for g in gens]
    for g in gens:
        cmap = induced_code_map(curve2, g, codeCp)
        assert check_invariance(codeCp, cmap), g


def test_extended_coordinate_scaling_is_semantic(curve2, codeCp):
    """The mapped row equals the extended evaluation of the pulled-back
    function, pinning the parameter-multiplier convention exactly."""
    tw = curve2.tower
    INF = INFINITY
    affine = [P for P in codeCp.places if P is not INF]
    b = codeCp.G.weight(INF)
    f = codeCp.basis.functions[2]
    row = codeCp.matrix[2]
    diag = diagonal_generator(curve2)
    pairs = [(diag, Diagonal(tw.inv(diag.lam), tw.inv(diag.gamma)))]
    eta = multiplier_generator(curve2)
    pairs.append((eta, Multiplier(tw.inv(eta.eta))))
    for sigma, sigma_inv in pairs:
        validate_automorphism(curve2, sigma_inv)
        cmap = induced_code_map(curve2, sigma, codeCp)
        mapped = sym.apply_code_map(tw, cmap, row[None, :])[0]
        fpull = pullback(curve2, sigma_inv, f)
        assert len(fpull) == 1
        direct = np.zeros(codeCp.n, dtype=np.int64)
        direct[: len(affine)] = dv.evaluate_over(curve2, fpull[0], affine)
        direct[-1] = dv.leading_coefficient(curve2, fpull[0], INF, b)
        assert (mapped == direct).all(), sigma


def test_inversion_rejected_on_extended_code(curve2, codeCp):
    with pytest.raises(ValueError):
        induced_code_map(curve2, Inversion(), codeCp)


def test_invariance_closed_plane_family(curve2):
    spec = make_spec(curve2, "Cbar", 2, 3)      # the 3-element orbit planes
    code = build_code(curve2, spec)
    gens = generators_for(curve2, spec)
    assert FieldFrobenius in [type(g) for g in gens]
    for g in gens:
        assert check_invariance(code, induced_code_map(curve2, g, code)), g


def test_identity_map_is_identity(curve2, codeC):
    cmap = sym.CodeMonomialMap(np.arange(codeC.n, dtype=np.int64),
                               np.ones(codeC.n, dtype=np.int64), 0)
    mapped = sym.apply_code_map(curve2.tower, cmap, codeC.matrix)
    assert (mapped == codeC.matrix).all()


def test_scalar_multiples_preserve_any_code(curve2, codeC):
    tw = curve2.tower
    cmap = sym.CodeMonomialMap(
        np.arange(codeC.n, dtype=np.int64),
        np.full(codeC.n, tw.generator, dtype=np.int64), 0)
    assert check_invariance(codeC, cmap)


def test_transposition_negative_control(curve2, codeC, codeCt):
    assert not check_invariance(codeC, transposition_map(codeC))
    assert not check_invariance(codeCt, transposition_map(codeCt))


def test_support_violations_raise(curve2, codeCt, codeC):
    with pytest.raises(ValueError):
        induced_code_map(curve2, Inversion(), codeCt)
    spec1 = make_spec(curve2, "Cbar", 2, 1)
    with pytest.raises(ValueError):
        generators_for(curve2, spec1)
    code1 = build_code(curve2, spec1)
    eta = multiplier_generator(curve2)
    with pytest.raises(ValueError):
        induced_code_map(curve2, eta, code1)   # moves the extra plane


def test_frobenius_component_needed(curve2, codeC):
    # dropping the entrywise power from the semilinear map must break it
    cmap = induced_code_map(curve2, FieldFrobenius(1), codeC)
    stripped = sym.CodeMonomialMap(cmap.perm, cmap.scale, 0)
    assert check_invariance(codeC, cmap)
    assert not check_invariance(codeC, stripped)


# ---------------------------------------------------------------------------
# pullbacks
# ---------------------------------------------------------------------------

def test_pullback_multiplier_and_diagonal_are_monomial(curve2):
    tw = curve2.tower
    eta = multiplier_generator(curve2)
    pb = pullback(curve2, eta, FunctionExpr.atom(Z))
    assert len(pb) == 1 and pb[0].scalar == eta.eta
    diag = diagonal_generator(curve2)
    pb = pullback(curve2, diag, FunctionExpr.atom(Y))
    assert len(pb) == 1 and pb[0].scalar == diag.lam


def test_pullback_inversion(curve2):
    pb = pullback(curve2, Inversion(), FunctionExpr.atom(X))
    assert len(pb) == 1
    assert dict(pb[0].powers) == {X: -1}


def test_pullback_divisor_transport(curve2):
    gens = [translation_generators(curve2)[1], diagonal_generator(curve2),
            multiplier_generator(curve2), Inversion()]
    alpha = curve2.full_fiber_abscissas[0]
    c1 = sorted(c for c in curve2.gamma0 if c)[0]
    P1 = [p for p in curve2.o1 if p is not INFINITY][1]
    atoms = [X, Y, Z, dv.x_minus(alpha), dv.x_minus(1),
             dv.z_minus(c1), dv.tangent_at(P1)]
    for sigma in gens:
        perm = point_permutation(curve2, sigma)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        for A in atoms:
            pb = pullback(curve2, sigma, FunctionExpr.atom(A))
            D = dv.principal_divisor(curve2, A)
            want = Divisor(
                {curve2.points[int(inv[curve2.point_id[P]])]: w
                 for P, w in D.items()})
            got = {}
            for P in curve2.points:
                v = dv.sum_valuation(curve2, pb, P)
                if v:
                    got[P] = v
            assert Divisor(got) == want, (sigma, A)


def test_pullback_rejects_frobenius(curve2):
    with pytest.raises(ValueError):
        pullback(curve2, FieldFrobenius(1), FunctionExpr.atom(X))


def test_curve_equations_preserved_symbolically(curve2, curve3):
    # residuals of both equations vanish at every image point
    for cv in (curve2, curve3):
        rng = random.Random(20)
        pts = rng.sample(cv.affine_points(), 25)
        for g in geometric_generators(cv) + [Inversion(), FieldFrobenius(1)]:
            for P in pts:
                assert cv.is_on_curve(apply_point(cv, g, P))


def test_r_parameter_convention(curve2):
    # r = gcd(s, (q^2-q+1)/gcd(3, q+1)) with s the family's own plane count
    q = 2
    delta = math.gcd(3, q + 1)
    assert delta == 3
    for s in (1, 2, 3):
        assert math.gcd(s, (q * q - q + 1) // delta) == 1
