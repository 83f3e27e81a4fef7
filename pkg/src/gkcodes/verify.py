"""Machine-checkable verification suites behind the `verify` subcommand.

Each check is a named callable on a lazily-built context; the runner emits
one record per check and a nonzero exit status if anything fails.  Check
names describe the claim being tested, e.g. "codes:dimension-formula-Cbar".

At q = 2 everything runs exhaustively; at q = 3 the expensive suites switch
to documented samples (the runner passes the curve, the checks decide).
"""

import random
import time

import numpy as np

from .curve import INFINITY, P0
from . import divisors as dv
from . import riemann_roch as rr
from . import codes as cd
from . import symmetry as sym
from . import linalg


class Context:
    """Lazy per-run cache of towers, curves and built codes."""

    def __init__(self, p, e=1):
        from .curve import make_curve
        self.curve = make_curve(p, e)
        self.tower = self.curve.tower
        self._codes = {}

    def code(self, family, m, s=0):
        key = (family, m, s)
        if key not in self._codes:
            spec = cd.make_spec(self.curve, family, m, s)
            self._codes[key] = cd.build_code(self.curve, spec)
        return self._codes[key]


# ---------------------------------------------------------------------------
# field
# ---------------------------------------------------------------------------

def check_field_structure(ctx):
    tw = ctx.tower
    tw.self_check()
    return {"p": tw.p, "e": tw.e, "modulus": list(tw.modulus)}


def check_field_axioms(ctx):
    tw = ctx.tower
    if tw.order <= 64:
        a = np.arange(tw.order).reshape(-1, 1, 1)
        b = np.arange(tw.order).reshape(1, -1, 1)
        c = np.arange(tw.order).reshape(1, 1, -1)
        samples = "exhaustive"
    else:
        rng = np.random.default_rng(1)
        a, b, c = (rng.integers(0, tw.order, 10000) for _ in range(3))
        samples = "10000 random triples"
    lhs = tw.mul_arr(a, tw.add_arr(b, c))
    rhs = tw.add_arr(tw.mul_arr(a, b), tw.mul_arr(a, c))
    assert (lhs == rhs).all(), "distributivity failed"
    assert (tw.mul_arr(tw.mul_arr(a, b), c)
            == tw.mul_arr(a, tw.mul_arr(b, c))).all(), "associativity failed"
    assert (tw.mul_arr(a, b) == tw.mul_arr(b, a)).all(), "commutativity failed"
    nz = np.arange(1, tw.order)
    assert (tw.mul_arr(nz, tw.inv_arr(nz)) == 1).all(), "inverses failed"
    assert (tw.pow_arr(nz, tw.group_order) == 1).all(), "Lagrange failed"
    return {"samples": samples}


def check_frobenius(ctx):
    tw = ctx.tower
    every = np.arange(tw.order)
    assert (tw.frob_arr(every, tw.n) == every).all(), "p^(6e) power not identity"
    fr = tw.frob_arr(every, 1)
    some = every[:: max(1, tw.order // 200)]
    for aa in some[:50]:
        for bb in some[:50]:
            assert tw.frobenius(tw.add(int(aa), int(bb))) == tw.add(
                int(fr[aa]), int(fr[bb])), "Frobenius not additive"
    counts = {}
    for k in sorted({d for d in range(1, tw.n + 1) if tw.n % d == 0}):
        cnt = sum(1 for x in range(tw.order) if tw.in_subfield(x, k))
        assert cnt == tw.p**k, f"|F_p^{k}| = {cnt}"
        counts[k] = cnt
    return {"subfield_sizes": counts}


def check_serialization(ctx):
    tw = ctx.tower
    for a in range(tw.order):
        assert tw.from_coeffs(tw.coeffs(a)) == a, "round-trip failed"
    return {"elements": tw.order}


# ---------------------------------------------------------------------------
# points and planes
# ---------------------------------------------------------------------------

def check_point_counts(ctx):
    cv = ctx.curve
    q, g = cv.q, cv.genus
    n = cv.n_points
    assert n == q**8 - q**6 + q**5 + 1
    assert n == q**6 + 1 + 2 * g * q**3
    assert len(cv.o1) == q**3 + 1
    assert len(cv.o2) == q**3 * (q**3 + 1) * (q * q - 1)
    assert len(set(cv.points)) == n, "duplicate points"
    for P in cv.points:
        assert cv.is_on_curve(P)
    return {"n": n, "o1": len(cv.o1), "o2": len(cv.o2), "genus": g}


def check_orbit_criterion(ctx):
    cv, tw = ctx.curve, ctx.tower
    for P in cv.o1:
        if P is not INFINITY:
            assert P.c == 0 and tw.in_subfield(P.a, 2 * tw.e) \
                and tw.in_subfield(P.b, 2 * tw.e)
    for P in cv.o2:
        assert P.c != 0
    return {}


def check_frobenius_permutes(ctx):
    cv = ctx.curve
    perm = sym.point_permutation(cv, sym.FieldFrobenius(1))
    o1_ids = {cv.point_id[P] for P in cv.o1}
    assert {int(perm[i]) for i in o1_ids} == o1_ids, "Frobenius moved O1"
    return {}


def check_x_plane_partition(ctx):
    cv = ctx.curve
    q = cv.q
    full = cv.full_fiber_abscissas
    assert len(full) == q**5 - q**3
    seen = set()
    for a in full:
        fiber = cv.plane_section_x(a)
        assert len(fiber) == q**3 + 1
        assert not (set(fiber) & seen), "x-fibers overlap"
        seen.update(fiber)
    assert seen == set(cv.o2), "full x-fibers do not cover O2"
    tw = ctx.tower
    for a in range(tw.order):
        size = len(cv.plane_section_x(a))
        if tw.in_subfield(a, 2 * tw.e):
            expect = 1 if tw.add(tw.pow(a, q), a) == 0 else q + 1
            assert size == expect, f"x = {a}: {size} != {expect}"
        else:
            assert size in (0, q**3 + 1)
    return {"full_fibers": len(full)}


def check_z_plane_partition(ctx):
    cv, tw = ctx.curve, ctx.tower
    q = cv.q
    assert len(cv.gamma0) == q**5 - q**3 + q * q
    assert 0 in cv.gamma0
    seen = set()
    for c in cv.gamma0:
        fiber = cv.plane_section_z(c)
        assert len(fiber) == q**3
        assert not (set(fiber) & seen)
        seen.update(fiber)
    assert len(seen) == cv.n_points - 1, "Gamma0 fibers miss affine points"
    for c in range(tw.order):
        if c not in cv.gamma0:
            assert len(cv.plane_section_z(c)) < q**3
    return {"gamma0": len(cv.gamma0)}


# ---------------------------------------------------------------------------
# divisors
# ---------------------------------------------------------------------------

def _atom_sample(cv, full=False):
    tw = cv.tower
    atoms = [dv.X, dv.Y, dv.Z]
    alphas = range(tw.order) if full else list(range(0, tw.order,
                                                     max(1, tw.order // 24)))
    for alpha in alphas:
        try:
            A = dv.x_minus(alpha)
            dv.principal_divisor(cv, A)
            atoms.append(A)
        except ValueError:
            pass
    gammas = sorted(cv.gamma0) if full else sorted(cv.gamma0)[:8]
    atoms += [dv.z_minus(c) for c in gammas if c]
    o1aff = [P for P in cv.o1 if P is not INFINITY]
    atoms += [dv.tangent_at(P) for P in (o1aff if full else o1aff[:4])]
    return atoms


def check_coordinate_divisors(ctx):
    cv, tw, q = ctx.curve, ctx.tower, ctx.curve.q
    k = q * q - q + 1
    Dx = dv.principal_divisor(cv, dv.X)
    assert Dx == dv.Divisor({P0: q**3 + 1, INFINITY: -(q**3 + 1)})
    Dy = dv.principal_divisor(cv, dv.Y)
    ys = {P: k for P in cv.o1 if P is not INFINITY and P.b == 0}
    ys[INFINITY] = -q * k
    assert Dy == dv.Divisor(ys)
    Dz = dv.principal_divisor(cv, dv.Z)
    zs = {P: 1 for P in cv.o1 if P is not INFINITY}
    zs[INFINITY] = -q**3
    assert Dz == dv.Divisor(zs)
    return {}


def check_atom_divisor_degrees(ctx):
    cv = ctx.curve
    atoms = _atom_sample(cv, full=cv.q == 2)
    for A in atoms:
        assert dv.principal_divisor(cv, A).degree == 0, f"deg (A) != 0 for {A}"
    return {"atoms": len(atoms)}


def check_series_valuations(ctx):
    cv = ctx.curve
    full = cv.q == 2
    atoms = _atom_sample(cv, full=full)
    rng = random.Random(5)
    checked = 0
    for A in atoms:
        D = dv.principal_divisor(cv, A)
        supp = D.support()
        if not full and len(supp) > 12:
            supp = rng.sample(supp, 10) + [INFINITY]
        for P in supp:
            s = dv.atom_series(cv, A, P, 2)
            assert s.val == D.weight(P), f"{A} at {P}"
            checked += 1
        if full:
            offs = [P for P in cv.points if D.weight(P) == 0]
            vals = dv.evaluate_over(
                cv, dv.FunctionExpr.atom(A),
                [P for P in offs if P is not INFINITY])
            assert (vals != 0).all(), f"{A} vanishes off its support"
    return {"checked": checked}


def check_expansion_residuals(ctx):
    cv, tw, q = ctx.curve, ctx.tower, ctx.curve.q
    rng = random.Random(9)
    pts = rng.sample(cv.affine_points(), 6) + [P0]
    L = 12
    for P in pts:
        x, y, z = dv.local_expansion(cv, P, L)
        assert (x[0], y[0], z[0]) == (P.a, P.b, P.c)
        yq1 = dv._dmul(tw, dv._dpow(tw, y, q, L), y, L)
        r1 = dv._dadd(tw, dv._dadd(tw, dv._dpow(tw, x, q, L), x),
                      dv._dneg(tw, yq1))
        assert not any(r1), f"first equation fails at {P}"
        zk = dv._dpow(tw, z, q * q - q + 1, L)
        yq2 = dv._dpow(tw, y, q * q, L)
        r2 = dv._dadd(tw, dv._dadd(tw, yq2, dv._dneg(tw, y)), dv._dneg(tw, zk))
        assert not any(r2), f"second equation fails at {P}"
    sz = dv.atom_series(cv, dv.Z, INFINITY, 2)
    sx = dv.atom_series(cv, dv.X, INFINITY, 2)
    assert sz.val - sx.val == 1, "z/x is not a parameter at infinity"
    return {"points": len(pts)}


def check_termwise_vs_series(ctx):
    cv, tw = ctx.curve, ctx.tower
    rng = random.Random(13)
    samples = 60 if cv.q == 2 else 200
    atoms = _atom_sample(cv)
    count = 0
    for _ in range(samples):
        f1 = dv.FunctionExpr.make([(rng.choice(atoms), rng.choice([1, 2]))],
                                  rng.randrange(1, tw.order))
        f2 = dv.FunctionExpr.make([(rng.choice(atoms), 1)],
                                  rng.randrange(1, tw.order))
        P = rng.choice(cv.points)
        terms = [f1, f2]
        try:
            direct = dv.evaluate(cv, terms, P)
        except dv.PoleError:
            continue
        w0, coeffs = dv._window_sum(cv, terms, P, 0)
        assert all(c == 0 for c in coeffs[:-1]), "negative window coefficients"
        assert coeffs[-1] == direct, f"series sum mismatch at {P}"
        count += 1
    assert count > samples // 2, "too few evaluable samples"
    return {"compared": count}


def check_divisor_additivity(ctx):
    cv, tw = ctx.curve, ctx.tower
    rng = random.Random(17)
    atoms = _atom_sample(cv)
    n = 200 if cv.q == 2 else 10000
    for _ in range(n):
        f = dv.FunctionExpr.make([(rng.choice(atoms), rng.randrange(-3, 4))])
        g = dv.FunctionExpr.make([(rng.choice(atoms), rng.randrange(-3, 4))])
        fg = dv.fe_mul(tw, f, g)
        assert dv.divisor_of(cv, fg) == dv.divisor_of(cv, f) + dv.divisor_of(cv, g)
        assert dv.divisor_of(cv, fg).degree == 0
    return {"samples": n}


def check_leading_coeff_product(ctx):
    cv, tw = ctx.curve, ctx.tower
    rng = random.Random(21)
    atoms = _atom_sample(cv)
    done = 0
    for _ in range(80):
        f = dv.FunctionExpr.make([(rng.choice(atoms), rng.choice([-2, -1, 1, 2]))])
        g = dv.FunctionExpr.make([(rng.choice(atoms), rng.choice([-1, 1]))])
        P = rng.choice(cv.points)
        bf = -dv.valuation(cv, f, P)
        bg = -dv.valuation(cv, g, P)
        lf = dv.leading_coefficient(cv, f, P, bf)
        lg = dv.leading_coefficient(cv, g, P, bg)
        lfg = dv.leading_coefficient(cv, dv.fe_mul(tw, f, g), P, bf + bg)
        assert lfg == tw.mul(lf, lg)
        done += 1
    return {"samples": done}


# ---------------------------------------------------------------------------
# Riemann-Roch
# ---------------------------------------------------------------------------

def _mH(cv, m):
    return dv.Divisor({P: m for P in cv.o1})


def check_dimension_ladder(ctx):
    cv = ctx.curve
    q, g = cv.q, cv.genus
    if q == 2:
        ms = range(3, 24)
    else:
        ms = [q * q - 1]
    for m in ms:
        b = rr.rr_basis(cv, _mH(cv, m))
        assert b.dimension == m * (q**3 + 1) + 1 - g, f"m = {m}"
        assert b.certified
    return {"m_values": list(ms)}


def check_canonical_dimension(ctx):
    cv = ctx.curve
    q, g = cv.q, cv.genus
    K = dv.Divisor({INFINITY: (q**3 + 1) * (q * q - 2)})
    assert K.degree == 2 * g - 2
    assert rr.ell(cv, K) == g
    vals, gaps = rr.gap_sequence(cv, 2 * g)
    assert len(gaps) == g, f"gap count {len(gaps)} != genus"
    return {"ell_K": g, "gaps": gaps if q == 2 else len(gaps)}


def check_two_point_separation(ctx):
    cv = ctx.curve
    if cv.q != 2:
        return {"skipped": "q > 2"}
    G = _mH(cv, 3)
    base = rr.rr_basis(cv, G).dimension
    for P in cv.points:
        assert rr.reduced_dimension(cv, G, [P]) == base - 1, f"P = {P}"
    rng = random.Random(11)
    pairs = [(rng.choice(cv.points), rng.choice(cv.points)) for _ in range(300)]
    for P, Q in pairs:
        assert rr.reduced_dimension(cv, G, [P, Q]) == base - 2, (P, Q)
    return {"points": cv.n_points, "pairs": len(pairs)}


def check_reduction_consistency(ctx):
    cv = ctx.curve
    if cv.q != 2:
        return {"skipped": "q > 2"}
    G = _mH(cv, 3)
    P = cv.o2[7]
    P1 = [p for p in cv.o1 if p is not INFINITY][1]
    for pt in (P, P1, INFINITY):
        direct = rr.ell(cv, G - dv.Divisor.single(pt))
        func = rr.reduced_dimension(cv, G, [pt])
        assert direct == func, pt
    assert rr.ell(cv, G - dv.Divisor.single(INFINITY) * 2) == \
        rr.reduced_dimension(cv, G, [INFINITY, INFINITY])
    assert rr.ell(cv, dv.Divisor({INFINITY: -1})) == 0
    return {}


# ---------------------------------------------------------------------------
# codes
# ---------------------------------------------------------------------------

def check_code_parameters(ctx):
    cv = ctx.curve
    q, g = cv.q, cv.genus
    out = {}
    if q == 2:
        instances = [("C", 3, 0), ("Cprime", 3, 0), ("Cbar", 2, 1),
                     ("Ctilde", 3, 0)]
    else:
        instances = [("C", q * q - 1, 0)]
    for fam, m, s in instances:
        code = ctx.code(fam, m, s)
        row = cd.table_row(cv, code.spec, code)
        assert row["m_in_range"], (fam, m)
        assert code.k == row["k_formula"] or fam == "Ctilde"
        out[fam] = {"n": code.n, "k": code.k, "dstar": code.dstar}
    return out


def check_distance_witnesses(ctx):
    cv = ctx.curve
    q = cv.q
    fams = [("C", 3, 0), ("Cprime", 3, 0), ("Ctilde", 3, 0)] if q == 2 \
        else [("C", q * q - 1, 0)]
    out = {}
    for fam, m, s in fams:
        code = ctx.code(fam, m, s)
        word = cd.witness_min_weight(cv, code.spec, code)
        w = int(np.count_nonzero(word))
        assert w == code.dstar
        out[fam] = w
    if q == 2:
        c, cp = ctx.code("C", 3), ctx.code("Cprime", 3)
        assert c.n - c.dstar == cp.n - cp.dstar, "lengthening changed n - d"
        assert cd.singleton_defect(c) == cd.singleton_defect(cp) == cv.genus
    return out


def check_dimension_variant(ctx):
    cv = ctx.curve
    if cv.q != 2:
        return {"skipped": "q > 2"}
    code = ctx.code("Ctilde", 3, 0)
    row = cd.table_row(cv, code.spec, code)
    assert row["k_matches"] == "riemann_roch", row
    return {"k_measured": code.k, "k_formula": row["k_formula"],
            "k_formula_variant": row["k_formula_variant"],
            "matches": row["k_matches"]}


def check_distance_interval(ctx):
    cv = ctx.curve
    if cv.q != 2:
        return {"skipped": "q > 2"}
    code = ctx.code("Cbar", 2, 1)
    res = cd.exhaustive_min_distance(code, budget=1 << 14)
    assert res.lower == code.dstar == 174
    assert res.lower <= res.upper
    return {"interval": [res.lower, res.upper], "exact": res.exact}


def check_dual_codes(ctx):
    cv, tw = ctx.curve, ctx.tower
    if cv.q != 2:
        return {"skipped": "q > 2"}
    code = ctx.code("C", 3)
    dual = cd.dual_code(code)
    g = cv.genus
    assert dual.k == code.n - code.k == code.n - code.G.degree + g - 1
    prod = linalg.matmul(tw, code.matrix, dual.matrix.T)
    assert not prod.any(), "generator times dual transpose != 0"
    ddual = cd.dual_code(dual)
    assert linalg.row_space_equal(tw, ddual.matrix, code.matrix)
    zero = cd.LinearCode(cv, None, np.zeros((0, 5), dtype=np.int64),
                         5, 0, None, None, tuple(range(5)))
    assert cd.dual_code(zero).k == 5
    return {"dual_dim": dual.k}


def check_omega_equivalence(ctx):
    cv = ctx.curve
    if cv.q != 2:
        return {"skipped": "q > 2"}
    u = cd.omega_equivalence(cv, 3)
    assert (u != 0).all()
    return {"entries": len(u), "all_nonzero": True}


# ---------------------------------------------------------------------------
# symmetry
# ---------------------------------------------------------------------------

def check_generator_invariance(ctx):
    cv = ctx.curve
    if cv.q != 2:
        return {"skipped": "q > 2"}
    verdicts = {}
    for fam, m, s in [("C", 3, 0), ("Cprime", 3, 0), ("Ctilde", 3, 0),
                      ("Cbar", 2, 3)]:
        code = ctx.code(fam, m, s)
        gens = sym.generators_for(cv, code.spec)
        for gsig in gens:
            cmap = sym.induced_code_map(cv, gsig, code)
            assert sym.check_invariance(code, cmap), (fam, gsig)
        verdicts[fam] = len(gens)
    return verdicts


def check_closure_orders(ctx):
    cv = ctx.curve
    if cv.q != 2:
        return {"skipped": "q > 2"}
    q = cv.q
    tgens = sym.translation_generators(cv)
    geom = tgens + [sym.diagonal_generator(cv), sym.multiplier_generator(cv)]
    stab = sym.permutation_group_order(cv, geom)
    full = sym.permutation_group_order(cv, geom + [sym.Inversion()])
    assert stab.exact and stab.order == q**3 * (q * q - 1) * (q * q - q + 1)
    assert full.exact and full.order == \
        q**3 * (q**3 + 1) * (q * q - 1) * (q * q - q + 1)
    trans_only = sym.permutation_group_order(cv, sym.translations(cv))
    mult_only = sym.permutation_group_order(cv, [sym.multiplier_generator(cv)])
    assert trans_only.order == q**3 and mult_only.order == q * q - q + 1
    return {"stabilizer": stab.order, "full": full.order}


def check_negative_controls(ctx):
    cv = ctx.curve
    if cv.q != 2:
        return {"skipped": "q > 2"}
    code = ctx.code("C", 3)
    assert not sym.check_invariance(code, sym.transposition_map(code))
    codet = ctx.code("Ctilde", 3, 0)
    assert not sym.check_invariance(codet, sym.transposition_map(codet))
    try:
        sym.induced_code_map(cv, sym.Inversion(), codet)
        raise AssertionError("inversion should not stabilize the supports")
    except ValueError:
        pass
    spec1 = cd.make_spec(cv, "Cbar", 2, 1)
    try:
        sym.generators_for(cv, spec1)
        raise AssertionError("non-closed plane list should be rejected")
    except ValueError:
        pass
    return {}


def check_pullback_transport(ctx):
    cv = ctx.curve
    if cv.q != 2:
        return {"skipped": "q > 2"}
    gens = [sym.translation_generators(cv)[1], sym.diagonal_generator(cv),
            sym.multiplier_generator(cv), sym.Inversion()]
    alpha = cv.full_fiber_abscissas[0]
    c1 = sorted(c for c in cv.gamma0 if c)[0]
    P1 = [p for p in cv.o1 if p is not INFINITY][1]
    atoms = [dv.X, dv.Y, dv.Z, dv.x_minus(alpha), dv.z_minus(c1),
             dv.tangent_at(P1)]
    perm_inv = {}
    for sigma in gens:
        perm = sym.point_permutation(cv, sigma)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        perm_inv[sigma] = inv
    for sigma in gens:
        for A in atoms:
            pb = sym.pullback(cv, sigma, dv.FunctionExpr.atom(A))
            D = dv.principal_divisor(cv, A)
            want = dv.Divisor({cv.points[perm_inv[sigma][cv.point_id[P]]]: m
                               for P, m in D.items()})
            got = {}
            for P in cv.points:
                v = dv.sum_valuation(cv, pb, P)
                if v:
                    got[P] = v
            assert dv.Divisor(got) == want, (sigma, A)
    return {"pairs": len(gens) * len(atoms)}


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

SUITES = {
    "field": [
        ("field:structure", check_field_structure),
        ("field:axioms", check_field_axioms),
        ("field:frobenius", check_frobenius),
        ("field:serialization-roundtrip", check_serialization),
    ],
    "points": [
        ("points:counts", check_point_counts),
        ("points:orbit-criterion", check_orbit_criterion),
        ("points:frobenius-stable", check_frobenius_permutes),
    ],
    "planes": [
        ("planes:x-partition", check_x_plane_partition),
        ("planes:z-partition", check_z_plane_partition),
    ],
    "divisors": [
        ("divisors:coordinate-divisors", check_coordinate_divisors),
        ("divisors:degree-zero", check_atom_divisor_degrees),
        ("divisors:series-valuations", check_series_valuations),
        ("divisors:expansion-residuals", check_expansion_residuals),
        ("divisors:termwise-vs-series", check_termwise_vs_series),
        ("divisors:additivity", check_divisor_additivity),
        ("divisors:leading-coeff-product", check_leading_coeff_product),
    ],
    "rr": [
        ("rr:dimension-ladder", check_dimension_ladder),
        ("rr:canonical-dimension", check_canonical_dimension),
        ("rr:two-point-separation", check_two_point_separation),
        ("rr:reduction-consistency", check_reduction_consistency),
    ],
    "codes": [
        ("codes:parameters", check_code_parameters),
        ("codes:distance-witnesses", check_distance_witnesses),
        ("codes:dimension-variant-Ctilde", check_dimension_variant),
        ("codes:distance-interval-Cbar", check_distance_interval),
    ],
    "duality": [
        ("duality:dual-codes", check_dual_codes),
        ("duality:omega-equivalence", check_omega_equivalence),
    ],
    "symmetry": [
        ("symmetry:generator-invariance", check_generator_invariance),
        ("symmetry:closure-orders", check_closure_orders),
        ("symmetry:negative-controls", check_negative_controls),
        ("symmetry:pullback-transport", check_pullback_transport),
    ],
}

REDUCED_SUITES = ["field", "points", "planes", "codes"]


def run(p, e=1, suites=None):
    """Run the selected suites; returns (records, all_passed)."""
    ctx = Context(p, e)
    if suites is None:
        suites = list(SUITES) if ctx.curve.q == 2 else REDUCED_SUITES
    records = []
    ok = True
    for suite in suites:
        if suite not in SUITES:
            raise ValueError(f"unknown suite {suite!r}")
        for name, fn in SUITES[suite]:
            t0 = time.time()
            rec = {"suite": suite, "check": name}
            try:
                detail = fn(ctx)
                rec["status"] = "pass"
                if detail:
                    rec["detail"] = detail
            except Exception as exc:   # noqa: BLE001 - reported, not masked
                rec["status"] = "fail"
                rec["error"] = f"{type(exc).__name__}: {exc}"
                ok = False
            rec["seconds"] = round(time.time() - t0, 3)
            records.append(rec)
    return records, ok
