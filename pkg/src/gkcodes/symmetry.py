"""Explicit curve automorphisms and their action on points and codes.

Five generator families, all forced by requiring both defining equations to
be preserved and certified at runtime by the on-curve check:

    Translation(u, w)   (x,y,z) -> (x + u^q y + w, y + u, z),
                        u, w in F_{q^2} with w^q + w = u^(q+1);
                        q^3 maps, the Sylow p-subgroup fixing infinity
    Diagonal(lam, gam)  (x,y,z) -> (lam^(q+1) x, lam y, gam z),
                        lam in F_{q^2}*, gam^(q^2-q+1) = lam
    Multiplier(eta)     (x,y,z) -> (x, y, eta z), eta^(q^2-q+1) = 1
    Inversion           (x,y,z) -> (1/x, y/x, -z/x), swapping P0 and Pinf
    FieldFrobenius(i)   coordinatewise t -> t^(p^i); semilinear, it
                        contributes the field-automorphism part of a code
                        map rather than a curve automorphism

A curve automorphism sigma that stabilizes supp(D) and supp(G) (with the
constant weights all families here use) induces a monomial map of the code:
the coordinate permutation row'[i] = row[position of sigma^(-1)(P_i)], an
entrywise p-power for the semilinear generator, and a scalar at extended
coordinates where the local parameter picks up a multiplier.  Invariance is
checked as row-space preservation: stacking the mapped generators on the
original ones must not raise the rank.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .curve import INFINITY, P0, AffinePoint
from .divisors import FunctionExpr, X, Y, Z
from . import linalg


@dataclass(frozen=True)
class Translation:
    u: int
    w: int


@dataclass(frozen=True)
class Diagonal:
    lam: int
    gamma: int


@dataclass(frozen=True)
class Multiplier:
    eta: int


@dataclass(frozen=True)
class Inversion:
    pass


@dataclass(frozen=True)
class FieldFrobenius:
    i: int = 1


CURVE_AUTOMORPHISMS = (Translation, Diagonal, Multiplier, Inversion)


def validate_automorphism(curve, sigma):
    tw, q = curve.tower, curve.q
    k = q * q - q + 1
    if isinstance(sigma, Translation):
        if not (tw.in_subfield(sigma.u, 2 * tw.e)
                and tw.in_subfield(sigma.w, 2 * tw.e)):
            raise ValueError("translation parameters must lie in F_{q^2}")
        if tw.add(tw.pow(sigma.w, q), sigma.w) != tw.pow(sigma.u, q + 1):
            raise ValueError("translation needs w^q + w = u^(q+1)")
    elif isinstance(sigma, Diagonal):
        if sigma.lam == 0 or not tw.in_subfield(sigma.lam, 2 * tw.e):
            raise ValueError("diagonal scalar must lie in F_{q^2}*")
        if tw.pow(sigma.gamma, k) != sigma.lam:
            raise ValueError("diagonal needs gamma^(q^2-q+1) = lam")
    elif isinstance(sigma, Multiplier):
        if tw.pow(sigma.eta, k) != 1:
            raise ValueError("multiplier needs eta^(q^2-q+1) = 1")
    elif not isinstance(sigma, (Inversion, FieldFrobenius)):
        raise ValueError(f"unknown automorphism {sigma!r}")


def apply_point(curve, sigma, P):
    """Image of a rational point; always lands on the curve."""
    tw, q = curve.tower, curve.q
    if isinstance(sigma, Translation):
        if P is INFINITY:
            return P
        a, b, c = P
        return AffinePoint(
            tw.add(tw.add(a, tw.mul(tw.pow(sigma.u, q), b)), sigma.w),
            tw.add(b, sigma.u), c)
    if isinstance(sigma, Diagonal):
        if P is INFINITY:
            return P
        a, b, c = P
        return AffinePoint(tw.mul(tw.pow(sigma.lam, q + 1), a),
                           tw.mul(sigma.lam, b), tw.mul(sigma.gamma, c))
    if isinstance(sigma, Multiplier):
        if P is INFINITY:
            return P
        a, b, c = P
        return AffinePoint(a, b, tw.mul(sigma.eta, c))
    if isinstance(sigma, Inversion):
        if P is INFINITY:
            return P0
        if P == P0:
            return INFINITY
        a, b, c = P
        ia = tw.inv(a)
        return AffinePoint(ia, tw.mul(b, ia), tw.neg(tw.mul(c, ia)))
    if isinstance(sigma, FieldFrobenius):
        if P is INFINITY:
            return P
        a, b, c = P
        return AffinePoint(tw.frobenius(a, sigma.i),
                           tw.frobenius(b, sigma.i),
                           tw.frobenius(c, sigma.i))
    raise ValueError(f"unknown automorphism {sigma!r}")


def point_permutation(curve, sigma):
    """Permutation array perm[i] = index of sigma(points[i]); cached."""
    hit = curve._perm_cache.get(sigma)
    if hit is not None:
        return hit
    validate_automorphism(curve, sigma)
    perm = np.empty(curve.n_points, dtype=np.int64)
    for i, P in enumerate(curve.points):
        img = apply_point(curve, sigma, P)
        j = curve.point_id.get(img)
        if j is None:
            raise RuntimeError(f"{sigma} maps {P} off the curve")
        perm[i] = j
    if len(set(perm.tolist())) != curve.n_points:
        raise RuntimeError(f"{sigma} is not a bijection of the point set")
    curve._perm_cache[sigma] = perm
    return perm


# ---------------------------------------------------------------------------
# generator families
# ---------------------------------------------------------------------------

def translations(curve):
    """All q^3 translations, ordered by (u, w)."""
    tw, q = curve.tower, curve.q
    fq2 = tw.subfield(2 * tw.e)
    out = []
    for u in fq2:
        target = tw.pow(u, q + 1)
        for w in fq2:
            if tw.add(tw.pow(w, q), w) == target:
                out.append(Translation(u, w))
    if len(out) != q**3:
        raise RuntimeError("translation count != q^3")
    return out


def _compose_translations(tw, q, t1, t2):
    # apply t2 first, then t1
    return Translation(
        tw.add(t1.u, t2.u),
        tw.add(tw.add(t1.w, t2.w), tw.mul(tw.pow(t1.u, q), t2.u)))


def translation_generators(curve):
    """Deterministic minimal generating list for the translation group."""
    tw, q = curve.tower, curve.q
    all_t = translations(curve)
    gens = []
    span = {Translation(0, 0)}
    for t in all_t:
        if t in span:
            continue
        gens.append(t)
        frontier = list(span)
        span.add(t)
        while True:
            new = set()
            for a in span:
                for b in (t,) + tuple(gens):
                    c = _compose_translations(tw, q, a, b)
                    if c not in span:
                        new.add(c)
            if not new:
                break
            span |= new
        if len(span) == q**3:
            break
    if len(span) != q**3:
        raise RuntimeError("translation generators failed to generate")
    return gens


def diagonal_generator(curve):
    tw, q = curve.tower, curve.q
    lam = tw.pow(tw.generator, tw.group_order // (q * q - 1))
    gamma = tw.solve_power(lam, q * q - q + 1)
    return Diagonal(lam, gamma)


def multiplier_generator(curve, order=None):
    tw, q = curve.tower, curve.q
    k = q * q - q + 1
    if order is None:
        order = k
    if order <= 1 or k % order:
        raise ValueError("multiplier order must divide q^2 - q + 1 and exceed 1")
    eta = tw.pow(tw.generator, tw.group_order // order)
    return Multiplier(eta)


def _stabilizes_planes(curve, factor, plane_values):
    tw = curve.tower
    nonzero = {c for c in plane_values if c}
    return {tw.mul(factor, c) for c in nonzero} == nonzero


def generators_for(curve, spec):
    """Generator list for the automorphism content of a family instance.

    The lengthened family keeps the stabilizer of infinity only: inversion
    moves the extended coordinate's place off the support.  For the s > 0
    families the nonzero plane list must be closed under c -> c^p; the
    scalar closure under r-th roots of unity (with
    r = gcd(s, (q^2-q+1)/gcd(3, q+1))) is likewise checked.  A diagonal
    generator is included only when one of its multiplier twists stabilizes
    the plane set; the semilinear FieldFrobenius(1) is always appended last.
    """
    tw, q = curve.tower, curve.q
    gens = list(translation_generators(curve))
    fam, s = spec.family, spec.s
    if fam == "C" or (fam == "Cbar" and s == 0):
        gens += [diagonal_generator(curve), multiplier_generator(curve),
                 Inversion(), FieldFrobenius(1)]
        return gens
    if fam == "Cprime" or (fam == "Ctilde" and s == 0):
        gens += [diagonal_generator(curve), multiplier_generator(curve),
                 FieldFrobenius(1)]
        return gens
    nonzero = [c for c in spec.planes if c]
    if {tw.frobenius(c, 1) for c in nonzero} != set(nonzero):
        raise ValueError("plane list is not closed under c -> c^p")
    delta = math.gcd(3, q + 1)
    r = math.gcd(s, (q * q - q + 1) // delta)
    if r > 1:
        eta = multiplier_generator(curve, r).eta
        if not _stabilizes_planes(curve, eta, nonzero):
            raise ValueError(
                "plane list is not closed under scaling by r-th roots of unity")
        gens.append(Multiplier(eta))
    diag = diagonal_generator(curve)
    k = q * q - q + 1
    eta1 = tw.pow(tw.generator, tw.group_order // k)
    for j in range(k):
        gamma = tw.mul(diag.gamma, tw.pow(eta1, j))
        if _stabilizes_planes(curve, gamma, nonzero):
            gens.append(Diagonal(diag.lam, gamma))
            break
    gens.append(FieldFrobenius(1))
    return gens


# ---------------------------------------------------------------------------
# induced code maps and invariance
# ---------------------------------------------------------------------------

@dataclass
class CodeMonomialMap:
    perm: np.ndarray        # row'[i] = row[perm[i]]
    scale: np.ndarray
    frob: int = 0


def _infinity_parameter_factor(curve, sigma):
    """Leading coefficient c of sigma*(z/x) at infinity, the multiplier the
    canonical parameter picks up under a generator fixing infinity."""
    tw, q = curve.tower, curve.q
    if isinstance(sigma, (Translation, FieldFrobenius)):
        return 1
    if isinstance(sigma, Diagonal):
        return tw.div(sigma.gamma, tw.pow(sigma.lam, q + 1))
    if isinstance(sigma, Multiplier):
        return sigma.eta
    raise ValueError(f"{sigma} does not fix the point at infinity")


def induced_code_map(curve, sigma, code):
    """Monomial map of the code induced by sigma; requires sigma to
    stabilize supp(D) and to preserve G as a weighted divisor.

    The permutation is the standard left action row'[i] = row[position of
    sigma^(-1)(P_i)]: for a geometric sigma the mapped row is the evaluation
    of the pulled-back function, and for the semilinear generator the
    entrywise p-power then lands exactly on the coefficient-Frobenius
    transform of the row's function.  A coordinate at a place carrying
    weight b > 0 in G is a leading coefficient, not a value, so it also
    picks up the b-th power of the parameter multiplier of sigma there.
    """
    positions = {P: i for i, P in enumerate(code.places)}
    fwd = np.empty(code.n, dtype=np.int64)
    for i, P in enumerate(code.places):
        img = apply_point(curve, sigma, P)
        j = positions.get(img)
        if j is None:
            raise ValueError(f"{sigma} does not stabilize supp(D)")
        fwd[i] = j
    perm = np.empty(code.n, dtype=np.int64)
    perm[fwd] = np.arange(code.n, dtype=np.int64)
    for P, w in code.G.items():
        img = apply_point(curve, sigma, P)
        if code.G.weight(img) != w:
            raise ValueError(f"{sigma} does not preserve G")
    frob = sigma.i if isinstance(sigma, FieldFrobenius) else 0
    scale = np.ones(code.n, dtype=np.int64)
    tw = curve.tower
    for i, P in enumerate(code.places):
        b = code.G.weight(P)
        if b > 0:
            if P is not INFINITY or apply_point(curve, sigma, P) is not P:
                raise ValueError(
                    "extended coordinates away from a fixed infinity are "
                    "not supported")
            scale[i] = tw.pow(_infinity_parameter_factor(curve, sigma), b)
    return CodeMonomialMap(perm, scale, frob)


def apply_code_map(tower, cmap, matrix):
    out = np.asarray(matrix, dtype=np.int64)[:, cmap.perm]
    if cmap.frob:
        out = tower.frob_arr(out, cmap.frob)
    if not (cmap.scale == 1).all():
        out = tower.mul_arr(out, cmap.scale[None, :])
    return out


def check_invariance(code, cmap):
    """True iff the mapped generators stay inside the code's row space."""
    tw = code.curve.tower
    mapped = apply_code_map(tw, cmap, code.matrix)
    stacked = np.vstack([code.matrix, mapped])
    return linalg.rank(tw, stacked) == code.k


def transposition_map(code, i=0, j=1):
    """Negative control: swap two coordinates, no scaling."""
    perm = np.arange(code.n, dtype=np.int64)
    perm[i], perm[j] = perm[j], perm[i]
    return CodeMonomialMap(perm, np.ones(code.n, dtype=np.int64), 0)


# ---------------------------------------------------------------------------
# permutation closure
# ---------------------------------------------------------------------------

class ClosureResult(NamedTuple):
    order: int
    exact: bool


def permutation_group_order(curve, sigmas, budget=200000):
    """Order of the permutation group the maps generate on the point set.

    Straight closure enumeration; if the group grows past the budget the
    count found so far is returned as a certified lower bound.
    """
    perms = [point_permutation(curve, s) for s in sigmas]
    ident = np.arange(curve.n_points, dtype=np.int64)
    known = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in perms:
                c = h[g]
                key = c.tobytes()
                if key not in known:
                    if len(known) >= budget:
                        return ClosureResult(len(known), False)
                    known[key] = c
                    nxt.append(c)
        frontier = nxt
    return ClosureResult(len(known), True)


# ---------------------------------------------------------------------------
# pullbacks of atoms (linear forms in x, y, z over powers of x)
# ---------------------------------------------------------------------------

def _atom_linear_form(curve, atom):
    """(c_x, c_y, c_z, c_1) with atom = c_x x + c_y y + c_z z + c_1."""
    tw, q = curve.tower, curve.q
    if atom.kind == "x":
        return (1, 0, 0, 0)
    if atom.kind == "y":
        return (0, 1, 0, 0)
    if atom.kind == "z":
        return (0, 0, 1, 0)
    if atom.kind == "x-a":
        return (1, 0, 0, tw.neg(atom.data[0]))
    if atom.kind == "z-c":
        return (0, 0, 1, tw.neg(atom.data[0]))
    a, b = atom.data
    return (1, tw.neg(tw.pow(b, q)), 0, tw.pow(a, q))


def _substituted_form(tw, q, sigma, form):
    """Image of a linear form under sigma; returns (form', extra x power)."""
    cx, cy, cz, c1 = form
    if isinstance(sigma, Translation):
        u, w = sigma.u, sigma.w
        return (cx,
                tw.add(tw.mul(cx, tw.pow(u, q)), cy),
                cz,
                tw.add(tw.add(c1, tw.mul(cx, w)), tw.mul(cy, u))), 0
    if isinstance(sigma, Diagonal):
        return (tw.mul(cx, tw.pow(sigma.lam, q + 1)),
                tw.mul(cy, sigma.lam),
                tw.mul(cz, sigma.gamma), c1), 0
    if isinstance(sigma, Multiplier):
        return (cx, cy, tw.mul(cz, sigma.eta), c1), 0
    if isinstance(sigma, Inversion):
        # x -> 1/x, y -> y/x, z -> -z/x gives (c1 x + cy y - cz z + cx) / x
        return (c1, cy, tw.neg(cz), cx), -1
    raise ValueError(f"unknown automorphism {sigma!r}")


def _form_as_monomial(tw, form):
    """(atom or None, scalar) when the form is a scaled atom; else None."""
    from .divisors import x_minus, z_minus
    cx, cy, cz, c1 = form
    if cy == 0 and cz == 0 and cx:
        return x_minus(tw.neg(tw.div(c1, cx))), cx
    if cx == 0 and cy == 0 and cz:
        return z_minus(tw.neg(tw.div(c1, cz))), cz
    if cx == 0 and cz == 0 and cy and c1 == 0:
        return Y, cy
    if cx == 0 and cy == 0 and cz == 0 and c1:
        return None, c1
    raise ValueError("linear form is not a scaled atom")


def pullback(curve, sigma, f):
    """f composed with sigma as a list of monomials (a formal sum).

    Every atom is an affine-linear form in (x, y, z) and the geometric
    generators keep it one (inversion contributes a 1/x factor), so positive
    powers expand multilinearly; negative powers are only taken of forms
    that collapse back to a scaled atom.  The semilinear FieldFrobenius is
    excluded (its pullback multiplies divisors by p instead).
    """
    tw, q = curve.tower, curve.q
    if isinstance(sigma, FieldFrobenius):
        raise ValueError("the semilinear generator has no rational pullback")
    terms = [([], f.scalar)]
    for A, e in f.powers:
        form, xpow = _substituted_form(tw, q, sigma, _atom_linear_form(curve, A))
        if e < 0:
            atom, coef = _form_as_monomial(tw, form)
            extra = ([(atom, e)] if atom is not None else [])
            if xpow:
                extra.append((X, xpow * e))
            terms = [(pw + extra, tw.mul(sc, tw.pow(coef, e)))
                     for pw, sc in terms]
            continue
        cx, cy, cz, c1 = form
        pieces = [(pc, co) for pc, co in
                  (((X, 1), cx), ((Y, 1), cy), ((Z, 1), cz), (None, c1)) if co]
        for _ in range(e):
            expanded = []
            for pw, sc in terms:
                for piece, coef in pieces:
                    npw = pw + ([piece] if piece else [])
                    expanded.append((npw, tw.mul(sc, coef)))
            terms = expanded
        if xpow and e:
            terms = [(pw + [(X, xpow * e)], sc) for pw, sc in terms]
    grouped = {}
    for pw, sc in terms:
        key = FunctionExpr.make(pw).powers
        grouped[key] = tw.add(grouped.get(key, 0), sc)
    ordered = sorted(grouped.items(),
                     key=lambda kv: [(a.sort_key(), e) for a, e in kv[0]])
    return [FunctionExpr(sc, key) for key, sc in ordered if sc]
