"""Divisor arithmetic and the function calculus built from atoms.

A Divisor is a finite integer-weighted sum of rational places.  Functions are
Laurent monomials in a small set of "atoms" with known principal divisors:

    x, y, z            the coordinate functions
    x - alpha          plane section X = alpha
    z - c              plane section Z = c, c in Gamma0
    tangent at P       the linear form x - b^q y + a^q for P = (a,b,0) in O1

The principal-divisor table (pole orders at infinity, zero multiplicities on
the fibers) is stated in closed form and then *verified* against local power
series: every valuation the table claims is recomputed from a truncated
expansion and compared.  Local parameters are z - z(P) at affine points and
z/x at infinity; expansions at infinity are transported to the origin through
the inversion automorphism (x,y,z) -> (1/x, y/x, -z/x), which swaps the two
points.

Series are solved by Hensel lifting: y from z through z^(q^2-q+1) = y^(q^2)-y
(residual map has constant derivative -1) and x from y through x^q+x = y^(q+1)
(derivative +1), so each iteration multiplies the t-adic precision by q^2
resp. q.
"""

from dataclasses import dataclass

import numpy as np

from .curve import AffinePoint, INFINITY, P0, place_key


class PoleError(ArithmeticError):
    """Raised when a function is evaluated at one of its poles."""


class PrecisionError(ArithmeticError):
    """Raised when a series computation cannot resolve within its window."""


# ---------------------------------------------------------------------------
# divisors
# ---------------------------------------------------------------------------

class Divisor:
    """Sparse place -> weight map; zero weights are never stored."""

    __slots__ = ("_w",)

    def __init__(self, weights=None):
        self._w = {}
        if weights:
            for P, m in (weights.items() if isinstance(weights, dict) else weights):
                if m:
                    self._w[P] = self._w.get(P, 0) + m
            self._w = {P: m for P, m in self._w.items() if m}

    @classmethod
    def single(cls, P, m=1):
        return cls({P: m})

    @property
    def degree(self):
        return sum(self._w.values())

    def weight(self, P):
        return self._w.get(P, 0)

    def support(self):
        return sorted(self._w, key=place_key)

    def items(self):
        return [(P, self._w[P]) for P in self.support()]

    def is_effective(self):
        return all(m >= 0 for m in self._w.values())

    def __add__(self, other):
        out = dict(self._w)
        for P, m in other._w.items():
            out[P] = out.get(P, 0) + m
        return Divisor(out)

    def __neg__(self):
        return Divisor({P: -m for P, m in self._w.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return Divisor({P: k * m for P, m in self._w.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Divisor) and self._w == other._w

    def __hash__(self):
        return hash(frozenset(self._w.items()))

    def __bool__(self):
        return bool(self._w)

    def __repr__(self):
        if not self._w:
            return "Div(0)"
        parts = [f"{m}*{P}" for P, m in self.items()]
        return "Div(" + " + ".join(parts) + ")"

    def to_records(self, curve):
        """(point index, weight) pairs in enumeration order, plus degree."""
        pairs = sorted((curve.point_id[P], m) for P, m in self._w.items())
        return {"weights": pairs, "degree": self.degree}


# ---------------------------------------------------------------------------
# atoms and monomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    kind: str          # "x" | "y" | "z" | "x-a" | "z-c" | "tan"
    data: tuple = ()

    def __repr__(self):
        if self.kind in ("x", "y", "z"):
            return self.kind
        if self.kind == "x-a":
            return f"(x-{self.data[0]})"
        if self.kind == "z-c":
            return f"(z-{self.data[0]})"
        return f"tan({self.data[0]},{self.data[1]})"

    def sort_key(self):
        return (self.kind, self.data)


X = Atom("x")
Y = Atom("y")
Z = Atom("z")


def x_minus(alpha):
    return Atom("x", ()) if alpha == 0 else Atom("x-a", (alpha,))


def z_minus(c):
    return Atom("z", ()) if c == 0 else Atom("z-c", (c,))


def tangent_at(P):
    if P is INFINITY or P.c != 0:
        raise ValueError("tangent atoms exist only at affine O1 points")
    return Atom("tan", (P.a, P.b))


@dataclass(frozen=True)
class FunctionExpr:
    """scalar * prod(atom^exponent); the universal monomial representation."""

    scalar: int = 1
    powers: tuple = ()     # tuple of (Atom, int), sorted, exponents nonzero

    @classmethod
    def make(cls, powers, scalar=1):
        acc = {}
        for A, e in powers:
            acc[A] = acc.get(A, 0) + e
        items = tuple(sorted(((A, e) for A, e in acc.items() if e),
                             key=lambda t: t[0].sort_key()))
        return cls(scalar, items)

    @classmethod
    def one(cls):
        return cls(1, ())

    @classmethod
    def atom(cls, A, e=1):
        return cls.make([(A, e)])

    def key(self):
        """Identity up to scalar, used for deduplication."""
        return self.powers

    def __repr__(self):
        if not self.powers:
            body = "1"
        else:
            body = "*".join(f"{A}^{e}" if e != 1 else f"{A}"
                            for A, e in self.powers)
        return body if self.scalar == 1 else f"{self.scalar}*{body}"


def fe_mul(tower, f, g):
    return FunctionExpr.make(list(f.powers) + list(g.powers),
                             tower.mul(f.scalar, g.scalar))


def fe_pow(tower, f, k):
    return FunctionExpr.make([(A, e * k) for A, e in f.powers],
                             tower.pow(f.scalar, k))


def fe_scale(tower, f, c):
    if c == 0:
        raise ValueError("function scalars must be nonzero")
    return FunctionExpr(tower.mul(f.scalar, c), f.powers)


def _terms(f):
    if isinstance(f, FunctionExpr):
        return (f,)
    return tuple(f)


# ---------------------------------------------------------------------------
# principal divisors (closed form, series-verified elsewhere)
# ---------------------------------------------------------------------------

def principal_divisor(curve, atom):
    """Exact divisor of an atom, supported on rational places only."""
    cached = curve._atom_divisors.get(atom)
    if cached is not None:
        return cached
    tw, q = curve.tower, curve.q
    q3 = q**3
    k = q * q - q + 1
    if atom.kind == "x":
        D = Divisor({P0: q3 + 1, INFINITY: -(q3 + 1)})
    elif atom.kind == "y":
        zeros = {P: k for P in curve.o1
                 if P is not INFINITY and P.b == 0}
        zeros[INFINITY] = -q * k
        D = Divisor(zeros)
    elif atom.kind == "z":
        zeros = {P: 1 for P in curve.o1 if P is not INFINITY}
        zeros[INFINITY] = -q3
        D = Divisor(zeros)
    elif atom.kind == "x-a":
        alpha = atom.data[0]
        fiber = curve.plane_section_x(alpha)
        in_fq2 = tw.in_subfield(alpha, 2 * tw.e)
        if not in_fq2 and len(fiber) != q3 + 1:
            raise ValueError(
                f"x = {alpha} has no rational points; its zeros are not rational")
        if not in_fq2:
            w = {P: 1 for P in fiber}
        elif tw.add(tw.pow(alpha, q), alpha) != 0:
            w = {P: k for P in fiber}          # q+1 points, weight q^2-q+1
        else:
            w = {fiber[0]: q3 + 1}             # the single point (alpha,0,0)
        w[INFINITY] = -(q3 + 1)
        D = Divisor(w)
    elif atom.kind == "z-c":
        c = atom.data[0]
        if c not in curve.gamma0:
            raise ValueError(f"z = {c} is not a Gamma0 plane")
        w = {P: 1 for P in curve.plane_section_z(c)}
        w[INFINITY] = -q3
        D = Divisor(w)
    elif atom.kind == "tan":
        a, b = atom.data
        P = AffinePoint(a, b, 0)
        if curve.point_id.get(P) is None or P.c != 0:
            raise ValueError("tangent atom at a point not on O1")
        D = Divisor({P: q3 + 1, INFINITY: -(q3 + 1)})
    else:
        raise ValueError(f"unknown atom kind {atom.kind}")
    if D.degree != 0:
        raise RuntimeError(f"principal divisor of {atom} has degree {D.degree}")
    curve._atom_divisors[atom] = D
    return D


def divisor_of(curve, f):
    """Exponent-weighted sum of atom divisors of a monomial."""
    out = Divisor()
    for A, e in f.powers:
        out = out + principal_divisor(curve, A) * e
    return out


def valuation(curve, f, P):
    v = 0
    for A, e in f.powers:
        v += principal_divisor(curve, A).weight(P) * e
    return v


# ---------------------------------------------------------------------------
# dense power-series helpers (coefficient lists over the tower)
# ---------------------------------------------------------------------------

def _dmul(tw, a, b, L):
    out = [0] * L
    for i, ai in enumerate(a):
        if ai and i < L:
            for j, bj in enumerate(b):
                if i + j >= L:
                    break
                if bj:
                    out[i + j] = tw.add(out[i + j], tw.mul(ai, bj))
    return out


def _dadd(tw, a, b):
    L = max(len(a), len(b))
    out = [0] * L
    for i, ai in enumerate(a):
        out[i] = ai
    for i, bi in enumerate(b):
        out[i] = tw.add(out[i], bi)
    return out


def _dneg(tw, a):
    return [tw.neg(ai) for ai in a]


def _dpow_p(tw, a, L):
    """p-th power of a series mod t^L (Frobenius on coefficients)."""
    out = [0] * L
    for i, ai in enumerate(a):
        if ai and i * tw.p < L:
            out[i * tw.p] = tw.frobenius(ai, 1)
    return out


def _dpow(tw, a, k, L):
    """Small positive integer power by square-and-multiply mod t^L."""
    result = [1]
    base = list(a[:L])
    while k:
        if k & 1:
            result = _dmul(tw, result, base, L)
        base = _dmul(tw, base, base, L)
        k >>= 1
    return result + [0] * (L - len(result))


def _dinv(tw, a, L):
    """Inverse of a unit series (a[0] != 0) mod t^L."""
    c0 = tw.inv(a[0])
    out = [0] * L
    out[0] = c0
    for k in range(1, L):
        s = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            if j < len(a) and a[j]:
                s = tw.add(s, tw.mul(a[j], out[k - j]))
        out[k] = tw.neg(tw.mul(c0, s))
    return out


# ---------------------------------------------------------------------------
# Laurent series: t^val * (unit coefficients), unit[0] != 0
# ---------------------------------------------------------------------------

@dataclass
class Series:
    val: int
    unit: list   # unit[0] != 0 unless the series is identically 0 to precision

    def is_zero(self):
        return not self.unit

    def prec(self):
        return len(self.unit)

    def coeff(self, k):
        """Coefficient of t^k (must sit inside the known window)."""
        if self.is_zero():
            return 0
        i = k - self.val
        if i < 0:
            return 0
        if i >= len(self.unit):
            raise PrecisionError("coefficient outside the computed window")
        return self.unit[i]


def _normalize(dense, base_val, min_unit):
    for i, c in enumerate(dense):
        if c:
            unit = dense[i:]
            if len(unit) < min_unit:
                raise PrecisionError("series window too short after shift")
            return Series(base_val + i, unit[:max(min_unit, len(unit))])
    raise PrecisionError("series vanished to working precision")


def ser_mul(tw, s, t_, L):
    unit = _dmul(tw, s.unit, t_.unit, L)
    if unit and unit[0] == 0:
        raise PrecisionError("unit product lost its leading coefficient")
    return Series(s.val + t_.val, unit)


def ser_pow(tw, s, k, L):
    if k == 0:
        return Series(0, [1] + [0] * (L - 1))
    if k < 0:
        inv = Series(-s.val, _dinv(tw, s.unit, L))
        return ser_pow(tw, inv, -k, L)
    unit = _dpow(tw, s.unit, k, L)
    return Series(s.val * k, unit)


def ser_scale(tw, s, c):
    return Series(s.val, [tw.mul(c, u) for u in s.unit])


# ---------------------------------------------------------------------------
# local expansions
# ---------------------------------------------------------------------------

def _xyz_dense_at(curve, P, L):
    """Dense series (x(t), y(t), z(t)) mod t^L at an affine point, t = z - c.

    Cached per point at precision rounded up to a multiple of 16; the dense
    helpers tolerate operands longer than their truncation order.
    """
    L = ((L + 15) // 16) * 16
    key = (P, L)
    hit = curve._series_cache.get(key)
    if hit is not None:
        return hit
    tw, q = curve.tower, curve.q
    a, b, c = P
    z = [c, 1] + [0] * (L - 2) if L >= 2 else [c]
    zk = _dpow(tw, z, q * q - q + 1, L)
    # Hensel: F(y) = y^(q^2) - y - z^(q^2-q+1), F(y + h) = F(y) + h^(q^2) - h
    y = [b] + [0] * (L - 1)
    for _ in range(64):
        yq2 = y
        for _ in range(2 * tw.e):
            yq2 = _dpow_p(tw, yq2, L)
        r = _dadd(tw, _dadd(tw, yq2, _dneg(tw, y)), _dneg(tw, zk))
        if not any(r):
            break
        y = _dadd(tw, y, r)
    else:
        raise PrecisionError("y-lift did not converge")
    # Hensel: G(x) = x^q + x - y^(q+1), G(x + h) = G(x) + h^q + h
    yq1 = _dmul(tw, _dpow(tw, y, q, L), y, L)
    x = [a] + [0] * (L - 1)
    for _ in range(64):
        xq = x
        for _ in range(tw.e):
            xq = _dpow_p(tw, xq, L)
        r = _dadd(tw, _dadd(tw, xq, x), _dneg(tw, yq1))
        if not any(r):
            break
        x = _dadd(tw, x, _dneg(tw, r))
    else:
        raise PrecisionError("x-lift did not converge")
    out = (x, y, z + [0] * (L - len(z)))
    curve._series_cache[key] = out
    return out


def _flip_signs(tw, s):
    """Substitute t -> -t in a Laurent series (identity for p = 2)."""
    if tw.p == 2:
        return s
    unit = [u if (s.val + i) % 2 == 0 else tw.neg(u)
            for i, u in enumerate(s.unit)]
    return Series(s.val, unit)


def atom_series(curve, atom, P, unit_len):
    """Laurent expansion of an atom at P in the canonical parameter.

    Canonical parameters: t = z - z(P) at affine P, t = z/x at infinity.
    """
    tw, q = curve.tower, curve.q
    q3 = q**3
    if P is INFINITY:
        # pull back through inversion and expand at the origin, then t -> -t
        L = (q3 + 1) + unit_len + 2
        x, y, z = _xyz_dense_at(curve, P0, L)
        if atom.kind == "x":
            num = [1]
        elif atom.kind == "y":
            num = y
        elif atom.kind == "z":
            num = _dneg(tw, z)
        elif atom.kind == "x-a":
            num = _dadd(tw, [1], [tw.neg(tw.mul(atom.data[0], xi)) for xi in x])
        elif atom.kind == "z-c":
            num = _dneg(tw, _dadd(tw, z, [tw.mul(atom.data[0], xi) for xi in x]))
        elif atom.kind == "tan":
            a2, b2 = atom.data
            num = _dadd(tw, [1], _dadd(
                tw, [tw.mul(tw.pow(a2, q), xi) for xi in x],
                [tw.neg(tw.mul(tw.pow(b2, q), yi)) for yi in y]))
        else:
            raise ValueError(atom.kind)
        ns = _normalize(num, 0, 1)
        xs = _normalize(x, 0, 1)
        xinv = Series(-xs.val, _dinv(tw, xs.unit, unit_len))
        out = ser_mul(tw, Series(ns.val, ns.unit[:unit_len]), xinv, unit_len)
        return _flip_signs(tw, out)
    # affine point: valuations are bounded by q^3 + 1
    L = (q3 + 1) + unit_len + 1
    x, y, z = _xyz_dense_at(curve, P, L)
    a, b, c = P
    if atom.kind == "x":
        dense = x
    elif atom.kind == "y":
        dense = y
    elif atom.kind == "z":
        dense = z
    elif atom.kind == "x-a":
        dense = _dadd(tw, x, [tw.neg(atom.data[0])])
    elif atom.kind == "z-c":
        dense = _dadd(tw, z, [tw.neg(atom.data[0])])
    elif atom.kind == "tan":
        a2, b2 = atom.data
        dense = _dadd(tw, _dadd(tw, x, [tw.neg(tw.mul(tw.pow(b2, q), yi)) for yi in y]),
                      [tw.pow(a2, q)])
    else:
        raise ValueError(atom.kind)
    return _normalize(dense, 0, 1)


def _as_dense(s, prec):
    out = [0] * prec
    for i, u in enumerate(s.unit):
        k = s.val + i
        if 0 <= k < prec:
            out[k] = u
    return out


def local_expansion(curve, P, prec):
    """Coordinate expansions at P as coefficient lists of length prec.

    At affine P: series of (x, y, z) with (x(0), y(0), z(0)) = P.  At
    infinity the coordinates have poles, so the triple (1/x, y/x, z/x) is
    returned instead; z/x is the canonical parameter t itself.
    """
    if prec < 1:
        raise ValueError("prec must be >= 1")
    tw = curve.tower
    if P is INFINITY:
        sx = atom_series(curve, X, P, prec + 1)
        sy = atom_series(curve, Y, P, prec + 1)
        sz = atom_series(curve, Z, P, prec + 1)
        one_over_x = ser_pow(tw, sx, -1, prec + 1)
        y_over_x = ser_mul(tw, sy, one_over_x, prec + 1)
        z_over_x = ser_mul(tw, sz, one_over_x, prec + 1)
        return tuple(_as_dense(s, prec) for s in (one_over_x, y_over_x, z_over_x))
    x, y, z = _xyz_dense_at(curve, P, prec)
    return (x[:prec], y[:prec], z[:prec])


def series_of(curve, f, P, unit_len):
    """Laurent expansion of a monomial at P with unit_len known coefficients."""
    tw = curve.tower
    out = Series(0, [f.scalar] + [0] * (unit_len - 1))
    for A, e in f.powers:
        s = atom_series(curve, A, P, unit_len)
        out = ser_mul(tw, out, ser_pow(tw, s, e, unit_len), unit_len)
    return out


def _window_sum(curve, terms, P, upto):
    """Coefficients of sum(terms) at P on the window [w0, upto]."""
    tw = curve.tower
    vals = []
    sers = []
    for t in terms:
        v = valuation(curve, t, P)
        vals.append(v)
        if v > upto:
            sers.append(None)
            continue
        sers.append(series_of(curve, t, P, upto - v + 1))
    w0 = min(vals) if vals else 0
    w0 = min(w0, upto)   # all-terms-vanish case: report zero coefficients
    coeffs = [0] * (upto - w0 + 1)
    for s in sers:
        if s is None:
            continue
        for i, u in enumerate(s.unit):
            k = s.val + i
            if w0 <= k <= upto:
                coeffs[k - w0] = tw.add(coeffs[k - w0], u)
    return w0, coeffs


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _atom_value(curve, atom, P):
    tw, q = curve.tower, curve.q
    a, b, c = P
    if atom.kind == "x":
        return a
    if atom.kind == "y":
        return b
    if atom.kind == "z":
        return c
    if atom.kind == "x-a":
        return tw.sub(a, atom.data[0])
    if atom.kind == "z-c":
        return tw.sub(c, atom.data[0])
    a2, b2 = atom.data
    return tw.add(tw.sub(a, tw.mul(tw.pow(b2, q), b)), tw.pow(a2, q))


def evaluate(curve, f, P):
    """Value of a monomial or a formal sum of monomials at P.

    Every term must be finite at P (valuation >= 0); terms that vanish to
    positive order contribute 0, and indeterminate products of vanishing and
    blowing-up atoms are resolved through local expansions.
    """
    tw = curve.tower
    total = 0
    for term in _terms(f):
        v = valuation(curve, term, P)
        if v < 0:
            raise PoleError(f"{term} has a pole at {P}")
        if v > 0:
            continue
        if P is INFINITY:
            s = series_of(curve, term, P, 1)
            total = tw.add(total, s.unit[0] if s.val == 0 else 0)
            continue
        value = term.scalar
        needs_series = False
        for A, e in term.powers:
            av = _atom_value(curve, A, P)
            if av == 0:
                needs_series = True
                break
            value = tw.mul(value, tw.pow(av, e))
        if needs_series:
            s = series_of(curve, term, P, 1)
            value = s.unit[0] if s.val == 0 else 0
        total = tw.add(total, value)
    return total


def leading_coefficient(curve, f, P, b):
    """(t^b f)(P) for the canonical local parameter at P.

    Requires valuation(f, P) >= -b; the result is 0 exactly when the
    valuation is strictly larger than -b.
    """
    tw = curve.tower
    terms = _terms(f)
    if len(terms) == 1:
        v = valuation(curve, terms[0], P)
        if v < -b:
            raise PoleError(f"valuation {v} below -b = {-b} at {P}")
        if v > -b:
            return 0
        s = series_of(curve, terms[0], P, 1)
        return s.unit[0]
    w0, coeffs = _window_sum(curve, terms, P, -b)
    for k in range(w0, -b):
        if coeffs[k - w0] != 0:
            raise PoleError(f"sum has valuation {k} below -b = {-b} at {P}")
    return coeffs[-b - w0]


def sum_valuation(curve, f, P, max_window=None):
    """Valuation at P of a formal sum, resolved through series windows."""
    terms = _terms(f)
    if len(terms) == 1:
        return valuation(curve, terms[0], P)
    q3 = curve.q**3
    upto = max_window if max_window is not None else (q3 + 2)
    vmin = min(valuation(curve, t, P) for t in terms)
    w0, coeffs = _window_sum(curve, terms, P, vmin + upto)
    for k, ck in enumerate(coeffs):
        if ck:
            return w0 + k
    raise PrecisionError(f"sum vanishes to order > {vmin + upto} at {P}")


def place_ids(curve, places):
    return np.array([curve.point_id[P] for P in places], dtype=np.int64)


def evaluate_over(curve, f, places):
    """Vectorized evaluation of a monomial over affine places without poles
    there; places may be a list of points or a precomputed index array."""
    tw = curve.tower
    ids = places if isinstance(places, np.ndarray) else place_ids(curve, places)
    out = np.full(len(ids), f.scalar, dtype=np.int64)
    for A, e in f.powers:
        vals = _atom_values_arr(curve, A)[ids]
        if e < 0 and (vals == 0).any():
            raise PoleError(f"{f} has a pole among the evaluation places")
        out = tw.mul_arr(out, tw.pow_arr(vals, e))
    return out


def _atom_values_arr(curve, atom):
    """Values of an atom at every affine point (infinity column unused)."""
    hit = curve._atom_values.get(atom)
    if hit is not None:
        return hit
    tw, q = curve.tower, curve.q
    A, B, C = curve.coord_arrays
    if atom.kind == "x":
        vals = A.copy()
    elif atom.kind == "y":
        vals = B.copy()
    elif atom.kind == "z":
        vals = C.copy()
    elif atom.kind == "x-a":
        vals = tw.sub_arr(A, np.int64(atom.data[0]))
    elif atom.kind == "z-c":
        vals = tw.sub_arr(C, np.int64(atom.data[0]))
    else:
        a2, b2 = atom.data
        vals = tw.add_arr(
            tw.sub_arr(A, tw.mul_arr(np.int64(tw.pow(b2, q)), B)),
            np.int64(tw.pow(a2, q)))
    vals[curve.n_points - 1] = 0
    curve._atom_values[atom] = vals
    return vals
