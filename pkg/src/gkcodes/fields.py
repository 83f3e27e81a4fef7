"""Exact arithmetic for the tower F_p < F_q < F_{q^2} < F_{q^6}, q = p^e.

The whole tower lives inside a single flat extension F_p[w]/(modulus) of
degree 6e; each intermediate field is recovered as the fixed set of the
appropriate Frobenius power.  Elements are canonical integer indices in
[0, p^(6e)): the index encodes the coefficient vector of the residue
polynomial in little-endian base p, so for p = 2 the index *is* the usual
bit representation and addition is XOR.

The modulus is the lexicographically smallest monic primitive polynomial
of degree 6e over F_p (smallest when its non-leading coefficient vector is
read as a base-p integer).  Primitivity means the class of w generates the
multiplicative group, which gives log/exp tables for free and pins every
exported matrix bit-exactly.

Moduli used at desk scale (little-endian coefficient lists):
    p=2, e=1 : x^6 + x + 1                  -> [1, 1, 0, 0, 0, 0, 1]
    p=3, e=1 : computed at construction, frozen in the test suite
    p=2, e=2 : degree-12 primitive polynomial, likewise frozen
"""

import functools
import math

import numpy as np

SIZE_GUARD = 1 << 26  # hard cap on p^(6e); everything downstream enumerates


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (little-endian coefficient lists, no trailing 0)
# ---------------------------------------------------------------------------

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and a:
        a = _ptrim(a)
        if len(a) - 1 < dm:
            break
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _ptrim(a)
    return a


def _ppowmod(a, n, m, p):
    result = [1]
    base = _pmod(a, m, p)
    while n:
        if n & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        n >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, ai in enumerate(a):
        out[i] = ai
    for i, bi in enumerate(b):
        out[i] = (out[i] - bi) % p
    return _ptrim(out)


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_factors(n):
    """Distinct prime factors of n by trial division (n <= 2^26 here)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(f, n, p):
    # f irreducible of degree n  <=>  x^(p^n) = x (mod f) and
    # gcd(x^(p^(n/l)) - x, f) = 1 for every prime l | n.
    x = [0, 1]
    r = list(x)
    powers = {}
    for k in range(1, n + 1):
        r = _ppowmod(r, p, f, p)
        powers[k] = list(r)
    if _ptrim(_psub(powers[n], x, p)):
        return False
    for ell in prime_factors(n):
        g = _pgcd(_psub(powers[n // ell], x, p), f, p)
        if len(g) != 1:
            return False
    return True


def smallest_primitive_modulus(p, n):
    """Lexicographically smallest monic primitive polynomial of degree n.

    Candidates x^n + c(x) are ordered by the base-p integer encoding of the
    low part c; the first irreducible one whose root has multiplicative
    order p^n - 1 wins.
    """
    order = p ** n - 1
    ells = prime_factors(order)
    for low in range(1, p ** n):
        coeffs = []
        v = low
        for _ in range(n):
            coeffs.append(v % p)
            v //= p
        if coeffs[0] == 0:
            continue  # divisible by x
        f = coeffs + [1]
        if not _is_irreducible(f, n, p):
            continue
        primitive = True
        for ell in ells:
            r = _ppowmod([0, 1], order // ell, f, p)
            if r == [1]:
                primitive = False
                break
        if primitive:
            return tuple(f)
    raise RuntimeError(f"no primitive polynomial of degree {n} over F_{p}")


# ---------------------------------------------------------------------------
# the tower
# ---------------------------------------------------------------------------

class FieldTower:
    """Arithmetic context for F_{q^6} with q = p^e, elements as indices.

    Immutable after construction; every operation is a pure function of its
    inputs, so instances are safe to share across threads.
    """

    def __init__(self, p, e, modulus=None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if e < 1:
            raise ValueError("e must be a positive integer")
        n = 6 * e
        if p ** n > SIZE_GUARD:
            raise ValueError(
                f"p^(6e) = {p**n} exceeds the enumeration guard {SIZE_GUARD}")
        self.p = p
        self.e = e
        self.n = n
        self.q = p ** e
        self.order = p ** n
        self.group_order = self.order - 1
        if modulus is None:
            modulus = smallest_primitive_modulus(p, n)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree 6e")
        if not _is_irreducible(list(modulus), n, p):
            raise ValueError("modulus is not irreducible over F_p")
        self.modulus = modulus
        self._pow_p = [p ** i for i in range(n + 1)]
        self._build_tables()
        self.generator = int(p) if n > 1 else int(self._exp[1])
        # full addition/negation lookup tables pay for themselves up to here
        if p != 2 and self.order <= 2048:
            idx = np.arange(self.order, dtype=np.int64)
            self._neg_table = self._digit_neg_arr(idx)
            self._add_table = self._digit_add_arr(idx[:, None], idx[None, :])
        else:
            self._neg_table = None
            self._add_table = None

    # -- construction ------------------------------------------------------

    def _digit_add(self, a, b):
        if self.p == 2:
            return a ^ b
        out = 0
        for pk in self._pow_p[: self.n]:
            out += ((a // pk + b // pk) % self.p) * pk
        return out

    def _build_tables(self):
        p, n, Q = self.p, self.n, self.order
        # x^n = -(low part of modulus); reduction summand per overflow digit
        red = [0] * p
        for d in range(1, p):
            v = 0
            for i in range(n):
                v += ((-d * self.modulus[i]) % p) * self._pow_p[i]
            red[d] = v
        exp = np.zeros(2 * (Q - 1), dtype=np.int64)
        log = np.full(Q, -1, dtype=np.int64)
        v = 1
        for i in range(Q - 1):
            exp[i] = v
            log[v] = i
            shifted = v * p
            top, rem = divmod(shifted, Q)
            v = self._digit_add(rem, red[top]) if top else rem
        if v != 1 or np.any(log[1:] < 0):
            raise ValueError("modulus is not primitive: w does not generate")
        exp[Q - 1:] = exp[: Q - 1]
        self._exp = exp
        self._log = log

    def self_check(self):
        """Re-verify the structural invariants (irreducibility, generator order)."""
        if not _is_irreducible(list(self.modulus), self.n, self.p):
            raise ValueError("modulus failed irreducibility re-check")
        for ell in prime_factors(self.group_order):
            if self.pow(self.generator, self.group_order // ell) == 1:
                raise ValueError("generator order check failed")
        if self.pow(self.generator, self.group_order) != 1:
            raise ValueError("generator order check failed")

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, a, b):
        return self._digit_add(a, b)

    def neg(self, a):
        if self.p == 2:
            return a
        out = 0
        for pk in self._pow_p[: self.n]:
            out += ((-(a // pk)) % self.p) * pk
        return out

    def sub(self, a, b):
        return self._digit_add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inversion of zero")
        return int(self._exp[self.group_order - self._log[a]])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k):
        if a == 0:
            if k > 0:
                return 0
            if k == 0:
                return 1
            raise ZeroDivisionError("0 raised to a negative power")
        return int(self._exp[(int(self._log[a]) * k) % self.group_order])

    def frobenius(self, a, i=1):
        """a^(p^i); i may be any integer, period 6e."""
        return self.pow(a, pow(self.p, i % self.n, self.group_order))

    def in_subfield(self, a, k):
        if self.n % k != 0:
            raise ValueError(f"k = {k} does not divide 6e = {self.n}")
        return self.frobenius(a, k) == a

    def subfield(self, k):
        """All elements of the subfield F_{p^k}, ascending index order."""
        return [a for a in range(self.order) if self.in_subfield(a, k)]

    def elements(self):
        return range(self.order)

    def nth_roots(self, m):
        """All solutions of x^m = 1; there are gcd(m, p^(6e)-1) of them."""
        d = math.gcd(m, self.group_order)
        step = self.group_order // d
        return sorted(int(self._exp[i * step]) for i in range(d))

    def solve_power(self, a, m):
        """Deterministic x with x^m = a: the solution of minimal index.

        Requires a != 0 and a an m-th power, i.e. a^((p^(6e)-1)/gcd) = 1.
        """
        if a == 0:
            raise ZeroDivisionError("solve_power needs a nonzero target")
        t = int(self._log[a])
        d = math.gcd(m, self.group_order)
        if t % d != 0:
            raise ValueError(f"{a} is not an {m}-th power")
        mm = m // d
        nn = self.group_order // d
        s0 = (t // d) * pow(mm, -1, nn) % nn
        step = nn
        return min(int(self._exp[(s0 + j * step) % self.group_order])
                   for j in range(d))

    # -- serialization -------------------------------------------------------

    def coeffs(self, a):
        """Little-endian coefficient vector of length 6e."""
        out = []
        for _ in range(self.n):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_coeffs(self, v):
        a = 0
        for i, c in enumerate(v):
            a += (int(c) % self.p) * self._pow_p[i]
        return a

    def description(self):
        """Field description block emitted in export file headers."""
        return {"p": self.p, "e": self.e,
                "modulus": list(self.modulus)}

    # -- vectorized arithmetic on numpy index arrays ---------------------------

    def _digit_add_arr(self, a, b):
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for pk in self._pow_p[: self.n]:
            out += ((a // pk + b // pk) % self.p) * pk
        return out

    def _digit_neg_arr(self, a):
        out = np.zeros(a.shape, dtype=np.int64)
        for pk in self._pow_p[: self.n]:
            out += ((-(a // pk)) % self.p) * pk
        return out

    def add_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self._add_table is not None:
            return self._add_table[a, b]
        return self._digit_add_arr(a, b)

    def neg_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        if self._neg_table is not None:
            return self._neg_table[a]
        return self._digit_neg_arr(a)

    def sub_arr(self, a, b):
        return self.add_arr(a, self.neg_arr(b))

    def mul_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a] + self._log[b]]
        zero = (a == 0) | (b == 0)
        if zero.any():
            out = np.where(zero, 0, out)
        return out

    def inv_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise ZeroDivisionError("inversion of zero")
        return self._exp[self.group_order - self._log[a]]

    def pow_arr(self, a, k):
        a = np.asarray(a, dtype=np.int64)
        zero = a == 0
        if zero.any():
            if k <= 0:
                raise ZeroDivisionError("0 raised to a non-positive power")
            out = self._exp[(self._log[np.where(zero, 1, a)] * k) % self.group_order]
            return np.where(zero, 0, out)
        return self._exp[(self._log[a] * k) % self.group_order]

    def frob_arr(self, a, i=1):
        return self.pow_arr(a, pow(self.p, i % self.n, self.group_order))

    def sum_arr(self, a, axis=0):
        """Field sum along an axis of an index array."""
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        if self._add_table is not None and a.shape[axis] > 0:
            a = np.moveaxis(a, axis, 0)
            acc = a[0]
            for i in range(1, a.shape[0]):
                acc = self._add_table[acc, a[i]]
            return acc.copy() if acc is a[0] else acc
        out = np.zeros(np.sum(a, axis=axis).shape, dtype=np.int64)
        for pk in self._pow_p[: self.n]:
            out += (np.sum((a // pk) % self.p, axis=axis) % self.p) * pk
        return out


@functools.lru_cache(maxsize=None)
def make_tower(p, e=1):
    """Shared immutable tower for (p, e); validates primality and size guard."""
    return FieldTower(p, e)
