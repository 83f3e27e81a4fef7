"""Rational points of the GK curve and its distinguished plane sections.

The curve over F_{q^6} is cut out by
    y^(q+1)     = x^q + x
    z^(q^2-q+1) = y^(q^2) - y
with a single point at infinity.  This module enumerates all F_{q^6}-rational
points, splits them into the two automorphism orbits O1 (the F_{q^2}-rational
points, equivalently z = 0 plus infinity) and O2, indexes the fibers of the
plane sections x = a and z = c, and computes the set Gamma0 of z-values whose
plane meets the curve in a full fiber of q^3 affine points.

Everything is verified at construction time: point count against the two
closed forms q^8-q^6+q^5+1 and q^6+1+2g*q^3, orbit sizes, the partition of O2
by full x-fibers, and the agreement of Gamma0 computed from the polynomial
condition with Gamma0 computed by fiber counting.
"""

import functools
from typing import NamedTuple


class AffinePoint(NamedTuple):
    a: int
    b: int
    c: int

    def __repr__(self):
        return f"({self.a},{self.b},{self.c})"


class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "Pinf"


INFINITY = _Infinity()

P0 = AffinePoint(0, 0, 0)


def place_key(P):
    """Canonical sort key: affine points lexicographically, infinity last."""
    if P is INFINITY:
        return (1, 0, 0, 0)
    return (0, P.a, P.b, P.c)


class GKCurve:
    """Immutable table of the rational points of the curve for one tower."""

    def __init__(self, tower):
        self.tower = tower
        self.q = tower.q
        q = self.q
        self.genus = (q**5 - 2 * q**3 + q**2) // 2
        self._enumerate()
        self._index_fibers()
        self._compute_gamma0()
        import numpy as np
        coords = np.zeros((3, self.n_points), dtype=np.int64)
        for i, P in enumerate(self.points):
            if P is not INFINITY:
                coords[:, i] = P
        self.coord_arrays = coords   # a, b, c rows; infinity column unused
        self._atom_divisors = {}
        self._atom_values = {}
        self._series_cache = {}
        self._rr_cache = {}
        self._perm_cache = {}

    # -- enumeration ---------------------------------------------------------

    def _enumerate(self):
        tw, q = self.tower, self.q
        trace_map = {}   # value of a^q + a  -> sorted list of a
        norm_map = {}    # value of b^(q+1) -> sorted list of b
        zroot_map = {}   # value of c^(q^2-q+1) -> sorted list of c
        for a in range(tw.order):
            trace_map.setdefault(tw.add(tw.pow(a, q), a), []).append(a)
        for b in range(tw.order):
            norm_map.setdefault(tw.pow(b, q + 1), []).append(b)
        for c in range(tw.order):
            zroot_map.setdefault(tw.pow(c, q * q - q + 1), []).append(c)
        points = []
        for a in range(tw.order):
            ta = tw.add(tw.pow(a, q), a)
            for b in norm_map.get(ta, ()):
                w = tw.sub(tw.pow(b, q * q), b)
                for c in zroot_map.get(w, ()):
                    points.append(AffinePoint(a, b, c))
        points.append(INFINITY)
        self.points = points
        self.point_id = {P: i for i, P in enumerate(points)}
        self.n_points = len(points)

        q2 = q * q
        self.o1 = [P for P in points if P is INFINITY or P.c == 0]
        self.o2 = [P for P in points if not (P is INFINITY or P.c == 0)]
        g, q3 = self.genus, q**3
        expected = q**8 - q**6 + q**5 + 1
        if self.n_points != expected:
            raise RuntimeError(
                f"point count {self.n_points} != q^8-q^6+q^5+1 = {expected}")
        if self.n_points != q**6 + 1 + 2 * g * q3:
            raise RuntimeError("point count violates the maximality identity")
        if len(self.o1) != q3 + 1:
            raise RuntimeError(f"|O1| = {len(self.o1)} != q^3+1 = {q3 + 1}")
        if len(self.o2) != q3 * (q3 + 1) * (q2 - 1):
            raise RuntimeError("|O2| != q^3(q^3+1)(q^2-1)")
        # z = 0 must coincide with "all coordinates in F_{q^2}"
        for P in self.o1:
            if P is not INFINITY:
                if not (tw.in_subfield(P.a, 2 * tw.e)
                        and tw.in_subfield(P.b, 2 * tw.e) and P.c == 0):
                    raise RuntimeError("O1 point outside F_{q^2}")

    def _index_fibers(self):
        q3 = self.q**3
        self.x_fibers = {}
        self.z_fibers = {}
        for P in self.points:
            if P is INFINITY:
                continue
            self.x_fibers.setdefault(P.a, []).append(P)
            self.z_fibers.setdefault(P.c, []).append(P)
        self.full_fiber_abscissas = sorted(
            a for a, pts in self.x_fibers.items() if len(pts) == q3 + 1)
        q5 = self.q**5
        if len(self.full_fiber_abscissas) != q5 - q3:
            raise RuntimeError("number of full x-fibers != q^5 - q^3")
        covered = set()
        for a in self.full_fiber_abscissas:
            fiber = self.x_fibers[a]
            if any(P.c == 0 for P in fiber):
                raise RuntimeError("full x-fiber meets O1")
            covered.update(fiber)
        if covered != set(self.o2):
            raise RuntimeError("full x-fibers do not partition O2")

    def _compute_gamma0(self):
        tw, q, q3 = self.tower, self.q, self.q**3
        e1 = (q3 + 1) * (q * q - 1)
        e2 = (q3 + 1) * (q * q - q)
        by_condition = {0}
        for c in range(1, tw.order):
            v = tw.add(tw.add(tw.pow(c, e1), tw.pow(c, e2)), 1)
            if v == 0:
                by_condition.add(c)
        by_fibers = {c for c, pts in self.z_fibers.items() if len(pts) == q3}
        if by_condition != by_fibers:
            raise RuntimeError(
                "Gamma0 from the polynomial condition disagrees with fiber counts")
        expected = q**5 - q3 + q * q
        if len(by_condition) != expected:
            raise RuntimeError(f"|Gamma0| = {len(by_condition)} != {expected}")
        covered = set()
        for c in by_condition:
            covered.update(self.z_fibers[c])
        if len(covered) != self.n_points - 1:
            raise RuntimeError("Gamma0 z-fibers do not cover the affine points")
        self.gamma0 = frozenset(by_condition)

    # -- queries ---------------------------------------------------------------

    def is_on_curve(self, P):
        tw, q = self.tower, self.q
        if P is INFINITY:
            return True
        a, b, c = P
        if not all(0 <= t < tw.order for t in (a, b, c)):
            raise ValueError("coordinates outside the tower's index range")
        eq1 = tw.pow(b, q + 1) == tw.add(tw.pow(a, q), a)
        eq2 = tw.pow(c, q * q - q + 1) == tw.sub(tw.pow(b, q * q), b)
        return eq1 and eq2

    def plane_section_x(self, a):
        """Affine rational points with x = a, enumeration order."""
        return list(self.x_fibers.get(a, ()))

    def plane_section_z(self, c):
        """Affine rational points with z = c, enumeration order."""
        return list(self.z_fibers.get(c, ()))

    def orbit_tag(self, P):
        return "O1" if (P is INFINITY or P.c == 0) else "O2"

    def affine_points(self):
        return self.points[:-1]

    def csv_rows(self):
        """Rows for the points export: index, a, b, c, orbit tag."""
        rows = []
        for i, P in enumerate(self.points):
            if P is INFINITY:
                rows.append((i, "", "", "", "O1"))
            else:
                rows.append((i, P.a, P.b, P.c, self.orbit_tag(P)))
        return rows


@functools.lru_cache(maxsize=None)
def make_curve(p, e=1):
    from .fields import make_tower
    return GKCurve(make_tower(p, e))
