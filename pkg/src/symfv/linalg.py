"""Exact 3-vectors and 3x3 matrices over a Scalar field."""
from __future__ import annotations

from fractions import Fraction

from .errors import SingularMatrixError
from .scalar import FieldDescriptor, Scalar


class Vec3:
    __slots__ = ("x", "y", "z")

    def __init__(self, x: Scalar, y: Scalar, z: Scalar):
        self.x, self.y, self.z = x, y, z

    @staticmethod
    def of(field: FieldDescriptor, x, y, z) -> "Vec3":
        def lift(v):
            return v if isinstance(v, Scalar) else field.scalar(Fraction(v))
        return Vec3(lift(x), lift(y), lift(z))

    def __add__(self, o):
        return Vec3(self.x + o.x, self.y + o.y, self.z + o.z)

    def __sub__(self, o):
        return Vec3(self.x - o.x, self.y - o.y, self.z - o.z)

    def __neg__(self):
        return Vec3(-self.x, -self.y, -self.z)

    def scale(self, s) -> "Vec3":
        return Vec3(self.x * s, self.y * s, self.z * s)

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z

    def __eq__(self, o):
        return self.x == o.x and self.y == o.y and self.z == o.z

    def __hash__(self):
        return hash((self.x, self.y, self.z))

    def key(self):
        return (self.x.num, self.x.den, self.y.num, self.y.den, self.z.num, self.z.den)

    def is_zero(self) -> bool:
        return self.x.is_zero() and self.y.is_zero() and self.z.is_zero()

    def __repr__(self):
        return f"({self.x!r}, {self.y!r}, {self.z!r})"


class Mat3:
    __slots__ = ("rows",)

    def __init__(self, r0: Vec3, r1: Vec3, r2: Vec3):
        self.rows = (r0, r1, r2)

    @staticmethod
    def of(field: FieldDescriptor, entries) -> "Mat3":
        return Mat3(*(Vec3.of(field, *row) for row in entries))

    @staticmethod
    def identity(field: FieldDescriptor) -> "Mat3":
        return Mat3.of(field, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def __eq__(self, o):
        return self.rows == o.rows

    def __hash__(self):
        return hash(self.rows)

    def key(self):
        return tuple(r.key() for r in self.rows)

    def __repr__(self):
        return f"Mat3{self.rows!r}"


def dot(a: Vec3, b: Vec3) -> Scalar:
    return a.x * b.x + a.y * b.y + a.z * b.z


def cross(a: Vec3, b: Vec3) -> Vec3:
    return Vec3(a.y * b.z - a.z * b.y,
                a.z * b.x - a.x * b.z,
                a.x * b.y - a.y * b.x)


def matvec(m: Mat3, v: Vec3) -> Vec3:
    r0, r1, r2 = m.rows
    return Vec3(dot(r0, v), dot(r1, v), dot(r2, v))


def matmul(a: Mat3, b: Mat3) -> Mat3:
    bt = transpose(b)
    return Mat3(*(Vec3(dot(r, bt.rows[0]), dot(r, bt.rows[1]), dot(r, bt.rows[2]))
                  for r in a.rows))


def transpose(m: Mat3) -> Mat3:
    r0, r1, r2 = m.rows
    return Mat3(Vec3(r0.x, r1.x, r2.x),
                Vec3(r0.y, r1.y, r2.y),
                Vec3(r0.z, r1.z, r2.z))


def det(m: Mat3) -> Scalar:
    r0, r1, r2 = m.rows
    return dot(r0, cross(r1, r2))


def solve3(m: Mat3, b: Vec3) -> Vec3:
    """Unique solution of m x = b by Cramer's rule."""
    d = det(m)
    if d.is_zero():
        raise SingularMatrixError("solve3 on singular matrix")
    cols = transpose(m).rows
    def rep(i):
        cs = list(cols)
        cs[i] = b
        return det(transpose(Mat3(*cs)))
    return Vec3(rep(0) / d, rep(1) / d, rep(2) / d)


def reduce_direction(v: Vec3) -> Vec3:
    """Scale a nonzero vector by a positive rational so its coefficient
    vectors become primitive integers (direction preserved, coordinates small)."""
    import math as _math
    from fractions import Fraction as _Fr
    den_lcm = 1
    num_gcd = 0
    for c in (v.x, v.y, v.z):
        den_lcm = _math.lcm(den_lcm, c.den)
        for n in c.num:
            num_gcd = _math.gcd(num_gcd, n)
    if num_gcd == 0:
        raise ValueError("zero vector")
    factor = _Fr(den_lcm, num_gcd)
    if factor == 1:
        return v
    s = v.x.field.scalar(factor)
    return Vec3(v.x * s, v.y * s, v.z * s)


def orient3d(p: Vec3, q: Vec3, r: Vec3, s: Vec3) -> int:
    """Sign of det[q-p; r-p; s-p]: +1 if s is on the positive side of (p,q,r)."""
    return det(Mat3(q - p, r - p, s - p)).sign()


def is_orthogonal(m: Mat3) -> bool:
    return matmul(m, transpose(m)) == Mat3.identity_like(m)


def _identity_like(m: Mat3) -> Mat3:
    f = m.rows[0].x.field
    return Mat3.identity(f)


Mat3.identity_like = staticmethod(_identity_like)
