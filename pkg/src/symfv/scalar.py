"""Exact arithmetic in embedded real algebraic number fields Q(theta).

Elements are polynomials in theta with rational coefficients, reduced modulo
the monic integer minimal polynomial of theta and stored as an integer
coefficient vector over a common positive denominator.  Three field kinds
cover everything the constructions need: the rationals, Q(2cos(2pi/m)) for
the trigonometric constants, and Q(Phi) for the golden ratio.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import FieldMismatchError, ResourceLimitError

DEGREE_CAP = 64

_INF = float("inf")


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _ia_add(a, b):
    return _down(a[0] + b[0]), _up(a[1] + b[1])


def _ia_mul(a, b):
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return _down(min(p)), _up(max(p))


def _ia_from_fraction(q: Fraction):
    try:
        f = float(q)
    except OverflowError:
        return (-_INF, _INF)
    return _down(f), _up(f)


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficient lists, ascending degree)

def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul_int(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_divmod_int(a, b):
    """Exact division of integer polynomials (b monic up to sign of lead)."""
    a = list(a)
    lead = b[-1]
    q = [0] * (max(len(a) - len(b) + 1, 0))
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1]
        if c % lead != 0:
            raise ArithmeticError("non-exact polynomial division")
        c //= lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return q, _poly_trim(a)


@lru_cache(maxsize=None)
def cyclotomic(m: int):
    """Integer coefficients of the m-th cyclotomic polynomial, ascending."""
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            q, r = _poly_divmod_int(poly, cyclotomic(d))
            assert not r
            poly = q
    return tuple(poly)


@lru_cache(maxsize=None)
def minpoly_two_cos(m: int):
    """Minimal polynomial of 2cos(2pi/m) via the y = x + 1/x folding of Phi_m."""
    if m == 1:
        return (-2, 1)
    if m == 2:
        return (2, 1)
    phi = list(cyclotomic(m))
    n2 = (len(phi) - 1) // 2
    work = phi
    out = [0] * (n2 + 1)
    for j in range(n2, -1, -1):
        c = work[n2 + j] if n2 + j < len(work) else 0
        out[j] = c
        if c:
            # subtract c * x^(n2-j) * (x^2+1)^j
            for i in range(j + 1):
                work[(n2 - j) + 2 * i] -= c * math.comb(j, i)
    assert not any(work), "cyclotomic folding left a remainder"
    return tuple(out)


def _poly_eval_fraction(p, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sturm_chain(p):
    chain = [[Fraction(c) for c in p]]
    dp = [Fraction(i * c) for i, c in enumerate(p)][1:]
    chain.append(dp)
    while len(chain[-1]) > 0:
        a, b = chain[-2], chain[-1]
        # remainder of a by b, negated
        a = list(a)
        while len(a) >= len(b) and any(a):
            if a[-1] == 0:
                a.pop()
                continue
            f = a[-1] / b[-1]
            shift = len(a) - len(b)
            for j, bj in enumerate(b):
                a[shift + j] -= f * bj
            a.pop()
        while a and a[-1] == 0:
            a.pop()
        if not a:
            break
        chain.append([-c for c in a])
    return chain


def _sign_changes(chain, x: Fraction) -> int:
    signs = []
    for p in chain:
        v = _poly_eval_fraction(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots of p in the open interval (lo, hi); endpoints must not be roots."""
    if _poly_eval_fraction(p, lo) == 0 or _poly_eval_fraction(p, hi) == 0:
        raise ValueError("interval endpoint is a root")
    chain = _sturm_chain(p)
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


# ---------------------------------------------------------------------------

class FieldDescriptor:
    """An embedded real field Q(theta) given by a monic integer minimal
    polynomial and an isolating interval for the chosen real root."""

    __slots__ = ("min_poly", "degree", "label", "kind", "m",
                 "_iso", "_pow_f", "_pow_width", "_two_cos_cache",
                 "zero", "one")

    def __init__(self, min_poly, iso, label, kind="custom", m=0):
        min_poly = tuple(int(c) for c in min_poly)
        if min_poly[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.min_poly = min_poly
        self.degree = len(min_poly) - 1
        self.label = label
        self.kind = kind
        self.m = m
        if self.degree > DEGREE_CAP:
            raise ResourceLimitError(
                f"field degree {self.degree} exceeds cap {DEGREE_CAP}")
        if self.degree >= 2:
            lo, hi = Fraction(iso[0]), Fraction(iso[1])
            if count_real_roots(min_poly, lo, hi) != 1:
                raise ValueError("isolating interval does not contain exactly one root")
            self._iso = (lo, hi)
        else:
            self._iso = (Fraction(0), Fraction(0))
        self._pow_f = None
        self._pow_width = None
        self._two_cos_cache = {}
        self.zero = self.scalar(0)
        self.one = self.scalar(1)

    def __repr__(self):
        return f"FieldDescriptor({self.label})"

    # -- root interval ------------------------------------------------------

    def refine_iso(self, width: Fraction):
        """Shrink the isolating interval below `width` by exact bisection."""
        lo, hi = self._iso
        p = self.min_poly
        slo = _poly_eval_fraction(p, lo)
        while hi - lo > width:
            mid = (lo + hi) / 2
            smid = _poly_eval_fraction(p, mid)
            if smid == 0:  # cannot happen for irreducible min_poly, keep safe
                mid = (2 * lo + hi) / 3
                smid = _poly_eval_fraction(p, mid)
            if (slo < 0) == (smid < 0):
                lo, slo = mid, smid
            else:
                hi = mid
        self._iso = (lo, hi)
        return lo, hi

    def _float_powers(self):
        """Certified float intervals for theta^0 .. theta^(degree-1)."""
        if self._pow_f is None:
            if self.degree == 1:
                self._pow_f = [(1.0, 1.0)]
            else:
                lo, hi = self.refine_iso(Fraction(1, 10**15))
                t = (_down(float(lo)), _up(float(hi)))
                pw = [(1.0, 1.0), t]
                for _ in range(self.degree - 2):
                    pw.append(_ia_mul(pw[-1], t))
                self._pow_f = pw
        return self._pow_f

    # -- element constructors -------------------------------------------------

    def scalar(self, value) -> "Scalar":
        q = Fraction(value)
        num = [0] * self.degree
        num[0] = q.numerator
        return Scalar(self, tuple(num), q.denominator)

    def from_coeffs(self, coeffs) -> "Scalar":
        """Element from rational coefficients of 1, theta, theta^2, ..."""
        qs = [Fraction(c) for c in coeffs]
        if len(qs) > self.degree:
            raise ValueError("coefficient vector longer than field degree")
        qs += [Fraction(0)] * (self.degree - len(qs))
        den = math.lcm(*(q.denominator for q in qs)) if qs else 1
        num = [int(q * den) for q in qs]
        return _make(self, num, den)

    @property
    def theta(self) -> "Scalar":
        if self.degree == 1:
            # degree-1 fields: the "generator" is just the rational root
            return self.scalar(Fraction(-self.min_poly[0], 1))
        num = [0] * self.degree
        num[1] = 1
        return Scalar(self, tuple(num), 1)

    # -- trigonometric elements (cos fields only) ----------------------------

    def two_cos(self, j: int) -> "Scalar":
        """2cos(2pi j / m) as a field element (kind 'cos' only)."""
        if self.kind != "cos":
            raise FieldMismatchError(f"{self.label} is not a cosine field")
        j %= self.m
        j = min(j, self.m - j)
        cached = self._two_cos_cache.get(j)
        if cached is not None:
            return cached
        # D_0 = 2, D_1 = theta, D_{k+1} = theta*D_k - D_{k-1}
        a, b = self.scalar(2), self.theta
        if j == 0:
            res = a
        else:
            for _ in range(j - 1):
                a, b = b, self.theta * b - a
            res = b
        self._two_cos_cache[j] = res
        return res

    def serialize(self):
        return {"min_poly": list(self.min_poly),
                "iso": [str(self._iso[0]), str(self._iso[1])],
                "label": self.label}


def _normalize(num, den):
    if den == 1:
        return tuple(num), 1
    g = den
    for c in num:
        g = math.gcd(g, c)
        if g == 1:
            return tuple(num), den
    num = [c // g for c in num]
    return tuple(num), den // g


def _make(field, num, den):
    if den < 0:
        num = [-c for c in num]
        den = -den
    num, den = _normalize(list(num), den)
    return Scalar(field, num, den)


class Scalar:
    """An element of a FieldDescriptor's field; immutable, exact."""

    __slots__ = ("field", "num", "den", "_iv")

    def __init__(self, field, num, den):
        self.field = field
        self.num = num
        self.den = den
        self._iv = None

    # -- coercion -------------------------------------------------------------

    def _embed_into(self, field) -> "Scalar":
        if self.field is field:
            return self
        if not any(self.num[1:]):  # rational value embeds anywhere
            return field.scalar(Fraction(self.num[0], self.den))
        sf, tf = self.field, field
        if sf.kind == "cos" and tf.kind == "cos" and tf.m % sf.m == 0:
            image = tf.two_cos(tf.m // sf.m)  # theta_src inside target
            acc = tf.zero
            for c in reversed(self.num):
                acc = acc * image + tf.scalar(c)
            return acc / tf.scalar(self.den)
        raise FieldMismatchError(f"cannot embed {sf.label} into {tf.label}")

    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.scalar(other)
        if self.field is other.field:
            return self, other
        if self.field.degree >= other.field.degree:
            return self, other._embed_into(self.field)
        return self._embed_into(other.field), other

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Scalar) and self.field is other.field:
            a, b = self, other
        else:
            a, b = self._pair(other)
        da, db = a.den, b.den
        if da == 1 and db == 1:
            return Scalar(a.field, tuple(x + y for x, y in zip(a.num, b.num)), 1)
        num = [x * db + y * da for x, y in zip(a.num, b.num)]
        return _make(a.field, num, da * db)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        a, b = self._pair(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Scalar) and self.field is other.field:
            a, b = self, other
        else:
            a, b = self._pair(other)
        f = a.field
        deg = f.degree
        if deg == 1:
            if a.den == 1 and b.den == 1:
                return Scalar(f, (a.num[0] * b.num[0],), 1)
            return _make(f, [a.num[0] * b.num[0]], a.den * b.den)
        conv = [0] * (2 * deg - 1)
        an, bn = a.num, b.num
        for i in range(deg):
            ai = an[i]
            if ai:
                for j in range(deg):
                    if bn[j]:
                        conv[i + j] += ai * bn[j]
        mp = f.min_poly
        for i in range(2 * deg - 2, deg - 1, -1):
            c = conv[i]
            if c:
                conv[i] = 0
                for j in range(deg):
                    conv[i - deg + j] -= c * mp[j]
        return _make(f, conv[:deg], a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("field element inverse of zero")
        f = self.field
        if f.degree == 1:
            return _make(f, [self.den], self.num[0])
        # extended Euclid over Q[x] against the minimal polynomial
        r0 = [Fraction(c) for c in f.min_poly]
        r1 = [Fraction(n, self.den) for n in self.num]
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            while r1 and r1[-1] == 0:
                r1.pop()
            if len(r1) == 1:
                inv = 1 / r1[0]
                coeffs = [c * inv for c in s1]
                return f.from_coeffs(coeffs[:f.degree])
            q = [Fraction(0)] * (len(r0) - len(r1) + 1)
            r = list(r0)
            while len(r) >= len(r1) and any(r):
                if r[-1] == 0:
                    r.pop()
                    continue
                c = r[-1] / r1[-1]
                q[len(r) - len(r1)] = c
                for j, bj in enumerate(r1):
                    r[len(r) - len(r1) + j] -= c * bj
                r.pop()
            # s_next = s0 - q*s1
            qs1 = [Fraction(0)] * (len(q) + len(s1) - 1)
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        qs1[i + j] += qi * sj
            s_next = [(s0[i] if i < len(s0) else 0) - (qs1[i] if i < len(qs1) else 0)
                      for i in range(max(len(s0), len(qs1)))]
            r0, r1, s0, s1 = r1, r, s1, s_next

    def __truediv__(self, other):
        a, b = self._pair(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.field.scalar(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        acc = self.field.one
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is irrational")
        return Fraction(self.num[0], self.den)

    def interval_f(self):
        """Certified float interval containing the value."""
        iv = self._iv
        if iv is None:
            pw = self.field._float_powers()
            lo = hi = 0.0
            for c, p in zip(self.num, pw):
                if c:
                    t = _ia_mul(_ia_from_fraction(Fraction(c, self.den)), p)
                    lo, hi = _down(lo + t[0]), _up(hi + t[1])
            iv = self._iv = (lo, hi)
        return iv

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if self.field.degree == 1:
            return 1 if self.num[0] > 0 else -1
        lo, hi = self.interval_f()
        if lo > 0.0:
            return 1
        if hi < 0.0:
            return -1
        return self._sign_exact()

    def _sign_exact(self) -> int:
        f = self.field
        width = f._iso[1] - f._iso[0]
        for _ in range(256):
            lo, hi = f._iso
            vlo, vhi = _rat_interval_eval(self.num, self.den, lo, hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            width /= 2
            f.refine_iso(width)
        raise AssertionError("sign refinement failed to converge (reducible min_poly?)")

    def approx(self, eps) -> tuple[Fraction, Fraction]:
        """Rational interval of width <= eps containing the value."""
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        if self.is_rational():
            q = self.as_fraction()
            return (q, q)
        f = self.field
        width = min(f._iso[1] - f._iso[0], Fraction(1))
        while True:
            lo, hi = f._iso
            vlo, vhi = _rat_interval_eval(self.num, self.den, lo, hi)
            if vhi - vlo <= eps:
                return (vlo, vhi)
            width /= 4
            f.refine_iso(width)

    def __float__(self):
        lo, hi = self.approx(Fraction(1, 10**17))
        return float((lo + hi) / 2)

    # -- ordering / hashing -----------------------------------------------------

    def compare(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.field is other.field:
            return self.num == other.num and self.den == other.den
        return (self - other).is_zero()

    def __hash__(self):
        return hash((id(self.field), self.num, self.den))

    def __repr__(self):
        if self.is_rational():
            return str(Fraction(self.num[0], self.den))
        terms = "+".join(f"{n}t^{i}" for i, n in enumerate(self.num) if n)
        return f"({terms})/{self.den}@{self.field.label}"

    def serialize(self):
        return {"field": self.field.label,
                "coeffs": [str(Fraction(n, self.den)) for n in self.num]}


def _rat_interval_eval(num, den, lo: Fraction, hi: Fraction):
    """Exact interval Horner evaluation of the coefficient vector on [lo, hi]."""
    alo = ahi = Fraction(0)
    for c in reversed(num):
        # multiply [alo, ahi] by [lo, hi]
        ps = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(ps) + c, max(ps) + c
    return alo / den, ahi / den


# ---------------------------------------------------------------------------
# canonical fields

@lru_cache(maxsize=None)
def field_rationals() -> FieldDescriptor:
    return FieldDescriptor((0, 1), (0, 0), "Q", kind="Q", m=4)


@lru_cache(maxsize=None)
def _cos_field(m: int) -> FieldDescriptor:
    assert m % 4 == 0
    if m == 4:
        return field_rationals()
    mp = minpoly_two_cos(m)
    c = 2.0 * math.cos(2.0 * math.pi / m)
    # separation from neighbouring conjugates 2cos(2pi k/m)
    sep = min(abs(c - 2.0 * math.cos(2.0 * math.pi * k / m))
              for k in range(2, m // 2 + 1) if math.gcd(k, m) == 1) if m > 8 else 0.5
    sep = max(min(sep / 3.0, 0.1), 1e-9)
    lo = Fraction(math.floor((c - sep) * 2**30), 2**30)
    hi = Fraction(math.ceil((c + sep) * 2**30), 2**30)
    return FieldDescriptor(mp, (lo, hi), f"Q(2cos(2pi/{m}))", kind="cos", m=m)


def field_for_angle(n: int) -> FieldDescriptor:
    """Smallest field of the cosine family containing cos(2pi/n) and sin(2pi/n)."""
    if n < 1:
        raise ValueError("n must be positive")
    return _cos_field(math.lcm(4, n))


@lru_cache(maxsize=None)
def field_golden() -> FieldDescriptor:
    return FieldDescriptor((-1, -1, 1), (Fraction(1), Fraction(2)),
                           "Q(Phi)", kind="golden")


def golden() -> Scalar:
    return field_golden().theta


# cos/sin of 2pi*j/den inside a field of the cosine family (or Q when den | 4)

_Q_COS = {0: Fraction(1), 1: Fraction(0), 2: Fraction(-1), 3: Fraction(0)}


def cos_angle(field: FieldDescriptor, j: int, den: int) -> Scalar:
    if field.kind == "Q":
        if 4 % den != 0:
            raise FieldMismatchError(f"cos(2pi*{j}/{den}) is not rational")
        return field.scalar(_Q_COS[(j * (4 // den)) % 4])
    if field.m % den != 0:
        raise FieldMismatchError(f"{field.label} lacks cos(2pi*{j}/{den})")
    return field.two_cos(j * (field.m // den)) / 2


def sin_angle(field: FieldDescriptor, j: int, den: int) -> Scalar:
    # sin(x) = cos(pi/2 - x); field.m is divisible by 4
    m = field.m
    if m % den != 0:
        raise FieldMismatchError(f"{field.label} lacks sin(2pi*{j}/{den})")
    if field.kind == "Q":
        return field.scalar(_Q_COS[(1 - j * (4 // den)) % 4])
    return field.two_cos(m // 4 - j * (m // den)) / 2


# spec operation aliases
def add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def sub(a: Scalar, b: Scalar) -> Scalar:
    return a - b


def mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def div(a: Scalar, b: Scalar) -> Scalar:
    return a / b


def neg(a: Scalar) -> Scalar:
    return -a


def sign(a: Scalar) -> int:
    return a.sign()


def approx(a: Scalar, eps) -> tuple[Fraction, Fraction]:
    return a.approx(eps)
