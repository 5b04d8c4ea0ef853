"""The six finite rotation / rotary-reflection group families as exact matrix
groups, plus ray-orbit analysis and the residue engine."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParameterError, ResourceLimitError, VerificationError
from .linalg import Mat3, Vec3, cross, det, dot, matmul, matvec, transpose
from .scalar import (FieldDescriptor, cos_angle, field_for_angle,
                     field_golden, field_rationals, golden, sin_angle)

CLOSURE_CAP = 240

FAMILIES = ("C", "D", "T", "O", "I", "G")


@dataclass(frozen=True)
class GroupSpec:
    family: str
    param: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}")
        if self.family == "C" and self.param < 1:
            raise ParameterError("C_n requires n >= 1")
        if self.family == "D" and self.param < 2:
            raise ParameterError("D_d requires d >= 2")
        if self.family == "G" and self.param < 1:
            raise ParameterError("G_d requires d >= 1")

    def __str__(self):
        if self.family in ("T", "O", "I"):
            return self.family
        return f"{self.family}:{self.param}"

    @staticmethod
    def parse(text: str) -> "GroupSpec":
        text = text.strip()
        if text in ("T", "O", "I"):
            return GroupSpec(text)
        if ":" in text:
            fam, _, p = text.partition(":")
            return GroupSpec(fam, int(p))
        raise ParameterError(f"cannot parse group spec {text!r}")

    @property
    def order(self) -> int:
        return {"C": self.param, "D": 2 * self.param, "T": 12,
                "O": 24, "I": 60, "G": 2 * self.param}[self.family]


class Group:
    """A finite orthogonal matrix group: closed element list plus metadata."""

    __slots__ = ("spec", "field", "elements", "generators", "order", "_keyset")

    def __init__(self, spec, field, elements, generators):
        self.spec = spec
        self.field = field
        self.elements = elements
        self.generators = generators
        self.order = len(elements)
        self._keyset = {m.key() for m in elements}

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, m: Mat3):
        return m.key() in self._keyset

    def embedded(self, field: FieldDescriptor) -> "Group":
        """The same group with entries coerced into a larger field."""
        if field is self.field:
            return self
        def remap(m):
            return Mat3(*(Vec3(r.x._embed_into(field), r.y._embed_into(field),
                               r.z._embed_into(field)) for r in m.rows))
        return Group(self.spec, field,
                     [remap(m) for m in self.elements],
                     [remap(m) for m in self.generators])


@dataclass(frozen=True)
class RayOrbit:
    representative: Vec3
    size: int
    stabilizer_order: int
    is_flip: bool
    carrier: str = "axis"


def generate(generators, spec: GroupSpec | None = None, cap: int = CLOSURE_CAP) -> Group:
    """Closure of orthogonal generators under multiplication."""
    if not generators:
        raise ParameterError("no generators")
    field = generators[0].rows[0].x.field
    ident = Mat3.identity(field)
    for g in generators:
        if matmul(g, transpose(g)) != ident:
            raise VerificationError("generator is not orthogonal")
    seen = {ident.key(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in generators:
                p = matmul(m, g)
                k = p.key()
                if k not in seen:
                    seen[k] = p
                    nxt.append(p)
                    if len(seen) > cap:
                        raise ResourceLimitError(f"group closure exceeds cap {cap}")
        frontier = nxt
    elements = sorted(seen.values(), key=lambda m: m.key())
    return Group(spec, field, elements, list(generators))


def _rot_z(field, j, den) -> Mat3:
    c, s = cos_angle(field, j, den), sin_angle(field, j, den)
    one, zero = field.one, field.zero
    return Mat3(Vec3(c, -s, zero), Vec3(s, c, zero), Vec3(zero, zero, one))


def standard_group(spec: GroupSpec) -> Group:
    fam, p = spec.family, spec.param
    if fam == "C":
        field = field_for_angle(p)
        gens = [_rot_z(field, 1, p)]
    elif fam == "D":
        field = field_for_angle(p)
        flip_x = Mat3.of(field, ((1, 0, 0), (0, -1, 0), (0, 0, -1)))
        gens = [_rot_z(field, 1, p), flip_x]
    elif fam == "T":
        field = field_rationals()
        gens = [Mat3.of(field, ((-1, 0, 0), (0, -1, 0), (0, 0, 1))),
                Mat3.of(field, ((0, 0, 1), (1, 0, 0), (0, 1, 0)))]
    elif fam == "O":
        field = field_rationals()
        gens = [Mat3.of(field, ((0, -1, 0), (1, 0, 0), (0, 0, 1))),
                Mat3.of(field, ((1, 0, 0), (0, 0, -1), (0, 1, 0)))]
    elif fam == "I":
        field = field_golden()
        phi = golden()
        h = field.scalar(Fraction(1, 2))
        gens = [Mat3.of(field, ((-1, 0, 0), (0, -1, 0), (0, 0, 1))),
                Mat3.of(field, ((0, 0, 1), (1, 0, 0), (0, 1, 0))),
                Mat3(Vec3(h, (phi - 1) * h, -phi * h),
                     Vec3((1 - phi) * h, -phi * h, -h),
                     Vec3(-phi * h, h, (1 - phi) * h))]
    elif fam == "G":
        field = field_for_angle(2 * p)
        sigma = Mat3.of(field, ((1, 0, 0), (0, 1, 0), (0, 0, -1)))
        gens = [matmul(_rot_z(field, 1, 2 * p), sigma)]
    g = generate(gens, spec=spec)
    if g.order != spec.order:
        raise VerificationError(f"{spec}: closure order {g.order} != {spec.order}")
    return g


# ---------------------------------------------------------------------------
# ray orbits

def _ray_rep(v: Vec3) -> Vec3:
    """Canonical representative of the ray through v: first nonzero coord +1."""
    for c in (v.x, v.y, v.z):
        s = c.sign()
        if s:
            return v.scale(c.inverse()) if s > 0 else v.scale((-c).inverse())
    raise ValueError("zero vector has no ray")


def _same_ray(a: Vec3, b: Vec3) -> bool:
    return cross(a, b).is_zero() and dot(a, b).sign() > 0


def _axis_of(m: Mat3, field) -> Vec3:
    """Nonzero kernel vector of (m - I) for a rotation m != I."""
    ident = Mat3.identity(field)
    rows = [Vec3(a.x - b.x, a.y - b.y, a.z - b.z)
            for a, b in zip(m.rows, ident.rows)]
    for i in range(3):
        for j in range(i + 1, 3):
            c = cross(rows[i], rows[j])
            if not c.is_zero():
                return c
    raise VerificationError("rotation with rank(m - I) < 2")


def nonregular_ray_orbits(group: Group) -> list[RayOrbit]:
    """Orbits of rays on rotation axes (every non-regular ray-orbit)."""
    field = group.field
    ident = Mat3.identity(field)
    rays = []
    for m in group.elements:
        if m == ident or det(m).sign() < 0:
            continue
        axis = _axis_of(m, field)
        for cand in (axis, -axis):
            rep = _ray_rep(cand)
            if not any(_same_ray(rep, r) for r in rays):
                rays.append(rep)
    orbits = []
    unassigned = list(rays)
    while unassigned:
        seed = unassigned[0]
        orbit = []
        stab = 0
        for m in group.elements:
            img = matvec(m, seed)
            if _same_ray(img, seed):
                stab += 1
            rep = _ray_rep(img)
            if not any(_same_ray(rep, r) for r in orbit):
                orbit.append(rep)
        unassigned = [r for r in unassigned
                      if not any(_same_ray(r, o) for o in orbit)]
        if len(orbit) * stab != group.order:
            raise VerificationError("orbit-stabilizer identity failed")
        is_flip = stab == 2
        orbits.append(RayOrbit(seed, len(orbit), stab, is_flip))
    orbits.sort(key=lambda o: (o.size, o.stabilizer_order, not o.is_flip))
    return orbits


def residue_set(group: Group) -> tuple[int, frozenset]:
    """Congruence skeleton of f-vectors mod n from ray-orbit composition:
    Minkowski sum of {(|X|,0)}^diamond over non-flip orbits and
    {(0,0),(|X|,0)}^diamond over flip orbits, all mod n = |G|."""
    n = group.order
    acc = {(0, 0)}
    for orb in nonregular_ray_orbits(group):
        if orb.is_flip:
            step = {(0, 0), (orb.size % n, 0), (0, orb.size % n)}
        else:
            step = {(orb.size % n, 0), (0, orb.size % n)}
        acc = {((a + x) % n, (b + y) % n) for (a, b) in acc for (x, y) in step}
    return n, frozenset(acc)


def set_stabilizer(group: Group, points) -> int:
    """Order of the set-wise stabilizer of the given points."""
    pts = frozenset(p.key() for p in points)
    count = 0
    for m in group.elements:
        if frozenset(matvec(m, p).key() for p in points) == pts:
            count += 1
    return count
