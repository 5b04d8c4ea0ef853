"""Symmetry-aware polytope predicates: symmetry check, polar dual, stabilizers,
left/right/base type detection."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldMismatchError, NotSymmetricError, VerificationError
from .group import Group, set_stabilizer
from .hull import Polytope, convex_hull
from .linalg import Vec3, dot, matvec


@dataclass(frozen=True)
class TypeFlags:
    left: bool
    right: bool

    @property
    def base(self) -> bool:
        return self.left and self.right


def _group_in_field(P: Polytope, G: Group) -> Group:
    if G.field is P.field:
        return G
    try:
        return G.embedded(P.field)
    except FieldMismatchError as e:
        raise FieldMismatchError(
            f"group over {G.field.label} incompatible with polytope over {P.field.label}") from e


def is_symmetric(P: Polytope, G: Group) -> bool:
    """True iff every generator maps the vertex set onto itself."""
    G = _group_in_field(P, G)
    keys = {v.key() for v in P.vertices}
    for g in G.generators:
        for v in P.vertices:
            if matvec(g, v).key() not in keys:
                return False
    return True


def barycenter(P: Polytope) -> Vec3:
    n = P.field.scalar(Fraction(1, len(P.vertices)))
    sx = sy = sz = P.field.zero
    for v in P.vertices:
        sx, sy, sz = sx + v.x, sy + v.y, sz + v.z
    return Vec3(sx * n, sy * n, sz * n)


def polar_dual(P: Polytope) -> Polytope:
    """Centered polar: facets become vertices a/c of <a, x-b> <= c.

    The result is uniformly rescaled to primitive integer coefficient content;
    this keeps chained dual constructions from blowing up coordinate sizes and
    changes neither the face lattice nor the symmetry group."""
    import math as _math
    from .linalg import reduce_direction
    reduced = []
    origin_ok = True
    for (n, o), facet in zip(P.planes, P.facets):
        n = reduce_direction(n)
        o = dot(n, P.vertices[facet[0]])
        reduced.append((n, o))
        if origin_ok and o.sign() <= 0:
            origin_ok = False
    # the origin is fixed by every linear group; center there when interior,
    # otherwise at the exact barycenter
    b = None if origin_ok else barycenter(P)
    dual_pts = []
    for (n, o), facet in zip(reduced, P.facets):
        c = o if b is None else o - dot(n, b)
        if c.sign() <= 0:
            raise VerificationError("barycenter not interior")
        dual_pts.append(n.scale(c.inverse()))
    # dyadic magnitude normalization: scale so the largest coordinate is ~1
    hi = 0.0
    for p in dual_pts:
        for comp in (p.x, p.y, p.z):
            lo_f, hi_f = comp.interval_f()
            hi = max(hi, abs(lo_f), abs(hi_f))
    if hi > 0.0 and (hi > 2.0 or hi < 0.5) and _math.isfinite(hi):
        s = P.field.scalar(Fraction(2) ** (-_math.floor(_math.log2(hi))))
        dual_pts = [p.scale(s) for p in dual_pts]
    Q = convex_hull(dual_pts, provenance=f"dual({P.provenance})")
    if Q.f_vector != (P.f_vector[1], P.f_vector[0]):
        raise VerificationError(
            f"polar dual f-vector {Q.f_vector} != swap{P.f_vector}")
    return Q


def vertex_permutation(P: Polytope, g, field=None) -> list[int]:
    """Index permutation induced by a group element; raises if not symmetric."""
    perm = []
    for v in P.vertices:
        j = P.vertex_index(matvec(g, v))
        if j is None:
            raise NotSymmetricError("element does not preserve vertex set")
        perm.append(j)
    return perm


def facet_orbits(P: Polytope, G: Group):
    """Partition facet indices into G-orbits; returns list of index lists."""
    G = _group_in_field(P, G)
    perms = [vertex_permutation(P, g) for g in G.elements]
    fset = {frozenset(f): i for i, f in enumerate(P.facets)}
    seen = set()
    orbits = []
    for i, f in enumerate(P.facets):
        if i in seen:
            continue
        orbit = set()
        for perm in perms:
            img = frozenset(perm[v] for v in f)
            orbit.add(fset[img])
        seen |= orbit
        orbits.append(sorted(orbit))
    return orbits


def vertex_orbits(P: Polytope, G: Group):
    G = _group_in_field(P, G)
    perms = [vertex_permutation(P, g) for g in G.elements]
    seen = set()
    orbits = []
    for i in range(len(P.vertices)):
        if i in seen:
            continue
        orbit = sorted({perm[i] for perm in perms})
        seen |= set(orbit)
        orbits.append(orbit)
    return orbits


def classify_type(P: Polytope, G: Group) -> TypeFlags:
    """left: some triangular facet has trivial set-stabilizer;
    right: some degree-3 vertex has trivial stabilizer."""
    G = _group_in_field(P, G)
    if not is_symmetric(P, G):
        raise NotSymmetricError("polytope is not G-symmetric")
    n = G.order
    left = False
    for orbit in facet_orbits(P, G):
        f = P.facets[orbit[0]]
        if len(f) == 3 and len(orbit) == n:
            left = True
            break
    right = False
    for orbit in vertex_orbits(P, G):
        if P.vertex_degree(orbit[0]) == 3 and len(orbit) == n:
            right = True
            break
    return TypeFlags(left, right)


def orbit_points(G: Group, seeds) -> list[Vec3]:
    """Deduplicated union of G-orbits of the seed points."""
    out = []
    seen = set()
    for s in seeds:
        for g in G.elements:
            p = matvec(g, s)
            k = p.key()
            if k not in seen:
                seen.add(k)
                out.append(p)
    return out


def facet_stabilizer_order(P: Polytope, G: Group, facet_index: int) -> int:
    G = _group_in_field(P, G)
    return set_stabilizer(G, [P.vertices[i] for i in P.facets[facet_index]])


def vertex_stabilizer_order(P: Polytope, G: Group, vertex_index: int) -> int:
    G = _group_in_field(P, G)
    return set_stabilizer(G, [P.vertices[vertex_index]])
