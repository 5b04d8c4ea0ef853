"""The symmetry-preserving constructions: careful stacking/cutting, regular,
twisted, big, half and twisted-half prisms, and their polar duals.

Placement follows guess-and-verify: candidate lift/shrink parameters come from
halving sequences seeded by exact safe bounds, and a candidate is accepted only
when the exact f-vector delta, the symmetry and the promised type flags all
hold on the rebuilt hull.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import (NoMatchingTargetError, PlacementFailedError,
                     StabilizerIncompatibleError, VerificationError)
from .group import Group
from .hull import Polytope, extend_hull
from .linalg import Vec3, cross, dot
from .polytope import (classify_type, facet_orbits, is_symmetric,
                       polar_dual, vertex_orbits)

MAX_ATTEMPTS = 64

OP_TABLE = {
    # tag: (on_facet, delta per unit m as function of k, required flags (left, right))
    "CS":  (True,  lambda k: (1, k - 1),   (True, None)),
    "CC":  (False, lambda k: (k - 1, 1),   (None, True)),
    "RP":  (True,  lambda k: (k, k),       (None, True)),
    "RPd": (False, lambda k: (k, k),       (True, None)),
    "TP":  (True,  lambda k: (k, 2 * k),   (True, None)),
    "TPd": (False, lambda k: (2 * k, k),   (None, True)),
    "HP":  (True,  lambda k: (k // 2, k),      (True, None)),
    "THP": (True,  lambda k: (k // 2, 3 * (k // 2)), (True, None)),
    "BP":  (True,  lambda k: (2 * k, 2 * k), (True, True)),
}


def _select_facet(P: Polytope, G: Group, k: int, m: int, facet_index=None):
    """Deterministic choice of a facet orbit with degree k and orbit size m."""
    orbits = facet_orbits(P, G)
    if facet_index is not None:
        for orb in orbits:
            if facet_index in orb:
                if len(P.facets[facet_index]) != k or len(orb) != m:
                    raise NoMatchingTargetError(
                        f"facet {facet_index} does not match degree {k}, orbit {m}")
                return facet_index, orb
        raise NoMatchingTargetError(f"no facet {facet_index}")
    best = None
    for orb in orbits:
        rep = orb[0]
        if len(P.facets[rep]) == k and len(orb) == m:
            key = P.facets[rep]
            if best is None or key < best[0]:
                best = (key, rep, orb)
    if best is None:
        raise NoMatchingTargetError(
            f"no facet of degree {k} with orbit size {m} in f={P.f_vector}")
    return best[1], best[2]


def _select_vertex(P: Polytope, G: Group, k: int, m: int, vertex_index=None):
    orbits = vertex_orbits(P, G)
    if vertex_index is not None:
        for orb in orbits:
            if vertex_index in orb:
                if P.vertex_degree(vertex_index) != k or len(orb) != m:
                    raise NoMatchingTargetError(
                        f"vertex {vertex_index} does not match degree {k}, orbit {m}")
                return vertex_index, orb
        raise NoMatchingTargetError(f"no vertex {vertex_index}")
    for orb in orbits:
        if P.vertex_degree(orb[0]) == k and len(orb) == m:
            return orb[0], orb
    raise NoMatchingTargetError(
        f"no vertex of degree {k} with orbit size {m} in f={P.f_vector}")


def _facet_frame(P: Polytope, fi: int):
    """Vertex list, centroid and an outward lift direction for facet fi.

    The lift direction is a snapped (short-coefficient) approximation of the
    facet normal whenever it still points strictly out of the facet plane;
    the exact primitive normal is the fallback."""
    from .linalg import reduce_direction
    verts = [P.vertices[i] for i in P.facets[fi]]
    inv = P.field.scalar(Fraction(1, len(verts)))
    cx = cy = cz = P.field.zero
    for v in verts:
        cx, cy, cz = cx + v.x, cy + v.y, cz + v.z
    c = Vec3(cx * inv, cy * inv, cz * inv)
    n_exact = reduce_direction(P.planes[fi][0])
    n = _snap_direction(n_exact)
    if n is None or dot(n, n_exact).sign() <= 0:
        n = n_exact
    o = dot(n, verts[0])
    return verts, c, n, o


def _safe_lift(P: Polytope, fi: int, base_pts, n, o):
    """Dyadic lift parameter s such that every base point + s*n stays strictly
    inside every other facet half-space and below the barycenter depth."""
    bounds = []
    na = dot(n, n)
    if all(oj.sign() > 0 for (_, oj) in P.planes):
        depth = o / na  # origin is interior; depth from the facet plane
    else:
        from .polytope import barycenter
        bc = barycenter(P)
        depth = (o - dot(n, bc)) / na
    if depth.sign() > 0:
        bounds.append(depth)
    for j, (nj, oj) in enumerate(P.planes):
        if j == fi:
            continue
        d = dot(nj, n)
        if d.sign() > 0:
            for b in base_pts:
                room = oj - dot(nj, b)
                if room.sign() <= 0:
                    return None  # base point escapes P; caller shrinks more
                bounds.append(room / d)
    if not bounds:
        return P.field.one
    lo = bounds[0]
    for b in bounds[1:]:
        if b < lo:
            lo = b
    return _dyadic_below(lo)


def _ilog2(fr: Fraction) -> int:
    """floor(log2(fr)) for a positive rational, by bit lengths."""
    e = fr.numerator.bit_length() - fr.denominator.bit_length()
    if Fraction(2) ** e > fr:
        e -= 1
    if Fraction(2) ** (e + 1) <= fr:
        e += 1
    return e


def _dyadic_below(x):
    """Largest power of two strictly below the positive scalar x; keeps the
    lift parameters short so chained constructions stay small."""
    field = x.field
    f_lo, _ = x.interval_f()
    if f_lo > 0:
        e = _ilog2(Fraction(f_lo))
    else:
        lo = None
        width = Fraction(1, 2 ** 20)
        for _ in range(6):
            lo, _ = x.approx(width)
            if lo > 0:
                break
            width /= 2 ** 20
        if lo is None or lo <= 0:
            return None
        e = _ilog2(lo)
    cand = field.scalar(Fraction(2) ** e)
    for _ in range(8):
        if cand < x:
            return cand
        cand = cand * field.scalar(Fraction(1, 2))
    return None


def _orbit_copies(P, G, fi, base_pts):
    """One lifted copy per facet of fi's orbit: {facet_index: points}."""
    from .linalg import matvec
    fmap = {frozenset(P.vertices[i].key() for i in P.facets[j]): j
            for j in range(len(P.facets))}
    out = {}
    for g in G.elements:
        img = frozenset(matvec(g, P.vertices[i]).key() for i in P.facets[fi])
        j = fmap[img]
        if j not in out:
            out[j] = [matvec(g, p) for p in base_pts]
    return out


def _local_structure_ok(Q, P, copies, apex_degree=None):
    """The small-disc condition, checked exactly: every point of a copy is a
    vertex of Q whose neighbours lie in its own copy plus its own facet (for
    stacking: exactly the facet's vertices), and each copy polygon with more
    than one point survives as a facet of Q."""
    adj = {}
    for (a, b) in Q.edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    facet_keysets = {frozenset(Q.vertices[i].key() for i in f) for f in Q.facets}
    for fi, pts in copies.items():
        facet_keys = {P.vertices[i].key() for i in P.facets[fi]}
        copy_keys = {p.key() for p in pts}
        for p in pts:
            qi = Q.vertex_index(p)
            if qi is None:
                return False
            nb = {Q.vertices[j].key() for j in adj[qi]}
            if apex_degree is not None:
                if nb != facet_keys:
                    return False
            elif not nb <= (facet_keys | copy_keys) - {p.key()}:
                return False
        if apex_degree is None and frozenset(copy_keys) not in facet_keysets:
            return False
    return True


def _attempt(P, G, mk_copies, delta, flags, tag, apex_degree=None):
    want_left, want_right = flags
    f0, f2 = P.f_vector
    target = (f0 + delta[0], f2 + delta[1])
    for attempt in range(MAX_ATTEMPTS):
        copies = mk_copies(attempt)
        if copies is None:
            continue
        pts = []
        seen = set()
        for cp in copies.values():
            for p in cp:
                k = p.key()
                if k not in seen:
                    seen.add(k)
                    pts.append(p)
        Q = extend_hull(P, pts, provenance=f"{tag}({P.provenance})")
        if Q.f_vector != target:
            continue
        if not _local_structure_ok(Q, P, copies, apex_degree):
            continue
        if not is_symmetric(Q, G):
            continue
        got = classify_type(Q, G)
        if want_left and not got.left:
            continue
        if want_right and not got.right:
            continue
        return Q
    raise PlacementFailedError(
        f"{tag}: no placement reached f={target} from f={P.f_vector}")


def _diag(attempt):
    """Enumerate (i, j) halving exponents diagonally: (0,0),(1,0),(0,1),..."""
    t, k = 0, attempt
    while k > t:
        k -= t + 1
        t += 1
    return t - k, k


def _snap_dyadic(p: Vec3, g: int) -> Vec3:
    """Round each field coefficient of a point to the 2^-g grid, shortening
    the representation while staying within 2^-g-ish of the point; only valid
    for trivial-stabilizer placements, and always followed by exact
    re-verification."""
    field = p.x.field
    scale = 1 << g
    out = []
    for comp in (p.x, p.y, p.z):
        den = comp.den
        num = tuple((n * scale + (den >> 1)) // den for n in comp.num)
        out.append(field.from_coeffs([Fraction(n, scale) for n in num]))
    return Vec3(*out)


def _grid_for(s) -> int:
    """Grid exponent fine enough relative to the dyadic lift parameter s."""
    lo, _ = s.interval_f()
    return max(4, -_ilog2(Fraction(lo)) if lo > 0 else 24) + 4


def _grid_for_step(base: Vec3, moved: Vec3) -> int:
    """Grid exponent resolving the displacement between two points."""
    m = 0.0
    for a, b in zip((base.x, base.y, base.z), (moved.x, moved.y, moved.z)):
        alo, ahi = a.interval_f()
        blo, bhi = b.interval_f()
        m = max(m, abs(blo - ahi), abs(bhi - alo))
    if m <= 0.0:
        return 30
    return max(4, -_ilog2(Fraction(m))) + 6


def _inside_facet(verts, n, p: Vec3) -> bool:
    """p strictly inside the convex polygon (oriented cycle verts, normal n)?
    The point may sit slightly off the plane; only the in-plane position is
    tested via edge orientations."""
    for a, b in zip(verts, verts[1:] + verts[:1]):
        if dot(cross(b - a, p - a), n).sign() <= 0:
            return False
    return True


def _scalar_grid(s) -> int:
    """Grid exponent with error well below the scalar s (snap guard bits)."""
    lo, _ = s.interval_f()
    if lo <= 0.0:
        q, _ = s.approx(Fraction(1, 2 ** 40))
        if q <= 0:
            return 48
        lo = q
    return max(4, -_ilog2(Fraction(lo))) + 12


def _snap_direction(v: Vec3, g: int = 12) -> Vec3 | None:
    """A nearby direction with short coefficients: scale the vector to unit
    float magnitude, snap coefficients to the 2^-g grid, reduce to primitive
    integers. Callers must re-verify the open conditions they need."""
    from .linalg import reduce_direction
    m = 0.0
    for comp in (v.x, v.y, v.z):
        lo, hi = comp.interval_f()
        m = max(m, abs(lo), abs(hi))
    if not (m > 0.0) or m == float("inf"):
        return None
    field = v.x.field
    s = field.scalar(Fraction(2) ** (-_ilog2(Fraction(m))))
    snapped = _snap_dyadic(Vec3(v.x * s, v.y * s, v.z * s), g)
    if snapped.is_zero():
        return None
    return reduce_direction(snapped)


def careful_stack(P: Polytope, G: Group, k: int, m: int, facet_index=None) -> Polytope:
    """CS_{k,m}: pyramid apices over a facet orbit; delta = m(1, k-1)."""
    G = G.embedded(P.field)
    fi, _ = _select_facet(P, G, k, m, facet_index)
    verts, c, n, o = _facet_frame(P, fi)
    half = P.field.scalar(Fraction(1, 2))
    trivial = m == G.order
    s_max = _safe_lift(P, fi, [c], n, o)

    def mk(attempt):
        if s_max is None:
            return None
        s = s_max * half ** (attempt + 1)
        apex = Vec3(c.x + n.x * s, c.y + n.y * s, c.z + n.z * s)
        if trivial:
            g = max(_grid_for_step(c, apex), _scalar_grid(s)) + 2 * attempt
            apex = _snap_dyadic(apex, g)
        return _orbit_copies(P, G, fi, [apex])

    return _attempt(P, G, mk, (m, m * (k - 1)), OP_TABLE["CS"][2],
                    f"CS({k},{m})", apex_degree=k)


def _lifted_copy_op(P, G, k, m, tag, polygon_fn, delta, flags, facet_index=None,
                    precheck=None):
    """Shared machinery for RP/TP/BP/HP/THP: polygon_fn(verts, c, attempt) gives
    the in-plane polygon, which is then lifted by a safe s and orbit-copied."""
    G = G.embedded(P.field)
    fi, orbit = _select_facet(P, G, k, m, facet_index)
    if precheck is not None:
        precheck(P, G, fi, orbit)
    verts, c, n, o = _facet_frame(P, fi)
    half = P.field.scalar(Fraction(1, 2))

    def mk(attempt):
        i, j = _diag(attempt)
        base = polygon_fn(verts, c, j)
        if base is None:
            return None
        s_max = _safe_lift(P, fi, base, n, o)
        if s_max is None:
            return None
        s = s_max * half ** (i + 1)
        lifted = [Vec3(p.x + n.x * s, p.y + n.y * s, p.z + n.z * s) for p in base]
        return _orbit_copies(P, G, fi, lifted)

    return _attempt(P, G, mk, delta, flags, tag)


def _shrink(pts, c, rho):
    return [Vec3(c.x + (p.x - c.x) * rho, c.y + (p.y - c.y) * rho,
                 c.z + (p.z - c.z) * rho) for p in pts]


def regular_prism(P, G, k, m, facet_index=None) -> Polytope:
    """RP_{k,m}: shrunken lifted copy of the facet; delta = m(k,k)."""
    half = P.field.scalar(Fraction(1, 2))

    def poly(verts, c, j):
        return _shrink(verts, c, half ** (j + 1))

    return _lifted_copy_op(P, G, k, m, f"RP({k},{m})", poly,
                           (m * k, m * k), OP_TABLE["RP"][2], facet_index)


def twisted_prism(P, G, k, m, facet_index=None) -> Polytope:
    """TP_{k,m}: lifted edge-midpoint polygon; delta = m(k,2k)."""
    half = P.field.scalar(Fraction(1, 2))

    def poly(verts, c, j):
        mids = [Vec3((a.x + b.x) * half, (a.y + b.y) * half, (a.z + b.z) * half)
                for a, b in zip(verts, verts[1:] + verts[:1])]
        return _shrink(mids, c, half ** j) if j else mids

    return _lifted_copy_op(P, G, k, m, f"TP({k},{m})", poly,
                           (m * k, 2 * m * k), OP_TABLE["TP"][2], facet_index)


def big_prism(P, G, k, m, facet_index=None) -> Polytope:
    """BP over a degree-k facet: lifted corner-cut 2k-gon; delta = m(2k,2k)."""
    field_one = None

    def poly(verts, c, j):
        field = verts[0].x.field
        t = field.scalar(Fraction(1, 3)) * field.scalar(Fraction(1, 2)) ** j
        out = []
        for a, b in zip(verts, verts[1:] + verts[:1]):
            d = b - a
            out.append(Vec3(a.x + d.x * t, a.y + d.y * t, a.z + d.z * t))
            out.append(Vec3(b.x - d.x * t, b.y - d.y * t, b.z - d.z * t))
        half = field.scalar(Fraction(1, 2))
        return _shrink(out, c, half)

    return _lifted_copy_op(P, G, k, m, f"BP({k},{m})", poly,
                           (2 * m * k, 2 * m * k), OP_TABLE["BP"][2], facet_index)


def _hp_precheck(P, G, fi, orbit):
    cyc = P.facets[fi]
    if len(cyc) % 2:
        raise NoMatchingTargetError("half prism needs an even facet")
    k = len(cyc) // 2
    h = G.order // len(orbit)
    if k % h:
        raise StabilizerIncompatibleError(
            f"stabilizer order {h} does not divide {k}")
    # stabilizer must act on the cycle by rotations (no reversal)
    from .linalg import matvec
    pos = {P.vertices[v].key(): i for i, v in enumerate(cyc)}
    for g in G.elements:
        img = [pos.get(matvec(g, P.vertices[v]).key()) for v in cyc]
        if None in img:
            continue  # not in the stabilizer
        shift = img[0]
        if all(img[i] == (shift + i) % len(cyc) for i in range(len(cyc))):
            continue
        raise StabilizerIncompatibleError("facet stabilizer reverses the cycle")


def _extension_polygon(verts):
    """Intersections of the lines through alternating edges of a 2k-gon."""
    n2 = len(verts)
    pts = []
    for i in range(0, n2, 2):
        a0, b0 = verts[i], verts[(i + 1) % n2]
        a1, b1 = verts[(i + 2) % n2], verts[(i + 3) % n2]
        d0, d1 = b0 - a0, b1 - a1
        w = a1 - a0
        cr = cross(d0, d1)
        den = dot(cr, cr)
        if den.is_zero():
            return None
        t = dot(cross(w, d1), cr) / den
        pts.append(Vec3(a0.x + d0.x * t, a0.y + d0.y * t, a0.z + d0.z * t))
    return pts


def half_prism(P, G, k2, m, facet_index=None) -> Polytope:
    """HP_{2k,m}: lifted alternate-edge extension polygon; delta = m(k,2k)."""
    if k2 % 2 or k2 < 6:
        raise NoMatchingTargetError("HP needs an even facet degree >= 6")

    def poly(verts, c, j):
        ext = _extension_polygon(verts)
        if ext is None:
            return None
        half = verts[0].x.field.scalar(Fraction(1, 2))
        return _shrink(ext, c, half ** (j + 1))

    k = k2 // 2
    return _lifted_copy_op(P, G, k2, m, f"HP({k2},{m})", poly,
                           (m * k, 2 * m * k), OP_TABLE["HP"][2], facet_index,
                           precheck=_hp_precheck)


def twisted_half_prism(P, G, k2, m, facet_index=None) -> Polytope:
    """THP_{2k,m}: half prism with the top polygon mixed off-parallel;
    delta = m(k,3k)."""
    if k2 % 2 or k2 < 6:
        raise NoMatchingTargetError("THP needs an even facet degree >= 6")

    def poly(verts, c, j):
        ext = _extension_polygon(verts)
        if ext is None:
            return None
        field = verts[0].x.field
        half = field.scalar(Fraction(1, 2))
        shr = _shrink(ext, c, half)
        t = field.scalar(Fraction(1, 8)) * half ** j
        one_t = field.one - t
        nxt = shr[1:] + shr[:1]
        return [Vec3(a.x * one_t + b.x * t, a.y * one_t + b.y * t,
                     a.z * one_t + b.z * t) for a, b in zip(shr, nxt)]

    k = k2 // 2
    return _lifted_copy_op(P, G, k2, m, f"THP({k2},{m})", poly,
                           (m * k, 3 * m * k), OP_TABLE["THP"][2], facet_index,
                           precheck=_hp_precheck)


def _dual_op(P, G, k, m, inner, tag, delta, flags, vertex_index=None):
    G = G.embedded(P.field)
    _select_vertex(P, G, k, m, vertex_index)  # fail fast with the right error
    D = polar_dual(P)
    D2 = inner(D, G, k, m)
    R = polar_dual(D2)
    f0, f2 = P.f_vector
    if R.f_vector != (f0 + delta[0], f2 + delta[1]):
        raise VerificationError(f"{tag}: dual sandwich delta mismatch")
    if not is_symmetric(R, G):
        raise VerificationError(f"{tag}: symmetry lost")
    got = classify_type(R, G)
    want_left, want_right = flags
    if (want_left and not got.left) or (want_right and not got.right):
        raise VerificationError(f"{tag}: type postcondition failed")
    return R


def careful_cut(P: Polytope, G: Group, k: int, m: int, vertex_index=None) -> Polytope:
    """CC_{k,m}: truncate a vertex orbit by equivariant plane cuts through the
    incident edges; delta = m(k-1, 1). Equivalent to dual.CS.dual but built in
    the primal so chained cuts do not inflate coordinates."""
    from .hull import convex_hull
    from .linalg import matvec
    G = G.embedded(P.field)
    vi, orbit = _select_vertex(P, G, k, m, vertex_index)
    adj = {}
    for (x, y) in P.edges:
        adj.setdefault(x, []).append(y)
        adj.setdefault(y, []).append(x)
    v = P.vertices[vi]
    nbrs = [P.vertices[j] for j in adj[vi]]
    a, gaps = _separating_direction(P, G, vi, nbrs)
    if a is None:
        raise PlacementFailedError(f"CC({k},{m}): no separating direction")
    gmin = gaps[0]
    for g_ in gaps[1:]:
        if g_ < gmin:
            gmin = g_
    half = P.field.scalar(Fraction(1, 2))
    delta0 = _dyadic_below(gmin * half)
    orbit_set = set(orbit)
    keep = [P.vertices[j] for j in range(len(P.vertices)) if j not in orbit_set]
    vmap = {}
    for g_ in G.elements:
        img = matvec(g_, v)
        j = P.vertex_index(img)
        if j not in vmap:
            vmap[j] = g_

    f0, f2 = P.f_vector
    target = (f0 + m * (k - 1), f2 + m)
    trivial = m == G.order
    for attempt in range(MAX_ATTEMPTS):
        delta = delta0 * half ** attempt
        cuts = []
        for u, gap in zip(nbrs, gaps):
            s = delta / gap
            if trivial:
                # snap the edge parameter so the point stays on its edge but
                # carries a short dyadic weight
                lo, _ = s.interval_f()
                if lo <= 0:
                    qlo, _ = s.approx(Fraction(1, 2 ** 40))
                    lo = qlo
                g_exp = max(4, -_ilog2(Fraction(lo))) + 6 + 2 * attempt
                sq = Fraction(round(Fraction(lo) * (1 << g_exp)), 1 << g_exp)
                if sq <= 0:
                    sq = Fraction(1, 1 << g_exp)
                s = P.field.scalar(sq)
            cut = Vec3(v.x + (u.x - v.x) * s, v.y + (u.y - v.y) * s,
                       v.z + (u.z - v.z) * s)
            cuts.append(cut)
        copies = {j: [matvec(g_, p) for p in cuts] for j, g_ in vmap.items()}
        pts = list(keep)
        seen = set()
        for cp in copies.values():
            for p in cp:
                if p.key() not in seen:
                    seen.add(p.key())
                    pts.append(p)
        Q = convex_hull(pts, provenance=f"CC({k},{m})({P.provenance})")
        if Q.f_vector != target:
            continue
        if not _cut_structure_ok(Q, P, copies, adj, vi, vmap):
            continue
        if not is_symmetric(Q, G):
            continue
        if not classify_type(Q, G).right:
            continue
        return Q
    raise PlacementFailedError(
        f"CC({k},{m}): no cut reached f={target} from f={P.f_vector}")


def _separating_direction(P, G, vi, nbrs):
    """A stabilizer-invariant direction a with a.(v-u) > 0 for all neighbours u
    of v: the edge-direction sum, else the stabilizer-averaged sum of incident
    facet normals (interior of the normal cone), else the radial direction."""
    from .linalg import matvec, reduce_direction
    v = P.vertices[vi]

    def gaps_for(a):
        gaps = [dot(a, v) - dot(a, u) for u in nbrs]
        return gaps if all(g.sign() > 0 for g in gaps) else None

    zero = P.field.zero
    ax = ay = az = zero
    for u in nbrs:
        ax, ay, az = ax + (v.x - u.x), ay + (v.y - u.y), az + (v.z - u.z)
    candidates = [Vec3(ax, ay, az)]

    nx = ny = nz = zero
    for f, (n, _) in zip(P.facets, P.planes):
        if vi in f:
            rn = reduce_direction(n)
            nx, ny, nz = nx + rn.x, ny + rn.y, nz + rn.z
    raw = Vec3(nx, ny, nz)
    stab = [g for g in G.elements if matvec(g, v) == v]
    if len(stab) > 1:
        sx = sy = sz = zero
        for g in stab:
            img = matvec(g, raw)
            sx, sy, sz = sx + img.x, sy + img.y, sz + img.z
        raw = Vec3(sx, sy, sz)
    candidates.append(raw)
    candidates.append(v)

    for cand in candidates:
        if cand.is_zero():
            continue
        snapped = _snap_direction(cand)
        for a in ((snapped,) if snapped is not None else ()) + (reduce_direction(cand),):
            gaps = gaps_for(a)
            if gaps is not None:
                return a, gaps
    return None, None


def _cut_structure_ok(Q, P, copies, adj, rep_index, vmap):
    """Every cut vertex is gone, its cut polygon is a facet, and each cut
    point connects only within its polygon and along its own edge."""
    from .linalg import matvec
    qadj = {}
    for (x, y) in Q.edges:
        qadj.setdefault(x, set()).add(y)
        qadj.setdefault(y, set()).add(x)
    facet_keysets = {frozenset(Q.vertices[i].key() for i in f) for f in Q.facets}
    rep_adj = adj[rep_index]
    for j, cps in copies.items():
        if Q.vertex_index(P.vertices[j]) is not None:
            return False
        ckeys = {p.key() for p in cps}
        if frozenset(ckeys) not in facet_keysets:
            return False
        for idx, p in enumerate(cps):
            qi = Q.vertex_index(p)
            if qi is None:
                return False
            nb = {Q.vertices[t].key() for t in qadj[qi]}
            # allowed: the cut polygon, the edge's far endpoint, or that
            # endpoint's own cut points when it is cut too
            far_pt = matvec(vmap[j], P.vertices[rep_adj[idx]])
            extra = {far_pt.key()}
            fj = P.vertex_index(far_pt)
            if fj in copies:
                extra |= {fp.key() for fp in copies[fj]}
            if not nb <= (ckeys - {p.key()}) | extra:
                return False
    return True


def regular_prism_dual(P, G, k, m, vertex_index=None) -> Polytope:
    return _dual_op(P, G, k, m, regular_prism, f"RPd({k},{m})",
                    (m * k, m * k), OP_TABLE["RPd"][2], vertex_index)


def twisted_prism_dual(P, G, k, m, vertex_index=None) -> Polytope:
    return _dual_op(P, G, k, m, twisted_prism, f"TPd({k},{m})",
                    (2 * m * k, m * k), OP_TABLE["TPd"][2], vertex_index)


APPLY = {
    "CS": careful_stack,
    "CC": careful_cut,
    "RP": regular_prism,
    "RPd": regular_prism_dual,
    "TP": twisted_prism,
    "TPd": twisted_prism_dual,
    "HP": half_prism,
    "THP": twisted_half_prism,
    "BP": big_prism,
}


def apply_op(tag: str, P: Polytope, G: Group, k: int, m: int) -> Polytope:
    return APPLY[tag](P, G, k, m)
