"""Exact incremental 3D convex hull with coplanar-facet merging.

Every predicate is decided by a certified float-interval filter first and by
exact field arithmetic only when the intervals straddle zero, so degenerate
configurations (shared facet planes, collinear chains) are resolved exactly.
The triangulated boundary is kept alive on the resulting Polytope so that
orbit-stacking operations can extend a hull without rebuilding it.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .errors import DegenerateInputError, VerificationError
from .linalg import Vec3, cross, dot
from .scalar import FieldDescriptor, Scalar, field_golden, field_rationals, minpoly_two_cos, _cos_field


def _iv_dot_offset(fplane, pf):
    """Float-interval evaluation of n.p - o; returns +1/-1/None."""
    (nx, ny, nz, off) = fplane
    lo = hi = 0.0
    for (alo, ahi), (blo, bhi) in ((nx, pf[0]), (ny, pf[1]), (nz, pf[2])):
        p0, p1, p2, p3 = alo * blo, alo * bhi, ahi * blo, ahi * bhi
        lo += min(p0, p1, p2, p3)
        hi += max(p0, p1, p2, p3)
    lo -= off[1]
    hi -= off[0]
    # one ulp of slack per accumulation keeps the filter sound
    slack = 1e-12 * (abs(lo) + abs(hi) + 1.0)
    if lo - slack > 0.0:
        return 1
    if hi + slack < 0.0:
        return -1
    return None


class _Tri:
    __slots__ = ("v", "nbr", "normal", "offset", "fplane", "alive")

    def __init__(self, v, normal, offset):
        self.v = v
        self.nbr = [None, None, None]  # across edges (v0,v1),(v1,v2),(v2,v0)
        self.normal = normal
        self.offset = offset
        self.fplane = (normal.x.interval_f(), normal.y.interval_f(),
                       normal.z.interval_f(), offset.interval_f())
        self.alive = True


class _HullState:
    def __init__(self, field: FieldDescriptor):
        self.field = field
        self.pts: list[Vec3] = []
        self.pf: list = []
        self.keys: dict = {}
        self.tris: dict[int, _Tri] = {}
        self.next_tid = 0
        self.ref = None  # interior reference point

    def clone(self) -> "_HullState":
        st = _HullState.__new__(_HullState)
        st.field = self.field
        st.pts = list(self.pts)
        st.pf = list(self.pf)
        st.keys = dict(self.keys)
        st.next_tid = self.next_tid
        st.ref = self.ref
        st.tris = {}
        for tid, t in self.tris.items():
            nt = _Tri.__new__(_Tri)
            nt.v = t.v
            nt.nbr = list(t.nbr)
            nt.normal, nt.offset, nt.fplane = t.normal, t.offset, t.fplane
            nt.alive = True
            st.tris[tid] = nt
        return st

    def add_point(self, p: Vec3) -> int | None:
        k = p.key()
        if k in self.keys:
            return None
        idx = len(self.pts)
        self.keys[k] = idx
        self.pts.append(p)
        self.pf.append((p.x.interval_f(), p.y.interval_f(), p.z.interval_f()))
        return idx

    def side(self, tri: _Tri, pid: int) -> int:
        s = _iv_dot_offset(tri.fplane, self.pf[pid])
        if s is not None:
            return s
        return (dot(tri.normal, self.pts[pid]) - tri.offset).sign()

    def _mk_tri(self, a, b, c) -> int:
        pa, pb, pc = self.pts[a], self.pts[b], self.pts[c]
        n = cross(pb - pa, pc - pa)
        t = _Tri((a, b, c), n, dot(n, pa))
        tid = self.next_tid
        self.next_tid += 1
        self.tris[tid] = t
        return tid

    def init_simplex(self, ids) -> list[int]:
        """Pick 4 affinely independent points from ids, build the seed tetrahedron,
        and return the remaining ids in order."""
        rest = list(ids)
        if len(rest) < 4:
            raise DegenerateInputError("need at least 4 points")
        a = rest.pop(0)
        b = next((i for i in rest if self.pts[i] != self.pts[a]), None)
        if b is None:
            raise DegenerateInputError("all points coincide")
        rest.remove(b)
        ab = self.pts[b] - self.pts[a]
        c = next((i for i in rest if not cross(ab, self.pts[i] - self.pts[a]).is_zero()), None)
        if c is None:
            raise DegenerateInputError("points are collinear")
        rest.remove(c)
        n = cross(ab, self.pts[c] - self.pts[a])
        o = dot(n, self.pts[a])
        d = None
        for i in rest:
            if (dot(n, self.pts[i]) - o).sign() != 0:
                d = i
                break
        if d is None:
            raise DegenerateInputError("points are coplanar")
        rest.remove(d)
        if (dot(n, self.pts[d]) - o).sign() > 0:
            b, c = c, b
        quarter = self.field.scalar(Fraction(1, 4))
        self.ref = Vec3(*((self.pts[a].x + self.pts[b].x + self.pts[c].x + self.pts[d].x) * quarter,
                          (self.pts[a].y + self.pts[b].y + self.pts[c].y + self.pts[d].y) * quarter,
                          (self.pts[a].z + self.pts[b].z + self.pts[c].z + self.pts[d].z) * quarter))
        faces = [(a, b, c), (a, c, d), (a, d, b), (b, d, c)]
        tids = [self._mk_tri(*f) for f in faces]
        edge_map = {}
        for tid in tids:
            t = self.tris[tid]
            for e in range(3):
                u, v = t.v[e], t.v[(e + 1) % 3]
                edge_map[(u, v)] = (tid, e)
        for (u, v), (tid, e) in edge_map.items():
            self.tris[tid].nbr[e] = edge_map[(v, u)][0]
        return rest

    def insert(self, pid: int) -> None:
        visible = [tid for tid, t in self.tris.items() if self.side(t, pid) > 0]
        if not visible:
            return
        vis = set(visible)
        horizon = []  # (u, v, hidden_tid, hidden_edge_index)
        for tid in visible:
            t = self.tris[tid]
            for e in range(3):
                nb = t.nbr[e]
                if nb not in vis:
                    u, v = t.v[e], t.v[(e + 1) % 3]
                    hid = self.tris[nb]
                    he = next(i for i in range(3)
                              if hid.v[i] == v and hid.v[(i + 1) % 3] == u)
                    horizon.append((u, v, nb, he))
        for tid in visible:
            del self.tris[tid]
        cone_by_tail = {}
        new_tris = []
        for (u, v, nb, he) in horizon:
            ntid = self._mk_tri(u, v, pid)
            self.tris[nb].nbr[he] = ntid
            self.tris[ntid].nbr[0] = nb
            cone_by_tail[u] = ntid
            new_tris.append((ntid, u, v))
        for ntid, u, v in new_tris:
            t = self.tris[ntid]
            t.nbr[1] = cone_by_tail[v]        # edge (v, pid)
            prev = next(nt for nt, uu, vv in new_tris if vv == u)
            t.nbr[2] = prev                   # edge (pid, u)
        # bug guard: cone faces must keep the interior reference inside
        for ntid, _, _ in new_tris:
            t = self.tris[ntid]
            s = _iv_dot_offset(t.fplane, (self.ref.x.interval_f(),
                                          self.ref.y.interval_f(),
                                          self.ref.z.interval_f()))
            if s is None:
                s = (dot(t.normal, self.ref) - t.offset).sign()
            if s >= 0:
                raise VerificationError("hull cone inverted")


class Polytope:
    """Immutable exact polytope: hull vertices, merged facet cycles, planes."""

    __slots__ = ("field", "vertices", "facets", "planes", "edges",
                 "provenance", "_state", "_keys", "_degrees")

    def __init__(self, field, vertices, facets, planes, edges, provenance, state):
        self.field = field
        self.vertices = vertices
        self.facets = facets
        self.planes = planes
        self.edges = edges
        self.provenance = provenance
        self._state = state
        self._keys = None
        self._degrees = None

    @property
    def f_vector(self) -> tuple[int, int]:
        return (len(self.vertices), len(self.facets))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def facet_degree(self, i: int) -> int:
        return len(self.facets[i])

    def vertex_degree(self, i: int) -> int:
        if self._degrees is None:
            deg = [0] * len(self.vertices)
            for (a, b) in self.edges:
                deg[a] += 1
                deg[b] += 1
            self._degrees = deg
        return self._degrees[i]

    def vertex_index(self, v: Vec3) -> int | None:
        if self._keys is None:
            self._keys = {p.key(): i for i, p in enumerate(self.vertices)}
        return self._keys.get(v.key())

    def contains(self, p: Vec3) -> bool:
        """Point inside or on the hull (exact)."""
        return all((dot(n, p) - o).sign() <= 0 for (n, o) in self.planes)

    # -- export ---------------------------------------------------------------

    def to_off(self, digits: int = 12) -> str:
        eps = Fraction(1, 10 ** (digits + 1))
        lines = ["OFF", f"{len(self.vertices)} {len(self.facets)} {len(self.edges)}"]
        for v in self.vertices:
            coords = []
            for c in (v.x, v.y, v.z):
                lo, hi = c.approx(eps)
                coords.append(_decimal((lo + hi) / 2, digits))
            lines.append(" ".join(coords))
        for f in self.facets:
            lines.append(" ".join([str(len(f))] + [str(i) for i in f]))
        return "\n".join(lines) + "\n"

    def serialize(self) -> dict:
        return {"field": self.field.serialize(),
                "vertices": [[str(Fraction(n, c.den)) for n in c.num]
                             for v in self.vertices for c in (v.x, v.y, v.z)],
                "facets": [list(f) for f in self.facets],
                "f_vector": list(self.f_vector),
                "provenance": self.provenance}

    def to_json(self) -> str:
        return json.dumps(self.serialize())


def _decimal(q: Fraction, digits: int) -> str:
    sign = "-" if q < 0 else ""
    q = abs(q)
    scaled = (q.numerator * 10 ** digits + q.denominator // 2) // q.denominator
    whole, frac = divmod(scaled, 10 ** digits)
    return f"{sign}{whole}.{str(frac).zfill(digits)}"


def _finalize(state: _HullState, provenance: str) -> Polytope:
    tris = state.tris
    tids = sorted(tris)
    # union coplanar neighbours
    parent = {tid: tid for tid in tids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for tid in tids:
        t = tris[tid]
        for e in range(3):
            nb = t.nbr[e]
            if nb > tid:
                opp = next(v for v in tris[nb].v if v not in t.v)
                if state.side(t, opp) == 0:
                    ra, rb = find(tid), find(nb)
                    if ra != rb:
                        parent[ra] = rb
    regions: dict[int, list[int]] = {}
    for tid in tids:
        regions.setdefault(find(tid), []).append(tid)

    facet_cycles = []
    facet_planes = []
    for root, members in regions.items():
        nxt = {}
        for tid in members:
            t = tris[tid]
            for e in range(3):
                if find(t.nbr[e]) != root:
                    u, v = t.v[e], t.v[(e + 1) % 3]
                    nxt[u] = v
        start = min(nxt)
        cyc = [start]
        cur = nxt[start]
        while cur != start:
            cyc.append(cur)
            cur = nxt[cur]
            if len(cyc) > len(nxt):
                raise VerificationError("facet boundary is not a single cycle")
        # drop collinear pass-through vertices
        changed = True
        while changed and len(cyc) > 3:
            changed = False
            for i in range(len(cyc)):
                a, b, c = (cyc[i - 1], cyc[i], cyc[(i + 1) % len(cyc)])
                if cross(state.pts[b] - state.pts[a], state.pts[c] - state.pts[b]).is_zero():
                    cyc.pop(i)
                    changed = True
                    break
        t0 = tris[members[0]]
        facet_cycles.append(cyc)
        facet_planes.append((t0.normal, t0.offset))

    used = sorted({v for cyc in facet_cycles for v in cyc})
    # canonical vertex order: lexicographic by exact coordinates
    order = _sort_vertices(used, state)
    remap = {old: new for new, old in enumerate(order)}
    vertices = tuple(state.pts[i] for i in order)

    facets = []
    planes = []
    for cyc, pl in zip(facet_cycles, facet_planes):
        mc = [remap[v] for v in cyc]
        k = mc.index(min(mc))
        mc = tuple(mc[k:] + mc[:k])
        facets.append((mc, pl))
    facets.sort(key=lambda fp: fp[0])
    planes = tuple(pl for _, pl in facets)
    facets = tuple(f for f, _ in facets)

    directed = set()
    edges = set()
    for f in facets:
        for i in range(len(f)):
            u, v = f[i], f[(i + 1) % len(f)]
            if (u, v) in directed:
                raise VerificationError("directed edge repeated across facets")
            directed.add((u, v))
            edges.add((min(u, v), max(u, v)))
    for (u, v) in edges:
        if (u, v) not in directed or (v, u) not in directed:
            raise VerificationError("edge not shared by exactly two facets")
    edges = tuple(sorted(edges))

    f0, f1, f2 = len(vertices), len(edges), len(facets)
    if f0 - f1 + f2 != 2:
        raise VerificationError(f"Euler check failed: {(f0, f1, f2)}")
    if 2 * f0 - f2 < 4 or 2 * f2 - f0 < 4:
        raise VerificationError(f"Steinitz bounds failed: {(f0, f2)}")

    return Polytope(state.field, vertices, facets, planes, edges, provenance, state)


def _sort_vertices(ids, state: _HullState):
    def cmp_pts(i, j):
        for a, b in ((state.pts[i].x, state.pts[j].x),
                     (state.pts[i].y, state.pts[j].y),
                     (state.pts[i].z, state.pts[j].z)):
            ai, bi = a.interval_f(), b.interval_f()
            if ai[1] < bi[0]:
                return -1
            if ai[0] > bi[1]:
                return 1
            s = (a - b).sign()
            if s:
                return s
        return 0
    import functools
    return sorted(ids, key=functools.cmp_to_key(cmp_pts))


def convex_hull(points, provenance: str = "hull") -> Polytope:
    """Exact hull of the given Vec3 points (must affinely span 3-space)."""
    points = list(points)
    if not points:
        raise DegenerateInputError("no points")
    field = points[0].x.field
    state = _HullState(field)
    ids = [i for p in points if (i := state.add_point(p)) is not None]
    rest = state.init_simplex(ids)
    for pid in rest:
        state.insert(pid)
    return _finalize(state, provenance)


def extend_hull(base: Polytope, new_points, provenance: str = "extend") -> Polytope:
    """Hull of base's points plus new ones, reusing base's triangulation."""
    if base._state is None:
        return convex_hull(list(base.vertices) + list(new_points), provenance)
    state = base._state.clone()
    ids = [i for p in new_points if (i := state.add_point(p)) is not None]
    for pid in ids:
        state.insert(pid)
    return _finalize(state, provenance)


def verify_hull(poly: Polytope, points) -> bool:
    """Every input point lies inside or on the hull (exact check)."""
    return all(poly.contains(p) for p in points)


# -- exact JSON round trip ----------------------------------------------------

def polytope_from_json(text: str) -> Polytope:
    data = json.loads(text)
    label = data["field"]["label"]
    if label == "Q":
        field = field_rationals()
    elif label == "Q(Phi)":
        field = field_golden()
    elif label.startswith("Q(2cos(2pi/"):
        m = int(label[len("Q(2cos(2pi/"):-2])
        field = _cos_field(m)
    else:
        raise ValueError(f"unknown field label {label}")
    coeffs = data["vertices"]
    pts = []
    for i in range(0, len(coeffs), 3):
        comps = [field.from_coeffs([Fraction(s) for s in c]) for c in coeffs[i:i + 3]]
        pts.append(Vec3(*comps))
    poly = convex_hull(pts, provenance=data.get("provenance", "json"))
    if tuple(data["f_vector"]) != poly.f_vector:
        raise VerificationError("deserialized polytope f-vector mismatch")
    return poly
