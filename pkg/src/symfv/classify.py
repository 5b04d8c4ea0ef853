"""Membership of f-vectors in F and F(G), cone-root computation, and the
residue-engine cross-check against the classifier's congruence skeleton."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParameterError
from .group import GroupSpec, residue_set, standard_group

FVector = tuple[int, int]


def swap(f: FVector) -> FVector:
    return (f[1], f[0])


def in_F(f: FVector) -> bool:
    """Steinitz: realizable f-vectors of 3-polytopes."""
    f0, f2 = f
    return 2 * f0 - f2 >= 4 and 2 * f2 - f0 >= 4


@dataclass(frozen=True)
class Clause:
    residue: tuple[int, int]
    # lower bound on 2f0 - f2 for this residue class, None when unrestricted
    min_simplicial_defect: int | None = None


@dataclass(frozen=True)
class ClauseSet:
    modulus: int
    clauses: tuple[Clause, ...]
    exclusions: frozenset = frozenset()
    unrestricted: bool = False  # C_1 / C_2: all of F


def clause_set(spec: GroupSpec) -> ClauseSet:
    fam, p = spec.family, spec.param
    n = spec.order
    if fam == "C":
        if p <= 2:
            return ClauseSet(max(p, 1), (), unrestricted=True)
        return ClauseSet(n, (Clause((1, 1)), Clause((0, 2), 2 * n - 2)))
    if fam == "D":
        if p == 2:
            return ClauseSet(4, (Clause((0, 0)), Clause((0, 2)), Clause((2, 2))),
                             exclusions=frozenset({(6, 6)}))
        d = p
        return ClauseSet(n, (Clause((0, 2)), Clause((2, d)),
                             Clause((0, d + 2), 3 * d - 2),
                             Clause((d, d + 2), 3 * d - 2)))
    if fam == "T":
        return ClauseSet(12, tuple(Clause(r) for r in
                                   ((0, 2), (0, 8), (4, 4), (4, 10), (6, 8))))
    if fam == "O":
        return ClauseSet(24, tuple(Clause(r) for r in
                                   ((0, 2), (0, 14), (6, 8), (6, 20), (8, 18), (12, 14))))
    if fam == "I":
        return ClauseSet(60, tuple(Clause(r) for r in
                                   ((0, 2), (0, 32), (12, 20), (12, 50), (20, 42), (30, 32))))
    if fam == "G":
        if p == 1:
            return ClauseSet(2, (Clause((0, 0)),),
                             exclusions=frozenset({(4, 4), (6, 6)}))
        if p == 2:
            return ClauseSet(4, (Clause((0, 0)), Clause((0, 2))))
        return ClauseSet(n, (Clause((0, 2)),))
    raise ParameterError(f"no clauses for {spec}")


@dataclass(frozen=True)
class Decision:
    member: bool
    clause: str = ""
    exclusion: str | None = None

    def serialize(self):
        out = {"member": self.member, "clause": self.clause}
        if self.exclusion:
            out["exclusion"] = self.exclusion
        return out


def _match_clause(cs: ClauseSet, f: FVector) -> Clause | None:
    for cl in cs.clauses:
        if (f[0] % cs.modulus, f[1] % cs.modulus) == cl.residue:
            if cl.min_simplicial_defect is None or 2 * f[0] - f[1] >= cl.min_simplicial_defect:
                return cl
    return None


def in_FG(spec: GroupSpec, f: FVector) -> Decision:
    """Decide f in F(G) per the classification theorem (diamond-closed)."""
    f = (int(f[0]), int(f[1]))
    if not in_F(f):
        return Decision(False, clause="not in F")
    cs = clause_set(spec)
    if f in cs.exclusions:
        return Decision(False, exclusion=str(f))
    if cs.unrestricted:
        return Decision(True, clause="F")
    direct = _match_clause(cs, f)
    if direct is not None:
        return Decision(True, clause=f"{direct.residue} mod {cs.modulus}")
    via = _match_clause(cs, swap(f))
    if via is not None:
        return Decision(True, clause=f"{via.residue} mod {cs.modulus} via swap")
    return Decision(False, clause="no residue class matches")


# ---------------------------------------------------------------------------
# cone roots

def cone_points(p: int, q: int, n: int):
    """The three translates v1, v2, v3 (plus m) from the finite cone
    distribution lemma: m is the smallest (possibly negative) multiple of n
    with m >= 4 + p - 2q; slot j uses (m+jn, m+jn), bumped to
    (m+jn+2n, m+jn+n) when the diagonal point falls outside F."""
    if not (0 <= p <= q < n):
        raise ParameterError("need 0 <= p <= q < n")
    lo = 4 + p - 2 * q
    m = n * -((-lo) // n)  # ceil division towards the smallest multiple >= lo
    vs = []
    for j in range(3):
        base = m + j * n
        if base + 2 * p - q >= 4:
            vs.append((base, base))
        else:
            vs.append((base + 2 * n, base + n))
    return (m, *vs)


def restricted_roots(p: int, q: int, n: int, min_defect: int | None):
    """Table roots: cone roots with the class inequality applied; a root whose
    class violates 2f0 - f2 >= bound moves one (2n, n) step into the cone."""
    bound = max(4, min_defect) if min_defect is not None else 4
    lo = 4 + p - 2 * q
    m = n * -((-lo) // n)
    roots = []
    for j in range(3):
        r = (p + m + j * n, q + m + j * n)
        for _ in range(4):
            if 2 * r[0] - r[1] >= bound:
                break
            r = (r[0] + 2 * n, r[1] + n)
        else:
            raise ParameterError("root bump did not converge")
        roots.append(r)
    return roots


def decompose(f: FVector, root: FVector, n: int):
    """Nonnegative integers (a, b) with f = root + a(n,2n) + b(2n,n), or None."""
    x0, x2 = f[0] - root[0], f[1] - root[1]
    num_a, num_b = 2 * x2 - x0, 2 * x0 - x2
    if num_a % (3 * n) or num_b % (3 * n):
        return None
    a, b = num_a // (3 * n), num_b // (3 * n)
    if a < 0 or b < 0:
        return None
    return (a, b)


def enumerate_members(spec: GroupSpec, bound: int) -> list[FVector]:
    """All f with max(f0, f2) <= bound accepted by the classifier."""
    if bound < 4:
        raise ParameterError("bound must be >= 4")
    out = []
    for f0 in range(4, bound + 1):
        for f2 in range(4, bound + 1):
            if in_FG(spec, (f0, f2)).member:
                out.append((f0, f2))
    return out


# ---------------------------------------------------------------------------
# residue-engine consistency

@dataclass
class ResidueReport:
    spec: GroupSpec
    modulus: int
    from_orbits: frozenset
    from_clauses: frozenset
    consistent: bool = field(init=False)

    def __post_init__(self):
        self.consistent = self.from_orbits == self.from_clauses


def _clause_skeleton(spec: GroupSpec) -> tuple[int, frozenset]:
    cs = clause_set(spec)
    n = spec.order
    if cs.unrestricted:
        return n, frozenset((a, b) for a in range(n) for b in range(n))
    acc = set()
    for cl in cs.clauses:
        acc.add(cl.residue)
        acc.add((cl.residue[1], cl.residue[0]))
    return cs.modulus, frozenset(acc)


def verify_residue_engine(spec: GroupSpec) -> ResidueReport:
    """Residue set derived from ray-orbits must equal the congruence skeleton
    of the classifier's clause list (inequalities and exclusions ignored)."""
    group = standard_group(spec)
    n_orb, orb = residue_set(group)
    n_cl, cl = _clause_skeleton(spec)
    assert n_orb == n_cl == spec.order
    return ResidueReport(spec, n_orb, orb, cl)
