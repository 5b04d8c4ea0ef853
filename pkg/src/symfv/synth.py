"""Witness synthesis: given a group and an admissible f-vector, construct an
explicit symmetric polytope with that exact f-vector by materializing a
certificate cell and walking the cone with careful stacking/cutting.

Cone walks are memoized per cell: each lattice point root + a(n,2n) + b(2n,n)
is built once, by a single operation on its cached neighbour, so box sweeps
cost one hull extension per new member."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .certify import _arith_eval, _class_defect, evaluate, load_cells, parse_expr_arith
from .classify import decompose, in_FG, swap
from .errors import NotAMemberError, VerificationError
from .group import Group, GroupSpec, standard_group
from .hull import Polytope
from .ops import careful_cut, careful_stack
from .polytope import is_symmetric, polar_dual


@dataclass
class Trace:
    spec: str
    f: tuple
    dualized: bool = False
    klass: tuple | None = None
    slot: int | None = None
    kind: str | None = None
    root: tuple | None = None
    entry: str | None = None
    cs_steps: int = 0
    cc_steps: int = 0
    notes: list = field(default_factory=list)

    def serialize(self):
        return {"group": self.spec, "f": list(self.f), "dualized": self.dualized,
                "class": list(self.klass) if self.klass else None,
                "slot": self.slot, "kind": self.kind,
                "root": list(self.root) if self.root else None,
                "entry": self.entry,
                "cs_steps": self.cs_steps, "cc_steps": self.cc_steps,
                "notes": self.notes}

    def to_json(self):
        return json.dumps(self.serialize(), indent=2)


def _cells_with_env(spec: GroupSpec, group: Group):
    env = {"n": group.order}
    if spec.family in ("C", "D", "G"):
        env["d"] = spec.param
        if spec.family == "C":
            env["n"] = spec.param
    cells = load_cells(spec.family, spec.param if spec.family in "CDG" else None)
    out = []
    for cell in cells:
        p = _arith_eval(parse_expr_arith(cell["class"][0]), env) % group.order
        q = _arith_eval(parse_expr_arith(cell["class"][1]), env) % group.order
        root = tuple(_arith_eval(parse_expr_arith(r), env) for r in cell["root"])
        out.append((p, q, cell["slot"], root, cell))
    out.sort(key=lambda t: (t[0], t[1], t[2]))
    return env, out


class _CellWalker:
    """Materializes root + a(n,2n) + b(2n,n) for one certificate cell, caching
    every lattice point; chains start from the cell's typed anchor entries."""

    def __init__(self, cell, group, env):
        self.cell = cell
        self.group = group
        self.env = env
        self.kind = cell["kind"]
        self.memo: dict = {}
        self._anchors_done = False
        self.entry_used: dict = {}

    def _expr(self, role):
        return self.cell.get("resolved", {}).get(role, self.cell["entries"][role])

    def _eval(self, role, star=None):
        expr = self._expr(role)
        return evaluate(expr, self.group, self.env, star=star), expr

    def _anchors(self):
        if self._anchors_done:
            return
        self._anchors_done = True
        kind, entries = self.kind, self.cell["entries"]
        companions = {}
        if kind == "Tri" and entries.get("P", "empty") != "empty":
            P, pexpr = self._eval("P")
            self.memo[(0, 0)] = P
            self.entry_used[(0, 0)] = pexpr
            companions = (P, pexpr)
        elif kind in ("RL", "LR"):
            first_role = "R" if kind == "RL" else "L"
            P, fexpr = self._eval(first_role)
            self.memo[(0, 0)] = P
            self.entry_used[(0, 0)] = fexpr
            companions = (P, fexpr)
        if kind == "RL":
            L, lexpr = self._eval("L", star=companions)
            self.memo[(1, 0)] = L
            self.entry_used[(1, 0)] = lexpr
        elif kind == "LR":
            R, rexpr = self._eval("R", star=companions)
            self.memo[(0, 1)] = R
            self.entry_used[(0, 1)] = rexpr
        elif kind == "Tri":
            star = companions if companions else None
            L, lexpr = self._eval("L", star=star)
            R, rexpr = self._eval("R", star=star)
            self.memo[(1, 0)], self.entry_used[(1, 0)] = L, lexpr
            self.memo[(0, 1)], self.entry_used[(0, 1)] = R, rexpr
            if (1, 1) not in self.memo:
                Q, qexpr = self._eval("Q", star=star)
                self.memo[(1, 1)], self.entry_used[(1, 1)] = Q, qexpr
        else:  # B certificate
            if "B" in entries:
                P, bexpr = self._eval("B")
                self.memo[(0, 0)] = P
                self.entry_used[(0, 0)] = bexpr
                self._left0 = self._right0 = P
            else:
                L, lexpr = self._eval("L")
                R, rexpr = self._eval("R", star=(L, lexpr))
                self.memo[(0, 0)] = L
                self.entry_used[(0, 0)] = lexpr
                self._left0, self._right0 = L, R

    # type guarantees of the anchor lattice points; every derived point is a
    # base polytope (CS_{3,n}/CC_{3,n} add trivial-stabilizer simple vertices
    # and simplicial facets on the fresh orbit)
    _ANCHOR_FLAGS = {
        "RL": {(0, 0): "right", (1, 0): "left"},
        "LR": {(0, 0): "left", (0, 1): "right"},
        "Tri": {(0, 0): "plain", (1, 0): "left", (0, 1): "right", (1, 1): "plain"},
        "B": {(0, 0): "left"},
    }

    def _flag(self, a, b):
        return self._ANCHOR_FLAGS[self.kind].get((a, b), "base")

    def at(self, a: int, b: int) -> Polytope:
        self._anchors()
        if (a, b) in self.memo:
            return self.memo[(a, b)]
        n = self.group.order
        if self.kind == "B" and a == 0 and b >= 1:
            prev = self._right0 if b == 1 else self.at(0, b - 1)
            P = careful_cut(prev, self.group, 3, n)
        elif a >= 1 and self._flag(a - 1, b) in ("left", "base"):
            P = careful_stack(self.at(a - 1, b), self.group, 3, n)
        elif b >= 1 and self._flag(a, b - 1) in ("right", "base"):
            P = careful_cut(self.at(a, b - 1), self.group, 3, n)
        elif a >= 1:
            P = careful_stack(self.at(a - 1, b), self.group, 3, n)
        else:
            P = careful_cut(self.at(a, b - 1), self.group, 3, n)
        self.memo[(a, b)] = P
        return P

    def available(self, a, b) -> bool:
        if self.kind == "Tri" and (a, b) == (0, 0):
            return self.cell["entries"].get("P", "empty") != "empty"
        return True


_WALKERS: dict = {}


def _walker(spec: GroupSpec, group, env, p, q, slot, cell) -> _CellWalker:
    key = (str(spec), p, q, slot)
    if key not in _WALKERS:
        _WALKERS[key] = _CellWalker(cell, group, env)
    return _WALKERS[key]


def synthesize(spec: GroupSpec, f, group: Group | None = None) -> tuple[Polytope, Trace]:
    """Explicit spec-symmetric polytope with f-vector exactly f, plus its trace."""
    f = (int(f[0]), int(f[1]))
    decision = in_FG(spec, f)
    if not decision.member:
        raise NotAMemberError(f"{f} is not in F({spec}): {decision.exclusion or decision.clause}")
    group = group or standard_group(spec)
    trace = Trace(str(spec), f)
    env, cells = _cells_with_env(spec, group)
    n = group.order

    for target, dualized in ((f, False), (swap(f), True)):
        if dualized and swap(f) == f:
            break
        for (p, q, slot, root, cell) in cells:
            ab = decompose(target, root, n)
            if ab is None:
                continue
            a, b = ab
            walker = _walker(spec, group, env, p, q, slot, cell)
            if not walker.available(a, b):
                continue
            P = walker.at(a, b)
            trace.dualized = dualized
            trace.klass, trace.slot, trace.kind, trace.root = (p, q), slot, cell["kind"], root
            trace.cs_steps, trace.cc_steps = a, b
            anchor = min(walker.entry_used, key=lambda k: abs(k[0] - a) + abs(k[1] - b))
            trace.entry = walker.entry_used.get(anchor)
            if dualized:
                P = polar_dual(P)
            if P.f_vector != f:
                raise VerificationError(
                    f"synthesize({spec}, {f}): built {P.f_vector} via {trace.entry}")
            if not is_symmetric(P, group):
                raise VerificationError(f"synthesize({spec}, {f}): symmetry lost")
            return P, trace
    raise VerificationError(
        f"synthesize({spec}, {f}): classifier accepted but no cone decomposition found")


def enumerate_members(spec: GroupSpec, bound: int):
    from .classify import enumerate_members as _em
    return _em(spec, bound)
