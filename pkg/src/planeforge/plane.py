"""Desarguesian projective planes PG(2, q) and their incidence structure."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import InvalidPlane, NotPrime, TooLarge, UnsupportedOrder
from .gf import field_of_order

# n = q^2 + q + 1 = 4161 at q = 64; construction is O(n^2) in pure Python
MAX_PLANE_ORDER = 64


@dataclass(frozen=True)
class Point:
    id: int
    homog: tuple | None = None


@dataclass(frozen=True)
class Line:
    id: int
    homog: tuple | None
    members: tuple[int, ...]


@dataclass(frozen=True)
class Plane:
    """Point/line incidence system. Nothing is validated on construction."""

    q: int
    points: tuple[Point, ...]
    lines: tuple[Line, ...]
    point_to_lines: tuple[tuple[int, ...], ...] = field(init=False)

    def __post_init__(self):
        incident = [[] for _ in self.points]
        for ln in self.lines:
            for p in ln.members:
                incident[p].append(ln.id)
        object.__setattr__(self, "point_to_lines", tuple(tuple(sorted(x)) for x in incident))

    @property
    def n(self) -> int:
        return len(self.points)

    def line_sets(self) -> list[frozenset[int]]:
        return [frozenset(ln.members) for ln in self.lines]

    @classmethod
    def from_members(cls, q: int, members, n_points: int | None = None) -> Plane:
        members = [tuple(sorted(m)) for m in members]
        if n_points is None:
            n_points = 1 + max((max(m) for m in members if m), default=-1)
        points = tuple(Point(i) for i in range(n_points))
        lines = tuple(Line(i, None, m) for i, m in enumerate(members))
        return cls(q, points, lines)


def _normalized_triples(F):
    """Nonzero triples over F whose first nonzero coordinate is 1, as integer codes."""
    q = F.q
    out = []
    for t in itertools.product(range(q), repeat=3):
        nz = next((c for c in t if c), None)
        if nz == 1:
            out.append(t)
    return out  # product() order is already lexicographic


def build_plane(q: int) -> Plane:
    """Construct PG(2, q): points and lines are normalized homogeneous triples.

    A point lies on a line iff the GF(q) dot product of their triples is zero.
    Ids follow the lexicographic order of the (integer-coded) triples.
    """
    if q < 2 or q > MAX_PLANE_ORDER:
        raise UnsupportedOrder(f"order {q} outside supported range 2..{MAX_PLANE_ORDER}")
    try:
        F = field_of_order(q)
    except (NotPrime, TooLarge) as exc:
        raise UnsupportedOrder(f"order {q} is not a supported prime power") from exc

    triples = _normalized_triples(F)
    mul = F._mul_table
    add = F._add_table

    def dot(a, b):
        return add[add[mul[a[0]][b[0]]][mul[a[1]][b[1]]]][mul[a[2]][b[2]]]

    points = tuple(Point(i, tuple(F.from_int(c) for c in t)) for i, t in enumerate(triples))
    lines = []
    for j, lt in enumerate(triples):
        members = tuple(i for i, pt in enumerate(triples) if dot(lt, pt) == 0)
        lines.append(Line(j, tuple(F.from_int(c) for c in lt), members))
    return Plane(q, points, tuple(lines))


@dataclass
class AxiomReport:
    q: int
    n: int
    counts_ok: bool
    axiom_i: bool
    axiom_ii: bool
    axiom_iii: bool
    degree: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.counts_ok and self.axiom_i and self.axiom_ii and self.axiom_iii and self.degree

    def to_dict(self) -> dict:
        return {
            "q": self.q, "n": self.n, "ok": self.ok,
            "counts": self.counts_ok, "axiom_i": self.axiom_i,
            "axiom_ii": self.axiom_ii, "axiom_iii": self.axiom_iii,
            "degree": self.degree, "witnesses": self.witnesses,
        }


def verify_axioms(pl: Plane) -> AxiomReport:
    """Exhaustively check the three plane axioms and the point degree condition.

    Failures carry the first offending pair (or single line/point) as witness.
    """
    q, n = pl.q, pl.n
    expected_n = q * q + q + 1
    witnesses = {}

    counts_ok = n == expected_n and len(pl.lines) == expected_n
    if not counts_ok:
        witnesses["counts"] = {"points": n, "lines": len(pl.lines), "expected": expected_n}

    # (i) every pair of points lies on exactly one line
    pair_count = {}
    for ln in pl.lines:
        for pair in itertools.combinations(ln.members, 2):
            pair_count[pair] = pair_count.get(pair, 0) + 1
    axiom_i = True
    for pair in itertools.combinations(range(n), 2):
        if pair_count.get(pair, 0) != 1:
            axiom_i = False
            witnesses["axiom_i"] = {"points": list(pair), "lines_through": pair_count.get(pair, 0)}
            break

    # (ii) every pair of lines meets in exactly one point
    axiom_ii = True
    sets = pl.line_sets()
    for a, b in itertools.combinations(range(len(sets)), 2):
        common = len(sets[a] & sets[b])
        if common != 1:
            axiom_ii = False
            witnesses["axiom_ii"] = {"lines": [a, b], "common_points": common}
            break

    axiom_iii = True
    for ln in pl.lines:
        if len(ln.members) != q + 1:
            axiom_iii = False
            witnesses["axiom_iii"] = {"line": ln.id, "size": len(ln.members)}
            break

    degree = True
    for p, inc in enumerate(pl.point_to_lines):
        if len(inc) != q + 1:
            degree = False
            witnesses["degree"] = {"point": p, "lines": len(inc)}
            break

    return AxiomReport(q, n, counts_ok, axiom_i, axiom_ii, axiom_iii, degree, witnesses)


def dual(pl: Plane) -> Plane:
    """Swap points and lines: the dual line indexed by p collects the lines through p."""
    report = verify_axioms(pl)
    if not report.ok:
        raise InvalidPlane(f"cannot dualize an invalid plane: {report.witnesses}")
    points = tuple(Point(ln.id, ln.homog) for ln in pl.lines)
    lines = tuple(Line(pt.id, pt.homog, pl.point_to_lines[pt.id]) for pt in pl.points)
    return Plane(pl.q, points, lines)


def incidence_text(pl: Plane) -> str:
    """Serialize as ``q n`` followed by one line of sorted point ids per projective line."""
    rows = [f"{pl.q} {len(pl.lines)}"]
    rows += [" ".join(str(p) for p in sorted(ln.members)) for ln in pl.lines]
    return "\n".join(rows) + "\n"


def parse_incidence(text: str) -> Plane:
    rows = text.splitlines()
    if not rows:
        raise ValueError("empty incidence file")
    header = rows[0].split()
    if len(header) != 2:
        raise ValueError(f"bad header line: {rows[0]!r}")
    q, count = int(header[0]), int(header[1])
    body = rows[1:]
    if len(body) != count:
        raise ValueError(f"header announces {count} lines, found {len(body)}")
    members = [tuple(int(tok) for tok in row.split()) for row in body]
    n_points = max(count, 1 + max((max(m) for m in members if m), default=-1))
    return Plane.from_members(q, members, n_points)


def write_incidence(pl: Plane, path) -> None:
    with open(path, "w") as fh:
        fh.write(incidence_text(pl))


def read_incidence(path) -> Plane:
    with open(path) as fh:
        return parse_incidence(fh.read())
