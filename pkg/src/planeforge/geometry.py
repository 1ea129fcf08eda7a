"""Exact rational geometry and the convex-representation audit.

Everything here works on ``Fraction`` coordinates. Convex sets are
V-polytopes (convex hulls of finite vertex lists) and every containment or
intersection question is answered by the exact LP in :mod:`planeforge.lp`.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import lp
from .errors import BudgetExceeded, DimensionMismatch, DimensionUnsupported
from .plane import Plane

RationalPoint = tuple  # tuple of Fractions


def rational_point(coords) -> RationalPoint:
    return tuple(Fraction(c) for c in coords)


@dataclass(frozen=True)
class PolytopeV:
    vertices: tuple

    def __post_init__(self):
        verts = tuple(rational_point(v) for v in self.vertices)
        if not verts:
            raise ValueError("a polytope needs at least one vertex")
        if len({len(v) for v in verts}) != 1:
            raise DimensionMismatch("polytope vertices have mixed dimensions")
        object.__setattr__(self, "vertices", verts)

    @property
    def dim(self) -> int:
        return len(self.vertices[0])


@dataclass
class Representation:
    """Candidate representation: one V-polytope in R^d per line id."""

    d: int
    sets: dict

    def __post_init__(self):
        for key, poly in self.sets.items():
            if poly.dim != self.d:
                raise DimensionMismatch(f"set {key} lives in R^{poly.dim}, expected R^{self.d}")


# ---------------------------------------------------------------------------
# predicates

def _det_sign(rows) -> int:
    """Sign of a square rational determinant (fraction-free Bareiss on integers)."""
    rows = [list(r) for r in rows]
    n = len(rows)
    if n == 0:
        return 1
    mat = []
    for r in rows:
        den = 1
        for v in r:
            den = den * v.denominator // math.gcd(den, v.denominator)
        # positive row scaling keeps the sign
        mat.append([int(v * den) for v in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if mat[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if mat[i][k] != 0), None)
            if swap is None:
                return 0
            mat[k], mat[swap] = mat[swap], mat[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
        prev = mat[k][k]
    last = mat[n - 1][n - 1]
    return 0 if last == 0 else sign * (1 if last > 0 else -1)


def orientation(simplex) -> int:
    """Sign (+1, 0, -1) of det[p_1 - p_0, ..., p_d - p_0] for d+1 points in R^d."""
    pts = [rational_point(p) for p in simplex]
    d = len(pts) - 1
    if any(len(p) != d for p in pts):
        raise DimensionMismatch(f"orientation needs {d + 1} points in R^{d}")
    base = pts[0]
    return _det_sign([[a - b for a, b in zip(p, base)] for p in pts[1:]])


def general_position(points, d: int):
    """Return ``(True, None)`` or ``(False, witness)`` where the witness is the
    first (d+1)-subset of indices lying in a common hyperplane."""
    pts = [rational_point(p) for p in points]
    if len(pts) < d + 1:
        raise ValueError(f"need at least {d + 1} points")
    for combo in itertools.combinations(range(len(pts)), d + 1):
        if orientation([pts[i] for i in combo]) == 0:
            return False, combo
    return True, None


# ---------------------------------------------------------------------------
# LP-backed convexity queries

def _common_dim(polys) -> int:
    dims = {p.dim for p in polys}
    if len(dims) != 1:
        raise DimensionMismatch(f"polytopes of dimensions {sorted(dims)} cannot be intersected")
    return dims.pop()


def _intersection_system(polys):
    """Constraints on stacked convex weights: each block sums to one and all
    blocks produce the same point as block 0."""
    d = _common_dim(polys)
    sizes = [len(p.vertices) for p in polys]
    offsets = list(itertools.accumulate([0] + sizes))
    n_vars = offsets[-1]
    A, b = [], []
    for j, size in enumerate(sizes):
        row = [0] * n_vars
        for v in range(size):
            row[offsets[j] + v] = 1
        A.append(row)
        b.append(1)
    for j in range(1, len(polys)):
        for i in range(d):
            row = [0] * n_vars
            for v, vert in enumerate(polys[0].vertices):
                row[v] = vert[i]
            for v, vert in enumerate(polys[j].vertices):
                row[offsets[j] + v] = -vert[i]
            A.append(row)
            b.append(0)
    return A, b, n_vars, d


def _combine(poly, weights):
    d = poly.dim
    return tuple(sum((w * v[i] for w, v in zip(weights, poly.vertices)), Fraction(0))
                 for i in range(d))


def hulls_intersect(polys) -> RationalPoint | None:
    """A rational point common to all hulls, or None when they do not meet."""
    polys = list(polys)
    if not polys:
        raise ValueError("need at least one polytope")
    A, b, n_vars, d = _intersection_system(polys)
    x = lp.feasible_point(A, b)
    if x is None:
        return None
    return _combine(polys[0], x[:len(polys[0].vertices)])


def point_in_hull(point, poly: PolytopeV) -> bool:
    return hulls_intersect([PolytopeV((point,)), poly]) is not None


def central_point(polys) -> RationalPoint | None:
    """Average of the coordinate-extreme points of the intersection of hulls.

    Being a convex combination of points of the intersection it lies inside
    it, and it is usually away from the boundary.
    """
    polys = list(polys)
    A, b, n_vars, d = _intersection_system(polys)
    first = polys[0]
    found = []
    for i in range(d):
        for sgn in (1, -1):
            c = [0] * n_vars
            for v, vert in enumerate(first.vertices):
                c[v] = sgn * vert[i]
            status, x = lp.minimize(c, A, b)
            if status == "infeasible":
                return None
            found.append(_combine(first, x[:len(first.vertices)]))
    if not found:  # d == 0
        return () if lp.feasible_point(A, b) is not None else None
    k = len(found)
    return tuple(sum((p[i] for p in found), Fraction(0)) / k for i in range(d))


# ---------------------------------------------------------------------------
# nerve of a representation

@dataclass
class MatchReport:
    match: bool
    k_max: int
    checks: dict
    witness: dict | None = None
    justification: str = ""

    def to_dict(self) -> dict:
        return {"match": self.match, "k_max": self.k_max,
                "checks": {str(k): v for k, v in self.checks.items()},
                "witness": self.witness, "justification": self.justification}


def nerve_of_representation(rep: Representation, pl: Plane) -> MatchReport:
    """Compare k-wise hull intersections with line concurrency in the plane.

    Checking k <= d + 2 suffices by Helly's theorem; checking k <= q + 2 also
    suffices because no q + 2 lines are concurrent and intersections only
    shrink as k grows. The smaller cap is used.
    """
    missing = [ln.id for ln in pl.lines if ln.id not in rep.sets]
    if missing:
        raise ValueError(f"representation lacks sets for lines {missing}")
    n = len(pl.lines)
    k_max = min(rep.d + 2, pl.q + 2, n)
    why = (f"k <= {k_max} = min(d+2 (Helly), q+2 (no q+2 lines concurrent), n) "
           "determines the whole intersection pattern")
    sets = pl.line_sets()
    checks = {}
    for k in range(1, k_max + 1):
        checks[k] = 0
        for combo in itertools.combinations(range(n), k):
            truth = bool(frozenset.intersection(*(sets[i] for i in combo)))
            point = hulls_intersect([rep.sets[i] for i in combo])
            checks[k] += 1
            if truth != (point is not None):
                witness = {"lines": list(combo), "k": k,
                           "concurrent_in_plane": truth,
                           "hulls_intersect": point is not None,
                           "common_point": _fmt_point(point) if point is not None else None}
                return MatchReport(False, k_max, checks, witness, why)
    return MatchReport(True, k_max, checks, None, why)


# ---------------------------------------------------------------------------
# selection search

@dataclass
class SelectionResult:
    a: RationalPoint
    parts: tuple
    hit_fraction: Fraction
    hits: int
    transversals: int
    candidates: int
    partitions_evaluated: int
    candidate_set: str

    def to_dict(self) -> dict:
        return {"a": _fmt_point(self.a), "parts": [list(p) for p in self.parts],
                "hit_fraction": str(self.hit_fraction), "hits": self.hits,
                "transversals": self.transversals, "candidates": self.candidates,
                "partitions_evaluated": self.partitions_evaluated,
                "candidate_set": self.candidate_set}


CANDIDATE_SET_2D = ("centroid of X, then intersections of lines through disjoint pairs of X "
                    "(deduplicated); radial balanced partitions into 3 arcs, all rotations")
CANDIDATE_SET_1D = ("centroid of X, then X itself, then midpoints of consecutive points; "
                    "balanced left/right splits of the sorted order")


def _as_indexed(X):
    if isinstance(X, dict):
        ids = sorted(X)
        return ids, [rational_point(X[i]) for i in ids]
    pts = [rational_point(p) for p in X]
    return list(range(len(pts))), pts


def _line_intersection(p1, p2, p3, p4):
    dx1, dy1 = p2[0] - p1[0], p2[1] - p1[1]
    dx2, dy2 = p4[0] - p3[0], p4[1] - p3[1]
    den = dx1 * dy2 - dy1 * dx2
    if den == 0:
        return None
    t = ((p3[0] - p1[0]) * dy2 - (p3[1] - p1[1]) * dx2) / den
    return (p1[0] + t * dx1, p1[1] + t * dy1)


def selection_candidates(X, d: int) -> list[RationalPoint]:
    """Candidate centres a, in evaluation order (see CANDIDATE_SET_*)."""
    _, pts = _as_indexed(X)
    m = len(pts)
    centroid = tuple(sum((p[i] for p in pts), Fraction(0)) / m for i in range(d))
    out, seen = [centroid], {centroid}

    def push(c):
        if c not in seen:
            seen.add(c)
            out.append(c)

    if d == 1:
        for p in pts:
            push(p)
        xs = sorted(p[0] for p in pts)
        for u, v in zip(xs, xs[1:]):
            push(((u + v) / 2,))
        return out
    pairs = list(itertools.combinations(range(m), 2))
    for (i, j), (k, l) in itertools.combinations(pairs, 2):
        if len({i, j, k, l}) < 4:
            continue
        c = _line_intersection(pts[i], pts[j], pts[k], pts[l])
        if c is not None:
            push(c)
    return out


def _balanced_sizes(m, parts):
    base, extra = divmod(m, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def _angle_cmp(a):
    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    def cmp(u, w):
        (iu, pu), (iw, pw) = u, w
        vu = (pu[0] - a[0], pu[1] - a[1])
        vw = (pw[0] - a[0], pw[1] - a[1])
        zu, zw = vu == (0, 0), vw == (0, 0)
        if zu or zw:
            return (zw - zu) or (iu - iw)
        hu, hw = half(vu), half(vw)
        if hu != hw:
            return hu - hw
        cross = vu[0] * vw[1] - vu[1] * vw[0]
        if cross:
            return -1 if cross > 0 else 1
        du = vu[0] ** 2 + vu[1] ** 2
        dw = vw[0] ** 2 + vw[1] ** 2
        return (du > dw) - (du < dw) or (iu - iw)
    return cmp


def radial_partitions(X, a, d: int) -> list[tuple]:
    """Balanced partitions of X's ids into d+1 contiguous groups around a."""
    ids, pts = _as_indexed(X)
    m = len(ids)
    sizes = _balanced_sizes(m, d + 1)
    if d == 1:
        order = [ids[i] for i in sorted(range(m), key=lambda i: (pts[i][0], ids[i]))]
        splits = {sizes[0], sizes[1]}
        return [(tuple(sorted(order[:s])), tuple(sorted(order[s:]))) for s in sorted(splits)]
    ordered = sorted(zip(ids, pts), key=functools.cmp_to_key(_angle_cmp(a)))
    order = [i for i, _ in ordered]
    out, seen = [], set()
    for r in range(m):
        rot = order[r:] + order[:r]
        parts, pos = [], 0
        for s in sizes:
            parts.append(tuple(sorted(rot[pos:pos + s])))
            pos += s
        key = frozenset(parts)
        if key not in seen:
            seen.add(key)
            out.append(tuple(parts))
    return out


def _sign(v):
    return (v > 0) - (v < 0)


def _common_denominator(values) -> int:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return den


def _count_hits(parts, pos, a, d):
    """Transversals (one id per part) whose closed hull contains a."""
    if d == 1:
        return sum(1 for i in parts[0] for j in parts[1]
                   if min(pos[i][0], pos[j][0]) <= a[0] <= max(pos[i][0], pos[j][0]))
    # pos holds integer coordinates scaled by a common positive factor; bring a
    # onto the same grid as (ax / den, ay / den) so the signs stay exact
    ax, ay, den = a
    ids = [i for part in parts for i in part]
    sg = {}
    for i, j in itertools.combinations(ids, 2):
        (xi, yi), (xj, yj) = pos[i], pos[j]
        s = _sign((xj - xi) * (ay - yi * den) - (yj - yi) * (ax - xi * den))
        sg[i, j], sg[j, i] = s, -s
    hits = 0
    for i in parts[0]:
        for j in parts[1]:
            sij = sg[i, j]
            for k in parts[2]:
                signs = (sij, sg[j, k], sg[k, i])
                if not (1 in signs and -1 in signs):
                    hits += 1
    return hits


def selection_search(X, d: int, budget: int = 10_000_000) -> SelectionResult:
    """Brute-force search for a point a and parts Z_1..Z_{d+1} maximizing the
    fraction of transversals whose convex hull contains a.

    X is a sequence of points (ids = positions) or a mapping id -> point and
    must be in general position. This is an empirical search over a fixed
    candidate set, not a construction with a guaranteed constant.
    """
    if d not in (1, 2):
        raise DimensionUnsupported(f"selection search supports d in (1, 2), got {d}")
    ids, pts = _as_indexed(X)
    if any(len(p) != d for p in pts):
        raise DimensionMismatch(f"points must lie in R^{d}")
    if len(pts) < d + 1:
        raise ValueError(f"need at least {d + 1} points")
    ok, witness = general_position(pts, d)
    if not ok:
        raise ValueError(f"points {[ids[i] for i in witness]} are not in general position")
    pos = dict(zip(ids, pts))
    scale = _common_denominator(c for p in pts for c in p)
    int_pos = {i: tuple(int(c * scale) for c in p) for i, p in pos.items()}
    m = len(ids)
    candidates = selection_candidates(X, d)
    per_partition = 1
    for s in _balanced_sizes(m, d + 1):
        per_partition *= s
    estimate = len(candidates) * (m if d == 2 else 2) * per_partition
    if estimate > budget:
        raise BudgetExceeded(f"about {estimate} transversal tests exceed budget {budget}")

    best = None
    evaluated = 0
    for a in candidates:
        for parts in radial_partitions(X, a, d):
            evaluated += 1
            total = 1
            for p in parts:
                total *= len(p)
            if d == 2:
                den = _common_denominator(a)
                hits = _count_hits(parts, int_pos, (int(a[0] * scale * den),
                                                    int(a[1] * scale * den), den), d)
            else:
                hits = _count_hits(parts, pos, a, d)
            frac = Fraction(hits, total)
            if best is None or frac > best[0]:
                best = (frac, hits, total, a, parts)
    frac, hits, total, a, parts = best
    desc = CANDIDATE_SET_2D if d == 2 else CANDIDATE_SET_1D
    return SelectionResult(a, parts, frac, hits, total, len(candidates), evaluated, desc)


def perturbed_grid(rows: int, cols: int, seed: int, jitter: int = 200) -> list[RationalPoint]:
    """Grid points (i, j) moved by seeded rational offsets in (-jitter/1000, jitter/1000),
    redrawn until they are in general position."""
    rng = random.Random(seed)
    while True:
        pts = [(Fraction(i) + Fraction(rng.randint(-jitter, jitter), 1000),
                Fraction(j) + Fraction(rng.randint(-jitter, jitter), 1000))
               for i in range(rows) for j in range(cols)]
        if general_position(pts, 2)[0]:
            return pts


# ---------------------------------------------------------------------------
# representation builders and file format

def hull_representation(pl: Plane, points: dict) -> Representation:
    """C_line := conv{points[p] : p on the line}."""
    d = len(next(iter(points.values())))
    sets = {ln.id: PolytopeV(tuple(points[p] for p in ln.members)) for ln in pl.lines}
    return Representation(d, sets)


def simplex_representation(pl: Plane) -> Representation:
    """Points as vertices of a simplex in R^(n-1) (origin plus unit vectors)."""
    n = pl.n
    verts = {0: (0,) * (n - 1)}
    for p in range(1, n):
        verts[p] = tuple(int(i == p - 1) for i in range(n - 1))
    return hull_representation(pl, verts)


def random_hull_representation(pl: Plane, d: int, seed: int, scale: int = 100) -> Representation:
    """Hulls of seeded random integer points, one per plane point."""
    rng = random.Random(seed)
    pts = {p: tuple(rng.randint(-scale, scale) for _ in range(d)) for p in range(pl.n)}
    return hull_representation(pl, pts)


def representation_to_json(rep: Representation) -> dict:
    return {"d": rep.d,
            "sets": {str(k): [[[c.numerator, c.denominator] for c in v] for v in poly.vertices]
                     for k, poly in sorted(rep.sets.items())}}


def representation_from_json(data: dict) -> Representation:
    d = int(data["d"])
    sets = {}
    for key, verts in data["sets"].items():
        sets[int(key)] = PolytopeV(tuple(tuple(Fraction(int(num), int(den)) for num, den in v)
                                         for v in verts))
    return Representation(d, sets)


def read_representation(path) -> Representation:
    with open(path) as fh:
        return representation_from_json(json.load(fh))


def write_representation(rep: Representation, path) -> None:
    with open(path, "w") as fh:
        json.dump(representation_to_json(rep), fh, indent=1)
        fh.write("\n")


def _fmt_point(p):
    return [str(c) for c in p]


# ---------------------------------------------------------------------------
# audit

@dataclass
class AuditReport:
    q: int
    d: int
    status: str
    phases: dict = field(default_factory=dict)

    @property
    def witness_found(self) -> bool:
        return self.status in ("representation_invalid", "contradiction")

    @property
    def exit_code(self) -> int:
        return 2 if self.witness_found else 0

    def to_dict(self) -> dict:
        return {"q": self.q, "d": self.d, "status": self.status, "phases": self.phases}


def _perturb(xs, d, eps):
    return {p: tuple(c + eps / 2 ** (p * d + i) for i, c in enumerate(x)) for p, x in xs.items()}


def witness_points(rep: Representation, pl: Plane, max_halvings: int = 40):
    """Pick x_p inside the hulls of the lines through p, then shift them apart.

    Coordinate i of x_p moves by eps / 2^(p*d + i); eps is halved until the
    points are in general position and each stays inside its hulls. If the
    second condition is never met (a degenerate intersection), the first eps
    giving general position is used and the escaping points are listed.
    Returns ``(points, info)``; points is None if some x_p does not exist.
    """
    d = rep.d
    base = {}
    for pt in pl.points:
        x = central_point([rep.sets[l] for l in pl.point_to_lines[pt.id]])
        if x is None:
            return None, {"status": "missing", "point": pt.id}
        base[pt.id] = x
    fallback = None
    eps = Fraction(1, 8)
    for _ in range(max_halvings):
        moved = _perturb(base, d, eps)
        ids = sorted(moved)
        if general_position([moved[p] for p in ids], d)[0]:
            escaped = [p for p in ids
                       if not all(point_in_hull(moved[p], rep.sets[l]) for l in pl.point_to_lines[p])]
            if not escaped:
                return moved, {"status": "ok", "epsilon": str(eps), "escaped": []}
            if fallback is None:
                fallback = (moved, eps, escaped)
        eps /= 2
    if fallback is None:
        return None, {"status": "general_position_failed"}
    moved, eps, escaped = fallback
    return moved, {"status": "escaped", "epsilon": str(eps), "escaped": escaped}


def _in_closed_simplex_barycentric(a, verts) -> bool:
    """Independent containment test: solve for barycentric coordinates."""
    d = len(a)
    if d == 1:
        lo, hi = min(v[0] for v in verts), max(v[0] for v in verts)
        return lo <= a[0] <= hi
    (x0, y0), (x1, y1), (x2, y2) = verts
    det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
    l1 = ((a[0] - x0) * (y2 - y0) - (x2 - x0) * (a[1] - y0)) / det
    l2 = ((x1 - x0) * (a[1] - y0) - (a[0] - x0) * (y1 - y0)) / det
    return l1 >= 0 and l2 >= 0 and 1 - l1 - l2 >= 0


def audit_representation(rep: Representation, pl: Plane, budget: int = 10_000_000,
                         force_selection: bool = False) -> AuditReport:
    """Run the non-representability pipeline against a candidate representation.

    1. nerve check; a mismatch is itself a witness that ``rep`` is invalid;
    2. witness points x_p, perturbed into general position;
    3. selection search for a and parts Z_i;
    4. parts P_i, missed line sets M_i, lines meeting every part, and the lines
       whose transversal hull contains a;
    5. the number of sets C_line containing a; more than q + 1 is a contradiction.

    ``force_selection`` runs phases 2-5 even after a nerve mismatch.
    """
    q, n, d = pl.q, pl.n, rep.d
    report = AuditReport(q, d, "nerve_match")
    match = nerve_of_representation(rep, pl)
    report.phases["nerve"] = match.to_dict()
    if not match.match:
        report.status = "representation_invalid"
        if not force_selection:
            return report
    if d > 2:
        report.phases["selection"] = {
            "status": "DimensionUnsupported",
            "reason": f"selection search supports d <= 2, representation has d = {d}"}
        return report

    xs, info = witness_points(rep, pl)
    report.phases["witness_points"] = dict(info)
    if xs is None:
        return report
    report.phases["witness_points"]["points"] = {str(p): _fmt_point(x) for p, x in sorted(xs.items())}

    sel = selection_search(xs, d, budget)
    report.phases["selection"] = {"status": "ok", **sel.to_dict()}

    a = sel.a
    part_info, covering = [], None
    for part in sel.parts:
        P = set(part)
        missed = [ln.id for ln in pl.lines if P.isdisjoint(ln.members)]
        part_info.append({"points": sorted(P), "missed_lines": missed,
                          "bound_holds": len(missed) ** 2 * len(P) ** 2 <= n ** 3})
        meets = {ln.id for ln in pl.lines if not P.isdisjoint(ln.members)}
        covering = meets if covering is None else covering & meets
    covering = sorted(covering)

    containing_transversal = {}
    for lid in covering:
        members = set(pl.lines[lid].members)
        choices = [sorted(members & set(part)) for part in sel.parts]
        for combo in itertools.product(*choices):
            hull = PolytopeV(tuple(xs[p] for p in combo))
            if point_in_hull(a, hull):
                if not _in_closed_simplex_barycentric(a, hull.vertices):
                    raise AssertionError(f"containment of a in line {lid} transversal not reproduced")
                containing_transversal[str(lid)] = list(combo)
                break
    report.phases["lines"] = {
        "parts": part_info,
        "lines_meeting_all_parts": covering,
        "majority": 2 * len(covering) >= n,
        "lines_with_transversal_containing_a": containing_transversal,
    }

    holders = [ln.id for ln in pl.lines if point_in_hull(a, rep.sets[ln.id])]
    count_phase = {"a": _fmt_point(a), "sets_containing_a": holders,
                   "count": len(holders), "limit": q + 1}
    if len(holders) > q + 1:
        count_phase["contradiction_witness"] = {"a": _fmt_point(a), "lines": holders}
        report.status = "contradiction"
    elif report.status != "representation_invalid":
        report.status = "no_contradiction"
    report.phases["count"] = count_phase
    return report
