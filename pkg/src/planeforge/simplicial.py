"""Finite simplicial complexes and elementary d-collapses.

Faces are sorted vertex tuples. A nonempty complex always contains the empty
face ``()``; a complex whose only face is ``()`` counts as empty (nothing left
to collapse).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import BudgetExceeded, FaceNotInComplex, IllegalStep, TooLarge
from .plane import Plane

MAX_FACES = 2 ** 24


def _face(vs) -> tuple[int, ...]:
    return tuple(sorted(set(vs)))


@dataclass(frozen=True)
class SimplicialComplex:
    faces: frozenset

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for f in self.faces for v in f}))

    @cached_property
    def maximal_faces(self) -> tuple[tuple[int, ...], ...]:
        covered = set()
        for f in self.faces:
            for i in range(len(f)):
                covered.add(f[:i] + f[i + 1:])
        return tuple(sorted(f for f in self.faces if f not in covered))

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.faces), default=0) - 1

    def is_empty(self) -> bool:
        return all(len(f) == 0 for f in self.faces)

    def f_vector(self) -> list[int]:
        """Face counts by size: index 0 is the empty face, index 1 vertices, ..."""
        counts = [0] * (self.dimension + 2)
        for f in self.faces:
            counts[len(f)] += 1
        return counts

    def is_closed(self) -> bool:
        return all(f[:i] + f[i + 1:] in self.faces for f in self.faces for i in range(len(f)))

    def __contains__(self, face) -> bool:
        return _face(face) in self.faces

    def __len__(self) -> int:
        return len(self.faces)


def from_maximal(maximal, max_faces: int = MAX_FACES) -> SimplicialComplex:
    """Downward closure of the given vertex sets (includes the empty face)."""
    tops = {_face(m) for m in maximal}
    # drop sets contained in others before closing
    tops = [t for t in tops if not any(t != u and set(t) <= set(u) for u in tops)]
    estimate = sum(2 ** len(t) for t in tops)
    if estimate > max_faces:
        raise TooLarge(f"closure would hold up to {estimate} faces (cap {max_faces})")
    faces = set()
    for t in tops:
        for r in range(len(t) + 1):
            faces.update(itertools.combinations(t, r))
    return SimplicialComplex(frozenset(faces))


def full_simplex(vertices) -> SimplicialComplex:
    return from_maximal([tuple(vertices)])


@dataclass(frozen=True)
class CollapseStep:
    sigma: tuple[int, ...]
    tau: tuple[int, ...]
    d: int = 2

    def to_dict(self) -> dict:
        return {"sigma": list(self.sigma), "tau": list(self.tau)}


@dataclass(frozen=True)
class CollapseCheck:
    """Outcome of testing sigma: ``tau`` when legal, otherwise the failed condition."""

    sigma: tuple[int, ...]
    tau: tuple[int, ...] | None
    condition: str | None = None
    reason: str | None = None

    @property
    def ok(self) -> bool:
        return self.tau is not None


def maximal_cofaces(K: SimplicialComplex, sigma) -> list[tuple[int, ...]]:
    s = set(sigma)
    return [m for m in K.maximal_faces if s <= set(m)]


def legal_collapse(K: SimplicialComplex, sigma, d: int) -> CollapseCheck:
    """Check conditions (i)-(iv) for collapsing ``sigma`` with parameter ``d``.

    (i) dim sigma <= d - 1; (ii)-(iv) there is exactly one inclusion-maximal
    face containing sigma. ``tau == sigma`` is allowed.
    """
    sigma = _face(sigma)
    if sigma not in K.faces:
        raise FaceNotInComplex(sigma)
    if len(sigma) - 1 > d - 1:
        return CollapseCheck(sigma, None, "i", f"dim {len(sigma) - 1} exceeds {d - 1}")
    tops = maximal_cofaces(K, sigma)
    if len(tops) != 1:
        return CollapseCheck(sigma, None, "iv",
                             f"{len(tops)} maximal faces contain {list(sigma)}")
    return CollapseCheck(sigma, tops[0])


def _interval(sigma, tau):
    free = [v for v in tau if v not in sigma]
    for r in range(len(free) + 1):
        for extra in itertools.combinations(free, r):
            yield _face(sigma + extra)


def apply_collapse(K: SimplicialComplex, sigma, tau, d: int | None = None) -> SimplicialComplex:
    """Remove the face interval [sigma, tau] after validating the step.

    With ``d=None`` only conditions (ii)-(iv) are enforced.
    """
    sigma, tau = _face(sigma), _face(tau)
    check = legal_collapse(K, sigma, d if d is not None else len(sigma))
    if not check.ok:
        raise IllegalStep(f"({check.condition}) {check.reason}")
    if check.tau != tau:
        raise IllegalStep(f"tau {list(tau)} is not the unique maximal face over {list(sigma)}")
    return SimplicialComplex(K.faces.difference(_interval(sigma, tau)))


def simplex_collapse_sequence(d: int) -> list[CollapseStep]:
    """Edge collapses of the d-simplex on vertices 1..d+1 in lexicographic order.

    The tau of each step is read off by replaying the sequence.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    K = full_simplex(range(1, d + 2))
    steps = []
    for edge in itertools.combinations(range(1, d + 2), 2):
        check = legal_collapse(K, edge, 2)
        if not check.ok:  # pragma: no cover - guarded by tests
            raise AssertionError(f"lexicographic step {edge} is illegal: {check.reason}")
        steps.append(CollapseStep(edge, check.tau))
        K = apply_collapse(K, edge, check.tau, 2)
    return steps


def vertex_removals(vertices) -> list[CollapseStep]:
    return [CollapseStep((v,), (v,)) for v in vertices]


def kq_complex(pl: Plane, max_faces: int = MAX_FACES) -> SimplicialComplex:
    """Complex on the plane's points whose faces are the subsets of lines."""
    return from_maximal([ln.members for ln in pl.lines], max_faces)


def kq_collapse_sequence(pl: Plane) -> list[CollapseStep]:
    """Per line, the simplex edge sequence relabelled onto the line; then every vertex.

    Any face with two or more vertices sits inside a single line, so each
    per-line step stays legal in the whole complex.
    """
    template = simplex_collapse_sequence(pl.q)
    steps = []
    for ln in pl.lines:
        relabel = dict(zip(range(1, pl.q + 2), sorted(ln.members)))
        for st in template:
            steps.append(CollapseStep(_face(relabel[v] for v in st.sigma),
                                      _face(relabel[v] for v in st.tau)))
    steps += vertex_removals(range(pl.n))
    return steps


@dataclass
class VerifyResult:
    ok: bool
    trace: list = field(default_factory=list)
    failed_index: int | None = None
    condition: str | None = None
    reason: str | None = None
    final_faces: int = 0

    def to_dict(self) -> dict:
        return {"ok": self.ok, "steps_applied": len(self.trace),
                "failed_index": self.failed_index, "condition": self.condition,
                "reason": self.reason, "final_faces": self.final_faces}


def verify_sequence(K: SimplicialComplex, steps, d: int) -> VerifyResult:
    """Replay ``steps`` from K; success iff every step is legal and K ends empty.

    The trace holds the number of faces removed by each step.
    """
    trace = []
    for idx, st in enumerate(steps):
        sigma, tau = _face(st.sigma), _face(st.tau)
        if sigma not in K.faces:
            return VerifyResult(False, trace, idx, "membership",
                                f"sigma {list(sigma)} is not a face", len(K))
        check = legal_collapse(K, sigma, d)
        if not check.ok:
            return VerifyResult(False, trace, idx, check.condition, check.reason, len(K))
        if tau != check.tau:
            if not set(sigma) <= set(tau):
                cond, why = "iii", f"sigma {list(sigma)} not inside tau {list(tau)}"
            elif tau not in K.maximal_faces:
                cond, why = "ii", f"tau {list(tau)} is not an inclusion-maximal face"
            else:  # pragma: no cover - unique maximal coface makes this unreachable
                cond, why = "iv", f"tau {list(tau)} is not the unique maximal coface"
            return VerifyResult(False, trace, idx, cond, why, len(K))
        before = len(K)
        K = SimplicialComplex(K.faces.difference(_interval(sigma, tau)))
        trace.append(before - len(K))
    if not K.is_empty():
        return VerifyResult(False, trace, None, "incomplete",
                            f"{len(K) - 1} nonempty faces remain", len(K))
    return VerifyResult(True, trace, final_faces=len(K))


@dataclass
class SearchResult:
    found: bool
    steps: list
    conclusive: bool
    nodes: int
    message: str = ""


def legal_steps(K, d):
    for sigma in sorted(K.faces):
        if len(sigma) - 1 > d - 1:
            continue
        check = legal_collapse(K, sigma, d)
        if check.ok:
            yield CollapseStep(sigma, check.tau, d)


def search_d_collapsible(K: SimplicialComplex, d: int, strategy: str = "greedy",
                         limit: int = 100_000) -> SearchResult:
    """Look for a d-collapsing sequence of K.

    ``greedy`` always takes the lexicographically smallest legal sigma; a dead
    end there says nothing about K. ``backtracking`` runs a depth-first search
    over all legal choices (memoizing visited complexes) and raises
    BudgetExceeded after ``limit`` nodes.
    """
    if strategy == "greedy":
        steps, nodes = [], 0
        while not K.is_empty():
            nodes += 1
            st = next(legal_steps(K, d), None)
            if st is None:
                return SearchResult(False, steps, False, nodes,
                                    "greedy reached a complex with no legal step (inconclusive)")
            steps.append(st)
            K = SimplicialComplex(K.faces.difference(_interval(st.sigma, st.tau)))
        return SearchResult(True, steps, True, nodes)

    if strategy != "backtracking":
        raise ValueError(f"unknown strategy {strategy!r}")

    seen = set()
    nodes = 0

    def dfs(C, path):
        nonlocal nodes
        if C.is_empty():
            return path
        if C.faces in seen:
            return None
        seen.add(C.faces)
        nodes += 1
        if nodes > limit:
            raise BudgetExceeded(f"backtracking exceeded {limit} nodes")
        for st in legal_steps(C, d):
            nxt = SimplicialComplex(C.faces.difference(_interval(st.sigma, st.tau)))
            found = dfs(nxt, path + [st])
            if found is not None:
                return found
        return None

    found = dfs(K, [])
    if found is None:
        return SearchResult(False, [], True, nodes, "no sequence found within budget")
    return SearchResult(True, found, True, nodes)


def steps_to_json(steps) -> list[dict]:
    return [st.to_dict() for st in steps]


def steps_from_json(data, d: int = 2) -> list[CollapseStep]:
    return [CollapseStep(_face(item["sigma"]), _face(item["tau"]), d) for item in data]


def complex_text(K: SimplicialComplex) -> str:
    return "".join(" ".join(map(str, f)) + "\n" for f in K.maximal_faces if f)


def parse_complex(text: str) -> SimplicialComplex:
    tops = [tuple(int(t) for t in row.split()) for row in text.splitlines() if row.strip()]
    return from_maximal(tops)
