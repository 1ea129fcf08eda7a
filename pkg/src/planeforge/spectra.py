"""Exact expansion certificates for projective-plane incidence structures.

The eigenvalues of M M^T are never computed numerically. Instead the identity
``M M^T = q I + J`` is checked entrywise in integers; since J (all ones) has
spectrum {n, 0^(n-1)} and ``q + n = (q + 1)^2``, the spectrum of M M^T is
``(q+1)^2`` once and ``q`` with multiplicity n - 1.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CertificateFailed, EmptySubset, TooLargeForExhaustive
from .plane import Plane

MAX_EXHAUSTIVE_POINTS = 24
SAMPLE_CHUNK = 10_000
_ENUM_CHUNK = 1 << 18


def worker_count() -> int:
    """Worker cap taken from PLANEFORGE_THREADS (default: CPU count)."""
    raw = os.environ.get("PLANEFORGE_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


@dataclass(frozen=True)
class IncidenceMatrix:
    n: int
    entries: np.ndarray  # rows are points, columns are lines


def incidence_matrix(pl: Plane) -> IncidenceMatrix:
    m = np.zeros((pl.n, len(pl.lines)), dtype=np.int64)
    for ln in pl.lines:
        m[list(ln.members), ln.id] = 1
    return IncidenceMatrix(pl.n, m)


def gram(pl: Plane) -> np.ndarray:
    """M M^T in exact int64 arithmetic; entry (p, p') counts lines through both points."""
    m = incidence_matrix(pl).entries
    return m @ m.T


@dataclass(frozen=True)
class SpectralCertificate:
    q: int
    n: int
    lambda_1: int
    lambda_1_multiplicity: int
    lambda_rest: int
    lambda_rest_multiplicity: int

    def to_dict(self) -> dict:
        return {
            "q": self.q, "n": self.n,
            "identity": "MM^T = qI + J",
            "lambda_1": self.lambda_1,
            "lambda_1_multiplicity": self.lambda_1_multiplicity,
            "lambda_rest": self.lambda_rest,
            "lambda_rest_multiplicity": self.lambda_rest_multiplicity,
        }


def gram_certificate(pl: Plane) -> SpectralCertificate:
    q, n = pl.q, pl.n
    g = gram(pl)
    expected = np.full((n, n), 1, dtype=np.int64) + q * np.eye(n, dtype=np.int64)
    if g.shape != expected.shape:
        raise CertificateFailed(-1, -1, g.shape, expected.shape)
    bad = np.argwhere(g != expected)
    if len(bad):
        r, c = (int(v) for v in bad[0])
        raise CertificateFailed(r, c, int(g[r, c]), int(expected[r, c]))
    if q + n != (q + 1) ** 2:
        raise CertificateFailed(-1, -1, q + n, (q + 1) ** 2)
    return SpectralCertificate(q, n, (q + 1) ** 2, 1, q, n - 1)


def tanner_lower_bound(q: int, n: int, a: int) -> Fraction:
    """Tanner's neighbourhood bound with lambda_1 = (q+1)^2 and lambda_2 = q."""
    if not 1 <= a <= n:
        raise ValueError(f"subset size {a} outside 1..{n}")
    top = (q + 1) ** 2
    return Fraction(top * a) / (Fraction((top - q) * a, n) + q)


@dataclass
class ExpansionReport:
    subset_size: int
    missed: int
    neighborhood: int
    bound_holds: bool
    tanner_lower_bound: Fraction
    tanner_holds: bool
    slack: int  # n^3 - missed^2 |A|^2

    @property
    def ok(self) -> bool:
        return self.bound_holds and self.tanner_holds


def missed_lines(pl: Plane, subset) -> ExpansionReport:
    A = set(subset)
    if not A:
        raise EmptySubset("the subset A must be nonempty")
    n = pl.n
    missed = sum(1 for ln in pl.lines if A.isdisjoint(ln.members))
    nbhd = len(pl.lines) - missed
    a = len(A)
    slack = n ** 3 - missed ** 2 * a ** 2
    tanner = tanner_lower_bound(pl.q, n, a)
    return ExpansionReport(a, missed, nbhd, slack >= 0, tanner, nbhd >= tanner, slack)


@dataclass
class AuditSummary:
    q: int
    n: int
    mode: str
    seed: int | None
    subsets_checked: int
    violations: list = field(default_factory=list)
    worst_slack_numerator: int | None = None
    max_missed_by_size: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"q": self.q, "n": self.n, "mode": self.mode}
        if self.seed is not None:
            out["seed"] = self.seed
        out["subsets_checked"] = self.subsets_checked
        out["violations"] = self.violations
        out["worst_slack_numerator"] = self.worst_slack_numerator
        out["max_missed_by_size"] = {str(k): v for k, v in sorted(self.max_missed_by_size.items())}
        return out


def _popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x).astype(np.int64)


def _tanner_table(q, n):
    """Per subset size a: (numerator, denominator) of the Tanner bound."""
    num = np.zeros(n + 1, dtype=object)
    den = np.ones(n + 1, dtype=object)
    for a in range(1, n + 1):
        t = tanner_lower_bound(q, n, a)
        num[a], den[a] = t.numerator, t.denominator
    return num, den


def _evaluate(q, n, sizes, missed, tanner, max_violations):
    """Reduce one block of (size, missed) pairs to (worst_slack, violations, per-size max)."""
    slack = n ** 3 - (missed ** 2) * (sizes ** 2)
    nbhd = n - missed
    t_num, t_den = tanner
    # exact rational compare: nbhd * den >= num, done in Python ints per distinct size
    tanner_bad = np.zeros(len(sizes), dtype=bool)
    for a in np.unique(sizes):
        mask = sizes == a
        tanner_bad[mask] = nbhd[mask] * int(t_den[a]) < int(t_num[a])
    bad = np.flatnonzero((slack < 0) | tanner_bad)[:max_violations]
    per_size = {}
    for a in np.unique(sizes):
        per_size[int(a)] = int(missed[sizes == a].max())
    return int(slack.min()), bad, tanner_bad, slack, per_size


def _line_masks(pl):
    return np.array([sum(1 << p for p in ln.members) for ln in pl.lines], dtype=np.int64)


def _exhaustive(pl, max_violations):
    n = pl.n
    if n > MAX_EXHAUSTIVE_POINTS:
        raise TooLargeForExhaustive(f"2^{n} subsets exceed the 2^{MAX_EXHAUSTIVE_POINTS} cap")
    masks = _line_masks(pl)
    tanner = _tanner_table(pl.q, n)
    total = (1 << n) - 1
    worst, violations, per_size = None, [], {}
    for start in range(1, total + 1, _ENUM_CHUNK):
        subsets = np.arange(start, min(start + _ENUM_CHUNK, total + 1), dtype=np.int64)
        sizes = _popcount(subsets)
        missed = np.zeros(len(subsets), dtype=np.int64)
        for lm in masks:
            missed += (subsets & lm) == 0
        w, bad, tanner_bad, slack, ps = _evaluate(pl.q, n, sizes, missed, tanner, max_violations)
        worst = w if worst is None else min(worst, w)
        for a, m in ps.items():
            per_size[a] = max(per_size.get(a, 0), m)
        for i in bad:
            if len(violations) >= max_violations:
                break
            A = [p for p in range(n) if (int(subsets[i]) >> p) & 1]
            violations.append(_violation(A, int(missed[i]), int(slack[i]), bool(tanner_bad[i])))
    return total, worst, violations, per_size


def _violation(A, missed, slack, tanner_bad):
    return {"subset": A, "missed": missed, "slack": slack,
            "kind": "tanner" if tanner_bad and slack >= 0 else "expansion"}


def _sample_chunk(incidence, child_seed, count):
    rng = np.random.Generator(np.random.PCG64(child_seed))
    n = incidence.shape[0]
    picks = rng.integers(0, 2, size=(count, n), dtype=np.int64)
    # uniform over nonempty subsets: redraw empty rows
    empty = ~picks.any(axis=1)
    while empty.any():
        picks[empty] = rng.integers(0, 2, size=(int(empty.sum()), n), dtype=np.int64)
        empty = ~picks.any(axis=1)
    hits = picks @ incidence
    missed = (hits == 0).sum(axis=1).astype(np.int64)
    sizes = picks.sum(axis=1).astype(np.int64)
    return picks, sizes, missed


def _sampled(pl, count, seed, max_violations):
    n = pl.n
    incidence = incidence_matrix(pl).entries
    tanner = _tanner_table(pl.q, n)
    n_chunks = -(-count // SAMPLE_CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    sizes_per_chunk = [min(SAMPLE_CHUNK, count - i * SAMPLE_CHUNK) for i in range(n_chunks)]

    def run(i):
        picks, sizes, missed = _sample_chunk(incidence, children[i], sizes_per_chunk[i])
        return picks, sizes, missed, _evaluate(pl.q, n, sizes, missed, tanner, max_violations)

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        results = list(pool.map(run, range(n_chunks)))  # map() keeps chunk order

    worst, violations, per_size = None, [], {}
    for picks, sizes, missed, (w, bad, tanner_bad, slack, ps) in results:
        worst = w if worst is None else min(worst, w)
        for a, m in ps.items():
            per_size[a] = max(per_size.get(a, 0), m)
        for i in bad:
            if len(violations) >= max_violations:
                break
            A = [int(p) for p in np.flatnonzero(picks[i])]
            violations.append(_violation(A, int(missed[i]), int(slack[i]), bool(tanner_bad[i])))
    return count, worst, violations, per_size


def expansion_audit(pl: Plane, mode: str = "exhaustive", count: int | None = None,
                    seed: int | None = None, max_violations: int = 100) -> AuditSummary:
    """Check the missed-lines bound and the Tanner bound over many subsets A.

    ``exhaustive`` enumerates every nonempty A (only for n <= 24). ``sampled``
    draws ``count`` uniform nonempty subsets; chunk k uses the k-th child of
    ``SeedSequence(seed)``, so results do not depend on thread scheduling.
    """
    if mode == "exhaustive":
        checked, worst, violations, per_size = _exhaustive(pl, max_violations)
        seed = None
    elif mode == "sampled":
        if count is None or count < 1:
            raise ValueError("sampled mode needs a positive count")
        if seed is None:
            raise ValueError("sampled mode needs an explicit seed")
        checked, worst, violations, per_size = _sampled(pl, count, seed, max_violations)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return AuditSummary(pl.q, pl.n, mode, seed, checked, violations, worst, per_size)
