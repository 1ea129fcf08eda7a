"""Nerves of finite set families."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import LabelMismatch, TooLarge
from .plane import Plane, parse_incidence
from .simplicial import MAX_FACES, SimplicialComplex, from_maximal

MAX_EXHAUSTIVE_MEMBERS = 20


@dataclass(frozen=True)
class SetFamily:
    """Ordered family of named subsets; nerve vertex i is members[i]."""

    ground: frozenset
    members: tuple  # of (name, frozenset)

    def __post_init__(self):
        for name, s in self.members:
            if not s:
                raise ValueError(f"member {name!r} is empty")
            if not s <= self.ground:
                raise ValueError(f"member {name!r} leaves the ground set")

    @classmethod
    def from_sets(cls, sets, names=None) -> SetFamily:
        sets = [frozenset(s) for s in sets]
        names = list(range(len(sets))) if names is None else list(names)
        ground = frozenset().union(*sets) if sets else frozenset()
        return cls(ground, tuple(zip(names, sets)))

    def sets(self) -> list[frozenset]:
        return [s for _, s in self.members]


def nerve(fam: SetFamily, max_faces: int = MAX_FACES) -> SimplicialComplex:
    """Union over ground elements x of the full simplex on {i : x in S_i}."""
    tops = set()
    for x in sorted(fam.ground):
        tops.add(tuple(i for i, s in enumerate(fam.sets()) if x in s))
    tops.discard(())
    return from_maximal(tops, max_faces)


def nerve_exhaustive(fam: SetFamily) -> SimplicialComplex:
    """Nerve by testing every index subset for a common element."""
    sets = fam.sets()
    if len(sets) > MAX_EXHAUSTIVE_MEMBERS:
        raise TooLarge(f"{len(sets)} members exceed the exhaustive cap {MAX_EXHAUSTIVE_MEMBERS}")
    faces = {()}
    for r in range(1, len(sets) + 1):
        for combo in itertools.combinations(range(len(sets)), r):
            if frozenset.intersection(*(sets[i] for i in combo)):
                faces.add(combo)
    return SimplicialComplex(frozenset(faces))


def simplex_representation_family(pl: Plane) -> SetFamily:
    """Lines as vertex sets of a big simplex: faces of a simplex meet exactly in
    the face spanned by their shared vertices, so this family has the same
    nerve as the hulls conv{p : p on line}."""
    return SetFamily(frozenset(range(pl.n)),
                     tuple((ln.id, frozenset(ln.members)) for ln in pl.lines))


def nerve_equals(k1: SimplicialComplex, k2: SimplicialComplex, relabel=None) -> bool:
    """Face-set equality after mapping k1's vertices through ``relabel``.

    ``relabel`` defaults to the identity and must be a bijection from k1's
    vertices onto k2's vertices.
    """
    v1, v2 = set(k1.vertices), set(k2.vertices)
    if relabel is None:
        relabel = {v: v for v in v1}
    if not v1 <= set(relabel):
        raise LabelMismatch(f"no label for vertices {sorted(v1 - set(relabel))}")
    image = {relabel[v] for v in v1}
    if len(image) != len(v1):
        raise LabelMismatch("relabelling is not injective on the vertex set")
    if image != v2:
        return False
    mapped = frozenset(tuple(sorted(relabel[v] for v in f)) for f in k1.faces)
    return mapped == k2.faces


def family_text(fam: SetFamily) -> str:
    """Same layout as a plane incidence file: a header ``<tag> <count>`` then
    one sorted member per line. The tag is the ground-set size here."""
    rows = [f"{len(fam.ground)} {len(fam.members)}"]
    rows += [" ".join(str(x) for x in sorted(s)) for _, s in fam.members]
    return "\n".join(rows) + "\n"


def parse_family(text: str) -> SetFamily:
    """Read a family file; plane incidence files are accepted as they are."""
    pl = parse_incidence(text)
    return SetFamily.from_sets([ln.members for ln in pl.lines])


def read_family(path) -> SetFamily:
    with open(path) as fh:
        return parse_family(fh.read())
