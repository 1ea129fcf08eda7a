import itertools
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (grid_common_point, in_triangle_barycentric, random_instances,
                     selection_oracle_max)
from planeforge.errors import BudgetExceeded, DimensionMismatch, DimensionUnsupported
from planeforge.geometry import (PolytopeV, Representation, audit_representation, central_point,
                                 general_position, hull_representation, hulls_intersect,
                                 nerve_of_representation, orientation, perturbed_grid,
                                 point_in_hull, radial_partitions, random_hull_representation,
                                 read_representation, representation_from_json,
                                 representation_to_json, selection_candidates, selection_search,
                                 simplex_representation, write_representation)


def P(*verts):
    return PolytopeV(tuple(verts))


# --- orientation and general position --------------------------------------

def test_orientation_examples():
    assert orientation([(0, 0), (1, 0), (0, 1)]) == 1
    assert orientation([(0, 0), (1, 1), (2, 2)]) == 0
    assert orientation([(1, 0), (0, 0), (0, 1)]) == -1
    assert orientation([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]) == 1
    assert orientation([(Fraction(1, 3),), (Fraction(1, 2),)]) == 1
    with pytest.raises(DimensionMismatch):
        orientation([(0, 0), (1, 0)])


coords = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(coords, coords, coords), min_size=4, max_size=4),
       st.permutations(range(4)))
def test_orientation_follows_permutation_parity(pts, perm):
    inversions = sum(1 for i, j in itertools.combinations(range(4), 2) if perm[i] > perm[j])
    parity = -1 if inversions % 2 else 1
    assert orientation([pts[i] for i in perm]) == parity * orientation(pts)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(coords, coords), min_size=3, max_size=3))
def test_orientation_matches_cross_product(pts):
    (ax, ay), (bx, by), (cx, cy) = pts
    cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    assert orientation(pts) == (cross > 0) - (cross < 0)


def test_general_position_examples():
    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    for tri in itertools.combinations(square, 3):
        assert orientation(tri) != 0
    assert general_position(square, 2) == (True, None)
    ok, witness = general_position([(0, 0), (1, 1), (2, 2)], 2)
    assert not ok and witness == (0, 1, 2)
    assert general_position([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)[0]


# --- LP hull intersection ----------------------------------------------------

def test_hull_intersection_examples():
    assert hulls_intersect([P((0, 0), (2, 0), (0, 2)), P((1, 1), (3, 1), (1, 3))]) == (1, 1)
    assert hulls_intersect([P((0, 0), (1, 0)), P((2, 0), (3, 0))]) is None
    with pytest.raises(DimensionMismatch):
        hulls_intersect([P((0, 0)), P((0, 0, 0))])


def test_pairwise_but_not_triple():
    # the three sides of the triangle (0,0),(4,0),(2,4), each thickened outward
    a = [(0, 0), (4, 0), (2, -1)]
    b = [(4, 0), (2, 4), (4, 3)]
    c = [(2, 4), (0, 0), (0, 3)]
    shift = lambda poly: [(x + 1, y + 1) for x, y in poly]  # into the oracle's box
    polys = [shift(a), shift(b), shift(c)]
    for pair in itertools.combinations(polys, 2):
        assert hulls_intersect([P(*p) for p in pair]) is not None
        assert grid_common_point(pair)[0] is not None
    assert hulls_intersect([P(*p) for p in polys]) is None
    assert grid_common_point(polys)[0] is None


def test_agrees_with_grid_oracle_on_random_instances():
    for polys in random_instances(seed=99, count=25):
        hull_pt = hulls_intersect([P(*p) for p in polys])
        grid_pt, _ = grid_common_point(polys)
        assert (hull_pt is None) == (grid_pt is None), polys
        if hull_pt is not None:
            assert all(point_in_hull(hull_pt, P(*p)) for p in polys)


def test_central_point_is_inside():
    polys = [P((0, 0), (6, 0), (0, 6)), P((1, 1), (5, 1), (1, 5))]
    c = central_point(polys)
    assert all(point_in_hull(c, p) for p in polys)
    assert central_point([P((0, 0), (1, 0)), P((2, 0), (3, 0))]) is None


# --- nerve of a representation -------------------------------------------------

def test_simplex_representation_matches(fano):
    rep = simplex_representation(fano)
    assert rep.d == 6
    report = nerve_of_representation(rep, fano)
    assert report.match and report.k_max == 4
    assert report.checks == {1: 7, 2: 21, 3: 35, 4: 35}


def test_translated_set_breaks_pairwise(fano):
    rep = simplex_representation(fano)
    far = PolytopeV(tuple(tuple(c + 100 for c in v) for v in rep.sets[3].vertices))
    report = nerve_of_representation(Representation(6, {**rep.sets, 3: far}), fano)
    assert not report.match and report.witness["k"] == 2
    assert 3 in report.witness["lines"]


def test_shared_point_breaks_first_non_concurrent_triple(fano):
    sets = {ln.id: P((0, 0), (1, 0), (0, 1)) for ln in fano.lines}
    report = nerve_of_representation(Representation(2, sets), fano)
    assert not report.match
    w = report.witness
    lines = [fano.line_sets()[i] for i in w["lines"]]
    assert w["k"] == 3 and not frozenset.intersection(*lines) and w["hulls_intersect"]


@pytest.mark.parametrize("seed", range(8))
def test_no_interval_representation_of_fano(fano, seed):
    rng = random.Random(seed)
    sets = {}
    for ln in fano.lines:
        lo = rng.randint(0, 20)
        sets[ln.id] = P((lo,), (lo + rng.randint(0, 10),))
    report = nerve_of_representation(Representation(1, sets), fano)
    assert not report.match
    w = report.witness
    truth = bool(frozenset.intersection(*(fano.line_sets()[i] for i in w["lines"])))
    assert truth != w["hulls_intersect"]


def test_hull_of_points_on_a_line_fails(fano):
    rep = random_hull_representation(fano, 1, seed=4)
    assert not nerve_of_representation(rep, fano).match


# --- selection search ------------------------------------------------------------

def test_selection_single_triangle():
    res = selection_search([(0, 0), (3, 0), (0, 3)], 2)
    assert res.a == (1, 1) and res.hit_fraction == 1
    assert sorted(len(p) for p in res.parts) == [1, 1, 1]


def test_selection_simplex_in_line():
    res = selection_search([(0,), (5,)], 1)
    assert res.hit_fraction == 1 and 0 < res.a[0] < 5


def test_selection_matches_oracle_on_small_grid():
    pts = perturbed_grid(3, 3, seed=5)
    res = selection_search(pts, 2)
    cands = selection_candidates(pts, 2)
    best = selection_oracle_max(pts, cands, lambda a: radial_partitions(pts, a, 2))
    assert res.hit_fraction == best > 0
    hits = sum(in_triangle_barycentric(res.a, [pts[i] for i in t])
               for t in itertools.product(*res.parts))
    assert Fraction(hits, res.transversals) == res.hit_fraction


def test_selection_parts_are_disjoint_and_balanced():
    pts = perturbed_grid(3, 4, seed=2)
    res = selection_search(pts, 2)
    flat = [i for p in res.parts for i in p]
    assert sorted(flat) == list(range(12))
    assert [len(p) for p in res.parts] == [4, 4, 4]


def test_selection_errors():
    with pytest.raises(DimensionUnsupported):
        selection_search([(0, 0, 0)] * 4, 3)
    with pytest.raises(ValueError):
        selection_search([(0, 0), (1, 1), (2, 2)], 2)
    with pytest.raises(BudgetExceeded):
        selection_search(perturbed_grid(3, 3, seed=1), 2, budget=10)


def test_perturbed_grid_is_reproducible():
    assert perturbed_grid(4, 3, seed=8) == perturbed_grid(4, 3, seed=8)
    assert general_position(perturbed_grid(4, 3, seed=8), 2)[0]


# --- audit -------------------------------------------------------------------

def test_audit_simplex_representation(fano):
    report = audit_representation(simplex_representation(fano), fano)
    assert report.status == "nerve_match" and report.exit_code == 0
    assert report.phases["nerve"]["match"]
    assert report.phases["selection"]["status"] == "DimensionUnsupported"


def test_audit_fabricated_planar_representation(fano):
    rep = random_hull_representation(fano, 2, seed=3)
    report = audit_representation(rep, fano)
    assert report.status == "representation_invalid" and report.exit_code == 2
    w = report.phases["nerve"]["witness"]
    lines = [fano.line_sets()[i] for i in w["lines"]]
    assert not frozenset.intersection(*lines)
    common = tuple(Fraction(c) for c in w["common_point"])
    assert all(point_in_hull(common, rep.sets[i]) for i in w["lines"])
    assert "selection" not in report.phases


def test_audit_full_pipeline_when_forced(fano):
    rep = random_hull_representation(fano, 2, seed=3)
    report = audit_representation(rep, fano, force_selection=True)
    ph = report.phases
    xs = {int(p): tuple(Fraction(c) for c in x) for p, x in ph["witness_points"]["points"].items()}
    assert general_position([xs[p] for p in sorted(xs)], 2)[0]
    a = tuple(Fraction(c) for c in ph["count"]["a"])
    # every counted line's transversal hull contains a, re-checked here
    for lid, combo in ph["lines"]["lines_with_transversal_containing_a"].items():
        assert in_triangle_barycentric(a, [xs[p] for p in combo])
        assert all(set(combo) & set(part["points"]) for part in ph["lines"]["parts"])
    holders = [ln.id for ln in fano.lines if point_in_hull(a, rep.sets[ln.id])]
    assert ph["count"]["sets_containing_a"] == holders
    n = fano.n
    for part in ph["lines"]["parts"]:
        assert part["bound_holds"]
        assert all(not set(fano.lines[l].members) & set(part["points"])
                   for l in part["missed_lines"])


def test_audit_finds_contradiction(fano):
    # hulls of points in convex position: a central point sits in many triangles
    import math
    pts = {}
    for p in range(7):
        ang = 2 * math.pi * p / 7
        pts[p] = (Fraction(round(1000 * math.cos(ang))), Fraction(round(1000 * math.sin(ang))))
    rep = hull_representation(fano, pts)
    report = audit_representation(rep, fano, force_selection=True)
    count = report.phases["count"]
    if count["count"] > 3:
        assert report.status == "contradiction"
        assert count["contradiction_witness"]["lines"] == count["sets_containing_a"]
    a = tuple(Fraction(c) for c in count["a"])
    assert count["count"] == sum(point_in_hull(a, rep.sets[l]) for l in range(7))


def test_audit_rejects_large_dimension_selection_only(fano):
    rep = simplex_representation(fano)
    report = audit_representation(rep, fano, force_selection=True)
    assert report.phases["selection"]["status"] == "DimensionUnsupported"


def test_representation_json_round_trip(fano, tmp_path):
    rep = random_hull_representation(fano, 2, seed=1)
    data = representation_to_json(rep)
    assert data["sets"]["0"][0] == [[c.numerator, c.denominator] for c in rep.sets[0].vertices[0]]
    back = representation_from_json(json.loads(json.dumps(data)))
    assert back == rep
    path = tmp_path / "rep.json"
    write_representation(rep, path)
    assert read_representation(path) == rep
