import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from planeforge.lp import feasible_point, minimize


def test_simple_feasible():
    x = feasible_point([[1, 1]], [1])
    assert sum(x) == 1 and all(v >= 0 for v in x)


def test_infeasible():
    assert feasible_point([[1, 1]], [-1]) is None
    assert feasible_point([[1, 0], [1, 0]], [1, 2]) is None


def test_negative_rhs_and_redundant_rows():
    A = [[1, -1], [2, -2], [-1, 1]]
    b = [-3, -6, 3]
    x = feasible_point(A, b)
    assert x[0] - x[1] == -3


def test_beale_cycling_example_terminates():
    # classic instance on which the textbook largest-coefficient rule cycles
    c = [0, 0, 0, Fraction(-3, 4), 20, Fraction(-1, 2), 6]
    A = [[1, 0, 0, Fraction(1, 4), -8, -1, 9],
         [0, 1, 0, Fraction(1, 2), -12, Fraction(-1, 2), 3],
         [0, 0, 1, 0, 0, 1, 0]]
    b = [0, 0, 1]
    status, x = minimize(c, A, b)
    assert status == "optimal"
    assert sum(ci * xi for ci, xi in zip(c, x)) == Fraction(-5, 4)


def test_unbounded():
    status, _ = minimize([-1, 0], [[1, -1]], [0])
    assert status == "unbounded"


def test_random_lps_agree_with_scipy():
    rng = random.Random(3)
    for _ in range(60):
        m, n = rng.randint(1, 4), rng.randint(2, 6)
        A = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        b = [rng.randint(-4, 4) for _ in range(m)]
        c = [rng.randint(-3, 3) for _ in range(n)]
        # bound the region so scipy and we agree on boundedness
        A.append([1] * n)
        b.append(rng.randint(1, 6))
        status, x = minimize(c, A, b)
        ref = linprog(c, A_eq=np.array(A, float), b_eq=np.array(b, float), bounds=(0, None),
                      method="highs")
        if ref.status == 2:
            assert status == "infeasible"
            continue
        assert status == "optimal"
        assert all(v >= 0 for v in x)
        assert all(sum(a * v for a, v in zip(row, x)) == rhs for row, rhs in zip(A, b))
        assert float(sum(ci * xi for ci, xi in zip(c, x))) == pytest.approx(ref.fun, abs=1e-7)
