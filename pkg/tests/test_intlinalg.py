import itertools
import random
from fractions import Fraction

from apexp.intlinalg import hnf_rows, rational_rank, solve_rational


def lattice_points(rows, bound=4):
    """All integer combinations of the rows with |coeff| <= bound."""
    pts = set()
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=len(rows)):
        v = tuple(sum(c * r[j] for c, r in zip(coeffs, rows))
                  for j in range(len(rows[0])))
        pts.add(v)
    return pts


def test_hnf_known_cases():
    assert hnf_rows([[2, 0], [0, 3]]) == [[2, 0], [0, 3]]
    assert hnf_rows([[2], [3]]) == [[1]]
    assert hnf_rows([[4], [6]]) == [[2]]
    assert hnf_rows([[0, 0]]) == []
    # above-pivot entries reduced into [0, pivot)
    assert hnf_rows([[1, 5], [0, 3]]) == [[1, 2], [0, 3]]


def test_hnf_is_unique_under_row_shuffles():
    rng = random.Random(3)
    for _ in range(30):
        rows = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)]
        ref = hnf_rows(rows)
        shuffled = rows[:]
        rng.shuffle(shuffled)
        assert hnf_rows(shuffled) == ref


def test_hnf_generates_same_lattice():
    rng = random.Random(11)
    for _ in range(15):
        rows = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        basis = hnf_rows(rows)
        if not basis:
            assert all(all(v == 0 for v in r) for r in rows)
            continue
        # every generator-ball point solves integrally over the basis
        for p in lattice_points(rows, 3):
            sol = solve_rational(basis, list(p))
            assert sol is not None
            assert all(c.denominator == 1 for c in sol)
        # and every basis row is an integer combination of the originals
        for b in basis:
            sol = solve_rational(hnf_rows(rows), b)
            assert sol is not None


def test_solve_rational():
    rows = [[Fraction(2, 3), Fraction(0)], [Fraction(1, 2), Fraction(1)]]
    target = [Fraction(2, 3) * 2 + Fraction(1, 2), Fraction(1)]
    sol = solve_rational(rows, target)
    assert sol == [Fraction(2), Fraction(1)]


def test_solve_rational_inconsistent():
    assert solve_rational([[1, 0]], [0, 1]) is None
    assert solve_rational([], [0, 0]) == []
    assert solve_rational([], [1, 0]) is None


def test_solve_rational_dependent_rows():
    rows = [[1, 1], [2, 2]]
    sol = solve_rational(rows, [3, 3])
    assert sol is not None
    assert sum(Fraction(c) * Fraction(r[0]) for c, r in zip(sol, rows)) == 3


def test_rational_rank():
    assert rational_rank([[1, 0], [0, 1]]) == 2
    assert rational_rank([[1, 2], [2, 4]]) == 1
    assert rational_rank([[0, 0]]) == 0
    assert rational_rank([[Fraction(1, 2), Fraction(1, 3)],
                          [Fraction(3, 2), Fraction(2)]]) == 2
