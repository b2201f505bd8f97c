from fractions import Fraction as F

from hkcert.lp import linprog_exact


def test_simple_optimum():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    res = linprog_exact([-1, -1], [[1, 2], [3, 1]], [4, 6])
    assert res.success
    assert res.x == (F(8, 5), F(6, 5))
    assert res.fun == F(-14, 5)


def test_equality_only():
    res = linprog_exact([1, 1], A_eq=[[1, -1]], b_eq=[2])
    assert res.success and res.x == (2, 0)


def test_infeasible_and_unbounded():
    assert linprog_exact([0], A_eq=[[1]], b_eq=[-1]).status == "infeasible"
    assert linprog_exact([-1], A_ub=[[-1]], b_ub=[0]).status == "unbounded"


def test_free_variables():
    res = linprog_exact([1], [[-1]], [3], free=True)
    assert res.success and res.x == (-3,)
