from fractions import Fraction
from math import gcd

import numpy as np
import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form

import toricpy.linalg as la


def test_rank_det_solve():
    A = [[2, 1], [1, 1]]
    assert la.rank(A) == 2
    assert la.det(A) == 1
    assert la.solve(A, [3, 2]) == [1, 1]
    assert la.solve([[1, 1], [2, 2]], [1, 2]) is None
    assert la.matmul(A, la.inverse(A)) == la.identity(2)
    with pytest.raises(ZeroDivisionError):
        la.inverse([[1, 2], [2, 4]])


def test_nullspace_and_affine_rank():
    basis = la.nullspace([[1, 1, 1]])
    assert len(basis) == 2
    assert all(la.dot([1, 1, 1], v) == 0 for v in basis)
    square = [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert la.affine_rank(square) == 2
    assert la.affine_rank([(0, 0), (1, 1), (2, 2)]) == 1
    assert la.affine_rank([(3, 4)]) == 0


def test_primitive_and_integer_scale():
    assert la.primitive([4, -6, 0]) == (2, -3, 0)
    w, c = la.integer_scale([Fraction(2, 3), Fraction(4, 3)])
    assert w == (1, 2)
    assert c == Fraction(2, 3)


def test_exgcd_is_unimodular():
    for a, b in [(12, 18), (-4, 6), (0, 5), (7, 0), (3, 5)]:
        M = la.exgcd(a, b)
        assert la.det(M) == 1
        assert la.matvec(M, [a, b]) == [gcd(a, b), 0]


def test_column_echelon_transform():
    A = [[2, 4, 6], [1, 3, 5]]
    r, T, T_inv = la.column_echelon(A)
    assert r == 2
    assert la.matmul(T, T_inv) == la.identity(3)
    AT = la.matmul(A, T)
    assert all(row[2] == 0 for row in AT)


def test_kernel_lattice_is_saturated():
    A = [[2, 4, 6]]
    basis = la.kernel_lattice(A)
    assert len(basis) == 2
    assert all(la.dot(A[0], v) == 0 for v in basis)
    # (1, 1, -1) is in the kernel, so the basis must not have index > 1
    assert la.lattice_index(la.transpose(basis)) == 1


def test_lattice_index_matches_smith_form():
    rng = np.random.default_rng(7)
    for _ in range(25):
        A = [[int(a) for a in row] for row in rng.integers(-4, 5, (2, 3))]
        snf = smith_normal_form(sympy.Matrix(A), domain=sympy.ZZ)
        product = abs(int(snf[0, 0])*int(snf[1, 1]))
        assert la.lattice_index(A) == product


def test_unimodular_completion():
    M = [[0, 1, -1, 0], [1, 1, 0, -1]]
    P = la.unimodular_completion(M)
    assert len(P) == 2
    assert abs(la.det(M + P)) == 1
    with pytest.raises(ValueError):
        la.unimodular_completion([[2, 0]])


def test_random_unimodular():
    rng = np.random.default_rng(3)
    for n in (1, 2, 3, 4):
        for _ in range(5):
            assert abs(la.det(la.random_unimodular(n, rng))) == 1
