# -*- coding: utf-8 -*-
"""
Exact linear algebra
--------------------

Rational and integer matrix routines used by the polytope, probe and
reduction modules. Matrices are lists of rows. Rational routines work
on ``sympy.Matrix`` with ``Rational`` entries and hand back
``fractions.Fraction``; the integer lattice routines keep plain ``int``
entries.

"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple

import sympy

Matrix = List[List[Fraction]]


def dot(u, v):
    return sum((a*b for a, b in zip(u, v)), Fraction(0))


def matmul(A, B):
    """Matrix product for lists of rows.

    Examples
    --------
    >>> matmul([[1, 2], [0, 1]], [[1], [1]])
    [[3], [1]]

    """
    cols = list(zip(*B))
    return [[sum(a*b for a, b in zip(row, col)) for col in cols] for row in A]


def matvec(A, v):
    return [sum(a*b for a, b in zip(row, v)) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matrix(A) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(Fraction(a).numerator,
                                         Fraction(a).denominator)
                          for a in row] for row in A])


def _fraction(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def _rows(M: sympy.Matrix) -> Matrix:
    return [[_fraction(a) for a in M.row(i)] for i in range(M.rows)]


def rref(A) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form over the rationals.

    Parameters
    ----------
    A : list of rows
        Matrix with rational or integer entries.

    Returns
    -------
    R : list of rows
        Reduced row echelon form of ``A``.
    pivots : list of int
        Pivot column of each nonzero row of ``R``.

    Examples
    --------
    >>> R, piv = rref([[2, 4], [1, 2]])
    >>> piv
    [0]
    >>> [str(a) for a in R[0]]
    ['1', '2']

    """
    R, pivots = _matrix(A).rref()
    return _rows(R), list(pivots)


def rank(A) -> int:
    if not A or not A[0]:
        return 0
    return _matrix(A).rank()


def det(A) -> Fraction:
    return _fraction(_matrix(A).det())


def solve(A, b) -> Optional[List[Fraction]]:
    """Solve the square system ``A x = b``; ``None`` if ``A`` is singular."""
    M = _matrix(A)
    if M.det() == 0:
        return None
    x = M.LUsolve(_matrix([[a] for a in b]))
    return [_fraction(a) for a in x]


def inverse(A) -> Matrix:
    M = _matrix(A)
    if M.det() == 0:
        raise ZeroDivisionError("matrix is singular")
    return _rows(M.inv())


def nullspace(A) -> Matrix:
    """Rational basis of the null space of ``A`` (as a list of vectors)."""
    return [[_fraction(a) for a in v] for v in _matrix(A).nullspace()]


def affine_rank(points) -> int:
    """Dimension of the affine hull of a nonempty list of points."""
    if len(points) <= 1:
        return 0
    base = points[0]
    diffs = [[Fraction(a) - Fraction(b) for a, b in zip(p, base)]
             for p in points[1:]]
    return rank(diffs)


# Integer lattice routines


def primitive(v: Sequence[int]) -> Tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries.

    Examples
    --------
    >>> primitive([0, 2, -4])
    (0, 1, -2)

    """
    g = reduce(gcd, (int(a) for a in v), 0)
    if g == 0:
        return tuple(int(a) for a in v)
    return tuple(int(a)//g for a in v)


def integer_scale(v) -> Tuple[Tuple[int, ...], Fraction]:
    """Write a rational vector as ``c * w`` with ``w`` primitive integer.

    Returns
    -------
    w : tuple of int
        Primitive integer vector.
    c : Fraction
        Positive scale with ``v = c * w``.

    Examples
    --------
    >>> integer_scale([Fraction(1, 2), Fraction(-1, 3)])
    ((3, -2), Fraction(1, 6))

    """
    fv = [Fraction(a) for a in v]
    den = reduce(lcm, (a.denominator for a in fv), 1)
    ints = [int(a*den) for a in fv]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints), Fraction(0)
    return tuple(a//g for a in ints), Fraction(g, den)


def exgcd(a: int, b: int) -> List[List[int]]:
    """Extended gcd as a 2x2 integer matrix.

    Returns ``M`` with determinant 1 such that ``M @ [a, b] = [g, 0]``
    where ``g = gcd(a, b)``.

    Examples
    --------
    >>> M = exgcd(4, 6)
    >>> matvec(M, [4, 6])
    [2, 0]

    """
    a_sign = -1 if a < 0 else 1
    b_sign = -1 if b < 0 else 1
    a, b = a*a_sign, b*b_sign
    rows = [[b, 0, 1], [a, 1, 0]]
    while rows[1][0] != 0:
        q = rows[0][0]//rows[1][0]
        rows[0] = [x - q*y for x, y in zip(rows[0], rows[1])]
        rows = rows[::-1]
    g = rows[0][0]
    M = [[row[1]*a_sign, row[2]*b_sign] for row in rows]
    if g != 0:
        M[1] = [-b_sign*b//g, a_sign*a//g]
    else:
        M = identity(2)
    return M


def column_echelon(A) -> Tuple[int, List[List[int]], List[List[int]]]:
    """Unimodular column reduction of an integer matrix.

    Parameters
    ----------
    A : list of rows
        Integer k x m matrix.

    Returns
    -------
    r : int
        Rank of ``A``.
    T : list of rows
        Unimodular m x m matrix with ``A T = [L | 0]``, where ``L`` has
        ``r`` columns in lower echelon form.
    T_inv : list of rows
        Inverse of ``T``.

    """
    D = [[int(a) for a in row] for row in A]
    m = len(D[0])
    T = identity(m)
    T_inv = identity(m)
    p = 0
    for i in range(len(D)):
        if p == m:
            break
        for j in range(p + 1, m):
            if D[i][j] == 0:
                continue
            M = exgcd(D[i][p], D[i][j])
            # column operation X = M^T, inverse (M^-1)^T
            X = [[M[0][0], M[1][0]], [M[0][1], M[1][1]]]
            X_inv = [[M[1][1], -M[1][0]], [-M[0][1], M[0][0]]]
            for mat in (D, T):
                for row in mat:
                    cp, cj = row[p], row[j]
                    row[p] = cp*X[0][0] + cj*X[1][0]
                    row[j] = cp*X[0][1] + cj*X[1][1]
            rp, rj = T_inv[p], T_inv[j]
            T_inv[p] = [X_inv[0][0]*x + X_inv[0][1]*y for x, y in zip(rp, rj)]
            T_inv[j] = [X_inv[1][0]*x + X_inv[1][1]*y for x, y in zip(rp, rj)]
        if D[i][p] != 0:
            p += 1
    return p, T, T_inv


def kernel_lattice(A, m: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Integer basis of ``{x in Z^m : A x = 0}``.

    ``m`` is only needed when ``A`` has no rows.

    Examples
    --------
    >>> kernel_lattice([[1, 1, 0]])
    [(1, -1, 0), (0, 0, 1)]
    >>> kernel_lattice([], m=2)
    [(1, 0), (0, 1)]

    """
    if not A:
        return [tuple(row) for row in identity(m)]
    m = len(A[0])
    r, T, _ = column_echelon(A)
    basis = [tuple(T[i][j] for i in range(m)) for j in range(r, m)]
    return [_sign_normalize(b) for b in basis]


def _sign_normalize(v):
    lead = next((a for a in v if a != 0), 0)
    return tuple(-a for a in v) if lead < 0 else tuple(v)


def lattice_index(A) -> int:
    """Index of ``A Z^m`` in ``Z^k``; 0 when ``A`` has rank below ``k``.

    A value of 1 means the integer map is onto.

    Examples
    --------
    >>> lattice_index([[1, 1, 0], [0, 0, 1]])
    1
    >>> lattice_index([[2, 0], [0, 1]])
    2
    >>> lattice_index([[1, 1]] * 2)
    0

    """
    k = len(A)
    r, T, _ = column_echelon(A)
    if r < k:
        return 0
    L = [row[:k] for row in matmul(A, T)]
    index = 1
    for i in range(k):
        index *= L[i][i]
    return abs(index)


def unimodular_completion(M) -> List[List[int]]:
    """Rows ``P`` such that the stacked matrix ``[M; P]`` is unimodular.

    Raises
    ------
    ValueError
        If the rows of ``M`` do not span a saturated sublattice.

    Examples
    --------
    >>> unimodular_completion([[1, 1]])
    [[0, 1]]

    """
    k = len(M)
    m = len(M[0])
    if lattice_index(M) != 1:
        raise ValueError("rows do not extend to a lattice basis")
    _, _, T_inv = column_echelon(M)
    return [list(T_inv[i]) for i in range(k, m)]


def random_unimodular(n: int, rng, steps: int = 6) -> List[List[int]]:
    """Product of random elementary integer matrices, ``det = +-1``.

    ``rng`` is a ``numpy.random.Generator``.
    """
    A = identity(n)
    if n == 1:
        return [[int(rng.choice([-1, 1]))]]
    for _ in range(steps):
        i, j = (int(a) for a in rng.choice(n, size=2, replace=False))
        sign = int(rng.choice([-1, 1]))
        A[i] = [a + sign*b for a, b in zip(A[i], A[j])]
    if rng.integers(2):
        A[0], A[1] = A[1], A[0]
    return A


if __name__ == "__main__":
    import doctest
    doctest.testmod()
