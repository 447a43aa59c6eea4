from fractions import Fraction

import pytest
import sympy

from qgauss.rmat import (build_bcd, build_gl, build_super_gl, c_matrix, graded_flip, graded_tensor, identity,
                         sp_mul, yang_baxter_check, ybe_residual)
from qgauss.scalar import LAMBDA, ONE, qpow

Q0 = Fraction(3)


def dense(spec, q0=Q0):
    return sympy.Matrix(spec.dense(q0))


def flip(N):
    P = sympy.zeros(N * N)
    for i in range(N):
        for j in range(N):
            P[j * N + i, i * N + j] = 1
    return P


def gl_oracle(n, q):
    """R = q sum e_ii(x)e_ii + sum_{i!=j} e_ii(x)e_jj + lambda sum_{i>j} e_ij(x)e_ji."""
    R = sympy.zeros(n * n)
    for i in range(n):
        for j in range(n):
            R[i * n + j, i * n + j] = q if i == j else 1
            if i > j:
                R[i * n + j, j * n + i] = q - 1 / q
    return R


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_gl_matches_formula(n):
    assert dense(build_gl(n)) == gl_oracle(n, sympy.Rational(3))


def test_gl2_entries():
    R = build_gl(2)
    assert R.entry(1, 1, 1, 1) == qpow(1)
    assert R.entry(2, 1, 1, 2) == LAMBDA
    assert R.entry(1, 2, 2, 1) == 0
    assert len(R.entries) == 5


# spectrum of P R at q = 3: (eigenvalue, multiplicity); B1 uses q^2 as parameter
@pytest.mark.parametrize("spec,spectrum", [
    (build_gl(2), {3: 3, Fraction(-1, 3): 1}),
    (build_gl(3), {3: 6, Fraction(-1, 3): 3}),
    (build_bcd("C", 2), {3: 10, Fraction(-1, 3): 5, Fraction(-1, 243): 1}),
    (build_bcd("B", 1), {9: 5, Fraction(-1, 9): 3, Fraction(1, 81): 1}),
])
def test_braid_spectrum(spec, spectrum):
    ev = (flip(spec.N) * dense(spec)).eigenvals()
    assert {Fraction(int(sympy.fraction(k)[0]), int(sympy.fraction(k)[1])): v for k, v in ev.items()} == spectrum


@pytest.mark.parametrize("spec", [build_gl(2), build_gl(3), build_bcd("C", 2), build_bcd("B", 1),
                                  build_super_gl(1, 1), build_super_gl(2, 1)])
def test_yang_baxter(spec):
    assert yang_baxter_check(spec)


@pytest.mark.parametrize("spec", [build_gl(3), build_bcd("C", 2)])
def test_yang_baxter_numeric(spec):
    # plain Kronecker products at q = 3, independent of the sparse code
    N = spec.N
    R = dense(spec)
    I = sympy.eye(N)
    R12 = sympy.kronecker_product(R, I)
    R23 = sympy.kronecker_product(I, R)
    P23 = sympy.kronecker_product(I, flip(N))
    R13 = P23 * R12 * P23
    assert R12 * R13 * R23 == R23 * R13 * R12


def test_broken_r_matrix_fails_ybe():
    spec = build_gl(2)
    spec.entries[(spec.pos(2, 1), spec.pos(1, 2))] = qpow(2)
    assert not yang_baxter_check(spec)
    assert ybe_residual(spec)


@pytest.mark.parametrize("spec", [build_gl(3), build_bcd("C", 2), build_bcd("B", 1)])
def test_classical_limit_is_identity(spec):
    assert dense(spec, Fraction(1)) == sympy.eye(spec.N ** 2)


def test_super_gl_is_even():
    assert build_super_gl(2, 1).is_even()
    assert build_super_gl(1, 1).grading == (0, 1)


def test_graded_tensor_signs():
    p = (0, 1)
    F = {(0, 1): ONE}
    G = {(1, 1): ONE}
    T = graded_tensor(F, G, p, p)
    # (-1)^{p(j)(p(i)+p(k))} with i=0, k=1, j=1
    assert T == {(0 * 2 + 1, 1 * 2 + 1): -ONE}


def test_graded_flip_squares_to_one():
    p = (0, 0, 1)
    P = graded_flip(p)
    assert sp_mul(P, P) == identity(9)


@pytest.mark.parametrize("spec,entries", [
    (build_bcd("C", 2), {(1, 4): qpow(-2), (2, 3): qpow(-1), (3, 2): -qpow(1), (4, 1): -qpow(2)}),
    (build_bcd("B", 1), {(1, 3): -qpow(-1), (2, 2): ONE, (3, 1): -qpow(1)}),
])
def test_c_matrix(spec, entries):
    assert c_matrix(spec).entries == entries


def test_triplets_format():
    trip = build_gl(2).triplets()
    assert trip[0] == ("11", "11", "q")
    assert ("21", "12", "q - q^-1") in trip


def test_bcd_unknown_rank():
    with pytest.raises(ValueError):
        build_bcd("C", 3)
    with pytest.raises(ValueError):
        build_bcd("X", 1)
