"""Quantum determinants, q-minors, the matrix inverse, the symplectic
determinant and the superdeterminant."""

from __future__ import annotations

from itertools import permutations
from typing import List, Optional, Sequence, Tuple

from .ncalg import LocalizedElement, Localizer, NCPolynomial, word_key
from .qgroup import QuantumGroup, vanishes
from .scalar import ONE, QScalar, qpow


def inversions(perm: Sequence[int]) -> List[Tuple[int, int]]:
    """Pairs of values ``(perm[i], perm[j])`` with ``i < j`` and ``perm[i] > perm[j]``."""
    return [(perm[i], perm[j]) for i in range(len(perm)) for j in range(i + 1, len(perm))
            if perm[i] > perm[j]]


def length(perm: Sequence[int]) -> int:
    return len(inversions(perm))


def transposition_index(perm: Sequence[int], N: int) -> int:
    """Inversions between paired values ``v`` and ``v' = N + 1 - v``."""
    return sum(1 for a, b in inversions(perm) if a + b == N + 1)


def _perm_sum(grp: QuantumGroup, rows: Sequence[int], cols: Sequence[int], weight) -> NCPolynomial:
    a = grp.alphabet
    acc = a.zero()
    for perm in permutations(range(len(cols))):
        c = weight(perm)
        word = a.one()
        for r, k in zip(rows, perm):
            word = word * grp.t(r, cols[k])
        acc = acc + word.scale(c)
    return grp.nf(acc)


def minor(grp: QuantumGroup, rows: Sequence[int], cols: Sequence[int]) -> NCPolynomial:
    """``D_q[rows|cols]``: q-determinant of the submatrix keeping ``rows`` and ``cols``."""
    rows, cols = sorted(rows), sorted(cols)
    if len(rows) != len(cols):
        raise ValueError("minor needs as many rows as columns")
    if not rows:
        return grp.alphabet.one()
    return _perm_sum(grp, rows, cols, lambda p: qpow(length(p), (-1) ** length(p)))


def qdet(grp: QuantumGroup, size: Optional[int] = None) -> NCPolynomial:
    """``det_q`` of the leading ``size x size`` corner (the whole T by default)."""
    n = grp.N if size is None else size
    return minor(grp, range(1, n + 1), range(1, n + 1))


def qminor(grp: QuantumGroup, omit_rows: Sequence[int], omit_cols: Sequence[int]) -> NCPolynomial:
    """``M_q``: q-determinant after deleting ``omit_rows`` and ``omit_cols``."""
    if len(set(omit_rows)) != len(set(omit_cols)):
        raise ValueError("omit as many rows as columns")
    rows = [i for i in range(1, grp.N + 1) if i not in set(omit_rows)]
    cols = [j for j in range(1, grp.N + 1) if j not in set(omit_cols)]
    return minor(grp, rows, cols)


def row_expansion(grp: QuantumGroup, k: int) -> NCPolynomial:
    """``sum_j (-q)^{j-k} t_kj M_q(k, j)``."""
    acc = grp.alphabet.zero()
    for j in range(1, grp.N + 1):
        acc = acc + (grp.t(k, j) * qminor(grp, [k], [j])).scale(qpow(j - k, (-1) ** (j - k)))
    return grp.nf(acc)


def column_expansion(grp: QuantumGroup, k: int) -> NCPolynomial:
    """``sum_j (-q)^{k-j} M_q(j, k) t_jk`` with ``M_q(j, k)`` omitting row j, column k."""
    acc = grp.alphabet.zero()
    for j in range(1, grp.N + 1):
        acc = acc + (qminor(grp, [j], [k]) * grp.t(j, k)).scale(qpow(k - j, (-1) ** (k - j)))
    return grp.nf(acc)


def spdet(grp: QuantumGroup, k: Optional[int] = None) -> NCPolynomial:
    """Principal symplectic determinant of order ``k``:
    ``sum_sigma (-q)^{l(sigma)} q^{l'(sigma)} t_{1 sigma(1)} ... t_{k sigma(k)}``."""
    if grp.R.series != "C":
        raise ValueError("symplectic determinant needs a C-series group")
    N = grp.N
    k = N if k is None else k
    idx = list(range(1, k + 1))

    def weight(p):
        perm = [idx[i] for i in p]
        l = length(perm)
        return qpow(l + transposition_index(perm, N), (-1) ** l)

    return _perm_sum(grp, idx, idx, weight)


# -- inverse ------------------------------------------------------------------

ADJUGATE_CONVENTIONS = ("omit-j-i", "omit-i-j")


def inverse_candidate(grp: QuantumGroup, loc: Localizer, convention: str):
    """``(T^{-1})_{ij} = (-q)^{i-j} det_q^{-1} M`` where ``M`` deletes row j and
    column i (``omit-j-i``) or row i and column j (``omit-i-j``)."""
    det = qdet(grp)
    d = loc.register("det_q", det)
    inv = loc.inverse_of(d)
    N = grp.N
    out = []
    for i in range(1, N + 1):
        row = []
        for j in range(1, N + 1):
            m = qminor(grp, [j], [i]) if convention == "omit-j-i" else qminor(grp, [i], [j])
            row.append(inv * loc.lift(m.scale(qpow(i - j, (-1) ** (i - j)))))
        out.append(row)
    return out


def mat_mul_loc(loc: Localizer, A, B):
    n, m, k = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = loc.zero()
            for l in range(m):
                acc = acc + loc.lift(A[i][l]) * loc.lift(B[l][j])
            row.append(acc)
        out.append(row)
    return out


def is_identity(loc: Localizer, M) -> bool:
    n = len(M)
    return all((M[i][j] - (1 if i == j else 0)).is_zero() for i in range(n) for j in range(n))


def inverse_check(grp: QuantumGroup, loc: Localizer, convention: str) -> Tuple[bool, bool]:
    """``(T T^{-1} = 1, T^{-1} T = 1)`` for one adjugate convention."""
    inv = inverse_candidate(grp, loc, convention)
    T = grp.T
    return is_identity(loc, mat_mul_loc(loc, T, inv)), is_identity(loc, mat_mul_loc(loc, inv, T))


def resolve_adjugate(grp: QuantumGroup, loc: Localizer) -> str:
    """The convention for which ``T^{-1}`` is a two-sided inverse."""
    for conv in ADJUGATE_CONVENTIONS:
        if all(inverse_check(grp, loc, conv)):
            return conv
    raise ValueError("no adjugate convention gives a two-sided inverse")


def qinverse(grp: QuantumGroup, loc: Localizer, convention: Optional[str] = None):
    """Two-sided inverse of ``T`` over the localization at ``det_q``."""
    if grp.N == 1:
        d = loc.register("t11", grp.t(1, 1))
        return [[loc.inverse_of(d)]]
    conv = convention or resolve_adjugate(grp, loc)
    return inverse_candidate(grp, loc, conv)


# -- centrality -----------------------------------------------------------------

def centrality_check(grp: QuantumGroup, x, loc: Optional[Localizer] = None) -> bool:
    """True iff ``x t = t x`` for every generator ``t``."""
    a = grp.alphabet
    if isinstance(x, LocalizedElement):
        loc = x.loc
        return all((x * loc.lift(a.gen(i)) - loc.lift(a.gen(i)) * x).is_zero() for i in range(len(a)))
    return all(vanishes(grp, x * a.gen(i) - a.gen(i) * x) for i in range(len(a)))


def sdet(grp: QuantumGroup, diag: Sequence[LocalizedElement]) -> LocalizedElement:
    """``prod_even A_ii / prod_odd A_ii`` from the Gauss diagonal; the odd
    factors must be registered pivots."""
    loc = diag[0].loc
    num = loc.one()
    for A, p in zip(diag, grp.grading):
        if not p:
            num = num * A
    for A, p in zip(diag, grp.grading):
        if p:
            num = num * invert(loc, A, "A")
    return num


def invert(loc: Localizer, x: LocalizedElement, name: str) -> LocalizedElement:
    """Inverse of ``D^{-e} N``: registers ``N`` (scaled so its smallest word
    has coefficient 1) and returns
    ``N^{-1} D^{e}``."""
    num = x.num
    if not num:
        raise ZeroDivisionError("inverse of zero")
    c = num.terms[min(num.terms, key=word_key)]
    monic = num.scale(c.inverse())
    i = loc.register(name, monic)
    inv = LocalizedElement(loc, ((i, 1),), loc.alphabet.one().scale(c.inverse()))
    return inv * LocalizedElement(loc, (), loc.den_power(x.exps))
