"""R-matrices of the A, B, C, D series and of GL(m|n), exact over Q(q).

Rows and columns of an ``N^2 x N^2`` R-matrix are labelled by index pairs
``(i, j)`` with ``1 <= i, j <= N``; the flat position is ``(i-1)*N + (j-1)``.
Matrices are stored sparsely as ``{(row, col): QScalar}`` on flat 0-based
positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .scalar import ONE, ZERO, QScalar, qpow

SparseMatrix = Dict[Tuple[int, int], QScalar]

SERIES = ("GL", "B", "C", "D", "SUPER_GL", "EXPLICIT")

# rho vectors of the supported orthogonal/symplectic cases, written as
# exponents of q (so q^rho_i is always a Laurent monomial); everything else
# has to be passed in explicitly.  For B1 the formula parameter is q^2 and
# rho = (1/2, 0, -1/2) in its units.
RHO_TABLE: Dict[Tuple[str, int], Tuple[int, ...]] = {
    ("C", 2): (2, 1, -1, -2),
    ("B", 1): (1, 0, -1),
}

# deformation parameter of the B/C/D formula expressed as a power of q
QPOWER_TABLE: Dict[Tuple[str, int], int] = {
    ("C", 2): 1,
    ("B", 1): 2,
}

# explicit sign vectors overriding the series default
EPS_TABLE: Dict[Tuple[str, int], Tuple[int, ...]] = {
    ("B", 1): (-1, 1, -1),
}


@dataclass
class RMatrixSpec:
    N: int
    entries: SparseMatrix
    grading: Tuple[int, ...]
    series: str
    rho: Optional[Tuple[int, ...]] = None
    eps: Optional[Tuple[int, ...]] = None
    qpower: int = 1
    rank: Optional[int] = None
    label: str = ""

    def pos(self, i: int, j: int) -> int:
        return (i - 1) * self.N + (j - 1)

    def entry(self, i: int, j: int, k: int, l: int) -> QScalar:
        """``R_{ij,kl}`` with 1-based indices."""
        return self.entries.get((self.pos(i, j), self.pos(k, l)), ZERO)

    def pair_grading(self) -> Tuple[int, ...]:
        p = self.grading
        return tuple((p[i] + p[j]) & 1 for i in range(self.N) for j in range(self.N))

    def diagonal(self) -> SparseMatrix:
        return {(r, c): v for (r, c), v in self.entries.items() if r == c}

    def is_even(self) -> bool:
        pp = self.pair_grading()
        return all(not ((pp[r] + pp[c]) & 1) for (r, c) in self.entries)

    def dense(self, q0=None) -> List[list]:
        n = self.N ** 2
        out = [[ZERO if q0 is None else Fraction(0)] * n for _ in range(n)]
        for (r, c), v in self.entries.items():
            out[r][c] = v if q0 is None else v.evaluate(q0)
        return out

    def triplets(self) -> List[Tuple[str, str, str]]:
        """Sparse dump ``(row pair, column pair, value)`` in row-major order."""
        n = self.N
        out = []
        for (r, c) in sorted(self.entries):
            out.append((f"{r // n + 1}{r % n + 1}", f"{c // n + 1}{c % n + 1}", str(self.entries[(r, c)])))
        return out


@dataclass
class CMatrixSpec:
    """Number matrix ``C = C_0 q^rho`` with ``(C_0)_{ij} = eps_i delta_{i j'}``."""

    N: int
    entries: Dict[Tuple[int, int], QScalar] = field(default_factory=dict)

    def entry(self, i: int, j: int) -> QScalar:
        return self.entries.get((i, j), ZERO)

    def inverse(self) -> "CMatrixSpec":
        # C is antidiagonal, so its inverse is the transposed reciprocal
        return CMatrixSpec(self.N, {(j, i): v.inverse() for (i, j), v in self.entries.items()})


def _lam(k: int) -> QScalar:
    return qpow(k) - qpow(-k)


def build_gl(n: int) -> RMatrixSpec:
    """R-matrix of GL_q(n): q on ``(i,i;i,i)``, 1 on the other diagonal
    positions and lambda at ``(m,n;n,m)`` for ``m > n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    spec = RMatrixSpec(n, {}, (0,) * n, "GL", rank=n, label=f"gl{n}")
    lam = _lam(1)
    q = qpow(1)
    for m in range(1, n + 1):
        for k in range(1, n + 1):
            p = spec.pos(m, k)
            spec.entries[(p, p)] = q if m == k else ONE
            if m > k:
                spec.entries[(p, spec.pos(k, m))] = lam
    return spec


def build_super_gl(m: int, n: int) -> RMatrixSpec:
    """R-matrix of GL_q(m|n); the first ``m`` indices are even."""
    N = m + n
    if N < 1:
        raise ValueError("m + n must be >= 1")
    grading = tuple(0 if i < m else 1 for i in range(N))
    spec = RMatrixSpec(N, {}, grading, "SUPER_GL" if n else "GL", rank=N,
                       label=f"gl{m}|{n}" if n else f"gl{m}")
    lam = _lam(1)
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            p = spec.pos(i, j)
            spec.entries[(p, p)] = qpow(1 - 2 * grading[i - 1]) if i == j else ONE
            if i > j:
                spec.entries[(p, spec.pos(j, i))] = lam
    return spec


def default_eps(series: str, N: int) -> Tuple[int, ...]:
    if series == "C":
        return tuple(1 if i <= N // 2 else -1 for i in range(1, N + 1))
    return (1,) * N


def build_bcd(series: str, n: int, rho: Optional[Sequence[int]] = None,
              eps: Optional[Sequence[int]] = None, qpower: Optional[int] = None) -> RMatrixSpec:
    """R-matrix of the B, C or D series of rank ``n``.

    ``rho`` (and optionally ``eps``) default to the stored table; an
    unsupported ``(series, n)`` without an explicit ``rho`` is an error.
    ``qpower`` k uses ``q^k`` as the deformation parameter of the formula
    while ``rho`` is always given in exponents of ``q`` itself.
    """
    series = series.upper()
    if series not in ("B", "C", "D"):
        raise ValueError(f"unknown series {series!r}")
    N = 2 * n + 1 if series == "B" else 2 * n
    key = (series, n)
    if rho is None:
        if key not in RHO_TABLE:
            raise ValueError(f"no rho vector stored for {series}{n}; pass rho explicitly")
        rho = RHO_TABLE[key]
    rho = tuple(rho)
    if len(rho) != N:
        raise ValueError(f"rho must have length {N}")
    if eps is None:
        eps = EPS_TABLE.get(key, default_eps(series, N))
    eps = tuple(eps)
    k = qpower if qpower is not None else QPOWER_TABLE.get(key, 1)
    spec = RMatrixSpec(N, {}, (0,) * N, series, rho=rho, eps=eps, qpower=k, rank=n,
                       label=f"{series}{n}")
    lam = _lam(k)
    qq = qpow(k)
    qinv = qpow(-k)

    def prime(i: int) -> int:
        return N + 1 - i

    def add(i, j, a, b, v):
        key2 = (spec.pos(i, j), spec.pos(a, b))
        val = spec.entries.get(key2, ZERO) + v
        if val:
            spec.entries[key2] = val
        else:
            spec.entries.pop(key2, None)

    for i in range(1, N + 1):
        if i != prime(i):
            add(i, i, i, i, qq)
            add(prime(i), i, prime(i), i, qinv)
        elif series == "B":
            add(i, i, i, i, ONE)
        for j in range(1, N + 1):
            if j != i and j != prime(i):
                add(i, j, i, j, ONE)
    for i in range(1, N + 1):
        for j in range(1, i):
            add(i, j, j, i, lam)
            coeff = -lam * qpow(rho[i - 1] - rho[j - 1]) * (eps[i - 1] * eps[j - 1])
            add(i, prime(i), j, prime(j), coeff)
    return spec


def c_matrix(spec: RMatrixSpec) -> CMatrixSpec:
    """``C = C_0 q^rho`` for a B/C/D R-matrix."""
    if spec.rho is None:
        raise ValueError("C matrix needs a B/C/D R-matrix")
    N = spec.N
    out = CMatrixSpec(N)
    for i in range(1, N + 1):
        j = N + 1 - i
        out.entries[(i, j)] = qpow(spec.rho[j - 1], spec.eps[i - 1])
    return out


# -- sparse matrix helpers -------------------------------------------------

def sp_mul(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    rows: Dict[int, List[Tuple[int, QScalar]]] = {}
    for (r, c), v in b.items():
        rows.setdefault(r, []).append((c, v))
    out: SparseMatrix = {}
    for (r, k), v in a.items():
        for c, w in rows.get(k, ()):
            key = (r, c)
            s = out.get(key)
            s = v * w if s is None else s + v * w
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def sp_sub(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, ZERO) - v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def identity(n: int) -> SparseMatrix:
    return {(i, i): ONE for i in range(n)}


def graded_tensor(F: SparseMatrix, G: SparseMatrix, pF: Sequence[int], pG: Sequence[int]) -> SparseMatrix:
    """``(F (x) G)_{ij;kl} = (-1)^{p(j)(p(i)+p(k))} F_ik G_jl``.

    ``pF`` and ``pG`` are the index parities of the two factors; with all
    parities zero this is the Kronecker product.
    """
    nG = len(pG)
    out: SparseMatrix = {}
    for (i, k), f in F.items():
        s = (pF[i] + pF[k]) & 1
        for (j, l), g in G.items():
            v = f * g
            if s and pG[j]:
                v = -v
            out[(i * nG + j, k * nG + l)] = v
    return out


def graded_flip(p: Sequence[int]) -> SparseMatrix:
    """Graded permutation ``v_i (x) v_j -> (-1)^{p(i)p(j)} v_j (x) v_i``."""
    n = len(p)
    out: SparseMatrix = {}
    for i in range(n):
        for j in range(n):
            out[(j * n + i, i * n + j)] = -ONE if p[i] and p[j] else ONE
    return out


def embeddings(spec: RMatrixSpec) -> Tuple[SparseMatrix, SparseMatrix, SparseMatrix]:
    """``R12, R13, R23`` acting on ``V (x) V (x) V``."""
    p = spec.grading
    pp = spec.pair_grading()
    N = spec.N
    R12 = graded_tensor(spec.entries, identity(N), pp, p)
    R23 = graded_tensor(identity(N), spec.entries, p, pp)
    P23 = graded_tensor(identity(N), graded_flip(p), p, pp)
    R13 = sp_mul(sp_mul(P23, R12), P23)
    return R12, R13, R23


def ybe_residual(spec: RMatrixSpec) -> SparseMatrix:
    R12, R13, R23 = embeddings(spec)
    lhs = sp_mul(sp_mul(R12, R13), R23)
    rhs = sp_mul(sp_mul(R23, R13), R12)
    return sp_sub(lhs, rhs)


def yang_baxter_check(spec: RMatrixSpec) -> bool:
    """True iff ``R12 R13 R23 = R23 R13 R12`` exactly."""
    return not ybe_residual(spec)


def evaluate_matrix(m: SparseMatrix, n: int, q0) -> List[List[Fraction]]:
    out = [[Fraction(0)] * n for _ in range(n)]
    for (r, c), v in m.items():
        out[r][c] = v.evaluate(q0)
    return out


def rational_det(rows: List[List[Fraction]]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det
