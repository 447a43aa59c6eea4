"""Gauss decomposition ``T = T_L T_D T_U`` of a quantum matrix and the
checks of the identities relating the factors."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .ncalg import LocalizationError, LocalizedElement, Localizer, NCPolynomial, word_key
from .qgroup import QuantumGroup, vanishes
from .qlinalg import invert, mat_mul_loc, minor, qdet, sdet
from .scalar import LAMBDA, ONE, QScalar, as_scalar, qint, qpow

Matrix = List[List[LocalizedElement]]


@dataclass
class GaussFactors:
    group: QuantumGroup
    loc: Localizer
    T_L: Matrix
    T_D: List[LocalizedElement]
    T_U: Matrix
    T_plus: Matrix
    T_minus: Matrix
    W_L: Matrix
    W_U: Matrix
    pivot_inverses: List[LocalizedElement] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.T_D)

    def diag_matrix(self) -> Matrix:
        z = self.loc.zero()
        return [[self.T_D[i] if i == j else z for j in range(self.n)] for i in range(self.n)]


def new_localizer(grp: QuantumGroup) -> Localizer:
    return Localizer(grp.system, grp.weight)


def pivot_name(grp: QuantumGroup, k: int, num: NCPolynomial) -> str:
    """Display name of the k-th registered pivot numerator."""
    if len(num) == 1:
        (w, c), = num.terms.items()
        if len(w) == 1 and c.is_one():
            return grp.alphabet.name(w[0])
    if k == grp.N and grp.series() == "GL" and not grp.is_super():
        return "det_q"
    return f"D{k}"


def principal_minors(grp: QuantumGroup, loc: Localizer) -> List[int]:
    """Register ``det_q T_(k)`` for k = 1..N-1 (GL-type rules) and return ids."""
    ids = []
    for k in range(1, grp.N):
        m = minor(grp, range(1, k + 1), range(1, k + 1))
        ids.append(loc.register(pivot_name(grp, k, m), m))
    return ids


def identity(loc: Localizer, n: int) -> Matrix:
    return [[loc.one() if i == j else loc.zero() for j in range(n)] for i in range(n)]


def invert_unitriangular(loc: Localizer, W: Matrix) -> Matrix:
    """``(1 + N)^{-1} = 1 - N + N^2 - ...`` for strictly triangular ``N``."""
    n = len(W)
    N = [[(W[i][j] - (1 if i == j else 0)) for j in range(n)] for i in range(n)]
    negN = [[-x for x in row] for row in N]
    out = identity(loc, n)
    term = identity(loc, n)
    for _ in range(n - 1):
        term = mat_mul_loc(loc, term, negN)
        out = [[out[i][j] + term[i][j] for j in range(n)] for i in range(n)]
    return out


def gauss_decompose(grp: QuantumGroup, loc: Optional[Localizer] = None) -> GaussFactors:
    """Row elimination (``W_L T = T^(+)``) and the mirrored column
    elimination (``T W_U = T^(-)``), with every pivot made invertible."""
    loc = loc or new_localizer(grp)
    n = grp.N
    U: Matrix = [[loc.lift(grp.t(i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)]
    L = identity(loc, n)
    pinvs: List[LocalizedElement] = []
    for k in range(n):
        p = U[k][k]
        if p.is_zero():
            raise LocalizationError(f"zero pivot at step {k + 1}")
        pinv = invert(loc, p, pivot_name(grp, k + 1, _monic(p.num)))
        pinvs.append(pinv)
        for i in range(k + 1, n):
            if U[i][k].is_zero():
                continue
            m = U[i][k] * pinv
            L[i][k] = m
            for j in range(k + 1, n):
                U[i][j] = U[i][j] - m * U[k][j]
            U[i][k] = loc.zero()
    T_D = [U[k][k] for k in range(n)]
    T_U = [[(pinvs[i] * U[i][j] if j > i else (loc.one() if i == j else loc.zero()))
            for j in range(n)] for i in range(n)]
    T_minus = [[(L[i][j] * T_D[j] if j < i else (T_D[i] if i == j else loc.zero()))
                for j in range(n)] for i in range(n)]
    W_L = invert_unitriangular(loc, L)
    W_U = invert_unitriangular(loc, T_U)
    return GaussFactors(grp, loc, L, T_D, T_U, U, T_minus, W_L, W_U, pinvs)


def column_elimination(grp: QuantumGroup, factors: GaussFactors) -> Tuple[Matrix, Matrix]:
    """``T^(-)`` and ``T_U`` from column operations ``T W_U = T^(-)``, reusing
    the pivot inverses of the row elimination."""
    loc = factors.loc
    n = grp.N
    V: Matrix = [[loc.lift(grp.t(i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)]
    TU = identity(loc, n)
    for k in range(n):
        pinv = factors.pivot_inverses[k]
        for j in range(k + 1, n):
            if V[k][j].is_zero():
                continue
            m = pinv * V[k][j]
            TU[k][j] = m
            for i in range(k + 1, n):
                V[i][j] = V[i][j] - V[i][k] * m
            V[k][j] = loc.zero()
    return V, TU


def solve_w_rows(grp: QuantumGroup, loc: Localizer) -> Matrix:
    """``W_L`` from ``w_k = -t_k T_(k-1)^{-1}`` with the corner inverse taken
    from q-minors of the corner (GL-type groups)."""
    n = grp.N
    W = identity(loc, n)
    for k in range(2, n + 1):
        inv = corner_inverse(grp, loc, k - 1)
        for j in range(1, k):
            acc = loc.zero()
            for l in range(1, k):
                acc = acc + loc.lift(grp.t(k, l)) * inv[l - 1][j - 1]
            W[k - 1][j - 1] = -acc
    return W


def corner_inverse(grp: QuantumGroup, loc: Localizer, k: int) -> Matrix:
    """Inverse of the leading ``k x k`` corner:
    ``(-q)^{i-j} det_q(T_(k))^{-1} M(j, i)`` with ``M(j, i)`` the corner minor
    without row ``j`` and column ``i``."""
    idx = list(range(1, k + 1))
    det = minor(grp, idx, idx)
    d = loc.register(pivot_name(grp, k, det), det)
    dinv = loc.inverse_of(d)
    out = []
    for i in idx:
        row = []
        for j in idx:
            m = minor(grp, [r for r in idx if r != j], [c for c in idx if c != i])
            row.append(dinv * loc.lift(m.scale(qpow(i - j, (-1) ** (i - j)))))
        out.append(row)
    return out


def matrix_equal(A: Matrix, B) -> bool:
    return all((A[i][j] - B[i][j]).is_zero() for i in range(len(A)) for j in range(len(A[0])))


def roundtrip(factors: GaussFactors) -> Dict[str, bool]:
    """``T = T_L T_D T_U = T_L T^(+) = T^(-) T_U``."""
    loc = factors.loc
    grp = factors.group
    T = [[loc.lift(grp.t(i, j)) for j in range(1, grp.N + 1)] for i in range(1, grp.N + 1)]
    LDU = mat_mul_loc(loc, mat_mul_loc(loc, factors.T_L, factors.diag_matrix()), factors.T_U)
    return {
        "T = T_L T_D T_U": matrix_equal(LDU, T),
        "T = T_L T(+)": matrix_equal(mat_mul_loc(loc, factors.T_L, factors.T_plus), T),
        "T = T(-) T_U": matrix_equal(mat_mul_loc(loc, factors.T_minus, factors.T_U), T),
        "W_L T = T(+)": matrix_equal(mat_mul_loc(loc, factors.W_L, T), factors.T_plus),
    }


def _monic(p: NCPolynomial) -> NCPolynomial:
    c = p.terms[min(p.terms, key=word_key)]
    return p.scale(c.inverse())


# -- verification ---------------------------------------------------------------

@dataclass
class Check:
    """One verified identity: pass/fail plus the residual on failure."""

    relation_id: str
    paper_ref: str
    status: bool
    residual: Optional[str] = None
    note: str = ""

    def as_dict(self) -> dict:
        out = {"relation_id": self.relation_id, "paper_ref": self.paper_ref,
               "status": "pass" if self.status else "fail"}
        if self.residual is not None:
            out["residual"] = self.residual
        if self.note:
            out["note"] = self.note
        return out


def is_zero(grp: QuantumGroup, x) -> bool:
    """Zero in the group algebra; for B/C/D groups modulo the metric
    condition ``Q = 1`` (denominators are invertible, so the numerator decides)."""
    if isinstance(x, LocalizedElement):
        if x.is_zero():
            return True
        x = x.num
    if not x:
        return True
    return grp.metric is not None and vanishes(grp, x)


def check(grp: QuantumGroup, rid: str, ref: str, diff, note: str = "") -> Check:
    ok = is_zero(grp, diff)
    return Check(rid, ref, ok, None if ok else str(diff), note)


_cache: Dict[str, GaussFactors] = {}


def decompose(grp: QuantumGroup) -> GaussFactors:
    """``gauss_decompose`` cached per preset group."""
    key = f"{grp.name}:{id(grp)}"
    if key not in _cache:
        _cache[key] = gauss_decompose(grp)
    return _cache[key]


# names of the Gauss generators

SUPER_NAMES = {
    "gl1|1": {"A": ("D", 1, 1), "B": ("D", 2, 2), "psi": ("U", 1, 2), "varsigma": ("L", 2, 1)},
    "gl2|1": {"A": ("D", 1, 1), "B": ("D", 2, 2), "C": ("D", 3, 3),
              "u": ("L", 2, 1), "v": ("L", 3, 1), "w": ("L", 3, 2),
              "x": ("U", 1, 2), "y": ("U", 1, 3), "z": ("U", 2, 3)},
}


def generators(factors: GaussFactors) -> Dict[str, LocalizedElement]:
    """``A_kk``, ``l_ij``, ``u_ij`` by name, plus the Greek/Latin aliases used
    for the supergroups."""
    n = factors.n
    out: Dict[str, LocalizedElement] = {}
    for k in range(n):
        out[f"A{k + 1}{k + 1}"] = factors.T_D[k]
    for i in range(n):
        for j in range(n):
            if i > j:
                out[f"l{i + 1}{j + 1}"] = factors.T_L[i][j]
            elif i < j:
                out[f"u{i + 1}{j + 1}"] = factors.T_U[i][j]
    src = {"D": lambda i, j: factors.T_D[i - 1], "L": lambda i, j: factors.T_L[i - 1][j - 1],
           "U": lambda i, j: factors.T_U[i - 1][j - 1]}
    for name, (kind, i, j) in SUPER_NAMES.get(factors.group.name, {}).items():
        out[name] = src[kind](i, j)
    return out


_ATOM = re.compile(r"^(\d+)$|^q(?:\^(-?\d+))?$|^lambda$|^\[(\d+)\]_q(\^-1)?$")


def parse_relation(text: str, names: Dict[str, LocalizedElement], loc: Localizer) -> LocalizedElement:
    """``lhs - rhs`` for a relation written as text.

    Sides are sums of products of space-separated factors: generator names,
    integers, ``q``, ``q^k``, ``lambda`` or ``[n]_q`` (optionally ``^-1``).
    A factor may carry a leading minus.  ``[X,Y]`` expands to ``X Y - Y X``.
    """
    text = re.sub(r"\[(\w+),\s*(\w+)\]", r"\1 \2 - \2 \1", text)
    lhs, rhs = text.split("=")
    return _side(lhs, names, loc) - _side(rhs, names, loc)


def _side(text: str, names, loc: Localizer) -> LocalizedElement:
    acc = loc.zero()
    coeff: QScalar = ONE
    value = loc.one()
    empty = True
    for tok in text.split() + ["+"]:
        if tok in ("+", "-"):
            if not empty:
                acc = acc + value.scale(coeff)
            coeff, value, empty = (ONE if tok == "+" else -ONE), loc.one(), True
            continue
        empty = False
        if tok.startswith("-"):
            coeff, tok = -coeff, tok[1:]
        m = _ATOM.match(tok)
        if tok in names:
            value = value * names[tok]
        elif m is None:
            raise KeyError(f"unknown symbol {tok!r}")
        elif m.group(1) is not None:
            coeff = coeff * as_scalar(int(m.group(1)))
        elif tok == "lambda":
            coeff = coeff * LAMBDA
        elif m.group(3) is not None:
            k = qint(int(m.group(3)))
            coeff = coeff * (k.inverse() if m.group(4) else k)
        else:
            coeff = coeff * qpow(int(m.group(2) or 1))
    return acc


def relation_checks(grp: QuantumGroup, factors: GaussFactors, ref: str,
                    relations: Sequence[str]) -> List[Check]:
    names = generators(factors)
    return [check(grp, r, ref, parse_relation(r, names, factors.loc)) for r in relations]


# -- matrix equations in the doubled space --------------------------------------

Sparse = Dict[Tuple[int, int], LocalizedElement]


def _slot(loc: Localizer, X, slot: int, n: int) -> Sparse:
    """``X_1 = X (x) 1`` or ``X_2 = 1 (x) X`` as a sparse ``n^2 x n^2`` matrix."""
    out: Sparse = {}
    for i in range(n):
        for k in range(n):
            x = loc.lift(X[i][k])
            if x.is_zero():
                continue
            for j in range(n):
                if slot == 1:
                    out[(i * n + j, k * n + j)] = x
                else:
                    out[(j * n + i, j * n + k)] = x
    return out


def _scalar(loc: Localizer, m: Dict[Tuple[int, int], QScalar]) -> Sparse:
    return {k: loc.lift(v) for k, v in m.items() if v}


def _sparse_mul(A: Sparse, B: Sparse) -> Sparse:
    rows: Dict[int, List[Tuple[int, LocalizedElement]]] = {}
    for (k, c), v in B.items():
        rows.setdefault(k, []).append((c, v))
    out: Sparse = {}
    for (r, k), a in A.items():
        for c, b in rows.get(k, ()):
            prod = a * b
            prev = out.get((r, c))
            out[(r, c)] = prod if prev is None else prev + prod
    return {k: v for k, v in out.items() if not v.is_zero()}


def matrix_equation(grp: QuantumGroup, rid: str, ref: str, left: Sequence[Sparse],
                    right: Sequence[Sparse]) -> Check:
    """Entrywise check of ``prod(left) = prod(right)``."""
    def prod(fs):
        out = fs[0]
        for f in fs[1:]:
            out = _sparse_mul(out, f)
        return out

    L, Rm = prod(list(left)), prod(list(right))
    n = grp.N
    bad = []
    for key in sorted(set(L) | set(Rm)):
        d = L.get(key, grp_zero(left)) - Rm.get(key, grp_zero(left))
        if not is_zero(grp, d):
            (r, c) = key
            bad.append(f"({r // n + 1}{r % n + 1},{c // n + 1}{c % n + 1}): {d}")
    return Check(rid, ref, not bad, "; ".join(bad[:3]) if bad else None,
                 f"{n ** 4} entries")


def grp_zero(factors: Sequence[Sparse]) -> LocalizedElement:
    for f in factors:
        for v in f.values():
            return v.loc.zero()
    raise ValueError("empty matrix product")


def _r_parts(grp: QuantumGroup, loc: Localizer):
    R = grp.R
    RD = R.diagonal()
    RDi = {k: v.inverse() for k, v in RD.items()}
    return _scalar(loc, R.entries), _scalar(loc, RD), _scalar(loc, RDi)


def _gl_only(grp: QuantumGroup) -> None:
    if grp.series() != "GL" or grp.is_super():
        raise ValueError(f"the R-matrix exchange equations are checked for GL_q(n) only, not {grp.name}")


def verify_rmatrix_exchange(grp: QuantumGroup, factors: GaussFactors) -> List[Check]:
    """``R X_1 X_2 = X_2 X_1 R`` for ``T^(+-)`` and the contracted relations
    with ``R_D`` (the diagonal part of ``R``)."""
    _gl_only(grp)
    loc, n = factors.loc, grp.N
    R, RD, _ = _r_parts(grp, loc)
    P1, P2 = _slot(loc, factors.T_plus, 1, n), _slot(loc, factors.T_plus, 2, n)
    M1, M2 = _slot(loc, factors.T_minus, 1, n), _slot(loc, factors.T_minus, 2, n)
    D = factors.diag_matrix()
    A1, A2 = _slot(loc, D, 1, n), _slot(loc, D, 2, n)
    return [
        matrix_equation(grp, "R T(+)_1 T(+)_2 = T(+)_2 T(+)_1 R", "Eq. 2.19", [R, P1, P2], [P2, P1, R]),
        matrix_equation(grp, "R T(-)_1 T(-)_2 = T(-)_2 T(-)_1 R", "Eq. 2.19", [R, M1, M2], [M2, M1, R]),
        matrix_equation(grp, "R A_1 A_2 = A_2 A_1 R", "Eq. 2.20", [R, A1, A2], [A2, A1, R]),
        matrix_equation(grp, "R_D A_1 T(-)_2 = T(-)_2 A_1 R_D", "Eq. 2.22", [RD, A1, M2], [M2, A1, RD]),
        matrix_equation(grp, "R_D T(+)_1 A_2 = A_2 T(+)_1 R_D", "Eq. 2.23", [RD, P1, A2], [A2, P1, RD]),
        matrix_equation(grp, "R_D T(+)_1 T(-)_2 = T(-)_2 T(+)_1 R_D", "Eq. 2.24a", [RD, P1, M2], [M2, P1, RD]),
    ]


def verify_factor_relations(grp: QuantumGroup, factors: GaussFactors) -> List[Check]:
    """Commutation rules among the Gauss generators, per group family."""
    if grp.name in SUPER_RELATIONS:
        ref, rels = SUPER_RELATIONS[grp.name]
        return relation_checks(grp, factors, ref, rels)
    if grp.series() == "C":
        return symplectic_relations(grp, factors)
    if grp.series() == "GL" and not grp.is_super():
        return gl_factor_relations(grp, factors)
    return []


def gl_factor_relations(grp: QuantumGroup, factors: GaussFactors) -> List[Check]:
    loc, n = factors.loc, grp.N
    R, RD, RDi = _r_parts(grp, loc)
    L1, L2 = _slot(loc, factors.T_L, 1, n), _slot(loc, factors.T_L, 2, n)
    U1, U2 = _slot(loc, factors.T_U, 1, n), _slot(loc, factors.T_U, 2, n)
    D = factors.diag_matrix()
    D1, D2 = _slot(loc, D, 1, n), _slot(loc, D, 2, n)
    P1 = _slot(loc, factors.T_plus, 1, n)
    M2 = _slot(loc, factors.T_minus, 2, n)
    out = []
    A = factors.T_D
    for i in range(n):
        for j in range(i + 1, n):
            out.append(check(grp, f"[A{i + 1}{i + 1},A{j + 1}{j + 1}] = 0", "Eq. 2.21", A[i] * A[j] - A[j] * A[i]))
    out += [
        matrix_equation(grp, "R T_U1 R_D T_U2 = T_U2 R_D T_U1 R", "Eq. 2.25", [R, U1, RD, U2], [U2, RD, U1, R]),
        matrix_equation(grp, "R T_L1 R_D^-1 T_L2 = T_L2 R_D^-1 T_L1 R", "Eq. 2.25a", [R, L1, RDi, L2], [L2, RDi, L1, R]),
        matrix_equation(grp, "R_D T_D1 T_L2 = T_L2 T_D1 R_D", "Eq. 2.26", [RD, D1, L2], [L2, D1, RD]),
        matrix_equation(grp, "R_D T_U1 T_D2 = T_D2 T_U1 R_D", "Eq. 2.27", [RD, U1, D2], [D2, U1, RD]),
        matrix_equation(grp, "T_U1 T_L2 = T_L2 T_U1", "Eq. 2.27a", [U1, L2], [L2, U1]),
        matrix_equation(grp, "R_D T(+)_1 T_L2 = T_L2 R_D T(+)_1", "Eq. 2.26-1", [RD, P1, L2], [L2, RD, P1]),
        # T_U1 here; the same equation with T_L1 does not hold
        matrix_equation(grp, "T(-)_2 R_D^-1 T_U1 = T_U1 T(-)_2 R_D^-1", "Eq. 2.27-1", [M2, RDi, U1], [U1, M2, RDi]),
    ]
    return out


SUPER_RELATIONS = {
    "gl1|1": ("Eq. 4.10", [
        "[A,B] = 0", "A psi = q psi A", "A varsigma = q varsigma A", "psi psi = 0",
        "varsigma varsigma = 0", "psi varsigma + varsigma psi = 0", "B psi = q psi B",
        "B varsigma = q varsigma B"]),
    "gl2|1": ("GL_q(2|1) Gauss generator relations after Eq. 4.18", [
        "A x = q x A", "A y = q y A", "A z = z A", "A u = q u A", "A v = q v A", "A w = w A",
        "B x = q^-1 x B", "B y = y B", "B z = q z B", "B u = q^-1 u B", "B v = v B", "B w = q w B",
        "C x = x C", "C y = q y C", "C z = q z C", "C u = u C", "C v = q v C", "C w = q w C",
        "[A,B] = 0", "[A,C] = 0", "[B,C] = 0",
        "y y = 0", "z z = 0", "v v = 0", "w w = 0",
        "x y = q y x", "y z = -q^-1 z y", "q x z - z x = lambda y",
        "u v = q v u", "v w = -q^-1 w v", "u w - q^-1 w u = lambda v",
        "[x,u] = 0", "[x,v] = 0", "[x,w] = 0", "[u,y] = 0", "[u,z] = 0",
        "y v + v y = 0", "y w + w y = 0", "z v + v z = 0", "z w + w z = 0"]),
}


def symplectic_relations(grp: QuantumGroup, factors: GaussFactors) -> List[Check]:
    """The grouped Sp_q(2) relations (I)-(V) among ``A_kk``, ``l_ij``, ``u_ij``."""
    n = grp.N
    rels: List[Tuple[str, str]] = []
    for k in range(1, n + 1):
        for j in range(k + 1, n + 1):
            rels.append(("Eq. 5.12 (I)", f"[A{k}{k},A{j}{j}] = 0"))
    rels += [("Eq. 5.12 (II)", r) for r in (
        "l21 l31 = q^2 l31 l21 + q lambda l41",
        "l32 l21 = q^2 l21 l32 - q^4 l31 + l31",
        "l31 l32 = q^2 l32 l31")]
    lower = [(i, j) for i in range(2, n + 1) for j in range(1, i)]
    upper = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    rels += [("Eq. 5.12 (II)", f"[l41,l{i}{j}] = 0") for i, j in lower if (i, j) != (4, 1)]
    rels += [("Eq. 5.12 (III)", r) for r in (
        "u12 u13 = q^2 u13 u12 + q lambda u14",
        "u23 u12 = q^2 u12 u23 - q^2 u13 + q^-2 u13",
        "u13 u23 = q^2 u23 u13")]
    rels += [("Eq. 5.12 (III)", f"[u14,u{i}{j}] = 0") for i, j in upper if (i, j) != (1, 4)]

    def d(a, b):
        return 1 if a == b else 0

    for m in range(1, n + 1):
        mp = n + 1 - m
        for i, j in lower:
            e = d(m, j) - d(m, n + 1 - j) - d(m, i) + d(m, n + 1 - i)
            rels.append(("Eq. 5.12 (IV)", f"A{m}{m} l{i}{j} = q^{e} l{i}{j} A{m}{m}"))
        for i, j in upper:
            e = d(i, m) - d(i, mp) - d(j, m) + d(j, mp)
            rels.append(("Eq. 5.12 (IV)", f"A{m}{m} u{i}{j} = q^{e} u{i}{j} A{m}{m}"))
    rels += [("Eq. 5.12 (V)", f"[u{k}{l},l{i}{j}] = 0") for k, l in upper for i, j in lower]
    names = generators(factors)
    return [check(grp, r, ref, parse_relation(r, names, factors.loc)) for ref, r in rels]


# -- determinants from the diagonal ----------------------------------------------

def diagonal_product(factors: GaussFactors, k: Optional[int] = None) -> LocalizedElement:
    out = factors.loc.one()
    for A in factors.T_D[:k]:
        out = out * A
    return out


def det_product_check(grp: QuantumGroup, factors: GaussFactors) -> Check:
    """``det_q T = prod (T_D)_ii`` (GL) or the superdeterminant ratio (super)."""
    if grp.is_super():
        sd = sdet(grp, factors.T_D)
        return Check("s-det_q T central", "Eq. 4.7", _central(grp, sd))
    return check(grp, "det_q T = prod (T_D)_ii", "Eq. 2.28-1",
                 factors.loc.lift(qdet(grp)) - diagonal_product(factors))


def _central(grp: QuantumGroup, x: LocalizedElement) -> bool:
    loc = x.loc
    a = grp.alphabet
    return all(is_zero(grp, x * loc.lift(a.gen(i)) - loc.lift(a.gen(i)) * x) for i in range(len(a)))


def symplectic_determinant_checks(grp: QuantumGroup, factors: GaussFactors) -> List[Check]:
    """``D^sp[1,2,3] = D^sp[1]`` and ``D^sp(T) = 1`` with ``D^sp[1..k]`` the
    product of the first k diagonal Gauss factors (the principal-minor
    expressions on the diagonal of ``T^(+)``)."""
    return [
        check(grp, "Dsp[123]=Dsp[1]", "Eq. 5.10", diagonal_product(factors, 3) - diagonal_product(factors, 1)),
        check(grp, "Dsp(T)=1", "Eq. 5.10", diagonal_product(factors) - 1),
    ]


def exchange_exponent(grp: QuantumGroup, A: LocalizedElement, x: LocalizedElement,
                      search: range = range(-4, 5)) -> Optional[int]:
    """``e`` with ``A x = q^e x A``, or ``None``."""
    for e in search:
        if is_zero(grp, A * x - (x * A).scale(qpow(e))):
            return e
    return None


def telescoping_checks(grp: QuantumGroup, factors: GaussFactors) -> List[Check]:
    """Centrality of ``prod A_ii`` seen generator by generator: the exchange
    exponents of each ``u``/``l`` against the diagonal factors sum to zero."""
    out = []
    names = generators(factors)
    for name, x in sorted(names.items()):
        if not re.fullmatch(r"[lu]\d\d", name):
            continue
        exps = [exchange_exponent(grp, A, x) for A in factors.T_D]
        ok = None not in exps and sum(exps) == 0
        out.append(Check(f"sum_i e(A_ii, {name}) = 0", "Eq. 2.28-1 context (q-factor telescoping)", ok,
                         None if ok else str(exps)))
    return out


# -- B/C/D constraints -------------------------------------------------------------

def constraint_check_bcd(grp: QuantumGroup, factors: GaussFactors) -> List[Check]:
    """Diagonal constraints, the ``T_L`` conditions, the metric condition for
    ``T^(+-)`` and the dependent-generator substitutions."""
    if grp.metric is None:
        raise ValueError(f"{grp.name} has no metric condition")
    loc, N = factors.loc, grp.N
    A = factors.T_D
    out = []
    for i in range(1, (N + 1) // 2 + 1):
        ip = N + 1 - i
        out.append(check(grp, f"A{i}{i} A{ip}{ip} = 1", "Eq. 3.14", A[i - 1] * A[ip - 1] - 1))
    out += tl_conditions(grp, factors)
    out += metric_condition_factors(grp, factors)
    for dep, expr, ref in dependent_substitutions(grp):
        names = generators(factors)
        out.append(check(grp, f"{dep} = {expr}", ref, parse_relation(f"{dep} = {expr}", names, loc)))
    return out


def tl_conditions(grp: QuantumGroup, factors: GaussFactors) -> List[Check]:
    """Both families of quadratic conditions on ``(T_L)_ij``."""
    loc, N, R = factors.loc, grp.N, grp.R
    eps, rho = R.eps, R.rho
    sgn = -1 if R.series == "C" else 1
    L = factors.T_L
    out = []
    for m in range(1, N + 1):
        for n in range(1, N + 1):
            acc = loc.zero()
            for k in range(1, N + 1):
                kp = N + 1 - k
                c = qpow(rho[kp - 1], eps[k - 1]) * R.entry(k, kp, k, kp) * R.entry(k, n, k, n).inverse()
                acc = acc + (L[m - 1][k - 1] * L[n - 1][kp - 1]).scale(c)
            rhs = qpow(rho[n - 1], eps[N - n]) if m == N + 1 - n else 0
            out.append(check(grp, f"T_L row condition (m,n)=({m},{n})", "Eq. 3.15", acc - rhs))
            acc = loc.zero()
            for l in range(1, N + 1):
                lp = N + 1 - l
                c = qpow(rho[lp - 1], eps[l - 1]) * R.entry(m, n, m, n) * R.entry(m, lp, m, lp).inverse()
                acc = acc + (L[l - 1][m - 1] * L[lp - 1][n - 1]).scale(c)
            rhs = qpow(-rho[m - 1], sgn * eps[N - m]) if m == N + 1 - n else 0
            out.append(check(grp, f"T_L column condition (m,n)=({m},{n})", "Eq. 3.16", acc - rhs))
    return out


def metric_condition_factors(grp: QuantumGroup, factors: GaussFactors) -> List[Check]:
    """``X C X^t C^{-1} = 1 = C X^t C^{-1} X`` for ``X = T^(+), T^(-)``."""
    loc, N = factors.loc, grp.N
    C = [[loc.lift(grp.C.entry(i, j)) for j in range(1, N + 1)] for i in range(1, N + 1)]
    Ci = [[loc.lift(grp.C.inverse().entry(i, j)) for j in range(1, N + 1)] for i in range(1, N + 1)]
    out = []
    for name, X in (("T(+)", factors.T_plus), ("T(-)", factors.T_minus)):
        Xt = [[X[j][i] for j in range(N)] for i in range(N)]
        for label, M in ((f"{name} C {name}^t C^-1 = 1", mat_mul_loc(loc, mat_mul_loc(loc, mat_mul_loc(loc, X, C), Xt), Ci)),
                         (f"C {name}^t C^-1 {name} = 1", mat_mul_loc(loc, mat_mul_loc(loc, mat_mul_loc(loc, C, Xt), Ci), X))):
            bad = [f"({i + 1},{j + 1}): {M[i][j] - (1 if i == j else 0)}" for i in range(N) for j in range(N)
                   if not is_zero(grp, M[i][j] - (1 if i == j else 0))]
            out.append(Check(label, "Eq. 3.2 for T(+-) (Sec. 3)", not bad, "; ".join(bad[:3]) or None))
    return out


def dependent_substitutions(grp: QuantumGroup) -> List[Tuple[str, str, str]]:
    """``(dependent generator, expression, reference)`` for the B/C/D presets."""
    if grp.name == "sp2":
        return [
            ("l42", "q^2 l31 - l21 l32", "Eq. 5.13"),
            ("l43", "-1 l21", "Eq. 5.13"),
            ("u24", "q^2 u13 - q^2 u12 u23", "Eq. 5.13"),
            ("u34", "-1 u12", "Eq. 5.13"),
        ]
    if grp.name == "so3":
        return [
            ("l31", "[2]_q^-1 l21 l21", "Sec. 4 SO_q(3)"),
            ("l32", "q^-1 l21", "Sec. 4 SO_q(3)"),
            ("u13", "[2]_q^-1 u12 u12", "Sec. 4 SO_q(3)"),
            ("u23", "q u12", "Sec. 4 SO_q(3)"),
        ]
    return []


def independent_generators(grp: QuantumGroup) -> List[str]:
    """Gauss generators left after removing the dependent ones: the
    ``A_{i'i'}`` fixed by ``A_ii A_{i'i'} = 1`` (and a self-paired middle
    ``A``, which only takes the values +-1) plus the substituted entries."""
    N = grp.N
    names = [f"A{k}{k}" for k in range(1, N + 1)]
    names += [f"l{i}{j}" for i in range(2, N + 1) for j in range(1, i)]
    names += [f"u{i}{j}" for i in range(1, N + 1) for j in range(i + 1, N + 1)]
    if grp.metric is None:
        return names
    dropped = {f"A{k}{k}" for k in range(N // 2 + 1, N + 1)}
    dropped |= {dep for dep, _, _ in dependent_substitutions(grp)}
    return [x for x in names if x not in dropped]


# -- explicit factor entries ---------------------------------------------------------

def _reduced(x: LocalizedElement) -> str:
    return str(x.loc.simplify(x))


def value_check(rid: str, ref: str, got: LocalizedElement, want: LocalizedElement, note: str = "") -> Check:
    """String equality of the reduced serializations."""
    a, b = _reduced(got), _reduced(want)
    return Check(rid, ref, a == b, None if a == b else f"got {a}; expected {b}", note)


def closed_form_values(grp: QuantumGroup, factors: GaussFactors) -> List[Check]:
    """Closed-form entries of the Gauss factors for the worked examples."""
    loc = factors.loc
    out: List[Check] = []
    if grp.series() == "GL" and not grp.is_super():
        D = [loc.one()] + [loc.lift(minor(grp, range(1, k + 1), range(1, k + 1))) for k in range(1, grp.N + 1)]
        for i in range(2, grp.N + 1):
            inv = loc.inverse_of(loc.find(D[i - 1].num))
            out.append(value_check(f"(T(+))_{i}{i} = D{i - 1}^-1 D{i}", "Eq. 2.11", factors.T_plus[i - 1][i - 1],
                                   inv * D[i]))
    if grp.name == "gl2":
        out += _gl2_values(grp, factors)
    elif grp.name == "gl1|1":
        out += _gl11_values(grp, factors)
    elif grp.name == "sp2":
        out += _sp2_values(grp, factors)
    return out


def _t(grp: QuantumGroup, loc: Localizer):
    return lambda i, j: loc.lift(grp.t(i, j))


def _gl2_values(grp: QuantumGroup, factors: GaussFactors) -> List[Check]:
    loc, t = factors.loc, _t(grp, factors.loc)
    ainv = loc.inverse_of(loc.find(grp.t(1, 1)))
    det = loc.lift(qdet(grp))
    return [
        value_check("A11 = a", "Sec. 2 GL_q(2) example", factors.T_D[0], t(1, 1)),
        value_check("A22 = det_q T / a", "Sec. 2 GL_q(2) example", factors.T_D[1], ainv * det),
        value_check("l21 = c a^-1", "Sec. 2 GL_q(2) example", factors.T_L[1][0], t(2, 1) * ainv),
        value_check("u12 = b (qa)^-1", "Sec. 2 GL_q(2) example", factors.T_U[0][1],
                    (t(1, 2) * ainv).scale(qpow(-1)), "equals a^-1 b"),
    ]


def _gl11_values(grp: QuantumGroup, factors: GaussFactors) -> List[Check]:
    loc, t = factors.loc, _t(grp, factors.loc)
    a, beta, gamma, d = t(1, 1), t(1, 2), t(2, 1), t(2, 2)
    ainv = loc.inverse_of(loc.find(grp.t(1, 1)))
    B = d - gamma * ainv * beta
    out = [
        value_check("A = a", "Eq. 4.9", factors.T_D[0], a),
        value_check("psi = A^-1 beta", "Eq. 4.9", factors.T_U[0][1], ainv * beta),
        value_check("varsigma = gamma A^-1", "Eq. 4.9", factors.T_L[1][0], gamma * ainv),
        value_check("B = d - gamma A^-1 beta", "Eq. 4.9", factors.T_D[1], B),
    ]
    sd = sdet(grp, factors.T_D)
    ber = invert(loc, loc.lift(grp.nf(grp.t(1, 1) * grp.t(2, 2) - (grp.t(2, 1) * grp.t(1, 2)).scale(qpow(1)))), "A")
    out.append(check(grp, "s-det_q T = a^2 (a d - q gamma beta)^-1", "Eq. 4.11", sd - a * a * ber))
    out.append(check(grp, "s-det_q T = a (d - gamma a^-1 beta)^-1", "Eq. 4.11", sd - a * invert(loc, B, "A")))
    return out


def _sp2_values(grp: QuantumGroup, factors: GaussFactors) -> List[Check]:
    loc, t = factors.loc, _t(grp, factors.loc)

    def D(rows, cols):
        return loc.lift(minor(grp, rows, cols))

    D1i = loc.inverse_of(loc.find(grp.t(1, 1)))
    D2i = loc.inverse_of(loc.find(minor(grp, [1, 2], [1, 2])))
    W, TL, TP = factors.W_L, factors.T_L, factors.T_plus
    q2 = qpow(2)
    w = {
        (2, 1): -t(2, 1) * D1i,
        # D[23|12], not D[23|13]
        (3, 1): (D([2, 3], [1, 2]) - D([1, 4], [1, 2]).scale(LAMBDA)) * D2i,
        (3, 2): -D([1, 3], [1, 2]) * D2i,
        (4, 1): -(t(4, 1) * D1i).scale(q2),
        (4, 2): -(t(3, 1) * D1i).scale(q2),
        (4, 3): t(2, 1) * D1i,
    }
    l = {
        (2, 1): t(2, 1) * D1i,
        (3, 1): t(3, 1) * D1i,
        (3, 2): D([1, 3], [1, 2]) * D2i,
        (4, 1): t(4, 1) * D1i,
        (4, 2): (D([1, 4], [1, 2]) * D2i).scale(qpow(-1)),
        (4, 3): -t(2, 1) * D1i,
    }
    out = []
    for (i, j), v in sorted(w.items()):
        out.append(value_check(f"w{i}{j}", "Eq. 5.7", W[i - 1][j - 1], v,
                               "minor read as D[23|12]" if (i, j) == (3, 1) else ""))
    for (i, j), v in sorted(l.items()):
        out.append(value_check(f"(T_L){i}{j}", "Eq. 5.11", TL[i - 1][j - 1], v))
    a = grp.alphabet
    plus = {
        (1, 1): t(1, 1), (1, 2): t(1, 2), (1, 3): t(1, 3), (1, 4): t(1, 4),
        (2, 2): D1i * D([1, 2], [1, 2]), (2, 3): D1i * D([1, 2], [1, 3]),
        (2, 4): D1i * loc.lift(grp.nf(grp.t(1, 1) * grp.t(2, 4) - (grp.t(1, 4) * grp.t(2, 1)).scale(q2))),
        (3, 3): D2i * t(1, 1),
        # D2^-1, not D1^-1
        (3, 4): -(D2i * t(1, 2)),
        (4, 4): D1i,
    }
    for (i, j), v in sorted(plus.items()):
        out.append(check(grp, f"(T(+)){i}{j}", "Sec. 5 T(+) display", TP[i - 1][j - 1] - v,
                         "D2^-1 read for D1^-1" if (i, j) == (3, 4) else ""))
    del a
    return out
