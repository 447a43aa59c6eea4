"""Quantum (super)groups from R-matrices: FRT relations, their orientation
into a rewrite system, the orthogonal/symplectic metric conditions, and the
preset table of worked cases."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .ncalg import (Alphabet, Generator, NCPolynomial, RewriteError, RewriteSystem, Word,
                    format_poly, word_key)
from .rmat import (CMatrixSpec, RMatrixSpec, build_bcd, build_gl, build_super_gl, c_matrix)
from .scalar import ONE, ZERO, QScalar, qint, qpow


@dataclass
class Relation:
    """``lhs = rhs`` between polynomials of one algebra."""

    lhs: NCPolynomial
    rhs: NCPolynomial

    def poly(self) -> NCPolynomial:
        return self.lhs - self.rhs

    def __str__(self) -> str:
        return f"{format_poly(self.lhs)} = {format_poly(self.rhs)}"


# generator names used by the worked cases; anything else is t<row><col>
ALIASES: Dict[str, Dict[Tuple[int, int], str]] = {
    "gl2": {(1, 1): "a", (1, 2): "b", (2, 1): "c", (2, 2): "d"},
    "gl1|1": {(1, 1): "a", (1, 2): "beta", (2, 1): "gamma", (2, 2): "d"},
    "gl2|1": {(1, 1): "a", (1, 2): "b", (1, 3): "alpha",
              (2, 1): "c", (2, 2): "d", (2, 3): "beta",
              (3, 1): "gamma", (3, 2): "delta", (3, 3): "f"},
}


def make_alphabet(N: int, grading: Sequence[int], names: Optional[Dict[Tuple[int, int], str]] = None,
                  group_id: str = "") -> Alphabet:
    names = names or {}
    gens = []
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            gens.append(Generator(names.get((i, j), f"t{i}{j}"), i, j,
                                  (grading[i - 1] + grading[j - 1]) & 1, group_id))
    return Alphabet(gens)


def t_matrix(alphabet: Alphabet, N: int) -> List[List[NCPolynomial]]:
    return [[alphabet.gen((i, j)) for j in range(1, N + 1)] for i in range(1, N + 1)]


def frt_polynomials(R: RMatrixSpec, alphabet: Alphabet) -> List[NCPolynomial]:
    """Entries of ``R T1 T2 - T2 T1 R`` with graded tensor signs.

    ``(T1 T2)_{ij,mn} = (-1)^{p(j)(p(i)+p(m))} t_im t_jn`` and
    ``(T2 T1)_{ij,mn} = (-1)^{p(n)(p(i)+p(m))} t_jn t_im``.
    """
    N = R.N
    p = R.grading
    at = alphabet.by_position

    def t1t2(a: int, b: int) -> Tuple[Word, int]:
        i, j = divmod(a, N)
        m, n = divmod(b, N)
        s = -1 if p[j] and (p[i] + p[m]) & 1 else 1
        return (at[(i + 1, m + 1)], at[(j + 1, n + 1)]), s

    def t2t1(a: int, b: int) -> Tuple[Word, int]:
        i, j = divmod(a, N)
        m, n = divmod(b, N)
        s = -1 if p[n] and (p[i] + p[m]) & 1 else 1
        return (at[(j + 1, n + 1)], at[(i + 1, m + 1)]), s

    rows: Dict[int, List[Tuple[int, QScalar]]] = {}
    cols: Dict[int, List[Tuple[int, QScalar]]] = {}
    for (r, c), v in R.entries.items():
        rows.setdefault(r, []).append((c, v))
        cols.setdefault(c, []).append((r, v))
    out = []
    size = N * N
    for a in range(size):
        for b in range(size):
            terms: Dict[Word, QScalar] = {}

            def add(w: Word, v: QScalar) -> None:
                s = terms.get(w, ZERO) + v
                if s:
                    terms[w] = s
                else:
                    terms.pop(w, None)

            for c, v in rows.get(a, ()):
                w, s = t1t2(c, b)
                add(w, v if s > 0 else -v)
            for c, v in cols.get(b, ()):
                w, s = t2t1(a, c)
                add(w, -v if s > 0 else v)
            if terms:
                out.append(NCPolynomial(alphabet, terms))
    return out


def _monic(p: NCPolynomial) -> NCPolynomial:
    _, c = p.leading_term()
    return p.scale(c.inverse())


def dedup(polys: Sequence[NCPolynomial]) -> List[NCPolynomial]:
    """Drop zero polynomials and scalar multiples of earlier ones."""
    seen = {}
    for p in polys:
        if not p:
            continue
        m = _monic(p)
        key = format_poly(m)
        seen.setdefault(key, m)
    return list(seen.values())


def independent(polys: Sequence[NCPolynomial]) -> List[NCPolynomial]:
    """Keep each polynomial only if it is not in the span of those kept before."""
    kept: List[NCPolynomial] = []
    rank = 0
    for p in polys:
        r = len(row_reduce(kept + [p]))
        if r > rank:
            kept.append(p)
            rank = r
    return kept


def frt_relations(R: RMatrixSpec, alphabet: Optional[Alphabet] = None) -> List[NCPolynomial]:
    """Linearly independent quadratic relations of the FRT algebra of ``R``
    (zero entries dropped, scalar multiples and combinations merged)."""
    if alphabet is None:
        alphabet = make_alphabet(R.N, R.grading)
    if not R.is_even():
        raise ValueError("R-matrix is not even with respect to its grading")
    return independent(dedup(frt_polynomials(R, alphabet)))


def row_reduce(polys: Sequence[NCPolynomial]) -> Dict[Word, Dict[Word, QScalar]]:
    """Fully reduced echelon form with the graded-lex greatest word as pivot.

    Returns ``{pivot: {word: coeff}}`` with pivot coefficient 1 and no pivot
    word appearing in another row.
    """
    rows: Dict[Word, Dict[Word, QScalar]] = {}
    for p in polys:
        v = dict(p.terms)
        # reduce against existing pivots, greatest first
        while v:
            piv = max(v, key=word_key)
            if piv in rows:
                c = v[piv]
                for w, x in rows[piv].items():
                    s = v.get(w, ZERO) - c * x
                    if s:
                        v[w] = s
                    else:
                        v.pop(w, None)
                continue
            c = v[piv].inverse()
            v = {w: x * c for w, x in v.items()}
            # clear this pivot from the others
            for other, r in rows.items():
                k = r.get(piv)
                if k:
                    for w, x in v.items():
                        s = r.get(w, ZERO) - k * x
                        if s:
                            r[w] = s
                        else:
                            r.pop(w, None)
            rows[piv] = v
            break
    # back-substitution pass so every row is free of later pivots
    changed = True
    while changed:
        changed = False
        for piv, r in rows.items():
            for w in list(r):
                if w != piv and w in rows and w in r:
                    k = r[w]
                    for u, x in rows[w].items():
                        s = r.get(u, ZERO) - k * x
                        if s:
                            r[u] = s
                        else:
                            r.pop(u, None)
                    changed = True
    return rows


def orient(polys: Sequence[NCPolynomial], alphabet: Alphabet, budget: Optional[int] = None,
           require_complete: bool = True) -> RewriteSystem:
    """Rewrite system whose rules are the rows of the reduced echelon form.

    Each relation is solved for its greatest word; all other words of a row
    are smaller, so rewriting terminates.  Missing heads (an unsorted pair
    or odd square without a rule) raise :class:`RewriteError`.
    """
    rows = row_reduce(polys)
    rules = {}
    for piv, r in rows.items():
        if len(piv) != 2:
            raise RewriteError(f"relation with leading word of length {len(piv)} cannot be oriented")
        rules[piv] = {w: -c for w, c in r.items() if w != piv}
    return RewriteSystem(alphabet, rules, budget=budget, require_complete=require_complete)


def same_span(a: Sequence[NCPolynomial], b: Sequence[NCPolynomial]) -> bool:
    """True iff both lists span the same space of polynomials."""
    ra, rb = row_reduce(a), row_reduce(b)
    if set(ra) != set(rb):
        return False
    return all(ra[k] == rb[k] for k in ra)


# -- matrices of polynomials ------------------------------------------------

def mat_mul(sys: RewriteSystem, A, B):
    n, m, k = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = sys.alphabet.zero()
            for l in range(m):
                if A[i][l] and B[l][j]:
                    acc = acc + sys.normal_form(A[i][l] * B[l][j])
            row.append(acc)
        out.append(row)
    return out


def scalar_matrix(alphabet: Alphabet, C: CMatrixSpec):
    one = alphabet.one()
    return [[one.scale(C.entry(i, j)) if C.entry(i, j) else alphabet.zero()
             for j in range(1, C.N + 1)] for i in range(1, C.N + 1)]


def transpose(A):
    return [list(r) for r in zip(*A)]


# -- groups ----------------------------------------------------------------

@dataclass
class QuantumGroup:
    name: str
    N: int
    grading: Tuple[int, ...]
    R: RMatrixSpec
    alphabet: Alphabet
    system: RewriteSystem
    relations: List[NCPolynomial]
    C: Optional[CMatrixSpec] = None
    metric: Optional[NCPolynomial] = None
    aliases: Dict[Tuple[int, int], str] = field(default_factory=dict)

    @property
    def T(self) -> List[List[NCPolynomial]]:
        return t_matrix(self.alphabet, self.N)

    def t(self, i: int, j: int) -> NCPolynomial:
        return self.alphabet.gen((i, j))

    def nf(self, p: NCPolynomial) -> NCPolynomial:
        return self.system.normal_form(p)

    def is_super(self) -> bool:
        return any(self.grading)

    def series(self) -> str:
        return self.R.series

    def rules_as_relations(self) -> List[Relation]:
        out = []
        for head in sorted(self.system.rules, key=word_key, reverse=True):
            lhs = NCPolynomial(self.alphabet, {head: ONE})
            rhs = NCPolynomial(self.alphabet, dict(self.system.rules[head]))
            out.append(Relation(lhs, rhs))
        return out

    def weight(self, word: Word) -> Tuple:
        """Multigrading preserved by the relations (rows and columns)."""
        n = self.N
        rw = [0] * n
        cw = [0] * n
        for x in word:
            g = self.alphabet[x]
            _bump(rw, g.row, n, self.R.series)
            _bump(cw, g.col, n, self.R.series)
        return (len(word), tuple(rw), tuple(cw))


def _bump(vec: List[int], i: int, n: int, series: str) -> None:
    if series in ("B", "C", "D"):
        j = n + 1 - i
        if i < j:
            vec[i - 1] += 1
        elif i > j:
            vec[j - 1] -= 1
    else:
        vec[i - 1] += 1


def build_group(name: str, R: RMatrixSpec, aliases: Optional[Dict[Tuple[int, int], str]] = None,
                budget: Optional[int] = None) -> QuantumGroup:
    alphabet = make_alphabet(R.N, R.grading, aliases, name)
    rels = frt_relations(R, alphabet)
    system = orient(rels, alphabet, budget=budget)
    if system.check_confluence(3):
        # cubic consequences exist (B series); heads stay short, so checking
        # ambiguities up to twice the longest head covers all of them
        while True:
            system = system.complete(2 * system.max_head())
            if not system.check_confluence(2 * system.max_head()):
                break
    grp = QuantumGroup(name, R.N, R.grading, R, alphabet, system, rels, aliases=dict(aliases or {}))
    if R.series in ("B", "C", "D"):
        grp.C = c_matrix(R)
        grp.metric = metric_element(grp)
    return grp


# -- orthogonal / symplectic metric conditions ------------------------------

def metric_matrices(grp: QuantumGroup):
    """``T C T^t C^{-1}`` and ``C T^t C^{-1} T`` in normal form."""
    T = grp.T
    C = scalar_matrix(grp.alphabet, grp.C)
    Ci = scalar_matrix(grp.alphabet, grp.C.inverse())
    Tt = transpose(T)
    sys = grp.system
    left = mat_mul(sys, mat_mul(sys, mat_mul(sys, T, C), Tt), Ci)
    right = mat_mul(sys, mat_mul(sys, mat_mul(sys, C, Tt), Ci), T)
    return left, right


def metric_element(grp: QuantumGroup) -> NCPolynomial:
    """The element ``Q`` with ``T C T^t C^{-1} = C T^t C^{-1} T = Q 1``.

    Raises ``ValueError`` when the two products are not the same scalar
    matrix in the FRT algebra.
    """
    left, right = metric_matrices(grp)
    Q = left[0][0]
    N = grp.N
    for i in range(N):
        for j in range(N):
            want = Q if i == j else grp.alphabet.zero()
            if left[i][j] != want or right[i][j] != want:
                raise ValueError(f"metric products are not scalar at ({i + 1},{j + 1})")
    return Q


def c_conditions(grp: QuantumGroup) -> List[Relation]:
    """Elementwise form of ``T C T^t C^{-1} = 1 = C T^t C^{-1} T``.

    ``sum_k eps_k q^{rho_k'} t_ik t_jk' = eps_j' delta_ij' q^{rho_j}`` and
    ``sum_l eps_l q^{rho_l'} t_li t_l'j = eps eps_i' delta_i'j q^{-rho_i}``,
    with ``eps = -1`` for the C series.  Relations with a nonzero right-hand
    side come first; they are the ones independent of the FRT relations.
    """
    if grp.C is None:
        raise ValueError(f"{grp.name} has no metric")
    N = grp.N
    eps = grp.R.eps
    rho = grp.R.rho
    sgn = -1 if grp.R.series == "C" else 1
    a = grp.alphabet
    inhom, hom = [], []
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            jp = N + 1 - j
            ip = N + 1 - i
            lhs = a.zero()
            for k in range(1, N + 1):
                kp = N + 1 - k
                lhs = lhs + (grp.t(i, k) * grp.t(j, kp)).scale(qpow(rho[kp - 1], eps[k - 1]))
            rhs = a.one().scale(qpow(rho[j - 1], eps[jp - 1])) if i == jp else a.zero()
            (inhom if rhs else hom).append(Relation(lhs, rhs))
            lhs = a.zero()
            for l in range(1, N + 1):
                lp = N + 1 - l
                lhs = lhs + (grp.t(l, i) * grp.t(lp, j)).scale(qpow(rho[lp - 1], eps[l - 1]))
            rhs = a.one().scale(qpow(-rho[i - 1], sgn * eps[ip - 1])) if j == ip else a.zero()
            (inhom if rhs else hom).append(Relation(lhs, rhs))
    return inhom + hom


def homogenize(grp: QuantumGroup, p: NCPolynomial) -> List[NCPolynomial]:
    """Lift ``p`` along the metric ``Q``: one homogeneous polynomial per
    degree parity, ``sum_d p_d Q^{(D-d)/2}``.

    ``p`` vanishes modulo ``Q = 1`` whenever every lift is zero in the FRT
    algebra, because ``Q`` is central.
    """
    if grp.metric is None:
        return [grp.nf(p)]
    parts: Dict[int, Dict[int, NCPolynomial]] = {}
    for w, c in p.terms.items():
        d = len(w)
        cls = parts.setdefault(d & 1, {})
        cls[d] = cls.get(d, grp.alphabet.zero()) + NCPolynomial(grp.alphabet, {w: c})
    out = []
    Q = grp.metric
    for cls in parts.values():
        top = max(cls)
        acc = grp.alphabet.zero()
        for d, f in cls.items():
            g = grp.nf(f)
            for _ in range((top - d) // 2):
                g = grp.system.mul(g, Q)
            acc = acc + g
        out.append(acc)
    return out


def vanishes(grp: QuantumGroup, p: NCPolynomial) -> bool:
    """``p = 0`` in the group algebra (modulo the metric condition if any)."""
    return all(not h for h in homogenize(grp, p))


# -- presets ---------------------------------------------------------------

_GL = re.compile(r"^gl\(?(\d+)\)?$")
_SUPER = re.compile(r"^gl\(?(\d+)\|(\d+)\)?$")

PRESET_NAMES = ("gl2", "gl3", "gl4", "gl1|1", "gl2|1", "sp2", "so3")


def canonical_name(name: str) -> str:
    n = name.strip().lower().replace(" ", "").replace("_q", "")
    m = _SUPER.match(n)
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        return f"gl{a}|{b}" if b else f"gl{a}"
    m = _GL.match(n)
    if m:
        return f"gl{int(m.group(1))}"
    if n in ("sp2", "sp(2)", "c2"):
        return "sp2"
    if n in ("so3", "so(3)", "b1"):
        return "so3"
    raise KeyError(f"unknown group {name!r}")


_CACHE: Dict[str, QuantumGroup] = {}


def preset(name: str, budget: Optional[int] = None) -> QuantumGroup:
    """Build (and cache) one of the worked cases."""
    key = canonical_name(name)
    if key in _CACHE and budget is None:
        return _CACHE[key]
    m = _SUPER.match(key)
    if key == "sp2":
        grp = build_group(key, build_bcd("C", 2), budget=budget)
    elif key == "so3":
        grp = build_group(key, build_bcd("B", 1), budget=budget)
    elif m:
        a, b = int(m.group(1)), int(m.group(2))
        grp = build_group(key, build_super_gl(a, b), ALIASES.get(key), budget=budget)
    else:
        n = int(_GL.match(key).group(1))
        if n < 1 or n > 6:
            raise KeyError(f"unsupported rank in {name!r}")
        grp = build_group(key, build_gl(n), ALIASES.get(key), budget=budget)
    if budget is None:
        _CACHE[key] = grp
    return grp


def eliminate_dependents(grp: QuantumGroup) -> Dict[str, str]:
    """Dependent Gauss generators of a B/C/D group written through the
    independent ones (empty for GL and super groups).

    Every substitution is confirmed by ``gauss.constraint_check_bcd``.
    """
    if grp.metric is None:
        return {}
    from .gauss import dependent_substitutions

    N = grp.N
    out = {}
    for i in range(1, (N + 1) // 2 + 1):
        ip = N + 1 - i
        out[f"A{ip}{ip}"] = f"A{i}{i}^-1"
    out.update({dep: expr for dep, expr, _ in dependent_substitutions(grp)})
    return out


# -- sub-quantum-groups inside T --------------------------------------------------

def substitute(p: NCPolynomial, images: Sequence[NCPolynomial], target: QuantumGroup) -> NCPolynomial:
    """Image of ``p`` under letter ``x -> images[x]``, in normal form."""
    acc = target.alphabet.zero()
    for w, c in p.terms.items():
        term = target.alphabet.one()
        for x in w:
            term = term * images[x]
        acc = acc + term.scale(c)
    return target.nf(acc)


def block_failures(grp: QuantumGroup, sub: QuantumGroup, rows: Sequence[int],
                   cols: Sequence[int]) -> List[str]:
    """Relations of ``sub`` that fail for the block of ``grp`` on ``rows x cols``."""
    images = [grp.t(rows[g.row - 1], cols[g.col - 1]) for g in sub.alphabet.generators]
    return [format_poly(p) for p in sub.relations if substitute(p, images, grp)]


def corner_blocks(grp: QuantumGroup, size: int = 2):
    """Every ``size x size`` choice of rows and columns."""
    from itertools import combinations

    idx = range(1, grp.N + 1)
    for rows in combinations(idx, size):
        for cols in combinations(idx, size):
            yield rows, cols


def corner_property(grp: QuantumGroup, size: int = 2) -> Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], List[str]]:
    """Failures per block when every ``size x size`` block is tested against
    ``GL_q(size)`` (all lists empty when the property holds)."""
    sub = preset(f"gl{size}")
    return {(r, c): block_failures(grp, sub, r, c) for r, c in corner_blocks(grp, size)}


def super_blocks(grp: QuantumGroup):
    """``(sub group name, rows, cols)`` for the blocks of ``GL_q(m|n)`` whose
    grading matches ``GL_q(m)`` (even block) or ``GL_q(1|1)`` (one even and
    one odd index on each side, even entry first)."""
    even = [i + 1 for i, p in enumerate(grp.grading) if not p]
    odd = [i + 1 for i, p in enumerate(grp.grading) if p]
    out = []
    if len(even) > 1:
        out.append((f"gl{len(even)}", tuple(even), tuple(even)))
    for i in even:
        for k in even:
            for j in odd:
                for l in odd:
                    out.append(("gl1|1", (i, j), (k, l)))
    return out


def super_block_property(grp: QuantumGroup) -> Dict[Tuple, List[str]]:
    return {(name, r, c): block_failures(grp, preset(name), r, c) for name, r, c in super_blocks(grp)}


# -- canonical relation listing ---------------------------------------------------

def canonical_relation(p: NCPolynomial) -> Tuple[Tuple, str]:
    """``(sort key, "... = 0")`` for a relation polynomial.

    Words made of the leading word's letters come first, then the rest, each
    group in increasing order; the first coefficient is scaled to 1.  Sorting
    by the key lists binomial relations before longer ones, as in ``ab = qba``
    before ``ad - da = lambda bc``.
    """
    head = p.leading_word()
    letters = sorted(head)
    words = sorted(p.terms, key=lambda w: (sorted(w) != letters, word_key(w)))
    c = p.terms[words[0]].inverse()
    q = NCPolynomial(p.alphabet, {w: p.terms[w] * c for w in words})
    body = " ".join(_ordered_terms(q, words))
    return (len(words), word_key(words[0])), f"{body} = 0"


def _ordered_terms(p: NCPolynomial, words: Sequence[Word]) -> List[str]:
    from .ncalg import format_term, format_word

    out = []
    for k, w in enumerate(words):
        out.append(format_term(p.terms[w], format_word(p.alphabet, w), k == 0))
    return out


def relation_listing(grp: QuantumGroup) -> List[Tuple[str, str]]:
    """``(kind, relation)`` lines: the oriented rules (``frt``, or
    ``completion`` for rules of degree above 2) and, for B/C/D groups, the
    metric conditions (``metric``)."""
    polys = [r.poly() for r in grp.rules_as_relations()]
    out = [(("frt" if p.degree() == 2 else "completion"), key, line)
           for p in polys for key, line in [canonical_relation(p)]]
    out.sort(key=lambda t: (t[0] != "frt", t[1]))
    lines = [(kind, line) for kind, _, line in out]
    if grp.C is not None:
        lines += [("metric", str(r)) for r in c_conditions(grp)]
    return lines
