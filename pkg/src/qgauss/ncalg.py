"""Z2-graded free algebra over Q(q) and the rewriting machinery on top of it.

Words are tuples of generator indices.  The index order of an
:class:`Alphabet` is the symbol order (lexicographic in ``(row, col)``), and
words are compared graded-lexicographically: longer words are greater, equal
lengths compare letterwise.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .scalar import ONE, ZERO, QScalar, as_scalar, qpow

Word = Tuple[int, ...]

DEFAULT_BUDGET = 10 ** 6


class RewriteError(RuntimeError):
    """Raised when a rewrite system is incomplete or fails to terminate."""


class LocalizationError(RuntimeError):
    """Raised when an inverse cannot be moved past a polynomial."""


def default_budget() -> int:
    env = os.environ.get("QGAUSS_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class Generator:
    name: str
    row: int
    col: int
    parity: int = 0
    group_id: str = ""


class Alphabet:
    """Ordered set of generators shared by all polynomials of one algebra."""

    def __init__(self, generators: Sequence[Generator]):
        gens = sorted(generators, key=lambda g: (g.row, g.col))
        self.generators: Tuple[Generator, ...] = tuple(gens)
        self.index: Dict[str, int] = {g.name: i for i, g in enumerate(gens)}
        if len(self.index) != len(gens):
            raise ValueError("duplicate generator names")
        self.parities: Tuple[int, ...] = tuple(g.parity for g in gens)
        self.by_position: Dict[Tuple[int, int], int] = {(g.row, g.col): i for i, g in enumerate(gens)}

    def __len__(self) -> int:
        return len(self.generators)

    def __getitem__(self, i: int) -> Generator:
        return self.generators[i]

    def name(self, i: int) -> str:
        return self.generators[i].name

    def at(self, row: int, col: int) -> int:
        return self.by_position[(row, col)]

    def word_parity(self, word: Word) -> int:
        p = self.parities
        return sum(p[i] for i in word) & 1

    def gen(self, key) -> "NCPolynomial":
        """The generator polynomial, by name or by ``(row, col)``."""
        if isinstance(key, tuple):
            i = self.at(*key)
        elif isinstance(key, str):
            i = self.index[key]
        else:
            i = int(key)
        return NCPolynomial(self, {(i,): ONE})

    def one(self) -> "NCPolynomial":
        return NCPolynomial(self, {(): ONE})

    def zero(self) -> "NCPolynomial":
        return NCPolynomial(self, {})

    def parse_word(self, text: str) -> Word:
        return tuple(self.index[t] for t in text.split())


def word_key(word: Word):
    """Sort key realizing the graded-lexicographic order."""
    return (len(word), word)


def graded_sign(p1: int, p2: int) -> QScalar:
    """Sign picked up when two homogeneous elements of parities p1, p2 swap."""
    return -ONE if (p1 & 1) and (p2 & 1) else ONE


class NCPolynomial:
    """Finite linear combination of words with :class:`QScalar` coefficients.

    Multiplication is plain concatenation; nothing is reordered unless a
    rewrite system is applied.
    """

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms: Optional[Dict[Word, QScalar]] = None):
        self.alphabet = alphabet
        self.terms: Dict[Word, QScalar] = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, alphabet: Alphabet, terms: Dict[Word, QScalar]) -> "NCPolynomial":
        obj = cls.__new__(cls)
        obj.alphabet = alphabet
        obj.terms = terms
        return obj

    def copy(self) -> "NCPolynomial":
        return NCPolynomial._raw(self.alphabet, dict(self.terms))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Word, QScalar]]:
        return iter(self.terms.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, NCPolynomial):
            return self.terms == other.terms
        if isinstance(other, int):
            return (self - other).is_zero()
        return NotImplemented

    __hash__ = None  # mutable container semantics

    def _coerce(self, other) -> "NCPolynomial":
        if isinstance(other, NCPolynomial):
            return other
        c = as_scalar(other)
        return NCPolynomial._raw(self.alphabet, {(): c} if c else {})

    def __add__(self, other) -> "NCPolynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            if v is None:
                out[w] = c
            else:
                v = v + c
                if v:
                    out[w] = v
                else:
                    del out[w]
        return NCPolynomial._raw(self.alphabet, out)

    __radd__ = __add__

    def __neg__(self) -> "NCPolynomial":
        return NCPolynomial._raw(self.alphabet, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> "NCPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "NCPolynomial":
        return self._coerce(other) - self

    def scale(self, c) -> "NCPolynomial":
        c = as_scalar(c)
        if not c:
            return NCPolynomial._raw(self.alphabet, {})
        if c.is_one():
            return self
        return NCPolynomial._raw(self.alphabet, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other) -> "NCPolynomial":
        if not isinstance(other, NCPolynomial):
            return self.scale(other)
        out: Dict[Word, QScalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = c1 * c2
                prev = out.get(w)
                if prev is not None:
                    v = prev + v
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
        return NCPolynomial._raw(self.alphabet, out)

    def __rmul__(self, other) -> "NCPolynomial":
        return self.scale(other)

    def __pow__(self, n: int) -> "NCPolynomial":
        out = self.alphabet.one()
        for _ in range(n):
            out = out * self
        return out

    def leading_word(self) -> Word:
        return max(self.terms, key=word_key)

    def leading_term(self) -> Tuple[Word, QScalar]:
        w = self.leading_word()
        return w, self.terms[w]

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({len(w) for w in self.terms}) <= 1

    def letters(self) -> set:
        return {x for w in self.terms for x in w}

    def parity(self) -> Optional[int]:
        """Common parity of all words, or ``None`` when mixed."""
        ps = {self.alphabet.word_parity(w) for w in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def coefficient(self, word: Word) -> QScalar:
        return self.terms.get(word, ZERO)

    def map_coefficients(self, f) -> "NCPolynomial":
        return NCPolynomial(self.alphabet, {w: f(c) for w, c in self.terms.items()})

    def evaluate_coefficients(self, q0) -> Dict[Word, object]:
        return {w: c.evaluate(q0) for w, c in self.terms.items()}

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"NCPolynomial({format_poly(self)})"


def format_word(alphabet: Alphabet, word: Word) -> str:
    return " ".join(alphabet.name(i) for i in word)


def format_term(coeff: QScalar, body: str, first: bool) -> str:
    """One signed term ``coeff * body`` of a sum (``body`` may be empty)."""
    neg = False
    c = coeff
    mono = c.monomial_exponent()
    if mono is not None and mono[0] < 0:
        neg, c = True, -c
    elif mono is None and c.is_laurent():
        lead = c.num.terms[c.num.high]
        if lead < 0:
            neg, c = True, -c
    if c.is_one():
        text = body or "1"
    else:
        cs = str(c)
        if c.needs_parens():
            cs = f"({cs})"
        text = f"{cs} {body}" if body else cs
    if first:
        return f"-{text}" if neg else text
    return f"- {text}" if neg else f"+ {text}"


def format_poly(p: NCPolynomial) -> str:
    """Canonical text: graded-lex descending terms, coefficient then word."""
    if not p.terms:
        return "0"
    parts = []
    for w in sorted(p.terms, key=word_key, reverse=True):
        parts.append(format_term(p.terms[w], format_word(p.alphabet, w), not parts))
    return " ".join(parts)


def _axpy(acc: Dict[Word, QScalar], part: Dict[Word, QScalar], c: QScalar) -> None:
    """``acc += c * part`` in place, dropping cancelled terms."""
    for u, v in part.items():
        prev = acc.get(u)
        nv = v * c if prev is None else prev + v * c
        if nv:
            acc[u] = nv
        else:
            acc.pop(u, None)


class RewriteSystem:
    """Oriented relations over an :class:`Alphabet`.

    ``rules`` maps a head word to its replacement ``{word: coeff}``.  Heads
    are usually of length 2 (the quadratic relations); longer heads come
    from :meth:`complete`.  Every word of a replacement is smaller than its
    head in the graded-lexicographic order, which makes rewriting terminate.
    """

    def __init__(self, alphabet: Alphabet, rules: Dict[Word, Dict[Word, QScalar]],
                 budget: Optional[int] = None, require_complete: bool = True):
        self.alphabet = alphabet
        self.rules: Dict[Word, Dict[Word, QScalar]] = {
            tuple(h): {w: c for w, c in r.items() if c} for h, r in rules.items()}
        self.budget = budget if budget is not None else default_budget()
        for head, repl in self.rules.items():
            if len(head) < 2:
                raise RewriteError(f"rule head {head} is shorter than 2 letters")
            hk = word_key(head)
            for w in repl:
                if word_key(w) >= hk:
                    raise RewriteError(
                        f"rule {format_word(alphabet, head)} -> ... is not decreasing "
                        f"(contains {format_word(alphabet, w)})")
        if require_complete:
            missing = self.missing_heads()
            if missing:
                names = ", ".join(format_word(alphabet, h) for h in missing[:10])
                raise RewriteError(f"incomplete rewrite system; no rule for: {names}")
        self._lengths = sorted({len(h) for h in self.rules})
        self._cache: Dict[Tuple[Word, int], Dict[Word, QScalar]] = {}
        self._steps = 0
        self.complete_to: Optional[int] = None

    def missing_heads(self) -> List[Tuple[int, int]]:
        """Out-of-order pairs and odd squares that have no rule."""
        n = len(self.alphabet)
        par = self.alphabet.parities
        out = []
        for x in range(n):
            for y in range(n):
                if x > y or (x == y and par[x]):
                    if (x, y) not in self.rules:
                        out.append((x, y))
        return out

    def __len__(self) -> int:
        return len(self.rules)

    def max_head(self) -> int:
        return self._lengths[-1] if self._lengths else 0

    def is_normal(self, word: Word) -> bool:
        rules = self.rules
        for L in self._lengths:
            for i in range(len(word) - L + 1):
                if word[i:i + L] in rules:
                    return False
        return True

    def _tick(self, n: int = 1) -> None:
        self._steps += n
        if self._steps > self.budget:
            self._steps = 0
            raise RewriteError(f"rewrite budget of {self.budget} steps exhausted")

    def _head_at_end(self, word: Word, x: int) -> Optional[Word]:
        rules = self.rules
        for L in self._lengths:
            if L - 1 > len(word):
                break
            h = word[len(word) - L + 1:] + (x,)
            if h in rules:
                return h
        return None

    def _append(self, word: Word, x: int) -> Dict[Word, QScalar]:
        """Normal form of ``word * x`` for a normal ``word``."""
        key = (word, x)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        head = self._head_at_end(word, x) if word else None
        if head is None:
            res = {word + (x,): ONE}
        else:
            self._tick()
            prefix = word[:len(word) - len(head) + 1]
            res: Dict[Word, QScalar] = {}
            for w, c in self.rules[head].items():
                _axpy(res, self._extend({prefix: ONE}, w), c)
        self._cache[key] = res
        return res

    def _extend(self, normal: Dict[Word, QScalar], letters: Word) -> Dict[Word, QScalar]:
        cur = normal
        for x in letters:
            nxt: Dict[Word, QScalar] = {}
            for u, c in cur.items():
                _axpy(nxt, self._append(u, x), c)
            cur = nxt
        return cur

    def reduce_word(self, word: Word) -> Dict[Word, QScalar]:
        return self._extend({(): ONE}, word)

    def normal_form(self, p: NCPolynomial) -> NCPolynomial:
        """Fully reduce ``p``; unique when the system is confluent."""
        self._steps = 0
        out: Dict[Word, QScalar] = {}
        for w, c in p.terms.items():
            _axpy(out, self.reduce_word(w), c)
        return NCPolynomial._raw(p.alphabet, out)

    def mul(self, a: NCPolynomial, b: NCPolynomial) -> NCPolynomial:
        """Normal form of ``a * b`` for ``a`` already in normal form."""
        self._steps = 0
        out: Dict[Word, QScalar] = {}
        for w1, c1 in a.terms.items():
            for w2, c2 in b.terms.items():
                _axpy(out, self._extend({w1: ONE}, w2), c1 * c2)
        return NCPolynomial._raw(a.alphabet, out)

    def is_zero(self, p: NCPolynomial) -> bool:
        return self.normal_form(p).is_zero()

    def one_step(self, word: Word, pos: int, head: Optional[Word] = None) -> Dict[Word, QScalar]:
        """Rewrite the head occurring at ``pos`` once, leaving the rest untouched."""
        if head is None:
            head = (word[pos], word[pos + 1])
        L = len(head)
        out = {}
        for w, c in self.rules[head].items():
            out[word[:pos] + w + word[pos + L:]] = c
        return out

    def overlaps(self, max_degree: int) -> Iterator[Tuple[Word, Word, int, Word, int]]:
        """Ambiguities ``(word, head1, pos1, head2, pos2)`` up to ``max_degree``.

        Covers proper overlaps (a suffix of one head is a prefix of another)
        and inclusions (one head inside another).
        """
        heads = sorted(self.rules, key=word_key)
        for h1 in heads:
            for h2 in heads:
                for k in range(1, min(len(h1), len(h2))):
                    if h1[len(h1) - k:] == h2[:k]:
                        word = h1 + h2[k:]
                        if len(word) <= max_degree:
                            yield word, h1, 0, h2, len(h1) - k
                if len(h2) < len(h1) and h1 != h2:
                    for i in range(len(h1) - len(h2) + 1):
                        if h1[i:i + len(h2)] == h2:
                            yield h1, h1, 0, h2, i

    def check_confluence(self, max_degree: int = 3) -> List[Tuple[Word, NCPolynomial]]:
        """Resolve every ambiguity of length up to ``max_degree``.

        For quadratic systems this compares left-first and right-first
        reductions of each 3-letter word.  Returns ``(word, difference)`` for
        each unresolved ambiguity; an empty list means locally confluent up
        to that degree.
        """
        bad = []
        a = self.alphabet
        for word, h1, p1, h2, p2 in self.overlaps(max_degree):
            left = self.normal_form(NCPolynomial._raw(a, self.one_step(word, p1, h1)))
            right = self.normal_form(NCPolynomial._raw(a, self.one_step(word, p2, h2)))
            diff = left - right
            if diff:
                bad.append((word, diff))
        return bad

    def rule_polynomial(self, head: Word) -> NCPolynomial:
        """The relation ``head - replacement`` as a polynomial."""
        terms = {w: -c for w, c in self.rules[head].items()}
        terms[tuple(head)] = ONE
        return NCPolynomial(self.alphabet, terms)

    def complete(self, max_degree: int, max_rounds: int = 50) -> "RewriteSystem":
        """Degree-bounded completion: add the reduced differences of all
        unresolved ambiguities as new rules until every ambiguity of length
        at most ``max_degree`` resolves.

        Normal forms of polynomials of degree at most ``max_degree`` are
        canonical in the returned system.
        """
        sys = self
        for _ in range(max_rounds):
            bad = sys.check_confluence(max_degree)
            if not bad:
                sys.complete_to = max_degree
                return sys
            rules = {h: dict(r) for h, r in sys.rules.items()}
            added = 0
            for _, diff in sorted(bad, key=lambda x: word_key(x[0])):
                probe = RewriteSystem(sys.alphabet, rules, sys.budget, require_complete=False)
                diff = probe.normal_form(diff)
                if not diff:
                    continue
                lead, c = diff.leading_term()
                inv = c.inverse()
                rules[lead] = {w: -v * inv for w, v in diff.terms.items() if w != lead}
                added += 1
            rules = _interreduce(sys.alphabet, rules, sys.budget)
            sys = RewriteSystem(sys.alphabet, rules, sys.budget, require_complete=False)
        raise RewriteError(f"completion did not finish in {max_rounds} rounds")


def _interreduce(alphabet: Alphabet, rules: Dict[Word, Dict[Word, QScalar]],
                 budget: int) -> Dict[Word, Dict[Word, QScalar]]:
    """Drop rules whose head contains another head and reduce right-hand sides."""
    heads = sorted(rules, key=word_key)
    keep = {}
    for h in heads:
        if any(len(g) < len(h) and _contains(h, g) for g in keep):
            continue
        keep[h] = rules[h]
    dropped = [h for h in rules if h not in keep]
    sys = RewriteSystem(alphabet, keep, budget, require_complete=False)
    out = {}
    for h, r in keep.items():
        out[h] = sys.normal_form(NCPolynomial._raw(alphabet, dict(r))).terms
    # a dropped rule is still a relation; re-add it if it does not reduce to 0
    sys = RewriteSystem(alphabet, out, budget, require_complete=False)
    for h in dropped:
        poly = {w: -c for w, c in rules[h].items()}
        poly[h] = ONE
        rest = sys.normal_form(NCPolynomial._raw(alphabet, poly))
        if rest:
            lead, c = rest.leading_term()
            inv = c.inverse()
            out[lead] = {w: -v * inv for w, v in rest.terms.items() if w != lead}
            sys = RewriteSystem(alphabet, out, budget, require_complete=False)
    return out


def _contains(word: Word, sub: Word) -> bool:
    L = len(sub)
    return any(word[i:i + L] == sub for i in range(len(word) - L + 1))


def normal_form(p: NCPolynomial, sys: RewriteSystem) -> NCPolynomial:
    return sys.normal_form(p)


def check_confluence(sys: RewriteSystem, max_degree: int = 3):
    return sys.check_confluence(max_degree)


def quasi_commutation_factor(sys: RewriteSystem, d: NCPolynomial, x: NCPolynomial) -> Optional[QScalar]:
    """Scalar ``c`` with ``d x = c x d`` in the algebra, or ``None``."""
    left = sys.mul(sys.normal_form(d), x)
    right = sys.mul(sys.normal_form(x), d)
    if not left and not right:
        return ONE
    if not left or not right:
        return None
    w, c = right.leading_term()
    cl = left.coefficient(w)
    if not cl:
        return None
    ratio = cl / c
    if (left - right.scale(ratio)).is_zero():
        return ratio
    return None


def derive_exchange(d: NCPolynomial, t, sys: RewriteSystem, search: range = range(-4, 5)) -> int:
    """Exponent ``m`` with ``d t = q^m t d``.

    ``t`` may be a generator index, a generator name or a polynomial.
    """
    if not isinstance(t, NCPolynomial):
        t = sys.alphabet.gen(t)
    c = quasi_commutation_factor(sys, d, t)
    m = c.q_exponent() if c is not None else None
    if m is None or m not in search:
        raise LocalizationError(
            f"{format_poly(d)} does not q-commute with {format_poly(t)} "
            f"for any exponent in [{search.start}, {search.stop - 1}]")
    return m


# -- localization at registered denominators --------------------------------

Exps = Tuple[Tuple[int, int], ...]  # sorted ((denominator id, exponent), ...)


def _exps_add(a: Exps, b: Exps) -> Exps:
    d = dict(a)
    for k, v in b:
        d[k] = d.get(k, 0) + v
    return tuple(sorted((k, v) for k, v in d.items() if v))


class LocalizedElement:
    """``D_1^{-e_1} ... D_r^{-e_r} * numerator`` with every inverted factor
    collected on the left in increasing id order."""

    __slots__ = ("loc", "exps", "num")

    def __init__(self, loc: "Localizer", exps: Exps, num: NCPolynomial):
        self.loc = loc
        self.exps = tuple(sorted((k, v) for k, v in exps if v))
        self.num = num

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def __add__(self, other) -> "LocalizedElement":
        return self.loc.add(self, self.loc.lift(other))

    __radd__ = __add__

    def __neg__(self) -> "LocalizedElement":
        return LocalizedElement(self.loc, self.exps, -self.num)

    def __sub__(self, other) -> "LocalizedElement":
        return self.loc.add(self, -self.loc.lift(other))

    def __rsub__(self, other) -> "LocalizedElement":
        return self.loc.add(self.loc.lift(other), -self)

    def __mul__(self, other) -> "LocalizedElement":
        return self.loc.mul(self, self.loc.lift(other))

    def __rmul__(self, other) -> "LocalizedElement":
        return self.loc.mul(self.loc.lift(other), self)

    def scale(self, c) -> "LocalizedElement":
        return LocalizedElement(self.loc, self.exps, self.num.scale(c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, (LocalizedElement, NCPolynomial, int, QScalar)):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __str__(self) -> str:
        return self.loc.format(self)

    def __repr__(self) -> str:
        return f"LocalizedElement({self})"


@dataclass
class Denominator:
    name: str
    poly: NCPolynomial
    weight: Tuple
    # letter -> {exponent a: polynomial} meaning  x D^{-1} = sum_a D^{-a} P_a
    table: Dict[int, Dict[int, NCPolynomial]]
    # letter -> m with D x = q^m x D, or None when x is not q-commuting
    exponents: Dict[int, Optional[int]]


class Localizer:
    """Localization of a rewrite-system algebra at registered elements.

    Each denominator ``D`` gets an exchange table: for every generator
    ``x`` either ``D x = c x D`` (so ``x D^{-1} = c D^{-1} x``) or
    ``D x = c x D + E`` (so ``x D^{-1} = c D^{-1} x + D^{-1} E D^{-1}``,
    with ``E D^{-1}`` moved recursively).  Registered denominators must
    commute with each other.
    """

    def __init__(self, system: RewriteSystem, weight=None):
        self.system = system
        self.alphabet = system.alphabet
        self.weight = weight or (lambda w: (len(w),))
        self.dens: List[Denominator] = []
        self._move_cache: Dict[Tuple[Word, int, int], Dict[int, NCPolynomial]] = {}
        self._normal_words: Dict[Tuple, List[Word]] = {}
        self._echelons: Dict[Tuple, Tuple[List[Word], "Echelon"]] = {}
        self._powers: Dict[Tuple[int, int], NCPolynomial] = {}
        self._quotients: Dict[Tuple[int, int], Optional[NCPolynomial]] = {}
        self._poly_echelons: Dict[Tuple, Tuple[List[Word], "Echelon"]] = {}
        self.max_ore = 4

    # construction --------------------------------------------------------

    def lift(self, x) -> LocalizedElement:
        if isinstance(x, LocalizedElement):
            return x
        if isinstance(x, NCPolynomial):
            return LocalizedElement(self, (), self.system.normal_form(x))
        return LocalizedElement(self, (), self.alphabet.one().scale(as_scalar(x)))

    def one(self) -> LocalizedElement:
        return self.lift(1)

    def zero(self) -> LocalizedElement:
        return LocalizedElement(self, (), self.alphabet.zero())

    def find(self, poly: NCPolynomial) -> Optional[int]:
        p = self.system.normal_form(poly)
        for i, d in enumerate(self.dens):
            if d.poly == p:
                return i
        return None

    def poly_weight(self, p: NCPolynomial) -> Optional[Tuple]:
        ws = {self.weight(w) for w in p.terms}
        return ws.pop() if len(ws) == 1 else None

    def register(self, name: str, poly: NCPolynomial) -> int:
        """Make ``poly`` invertible; returns its id (existing id if known)."""
        p = self.system.normal_form(poly)
        if not p:
            raise LocalizationError(f"cannot invert zero ({name})")
        hit = self.find(p)
        if hit is not None:
            return hit
        w = self.poly_weight(p)
        if w is None:
            raise LocalizationError(f"{name} is not homogeneous")
        sys = self.system
        for other in self.dens:
            if sys.mul(p, other.poly) != sys.mul(other.poly, p):
                raise LocalizationError(f"{name} does not commute with {other.name}")
        den = Denominator(name, p, w, {}, {})
        self.dens.append(den)
        idx = len(self.dens) - 1
        try:
            for x in range(len(self.alphabet)):
                self._build_entry(idx, x)
        except LocalizationError:
            self.dens.pop()
            self._move_cache = {k: v for k, v in self._move_cache.items() if k[1] != idx}
            raise
        return idx

    def _build_entry(self, idx: int, x: int) -> None:
        den = self.dens[idx]
        if x in den.table:
            return
        sys = self.system
        X = self.alphabet.gen(x)
        dx = sys.mul(den.poly, X)
        xd = sys.normal_form(X * den.poly)
        c = quasi_commutation_factor(sys, den.poly, X)
        if c is not None:
            den.exponents[x] = c.q_exponent()
            den.table[x] = {1: X.scale(c)}
            return
        den.exponents[x] = None
        # Ore step: smallest k with D^k x = P D, then x D^{-1} = D^{-k} P
        power = den.poly
        for k in range(2, self.max_ore + 1):
            power = sys.mul(power, den.poly)
            target = sys.mul(power, X)
            P = self.right_divide(idx, target)
            if P is not None:
                den.table[x] = self._canon(idx, {k: P})
                return
        raise LocalizationError(
            f"no Ore relation D^k x = P D with k <= {self.max_ore} for "
            f"{den.name} and {self.alphabet.name(x)}")

    # moving inverses -------------------------------------------------------

    def _letter_inv(self, x: int, idx: int, k: int) -> Dict[int, NCPolynomial]:
        """``x D^{-k} = sum_a D^{-a} P_a``, from ``D^m x = P D^k``."""
        if k == 0:
            return {0: self.alphabet.gen(x)}
        key = ((x,), idx, k)
        hit = self._move_cache.get(key)
        if hit is not None:
            return hit
        den = self.dens[idx]
        if x not in den.table:
            self._build_entry(idx, x)
        if k == 1:
            out = den.table[x]
        elif den.exponents[x] is not None:
            c = quasi_commutation_factor(self.system, den.poly, self.alphabet.gen(x))
            ck = ONE
            for _ in range(k):
                ck = ck * c
            out = self._canon(idx, {k: self.alphabet.gen(x).scale(ck)})
        else:
            X = self.alphabet.gen(x)
            out = None
            for m in range(k + 1, k * self.max_ore + 1):
                P = self._divide_power(idx, k, self.system.mul(self.power(idx, m), X), left=False)
                if P is not None:
                    out = self._canon(idx, {m: P})
                    break
            if out is None:
                raise LocalizationError(
                    f"no Ore relation for {self.alphabet.name(x)} past {den.name}^-{k}")
        self._move_cache[key] = out
        return out

    def _move_word(self, word: Word, idx: int, k: int) -> Dict[int, NCPolynomial]:
        """``word D^{-k} = sum_e D^{-e} P_e``."""
        if not word:
            return {k: self.alphabet.one()}
        if k == 0:
            return {0: NCPolynomial._raw(self.alphabet, {word: ONE})}
        key = (word, idx, k)
        hit = self._move_cache.get(key)
        if hit is not None:
            return hit
        if len(word) == 1:
            return self._letter_inv(word[0], idx, k)
        sys = self.system
        out: Dict[int, NCPolynomial] = {}
        # u x D^{-k} = u sum_a D^{-a} P_a = sum_a (u D^{-a}) P_a
        for a, P in self._letter_inv(word[-1], idx, k).items():
            for e, S in self._move_word(word[:-1], idx, a).items():
                prod = sys.mul(S, P)
                prev = out.get(e)
                out[e] = prod if prev is None else prev + prod
        out = self._canon(idx, out)
        self._move_cache[key] = out
        return out

    def _move_poly(self, p: NCPolynomial, idx: int, k: int) -> Dict[int, NCPolynomial]:
        out: Dict[int, NCPolynomial] = {}
        for w, c in p.terms.items():
            for e, P in self._move_word(w, idx, k).items():
                prev = out.get(e)
                S = P.scale(c)
                out[e] = S if prev is None else prev + S
        return {e: P for e, P in out.items() if P}

    def _peel(self, idx: int, p: NCPolynomial) -> Tuple[NCPolynomial, NCPolynomial]:
        """``(P, R)`` with ``p = D P + R`` and ``R`` reduced modulo ``D A``."""
        den = self.dens[idx]
        groups: Dict[Tuple, Dict[Word, QScalar]] = {}
        for w, c in p.terms.items():
            groups.setdefault(self.weight(w), {})[w] = c
        quot: Dict[Word, QScalar] = {}
        rem: Dict[Word, QScalar] = {}
        for wt, terms in groups.items():
            need = _weight_sub(wt, den.weight)
            if need[0] < 0:
                rem.update(terms)
                continue
            cands, ech = self._echelon(idx, 1, need, True)
            rest, coeffs = ech.reduce(NCPolynomial._raw(self.alphabet, terms))
            rem.update(rest)
            for u, c in zip(cands, coeffs):
                if c:
                    quot[u] = c
        return NCPolynomial._raw(self.alphabet, quot), NCPolynomial._raw(self.alphabet, rem)

    def _canon(self, idx: int, parts: Dict[int, NCPolynomial]) -> Dict[int, NCPolynomial]:
        """Rewrite ``sum_e D^{-e} P_e`` so that no ``P_e`` (e > 0) has a part
        in ``D A``; keeps inverse exponents as small as possible."""
        out = dict(parts)
        for e in sorted(out, reverse=True):
            if e <= 0:
                continue
            P = out[e]
            if not P:
                continue
            quot, rem = self._peel(idx, P)
            out[e] = rem
            if quot:
                prev = out.get(e - 1)
                out[e - 1] = quot if prev is None else prev + quot
        return {e: P for e, P in out.items() if P}

    # arithmetic ------------------------------------------------------------

    def den_power(self, exps: Exps) -> NCPolynomial:
        """The polynomial ``prod D_i^{e_i}``."""
        sys = self.system
        out = self.alphabet.one()
        for i, e in exps:
            for _ in range(e):
                out = sys.mul(out, self.dens[i].poly)
        return out

    def add(self, x: LocalizedElement, y: LocalizedElement) -> LocalizedElement:
        if not x.num:
            return y
        if not y.num:
            return x
        if x.exps == y.exps:
            return self.reduce(LocalizedElement(self, x.exps, x.num + y.num))
        dx, dy = dict(x.exps), dict(y.exps)
        top = {k: max(dx.get(k, 0), dy.get(k, 0)) for k in set(dx) | set(dy)}
        sys = self.system
        nx = sys.mul(self.den_power(tuple((k, top[k] - dx.get(k, 0)) for k in sorted(top))), x.num)
        ny = sys.mul(self.den_power(tuple((k, top[k] - dy.get(k, 0)) for k in sorted(top))), y.num)
        return self.reduce(LocalizedElement(self, tuple(sorted(top.items())), nx + ny))

    def mul(self, x: LocalizedElement, y: LocalizedElement) -> LocalizedElement:
        if not x.num or not y.num:
            return self.zero()
        sys = self.system
        # move each inverse factor of y to the left of x's numerator
        terms: List[Tuple[Exps, NCPolynomial]] = [((), x.num)]
        for i, k in y.exps:
            nxt = []
            for exps, P in terms:
                for e, S in self._move_poly(P, i, k).items():
                    nxt.append((_exps_add(exps, ((i, e),)), S))
            terms = nxt
        acc = self.zero()
        for exps, P in terms:
            acc = self.add(acc, LocalizedElement(self, _exps_add(x.exps, exps), sys.mul(P, y.num)))
        return self.reduce(acc)

    def inverse_of(self, idx: int) -> LocalizedElement:
        return LocalizedElement(self, ((idx, 1),), self.alphabet.one())

    def den_element(self, idx: int) -> LocalizedElement:
        return LocalizedElement(self, (), self.dens[idx].poly)

    def clear(self, x: LocalizedElement) -> NCPolynomial:
        """Numerator after multiplying by the collected denominators."""
        return x.num

    # cancellation ------------------------------------------------------------

    def normal_words(self, length: int, weight: Tuple) -> List[Word]:
        """Normal words of the given length and weight."""
        key = (length, weight)
        hit = self._normal_words.get(key)
        if hit is not None:
            return hit
        sys = self.system
        n = len(self.alphabet)
        steps = [_flat(self.weight((x,))[1:]) for x in range(n)]
        reach = max((sum(abs(v) for v in st) for st in steps), default=0)
        goal = _flat(weight[1:])
        out: List[Word] = []

        def grow(prefix: Word, acc: Tuple[int, ...]) -> None:
            left = length - len(prefix)
            gap = sum(abs(g - a) for g, a in zip(goal, acc))
            if gap > left * reach:
                return
            if not left:
                if not gap:
                    out.append(prefix)
                return
            for x in range(n):
                if prefix and sys._head_at_end(prefix, x) is not None:
                    continue
                grow(prefix + (x,), tuple(a + b for a, b in zip(acc, steps[x])))

        grow((), tuple(0 for _ in goal))
        self._normal_words[key] = out
        return out

    def right_divide(self, idx: int, p: NCPolynomial) -> Optional[NCPolynomial]:
        """``X`` with ``X D = p`` in normal form, or ``None``."""
        return self._divide(idx, p, left=False)

    def left_divide(self, idx: int, p: NCPolynomial) -> Optional[NCPolynomial]:
        """``X`` with ``D X = p`` in normal form, or ``None``."""
        return self._divide(idx, p, left=True)

    def power(self, idx: int, k: int) -> NCPolynomial:
        key = (idx, k)
        hit = self._powers.get(key)
        if hit is None:
            hit = self.alphabet.one() if k == 0 else self.system.mul(self.power(idx, k - 1), self.dens[idx].poly)
            self._powers[key] = hit
        return hit

    def _divide(self, idx: int, p: NCPolynomial, left: bool) -> Optional[NCPolynomial]:
        return self._divide_power(idx, 1, p, left)

    def _divide_power(self, idx: int, k: int, p: NCPolynomial, left: bool) -> Optional[NCPolynomial]:
        """``X`` with ``D^k X = p`` (left) or ``X D^k = p``, or ``None``."""
        den = self.dens[idx]
        dw = den.weight
        for _ in range(k - 1):
            dw = _weight_add(dw, den.weight)
        groups: Dict[Tuple, Dict[Word, QScalar]] = {}
        for w, c in p.terms.items():
            groups.setdefault(self.weight(w), {})[w] = c
        result: Dict[Word, QScalar] = {}
        for wt, terms in groups.items():
            need = _weight_sub(wt, dw)
            if need[0] < 0:
                return None
            cands, ech = self._echelon(idx, k, need, left)
            rest, coeffs = ech.reduce(NCPolynomial._raw(self.alphabet, terms))
            if rest:
                return None
            for u, c in zip(cands, coeffs):
                if c:
                    result[u] = c
        return NCPolynomial._raw(self.alphabet, result)

    def _echelon(self, idx: int, k: int, need: Tuple, left: bool) -> Tuple[List[Word], "Echelon"]:
        key = (idx, k, need, left)
        hit = self._echelons.get(key)
        if hit is None:
            cands = self.normal_words(need[0], need)
            D = self.power(idx, k)
            sys = self.system
            if left:
                cols = [sys.mul(D, NCPolynomial._raw(self.alphabet, {u: ONE})) for u in cands]
            else:
                cols = [sys.mul(NCPolynomial._raw(self.alphabet, {u: ONE}), D) for u in cands]
            hit = self._echelons[key] = (cands, Echelon(cols))
        return hit

    def reduce(self, x: LocalizedElement) -> LocalizedElement:
        """Cancel denominators that divide the numerator on the left."""
        if not x.num:
            return self.zero()
        exps = dict(x.exps)
        num = x.num
        for i in sorted(exps):
            while exps[i] > 0:
                if self.poly_weight(num) is None and any(
                        _weight_sub(self.weight(w), self.dens[i].weight)[0] < 0 for w in num.terms):
                    break
                X = self.left_divide(i, num)
                if X is None:
                    break
                num = X
                exps[i] -= 1
        return LocalizedElement(self, tuple(exps.items()), num)

    def simplify(self, x: LocalizedElement) -> LocalizedElement:
        """``reduce`` plus trading ``D_i^{-1}`` for ``D_j^{-1}`` when
        ``D_i = D_j Z`` with ``Z`` central and dividing the numerator."""
        x = self.reduce(x)
        changed = True
        while changed and x.exps:
            changed = False
            for i, e in x.exps:
                for j in range(len(self.dens)):
                    Z = self._central_quotient(i, j)
                    if Z is None:
                        continue
                    M = self.divide_by(Z, x.num)
                    if M is None:
                        continue
                    exps = dict(x.exps)
                    exps[i] -= 1
                    exps[j] = exps.get(j, 0) + 1
                    x = self.reduce(LocalizedElement(self, tuple(exps.items()), M))
                    changed = True
                    break
                if changed:
                    break
        return x

    def _central_quotient(self, i: int, j: int) -> Optional[NCPolynomial]:
        key = (i, j)
        if key not in self._quotients:
            Z = None
            if i != j and self.dens[j].poly.degree() < self.dens[i].poly.degree():
                Z = self.left_divide(j, self.dens[i].poly)
                sys = self.system
                if Z is not None and any(sys.mul(Z, g) != sys.mul(g, Z)
                                         for g in (self.alphabet.gen(k) for k in range(len(self.alphabet)))):
                    Z = None
            self._quotients[key] = Z
        return self._quotients[key]

    def divide_by(self, D: NCPolynomial, p: NCPolynomial) -> Optional[NCPolynomial]:
        """``X`` with ``D X = p`` for a homogeneous ``D``, or ``None``."""
        dw = self.poly_weight(D)
        if dw is None:
            return None
        groups: Dict[Tuple, Dict[Word, QScalar]] = {}
        for w, c in p.terms.items():
            groups.setdefault(self.weight(w), {})[w] = c
        result: Dict[Word, QScalar] = {}
        dkey = tuple(sorted(D.terms.items(), key=lambda t: word_key(t[0])))
        for wt, terms in groups.items():
            need = _weight_sub(wt, dw)
            if need[0] < 0:
                return None
            key = (dkey, need)
            hit = self._poly_echelons.get(key)
            if hit is None:
                cands = self.normal_words(need[0], need)
                cols = [self.system.mul(D, NCPolynomial._raw(self.alphabet, {u: ONE})) for u in cands]
                hit = self._poly_echelons[key] = (cands, Echelon(cols))
            cands, ech = hit
            rest, coeffs = ech.reduce(NCPolynomial._raw(self.alphabet, terms))
            if rest:
                return None
            for u, c in zip(cands, coeffs):
                if c:
                    result[u] = c
        return NCPolynomial._raw(self.alphabet, result)

    # output --------------------------------------------------------------------

    def format(self, x: LocalizedElement, left: bool = True) -> str:
        body = format_poly(x.num)
        if not x.exps:
            return body
        dens = " ".join(f"[{self.dens[i].name}]^-{e}" for i, e in x.exps)
        if len(x.num) > 1:
            body = f"({body})"
        if body == "1":
            return dens
        return f"{dens} {body}"


def _flat(t) -> Tuple[int, ...]:
    out = []
    for x in t:
        if isinstance(x, tuple):
            out.extend(_flat(x))
        else:
            out.append(x)
    return tuple(out)


def _weight_add(a: Tuple, b: Tuple) -> Tuple:
    out = []
    for x, y in zip(a, b):
        if isinstance(x, tuple):
            out.append(tuple(u + v for u, v in zip(x, y)))
        else:
            out.append(x + y)
    return tuple(out)


def _weight_sub(a: Tuple, b: Tuple) -> Tuple:
    out = []
    for x, y in zip(a, b):
        if isinstance(x, tuple):
            out.append(tuple(u - v for u, v in zip(x, y)))
        else:
            out.append(x - y)
    return tuple(out)


class Echelon:
    """Row-echelon basis of a list of polynomials, pivoting on the
    graded-lex greatest word; reduces targets to a canonical remainder."""

    def __init__(self, cols: Sequence[NCPolynomial]):
        self.size = len(cols)
        self.pivots: Dict[Word, Tuple[Dict[Word, QScalar], Dict[int, QScalar]]] = {}
        for j, col in enumerate(cols):
            v, comb = self._eliminate(dict(col.terms), {j: ONE}, -1)
            if v:
                w = max(v, key=word_key)
                f = v[w].inverse()
                self.pivots[w] = ({u: x * f for u, x in v.items()}, {u: x * f for u, x in comb.items()})

    def _eliminate(self, v, comb, sign):
        # cancel every pivot word in v, recording the combination used
        rest: Dict[Word, QScalar] = {}
        while v:
            w = max(v, key=word_key)
            hit = self.pivots.get(w)
            if hit is None:
                rest[w] = v.pop(w)
                continue
            pv, pc = hit
            f = v[w]
            _axpy(v, pv, -f)
            v.pop(w, None)
            _axpy(comb, pc, f if sign > 0 else -f)
        return rest, comb

    def reduce(self, target: NCPolynomial) -> Tuple[Dict[Word, QScalar], List[QScalar]]:
        """``(r, c)`` with ``target = sum c_i cols_i + r`` and ``r`` free of pivot words."""
        rest, comb = self._eliminate(dict(target.terms), {}, 1)
        return rest, [comb.get(j, ZERO) for j in range(self.size)]


def solve_combination(cols: Sequence[NCPolynomial], target: NCPolynomial) -> Optional[List[QScalar]]:
    """Coefficients ``c`` with ``sum c_i cols_i = target``, or ``None``."""
    rest, sol = Echelon(cols).reduce(target)
    return None if rest else sol
