"""Free graded Lie series inside the free associative envelope.

A LieSeries is a finitely supported rational combination of words over a
GeneratorSet, truncated at a letter-count cap nmax. Lie elements are the
primitives; the envelope is kept around because exp, log and the group
operations live there. All arithmetic is exact.

Lyndon-word machinery (basis, greedy coordinates, universal BCH table) is
only available over purely even alphabets; graded alphabets use bracket
spanning sets instead.
"""

from .rat import Q, rational
from ._kernels import poly_add_scaled, poly_mul, poly_bracket
from .generators import GeneratorSet, free_set


class NotLieElement(ValueError):
    """Raised when a series fails a primitivity check it was promised to pass."""


def _scaled(terms, factor):
    out = {}
    if factor:
        poly_add_scaled(out, terms, factor)
    return out


class LieSeries:
    """Truncated envelope series: dict word -> rational, words as index tuples."""

    __slots__ = ("genset", "nmax", "terms")

    def __init__(self, genset: GeneratorSet, nmax: int, terms=None):
        self.genset = genset
        self.nmax = nmax
        clean = {}
        if terms:
            for w, c in terms.items():
                if len(w) <= nmax and c:
                    clean[tuple(w)] = rational(c)
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, genset, nmax):
        return cls(genset, nmax)

    @classmethod
    def one(cls, genset, nmax):
        return cls(genset, nmax, {(): Q(1)})

    @classmethod
    def generator(cls, genset, name, nmax):
        return cls(genset, nmax, {(genset.index(name),): Q(1)})

    @classmethod
    def generators(cls, genset, nmax):
        return [cls(genset, nmax, {(i,): Q(1)}) for i in range(len(genset))]

    # -- basic queries ------------------------------------------------

    def coeff(self, word):
        return self.terms.get(tuple(word), Q(0))

    def is_zero(self):
        return not self.terms

    def min_letters(self):
        return min((len(w) for w in self.terms), default=self.nmax + 1)

    def max_letters(self):
        return max((len(w) for w in self.terms), default=0)

    def component(self, n):
        """Letter-count n part."""
        return LieSeries(
            self.genset, self.nmax, {w: c for w, c in self.terms.items() if len(w) == n}
        )

    def components(self):
        by_n = {}
        for w, c in self.terms.items():
            by_n.setdefault(len(w), {})[w] = c
        return {n: LieSeries(self.genset, self.nmax, t) for n, t in sorted(by_n.items())}

    def truncate(self, n):
        return LieSeries(self.genset, n, {w: c for w, c in self.terms.items() if len(w) <= n})

    # -- arithmetic ---------------------------------------------------

    def _check(self, other):
        if self.genset != other.genset:
            raise ValueError("generator sets differ")
        return min(self.nmax, other.nmax)

    def __add__(self, other):
        nmax = self._check(other)
        terms = {w: c for w, c in self.terms.items() if len(w) <= nmax}
        poly_add_scaled(terms, other.terms, Q(1))
        return LieSeries(self.genset, nmax, terms)

    def __sub__(self, other):
        nmax = self._check(other)
        terms = {w: c for w, c in self.terms.items() if len(w) <= nmax}
        poly_add_scaled(terms, other.terms, Q(-1))
        return LieSeries(self.genset, nmax, terms)

    def __neg__(self):
        return LieSeries(self.genset, self.nmax, _scaled(self.terms, Q(-1)))

    def scale(self, factor):
        return LieSeries(self.genset, self.nmax, _scaled(self.terms, rational(factor)))

    def __rmul__(self, factor):
        return self.scale(factor)

    def __mul__(self, other):
        if isinstance(other, LieSeries):
            nmax = self._check(other)
            return LieSeries(self.genset, nmax, poly_mul(self.terms, other.terms, nmax))
        return self.scale(other)

    def bracket(self, other):
        """Super bracket, graded by the generator degrees."""
        nmax = self._check(other)
        terms = poly_bracket(self.terms, other.terms, self.genset.degrees, nmax)
        return LieSeries(self.genset, nmax, terms)

    def __eq__(self, other):
        return (
            isinstance(other, LieSeries)
            and self.genset == other.genset
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.genset, frozenset(self.terms.items())))

    def __repr__(self):
        n = len(self.terms)
        if n == 0:
            return f"LieSeries(0, nmax={self.nmax})"
        shown = sorted(self.terms, key=lambda w: (len(w), w))[:4]
        parts = " + ".join(
            f"{self.terms[w]}*[{self.genset.word_string(w)}]" for w in shown
        )
        more = "" if n <= 4 else f" +{n - 4} terms"
        return f"LieSeries({parts}{more}, nmax={self.nmax})"


# -- envelope exp / log / inverse --------------------------------------


def envelope_exp(s: LieSeries) -> LieSeries:
    if s.coeff(()):
        raise ValueError("exp needs a series without constant term")
    out = {(): Q(1)}
    t = {(): Q(1)}  # invariant at loop bottom: t == s^k / k!
    k = 0
    while True:
        k += 1
        t = poly_mul(t, s.terms, s.nmax)
        if not t:
            break
        t = _scaled(t, Q(1, k))
        poly_add_scaled(out, t, Q(1))
    return LieSeries(s.genset, s.nmax, out)


def envelope_log(s: LieSeries) -> LieSeries:
    if s.coeff(()) != 1:
        raise ValueError("log needs constant term 1")
    q = dict(s.terms)
    q.pop((), None)
    out = dict(q)
    t = dict(q)
    k = 1
    while t:
        k += 1
        t = poly_mul(t, q, s.nmax)
        if not t:
            break
        sign = Q(1, k) if k % 2 else Q(-1, k)
        poly_add_scaled(out, t, sign)
    return LieSeries(s.genset, s.nmax, out)


def envelope_inverse(s: LieSeries) -> LieSeries:
    """Inverse of a group-like 1 + higher series (Neumann sum)."""
    if s.coeff(()) != 1:
        raise ValueError("inverse needs constant term 1")
    q = dict(s.terms)
    q.pop((), None)
    out = {(): Q(1)}
    t = {(): Q(1)}
    sign = Q(1)
    while True:
        t = poly_mul(t, q, s.nmax)
        if not t:
            break
        sign = -sign
        poly_add_scaled(out, t, sign)
    return LieSeries(s.genset, s.nmax, out)


def _even_support(s: LieSeries) -> bool:
    degs = s.genset.degrees
    return all(degs[g] == 0 for w in s.terms for g in w)


def bch(a: LieSeries, b: LieSeries, nmax=None, certify=True) -> LieSeries:
    """log(exp(a) exp(b)), truncated at nmax (default: the common cap).

    Inputs must have pure Koszul degree 0; the result is certified primitive
    through the Dynkin identity unless certify is switched off.
    """
    if nmax is None:
        nmax = min(a.nmax, b.nmax)
    if nmax < 1:
        raise ValueError("letter cap must be at least 1")
    if not (_even_support(a) and _even_support(b)):
        raise ValueError("bch requires arguments of Koszul degree 0")
    out = envelope_log(envelope_exp(a.truncate(nmax)) * envelope_exp(b.truncate(nmax)))
    if certify:
        dynkin_certify(out)
    return out


def ad_series(f, x: LieSeries, v: LieSeries) -> LieSeries:
    """Sum over k of f_k ad(x)^k v for a one-variable power series f.

    f may be a sequence of rational coefficients (exhausted coefficients
    count as zero) or a callable k -> coefficient.
    """
    if callable(f):
        coeff_fn = lambda k: rational(f(k))
    else:
        coeffs = [rational(c) for c in f]
        coeff_fn = lambda k: coeffs[k] if k < len(coeffs) else Q(0)
    return ad_power_apply(x, v, coeff_fn)


def ad_power_apply(u: LieSeries, v: LieSeries, coeff_fn) -> LieSeries:
    """Sum over k of coeff_fn(k) * ad(u)^k v; terminates by letter growth."""
    if u.min_letters() < 1:
        raise ValueError("ad requires a series without constant term")
    out = v.scale(coeff_fn(0))
    t = v
    k = 0
    while True:
        k += 1
        t = u.bracket(t)
        if t.is_zero():
            break
        c = coeff_fn(k)
        if c:
            out = out + t.scale(c)
    return out


# -- left-normed brackets and the Dynkin certificate --------------------

_LEFT_NORMED_CACHE = {}


def left_normed_terms(genset: GeneratorSet, word):
    """Envelope expansion of [[...[g1,g2],...],gn] as a plain dict (shared,
    do not mutate)."""
    word = tuple(word)
    if not word:
        raise ValueError("empty bracket word")
    key = (genset, word)
    cached = _LEFT_NORMED_CACHE.get(key)
    if cached is not None:
        return cached
    n = len(word)
    t = {(word[0],): Q(1)}
    for i in range(1, n):
        g = {(word[i],): Q(1)}
        t = poly_bracket(t, g, genset.degrees, n)
    _LEFT_NORMED_CACHE[key] = t
    return t


def left_normed_bracket(genset: GeneratorSet, word, nmax) -> LieSeries:
    return LieSeries(genset, nmax, left_normed_terms(genset, word))


def dynkin_certify(s: LieSeries) -> LieSeries:
    """Check each homogeneous part p_n satisfies the Dynkin identity
    (left-normed bracketing of words recovers n * p_n); raises NotLieElement.

    Valid whenever the element only involves degree-0 letters; elements with
    graded letters should certify through a bracket spanning set instead.
    """
    if not _even_support(s):
        raise ValueError("Dynkin certificate requires Koszul degree 0 support")
    for n, part in s.components().items():
        if n == 0:
            if part.terms:
                raise NotLieElement("constant term present")
            continue
        acc = {}
        for w, c in part.terms.items():
            poly_add_scaled(acc, left_normed_terms(s.genset, w), c)
        expect = _scaled(part.terms, Q(n))
        if acc != expect:
            raise NotLieElement(f"letter count {n} fails the Dynkin identity")
    return s


# -- Lyndon words -------------------------------------------------------


def lyndon_words(alphabet_size: int, max_len: int):
    """All Lyndon words over 0..alphabet_size-1 of length <= max_len
    (Duval's generation), returned sorted by (length, lex)."""
    if alphabet_size < 1 or max_len < 1:
        return []
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet_size - 1:
            w.pop()
    out.sort(key=lambda t: (len(t), t))
    return out


def is_lyndon(word) -> bool:
    word = tuple(word)
    n = len(word)
    if n == 0:
        return False
    return all(word < word[i:] + word[:i] for i in range(1, n))


def standard_factorization(word):
    """Lyndon word of length >= 2 split as (u, v), v the lex-least proper
    suffix; both halves are Lyndon and u < v."""
    word = tuple(word)
    if len(word) < 2:
        raise ValueError("need length >= 2")
    v = min(word[i:] for i in range(1, len(word)))
    return word[: len(word) - len(v)], v


_LYNDON_BRACKET_CACHE = {}


def lyndon_bracket_terms(genset: GeneratorSet, word):
    """Envelope expansion of the standard bracketing of a Lyndon word
    (shared dict, do not mutate)."""
    word = tuple(word)
    key = (genset, word)
    cached = _LYNDON_BRACKET_CACHE.get(key)
    if cached is not None:
        return cached
    if len(word) == 1:
        t = {word: Q(1)}
    else:
        u, v = standard_factorization(word)
        t = poly_bracket(
            lyndon_bracket_terms(genset, u),
            lyndon_bracket_terms(genset, v),
            genset.degrees,
            len(word),
        )
    _LYNDON_BRACKET_CACHE[key] = t
    return t


def lyndon_bracket(genset: GeneratorSet, word, nmax) -> LieSeries:
    if not is_lyndon(word):
        raise ValueError(f"not a Lyndon word: {word}")
    return LieSeries(genset, nmax, lyndon_bracket_terms(genset, word))


def lyndon_basis(genset: GeneratorSet, letter_degree: int):
    """Standard-bracketing Lyndon basis of the letter-count slice of the
    free Lie algebra; cardinality is the Witt number. Even alphabets only."""
    if not genset.is_even():
        raise ValueError("Lyndon basis enumeration requires an even alphabet")
    if letter_degree < 1:
        return []
    return [
        LieSeries(genset, letter_degree, lyndon_bracket_terms(genset, w))
        for w in lyndon_words(len(genset), letter_degree)
        if len(w) == letter_degree
    ]


def lyndon_coordinates(s: LieSeries, strict=True):
    """Coordinates of a Lie series in the Lyndon basis, as dict word -> Q.

    Greedy triangular elimination: the standard bracketing of a Lyndon word
    expands as the word itself plus lex-greater words, so repeatedly killing
    the least surviving word terminates. With strict=True a nonzero residual
    raises NotLieElement; otherwise returns (coords, residual).
    """
    if not _even_support(s):
        raise ValueError("Lyndon coordinates require Koszul degree 0 support")
    coords = {}
    residual = {}
    for n, part in s.components().items():
        if n == 0:
            if part.terms:
                residual.update(part.terms)
            continue
        work = dict(part.terms)
        while work:
            w = min(work)
            c = work.pop(w)
            if not is_lyndon(w):
                residual[w] = c
                continue
            coords[w] = c
            expansion = lyndon_bracket_terms(s.genset, w)
            poly_add_scaled(work, expansion, -c)
            work.pop(w, None)
    if strict:
        if residual:
            raise NotLieElement(f"residual on {len(residual)} words")
        return coords
    return coords, LieSeries(s.genset, s.nmax, residual)


def from_lyndon_coordinates(genset: GeneratorSet, coords, nmax) -> LieSeries:
    terms = {}
    for w, c in coords.items():
        w = tuple(w)
        if len(w) > nmax or not c:
            continue
        poly_add_scaled(terms, lyndon_bracket_terms(genset, w), rational(c))
    return LieSeries(genset, nmax, terms)


_BCH_TABLE_CACHE = {}


def universal_bch_table(nmax: int):
    """Lyndon coordinates of bch(x1, x2) up to letter count nmax, over the
    two-letter alphabet (words are tuples over {0, 1})."""
    for have, table in _BCH_TABLE_CACHE.items():
        if have >= nmax:
            return {w: c for w, c in table.items() if len(w) <= nmax}
    gs = free_set("x1 x2")
    a = LieSeries.generator(gs, "x1", nmax)
    b = LieSeries.generator(gs, "x2", nmax)
    table = lyndon_coordinates(bch(a, b))
    _BCH_TABLE_CACHE[nmax] = table
    return dict(table)
