"""Cyclic forms: the necklace quotient of the free envelope.

A CyclicForm is a rational combination of cyclic words (necklaces) over a
GeneratorSet, each word stored as its canonical representative (lex-least
rotation) with Koszul rotation signs absorbed into the coefficients. Words
whose odd rotation symmetry forces them to vanish are dropped at
construction.

The de Rham differential d, the contraction e and the letter-count Euler
operator n act here; they satisfy d e + e d = n, which is what makes the
closed-form primitive a one-liner. The graded pairing subspace (the span of
necklaces of products of two Lie elements) is strictly smaller than the
whole necklace space; its basis is computed by echelonizing generator-Lie
pairings.
"""

from .rat import Q, rational
from ._kernels import (
    column_echelon,
    cyclic_canonical,
    cyclic_reduce,
    derivation_apply,
    poly_add_scaled,
    poly_mul,
    word_degree,
)
from .generators import GeneratorSet
from .freelie import LieSeries, left_normed_terms, lyndon_bracket_terms, lyndon_words


class NotClosedError(ValueError):
    """Asked for a primitive of a form that is not closed."""


class CyclicForm:
    """Necklace-space element; terms map canonical words to coefficients."""

    __slots__ = ("genset", "nmax", "terms")

    def __init__(self, genset: GeneratorSet, nmax: int, terms=None):
        self.genset = genset
        self.nmax = nmax
        if terms:
            capped = {w: c for w, c in terms.items() if len(w) <= nmax and c}
            self.terms = cyclic_reduce(capped, genset.degrees)
        else:
            self.terms = {}

    @classmethod
    def zero(cls, genset, nmax):
        return cls(genset, nmax)

    @classmethod
    def necklace(cls, genset, word, nmax, coeff=1):
        return cls(genset, nmax, {tuple(word): rational(coeff)})

    # -- queries --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def coeff(self, word):
        canon, sign = cyclic_canonical(tuple(word), self.genset.degrees)
        if sign == 0:
            return Q(0)
        return sign * self.terms.get(canon, Q(0))

    def letter_component(self, n):
        return CyclicForm(
            self.genset, self.nmax, {w: c for w, c in self.terms.items() if len(w) == n}
        )

    def letter_components(self):
        by_n = {}
        for w, c in self.terms.items():
            by_n.setdefault(len(w), {})[w] = c
        return {n: CyclicForm(self.genset, self.nmax, t) for n, t in sorted(by_n.items())}

    def koszul_degree(self):
        """Common form degree of all words; None for zero, error if mixed."""
        degs = {word_degree(w, self.genset.degrees) for w in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"mixed form degrees {sorted(degs)}")
        return degs.pop()

    def koszul_component(self, j):
        degs = self.genset.degrees
        return CyclicForm(
            self.genset,
            self.nmax,
            {w: c for w, c in self.terms.items() if word_degree(w, degs) == j},
        )

    def koszul_components(self):
        by_j = {}
        for w, c in self.terms.items():
            by_j.setdefault(word_degree(w, self.genset.degrees), {})[w] = c
        return {j: CyclicForm(self.genset, self.nmax, t) for j, t in sorted(by_j.items())}

    def min_letters(self):
        return min((len(w) for w in self.terms), default=self.nmax + 1)

    def max_letters(self):
        return max((len(w) for w in self.terms), default=0)

    def truncate(self, n):
        return CyclicForm(self.genset, n, {w: c for w, c in self.terms.items() if len(w) <= n})

    # -- arithmetic -------------------------------------------------------

    def _check(self, other):
        if self.genset != other.genset:
            raise ValueError("generator sets differ")
        return min(self.nmax, other.nmax)

    def __add__(self, other):
        nmax = self._check(other)
        terms = {w: c for w, c in self.terms.items() if len(w) <= nmax}
        poly_add_scaled(terms, other.terms, Q(1))
        return CyclicForm(self.genset, nmax, terms)

    def __sub__(self, other):
        nmax = self._check(other)
        terms = {w: c for w, c in self.terms.items() if len(w) <= nmax}
        poly_add_scaled(terms, other.terms, Q(-1))
        return CyclicForm(self.genset, nmax, terms)

    def __neg__(self):
        return self.scale(Q(-1))

    def scale(self, factor):
        factor = rational(factor)
        return CyclicForm(
            self.genset, self.nmax, {w: c * factor for w, c in self.terms.items()} if factor else {}
        )

    def __rmul__(self, factor):
        return self.scale(factor)

    def __eq__(self, other):
        return (
            isinstance(other, CyclicForm)
            and self.genset == other.genset
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.genset, frozenset(self.terms.items())))

    def __repr__(self):
        n = len(self.terms)
        if n == 0:
            return f"CyclicForm(0, nmax={self.nmax})"
        shown = sorted(self.terms, key=lambda w: (len(w), w))[:4]
        parts = " + ".join(f"{self.terms[w]}*({self.genset.word_string(w)})" for w in shown)
        more = "" if n <= 4 else f" +{n - 4} terms"
        return f"CyclicForm({parts}{more}, nmax={self.nmax})"


# -- building forms -------------------------------------------------------


def from_series(s: LieSeries) -> CyclicForm:
    """Project an envelope series onto necklace space."""
    return CyclicForm(s.genset, s.nmax, s.terms)


def pair(a: LieSeries, b: LieSeries) -> CyclicForm:
    """Cyclic pairing: the necklace class of the product a b."""
    if a.genset != b.genset:
        raise ValueError("generator sets differ")
    nmax = min(a.nmax, b.nmax)
    return CyclicForm(a.genset, nmax, poly_mul(a.terms, b.terms, nmax))


# -- the three derived operators -------------------------------------------


def _diff_images(genset: GeneratorSet):
    return {i: {(di,): Q(1)} for i, di in enumerate(genset.diff_of) if di >= 0}


def _contract_images(genset: GeneratorSet):
    return {i: {(bi,): Q(1)} for i, bi in enumerate(genset.base_of) if bi >= 0}


def de_rham(form: CyclicForm) -> CyclicForm:
    """Odd derivation g -> dg, dg -> 0, descended to necklaces."""
    if not form.genset.has_differentials():
        raise ValueError("alphabet carries no differentials")
    terms = derivation_apply(
        form.terms, _diff_images(form.genset), form.genset.degrees, True, form.nmax
    )
    return CyclicForm(form.genset, form.nmax, terms)


def contract(form: CyclicForm) -> CyclicForm:
    """Odd contraction dg -> g, g -> 0, descended to necklaces."""
    if not form.genset.has_differentials():
        raise ValueError("alphabet carries no differentials")
    terms = derivation_apply(
        form.terms, _contract_images(form.genset), form.genset.degrees, True, form.nmax
    )
    return CyclicForm(form.genset, form.nmax, terms)


def euler(form: CyclicForm) -> CyclicForm:
    """Letter-count grading operator."""
    return CyclicForm(
        form.genset, form.nmax, {w: c * len(w) for w, c in form.terms.items()}
    )


def series_de_rham(s: LieSeries) -> LieSeries:
    """The same odd derivation on envelope series (not descended)."""
    if not s.genset.has_differentials():
        raise ValueError("alphabet carries no differentials")
    terms = derivation_apply(s.terms, _diff_images(s.genset), s.genset.degrees, True, s.nmax)
    return LieSeries(s.genset, s.nmax, terms)


def poincare_primitive(form: CyclicForm) -> CyclicForm:
    """The canonical primitive of a closed form with no constant part.

    Built from the homotopy d e + e d = n: on the letter-count n piece the
    primitive is e(piece)/n. Raises NotClosedError when d(form) != form is
    violated by the candidate, which happens exactly when form is not closed.
    """
    if () in form.terms:
        raise ValueError("constant part has no primitive")
    out = {}
    for n, part in form.letter_components().items():
        poly_add_scaled(out, contract(part).terms, Q(1, n))
    prim = CyclicForm(form.genset, form.nmax, out)
    if de_rham(prim) != form:
        raise NotClosedError("form is not closed")
    return prim


# -- necklace enumeration ---------------------------------------------------

_NECKLACE_CACHE = {}


def necklace_words(genset: GeneratorSet, letters: int, degree=None):
    """Canonical nonvanishing necklace words with the given letter count,
    optionally filtered by form degree. Sorted lexicographically."""
    key = (genset, letters)
    words = _NECKLACE_CACHE.get(key)
    if words is None:
        k = len(genset)
        degs = genset.degrees
        found = set()
        word = [0] * letters
        # enumerate all words, keep canonical survivors
        def rec(pos):
            if pos == letters:
                w = tuple(word)
                canon, sign = cyclic_canonical(w, degs)
                if sign != 0:
                    found.add(canon)
                return
            for g in range(k):
                word[pos] = g
                rec(pos + 1)

        if letters == 0:
            words = [()]
        else:
            rec(0)
            words = sorted(found)
        _NECKLACE_CACHE[key] = words
    if degree is None:
        return list(words)
    degs = genset.degrees
    return [w for w in words if word_degree(w, degs) == degree]


def necklace_basis(genset, letters, nmax=None, degree=None):
    if nmax is None:
        nmax = letters
    return [
        CyclicForm.necklace(genset, w, nmax)
        for w in necklace_words(genset, letters, degree)
    ]


# -- Lie component bases -----------------------------------------------------

_LIE_BASIS_CACHE = {}


def lie_component_basis(genset: GeneratorSet, letters: int):
    """Basis of the letter-count slice of the free graded Lie algebra,
    as LieSeries. Lyndon standard brackets over even alphabets; echelonized
    left-normed brackets over graded ones."""
    key = (genset, letters)
    cached = _LIE_BASIS_CACHE.get(key)
    if cached is not None:
        return list(cached)
    if letters < 1:
        return []
    if genset.is_even():
        basis = [
            LieSeries(genset, letters, lyndon_bracket_terms(genset, w))
            for w in lyndon_words(len(genset), letters)
            if len(w) == letters
        ]
        _LIE_BASIS_CACHE[key] = basis
        return list(basis)
    columns = []
    col_words = []

    def rec(word):
        if len(word) == letters:
            columns.append(left_normed_terms(genset, tuple(word)))
            col_words.append(tuple(word))
            return
        for g in range(len(genset)):
            word.append(g)
            rec(word)
            word.pop()

    rec([])
    # echelonize over envelope coordinates; keep one series per pivot column
    indexed = [
        {w: c for w, c in col.items()} for col in columns
    ]
    # column_echelon wants hashable, ordered row keys; words are fine
    pivot_rows, reduced, _ = column_echelon(indexed)
    basis = []
    for j, prow in enumerate(pivot_rows):
        if prow != -1:
            basis.append(LieSeries(genset, letters, reduced[j]))
    _LIE_BASIS_CACHE[key] = basis
    return list(basis)


_PAIR_BASIS_CACHE = {}


def graded_basis(genset: GeneratorSet, de_rham_degree, letter_count: int):
    """Basis of one bigraded slice of the pairing space: necklaces of
    (Lie, Lie) products with the given letter count and form degree
    (de_rham_degree None means all degrees at that letter count).

    Cyclic invariance of the pairing reduces every such product to a
    generator paired against a Lie element, so those span. The result is
    echelonized over necklace coordinates; each element is homogeneous,
    normalized to +1 on its lex-least word, and the list is deterministic.
    """
    key = (genset, de_rham_degree, letter_count)
    cached = _PAIR_BASIS_CACHE.get(key)
    if cached is not None:
        return list(cached)
    if letter_count < 2:
        # every pairing-space word carries at least two letters
        _PAIR_BASIS_CACHE[key] = []
        return []
    degs = genset.degrees
    columns = []
    for u in lie_component_basis(genset, letter_count - 1):
        for g in range(len(genset)):
            prod = poly_mul({(g,): Q(1)}, u.terms, letter_count)
            neck = cyclic_reduce(prod, degs)
            if not neck:
                continue
            if de_rham_degree is not None:
                wd = word_degree(next(iter(neck)), degs)
                if wd != de_rham_degree:
                    continue
            columns.append(neck)
    pivot_rows, reduced, _ = column_echelon(columns)
    basis = []
    for j, prow in enumerate(pivot_rows):
        if prow != -1:
            basis.append(CyclicForm(genset, letter_count, reduced[j]))
    _PAIR_BASIS_CACHE[key] = basis
    return list(basis)


def graded_basis_upto(genset: GeneratorSet, de_rham_degree, max_letters: int):
    """Concatenation of graded_basis over letter counts 2..max_letters,
    every element re-capped at max_letters so combinations keep all terms."""
    out = []
    for k in range(2, max_letters + 1):
        out.extend(b.truncate(max_letters) for b in graded_basis(genset, de_rham_degree, k))
    return out


def reindex(form: CyclicForm, genset: GeneratorSet) -> CyclicForm:
    """Move a form to another alphabet, matching letters by name.

    Degrees must agree letter by letter; a letter missing from the target
    raises KeyError."""
    src = form.genset
    if src is genset:
        return form
    lookup = {}

    def image(g):
        j = lookup.get(g)
        if j is None:
            name = src.name(g)
            j = genset.index(name)
            if genset.degrees[j] != src.degrees[g]:
                raise ValueError(f"letter {name} changes degree under reindexing")
            lookup[g] = j
        return j

    terms = {}
    for word, coeff in form.terms.items():
        terms[tuple(image(g) for g in word)] = coeff
    return CyclicForm(genset, form.nmax, terms)


# -- coordinates --------------------------------------------------------------


def span_coordinates(form: CyclicForm, basis):
    """Coefficients of form over the given CyclicForm basis, or None."""
    from .linalg import NO_SOLUTION, vector_in_span

    for b in basis:
        if b.genset != form.genset:
            raise ValueError("basis alphabet differs from the form's")
    coeffs = vector_in_span([b.terms for b in basis], form.terms)
    if coeffs is NO_SOLUTION:
        return None
    return coeffs


def in_span(form: CyclicForm, basis) -> bool:
    return span_coordinates(form, basis) is not None
