"""Cosimplicial gauge tower on universal forms.

Level n carries cyclic forms over the alphabet {A, dA, x1, dx1, ..., xn,
dxn}. Cofaces are substitution homomorphisms level n -> n+1: the abelian
variant substitutes linear expressions, the non-abelian one conjugates the
connection by exp(x1) and glues group coordinates with the BCH series.
Differential letters are substituted by d-compatibility, so every coface
commutes with the de Rham differential by construction.

The simplicial differential is the alternating coface sum; the total
differential D adds the de Rham differential to a parity twist of the
simplicial one. D**2 = 0 holds under the sign recorded here: the simplicial
term of a Koszul degree j piece enters with (-1)**j.
"""

from math import factorial

from ._kernels import column_echelon, hom_apply
from .conventions import active
from .forms import CyclicForm, de_rham, graded_basis_upto, series_de_rham
from .freelie import LieSeries, ad_series, bch
from .generators import descent_set
from .rat import Q

ABELIAN = "abelian"
NONABELIAN = "nonabelian"
_VARIANTS = (ABELIAN, NONABELIAN)


def _check_variant(variant):
    if variant not in _VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {_VARIANTS}")
    return variant


def level_of(genset):
    """Simplicial level of a descent alphabet (inverse of descent_set)."""
    n = (len(genset) - 2) // 2
    if n < 0 or genset != descent_set(n):
        raise ValueError("generator set is not a descent alphabet")
    return n


class BottShulmanElement:
    """Cyclic form tagged with its simplicial level."""

    __slots__ = ("level", "form")

    def __init__(self, level, form):
        if form.genset != descent_set(level):
            raise ValueError(f"form alphabet does not match level {level}")
        self.level = level
        self.form = form

    def is_zero(self):
        return self.form.is_zero()

    def _check(self, other):
        if self.level != other.level:
            raise ValueError("levels differ")

    def __add__(self, other):
        self._check(other)
        return BottShulmanElement(self.level, self.form + other.form)

    def __sub__(self, other):
        self._check(other)
        return BottShulmanElement(self.level, self.form - other.form)

    def __neg__(self):
        return BottShulmanElement(self.level, -self.form)

    def scale(self, factor):
        return BottShulmanElement(self.level, self.form.scale(factor))

    def __eq__(self, other):
        return (
            isinstance(other, BottShulmanElement)
            and self.level == other.level
            and self.form == other.form
        )

    def __hash__(self):
        return hash((self.level, self.form))

    def __repr__(self):
        return f"BottShulman(level={self.level}, {self.form!r})"


# -- coface substitutions -----------------------------------------------------

_IMAGE_CACHE = {}


def _xgen(gs, j, nmax):
    return LieSeries.generator(gs, f"x{j}", nmax)


def _coface_images(variant, level, i, nmax):
    """Substitution table for the i-th coface at the given level: source
    generator index -> envelope image terms over the level+1 alphabet.
    Images of differential letters are the de Rham images of the base ones."""
    key = (variant, level, i, nmax)
    cached = _IMAGE_CACHE.get(key)
    if cached is not None:
        return cached
    src = descent_set(level)
    dst = descent_set(level + 1)
    conn = LieSeries.generator(dst, "A", nmax)
    base = {}
    if i == level + 1:
        base[0] = conn
        for j in range(1, level + 1):
            base[2 * j] = _xgen(dst, j, nmax)
    elif i == 0:
        x1 = _xgen(dst, 1, nmax)
        dx1 = LieSeries.generator(dst, "dx1", nmax)
        if variant == ABELIAN:
            base[0] = conn + dx1
        else:
            # exp(-ad x1) A + f(ad x1) dx1 with f(z) = (1 - exp(-z))/z
            base[0] = ad_series(
                lambda k: Q((-1) ** k, factorial(k)), x1, conn
            ) + ad_series(lambda k: Q((-1) ** k, factorial(k + 1)), x1, dx1)
        for j in range(1, level + 1):
            base[2 * j] = _xgen(dst, j + 1, nmax)
    else:
        base[0] = conn
        for j in range(1, i):
            base[2 * j] = _xgen(dst, j, nmax)
        xi, xj = _xgen(dst, i, nmax), _xgen(dst, i + 1, nmax)
        base[2 * i] = xi + xj if variant == ABELIAN else bch(xi, xj, nmax)
        for j in range(i + 1, level + 1):
            base[2 * j] = _xgen(dst, j + 1, nmax)
    images = {}
    for g, s in base.items():
        images[g] = dict(s.terms)
        images[src.diff_of[g]] = dict(series_de_rham(s).terms)
    _IMAGE_CACHE[key] = images
    return images


def _unwrap(element):
    if isinstance(element, BottShulmanElement):
        return element.form, element.level, True
    return element, level_of(element.genset), False


def coface(variant, i, element):
    """The i-th coface applied to a form (or wrapped element) at level n,
    landing at level n+1. Index range is 0..n+1."""
    _check_variant(variant)
    form, level, wrapped = _unwrap(element)
    if not 0 <= i <= level + 1:
        raise IndexError(f"coface index {i} outside 0..{level + 1}")
    images = _coface_images(variant, level, i, max(form.nmax, 1))
    out = CyclicForm(
        descent_set(level + 1), form.nmax, hom_apply(form.terms, images, form.nmax)
    )
    return BottShulmanElement(level + 1, out) if wrapped else out


def coface_series(variant, i, s: LieSeries) -> LieSeries:
    """The same substitution on a bare envelope series (not descended)."""
    _check_variant(variant)
    level = level_of(s.genset)
    if not 0 <= i <= level + 1:
        raise IndexError(f"coface index {i} outside 0..{level + 1}")
    images = _coface_images(variant, level, i, max(s.nmax, 1))
    return LieSeries(descent_set(level + 1), s.nmax, hom_apply(s.terms, images, s.nmax))


def simplicial_delta(variant, element):
    """Alternating sum of cofaces; squares to zero and commutes with d."""
    _check_variant(variant)
    form, level, wrapped = _unwrap(element)
    out = CyclicForm.zero(descent_set(level + 1), form.nmax)
    for i in range(level + 2):
        term = coface(variant, i, form)
        out = out + term if i % 2 == 0 else out - term
    return BottShulmanElement(level + 1, out) if wrapped else out


# -- mixed chains and the total differential ---------------------------------


class MixedChain:
    """Finitely supported map simplicial level -> form over that alphabet."""

    __slots__ = ("nmax", "parts")

    def __init__(self, nmax, parts=None):
        self.nmax = nmax
        clean = {}
        if parts:
            for n, form in parts.items():
                if isinstance(form, BottShulmanElement):
                    if form.level != n:
                        raise ValueError(f"component at key {n} declares level {form.level}")
                    form = form.form
                if form.genset != descent_set(n):
                    raise ValueError(f"level {n} component has the wrong alphabet")
                form = form.truncate(nmax)
                if not form.is_zero():
                    clean[n] = form
        self.parts = clean

    @classmethod
    def single(cls, nmax, level, form):
        return cls(nmax, {level: form})

    def levels(self):
        return sorted(self.parts)

    def component(self, n):
        got = self.parts.get(n)
        if got is None:
            return CyclicForm.zero(descent_set(n), self.nmax)
        return got

    def element(self, n):
        return BottShulmanElement(n, self.component(n))

    def total_degree_part(self, m):
        """Sub-chain of pieces with de Rham degree + level equal to m."""
        parts = {}
        for n, form in self.parts.items():
            piece = form.koszul_component(m - n)
            if not piece.is_zero():
                parts[n] = piece
        return MixedChain(self.nmax, parts)

    def is_zero(self):
        return not self.parts

    def truncate(self, nmax):
        return MixedChain(nmax, self.parts)

    def __add__(self, other):
        nmax = min(self.nmax, other.nmax)
        parts = dict(self.parts)
        for n, form in other.parts.items():
            parts[n] = parts[n] + form if n in parts else form
        return MixedChain(nmax, parts)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, factor):
        return MixedChain(self.nmax, {n: f.scale(factor) for n, f in self.parts.items()})

    def __eq__(self, other):
        return isinstance(other, MixedChain) and self.parts == other.parts

    def __hash__(self):
        return hash(frozenset(self.parts.items()))

    def __repr__(self):
        if not self.parts:
            return f"MixedChain(0, nmax={self.nmax})"
        inner = ", ".join(f"{n}: {form!r}" for n, form in sorted(self.parts.items()))
        return f"MixedChain({{{inner}}}, nmax={self.nmax})"


def total_differential(chain: MixedChain, variant) -> MixedChain:
    """D = d + (-1)**(de Rham degree) * simplicial differential.

    The sign is read off each Koszul-homogeneous piece of the level n-1
    component before its simplicial differential lands at level n.
    """
    _check_variant(variant)
    parts = {}

    def acc(n, form):
        parts[n] = parts[n] + form if n in parts else form

    power = active().de_rham_sign_power
    for n, form in chain.parts.items():
        acc(n, de_rham(form))
        for j, piece in form.koszul_components().items():
            image = simplicial_delta(variant, piece)
            acc(n + 1, image if (j * power) % 2 == 0 else -image)
    return MixedChain(chain.nmax, parts)


# -- row cohomology at finite letter count ------------------------------------

_DELTA_COLUMNS_CACHE = {}


def delta_columns(variant, level, de_rham_degree, letter_count):
    """Graded pairing basis of the (de_rham_degree, letters <= letter_count)
    slice at the given level together with the image columns of the truncated
    simplicial differential (necklace coordinates at level+1). Cached; do not
    mutate the returned structures."""
    key = (variant, level, de_rham_degree, letter_count)
    cached = _DELTA_COLUMNS_CACHE.get(key)
    if cached is None:
        basis = graded_basis_upto(descent_set(level), de_rham_degree, letter_count)
        columns = [
            simplicial_delta(variant, b.truncate(letter_count)).terms for b in basis
        ]
        cached = (basis, columns)
        _DELTA_COLUMNS_CACHE[key] = cached
    return cached


def _rank(columns):
    pivot_rows, _, _ = column_echelon(columns)
    return sum(1 for p in pivot_rows if p != -1)


def row_cohomology(variant, de_rham_degree, level, letter_count):
    """Exact (dim kernel, dim image-from-previous, dim cohomology) of the
    simplicial differential on one row slice.

    Works in the quotient complex of forms with at most letter_count letters;
    the substitutions never lower letter count, so truncation is a chain map
    and the reported ranks are exact at this cap.
    """
    _check_variant(variant)
    basis, columns = delta_columns(variant, level, de_rham_degree, letter_count)
    dim_ker = len(basis) - _rank(columns)
    if level == 0:
        dim_im = 0
    else:
        _, prev = delta_columns(variant, level - 1, de_rham_degree, letter_count)
        dim_im = _rank(prev)
    return dim_ker, dim_im, dim_ker - dim_im
