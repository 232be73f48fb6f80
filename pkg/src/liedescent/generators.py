"""Generator alphabets for free graded Lie algebras and their calculus.

A GeneratorSet is an immutable ordered alphabet of named generators with
Koszul degrees. Differential pairs (g, dg) are tracked so the de Rham
differential and the contraction know their images; |dg| = |g| + 1.
"""

from typing import NamedTuple


class Generator(NamedTuple):
    name: str
    degree: int


class GeneratorSet:
    """Immutable ordered alphabet; index order fixes canonical forms.

    diff_of maps a generator index to the index of its differential (or -1),
    base_of is the inverse direction. Generator order is the declaration
    order; with differentials interleaved as (g, dg) pairs.
    """

    __slots__ = ("gens", "degrees", "diff_of", "base_of", "_index", "_hash")

    def __init__(self, gens, diff_pairs=()):
        self.gens = tuple(Generator(n, d) for n, d in gens)
        self.degrees = tuple(g.degree for g in self.gens)
        self._index = {g.name: i for i, g in enumerate(self.gens)}
        if len(self._index) != len(self.gens):
            raise ValueError("duplicate generator names")
        diff = [-1] * len(self.gens)
        base = [-1] * len(self.gens)
        for gname, dname in diff_pairs:
            gi, di = self._index[gname], self._index[dname]
            if self.degrees[di] != self.degrees[gi] + 1:
                raise ValueError(f"|{dname}| must be |{gname}| + 1")
            diff[gi] = di
            base[di] = gi
        self.diff_of = tuple(diff)
        self.base_of = tuple(base)
        self._hash = hash((self.gens, self.diff_of))

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __eq__(self, other):
        return (
            isinstance(other, GeneratorSet)
            and self.gens == other.gens
            and self.diff_of == other.diff_of
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"GeneratorSet({', '.join(g.name for g in self.gens)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def name(self, i: int) -> str:
        return self.gens[i].name

    @property
    def names(self):
        return tuple(g.name for g in self.gens)

    def is_even(self) -> bool:
        return all(d % 2 == 0 for d in self.degrees)

    def has_differentials(self) -> bool:
        return any(i >= 0 for i in self.diff_of)

    def with_differentials(self) -> "GeneratorSet":
        """Extend with a differential dg for every generator, interleaved."""
        if self.has_differentials():
            raise ValueError("generator set already carries differentials")
        gens = []
        pairs = []
        for g in self.gens:
            gens.append((g.name, g.degree))
            gens.append(("d" + g.name, g.degree + 1))
            pairs.append((g.name, "d" + g.name))
        return GeneratorSet(gens, pairs)

    def word_string(self, word) -> str:
        return " ".join(self.gens[i].name for i in word)


def free_set(names, degrees=None) -> GeneratorSet:
    """Alphabet without differentials; degrees default to 0 (even)."""
    names = names.split() if isinstance(names, str) else list(names)
    if degrees is None:
        degrees = [0] * len(names)
    return GeneratorSet(zip(names, degrees))


def x_set(n: int) -> GeneratorSet:
    """The even alphabet x1..xn."""
    return free_set([f"x{i}" for i in range(1, n + 1)])


def x_form_set(n: int) -> GeneratorSet:
    """x1..xn with differentials dx1..dxn."""
    return x_set(n).with_differentials()


def descent_set(n: int) -> GeneratorSet:
    """Level-n alphabet {A, x1..xn} with differentials; |A| = 1.

    Level n of the gauge tower: one odd connection generator A plus n even
    flat directions. The generator order (A, dA, x1, dx1, ...) fixes the
    canonical cyclic forms used in all reports.
    """
    gens = [("A", 1)]
    gens += [(f"x{i}", 0) for i in range(1, n + 1)]
    return GeneratorSet(gens).with_differentials()
