"""Tangential derivations and automorphisms of the free Lie algebra.

A tangential derivation of arity n is a tuple (u1, ..., un) of Lie series
in x1..xn acting by xi -> [ui, xi]; the action extends to forms over any
alphabet containing x1..xn (the connection letters A, dA are annihilated)
and commutes with the de Rham differential by construction. The
automorphism group is handled in logarithmic coordinates throughout, with
the group law given by the BCH series over the tangential bracket.

Convention (recorded in the package ledger): the action of exp(u) is
exp(-rho(u)). Since u -> -rho(u) reverses brackets, the group product is
taken with log(g h) = bch(log h, log g); together these make
apply(g h) = apply(g) o apply(h) and give the cocycle identity for C its
stated shape. The calibration is pinned by the first-order solution
(x2, 0)/2 of the equation exp(u)(x1+x2) = bch(x1, x2).
"""

from math import factorial

from ._kernels import column_echelon, derivation_apply, hom_apply, poly_bracket
from .conventions import active
from .forms import CyclicForm, lie_component_basis, pair, series_de_rham
from .freelie import LieSeries, lyndon_words, standard_factorization, universal_bch_table
from .generators import GeneratorSet, x_form_set, x_set
from .rat import Q, rational


class TangentialDerivation:
    """Arity-n tuple of Lie series over x1..xn, one per group direction."""

    __slots__ = ("arity", "nmax", "components")

    def __init__(self, arity, nmax, components):
        components = tuple(components)
        if len(components) != arity:
            raise ValueError(f"expected {arity} components, got {len(components)}")
        gs = x_set(arity)
        fixed = []
        for c in components:
            if c.genset != gs:
                raise ValueError("components must live over the x alphabet of the arity")
            if c.coeff(()) != 0:
                raise ValueError("components must have no constant term")
            fixed.append(c.truncate(nmax))
        self.arity = arity
        self.nmax = nmax
        self.components = tuple(fixed)

    @classmethod
    def zero(cls, arity, nmax):
        gs = x_set(arity)
        return cls(arity, nmax, [LieSeries.zero(gs, nmax)] * arity)

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def min_degree(self):
        """Smallest component letter count present (nmax+1 when zero)."""
        return min(c.min_letters() for c in self.components) if self.components else self.nmax + 1

    def degree_component(self, k):
        return TangentialDerivation(
            self.arity, self.nmax, [c.component(k) for c in self.components]
        )

    def degree_components(self):
        ks = sorted({k for c in self.components for k in {len(w) for w in c.terms}})
        return {k: self.degree_component(k) for k in ks}

    def truncate(self, nmax):
        return TangentialDerivation(self.arity, nmax, self.components)

    def _check(self, other):
        if self.arity != other.arity:
            raise ValueError("arities differ")
        return min(self.nmax, other.nmax)

    def __add__(self, other):
        nmax = self._check(other)
        return TangentialDerivation(
            self.arity, nmax, [a + b for a, b in zip(self.components, other.components)]
        )

    def __sub__(self, other):
        nmax = self._check(other)
        return TangentialDerivation(
            self.arity, nmax, [a - b for a, b in zip(self.components, other.components)]
        )

    def __neg__(self):
        return self.scale(-1)

    def scale(self, factor):
        return TangentialDerivation(
            self.arity, self.nmax, [c.scale(factor) for c in self.components]
        )

    def bracket(self, other):
        return tder_bracket(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, TangentialDerivation)
            and self.arity == other.arity
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.arity, self.components))

    def __repr__(self):
        inner = ", ".join(repr(c) for c in self.components)
        return f"TangentialDerivation({inner})"


class TangentialAutomorphism:
    """Group element in log coordinates."""

    __slots__ = ("log",)

    def __init__(self, log: TangentialDerivation):
        self.log = log

    @classmethod
    def identity(cls, arity, nmax):
        return cls(TangentialDerivation.zero(arity, nmax))

    @classmethod
    def exp(cls, u: TangentialDerivation):
        return cls(u)

    @property
    def arity(self):
        return self.log.arity

    @property
    def nmax(self):
        return self.log.nmax

    def is_identity(self):
        return self.log.is_zero()

    def multiply(self, other):
        return taut_multiply(self, other)

    def inverse(self):
        return TangentialAutomorphism(-self.log)

    def apply(self, target):
        return taut_apply(self, target)

    def truncate(self, nmax):
        return TangentialAutomorphism(self.log.truncate(nmax))

    def __eq__(self, other):
        return isinstance(other, TangentialAutomorphism) and self.log == other.log

    def __hash__(self):
        return hash(("taut", self.log))

    def __repr__(self):
        return f"TangentialAutomorphism(log={self.log!r})"


# -- the infinitesimal action --------------------------------------------------


def _embed_images(src: GeneratorSet, dst: GeneratorSet):
    """Letter-to-letter substitution table matching generators by name."""
    return {i: {(dst.index(name),): Q(1)} for i, name in enumerate(src.names)}


def _rho_images(u: TangentialDerivation, genset: GeneratorSet, nmax: int):
    """Derivation table of rho(u) on the target alphabet: xi -> [ui, xi],
    dxi -> d[ui, xi]; any other letter (A, dA) is annihilated."""
    src = x_set(u.arity)
    embed = _embed_images(src, genset)
    degs = genset.degrees
    images = {}
    for i in range(1, u.arity + 1):
        xi = genset.index(f"x{i}")
        ui = hom_apply(u.components[i - 1].terms, embed, nmax)
        img = poly_bracket(ui, {(xi,): Q(1)}, degs, nmax)
        images[xi] = img
        di = genset.diff_of[xi]
        if di >= 0:
            images[di] = series_de_rham(LieSeries(genset, nmax, img)).terms
    return images


def rho_apply(u: TangentialDerivation, target):
    """Even derivation action on a LieSeries or CyclicForm whose alphabet
    contains x1..x{arity} by name."""
    terms = derivation_apply(
        target.terms, _rho_images(u, target.genset, target.nmax), target.genset.degrees,
        False, target.nmax,
    )
    if isinstance(target, CyclicForm):
        return CyclicForm(target.genset, target.nmax, terms)
    return LieSeries(target.genset, target.nmax, terms)


def tder_bracket(u: TangentialDerivation, v: TangentialDerivation) -> TangentialDerivation:
    """[(u, v)]_i = rho(u) v_i - rho(v) u_i - [u_i, v_i]."""
    nmax = u._check(v)
    comps = []
    for i in range(u.arity):
        ui, vi = u.components[i].truncate(nmax), v.components[i].truncate(nmax)
        comps.append(rho_apply(u, vi) - rho_apply(v, ui) - ui.bracket(vi))
    return TangentialDerivation(u.arity, nmax, comps)


# -- the group ------------------------------------------------------------------


def _bch_tder(a: TangentialDerivation, b: TangentialDerivation) -> TangentialDerivation:
    """BCH series of the tangential bracket, truncated by letter count."""
    nmax = a._check(b)
    step = min(a.min_degree(), b.min_degree())
    if step > nmax:
        return a + b
    depth = max(1, nmax // step)
    table = universal_bch_table(depth)
    out = TangentialDerivation.zero(a.arity, nmax)
    trees = {}

    def tree(word):
        got = trees.get(word)
        if got is None:
            if len(word) == 1:
                got = a if word[0] == 0 else b
            else:
                left, right = standard_factorization(word)
                got = tder_bracket(tree(left), tree(right))
            trees[word] = got
        return got

    for word in lyndon_words(2, depth):
        coeff = table.get(word)
        if coeff:
            out = out + tree(word).scale(coeff)
    return out


def taut_multiply(g: TangentialAutomorphism, h: TangentialAutomorphism) -> TangentialAutomorphism:
    """Group product; log(g h) = bch(log h, log g) under the default
    convention, so that apply(g h) = apply(g) o apply(h)."""
    if active().taut_product_order == "reversed":
        return TangentialAutomorphism(_bch_tder(h.log, g.log))
    return TangentialAutomorphism(_bch_tder(g.log, h.log))


def taut_inverse(g: TangentialAutomorphism) -> TangentialAutomorphism:
    return g.inverse()


def taut_apply(g: TangentialAutomorphism, target):
    """Action of the automorphism on a series or form: exp(-rho(log g))."""
    u = g.log
    sign = active().taut_exp_sign
    out = target
    t = target
    k = 0
    while True:
        k += 1
        t = rho_apply(u, t)
        if t.is_zero():
            return out
        out = out + t.scale(Q(sign**k, factorial(k)))


# -- gamma and the cocycles ------------------------------------------------------


def gamma(u: TangentialDerivation) -> CyclicForm:
    """One-form sum of <ui, dxi> over the form alphabet x1, dx1, ..."""
    gs = x_form_set(u.arity)
    nmax = u.nmax
    embed = _embed_images(x_set(u.arity), gs)
    out = CyclicForm.zero(gs, nmax)
    for i in range(1, u.arity + 1):
        ui = LieSeries(gs, nmax, hom_apply(u.components[i - 1].terms, embed, nmax))
        out = out + pair(ui, LieSeries.generator(gs, f"dx{i}", nmax))
    return out


def gamma_inverse(form: CyclicForm) -> TangentialDerivation:
    """Normal form of a one-form in the x letters as a tangential derivation.

    Every necklace with exactly one differential letter rotates (for free:
    all other letters are even) so that letter comes last; stripping it
    leaves the component word. Forms containing A or dA are rejected.
    """
    gs = form.genset
    names = set(gs.names)
    if "A" in names or "dA" in names:
        raise ValueError("one-form must involve the x letters only")
    arity = sum(1 for n in gs.names if not n.startswith("d"))
    target = x_set(arity)
    comps = {i: {} for i in range(1, arity + 1)}
    for word, coeff in form.terms.items():
        dpos = [p for p, g in enumerate(word) if gs.base_of[g] >= 0]
        if len(dpos) != 1:
            raise ValueError("not a one-form in the differentials")
        p = dpos[0]
        rotated = word[p + 1 :] + word[:p]
        dletter = word[p]
        i = int(gs.name(dletter)[2:])  # dx<i>
        body = tuple(target.index(gs.name(g)) for g in rotated)
        comps[i][body] = comps[i].get(body, Q(0)) + coeff
    series = [LieSeries(target, form.nmax, comps[i]) for i in range(1, arity + 1)]
    return TangentialDerivation(arity, form.nmax, series)


def is_sder(u: TangentialDerivation) -> bool:
    """Does u annihilate x1 + ... + xn?"""
    gs = x_set(u.arity)
    total = LieSeries.zero(gs, u.nmax)
    for i in range(1, u.arity + 1):
        total = total + LieSeries.generator(gs, f"x{i}", u.nmax)
    return rho_apply(u, total).is_zero()


def is_saut(g: TangentialAutomorphism) -> bool:
    gs = x_set(g.arity)
    total = LieSeries.zero(gs, g.nmax)
    for i in range(1, g.arity + 1):
        total = total + LieSeries.generator(gs, f"x{i}", g.nmax)
    return taut_apply(g, total) == total


def cocycle_c(u: TangentialDerivation) -> CyclicForm:
    """One-form sum of <xi, d ui>."""
    gs = x_form_set(u.arity)
    nmax = u.nmax
    embed = _embed_images(x_set(u.arity), gs)
    out = CyclicForm.zero(gs, nmax)
    for i in range(1, u.arity + 1):
        ui = LieSeries(gs, nmax, hom_apply(u.components[i - 1].terms, embed, nmax))
        out = out + pair(LieSeries.generator(gs, f"x{i}", nmax), series_de_rham(ui))
    return out


def cocycle_C(g: TangentialAutomorphism) -> CyclicForm:
    """Group cocycle: sum over k of (-rho(u))^k/(k+1)! applied to c(u),
    u = log g. Satisfies C(g h) = C(g) + g.C(h)."""
    u = g.log
    sign = active().taut_exp_sign
    t = cocycle_c(u)
    out = t
    k = 0
    while True:
        k += 1
        t = rho_apply(u, t)
        if t.is_zero():
            return out
        out = out + t.scale(Q(sign**k, factorial(k + 1)))


# -- pushforwards and the associator ---------------------------------------------


def parse_blocks(blocks: str):
    """Superscript notation: "12,3" means result indices 1 and 2 feed source
    slot 1 and result index 3 feeds slot 2. Returns {result index: slot}."""
    mapping = {}
    parts = blocks.split(",")
    for slot, part in enumerate(parts, start=1):
        part = part.strip()
        if not part:
            raise ValueError(f"empty block in {blocks!r}")
        for ch in part:
            if not ch.isdigit() or ch == "0":
                raise ValueError(f"bad index {ch!r} in {blocks!r}")
            idx = int(ch)
            if idx in mapping:
                raise ValueError(f"index {idx} repeated in {blocks!r}")
            mapping[idx] = slot
    return mapping


def pushforward(f, u, arity=None):
    """Cosimplicial pushforward along a partially defined map.

    f maps result indices to source slots ("12,3" or a dict); unmapped result
    indices get the zero component. Component k of the result is the source
    component at slot f(k) with xi substituted by the sum of the result
    letters feeding slot i. Works on derivations and automorphisms.
    """
    if isinstance(u, TangentialAutomorphism):
        return TangentialAutomorphism(pushforward(f, u.log, arity))
    mapping = parse_blocks(f) if isinstance(f, str) else dict(f)
    if not mapping:
        raise ValueError("empty index map")
    m = arity if arity is not None else max(mapping)
    if m < max(mapping):
        raise ValueError("arity smaller than the largest mapped index")
    slots = set(mapping.values())
    if slots - set(range(1, u.arity + 1)):
        raise ValueError("map targets a missing source slot")
    src = x_set(u.arity)
    dst = x_set(m)
    nmax = u.nmax
    images = {}
    for i in range(1, u.arity + 1):
        total = {}
        for l, slot in mapping.items():
            if slot == i:
                total[(dst.index(f"x{l}"),)] = Q(1)
        images[src.index(f"x{i}")] = total
    comps = []
    zero = LieSeries.zero(dst, nmax)
    for k in range(1, m + 1):
        slot = mapping.get(k)
        if slot is None:
            comps.append(zero)
        else:
            terms = hom_apply(u.components[slot - 1].terms, images, nmax)
            comps.append(LieSeries(dst, nmax, terms))
    return TangentialDerivation(m, nmax, comps)


def pushforward_form(f, form: CyclicForm, arity=None) -> CyclicForm:
    """Pushforward on forms over x1..xm and their differentials: xi goes to
    the sum of the result letters feeding slot i, dxi to the matching sum of
    differentials. Natural against the derivation pushforward through the
    one-form cocycle."""
    mapping = parse_blocks(f) if isinstance(f, str) else dict(f)
    if not mapping:
        raise ValueError("empty index map")
    m = arity if arity is not None else max(mapping)
    if m < max(mapping):
        raise ValueError("arity smaller than the largest mapped index")
    src = form.genset
    n_src = len(src.gens) // 2
    if slots_missing := set(mapping.values()) - set(range(1, n_src + 1)):
        raise ValueError(f"map targets missing source slots {sorted(slots_missing)}")
    dst = x_form_set(m)
    nmax = form.nmax
    images = {}
    for i in range(1, n_src + 1):
        base = {}
        for l, slot in mapping.items():
            if slot == i:
                base[(dst.index(f"x{l}"),)] = Q(1)
        images[src.index(f"x{i}")] = base
        img = LieSeries(dst, nmax, base)
        images[src.index(f"dx{i}")] = dict(series_de_rham(img).terms)
    out = {}
    for word, coeff in form.terms.items():
        image = hom_apply({word: coeff}, images, nmax)
        for w, c in image.items():
            out[w] = out.get(w, Q(0)) + c
    return CyclicForm(dst, nmax, out)


def sder_basis(arity, letter_degree, nmax):
    """Basis of the degree-homogeneous derivations that kill x1 + ... + xn.

    Solved by echelon over the candidate derivations with a single Lyndon
    component; degree means total letter count of each component.
    """
    gs = x_set(arity)
    lie = lie_component_basis(gs, letter_degree)
    total = LieSeries.zero(gs, nmax)
    for i in range(1, arity + 1):
        total = total + LieSeries.generator(gs, f"x{i}", nmax)
    candidates = []
    for i in range(arity):
        for b in lie:
            comps = [LieSeries.zero(gs, nmax) for _ in range(arity)]
            comps[i] = LieSeries(gs, nmax, dict(b.terms))
            candidates.append(TangentialDerivation(arity, nmax, comps))
    columns = [dict(rho_apply(u, total).terms) for u in candidates]
    pivot_rows, _, exprs = column_echelon(columns)
    out = []
    for j, piv in enumerate(pivot_rows):
        if piv != -1:
            continue
        u = TangentialDerivation.zero(arity, nmax)
        for idx, coeff in exprs[j].items():
            u = u + candidates[idx].scale(coeff)
        out.append(u)
    return out


def associator(g: TangentialAutomorphism) -> TangentialAutomorphism:
    """Associator in TAut_3 of an arity-2 automorphism:
    (g^{12,3})^-1 (g^{1,2})^-1 g^{2,3} g^{1,23}."""
    if g.arity != 2:
        raise ValueError("associator needs an arity-2 automorphism")
    g12_3 = pushforward("12,3", g)
    g1_2 = pushforward("1,2", g, arity=3)
    g2_3 = pushforward("2,3", g)
    g1_23 = pushforward("1,23", g)
    out = taut_multiply(g12_3.inverse(), g1_2.inverse())
    out = taut_multiply(out, g2_3)
    return taut_multiply(out, g1_23)
