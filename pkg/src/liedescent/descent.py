"""The universal Chern-Simons form, its Wess-Zumino companion, and the
zig-zag construction of descent chains.

A chain omega3@0 + omega2@1 + omega1@2 + omega0@3 satisfies
D(chain) = lambda * <F,F>, which splits per level into

    d(omega3) = lambda <F,F>
    d(omega2) =  Delta(omega3)     (the 3-form enters D with a minus sign)
    d(omega1) = -Delta(omega2)
    d(omega0) =  Delta(omega1)
    Delta(omega0) = 0

The zig-zag solves these bottom-up from omega1: the two simplicial solves
are unique (their Delta-kernels vanish, asserted at runtime), the Poincare
homotopy gives the unique positive-letter primitive for omega0, and lambda
is read off by expressing d(omega3) over <F,F>.
"""

from dataclasses import dataclass
from math import factorial

from .forms import (
    CyclicForm,
    de_rham,
    graded_basis_upto,
    pair,
    poincare_primitive,
    reindex,
    span_coordinates,
)
from .freelie import LieSeries, ad_series
from .generators import descent_set, x_form_set
from .linalg import NO_SOLUTION, SparseMatrix, rank_kernel_image, solve_particular
from .rat import Q, rational
from .simplicial import (
    ABELIAN,
    NONABELIAN,
    BottShulmanElement,
    MixedChain,
    simplicial_delta,
)


class ConventionViolation(RuntimeError):
    """A cross-check pinned by the convention ledger failed."""


# -- the two classical forms --------------------------------------------------------


def connection(nmax=3):
    return LieSeries.generator(descent_set(0), "A", nmax)


def curvature(nmax=3) -> LieSeries:
    """F = dA + 1/2 [A,A]."""
    a = connection(nmax)
    da = LieSeries.generator(descent_set(0), "dA", nmax)
    return da + a.bracket(a).scale(Q(1, 2))


def chern_simons(nmax=3) -> CyclicForm:
    """<A,dA> + 1/3 <A,[A,A]>."""
    a = connection(nmax)
    da = LieSeries.generator(descent_set(0), "dA", nmax)
    return pair(a, da) + pair(a, a.bracket(a)).scale(Q(1, 3))


def curvature_pairing(nmax=3, variant=NONABELIAN) -> CyclicForm:
    """<F,F>, or <dA,dA> for the abelian complex."""
    da = LieSeries.generator(descent_set(0), "dA", nmax)
    if variant == ABELIAN:
        return pair(da, da)
    f = curvature(nmax)
    return pair(f, f)


def maurer_cartan(nmax) -> LieSeries:
    """The right-logarithmic-derivative series of exp(x1):
    (1 - e^{-z})/z applied to ad_{x1}, acting on dx1."""
    gs = descent_set(1)
    x1 = LieSeries.generator(gs, "x1", nmax)
    dx1 = LieSeries.generator(gs, "dx1", nmax)
    return ad_series(lambda k: Q((-1) ** k, factorial(k + 1)), x1, dx1)


def left_maurer_cartan(nmax) -> LieSeries:
    """The left companion (e^z - 1)/z of ad_{x1} on dx1; related to
    maurer_cartan by inverting the group element."""
    gs = descent_set(1)
    x1 = LieSeries.generator(gs, "x1", nmax)
    dx1 = LieSeries.generator(gs, "dx1", nmax)
    return ad_series(lambda k: Q(1, factorial(k + 1)), x1, dx1)


def cartan_eta(nmax) -> CyclicForm:
    """(1/6) <xi, [xi, xi]> with xi the Maurer-Cartan series: the pullback
    of the Cartan 3-form, d-closed."""
    xi = maurer_cartan(nmax)
    return pair(xi, xi.bracket(xi)).scale(Q(1, 6))


def wess_zumino(nmax) -> CyclicForm:
    """<A, kappa(ad_{x1}) dx1> - (1/6) h_P(<xi,[xi,xi]>)."""
    if nmax < 2:
        raise ValueError("need at least letter count 2")
    gs = descent_set(1)
    a = LieSeries.generator(gs, "A", nmax)
    return pair(a, left_maurer_cartan(nmax)) - poincare_primitive(cartan_eta(nmax))


def delta_cs(nmax) -> CyclicForm:
    """Delta(CS) in the non-abelian complex, cross-checked against the
    closed expression d<A, kappa(ad)dx1> - (1/6)<xi,[xi,xi]>.

    Under this coface convention the exterior-derivative term carries the
    left logarithmic derivative kappa, the Cartan term the right one;
    equivalently Delta(CS) = d(wess_zumino)."""
    cs = chern_simons(3).truncate(nmax) if nmax >= 3 else chern_simons(nmax)
    dcs = simplicial_delta(NONABELIAN, BottShulmanElement(0, cs)).form
    gs = descent_set(1)
    a = LieSeries.generator(gs, "A", nmax)
    closed_expr = de_rham(pair(a, left_maurer_cartan(nmax))) - cartan_eta(nmax)
    if dcs != closed_expr:
        raise ConventionViolation("Delta(CS) disagrees with its closed expression")
    return dcs


# -- descent chains -----------------------------------------------------------------


@dataclass(frozen=True)
class DescentChain:
    omega3: BottShulmanElement
    omega2: BottShulmanElement
    omega1: BottShulmanElement
    omega0: BottShulmanElement
    lam: object
    N: int
    variant: str

    def component(self, level):
        return {0: self.omega3, 1: self.omega2, 2: self.omega1, 3: self.omega0}[
            level
        ].form

    def mixed(self) -> MixedChain:
        return MixedChain(
            self.N,
            {0: self.omega3, 1: self.omega2, 2: self.omega1, 3: self.omega0},
        )


def _solve_delta_equation(variant, level, degree, rhs, nmax, label, assert_unique):
    """x in the degree-slice forms at the given level with Delta(x) = rhs.

    In the non-abelian rows the Delta-kernel vanishes at these spots, so
    the solution is unique and that is asserted; the abelian rows are not
    exact and the pivot rule picks the free-variables-zero solution."""
    genset = descent_set(level)
    basis = graded_basis_upto(genset, degree, nmax)
    m = SparseMatrix(0, len(basis))
    for j, b in enumerate(basis):
        image = simplicial_delta(variant, BottShulmanElement(level, b)).form
        m.set_column(j, dict(image.terms))
    sol = solve_particular(m, dict(rhs.terms))
    if sol is NO_SOLUTION:
        raise ConventionViolation(f"{label}: simplicial image misses the target")
    if assert_unique:
        rank, kernel, _ = rank_kernel_image(m)
        if kernel:
            raise ConventionViolation(
                f"{label}: solution not unique (kernel dimension {len(kernel)})"
            )
    out = CyclicForm.zero(genset, nmax)
    for j, coeff in sol.items():
        out = out + basis[j].scale(coeff)
    return out


def zigzag_solve(omega1: BottShulmanElement, nmax: int, variant=NONABELIAN) -> DescentChain:
    """Complete a level-2 one-form to a full descent chain.

    Requires d(Delta(omega1)) = 0; everything else is forced."""
    if omega1.level != 2:
        raise ValueError("the seed one-form lives at level 2")
    w1 = omega1.form.truncate(nmax)
    if w1.koszul_degree() not in (None, 1):
        raise ValueError("the seed must be a one-form")
    elem1 = BottShulmanElement(2, w1)

    delta_w1 = simplicial_delta(variant, elem1).form
    closure = de_rham(delta_w1)
    if not closure.is_zero():
        raise ValueError(f"d(Delta(seed)) nonzero: {closure!r}")

    # level 3: d(omega0) = Delta(omega1); the positive-letter primitive is unique
    if delta_w1.is_zero():
        omega0 = CyclicForm.zero(descent_set(3), nmax)
    else:
        omega0 = poincare_primitive(delta_w1)
    bottom = simplicial_delta(variant, BottShulmanElement(3, omega0)).form
    if not bottom.is_zero():
        raise ConventionViolation("Delta(omega0) nonzero")

    # level 1: d(omega1) = -Delta(omega2)
    unique = variant == NONABELIAN
    rhs2 = -de_rham(w1)
    omega2 = _solve_delta_equation(variant, 1, 2, rhs2, nmax, "two-form solve", unique)

    # level 0: d(omega2) = Delta(omega3)
    rhs3 = de_rham(omega2)
    omega3 = _solve_delta_equation(variant, 0, 3, rhs3, nmax, "three-form solve", unique)

    # the top pairing: d(omega3) = lambda <F,F>
    p = curvature_pairing(nmax, variant)
    coeffs = span_coordinates(de_rham(omega3), [p])
    if coeffs is None:
        raise ConventionViolation("d(omega3) is not a multiple of the curvature pairing")
    lam = coeffs.get(0, Q(0))

    return DescentChain(
        omega3=BottShulmanElement(0, omega3),
        omega2=BottShulmanElement(1, omega2),
        omega1=elem1,
        omega0=BottShulmanElement(3, omega0),
        lam=lam,
        N=nmax,
        variant=variant,
    )


def connection_x_pairing(nmax) -> CyclicForm:
    """<A, x1> at level 1, the gauge term of the affine family."""
    gs = descent_set(1)
    a = LieSeries.generator(gs, "A", nmax)
    x1 = LieSeries.generator(gs, "x1", nmax)
    return pair(a, x1)


def omega_chain(solution, s, nmax: int) -> DescentChain:
    """The chain of a solver output: seed omega1 = -C(g) - s*Delta<A,x1>,
    then the zig-zag; cross-checked against the closed forms of the other
    components."""
    from .kv import kv_residual
    from .tangential import cocycle_C

    s = rational(s)
    g = solution.g.truncate(nmax) if solution.g.nmax > nmax else solution.g
    if g.nmax < nmax:
        raise ValueError("solution truncated below the requested letter count")
    if not kv_residual(g).is_zero():
        raise ValueError("automorphism does not solve the defining equation")

    cg = reindex(cocycle_C(g), descent_set(2))
    gauge_term = simplicial_delta(
        NONABELIAN, BottShulmanElement(1, connection_x_pairing(nmax))
    ).form
    w1 = -cg - gauge_term.scale(s)
    chain = zigzag_solve(BottShulmanElement(2, w1), nmax, NONABELIAN)

    expected2 = wess_zumino(nmax).scale(Q(1, 2)) + de_rham(
        connection_x_pairing(nmax)
    ).scale(s)
    if chain.omega2.form != expected2:
        raise ConventionViolation("two-form differs from half the Wess-Zumino form")
    expected3 = chern_simons(3).truncate(nmax).scale(Q(1, 2))
    if chain.omega3.form != expected3:
        raise ConventionViolation("three-form differs from half the Chern-Simons form")
    if chain.lam != Q(1, 2):
        raise ConventionViolation(f"top coefficient {chain.lam} instead of 1/2")
    return chain


# -- the bottom cohomology class ----------------------------------------------------

_PHI_CACHE = {}


def phi_representative(nmax: int) -> BottShulmanElement:
    """The Delta-closed lift of <x1,[x2,x3]> at level 3, built letter count
    by letter count; the letter-k correction solves an abelian-shadow
    equation against the lower obstruction."""
    if nmax < 3:
        raise ValueError("the generator needs letter count 3")
    cached = _PHI_CACHE.get(nmax)
    if cached is not None:
        return cached
    gs = descent_set(3)
    x1 = LieSeries.generator(gs, "x1", nmax)
    x2 = LieSeries.generator(gs, "x2", nmax)
    x3 = LieSeries.generator(gs, "x3", nmax)
    rep = pair(x1, x2.bracket(x3))
    for k in range(4, nmax + 1):
        obstruction = (
            simplicial_delta(NONABELIAN, BottShulmanElement(3, rep))
            .form.letter_component(k)
        )
        if obstruction.is_zero():
            continue
        # candidates of letter count exactly k: the letter-k part of their
        # image is the abelian shadow, so the system is triangular
        from .forms import graded_basis

        basis = [b.truncate(nmax) for b in graded_basis(gs, 0, k)]
        m = SparseMatrix(0, len(basis))
        for j, b in enumerate(basis):
            img = simplicial_delta(NONABELIAN, BottShulmanElement(3, b)).form
            m.set_column(j, dict(img.letter_component(k).terms))
        sol = solve_particular(m, dict((-obstruction).terms))
        if sol is NO_SOLUTION:
            raise ConventionViolation(
                f"generator lift obstructed at letter count {k}"
            )
        for j, coeff in sol.items():
            rep = rep + basis[j].scale(coeff)
    total = simplicial_delta(NONABELIAN, BottShulmanElement(3, rep)).form
    if not total.is_zero():
        raise ConventionViolation("lifted generator is not closed")
    out = BottShulmanElement(3, rep)
    _PHI_CACHE[nmax] = out
    return out


def omega0_class(omega0: BottShulmanElement):
    """Coefficient of the lifted generator in a Delta-closed bottom form:
    solve the letter-count-3 piece over {generator} + image(Delta)."""
    if omega0.level != 3:
        raise ValueError("bottom forms live at level 3")
    form = omega0.form
    if not simplicial_delta(NONABELIAN, omega0).form.is_zero():
        raise ValueError("bottom form is not closed under the simplicial differential")
    nmax = form.nmax
    phi3 = phi_representative(3).form.truncate(nmax)
    target = form.letter_component(3)
    columns = [dict(phi3.terms)]
    lower = descent_set(2)
    for b in graded_basis_upto(lower, 0, 3):
        img = simplicial_delta(NONABELIAN, BottShulmanElement(2, b.truncate(3))).form
        col = dict(img.letter_component(3).terms)
        columns.append(col)
    from .linalg import vector_in_span

    coeffs = vector_in_span(columns, dict(target.terms))
    if coeffs is NO_SOLUTION:
        raise ConventionViolation(
            "letter-count-3 piece is not generator + exact, against the rank facts"
        )
    return coeffs.get(0, Q(0))
