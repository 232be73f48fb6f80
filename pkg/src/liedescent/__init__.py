"""Exact symbolic engine for graded free Lie algebras, cyclic forms, and
the simplicial descent calculus built on them."""

from .rat import Q, rational, BACKEND
from ._kernels import IMPL_NAME as KERNEL_IMPL
from .generators import (
    Generator,
    GeneratorSet,
    free_set,
    x_set,
    x_form_set,
    descent_set,
)
from .freelie import (
    LieSeries,
    NotLieElement,
    bch,
    ad_series,
    envelope_exp,
    envelope_log,
    envelope_inverse,
    ad_power_apply,
    left_normed_bracket,
    dynkin_certify,
    lyndon_words,
    lyndon_basis,
    is_lyndon,
    standard_factorization,
    lyndon_bracket,
    lyndon_coordinates,
    from_lyndon_coordinates,
    universal_bch_table,
)
from .forms import (
    CyclicForm,
    NotClosedError,
    pair,
    from_series,
    de_rham,
    contract,
    euler,
    series_de_rham,
    poincare_primitive,
    necklace_words,
    necklace_basis,
    lie_component_basis,
    graded_basis,
    graded_basis_upto,
    span_coordinates,
    in_span,
)
from .conventions import (
    Conventions,
    DEFAULT as DEFAULT_CONVENTIONS,
    active as active_conventions,
    activate as activate_conventions,
    using as using_conventions,
    parse_overrides as parse_convention_overrides,
)
from .linalg import SparseMatrix, NoSolution, NO_SOLUTION, rank_kernel_image, solve_particular
from .simplicial import (
    ABELIAN,
    NONABELIAN,
    BottShulmanElement,
    MixedChain,
    coface,
    coface_series,
    simplicial_delta,
    total_differential,
    row_cohomology,
)
from .tangential import (
    TangentialDerivation,
    TangentialAutomorphism,
    tder_bracket,
    rho_apply,
    taut_multiply,
    taut_inverse,
    taut_apply,
    gamma,
    gamma_inverse,
    is_sder,
    is_saut,
    sder_basis,
    cocycle_c,
    cocycle_C,
    parse_blocks,
    pushforward,
    pushforward_form,
    associator,
)
from .forms import reindex
from .kv import (
    KVSolution,
    UnsolvableDegree,
    kv_residual,
    kv_solve,
    twist_residual,
    pentagon_residual,
    final_remark_identity,
)
from .textio import (
    ParseError,
    parse_series,
    parse_form,
    series_to_text,
    form_to_text,
    word_key,
)
from .descent import (
    ConventionViolation,
    DescentChain,
    chern_simons,
    connection,
    curvature,
    curvature_pairing,
    maurer_cartan,
    left_maurer_cartan,
    cartan_eta,
    wess_zumino,
    delta_cs,
    zigzag_solve,
    connection_x_pairing,
    omega_chain,
    phi_representative,
    omega0_class,
)
from .acceptance import CriterionResult, run_all

__version__ = "0.1.0"
