"""The degree-by-degree solver, its gauge freedom, and the associator
equations (twist and pentagon)."""

import json
import random

import pytest

from liedescent.freelie import LieSeries, bch, lyndon_coordinates
from liedescent.generators import x_set
from liedescent.kv import (
    KVSolution,
    UnsolvableDegree,
    degree_candidates,
    kv_residual,
    kv_solve,
    pentagon_residual,
    twist_residual,
)
from liedescent.rat import Q
from liedescent.tangential import (
    TangentialAutomorphism,
    TangentialDerivation,
    associator,
    is_saut,
    pushforward,
    sder_basis,
    taut_multiply,
)


def random_saut(rng, nmax, arity=2, degrees=(1, 2, 3)):
    """exp of a random special derivation with small rational coefficients."""
    combo = TangentialDerivation.zero(arity, nmax)
    for d in degrees:
        for b in sder_basis(arity, d, nmax):
            combo = combo + b.scale(Q(rng.randint(-2, 2), rng.randint(1, 3)))
    return TangentialAutomorphism.exp(combo)


# -- the residual -------------------------------------------------------------------


def test_residual_of_identity_is_bch_tail():
    e = TangentialAutomorphism.identity(2, 4)
    r = kv_residual(e)
    gs = x_set(2)
    x1 = LieSeries.generator(gs, "x1", 4)
    x2 = LieSeries.generator(gs, "x2", 4)
    assert r == (x1 + x2) - bch(x1, x2, nmax=4)
    assert r.component(2) == x1.bracket(x2).scale(Q(-1, 2)).truncate(4)
    assert r.component(1).is_zero()


def test_residual_needs_arity_two():
    with pytest.raises(ValueError):
        kv_residual(TangentialAutomorphism.identity(3, 3))


# -- the solver ---------------------------------------------------------------------


def test_solver_rejects_tiny_truncation():
    with pytest.raises(ValueError):
        kv_solve(1, use_cache=False)


def test_degree_one_component():
    sol = kv_solve(3, use_cache=False)
    u1 = sol.log.degree_component(1)
    x2 = (x_set(2).index("x2"),)
    assert dict(u1.components[0].terms) == {x2: Q(1, 2)}
    assert u1.components[1].is_zero()


@pytest.mark.parametrize("n", [2, 3, 5])
def test_residual_vanishes(n):
    sol = kv_solve(n, use_cache=False)
    assert sol.N == n
    assert sol.g.nmax == n
    assert kv_residual(sol.g).is_zero()


def test_degree_stability():
    low = kv_solve(3, use_cache=False)
    high = kv_solve(5, use_cache=False)
    for k in (1, 2):
        assert high.log.degree_component(k).truncate(3) == low.log.degree_component(k)


def test_solver_free_dimensions_match_special_derivations():
    """The gauge freedom at each letter count is exactly the special
    subalgebra there."""
    sol = kv_solve(5, use_cache=False)
    frees = [json.loads(rec)["free"] for rec in sol.gauge]
    assert frees == [len(sder_basis(2, k, k + 1)) for k in (1, 2, 3, 4)]


def test_determinism():
    a = kv_solve(5, use_cache=False)
    b = kv_solve(5, use_cache=False)
    assert a.to_json() == b.to_json()


def test_serialization_roundtrip():
    sol = kv_solve(4, use_cache=False)
    back = KVSolution.from_json(sol.to_json())
    assert back.g == sol.g
    assert back.N == sol.N
    assert back.gauge == sol.gauge


def test_cache_roundtrip(tmp_path):
    d = str(tmp_path)
    first = kv_solve(4, cache_dir=d)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    second = kv_solve(4, cache_dir=d)
    assert second.to_json() == first.to_json()
    # corrupt cache falls back to recomputation
    files[0].write_text("{not json")
    third = kv_solve(4, cache_dir=d)
    assert third.to_json() == first.to_json()


def test_cache_disabled(tmp_path):
    kv_solve(3, use_cache=False, cache_dir=str(tmp_path))
    assert list(tmp_path.iterdir()) == []


def test_torsor_property():
    sol = kv_solve(4, use_cache=False)
    rng = random.Random(11)
    for _ in range(6):
        f = random_saut(rng, 4)
        assert kv_residual(taut_multiply(sol.g, f)).is_zero()


def test_gauge_shift_keeps_residual_and_changes_solution():
    base = kv_solve(5, use_cache=False)
    shift = sder_basis(2, 3, 5)[0]
    shifted = kv_solve(5, gauge={3: shift}, use_cache=False)
    assert kv_residual(shifted.g).is_zero()
    assert shifted.g != base.g
    assert shifted.log.degree_component(3) != base.log.degree_component(3)
    for k in (1, 2):
        assert shifted.log.degree_component(k) == base.log.degree_component(k)
    assert json.loads(shifted.gauge[2])["shift"] == "injected"


def test_gauge_shift_must_respect_degree():
    low = sder_basis(2, 1, 5)[0]
    with pytest.raises(ValueError):
        kv_solve(5, gauge={3: low}, use_cache=False)


def test_unsolvable_guard_detects_bad_lower_degrees():
    from liedescent.kv import _solve_degree

    gs = x_set(2)
    bad = TangentialDerivation(
        2, 4, [LieSeries(gs, 4, {(1,): Q(1)}), LieSeries.zero(gs, 4)]
    )  # wrong degree-1 piece: residual survives at letter count 2
    with pytest.raises(UnsolvableDegree):
        _solve_degree(2, bad)


def test_degree_candidates_are_a_basis():
    # Witt numbers over two letters: 2, 1, 2, 3
    assert [len(degree_candidates(k, k + 1)) for k in (1, 2, 3, 4)] == [4, 2, 4, 6]


# -- associator equations -----------------------------------------------------------


def test_twist_residual_identity_for_solution():
    sol = kv_solve(4, use_cache=False)
    assert twist_residual(sol.g).is_identity()


def test_twist_residual_identity_for_identity():
    assert twist_residual(TangentialAutomorphism.identity(2, 3)).is_identity()


def test_twist_residual_detects_perturbed_associator():
    sol = kv_solve(4, use_cache=False)
    phi = associator(sol.g)
    w = sder_basis(3, 2, 4)[0]
    bad = taut_multiply(phi, TangentialAutomorphism.exp(w))
    res = twist_residual(sol.g, phi=bad)
    assert not res.is_identity()
    assert res.log.min_degree() == 2


def test_pentagon_identity_for_identity():
    e = TangentialAutomorphism.identity(3, 4)
    assert pentagon_residual(e, 4).is_identity()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_pentagon_identity_for_solver_associator(n):
    sol = kv_solve(n, use_cache=False)
    phi = associator(sol.g)
    assert is_saut(phi)
    assert pentagon_residual(phi, n).is_identity()


def test_pentagon_detects_perturbation():
    sol = kv_solve(4, use_cache=False)
    phi = associator(sol.g)
    w = sder_basis(3, 2, 4)[0]
    bad = taut_multiply(phi, TangentialAutomorphism.exp(w))
    assert not pentagon_residual(bad, 4).is_identity()


def test_pentagon_needs_arity_three():
    with pytest.raises(ValueError):
        pentagon_residual(TangentialAutomorphism.identity(2, 3), 3)


def test_associator_log_starts_at_degree_two():
    sol = kv_solve(4, use_cache=False)
    phi = associator(sol.g)
    assert phi.log.min_degree() == 2


def test_associator_degree_two_in_pivot_gauge():
    """Computed value under this solver's gauge (recorded, not taken from
    anywhere): 1/24 times the cyclic pattern of two-letter brackets. Other
    gauges give different tuples; see the gauge-dependence test."""
    sol = kv_solve(4, use_cache=False)
    u2 = associator(sol.g).log.degree_component(2)
    gs = x_set(3)
    coords = [lyndon_coordinates(c.component(2)) for c in u2.components]
    x12 = (gs.index("x1"), gs.index("x2"))
    x13 = (gs.index("x1"), gs.index("x3"))
    x23 = (gs.index("x2"), gs.index("x3"))
    assert coords[0] == {x23: Q(1, 24)}
    assert coords[1] == {x13: Q(-1, 24)}  # = +1/24 [x3,x1]
    assert coords[2] == {x12: Q(1, 24)}


def test_associator_degree_two_is_gauge_dependent():
    """A gauge with both letters scaled, exp((x1, x2)), moves the degree-2
    part; single-generator rescalings happen to preserve it."""
    sol = kv_solve(4, use_cache=False)
    ref = associator(sol.g).log.degree_component(2)
    basis = sder_basis(2, 1, 4)
    shift = basis[0] + basis[2]
    g2 = taut_multiply(sol.g, TangentialAutomorphism.exp(shift))
    assert kv_residual(g2).is_zero()
    assert associator(g2).log.degree_component(2) != ref
