"""The convention ledger: stable hashing, scoped overrides, and the fact
that each dial actually changes an identity it claims to control."""

import pytest

from liedescent.conventions import DEFAULT, Conventions, active, parse_overrides, using
from liedescent.freelie import LieSeries
from liedescent.generators import x_set
from liedescent.kv import kv_residual, kv_solve
from liedescent.rat import Q
from liedescent.simplicial import NONABELIAN, MixedChain, total_differential
from liedescent.descent import connection_x_pairing
from liedescent.tangential import (
    TangentialAutomorphism,
    TangentialDerivation,
    taut_apply,
    taut_multiply,
)


def test_ledger_lists_every_dial_sorted():
    text = DEFAULT.ledger()
    lines = text.splitlines()
    assert lines == sorted(lines)
    assert "taut_exp_sign=-1" in lines
    assert "taut_product_order=reversed" in lines


def test_ledger_hash_is_short_and_stable():
    h = DEFAULT.ledger_hash()
    assert len(h) == 12
    assert h == Conventions().ledger_hash()
    assert h != DEFAULT.replace(taut_exp_sign=1).ledger_hash()


def test_parse_overrides():
    conv = parse_overrides(["taut_exp_sign=1", "pentagon_variant=reversed"])
    assert conv.taut_exp_sign == 1
    assert conv.pentagon_variant == "reversed"
    assert parse_overrides([]) == DEFAULT
    with pytest.raises(ValueError):
        parse_overrides(["nonsense=1"])
    with pytest.raises(ValueError):
        parse_overrides(["taut_exp_sign"])
    with pytest.raises(ValueError):
        parse_overrides(["taut_exp_sign=7"])


def test_using_scopes_and_restores():
    assert active() is DEFAULT
    with using(DEFAULT.replace(taut_exp_sign=1)) as conv:
        assert active() is conv
        assert active().taut_exp_sign == 1
    assert active() is DEFAULT


def test_exp_sign_dial_breaks_the_solved_residual():
    sol = kv_solve(3, use_cache=False)
    assert kv_residual(sol.g).is_zero()
    with using(DEFAULT.replace(taut_exp_sign=1)):
        assert not kv_residual(sol.g).is_zero()


def test_product_order_dial_flips_composition():
    gs = x_set(2)
    x1 = LieSeries.generator(gs, "x1", 4)
    x2 = LieSeries.generator(gs, "x2", 4)
    g = TangentialAutomorphism.exp(TangentialDerivation(2, 4, (x2, LieSeries.zero(gs, 4))))
    h = TangentialAutomorphism.exp(
        TangentialDerivation(2, 4, (LieSeries.zero(gs, 4), x1.bracket(x2)))
    )
    target = x1
    forward = taut_apply(g, taut_apply(h, target))
    backward = taut_apply(h, taut_apply(g, target))
    assert forward != backward  # otherwise the dial is invisible here
    assert taut_apply(taut_multiply(g, h), target) == forward
    with using(DEFAULT.replace(taut_product_order="direct")):
        assert taut_apply(taut_multiply(g, h), target) == backward


def test_de_rham_sign_dial_breaks_d_squared():
    nu = MixedChain.single(4, 1, connection_x_pairing(4))
    once = total_differential(nu, NONABELIAN)
    assert total_differential(once, NONABELIAN).is_zero()
    with using(DEFAULT.replace(de_rham_sign_power=0)):
        flat = total_differential(nu, NONABELIAN)
        assert not total_differential(flat, NONABELIAN).is_zero()


def test_pentagon_dial_inverts_the_residual():
    from liedescent.kv import pentagon_residual

    gs = x_set(3)
    x1 = LieSeries.generator(gs, "x1", 4)
    x2 = LieSeries.generator(gs, "x2", 4)
    zero = LieSeries.zero(gs, 4)
    phi = TangentialAutomorphism.exp(
        TangentialDerivation(3, 4, (x1.bracket(x2), zero, zero))
    )
    std = pentagon_residual(phi, 4)
    assert not std.log.is_zero()
    with using(DEFAULT.replace(pentagon_variant="reversed")):
        rev = pentagon_residual(phi, 4)
    assert rev.log == std.inverse().log


def test_cache_tag_tracks_the_active_ledger(tmp_path):
    import os

    sol = kv_solve(3, use_cache=True, cache_dir=str(tmp_path))
    files = sorted(os.listdir(tmp_path))
    assert files == [f"kv-3-{DEFAULT.ledger_hash()}.json"]
    assert DEFAULT.ledger_hash() in sol.to_json()
