"""Degree-by-degree solutions of g(x1 + x2) = bch(x1, x2) in the tangential
automorphism group, and the pentagon/twist consistency checks for the induced
associator.

At letter count k the unknown degree-k piece u_k of log g enters the residual
linearly through rho(u_k)(x1 + x2), all lower pieces being fixed, so the
construction is a chain of exact sparse solves over the Lyndon basis. Free
variables are zeroed by the pivot rule; any other gauge differs by a special
derivation, which callers can inject explicitly.
"""

import json
import os
from dataclasses import dataclass

from .conventions import active
from .forms import CyclicForm, de_rham, reindex
from .freelie import LieSeries, bch, lyndon_bracket_terms, lyndon_words
from .generators import descent_set, x_form_set, x_set
from .linalg import NO_SOLUTION, SparseMatrix, rank_kernel_image, solve_particular
from .rat import Q, rational
from .tangential import (
    TangentialAutomorphism,
    TangentialDerivation,
    associator,
    cocycle_C,
    pushforward,
    rho_apply,
    taut_apply,
    taut_inverse,
    taut_multiply,
)

CACHE_ENV = "LIEDESCENT_CACHE_DIR"


class UnsolvableDegree(RuntimeError):
    """The linear system at some letter count has no solution. This cannot
    happen if the solution set is nonempty; treat as fatal."""


@dataclass(frozen=True)
class KVSolution:
    g: TangentialAutomorphism
    N: int
    gauge: tuple

    @property
    def log(self):
        return self.g.log

    def to_json(self):
        comps = []
        for series in self.g.log.components:
            comps.append(
                sorted(
                    (list(map(int, w)), str(c)) for w, c in series.terms.items()
                )
            )
        payload = {
            "N": self.N,
            "ledger": active().ledger_hash(),
            "gauge": list(self.gauge),
            "log": comps,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text):
        payload = json.loads(text)
        if payload["ledger"] != active().ledger_hash():
            raise ValueError("cache was produced under a different convention ledger")
        n = payload["N"]
        gs = x_set(2)
        comps = [
            LieSeries(gs, n, {tuple(w): rational(c) for w, c in entries})
            for entries in payload["log"]
        ]
        g = TangentialAutomorphism(TangentialDerivation(2, n, comps))
        gauge = tuple(tuple(item) if isinstance(item, list) else item for item in payload["gauge"])
        return cls(g=g, N=n, gauge=gauge)


def kv_residual(g: TangentialAutomorphism) -> LieSeries:
    """How far g is from sending x1 + x2 to the BCH product."""
    if g.arity != 2:
        raise ValueError("residual is defined for arity-2 automorphisms")
    gs = x_set(2)
    nmax = g.nmax
    x1 = LieSeries.generator(gs, "x1", nmax)
    x2 = LieSeries.generator(gs, "x2", nmax)
    return taut_apply(g, x1 + x2) - bch(x1, x2, nmax=nmax)


def degree_candidates(k: int, nmax: int):
    """Derivations with one Lyndon component of letter count k: a basis of
    the degree-k slice, labeled (slot, word)."""
    gs = x_set(2)
    words = [w for w in lyndon_words(2, k) if len(w) == k]
    out = []
    for slot in (0, 1):
        for w in words:
            comps = [LieSeries.zero(gs, nmax) for _ in range(2)]
            comps[slot] = LieSeries(gs, nmax, lyndon_bracket_terms(gs, w))
            out.append(((slot, w), TangentialDerivation(2, nmax, comps)))
    return out


def _solve_degree(k, log_so_far, shift=None):
    """Solve for the degree-k piece; returns (u_k, record)."""
    gs = x_set(2)
    nmax = k + 1
    x1 = LieSeries.generator(gs, "x1", nmax)
    x2 = LieSeries.generator(gs, "x2", nmax)
    total = x1 + x2
    g = TangentialAutomorphism.exp(log_so_far.truncate(nmax))
    residual = taut_apply(g, total) - bch(x1, x2, nmax=nmax)
    low = residual.truncate(k)
    if not low.is_zero():
        raise UnsolvableDegree(f"residual not zero below letter count {k + 1}")
    target = residual.component(k + 1)

    labeled = degree_candidates(k, nmax)
    m = SparseMatrix(0, len(labeled))
    for j, (_, cand) in enumerate(labeled):
        m.set_column(j, dict(rho_apply(cand, total).terms))
    # the action contributes -rho(u_k)(total) at the top letter count, so
    # rho(u_k)(total) must equal the residual there
    sol = solve_particular(m, dict(target.terms))
    if sol is NO_SOLUTION:
        raise UnsolvableDegree(
            f"no degree-{k} correction cancels the letter-count-{k + 1} residual"
        )
    u = TangentialDerivation.zero(2, nmax)
    for j, coeff in sorted(sol.items()):
        u = u + labeled[j][1].scale(coeff)
    rank, kernel, _ = rank_kernel_image(m)
    record = {
        "degree": k,
        "free": len(kernel),
        "shift": "none" if shift is None else "injected",
    }
    if shift is not None:
        if shift.min_degree() < k:
            raise ValueError("gauge shift must not touch lower degrees")
        u = u + shift.truncate(nmax)
    return u, record


def kv_solve(N: int, gauge=None, use_cache=True, cache_dir=None) -> KVSolution:
    """Build a solution truncated at letter count N.

    gauge: optional {degree: TangentialDerivation} of special-derivation
    shifts added to the solved piece at that degree; any two solutions differ
    degreewise by such shifts. Only ungauged solves are cached.
    """
    if N < 2:
        raise ValueError("truncation must be at least 2")
    gauge = dict(gauge or {})
    cache_path = None
    if use_cache and not gauge:
        cache_path = _cache_path(N, cache_dir)
        if cache_path and os.path.exists(cache_path):
            with open(cache_path, "r", encoding="utf-8") as fh:
                try:
                    return KVSolution.from_json(fh.read())
                except (ValueError, KeyError):
                    pass  # stale or foreign cache: recompute

    log = TangentialDerivation.zero(2, N)
    records = []
    for k in range(1, N):
        u, record = _solve_degree(k, log, gauge.get(k))
        log = log + u.truncate(N)
        records.append(json.dumps(record, sort_keys=True))
    solution = KVSolution(
        g=TangentialAutomorphism(log), N=N, gauge=tuple(records)
    )
    check = kv_residual(solution.g)
    if not check.is_zero():
        raise UnsolvableDegree("postcondition failed: residual nonzero after solve")
    if cache_path:
        tmp = cache_path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(solution.to_json())
        os.replace(tmp, cache_path)
    return solution


def _cache_path(N, cache_dir=None):
    base = cache_dir or os.environ.get(CACHE_ENV)
    if base is None:
        return None
    os.makedirs(base, exist_ok=True)
    tag = active().ledger_hash()
    return os.path.join(base, f"kv-{N}-{tag}.json")


# -- associator equations ----------------------------------------------------------


def twist_residual(g: TangentialAutomorphism, phi=None) -> TangentialAutomorphism:
    """(g^{1,2} g^{12,3} phi)^{-1} (g^{2,3} g^{1,23}); the identity whenever
    phi is the associator of g. phi is overridable as a negative control."""
    if g.arity != 2:
        raise ValueError("twist residual needs an arity-2 automorphism")
    if phi is None:
        phi = associator(g)
    lhs = taut_multiply(
        taut_multiply(pushforward("1,2", g, arity=3), pushforward("12,3", g)), phi
    )
    rhs = taut_multiply(pushforward("2,3", g), pushforward("1,23", g))
    return taut_multiply(taut_inverse(lhs), rhs)


def pentagon_residual(phi: TangentialAutomorphism, N: int) -> TangentialAutomorphism:
    """(phi^{1,2,3} phi^{1,23,4} phi^{2,3,4})^{-1} (phi^{12,3,4} phi^{1,2,34})
    in arity 4, truncated at N."""
    if phi.arity != 3:
        raise ValueError("pentagon residual needs an arity-3 automorphism")
    phi = phi.truncate(N)
    lhs = taut_multiply(pushforward("12,3,4", phi), pushforward("1,2,34", phi))
    rhs = taut_multiply(
        taut_multiply(pushforward("1,2,3", phi, arity=4), pushforward("1,23,4", phi)),
        pushforward("2,3,4", phi),
    )
    if active().pentagon_variant == "reversed":
        return taut_multiply(taut_inverse(lhs), rhs)
    return taut_multiply(taut_inverse(rhs), lhs)


def final_remark_identity(solution: KVSolution, N: int):
    """Both sides of the boundary identity tying the pentagon defect of the
    group cocycle to the double differential of the bottom descent form.

    Returns (lhs, rhs) as forms over four simplex letters; the caller
    asserts equality (both vanish when the bottom form is closed under the
    simplicial differential)."""
    g = solution.g.truncate(N)
    if not kv_residual(g).is_zero():
        raise ValueError("automorphism does not solve the defining equation")
    phi = associator(g)
    lhs_big = taut_multiply(pushforward("12,3,4", phi), pushforward("1,2,34", phi))
    rhs_big = taut_multiply(
        taut_multiply(pushforward("1,2,3", phi, arity=4), pushforward("1,23,4", phi)),
        pushforward("2,3,4", phi),
    )
    diff = cocycle_C(lhs_big) - cocycle_C(rhs_big)
    h = taut_multiply(
        taut_multiply(pushforward("1,2", g, arity=4), pushforward("12,3", g, arity=4)),
        pushforward("123,4", g),
    )
    lhs = taut_apply(h, diff)

    from .descent import omega_chain
    from .simplicial import NONABELIAN, BottShulmanElement, simplicial_delta

    chain = omega_chain(solution, Q(0), N)
    omega0 = chain.component(3)
    level3 = BottShulmanElement(3, reindex(de_rham(omega0), descent_set(3)))
    rhs_elt = simplicial_delta(NONABELIAN, level3)
    rhs = reindex(rhs_elt.form, x_form_set(4))
    return lhs, rhs
