"""Inequality-chain checks, one per statement in the chain catalog.

Each check builds every operator appearing in its chain, tests each "<="
with ``loewner_leq`` at the configured tolerance, and returns a
ChainReport.  Links whose slack sits inside the tolerance band are marked
tight rather than failed: the constants are designed to be attained.
Every multi-link chain also carries an end-to-end audit link comparing
the first and last operators directly, which catches tolerance
accumulation across the middle terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import (
    beta_generic,
    beta_power_closed,
    kantorovich_C,
    kantorovich_C2,
    kantorovich_K,
    kantorovich_K2,
    power_fun,
)
from .errors import DegenerateExponentError, HypothesisError, ParameterError
from .generators import (
    CERT_CHAOTIC,
    CERT_DOMINATED,
    CERT_RELATIVE,
    WINDOW_ON_A,
    WINDOW_ON_B,
    CertifiedPair,
)
from .hermitian import (
    DEFAULT_REL_TOL,
    Array,
    apply_scalar_function,
    hermitize,
    identity,
    loewner_leq,
    matrix_power,
    superlog_bound,
)
from .posmaps import (
    PositiveLinearMap,
    WeightedFamily,
    apply_map,
    f_connection,
    sharp,
    sqrt_invsqrt,
    tsallis_entropy,
)

MIN_EXPONENT_SUM = 1e-3

# Catalog of the verified chains.  G_f denotes the geometric endpoint
# interpolant G_f(t) = f(m)^((M-t)/(M-m)) * f(M)^((t-m)/(M-m)) over the
# window [m, M]; K, K2, C, C2 are the constants module's closed forms and
# beta the gap constant max{chord_f(t) - alpha*g(t)}.
CHAIN_CATALOG = {
    "theorem_1_1": "A <= B, m <= A <= M, p > 1:  A^p <= K(m,M,p) B^p <= (M/m)^(p-1) B^p",
    "theorem_2_1": "A <= B, m <= B <= M, f log-convex:  f(B) <= G_f(B) <= alpha g(A) + beta",
    "corollary_2_2": "A <= B, m <= B <= M, p,q <= 0, alpha > 0:  B^p <= G_{t^p}(B) <= alpha A^q + beta",
    "corollary_2_3": "A <= B, m <= B <= M, p <= 0, -1 <= q < 0:  B^p <= G_{t^p}(B) <= K2(m,M,p,q) A^q",
    "corollary_2_4": "A <= B, m <= B <= M, p,q <= 0:  B^p <= G_{t^p}(B) <= C2(m,M,p,q) I + A^q",
    "lemma_3_1": "log A <= log B, p,r <= 0:  B^r <= (B^(r/2) A^p B^(r/2))^(r/(p+r))",
    "corollary_3_2": "log A <= log B, m <= B <= M, p <= 0, -1 <= r <= 0:  "
                     "B^p <= B^(-r) G_{t^(p+r)}(B) <= K(m,M,p+r) A^p",
    "corollary_3_3": "log A <= log B, m <= B <= M, p <= 0, -1 <= r <= 0:  "
                     "B^p <= B^(-r) G_{t^(p+r)}(B) <= C(m,M,p+r) B^(-r) + A^p",
    "theorem_4_1": "Sp(A_i) in [m,M], sum w_i = 1, f log-convex:  "
                   "sum w_i Phi_i(f(A_i)) <= sum w_i Phi_i(G_f(A_i)) <= alpha g(sum w_i Phi_i(A_i)) + beta",
    "theorem_4_2": "m A <= B <= M A, f log-convex:  "
                   "Phi(A sigma_f B) <= Phi(A^(1/2) G_f(T) A^(1/2)) <= beta Phi(A) + alpha Phi(A) sigma_f Phi(B)",
    "corollary_4_3": "m A <= B <= M A, p <= 0, alpha > 0:  "
                     "Phi(A #_p B) <= Phi(A^(1/2) G_{t^p}(T) A^(1/2)) <= beta Phi(A) + alpha Phi(A) #_p Phi(B)",
    "corollary_4_4": "m A <= B <= M A, p <= 0:  ratio bound K(m,M,p) Phi(A) #_p Phi(B) or "
                     "difference bound C(m,M,p) Phi(A) + Phi(A) #_p Phi(B) above Phi(A #_p B)",
    "theorem_4_5": "m A <= B <= M A, -1 <= p < 0:  Phi(T_p(A|B)) bounded below through the "
                   "interpolant and above by T_p(Phi(A)|Phi(B))",
}


@dataclass(frozen=True)
class Link:
    """One tested "<=" of a chain with its smallest difference eigenvalue."""

    label: str
    min_slack: float
    tolerance: float
    holds: bool
    tight: bool

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "min_slack": self.min_slack,
            "tolerance": self.tolerance,
            "holds": self.holds,
            "tight": self.tight,
        }


@dataclass
class ChainReport:
    """Per-instance record of every link in one theorem chain."""

    theorem_id: str
    dim: int
    seed: int
    params: dict
    links: list
    overall: bool
    notes: list = field(default_factory=list)

    def link(self, label_fragment: str) -> Link:
        for lk in self.links:
            if label_fragment in lk.label:
                return lk
        raise KeyError(f"no link matching {label_fragment!r} in {self.theorem_id}")

    def to_json_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "dim": self.dim,
            "seed": self.seed,
            "params": self.params,
            "links": [lk.to_json_dict() for lk in self.links],
            "overall": self.overall,
            "notes": self.notes,
        }


def _link(label: str, lhs: Array, rhs: Array, rel_tol: float) -> Link:
    verdict = loewner_leq(lhs, rhs, rel_tol)
    return Link(
        label=label,
        min_slack=verdict.min_slack,
        tolerance=verdict.tolerance_used,
        holds=verdict.holds,
        tight=abs(verdict.min_slack) < verdict.tolerance_used,
    )


def _finish(theorem_id: str, dim: int, seed: int, params: dict, links: list,
            notes: list | None = None) -> ChainReport:
    return ChainReport(
        theorem_id=theorem_id,
        dim=dim,
        seed=seed,
        params=params,
        links=links,
        overall=all(lk.holds for lk in links),
        notes=notes or [],
    )


def _require_certificate(pair: CertifiedPair, certificate: str, check: str) -> None:
    if pair.certificate != certificate:
        raise HypothesisError(
            f"{check} needs a {certificate!r} pair, got certificate {pair.certificate!r}")


def check_theorem_1_1(pair: CertifiedPair, p: float,
                      rel_tol: float = DEFAULT_REL_TOL) -> ChainReport:
    """A^p <= K(m,M,p) B^p <= (M/m)^(p-1) B^p for A <= B, m <= A <= M, p > 1."""
    _require_certificate(pair, CERT_DOMINATED, "check_theorem_1_1")
    if pair.window_side != WINDOW_ON_A:
        raise HypothesisError("check_theorem_1_1 needs the window certified on A")
    p = float(p)
    if p < 1.0:
        raise ParameterError(f"order-preserving bound needs p >= 1, got p={p}")
    w = pair.window
    k = kantorovich_K(w, p)  # refuses the degenerate p = 1
    a_pow = matrix_power(pair.A, p)
    b_pow = matrix_power(pair.B, p)
    cap = (w.M / w.m) ** (p - 1.0)
    links = [
        _link("A^p <= K B^p", a_pow, k * b_pow, rel_tol),
        _link("K B^p <= (M/m)^(p-1) B^p", k * b_pow, cap * b_pow, rel_tol),
        _link("A^p <= (M/m)^(p-1) B^p [audit]", a_pow, cap * b_pow, rel_tol),
    ]
    return _finish("theorem_1_1", pair.dim, pair.seed,
                   {"m": w.m, "M": w.M, "p": p, "K": k}, links)


def check_theorem_2_1(pair: CertifiedPair, f, g, alpha: float, case: str = "i",
                      rel_tol: float = DEFAULT_REL_TOL) -> ChainReport:
    """f(B) <= G_f(B) <= alpha g(A) + beta for a log-convex f on the window.

    Case "i" expects g decreasing convex with alpha > 0, case "ii" expects
    g increasing concave with alpha < 0; only the sign of alpha can be
    validated for black-box g.
    """
    _require_certificate(pair, CERT_DOMINATED, "check_theorem_2_1")
    if pair.window_side != WINDOW_ON_B:
        raise HypothesisError("check_theorem_2_1 needs the window certified on B")
    alpha = float(alpha)
    if case == "i":
        if alpha <= 0.0:
            raise HypothesisError(f"case (i) needs alpha > 0, got alpha={alpha}")
    elif case == "ii":
        if alpha >= 0.0:
            raise HypothesisError(f"case (ii) needs alpha < 0, got alpha={alpha}")
    else:
        raise ValueError(f"case must be 'i' or 'ii', got {case!r}")
    w = pair.window
    beta = beta_generic(f, g, alpha, w).value
    f_b = apply_scalar_function(pair.B, f)
    mid = superlog_bound(pair.B, w, float(f(w.m)), float(f(w.M)))
    rhs = alpha * apply_scalar_function(pair.A, g) + beta * identity(pair.dim)
    links = [
        _link("f(B) <= G_f(B)", f_b, mid, rel_tol),
        _link("G_f(B) <= alpha g(A) + beta", mid, rhs, rel_tol),
        _link("f(B) <= alpha g(A) + beta [audit]", f_b, rhs, rel_tol),
    ]
    return _finish("theorem_2_1", pair.dim, pair.seed,
                   {"m": w.m, "M": w.M, "alpha": alpha, "beta": beta, "case": case}, links)


def check_corollary_2_2(pair: CertifiedPair, p: float, q: float, alpha: float,
                        rel_tol: float = DEFAULT_REL_TOL) -> ChainReport:
    """B^p <= G_{t^p}(B) <= alpha A^q + beta for p, q <= 0 and alpha > 0."""
    _require_certificate(pair, CERT_DOMINATED, "check_corollary_2_2")
    p, q, alpha = float(p), float(q), float(alpha)
    if p > 0.0 or q > 0.0:
        raise ParameterError(f"needs p <= 0 and q <= 0, got p={p}, q={q}")
    if alpha <= 0.0:
        raise ParameterError(f"needs alpha > 0, got alpha={alpha}")
    w = pair.window
    try:
        beta = beta_power_closed(w, p, q, alpha)
    except DegenerateExponentError:
        beta = beta_generic(power_fun(p), power_fun(q), alpha, w).value
    b_pow = matrix_power(pair.B, p)
    mid = superlog_bound(pair.B, w, w.m ** p, w.M ** p)
    rhs = alpha * matrix_power(pair.A, q) + beta * identity(pair.dim)
    links = [
        _link("B^p <= G_{t^p}(B)", b_pow, mid, rel_tol),
        _link("G_{t^p}(B) <= alpha A^q + beta", mid, rhs, rel_tol),
        _link("B^p <= alpha A^q + beta [audit]", b_pow, rhs, rel_tol),
    ]
    return _finish("corollary_2_2", pair.dim, pair.seed,
                   {"m": w.m, "M": w.M, "p": p, "q": q, "alpha": alpha, "beta": beta}, links)


def check_corollary_2_3(pair: CertifiedPair, p: float, q: float,
                        rel_tol: float = DEFAULT_REL_TOL) -> ChainReport:
    """B^p <= G_{t^p}(B) <= K2(m,M,p,q) A^q; regime p <= 0, -1 <= q < 0.

    Values of q outside [-1, 0) are still executed (fuzz mode) and flagged
    in the report notes instead of being rejected.
    """
    _require_certificate(pair, CERT_DOMINATED, "check_corollary_2_3")
    p, q = float(p), float(q)
    if p > 0.0:
        raise ParameterError(f"needs p <= 0, got p={p}")
    w = pair.window
    k2 = kantorovich_K2(w, p, q)
    notes = []
    if q < -1.0 - 1e-12 or q > 0.0:
        notes.append(f"q={q} outside the [-1, 0] regime; result is a fuzz observation")
    b_pow = matrix_power(pair.B, p)
    mid = superlog_bound(pair.B, w, w.m ** p, w.M ** p)
    rhs = k2 * matrix_power(pair.A, q)
    links = [
        _link("B^p <= G_{t^p}(B)", b_pow, mid, rel_tol),
        _link("G_{t^p}(B) <= K2 A^q", mid, rhs, rel_tol),
        _link("B^p <= K2 A^q [audit]", b_pow, rhs, rel_tol),
    ]
    return _finish("corollary_2_3", pair.dim, pair.seed,
                   {"m": w.m, "M": w.M, "p": p, "q": q, "K2": k2}, links, notes)


def check_corollary_2_4(pair: CertifiedPair, p: float, q: float,
                        rel_tol: float = DEFAULT_REL_TOL) -> ChainReport:
    """B^p <= G_{t^p}(B) <= C2(m,M,p,q) I + A^q for p, q <= 0."""
    _require_certificate(pair, CERT_DOMINATED, "check_corollary_2_4")
    p, q = float(p), float(q)
    if p > 0.0 or q > 0.0:
        raise ParameterError(f"needs p <= 0 and q <= 0, got p={p}, q={q}")
    w = pair.window
    try:
        c2 = kantorovich_C2(w, p, q)
    except DegenerateExponentError:
        c2 = beta_generic(power_fun(p), power_fun(q), 1.0, w).value
    b_pow = matrix_power(pair.B, p)
    mid = superlog_bound(pair.B, w, w.m ** p, w.M ** p)
    rhs = c2 * identity(pair.dim) + matrix_power(pair.A, q)
    links = [
        _link("B^p <= G_{t^p}(B)", b_pow, mid, rel_tol),
        _link("G_{t^p}(B) <= C2 + A^q", mid, rhs, rel_tol),
        _link("B^p <= C2 + A^q [audit]", b_pow, rhs, rel_tol),
    ]
    return _finish("corollary_2_4", pair.dim, pair.seed,
                   {"m": w.m, "M": w.M, "p": p, "q": q, "C2": c2}, links)


def _chaotic_exponents(p: float, r: float) -> tuple[float, float]:
    p, r = float(p), float(r)
    if p > 0.0 or r > 0.0:
        raise ParameterError(f"needs p <= 0 and r <= 0, got p={p}, r={r}")
    if p + r > -MIN_EXPONENT_SUM:
        raise DegenerateExponentError(
            f"p + r = {p + r} too close to 0; the outer exponent r/(p+r) degenerates")
    return p, r


def furuta_term(pair: CertifiedPair, p: float, r: float, exponent: float) -> Array:
    """(B^(r/2) A^p B^(r/2))^exponent, the two-sided product of the chaotic order."""
    half = matrix_power(pair.B, r / 2.0)
    inner = hermitize(half @ matrix_power(pair.A, p) @ half)
    return matrix_power(inner, exponent)


def check_lemma_3_1_forward(pair: CertifiedPair, p: float, r: float,
                            rel_tol: float = DEFAULT_REL_TOL) -> ChainReport:
    """B^r <= (B^(r/2) A^p B^(r/2))^(r/(p+r)) under the chaotic order, p, r <= 0."""
    _require_certificate(pair, CERT_CHAOTIC, "check_lemma_3_1_forward")
    p, r = _chaotic_exponents(p, r)
    rhs = furuta_term(pair, p, r, r / (p + r))
    links = [
        _link("B^r <= (B^(r/2) A^p B^(r/2))^(r/(p+r))", matrix_power(pair.B, r), rhs, rel_tol),
    ]
    return _finish("lemma_3_1", pair.dim, pair.seed,
                   {"m": pair.window.m, "M": pair.window.M, "p": p, "r": r}, links)


def lemma_3_1_exponent_slacks(pair: CertifiedPair, p: float, r: float,
                              rel_tol: float = DEFAULT_REL_TOL) -> dict:
    """Slacks of the two candidate outer exponents r/(p+r) and p/(p+r).

    Diagnostic used by the sharpness hunt to record which exponent the
    chaotic order actually supports; the conformance check uses r/(p+r).
    """
    _require_certificate(pair, CERT_CHAOTIC, "lemma_3_1_exponent_slacks")
    p, r = _chaotic_exponents(p, r)
    b_r = matrix_power(pair.B, r)
    out = {}
    for name, expo in (("r_over_p_plus_r", r / (p + r)), ("p_over_p_plus_r", p / (p + r))):
        verdict = loewner_leq(b_r, furuta_term(pair, p, r, expo), rel_tol)
        out[name] = {"min_slack": verdict.min_slack, "holds": verdict.holds}
    return out


def _chaotic_middle(pair: CertifiedPair, p: float, r: float) -> Array:
    """B^(-r) G_{t^(p+r)}(B) evaluated as a single scalar function of B.

    Both factors are functions of B and commute exactly, so the product is
    computed as t -> t^(-r) G_{t^(p+r)}(t) on the spectrum; this avoids
    commutator noise from multiplying two separately rounded matrices.
    """
    w = pair.window
    s = p + r
    log_m = math.log(w.m) * s
    log_upper = math.log(w.M) * s

    def fun(t):
        return t ** (-r) * np.exp(((w.M - t) * log_m + (t - w.m) * log_upper) / w.width)

    return apply_scalar_function(pair.B, fun)


def check_corollary_3_2(pair: CertifiedPair, p: float, r: float,
                        rel_tol: float = DEFAULT_REL_TOL) -> ChainReport:
    """B^p <= B^(-r) G_{t^(p+r)}(B) <= K(m,M,p+r) A^p under the chaotic order."""
    _require_certificate(pair, CERT_CHAOTIC, "check_corollary_3_2")
    p, r = _chaotic_exponents(p, r)
    notes = []
    if r < -1.0 - 1e-12:
        notes.append(f"r={r} outside the [-1, 0] regime; result is a fuzz observation")
    w = pair.window
    k = kantorovich_K(w, p + r)
    b_pow = matrix_power(pair.B, p)
    mid = _chaotic_middle(pair, p, r)
    rhs = k * matrix_power(pair.A, p)
    links = [
        _link("B^p <= B^(-r) G_{t^(p+r)}(B)", b_pow, mid, rel_tol),
        _link("B^(-r) G_{t^(p+r)}(B) <= K A^p", mid, rhs, rel_tol),
        _link("B^p <= K A^p [audit]", b_pow, rhs, rel_tol),
    ]
    return _finish("corollary_3_2", pair.dim, pair.seed,
                   {"m": w.m, "M": w.M, "p": p, "r": r, "K": k}, links, notes)


def check_corollary_3_3(pair: CertifiedPair, p: float, r: float,
                        rel_tol: float = DEFAULT_REL_TOL) -> ChainReport:
    """B^p <= B^(-r) G_{t^(p+r)}(B) <= C(m,M,p+r) B^(-r) + A^p under the chaotic order.

    The constant term carries the same B^(-r) weight as the interpolant:
    the chain is obtained by conjugating the one-operator difference bound
    with B^(-r/2), which multiplies the constant by B^(-r).  The unweighted
    variant C(m,M,p+r) I + A^p is false for windows above 1 (see
    corollary_3_3_unweighted_slack and the sharpness hunt for witnesses).
    """
    _require_certificate(pair, CERT_CHAOTIC, "check_corollary_3_3")
    p, r = _chaotic_exponents(p, r)
    notes = []
    if r < -1.0 - 1e-12:
        notes.append(f"r={r} outside the [-1, 0] regime; result is a fuzz observation")
    w = pair.window
    c = kantorovich_C(w, p + r)
    b_pow = matrix_power(pair.B, p)
    mid = _chaotic_middle(pair, p, r)
    rhs = c * matrix_power(pair.B, -r) + matrix_power(pair.A, p)
    links = [
        _link("B^p <= B^(-r) G_{t^(p+r)}(B)", b_pow, mid, rel_tol),
        _link("B^(-r) G_{t^(p+r)}(B) <= C B^(-r) + A^p", mid, rhs, rel_tol),
        _link("B^p <= C B^(-r) + A^p [audit]", b_pow, rhs, rel_tol),
    ]
    return _finish("corollary_3_3", pair.dim, pair.seed,
                   {"m": w.m, "M": w.M, "p": p, "r": r, "C": c}, links, notes)


def corollary_3_3_unweighted_slack(pair: CertifiedPair, p: float, r: float,
                                   rel_tol: float = DEFAULT_REL_TOL) -> dict:
    """Slack of the unweighted final bound C(m,M,p+r) I + A^p.

    Diagnostic only: this variant drops the B^(-r) weight on the constant
    and is refuted already by commuting instances on windows with m > 1;
    the sharpness hunt records where it breaks.
    """
    _require_certificate(pair, CERT_CHAOTIC, "corollary_3_3_unweighted_slack")
    p, r = _chaotic_exponents(p, r)
    w = pair.window
    c = kantorovich_C(w, p + r)
    mid = _chaotic_middle(pair, p, r)
    rhs = c * identity(pair.dim) + matrix_power(pair.A, p)
    verdict = loewner_leq(mid, rhs, rel_tol)
    return {"min_slack": verdict.min_slack, "holds": verdict.holds}


def check_theorem_4_1(family: WeightedFamily, f, g, alpha: float,
                      rel_tol: float = DEFAULT_REL_TOL) -> ChainReport:
    """Weighted-map chain: sum w_i Phi_i(f(A_i)) <= sum w_i Phi_i(G_f(A_i))
    <= alpha g(sum w_i Phi_i(A_i)) + beta for log-convex f, continuous g."""
    family.validate()
    w = family.window
    alpha = float(alpha)
    beta = beta_generic(f, g, alpha, w).value
    fm, fM = float(f(w.m)), float(f(w.M))
    dim_out = family.items[0][1].dim_out
    lhs = np.zeros((dim_out, dim_out), dtype=complex)
    mid = np.zeros((dim_out, dim_out), dtype=complex)
    agg = np.zeros((dim_out, dim_out), dtype=complex)
    for weight, phi, op in family.items:
        lhs += weight * apply_map(phi, apply_scalar_function(op, f))
        mid += weight * apply_map(phi, superlog_bound(op, w, fm, fM))
        agg += weight * apply_map(phi, op)
    lhs, mid, agg = hermitize(lhs), hermitize(mid), hermitize(agg)
    rhs = alpha * apply_scalar_function(agg, g) + beta * identity(dim_out)
    links = [
        _link("sum w_i Phi_i(f(A_i)) <= sum w_i Phi_i(G_f(A_i))", lhs, mid, rel_tol),
        _link("sum w_i Phi_i(G_f(A_i)) <= alpha g(agg) + beta", mid, rhs, rel_tol),
        _link("sum w_i Phi_i(f(A_i)) <= alpha g(agg) + beta [audit]", lhs, rhs, rel_tol),
    ]
    dim_in = family.items[0][1].dim_in
    return _finish("theorem_4_1", dim_in, 0,
                   {"m": w.m, "M": w.M, "alpha": alpha, "beta": beta,
                    "n": len(family.items), "dim_out": dim_out}, links)


def _relative_interpolant(pair: CertifiedPair, fm: float, fM: float,
                          hypothesis_tol: float = 1e-8):
    """T = A^(-1/2) B A^(-1/2), A^(1/2), and A^(1/2) G(T) A^(1/2)."""
    rt, irt = sqrt_invsqrt(pair.A)
    t = hermitize(irt @ pair.B @ irt)
    g_t = superlog_bound(t, pair.window, fm, fM, hypothesis_tol)
    return t, rt, hermitize(rt @ g_t @ rt)


def check_theorem_4_2(pair: CertifiedPair, phi: PositiveLinearMap, f, alpha: float,
                      rel_tol: float = DEFAULT_REL_TOL) -> ChainReport:
    """Phi(A sigma_f B) <= Phi(A^(1/2) G_f(T) A^(1/2)) <= beta Phi(A) + alpha Phi(A) sigma_f Phi(B).

    T = A^(-1/2) B A^(-1/2) has spectrum in [m, M] by the relative
    certificate; beta is the oracle gap of f against itself at the given
    alpha.
    """
    _require_certificate(pair, CERT_RELATIVE, "check_theorem_4_2")
    alpha = float(alpha)
    w = pair.window
    beta = beta_generic(f, f, alpha, w).value
    t, rt, interp = _relative_interpolant(pair, float(f(w.m)), float(f(w.M)))
    lhs = apply_map(phi, hermitize(rt @ apply_scalar_function(t, f) @ rt))
    mid = apply_map(phi, interp)
    phi_a = apply_map(phi, pair.A)
    phi_b = apply_map(phi, pair.B)
    rhs = beta * phi_a + alpha * f_connection(phi_a, phi_b, f)
    links = [
        _link("Phi(A sigma_f B) <= Phi(A^(1/2) G_f(T) A^(1/2))", lhs, mid, rel_tol),
        _link("Phi(A^(1/2) G_f(T) A^(1/2)) <= beta Phi(A) + alpha Phi(A) sigma_f Phi(B)",
              mid, rhs, rel_tol),
        _link("Phi(A sigma_f B) <= beta Phi(A) + alpha Phi(A) sigma_f Phi(B) [audit]",
              lhs, rhs, rel_tol),
    ]
    return _finish("theorem_4_2", pair.dim, pair.seed,
                   {"m": w.m, "M": w.M, "alpha": alpha, "beta": beta,
                    "dim_out": phi.dim_out}, links)


def check_corollary_4_3(pair: CertifiedPair, phi: PositiveLinearMap, p: float, alpha: float,
                        rel_tol: float = DEFAULT_REL_TOL) -> ChainReport:
    """Power-mean case with closed-form beta: Phi(A #_p B) <= interpolant term
    <= beta Phi(A) + alpha Phi(A) #_p Phi(B), beta = beta_power_closed(p, p, alpha)."""
    _require_certificate(pair, CERT_RELATIVE, "check_corollary_4_3")
    p, alpha = float(p), float(alpha)
    if p > 0.0:
        raise ParameterError(f"needs p <= 0, got p={p}")
    w = pair.window
    beta = beta_power_closed(w, p, p, alpha)
    t, rt, interp = _relative_interpolant(pair, w.m ** p, w.M ** p)
    lhs = apply_map(phi, hermitize(rt @ apply_scalar_function(t, power_fun(p)) @ rt))
    mid = apply_map(phi, interp)
    phi_a = apply_map(phi, pair.A)
    phi_b = apply_map(phi, pair.B)
    rhs = beta * phi_a + alpha * sharp(phi_a, phi_b, p)
    links = [
        _link("Phi(A #_p B) <= Phi(A^(1/2) G_{t^p}(T) A^(1/2))", lhs, mid, rel_tol),
        _link("Phi(A^(1/2) G_{t^p}(T) A^(1/2)) <= beta Phi(A) + alpha Phi(A) #_p Phi(B)",
              mid, rhs, rel_tol),
        _link("Phi(A #_p B) <= beta Phi(A) + alpha Phi(A) #_p Phi(B) [audit]", lhs, rhs, rel_tol),
    ]
    return _finish("corollary_4_3", pair.dim, pair.seed,
                   {"m": w.m, "M": w.M, "p": p, "alpha": alpha, "beta": beta,
                    "dim_out": phi.dim_out}, links)


def check_corollary_4_4(pair: CertifiedPair, phi: PositiveLinearMap, p: float,
                        mode: str = "ratio",
                        rel_tol: float = DEFAULT_REL_TOL) -> ChainReport:
    """Reverses of the map-mean inequality for p <= 0.

    ratio mode bounds Phi(A #_p B) by K(m,M,p) Phi(A) #_p Phi(B) through
    the interpolant term; difference mode bounds it by
    C(m,M,p) Phi(A) + Phi(A) #_p Phi(B).  For -1 <= p < 0 the forward
    baseline Phi(A) #_p Phi(B) <= Phi(A #_p B) is checked alongside.
    """
    _require_certificate(pair, CERT_RELATIVE, "check_corollary_4_4")
    p = float(p)
    if p > 0.0:
        raise ParameterError(f"needs p <= 0, got p={p}")
    if mode not in ("ratio", "difference"):
        raise ValueError(f"mode must be 'ratio' or 'difference', got {mode!r}")
    w = pair.window
    t, rt, interp = _relative_interpolant(pair, w.m ** p, w.M ** p)
    lhs = apply_map(phi, hermitize(rt @ apply_scalar_function(t, power_fun(p)) @ rt))
    mid = apply_map(phi, interp)
    phi_a = apply_map(phi, pair.A)
    phi_b = apply_map(phi, pair.B)
    mean_term = sharp(phi_a, phi_b, p)
    params = {"m": w.m, "M": w.M, "p": p, "mode": mode, "dim_out": phi.dim_out}
    links = []
    if -1.0 <= p < 0.0:
        links.append(_link("Phi(A) #_p Phi(B) <= Phi(A #_p B) [baseline]",
                           mean_term, lhs, rel_tol))
    if mode == "ratio":
        k = kantorovich_K(w, p)
        params["K"] = k
        rhs = k * mean_term
        final_label = "Phi(A^(1/2) G_{t^p}(T) A^(1/2)) <= K Phi(A) #_p Phi(B)"
        audit_label = "Phi(A #_p B) <= K Phi(A) #_p Phi(B) [audit]"
    else:
        c = kantorovich_C(w, p)
        params["C"] = c
        rhs = c * phi_a + mean_term
        final_label = "Phi(A^(1/2) G_{t^p}(T) A^(1/2)) <= C Phi(A) + Phi(A) #_p Phi(B)"
        audit_label = "Phi(A #_p B) <= C Phi(A) + Phi(A) #_p Phi(B) [audit]"
    links.extend([
        _link("Phi(A #_p B) <= Phi(A^(1/2) G_{t^p}(T) A^(1/2))", lhs, mid, rel_tol),
        _link(final_label, mid, rhs, rel_tol),
        _link(audit_label, lhs, rhs, rel_tol),
    ])
    return _finish("corollary_4_4", pair.dim, pair.seed, params, links)


def check_theorem_4_5(pair: CertifiedPair, phi: PositiveLinearMap, p: float,
                      rel_tol: float = DEFAULT_REL_TOL) -> ChainReport:
    """Entropy bounds for -1 <= p < 0, tested as two lower chains plus the
    forward baseline Phi(T_p(A|B)) <= T_p(Phi(A)|Phi(B)).

    The middle term is (Phi(A^(1/2) G_{t^p}(T) A^(1/2)) - Phi(A)) / p; the
    two lower bounds use K(m,M,p) with the mean term and C(m,M,p) with
    Phi(A) respectively.
    """
    _require_certificate(pair, CERT_RELATIVE, "check_theorem_4_5")
    p = float(p)
    if not (-1.0 <= p < 0.0):
        raise ParameterError(f"entropy bounds need -1 <= p < 0, got p={p}")
    w = pair.window
    k = kantorovich_K(w, p)
    c = kantorovich_C(w, p)
    t, rt, interp = _relative_interpolant(pair, w.m ** p, w.M ** p)
    phi_a = apply_map(phi, pair.A)
    phi_b = apply_map(phi, pair.B)
    lhs = apply_map(phi, tsallis_entropy(pair.A, pair.B, p))
    mid = hermitize((apply_map(phi, interp) - phi_a) / p)
    entropy_out = tsallis_entropy(phi_a, phi_b, p)
    mean_term = sharp(phi_a, phi_b, p)
    ratio_floor = hermitize(entropy_out - ((1.0 - k) / p) * mean_term)
    diff_floor = hermitize(entropy_out + (c / p) * phi_a)
    links = [
        _link("Phi(T_p(A|B)) >= (Phi(G-term) - Phi(A))/p", mid, lhs, rel_tol),
        _link("(Phi(G-term) - Phi(A))/p >= T_p(Phi(A)|Phi(B)) - ((1-K)/p) mean", ratio_floor, mid, rel_tol),
        _link("Phi(T_p(A|B)) >= T_p(Phi(A)|Phi(B)) - ((1-K)/p) mean [audit]", ratio_floor, lhs, rel_tol),
        _link("(Phi(G-term) - Phi(A))/p >= T_p(Phi(A)|Phi(B)) + (C/p) Phi(A)", diff_floor, mid, rel_tol),
        _link("Phi(T_p(A|B)) >= T_p(Phi(A)|Phi(B)) + (C/p) Phi(A) [audit]", diff_floor, lhs, rel_tol),
        _link("Phi(T_p(A|B)) <= T_p(Phi(A)|Phi(B)) [baseline]", lhs, entropy_out, rel_tol),
    ]
    return _finish("theorem_4_5", pair.dim, pair.seed,
                   {"m": w.m, "M": w.M, "p": p, "K": k, "C": c,
                    "dim_out": phi.dim_out}, links)
