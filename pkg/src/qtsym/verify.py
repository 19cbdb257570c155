"""Identity-checking harness with structured reports.

Every check computes both sides of an identity inside one scalar ring and
compares them coefficient by coefficient; there is no tolerance anywhere.
A check instance can run in two modes:

* ``evaluated`` substitutes q, t with seeded residue points mod 2^61 - 1
  and compares the resulting integer vectors, at three points or more.
* ``exact`` works in Q(q,t).  An exact run is always preceded by the
  evaluated pass: a mismatch at a point already disproves the identity,
  so the harness refuses to spend exact arithmetic confirming it.

run_check evaluates a single instance and returns a CheckReport; run_suite
runs a named profile and aggregates the reports in registration order.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import random
import time
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor

from . import pathalg
from .config import get_config
from .errors import CheckFailure, DegreeBoundError, DomainError
from .macdonald import (
    b_stat,
    c_alpha,
    delta,
    delta_prime,
    e_nk,
    expand_htilde,
    htilde_in,
    nabla,
    nabla_inv,
    theta_after_nabla,
)
from .partitions import compositions_of, conjugate, dominates, partitions_of
from .paths import gen_fn
from .pathalg import (
    VkElement,
    d_minus,
    d_plus,
    d_plus_star,
    m_star,
    t_i,
    tau_star,
    y_alpha,
    z1,
)
from .qt import QT_M, Q, RAT_ONE, T, QtRat, q_pow, t_pow
from .rings import AuxPolyRing, ModPointRing, P_MERSENNE, QTRAT
from .symfunc import Alphabet, SymFunc, e_, s_

MIN_POINTS = 3


# ---------------------------------------------------------------------------
# reports


@dataclasses.dataclass
class CheckReport:
    """Outcome of one check instance.

    On pass, lhs and rhs hold sha256 digests of the canonical forms; on
    fail they hold the full text of the first mismatching comparison and
    the witness pins down the first differing basis coefficient.
    """

    check_id: str
    params: dict
    status: str  # "pass" | "fail" | "skipped"
    lhs: str
    rhs: str
    elapsed: float
    mode: str  # "exact" | "evaluated"
    witness: dict | None = None

    def to_json(self) -> dict:
        out = dataclasses.asdict(self)
        out["params"] = _jsonable(self.params)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CheckReport":
        return cls(**obj)


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _canon(x) -> str:
    if isinstance(x, VkElement):
        return repr(x)
    if isinstance(x, SymFunc):
        return x.str_in("m")
    return str(x)


def _digest(parts) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
        h.update(b"\n")
    return "sha256:" + h.hexdigest()


def _first_term(f: SymFunc):
    lam = min(f.coeffs, key=lambda l: (sum(l), l))
    return lam


def _witness(label: str, lhs, rhs) -> dict:
    out: dict = {"comparison": label}
    if isinstance(lhs, SymFunc) and isinstance(rhs, SymFunc):
        lam = _first_term(lhs - rhs)
        out.update(
            basis="p",
            lam=list(lam),
            lhs_coeff=str(lhs.coeff_p(lam)),
            rhs_coeff=str(rhs.coeff_p(lam)),
        )
    elif isinstance(lhs, VkElement) and isinstance(rhs, VkElement):
        diff = lhs - rhs
        exp = min(diff.terms)
        lam = _first_term(diff.terms[exp])
        zero = SymFunc.zero(lhs.ring)
        out.update(
            yexp=list(exp),
            basis="p",
            lam=list(lam),
            lhs_coeff=str(lhs.terms.get(exp, zero).coeff_p(lam)),
            rhs_coeff=str(rhs.terms.get(exp, zero).coeff_p(lam)),
        )
    else:
        out.update(lhs_value=str(lhs), rhs_value=str(rhs))
    return out


# ---------------------------------------------------------------------------
# shared operator helpers

_ESTAR: dict = {}
_T10_INDEX: dict = {}


def _estar(i: int) -> SymFunc:
    """Multiplication kernel e_i[X/M], exact."""
    hit = _ESTAR.get(i)
    if hit is None:
        hit = e_(i).pleth(Alphabet.x(RAT_ONE / QT_M))
        _ESTAR[i] = hit
    return hit


def _estar_apply(i: int, f: SymFunc) -> SymFunc:
    mult = _estar(i)
    if f.ring is not QTRAT:
        mult = mult.to_ring(f.ring)
    return mult * f


def _rkk(k: int, f: SymFunc) -> SymFunc:
    """(-1)^k nabla e_k[X/M] nabla^{-1}, applied."""
    out = nabla(_estar_apply(k, nabla_inv(f)))
    return -out if k % 2 else out


def _t10_index(k: int) -> SymFunc:
    """e_k[X - 1/M]: the index function of the Delta series with shift."""
    hit = _T10_INDEX.get(k)
    if hit is None:
        hit = e_(k).pleth(Alphabet.x().plus_const(-RAT_ONE / QT_M))
        _T10_INDEX[k] = hit
    return hit


def _series_ring(base, u_order: int | None, v_order: int | None) -> AuxPolyRing:
    names, trunc = [], {}
    if u_order is not None:
        names.append("u")
        trunc["u"] = u_order
    if v_order is not None:
        names.append("v")
        trunc["v"] = v_order
    return AuxPolyRing(tuple(names), base=base, trunc=trunc)


def _tau_mult(ring: AuxPolyRing, var: str, order: int, factor=None) -> SymFunc:
    """sum_{k<=order} (-var)^k e_k[X/M], optionally with var replaced by
    var*factor (factor a generator of the same ring)."""
    g = ring.gen(var)
    if factor is not None:
        g = g * factor
    total = SymFunc.zero(ring)
    for k in range(order + 1):
        term = _estar(k).to_ring(ring) * g ** k
        total = total + (-term if k % 2 else term)
    return total


_DELTA_EIG: dict = {}


def _delta_eig(shifted: bool, k: int, mu: tuple) -> QtRat:
    key = (shifted, k, mu)
    hit = _DELTA_EIG.get(key)
    if hit is None:
        g = _t10_index(k) if shifted else e_(k)
        hit = g.pleth(Alphabet.const(b_stat(mu))).scalar_part()
        _DELTA_EIG[key] = hit
    return hit


def _delta_series(f: SymFunc, ring: AuxPolyRing, order: int, shifted: bool) -> SymFunc:
    """sum_k (-u)^k Delta_{g_k} f with g_k = e_k or e_k[X - 1/M].

    All the summands are diagonal on the same expansion, so f is expanded
    once and each H~_mu picks up a u-polynomial eigenvalue.  The plain
    series vanishes once k exceeds |mu|; the shifted one does not
    terminate and is cut at the u truncation order.
    """
    u = ring.gen("u")
    out = SymFunc.zero(ring)
    for mu, c in expand_htilde(f).items():
        top = order if shifted else min(order, sum(mu))
        eig = ring.zero
        for k in range(top + 1):
            v = _delta_eig(shifted, k, mu)
            if v.is_zero():
                continue
            term = ring.from_qtrat(v) * u ** k
            eig = (eig - term) if k % 2 else (eig + term)
        if eig.is_zero():
            continue
        out = out + htilde_in(mu, ring) * (c * eig)
    return out


def _sign(m: int) -> QtRat:
    return -RAT_ONE if m % 2 else RAT_ONE


def _to_ring(f: SymFunc, ring) -> SymFunc:
    return f if ring is QTRAT else f.to_ring(ring)


# ---------------------------------------------------------------------------
# the registered checks; each returns (label, lhs, rhs) comparisons


_REGISTRY: "OrderedDict[str, callable]" = OrderedDict()


def _register(check_id: str):
    def deco(fn):
        _REGISTRY[check_id] = fn
        return fn

    return deco


def _comp_params(params, *names):
    try:
        return [params[n] for n in names]
    except KeyError as exc:
        raise CheckFailure(f"missing parameter {exc.args[0]!r}") from None


@_register("comp_delta")
def _check_comp_delta(params: dict, ring) -> list:
    """Three pipelines for one (k, alpha): operator, recursion, paths."""
    (alpha,) = _comp_params(params, "alpha")
    alpha = tuple(alpha)
    k = int(params.get("k", 0))
    n = k + sum(alpha)
    if "n" in params and int(params["n"]) != n:
        raise CheckFailure(f"inconsistent n={params['n']} for k={k}, alpha={alpha}")
    ref = _to_ring(gen_fn(n, k, alpha), ring)
    op = theta_after_nabla(e_(k), _to_ring(c_alpha(alpha), ring)) * _sign(n - k)
    chain = m_star(alpha, k, ring)
    for _ in alpha:
        chain = d_minus(chain)
    return [("operator=paths", op, ref), ("recursion=paths", chain.sf(), ref)]


@_register("delta_rise")
def _check_delta_rise(params: dict, ring) -> list:
    n, k = map(int, _comp_params(params, "n", "k"))
    if not n > k >= 0:
        raise CheckFailure("delta_rise needs n > k >= 0")
    ref = _to_ring(gen_fn(n, k), ring)
    lhs = delta_prime(e_(n - k - 1), _to_ring(e_(n), ring))
    total = SymFunc.zero(QTRAT)
    for alpha in compositions_of(n - k):
        total = total + gen_fn(n, k, alpha)
    return [("delta=paths", lhs, ref), ("alpha_sum=paths", _to_ring(total, ring), ref)]


@_register("thm_2_1")
def _check_thm_2_1(params: dict, ring) -> list:
    n, k = map(int, _comp_params(params, "n", "k"))
    if not (n >= 1 and 0 <= k <= n):
        raise CheckFailure("thm_2_1 needs n >= 1 and 0 <= k <= n")
    lhs = theta_after_nabla(e_(k), _to_ring(e_(n - k), ring)) * _sign(n - k)
    if n - k - 1 >= 0:
        rhs = delta_prime(e_(n - k - 1), _to_ring(e_(n), ring))
    else:
        rhs = SymFunc.zero(ring)
    return [("theta_nabla=delta_prime", lhs, rhs)]


@_register("enk_sum")
def _check_enk_sum(params: dict, ring) -> list:
    (n,) = map(int, _comp_params(params, "n"))
    by_length: dict = {}
    total = SymFunc.zero(QTRAT)
    for alpha in compositions_of(n):
        f = c_alpha(alpha)
        r = len(alpha)
        by_length[r] = by_length.get(r, SymFunc.zero(QTRAT)) + f
        total = total + f
    out = [
        (f"E_{n}_{r}=C_sum", _to_ring(e_nk(n, r), ring), _to_ring(by_length[r], ring))
        for r in range(1, n + 1)
    ]
    out.append((f"e_{n}=C_sum", _to_ring(e_(n), ring), _to_ring(total, ring)))
    return out


@_register("theta_nabla")
def _check_theta_nabla(params: dict, ring) -> list:
    k, d = map(int, _comp_params(params, "k", "d"))
    out = []
    for lam in partitions_of(d):
        f = _to_ring(s_(lam), ring)
        lhs = theta_after_nabla(e_(k), f)
        rhs = SymFunc.zero(ring)
        for i in range(k + 1):
            rhs = rhs + _estar_apply(i, nabla(_estar_apply(k - i, f)))
        out.append((f"s_{lam}", lhs, rhs))
    return out


@_register("five_term")
def _check_five_term(params: dict, ring) -> list:
    d, uo, vo = map(int, _comp_params(params, "d", "u_order", "v_order"))
    R = _series_ring(ring, uo, vo)
    tau_v = _tau_mult(R, "v", vo)
    # sum_k (uv)^k R_{k,k} collapses to one conjugated multiplication;
    # gen_series_coeff pins the R_{k,k} realization term by term
    tau_uv = _tau_mult(R, "v", min(uo, vo), factor=R.gen("u"))

    def t10(f):
        return _delta_series(f, R, uo, shifted=True)

    def t01(f):
        return tau_v * f

    def t11(f):
        return nabla(tau_uv * nabla_inv(f))

    out = []
    for lam in partitions_of(d):
        f = _to_ring(s_(lam), R)
        out.append((f"s_{lam}", t10(t01(f)), t01(t11(t10(f)))))
    return out


@_register("gen_series_coeff")
def _check_gen_series_coeff(params: dict, ring) -> list:
    m, k, d = map(int, _comp_params(params, "m", "k", "d"))
    out = []
    for lam in partitions_of(d):
        f = _to_ring(s_(lam), ring)
        lhs = delta(e_(m), _estar_apply(k, f))
        rhs = SymFunc.zero(ring)
        for i in range(min(m, k) + 1):
            rhs = rhs + _estar_apply(k - i, _rkk(i, delta(e_(m - i), f)))
        out.append((f"s_{lam}", lhs, rhs))
    return out


@_register("gen_series_2")
def _check_gen_series_2(params: dict, ring) -> list:
    d, uo, vo = map(int, _comp_params(params, "d", "u_order", "v_order"))
    R = _series_ring(ring, uo, vo)
    tau_v = _tau_mult(R, "v", vo)
    tau_uv = _tau_mult(R, "v", min(uo, vo), factor=R.gen("u"))
    out = []
    for lam in partitions_of(d):
        f = _to_ring(s_(lam), R)
        lhs = _delta_series(tau_v * f, R, uo, shifted=False)
        inner = _delta_series(f, R, uo, shifted=False)
        rhs = tau_v * nabla(tau_uv * nabla_inv(inner))
        out.append((f"s_{lam}", lhs, rhs))
    return out


@_register("tau_unit")
def _check_tau_unit(params: dict, ring) -> list:
    (vo,) = map(int, _comp_params(params, "v_order"))
    R = _series_ring(ring, None, vo)
    tau_v = _tau_mult(R, "v", vo)
    one = SymFunc.one(R)
    return [("unit", one, tau_v * nabla(tau_v * one))]


@_register("y_recursion")
def _check_y_recursion(params: dict, ring) -> list:
    (a,) = map(int, _comp_params(params, "a"))
    alpha = tuple(params.get("alpha", ()))
    if a < 2:
        raise CheckFailure("y_recursion needs leading part a >= 2")
    lhs = y_alpha((a,) + alpha, ring)
    acc = None
    for beta in compositions_of(a - 1):
        G = y_alpha(alpha + beta, ring)
        for _ in range(len(beta) - 1):
            G = d_minus(G)
        G = G * q_pow(1 - len(beta))
        acc = G if acc is None else acc + G
    bracket = d_plus_star(d_minus(acc)) - d_minus(d_plus_star(acc))
    rhs = bracket * (t_pow(1 - a) / (Q - RAT_ONE))
    return [("recursion", lhs, rhs)]


def _rand_vk(rng: random.Random, k: int, degree: int, ring) -> VkElement:
    """Small random element of V_k with integer q,t monomial coefficients."""
    terms: dict = {}
    for _ in range(3):
        exp = tuple(rng.randrange(0, 2) for _ in range(k))
        f = SymFunc.zero(QTRAT)
        for _ in range(2):
            d = rng.randrange(0, degree + 1)
            lam = rng.choice(partitions_of(d)) if d else ()
            c = QtRat.monomial(rng.randrange(1, 4), rng.randrange(0, 2), rng.randrange(0, 2))
            f = f + c * SymFunc.from_basis(rng.choice("ehs"), lam)
        cur = terms.get(exp)
        terms[exp] = f if cur is None else cur + f
    out = VkElement(k, QTRAT, {e: f for e, f in terms.items() if f.coeffs})
    return out if ring is QTRAT else out.to_ring(ring)


@_register("tau_commutations")
def _check_tau_commutations(params: dict, ring) -> list:
    k, degree = map(int, _comp_params(params, "k", "degree"))
    order = int(params.get("order", 2))
    rng = random.Random(params.get("input_seed", 7))
    F = _rand_vk(rng, k, degree, ring)
    lifted = tau_star(F, order)
    out = []
    for i in range(1, k):
        out.append(
            (f"T_{i}", t_i(lifted, i, variant="tbar"), tau_star(t_i(F, i, variant="tbar"), order))
        )
    out.append(("d_plus", d_plus(lifted), tau_star(d_plus(F), order)))
    if k >= 1:
        out.append(("d_minus", d_minus(lifted), tau_star(d_minus(F), order)))
        ymul = (1,) + (0,) * (k - 1)
        out.append(("y_1", lifted.y_mult(ymul), tau_star(F.y_mult(ymul), order)))
        for name, op in (("d_plus_star", d_plus_star), ("z_1", z1)):
            inner = tau_star(op(F), order)
            ring2, k2 = inner.ring, inner.k
            u = ring2.gen("u")
            twist = VkElement(
                k2,
                ring2,
                {
                    (0,) * k2: SymFunc.one(ring2),
                    (1,) + (0,) * (k2 - 1): SymFunc.one(ring2) * (-u),
                },
            )
            out.append((name, op(tau_star(F, order)), twist * inner))
    return out


@_register("c_alpha_bridge")
def _check_c_alpha_bridge(params: dict, ring) -> list:
    (alpha,) = _comp_params(params, "alpha")
    alpha = tuple(alpha)
    return [
        (
            "bridge=creation",
            pathalg.c_alpha_bridge(alpha, ring),
            _to_ring(c_alpha(alpha), ring),
        )
    ]


@_register("macdonald_axioms")
def _check_macdonald_axioms(params: dict, ring) -> list:
    """Triangularity of H~_mu under both twisted alphabets plus the
    normalization <H~_mu, s_n> = 1, straight from the cached tables."""
    size = int(params.get("max_size", 0))
    mus = [tuple(params["mu"])] if "mu" in params else [
        mu for n in range(1, size + 1) for mu in partitions_of(n)
    ]
    if not mus:
        raise CheckFailure("macdonald_axioms needs mu or max_size >= 1")
    out = []
    zero = SymFunc.zero(ring)
    for mu in mus:
        f = htilde_in(mu, ring)
        qbad = SymFunc.zero(ring)
        for lam, c in f.pleth(Alphabet.x(RAT_ONE - Q)).to_basis("s").items():
            if not dominates(lam, mu):
                qbad = qbad + c * SymFunc.from_basis("s", lam, ring)
        out.append((f"q_triangular_{mu}", qbad, zero))
        muc = conjugate(mu)
        tbad = SymFunc.zero(ring)
        for lam, c in f.pleth(Alphabet.x(RAT_ONE - T)).to_basis("s").items():
            if not dominates(lam, muc):
                tbad = tbad + c * SymFunc.from_basis("s", lam, ring)
        out.append((f"t_triangular_{mu}", tbad, zero))
        norm = f.hall(_to_ring(s_((sum(mu),)), ring))
        out.append((f"normalized_{mu}", norm, ring.one))
    return out


@_register("hecke")
def _check_hecke(params: dict, ring) -> list:
    k, degree = map(int, _comp_params(params, "k", "degree"))
    rng = random.Random(params.get("input_seed", 11))
    F = _rand_vk(rng, k, degree, ring)
    out = []
    for variant in ("upsilon", "tbar"):
        # eigenvalues (q, -1) for upsilon, (1, -q) for tbar
        trace = (Q - RAT_ONE) if variant == "upsilon" else (RAT_ONE - Q)
        for i in range(1, k):
            ti = t_i(F, i, variant=variant)
            out.append(
                (
                    f"quadratic_{variant}_T{i}",
                    t_i(ti, i, variant=variant),
                    ti * trace + F * q_pow(1),
                )
            )
            out.append(
                (
                    f"inverse_{variant}_T{i}",
                    t_i(t_i(F, i, inverse=True, variant=variant), i, variant=variant),
                    F,
                )
            )
        for i in range(1, k - 1):
            out.append(
                (
                    f"braid_{variant}_T{i}",
                    t_i(t_i(t_i(F, i, variant=variant), i + 1, variant=variant), i, variant=variant),
                    t_i(t_i(t_i(F, i + 1, variant=variant), i, variant=variant), i + 1, variant=variant),
                )
            )
    return out


# ---------------------------------------------------------------------------
# the harness


def check_ids() -> tuple:
    return tuple(_REGISTRY)


def _draw_points(seed_text: str, count: int) -> list:
    rng = random.Random(seed_text)
    points = []
    while len(points) < count:
        q0 = rng.randrange(2, P_MERSENNE - 1)
        t0 = rng.randrange(2, P_MERSENNE - 1)
        if q0 != t0:
            points.append(ModPointRing(q0, t0))
    return points


def _run_pairs(fn, params: dict, ring):
    """Returns (ok, comparisons, failing label, lhs, rhs)."""
    comps = fn(params, ring)
    for label, lhs, rhs in comps:
        if lhs != rhs:
            return False, comps, label, lhs, rhs
    return True, comps, None, None, None


def run_check(check_id: str, params: dict | None = None, *,
              mode: str | None = None, seed: int | None = None,
              points: int = MIN_POINTS) -> CheckReport:
    """Evaluate one check instance and report the outcome.

    Unknown ids raise CheckFailure.  Parameters that exceed the configured
    degree bound produce a skipped report rather than an error.
    """
    fn = _REGISTRY.get(check_id)
    if fn is None:
        raise CheckFailure(
            f"unknown check id {check_id!r}; registered: {', '.join(_REGISTRY)}"
        )
    params = dict(params or {})
    cfg = get_config()
    mode = mode or params.pop("mode", None) or cfg.mode
    if mode not in ("exact", "evaluated"):
        raise CheckFailure(f"unknown mode {mode!r}")
    seed = cfg.seed if seed is None else seed
    points = max(points, MIN_POINTS)
    recorded = dict(params)
    recorded["seed"] = seed
    started = time.perf_counter()

    def report(status, lhs, rhs, used_mode, witness=None):
        return CheckReport(
            check_id=check_id,
            params=recorded,
            status=status,
            lhs=lhs,
            rhs=rhs,
            elapsed=time.perf_counter() - started,
            mode=used_mode,
            witness=witness,
        )

    seed_text = f"{seed}|{check_id}|{json.dumps(_jsonable(params), sort_keys=True)}"
    try:
        lhs_texts: list = []
        rhs_texts: list = []
        for point in _draw_points(seed_text, points):
            ok, comps, label, lhs, rhs = _run_pairs(fn, params, point)
            if not ok:
                witness = _witness(label, lhs, rhs)
                witness["point"] = {"q0": point.q0, "t0": point.t0}
                return report("fail", _canon(lhs), _canon(rhs), "evaluated", witness)
            lhs_texts.extend(_canon(l) for _, l, _ in comps)
            rhs_texts.extend(_canon(r) for _, _, r in comps)
        if mode == "evaluated":
            return report("pass", _digest(lhs_texts), _digest(rhs_texts), "evaluated")
        ok, comps, label, lhs, rhs = _run_pairs(fn, params, QTRAT)
        if not ok:
            return report(
                "fail", _canon(lhs), _canon(rhs), "exact", _witness(label, lhs, rhs)
            )
        return report(
            "pass",
            _digest([_canon(l) for _, l, _ in comps]),
            _digest([_canon(r) for _, _, r in comps]),
            "exact",
        )
    except DegreeBoundError as exc:
        return report("skipped", "", "", mode, {"reason": str(exc)})


# ---------------------------------------------------------------------------
# suite profiles

PROFILES = ("quick", "full", "extended")


def _grid(profile: str) -> list:
    """Instance list for a profile: (check_id, params, mode) triples,
    in registration order of the check ids."""
    if profile not in PROFILES:
        raise CheckFailure(f"unknown profile {profile!r}; options: {', '.join(PROFILES)}")
    quick = profile == "quick"
    nmax = 4 if quick else 5
    trunc = 4 if quick else 6
    base = "evaluated" if quick else "exact"
    inst: list = []

    def add(check_id, mode=base, **params):
        inst.append((check_id, params, mode))

    for n in range(1, nmax + 1):
        for k in range(n):
            for alpha in compositions_of(n - k):
                add("comp_delta", k=k, alpha=alpha)
    if profile == "extended":
        for k in range(6):
            for alpha in compositions_of(6 - k):
                add("comp_delta", mode="evaluated", k=k, alpha=alpha)
    for n in range(1, nmax + 1):
        for k in range(n):
            add("delta_rise", n=n, k=k)
    if profile == "extended":
        for k in range(6):
            add("delta_rise", mode="evaluated", n=6, k=k)
    for n in range(1, nmax + 1):
        for k in range(n + 1):
            add("thm_2_1", n=n, k=k)
    for n in range(1, (4 if quick else 6) + 1):
        add("enk_sum", n=n)
    for d in range(1, nmax + 1):
        for k in range(trunc - d + 1):
            add("theta_nabla", k=k, d=d)
    for d in range(1, nmax + 1):
        add("five_term", d=d, u_order=trunc, v_order=trunc - d)
    for d in range(1, (2 if quick else 4) + 1):
        for k in range(min(3, trunc - d) + 1):
            for m in range(min(3, d + k) + 1):
                add("gen_series_coeff", m=m, k=k, d=d)
    for d in range(1, nmax + 1):
        add("gen_series_2", d=d, u_order=trunc, v_order=trunc - d)
    add("tau_unit", v_order=trunc)
    for a in (2, 3, 4):
        for alpha in ((), (1,), (2,), (1, 1)):
            if quick and a + sum(alpha) > 4:
                continue
            add("y_recursion", a=a, alpha=alpha)
    for k in (1, 2, 3):
        add("tau_commutations", k=k, degree=2 if quick else 3)
    for n in range(1, nmax + 1):
        for alpha in compositions_of(n):
            add("c_alpha_bridge", alpha=alpha)
    add("macdonald_axioms", max_size=4 if quick else 6)
    add("hecke", k=3, degree=2 if quick else 3)
    return inst


def run_suite(profile: str = "quick", *, threads: int | None = None,
              seed: int | None = None, jsonl=None) -> list:
    """Run every instance of a profile and return the reports in order.

    quick: evaluated mode, sizes <= 4.  full: exact, sizes <= 5.
    extended: full plus size-6 sweeps of the path identities in evaluated
    mode (exact size 6 is possible but far outside a test budget).
    Reports are aggregated in registration order regardless of thread
    scheduling; pass a file object via jsonl to stream them as JSON lines.
    """
    instances = _grid(profile)
    cfg = get_config()
    threads = cfg.threads if threads is None else threads

    def one(item):
        check_id, params, mode = item
        return run_check(check_id, params, mode=mode, seed=seed)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(one, instances))
    else:
        reports = [one(item) for item in instances]
    if jsonl is not None:
        write_jsonl(reports, jsonl)
    return reports


def write_jsonl(reports, fileobj) -> None:
    for rep in reports:
        fileobj.write(json.dumps(rep.to_json(), sort_keys=True))
        fileobj.write("\n")


def summary_table(reports) -> str:
    """Aggregate counts per check id, in registration order."""
    rows: "OrderedDict[str, list]" = OrderedDict()
    for cid in _REGISTRY:
        rows[cid] = [0, 0, 0, 0.0]
    for rep in reports:
        row = rows.setdefault(rep.check_id, [0, 0, 0, 0.0])
        idx = {"pass": 0, "fail": 1, "skipped": 2}[rep.status]
        row[idx] += 1
        row[3] += rep.elapsed
    lines = [f"{'check':<20} {'pass':>5} {'fail':>5} {'skip':>5} {'time':>9}"]
    tot = [0, 0, 0, 0.0]
    for cid, row in rows.items():
        if sum(row[:3]) == 0:
            continue
        lines.append(f"{cid:<20} {row[0]:>5} {row[1]:>5} {row[2]:>5} {row[3]:>8.2f}s")
        for i in range(3):
            tot[i] += row[i]
        tot[3] += row[3]
    lines.append(f"{'total':<20} {tot[0]:>5} {tot[1]:>5} {tot[2]:>5} {tot[3]:>8.2f}s")
    return "\n".join(lines)
