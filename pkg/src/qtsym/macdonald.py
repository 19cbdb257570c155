"""Modified Macdonald polynomials and the operator calculus built on them.

H~_mu is computed from the fillings formula: a sum over functions from the
cells of mu (French notation, row 1 at the bottom) to positive integers,
weighted q^inv t^maj.  Everything downstream -- nabla, Delta_f, Pi, Theta_f
and the E_{n,k} / C_alpha families -- acts through the expansion of a
symmetric function in the H~ basis, computed per degree by an exact matrix
inverse that is then mapped into whatever coefficient ring is in use.
"""

from __future__ import annotations

import hashlib
import json

from . import cache
from .config import check_degree
from .errors import DomainError, QtsymError
from .partitions import (
    arm,
    cells,
    coarm,
    coleg,
    conjugate,
    dominates,
    leg,
    n_stat,
    partitions_of,
)
from .qt import QT_M, Q, QtRat, RAT_ONE, q_pow, t_pow
from .rings import AuxPoly, AuxPolyRing, QTRAT
from .symfunc import Alphabet, SymFunc, e_, h_, q_pochhammer, s_

NABLA_SIGNED_DEFAULT = True


# ---------------------------------------------------------------------------
# diagram constants


def b_stat(mu: tuple) -> QtRat:
    """Sum of q^coarm t^coleg over the cells."""
    total = QtRat.from_int(0)
    for i, j in cells(mu):
        total = total + QtRat.monomial(1, coarm(i), coleg(j))
    return total


def t_stat(mu: tuple) -> QtRat:
    """Product of q^coarm t^coleg over the cells."""
    return q_pow(n_stat(conjugate(mu))) * t_pow(n_stat(mu))


def pi_stat(mu: tuple) -> QtRat:
    """Product of (1 - q^coarm t^coleg) over cells other than the corner."""
    total = RAT_ONE
    for i, j in cells(mu):
        if (i, j) == (1, 1):
            continue
        total = total * (RAT_ONE - QtRat.monomial(1, coarm(i), coleg(j)))
    return total


# ---------------------------------------------------------------------------
# fillings


def _multiset_perms(counts: dict):
    """Distinct sequences using each key `counts[k]` times."""
    total = sum(counts.values())

    def rec(prefix):
        if len(prefix) == total:
            yield tuple(prefix)
            return
        for k in sorted(counts):
            if counts[k]:
                counts[k] -= 1
                prefix.append(k)
                yield from rec(prefix)
                prefix.pop()
                counts[k] += 1

    yield from rec([])


def _diagram_data(mu: tuple):
    """Precomputed per-cell statistics and attacking pairs in reading order."""
    cs = list(cells(mu))
    index = {c: k for k, c in enumerate(cs)}
    south = [index.get((i, j - 1)) for i, j in cs]
    legp1 = [leg(mu, i, j) + 1 for i, j in cs]
    arms = [arm(mu, i, j) for i, j in cs]
    reading = sorted(range(len(cs)), key=lambda k: (-cs[k][1], cs[k][0]))
    rank = {k: r for r, k in enumerate(reading)}
    pairs = []
    for a in range(len(cs)):
        ia, ja = cs[a]
        for b in range(len(cs)):
            if a == b:
                continue
            ib, jb = cs[b]
            # same row, or consecutive rows with the upper cell strictly
            # to the right of the lower one
            attacking = (ja == jb and ia < ib) or (jb == ja - 1 and ib < ia)
            if attacking and rank[a] < rank[b]:
                pairs.append((a, b))
    return cs, south, legp1, arms, pairs


def _htilde_compute(mu: tuple) -> SymFunc:
    n = sum(mu)
    cs, south, legp1, arms, pairs = _diagram_data(mu)
    coeffs: dict = {}
    for lam in partitions_of(n):
        content = {v + 1: lam[v] for v in range(len(lam))}
        poly: dict = {}
        for w in _multiset_perms(content):
            des = [
                k
                for k in range(len(cs))
                if south[k] is not None and w[k] > w[south[k]]
            ]
            maj = sum(legp1[k] for k in des)
            inv = sum(1 for a, b in pairs if w[a] > w[b]) - sum(arms[k] for k in des)
            if inv < 0:
                raise QtsymError(f"negative inversion count for {mu}; convention bug")
            key = (inv, maj)
            poly[key] = poly.get(key, 0) + 1
        c = QtRat(poly)
        if c.is_zero():
            continue
        for nu, fr in _m_expansion(lam).items():
            cur = coeffs.get(nu)
            term = c * QtRat.from_fraction(fr)
            coeffs[nu] = term if cur is None else cur + term
    return SymFunc(QTRAT, coeffs)


def _m_expansion(lam: tuple):
    from .symfunc import _p_of_basis

    return _p_of_basis("m", lam)


_htilde_mem: dict = {}


def _cache_name(mu: tuple) -> str:
    return "htilde_" + "_".join(map(str, mu)) if mu else "htilde_empty"


def _payload_digest(schur_terms) -> str:
    blob = json.dumps(schur_terms, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _validate_payload(mu: tuple, obj) -> SymFunc | None:
    if not isinstance(obj, dict) or obj.get("mu") != list(mu):
        return None
    terms = obj.get("schur")
    if not isinstance(terms, list) or obj.get("digest") != _payload_digest(terms):
        return None
    out = SymFunc.zero(QTRAT)
    top_coeff = None
    try:
        for lam, cj in terms:
            c = QtRat.from_json(cj)
            if c.den != {(0, 0): 1}:
                return None
            if tuple(lam) == (sum(mu),):
                top_coeff = c
            out = out + c * s_(tuple(lam))
    except (QtsymError, ValueError, TypeError, KeyError):
        return None
    if mu and top_coeff != RAT_ONE:
        return None
    return out


def htilde(mu: tuple) -> SymFunc:
    """Modified Macdonald polynomial, exact coefficients."""
    mu = tuple(mu)
    if not all(isinstance(p, int) and p > 0 for p in mu) or list(mu) != sorted(
        mu, reverse=True
    ):
        raise DomainError(f"{mu} is not a partition")
    check_degree(sum(mu), f"htilde_{mu}")
    hit = _htilde_mem.get(mu)
    if hit is not None:
        return hit
    obj = cache.load_json("macdonald", _cache_name(mu))
    if obj is not None:
        out = _validate_payload(mu, obj)
        if out is not None:
            _htilde_mem[mu] = out
            return out
    out = _htilde_compute(mu)
    _htilde_mem[mu] = out
    sch = out.to_basis("s")
    terms = [
        [list(lam), sch[lam].to_json()]
        for lam in sorted(sch, key=lambda l: tuple(-x for x in l))
    ]
    cache.store_json(
        "macdonald",
        _cache_name(mu),
        {"mu": list(mu), "schur": terms, "digest": _payload_digest(terms)},
    )
    return out


def validate_htilde_axioms(mu: tuple) -> None:
    """Raise unless H~_mu satisfies the standard triangularity axioms."""
    mu = tuple(mu)
    f = htilde(mu)
    qside = f.pleth(Alphabet.x(RAT_ONE - Q)).to_basis("s")
    for lam in qside:
        if not dominates(lam, mu):
            raise QtsymError(f"q-triangularity fails for {mu}: s_{lam} appears")
    from .qt import T

    tside = f.pleth(Alphabet.x(RAT_ONE - T)).to_basis("s")
    muc = conjugate(mu)
    for lam in tside:
        if not dominates(lam, muc):
            raise QtsymError(f"t-triangularity fails for {mu}: s_{lam} appears")
    if mu and f.hall(s_((sum(mu),))) != RAT_ONE:
        raise QtsymError(f"normalization fails for {mu}")


# ---------------------------------------------------------------------------
# expansion in the H~ basis
#
# The H~_mu are orthogonal for the twisted pairing <f, omega(g[X M])>, with
# squared norm w_stat(mu); expansion coefficients come from one pairing per
# mu, which stays inside polynomial arithmetic.


def w_stat(mu: tuple) -> QtRat:
    """prod over cells of (q^arm - t^(leg+1)) (t^leg - q^(arm+1))."""
    total = RAT_ONE
    for i, j in cells(mu):
        a, l = arm(mu, i, j), leg(mu, i, j)
        total = total * (q_pow(a) - t_pow(l + 1)) * (t_pow(l) - q_pow(a + 1))
    return total


_star_dual_mem: dict = {}
_ring_star_dual_mem: dict = {}
_ring_htilde_mem: dict = {}


def _star_dual(mu: tuple) -> SymFunc:
    """omega(H~_mu[X M]) / w_stat(mu): pairing against it reads off the
    H~_mu coefficient directly."""
    hit = _star_dual_mem.get(mu)
    if hit is None:
        g = htilde(mu).pleth(Alphabet.x(QT_M)).omega()
        hit = (RAT_ONE / w_stat(mu)) * g
        _star_dual_mem[mu] = hit
    return hit


def _star_dual_in(mu: tuple, ring) -> SymFunc:
    if ring is QTRAT:
        return _star_dual(mu)
    key = (ring, mu)
    hit = _ring_star_dual_mem.get(key)
    if hit is None:
        hit = _star_dual(mu).to_ring(ring)
        _ring_star_dual_mem[key] = hit
    return hit


def htilde_in(mu: tuple, ring) -> SymFunc:
    if ring is QTRAT:
        return htilde(mu)
    key = (ring, tuple(mu))
    hit = _ring_htilde_mem.get(key)
    if hit is None:
        hit = htilde(mu).to_ring(ring)
        _ring_htilde_mem[key] = hit
    return hit


def expand_htilde(f: SymFunc) -> dict:
    """Coefficients {mu: ring element} of f in the H~ basis."""
    ring = f.ring
    if isinstance(ring, AuxPolyRing):
        # expand one base-ring slice per auxiliary monomial; the Hall
        # pairings then run over the base instead of dragging the
        # polynomial coefficients through every product
        pieces: dict = {}
        for lam, c in f.coeffs.items():
            for exp, b in c.terms.items():
                pieces.setdefault(exp, {})[lam] = b
        per_mu: dict = {}
        for exp, coeffs in pieces.items():
            for mu, c in expand_htilde(SymFunc(ring.base, coeffs)).items():
                per_mu.setdefault(mu, {})[exp] = c
        return {mu: AuxPoly(ring, terms) for mu, terms in per_mu.items()}
    out: dict = {}
    for n in f.degrees():
        part_n = f.homogeneous_part(n)
        for mu in partitions_of(n):
            c = part_n.hall(_star_dual_in(mu, f.ring))
            if not c.is_zero():
                out[mu] = c
    return out


def _eigen_apply(f: SymFunc, eigen) -> SymFunc:
    """Apply the operator with H~ eigenbasis and eigenvalue eigen(mu)."""
    ring = f.ring
    out = SymFunc.zero(ring)
    for mu, c in expand_htilde(f).items():
        lam = ring.from_qtrat(eigen(mu))
        if lam.is_zero():
            continue
        out = out + htilde_in(mu, ring) * (c * lam)
    return out


# ---------------------------------------------------------------------------
# operators


def nabla(f: SymFunc, signed: bool | None = None) -> SymFunc:
    """Eigenoperator sending H~_mu to (-1)^|mu| T_mu H~_mu (the sign is the
    default convention here; pass signed=False for bare T_mu)."""
    if signed is None:
        signed = NABLA_SIGNED_DEFAULT

    def eigen(mu):
        v = t_stat(mu)
        return -v if signed and sum(mu) % 2 else v

    return _eigen_apply(f, eigen)


def nabla_inv(f: SymFunc, signed: bool | None = None) -> SymFunc:
    if signed is None:
        signed = NABLA_SIGNED_DEFAULT

    def eigen(mu):
        v = RAT_ONE / t_stat(mu)
        return -v if signed and sum(mu) % 2 else v

    return _eigen_apply(f, eigen)


def delta(g: SymFunc, f: SymFunc) -> SymFunc:
    """Delta_g: H~_mu -> g[B_mu] H~_mu.  g must have exact coefficients."""
    _require_exact(g, "delta")
    return _eigen_apply(
        f, lambda mu: g.pleth(Alphabet.const(b_stat(mu))).scalar_part()
    )


def delta_prime(g: SymFunc, f: SymFunc) -> SymFunc:
    """Delta'_g: H~_mu -> g[B_mu - 1] H~_mu."""
    _require_exact(g, "delta_prime")
    return _eigen_apply(
        f, lambda mu: g.pleth(Alphabet.const(b_stat(mu) - RAT_ONE)).scalar_part()
    )


def pi_op(f: SymFunc) -> SymFunc:
    return _eigen_apply(f, pi_stat)


def pi_inv(f: SymFunc) -> SymFunc:
    return _eigen_apply(f, lambda mu: RAT_ONE / pi_stat(mu))


def theta(g: SymFunc, f: SymFunc) -> SymFunc:
    """Theta_g = Pi circ (multiply by g[X/M]) circ Pi^{-1}.

    The conjugation applies to the positive-degree part of f only; on the
    degree-0 part Theta_g acts as 0 except for the degree-0 part of g,
    which acts by plain multiplication.
    """
    _require_exact(g, "theta")
    if g.max_degree() == 0:
        # a scalar commutes through the conjugation and both branches
        return f * f.ring.from_qtrat(g.coeff_p(()))
    mult = g.pleth(Alphabet.x(RAT_ONE / QT_M))
    if f.ring is not QTRAT:
        mult = mult.to_ring(f.ring)
    const = f.homogeneous_part(0)
    plus = f - const
    out = pi_op(mult * pi_inv(plus)) if plus.coeffs else plus
    g0 = g.coeff_p(())
    if const.coeffs and not g0.is_zero():
        out = out + f.ring.from_qtrat(g0) * const
    return out


def theta_after_nabla(g: SymFunc, f: SymFunc) -> SymFunc:
    """theta(g, nabla(f)) with the two inner eigenpasses fused into one.

    Identical value; avoids rebuilding and re-expanding the intermediate
    nabla image, which dominates when coefficients are large.
    """
    _require_exact(g, "theta")
    if g.max_degree() == 0:
        return nabla(f) * f.ring.from_qtrat(g.coeff_p(()))
    ring = f.ring
    const = f.homogeneous_part(0)
    plus = f - const
    out = SymFunc.zero(ring)
    if plus.coeffs:
        signed = NABLA_SIGNED_DEFAULT

        def eigen(mu):
            v = t_stat(mu) / pi_stat(mu)
            return -v if signed and sum(mu) % 2 else v

        mult = g.pleth(Alphabet.x(RAT_ONE / QT_M))
        if ring is not QTRAT:
            mult = mult.to_ring(ring)
        out = pi_op(mult * _eigen_apply(plus, eigen))
    g0 = g.coeff_p(())
    if const.coeffs and not g0.is_zero():
        # nabla fixes degree 0, then only the degree-0 part of g acts
        out = out + ring.from_qtrat(g0) * const
    return out


def _require_exact(g: SymFunc, what: str):
    if g.ring is not QTRAT:
        raise DomainError(f"{what} needs an exact eigenvalue generator")


# ---------------------------------------------------------------------------
# creation operators and the E family


def cc_op(m: int, f: SymFunc) -> SymFunc:
    """The h-indexed creation operator of order m:

    (-1/q)^(m-1) * sum_r q^(-r) h_{m+r} (h_r[X(1-q)])-perp f
    """
    if m < 1:
        raise DomainError("creation index must be positive")
    if f.ring is not QTRAT:
        raise DomainError("creation operators are defined over exact coefficients")
    out = SymFunc.zero(QTRAT)
    top = f.max_degree()
    for r in range(top + 1):
        probe = h_(r).pleth(Alphabet.x(RAT_ONE - Q)) if r else SymFunc.one()
        piece = probe.perp(f)
        if piece.is_zero():
            continue
        out = out + QtRat.monomial(1, -r, 0) * (h_(m + r) * piece)
    sign = QtRat.monomial((-1) ** (m - 1), -(m - 1), 0)
    return sign * out


def c_alpha(alpha: tuple) -> SymFunc:
    """Composition-indexed family built by iterating the creation operator."""
    out = SymFunc.one()
    for a in reversed(tuple(alpha)):
        out = cc_op(a, out)
    return out


_enk_mem: dict = {}


def e_nk_all(n: int) -> tuple:
    """(E_{n,1}, ..., E_{n,n}) from the defining triangular system."""
    if n < 1:
        raise DomainError("the E family needs n >= 1")
    check_degree(n, f"e_nk({n})")
    hit = _enk_mem.get(n)
    if hit is not None:
        return hit
    es = []
    for j in range(1, n + 1):
        zj = QtRat.monomial(1, -j, 0)
        lhs = e_(n).pleth(Alphabet.x((RAT_ONE - zj) / (RAT_ONE - Q)))
        for k in range(1, j):
            cjk = q_pochhammer(zj, k) / q_pochhammer(Q, k)
            lhs = lhs - cjk * es[k - 1]
        cjj = q_pochhammer(zj, j) / q_pochhammer(Q, j)
        es.append((RAT_ONE / cjj) * lhs)
    out = tuple(es)
    _enk_mem[n] = out
    return out


def e_nk(n: int, k: int) -> SymFunc:
    if not 1 <= k <= n:
        raise DomainError(f"E_{{{n},{k}}} needs 1 <= k <= n")
    return e_nk_all(n)[k - 1]
