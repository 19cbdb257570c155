"""Symmetric functions over a pluggable scalar ring.

Internally every element is stored in the power-sum basis: a map from
partitions to ring coefficients.  Power sums multiply by concatenation,
every classical basis has a rational expansion in them, and both the Hall
pairing and plethysm act diagonally, which keeps the operator layer simple.

Transition data (e, h, s, m against p) is computed once per degree over
plain Fractions and then mapped into whatever coefficient ring asks for it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .config import check_degree
from .errors import DomainError
from .partitions import partitions_of, sort_to_partition, z_of
from .qt import Q, QtRat, RAT_ONE, RAT_ZERO
from .rings import QTRAT

BASES = ("e", "h", "p", "s", "m")


# ---------------------------------------------------------------------------
# transition expansions over Fraction, cached per degree


def _convolve(a: dict, b: dict) -> dict:
    out: dict = {}
    for lam, c in a.items():
        for mu, d in b.items():
            key = sort_to_partition(lam + mu)
            s = out.get(key, 0) + c * d
            if s:
                out[key] = s
            else:
                del out[key]
    return out


@lru_cache(maxsize=None)
def _p_of_e(n: int) -> dict:
    """e_n in the p basis (Newton's identity)."""
    if n == 0:
        return {(): Fraction(1)}
    out: dict = {}
    for k in range(1, n + 1):
        sign = Fraction((-1) ** (k - 1), n)
        for mu, c in _p_of_e(n - k).items():
            key = sort_to_partition(mu + (k,))
            out[key] = out.get(key, 0) + sign * c
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _p_of_h(n: int) -> dict:
    if n == 0:
        return {(): Fraction(1)}
    out: dict = {}
    for k in range(1, n + 1):
        for mu, c in _p_of_h(n - k).items():
            key = sort_to_partition(mu + (k,))
            out[key] = out.get(key, 0) + Fraction(c, n)
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _h_of_s(lam: tuple) -> dict:
    """Schur in the h basis via the length-by-length determinant."""
    ell = len(lam)
    if ell == 0:
        return {(): 1}
    out: dict = {}
    for sigma in itertools.permutations(range(ell)):
        inversions = sum(
            1 for a in range(ell) for b in range(a + 1, ell) if sigma[a] > sigma[b]
        )
        idx = [lam[i] - (i + 1) + (sigma[i] + 1) for i in range(ell)]
        if any(v < 0 for v in idx):
            continue
        key = sort_to_partition(tuple(v for v in idx if v > 0))
        out[key] = out.get(key, 0) + (-1) ** inversions
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _p_of_basis(basis: str, lam: tuple) -> dict:
    """Expansion of basis element indexed by lam into p, over Fraction."""
    if basis == "p":
        return {lam: Fraction(1)}
    if basis == "e":
        out = {(): Fraction(1)}
        for part in lam:
            out = _convolve(out, _p_of_e(part))
        return out
    if basis == "h":
        out = {(): Fraction(1)}
        for part in lam:
            out = _convolve(out, _p_of_h(part))
        return out
    if basis == "s":
        out: dict = {}
        for mu, c in _h_of_s(lam).items():
            for nu, d in _p_of_basis("h", mu).items():
                out[nu] = out.get(nu, 0) + c * d
        return {k: v for k, v in out.items() if v}
    if basis == "m":
        idx = partitions_of(sum(lam)).index(lam)
        row = _m_to_p_matrix(sum(lam))[idx]
        return {
            nu: c
            for nu, c in zip(partitions_of(sum(lam)), row)
            if c
        }
    raise DomainError(f"unknown basis {basis!r}")


@lru_cache(maxsize=None)
def _p_to_m_matrix(n: int) -> tuple:
    """Rows lam, cols mu: coefficient of m_mu in p_lam.

    Uses [m_mu] f = <f, h_mu> and <p_lam, p_nu> = z_lam delta, so the entry
    is z_lam times the p_lam coefficient of h_mu.
    """
    parts = partitions_of(n)
    rows = []
    for lam in parts:
        z = z_of(lam)
        row = []
        for mu in parts:
            row.append(z * _p_of_basis("h", mu).get(lam, Fraction(0)))
        rows.append(tuple(row))
    return tuple(rows)


def _invert_matrix(rows) -> tuple:
    """Gauss-Jordan inverse over Fraction."""
    n = len(rows)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise DomainError("singular transition matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


@lru_cache(maxsize=None)
def _m_to_p_matrix(n: int) -> tuple:
    return _invert_matrix(_p_to_m_matrix(n))


@lru_cache(maxsize=None)
def _p_to_basis_matrix(basis: str, n: int) -> tuple:
    """Rows mu, cols lam: write p-coefficients c_lam as basis coefficients
    d_mu via d = M c."""
    parts = partitions_of(n)
    if basis == "m":
        rows = _p_to_m_matrix(n)
        return tuple(
            tuple(rows[li][mi] for li in range(len(parts)))
            for mi in range(len(parts))
        )
    bt = [
        [_p_of_basis(basis, mu).get(lam, Fraction(0)) for mu in parts]
        for lam in parts
    ]
    return _invert_matrix(bt)


# ---------------------------------------------------------------------------
# ring-mapped transition rows, cached per (ring, basis, degree)

_ring_matrix_cache: dict = {}


def _ring_matrix(ring, basis: str, n: int):
    key = (ring, basis, n)
    hit = _ring_matrix_cache.get(key)
    if hit is None:
        hit = tuple(
            tuple(ring.from_fraction(x) for x in row)
            for row in _p_to_basis_matrix(basis, n)
        )
        _ring_matrix_cache[key] = hit
    return hit


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Alphabet:
    """A plethystic substitution target a*X + c + sum_i b_i v_i, with a, c,
    b_i in Q(q,t) and v_i auxiliary ring variables."""

    x_coeff: QtRat = RAT_ZERO
    scalar: QtRat = RAT_ZERO
    aux: tuple = ()

    @staticmethod
    def x(scale=RAT_ONE) -> "Alphabet":
        return Alphabet(x_coeff=_qt(scale))

    @staticmethod
    def const(value) -> "Alphabet":
        return Alphabet(scalar=_qt(value))

    def plus_const(self, value) -> "Alphabet":
        return Alphabet(self.x_coeff, self.scalar + _qt(value), self.aux)

    def plus_aux(self, coeff, name: str) -> "Alphabet":
        return Alphabet(self.x_coeff, self.scalar, self.aux + ((_qt(coeff), name),))

    def scaled(self, factor) -> "Alphabet":
        f = _qt(factor)
        return Alphabet(
            self.x_coeff * f, self.scalar * f, tuple((c * f, v) for c, v in self.aux)
        )


def _qt(x) -> QtRat:
    if isinstance(x, QtRat):
        return x
    return QtRat.from_int(x) if isinstance(x, int) else QtRat.from_fraction(x)


class SymFunc:
    """Symmetric function with coefficients in a scalar ring, stored in the
    power-sum basis.  Not necessarily homogeneous."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs: dict):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(
            self, "coeffs", {lam: c for lam, c in coeffs.items() if not c.is_zero()}
        )

    def __setattr__(self, *_):
        raise AttributeError("SymFunc is immutable")

    # -- constructors

    @classmethod
    def zero(cls, ring=QTRAT) -> "SymFunc":
        return cls(ring, {})

    @classmethod
    def one(cls, ring=QTRAT) -> "SymFunc":
        return cls(ring, {(): ring.one})

    @classmethod
    def from_basis(cls, basis: str, lam, ring=QTRAT) -> "SymFunc":
        lam = tuple(lam)
        if any(p <= 0 for p in lam) or list(lam) != sorted(lam, reverse=True):
            raise DomainError(f"{lam} is not a partition")
        check_degree(sum(lam), f"{basis}_{lam}")
        return cls(
            ring,
            {
                nu: ring.from_fraction(c)
                for nu, c in _p_of_basis(basis, lam).items()
            },
        )

    # -- scalar handling

    def _scalar(self, x):
        if isinstance(x, int):
            return self.ring.from_int(x)
        if isinstance(x, Fraction):
            return self.ring.from_fraction(x)
        if isinstance(x, QtRat) and self.ring is not QTRAT:
            return self.ring.from_qtrat(x)
        return x

    # -- basic algebra

    def __add__(self, other):
        if not isinstance(other, SymFunc):
            return NotImplemented
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            cur = out.get(lam)
            out[lam] = c if cur is None else cur + c
        return SymFunc(self.ring, out)

    def __sub__(self, other):
        if not isinstance(other, SymFunc):
            return NotImplemented
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            cur = out.get(lam)
            out[lam] = -c if cur is None else cur - c
        return SymFunc(self.ring, out)

    def __neg__(self):
        return SymFunc(self.ring, {lam: -c for lam, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, SymFunc):
            out: dict = {}
            for lam, c in self.coeffs.items():
                for mu, d in other.coeffs.items():
                    key = sort_to_partition(lam + mu)
                    cur = out.get(key)
                    prod = c * d
                    out[key] = prod if cur is None else cur + prod
            return SymFunc(self.ring, out)
        s = self._scalar(other)
        return SymFunc(self.ring, {lam: c * s for lam, c in self.coeffs.items()})

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative powers of symmetric functions")
        out = SymFunc.one(self.ring)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SymFunc)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ring, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    # -- grading

    def degrees(self) -> tuple:
        return tuple(sorted({sum(lam) for lam in self.coeffs}))

    def max_degree(self) -> int:
        return max((sum(lam) for lam in self.coeffs), default=0)

    def homogeneous_part(self, n: int) -> "SymFunc":
        return SymFunc(
            self.ring, {lam: c for lam, c in self.coeffs.items() if sum(lam) == n}
        )

    def truncate_degree(self, n: int) -> "SymFunc":
        return SymFunc(
            self.ring, {lam: c for lam, c in self.coeffs.items() if sum(lam) <= n}
        )

    def scalar_part(self):
        """Coefficient of the empty partition."""
        return self.coeffs.get((), self.ring.zero)

    # -- coefficient access and conversion

    def coeff_p(self, lam):
        return self.coeffs.get(tuple(lam), self.ring.zero)

    def to_basis(self, basis: str) -> dict:
        """Expansion coefficients {partition: ring element} in the basis."""
        if basis not in BASES:
            raise DomainError(f"unknown basis {basis!r}")
        if basis == "p":
            return dict(self.coeffs)
        out: dict = {}
        for n in self.degrees():
            parts = partitions_of(n)
            vec = [self.coeffs.get(lam, self.ring.zero) for lam in parts]
            mat = _ring_matrix(self.ring, basis, n)
            for mi, mu in enumerate(parts):
                total = self.ring.zero
                for li in range(len(parts)):
                    if not vec[li].is_zero():
                        total = total + mat[mi][li] * vec[li]
                if not total.is_zero():
                    out[mu] = total
        return out

    def coeff(self, basis: str, lam):
        return self.to_basis(basis).get(tuple(lam), self.ring.zero)

    def map_coeffs(self, fn, ring=None) -> "SymFunc":
        return SymFunc(ring or self.ring, {lam: fn(c) for lam, c in self.coeffs.items()})

    def to_ring(self, ring) -> "SymFunc":
        """Push exact coefficients into another ring via from_qtrat."""
        return SymFunc(ring, {lam: ring.from_qtrat(c) for lam, c in self.coeffs.items()})

    def split_aux_var(self, name: str) -> dict:
        """Write self = sum_j name^j * F_j; returns {j: F_j} over the ring
        without that auxiliary variable."""
        small = self.ring.drop(name)
        buckets: dict = {}
        for lam, c in self.coeffs.items():
            for j, part in self.ring.split_var(c, name).items():
                buckets.setdefault(j, {})[lam] = part
        return {j: SymFunc(small, co) for j, co in sorted(buckets.items())}

    # -- the Hall pairing and standard involutions

    def hall(self, other: "SymFunc"):
        """<self, other> with <p_lam, p_mu> = z_lam [lam = mu]."""
        if self.ring != other.ring:
            raise DomainError("Hall pairing across different rings")
        total = self.ring.zero
        for lam, c in self.coeffs.items():
            d = other.coeffs.get(lam)
            if d is not None:
                total = total + self.ring.from_int(z_of(lam)) * c * d
        return total

    def omega(self) -> "SymFunc":
        """p_lam -> (-1)^(|lam| - length) p_lam."""
        return SymFunc(
            self.ring,
            {
                lam: (c if (sum(lam) - len(lam)) % 2 == 0 else -c)
                for lam, c in self.coeffs.items()
            },
        )

    def omegabar(self) -> "SymFunc":
        """Send F[X] to F[-X] and invert q and t in every coefficient.

        On the alphabet this is p_k -> -p_k, so a p_lam term picks up
        (-1)**len(lam); it differs from omega() by (-1)**degree.
        """
        out = {}
        for lam, c in self.coeffs.items():
            c2 = self.ring.invert_vars(c)
            out[lam] = c2 if len(lam) % 2 == 0 else -c2
        return SymFunc(self.ring, out)

    def perp(self, target: "SymFunc") -> "SymFunc":
        """Apply the Hall adjoint of multiplication by self to target."""
        if self.ring != target.ring:
            raise DomainError("perp across different rings")
        out: dict = {}
        for lam, c in self.coeffs.items():
            for mu, d in target.coeffs.items():
                res = _strip_parts(mu, lam)
                if res is None:
                    continue
                nu, mult = res
                cur = out.get(nu)
                term = (c * d) * self.ring.from_int(mult)
                out[nu] = term if cur is None else cur + term
        return SymFunc(self.ring, out)

    # -- plethysm

    def pleth(self, alphabet: Alphabet) -> "SymFunc":
        """Plethystic substitution of the alphabet into self.

        Coefficients of self are inert; every p_m distributes over the
        alphabet with q -> q^m, t -> t^m on its Q(q,t) data and v -> v^m on
        auxiliary variables.
        """
        ring = self.ring
        if alphabet.aux and not hasattr(ring, "gen"):
            raise DomainError("auxiliary alphabet terms need an auxiliary ring")
        out: dict = {}
        xc, sc = alphabet.x_coeff, alphabet.scalar
        scalar_cache: dict = {}

        def scalar_at(m: int):
            hit = scalar_cache.get(m)
            if hit is None:
                hit = ring.from_qtrat(sc.adams(m)) if not sc.is_zero() else ring.zero
                for cf, name in alphabet.aux:
                    hit = hit + ring.from_qtrat(cf.adams(m)) * ring.gen(name) ** m
                scalar_cache[m] = hit
            return hit

        x_cache: dict = {}

        def x_at(m: int):
            hit = x_cache.get(m)
            if hit is None:
                hit = ring.from_qtrat(xc.adams(m))
                x_cache[m] = hit
            return hit

        for lam, c in self.coeffs.items():
            partial = {(): c}
            for m in lam:
                a = None if xc.is_zero() else x_at(m)
                b = scalar_at(m)
                nxt: dict = {}
                for mu, cc in partial.items():
                    if a is not None:
                        key = sort_to_partition(mu + (m,))
                        term = cc * a
                        cur = nxt.get(key)
                        nxt[key] = term if cur is None else cur + term
                    if not b.is_zero():
                        term = cc * b
                        cur = nxt.get(mu)
                        nxt[mu] = term if cur is None else cur + term
                partial = nxt
            for mu, cc in partial.items():
                cur = out.get(mu)
                out[mu] = cc if cur is None else cur + cc
        return SymFunc(ring, out)

    # -- presentation

    def __repr__(self):
        return self.str_in("p")

    def str_in(self, basis: str) -> str:
        terms = self.to_basis(basis)
        if not terms:
            return "0"
        bits = []
        for lam in sorted(terms, key=lambda l: (sum(l), tuple(-x for x in l))):
            c = terms[lam]
            name = f"{basis}[{','.join(map(str, lam))}]" if lam else "1"
            bits.append(f"({c})*{name}" if lam else f"({c})")
        return " + ".join(bits)

    def to_json(self, basis: str = "s") -> dict:
        if self.ring is not QTRAT:
            raise DomainError("JSON export is defined for exact coefficients")
        terms = self.to_basis(basis)
        return {
            "basis": basis,
            "terms": [
                [list(lam), terms[lam].to_json()]
                for lam in sorted(terms, key=lambda l: (sum(l), tuple(-x for x in l)))
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "SymFunc":
        out = cls.zero(QTRAT)
        for lam, cj in obj["terms"]:
            out = out + QtRat.from_json(cj) * cls.from_basis(obj["basis"], tuple(lam))
        return out

    def latex(self, basis: str = "s") -> str:
        terms = self.to_basis(basis)
        if not terms:
            return "0"
        bits = []
        for lam in sorted(terms, key=lambda l: (sum(l), tuple(-x for x in l))):
            sub = "".join(map(str, lam)) if all(p < 10 for p in lam) else ",".join(map(str, lam))
            name = f"{basis}_{{{sub}}}" if lam else ""
            bits.append(f"\\left({terms[lam]}\\right){name}" if name else f"\\left({terms[lam]}\\right)")
        return " + ".join(bits)


def _strip_parts(mu: tuple, lam: tuple):
    """Remove the parts of lam from mu; returns (rest, multiplicity factor)
    where the factor is prod over removals of (part * remaining multiplicity),
    or None if lam is not a sub-multiset."""
    counts: dict = {}
    for p in mu:
        counts[p] = counts.get(p, 0) + 1
    mult = 1
    for k in lam:
        c = counts.get(k, 0)
        if not c:
            return None
        mult *= k * c
        counts[k] = c - 1
    rest = []
    for p in sorted(counts, reverse=True):
        rest.extend([p] * counts[p])
    return tuple(rest), mult


# ---------------------------------------------------------------------------
# convenient constructors


def p_(lam, ring=QTRAT) -> SymFunc:
    return SymFunc.from_basis("p", _as_partition(lam), ring)


def e_(lam, ring=QTRAT) -> SymFunc:
    return SymFunc.from_basis("e", _as_partition(lam), ring)


def h_(lam, ring=QTRAT) -> SymFunc:
    return SymFunc.from_basis("h", _as_partition(lam), ring)


def s_(lam, ring=QTRAT) -> SymFunc:
    return SymFunc.from_basis("s", _as_partition(lam), ring)


def m_(lam, ring=QTRAT) -> SymFunc:
    return SymFunc.from_basis("m", _as_partition(lam), ring)


def _as_partition(lam) -> tuple:
    if isinstance(lam, int):
        return (lam,) if lam else ()
    return tuple(lam)


def q_pochhammer(a: QtRat, k: int) -> QtRat:
    """(a; q)_k = prod_{i=0}^{k-1} (1 - a q^i)."""
    out = RAT_ONE
    cur = a
    for _ in range(k):
        out = out * (RAT_ONE - cur)
        cur = cur * Q
    return out
