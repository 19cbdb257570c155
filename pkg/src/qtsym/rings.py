"""Coefficient rings for symmetric-function computations.

Everything downstream is generic over a scalar ring:

* ``QTRAT`` -- exact elements of Q(q,t);
* ``ModPointRing`` -- the image of Q(q,t) under evaluation at a fixed
  residue point (q0, t0) mod a 61-bit prime, for fast randomized checks;
* ``AuxPolyRing`` -- polynomials in auxiliary commuting variables
  (y_1..y_k, u) over either base, optionally truncated in a series variable.

A ring exposes zero/one, from_int / from_fraction / from_qtrat, and an
``exact`` flag; elements do arithmetic through operators and answer
``is_zero``.  Only the exact ring supports inverting q and t, since a point
value does not determine the value at the inverted point.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, EvalPointError
from .qt import QtRat, RAT_ONE, RAT_ZERO

P_MERSENNE = (1 << 61) - 1


class QtRatRing:
    """The exact field Q(q,t); elements are QtRat."""

    name = "qtrat"
    exact = True
    zero = RAT_ZERO
    one = RAT_ONE

    def from_int(self, n: int) -> QtRat:
        return QtRat.from_int(n)

    def from_fraction(self, f) -> QtRat:
        return QtRat.from_fraction(f)

    def from_qtrat(self, x: QtRat) -> QtRat:
        return x

    def invert_vars(self, el: QtRat) -> QtRat:
        return el.invert_vars()

    def __repr__(self):
        return "QTRAT"


QTRAT = QtRatRing()


class ModScalar:
    """Residue mod 2^61 - 1."""

    __slots__ = ("v",)

    def __init__(self, v: int):
        object.__setattr__(self, "v", v % P_MERSENNE)

    def __setattr__(self, *_):
        raise AttributeError("ModScalar is immutable")

    def is_zero(self) -> bool:
        return self.v == 0

    def __add__(self, other):
        o = _mod_coerce(other)
        if o is NotImplemented:
            return o
        return ModScalar(self.v + o.v)

    __radd__ = __add__

    def __sub__(self, other):
        o = _mod_coerce(other)
        if o is NotImplemented:
            return o
        return ModScalar(self.v - o.v)

    def __rsub__(self, other):
        o = _mod_coerce(other)
        if o is NotImplemented:
            return o
        return ModScalar(o.v - self.v)

    def __neg__(self):
        return ModScalar(-self.v)

    def __mul__(self, other):
        o = _mod_coerce(other)
        if o is NotImplemented:
            return o
        return ModScalar(self.v * o.v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _mod_coerce(other)
        if o is NotImplemented:
            return o
        if o.v == 0:
            raise DomainError("division by zero residue")
        return ModScalar(self.v * pow(o.v, P_MERSENNE - 2, P_MERSENNE))

    def __pow__(self, n: int):
        if n < 0:
            return ModScalar(1) / self**(-n)
        return ModScalar(pow(self.v, n, P_MERSENNE))

    def __eq__(self, other):
        o = _mod_coerce(other)
        if o is NotImplemented:
            return o
        return self.v == o.v

    def __hash__(self):
        return hash(("mod61", self.v))

    def __repr__(self):
        return f"{self.v}#"


def _mod_coerce(x):
    if isinstance(x, ModScalar):
        return x
    if isinstance(x, int):
        return ModScalar(x)
    if isinstance(x, Fraction):
        return ModScalar(x.numerator) / ModScalar(x.denominator)
    return NotImplemented


class ModPointRing:
    """Q(q,t) evaluated at q = q0, t = t0 over GF(2^61 - 1)."""

    name = "modpoint"
    exact = False
    zero = ModScalar(0)
    one = ModScalar(1)

    def __init__(self, q0: int, t0: int):
        q0 %= P_MERSENNE
        t0 %= P_MERSENNE
        if q0 in (0,) or t0 in (0,):
            raise DomainError("evaluation point must be nonzero mod p")
        self.q0 = q0
        self.t0 = t0

    def from_int(self, n: int) -> ModScalar:
        return ModScalar(n)

    def from_fraction(self, f) -> ModScalar:
        f = Fraction(f)
        return ModScalar(f.numerator) / ModScalar(f.denominator)

    def _eval_terms(self, terms: dict) -> int:
        total = 0
        for (i, j), c in terms.items():
            total += c * pow(self.q0, i, P_MERSENNE) * pow(self.t0, j, P_MERSENNE)
        return total % P_MERSENNE

    def from_qtrat(self, x: QtRat) -> ModScalar:
        d = self._eval_terms(x.den)
        if d == 0:
            raise EvalPointError(
                f"denominator vanishes at the residue point (q0={self.q0}, t0={self.t0})"
            )
        return ModScalar(self._eval_terms(x.num) * pow(d, P_MERSENNE - 2, P_MERSENNE))

    def invert_vars(self, el):
        raise DomainError(
            "cannot invert q,t on a point value; rerun at the inverted point instead"
        )

    def inverted_point(self) -> "ModPointRing":
        return ModPointRing(
            pow(self.q0, P_MERSENNE - 2, P_MERSENNE),
            pow(self.t0, P_MERSENNE - 2, P_MERSENNE),
        )

    def __eq__(self, other):
        return (
            isinstance(other, ModPointRing)
            and self.q0 == other.q0
            and self.t0 == other.t0
        )

    def __hash__(self):
        return hash(("modpoint", self.q0, self.t0))

    def __repr__(self):
        return f"ModPointRing(q0={self.q0}, t0={self.t0})"


class AuxPoly:
    """Polynomial in a ring's auxiliary variables; terms map exponent
    tuples to base-ring coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: "AuxPolyRing", terms: dict):
        object.__setattr__(self, "ring", ring)
        clean = {}
        for exps, c in terms.items():
            if not _base_is_zero(c) and ring._within_trunc(exps):
                clean[exps] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *_):
        raise AttributeError("AuxPoly is immutable")

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other) -> "AuxPoly":
        if isinstance(other, AuxPoly):
            if other.ring != self.ring:
                raise DomainError(
                    f"mixing auxiliary rings {self.ring!r} and {other.ring!r}"
                )
            return other
        c = self.ring._coerce_base(other)
        if c is NotImplemented:
            return NotImplemented
        return self.ring.const(c)

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e, self.ring.base.zero) + c
            if _base_is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return AuxPoly(self.ring, out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return AuxPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if not self.ring._within_trunc(e):
                    continue
                s = out.get(e, self.ring.base.zero) + c1 * c2
                if _base_is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return AuxPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative powers of auxiliary polynomials")
        out = self.ring.one
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self.terms == o.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def constant_term(self):
        zero_exp = (0,) * len(self.ring.vars)
        return self.terms.get(zero_exp, self.ring.base.zero)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, key=lambda ex: (sum(ex), ex), reverse=True):
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}")
                for v, k in zip(self.ring.vars, e)
                if k
            )
            c = self.terms[e]
            bits.append(f"({c!r})" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


def _base_is_zero(c) -> bool:
    return c.is_zero() if hasattr(c, "is_zero") else not c


class AuxPolyRing:
    """Ring of polynomials over `base` in named auxiliary variables.

    `trunc` maps a variable name to a maximum exponent; terms beyond the
    bound are dropped on construction and multiplication, giving exact
    arithmetic on truncated power series in that variable.
    """

    def __init__(self, variables, base=QTRAT, trunc: dict | None = None):
        self.vars = tuple(variables)
        if len(set(self.vars)) != len(self.vars):
            raise DomainError("duplicate auxiliary variable names")
        self.base = base
        self.trunc = dict(trunc or {})
        for v in self.trunc:
            if v not in self.vars:
                raise DomainError(f"truncation on unknown variable {v!r}")
        self._index = {v: i for i, v in enumerate(self.vars)}
        self._trunc_vec = tuple(self.trunc.get(v) for v in self.vars)

    @property
    def exact(self):
        return self.base.exact

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, AuxPolyRing)
            and self.vars == other.vars
            and self.base == other.base
            and self.trunc == other.trunc
        )

    def __hash__(self):
        return hash((self.vars, self.base, tuple(sorted(self.trunc.items()))))

    def __repr__(self):
        extra = f", trunc={self.trunc}" if self.trunc else ""
        return f"AuxPolyRing({list(self.vars)}, base={self.base!r}{extra})"

    def _within_trunc(self, exps) -> bool:
        for e, bound in zip(exps, self._trunc_vec):
            if bound is not None and e > bound:
                return False
        return True

    def _coerce_base(self, x):
        if isinstance(x, int):
            return self.base.from_int(x)
        if isinstance(x, Fraction):
            return self.base.from_fraction(x)
        if isinstance(x, QtRat):
            return self.base.from_qtrat(x)
        if isinstance(x, ModScalar) and isinstance(self.base, ModPointRing):
            return x
        return NotImplemented

    # -- ring protocol

    @property
    def zero(self) -> AuxPoly:
        return AuxPoly(self, {})

    @property
    def one(self) -> AuxPoly:
        return self.const(self.base.one)

    def const(self, c) -> AuxPoly:
        return AuxPoly(self, {(0,) * len(self.vars): c})

    def from_int(self, n: int) -> AuxPoly:
        return self.const(self.base.from_int(n))

    def from_fraction(self, f) -> AuxPoly:
        return self.const(self.base.from_fraction(f))

    def from_qtrat(self, x: QtRat) -> AuxPoly:
        return self.const(self.base.from_qtrat(x))

    def invert_vars(self, el):
        raise DomainError("cannot invert q,t inside an auxiliary-variable ring")

    def gen(self, name: str) -> AuxPoly:
        if name not in self._index:
            raise DomainError(f"unknown auxiliary variable {name!r}")
        e = [0] * len(self.vars)
        e[self._index[name]] = 1
        return AuxPoly(self, {tuple(e): self.base.one})

    # -- structural maps

    def lift(self, el: AuxPoly) -> AuxPoly:
        """Reinterpret an element of a ring whose variables are a subset
        of this one's (matched by name, same base)."""
        if el.ring == self:
            return el
        if el.ring.base != self.base:
            raise DomainError("cannot lift across base rings")
        try:
            positions = [self._index[v] for v in el.ring.vars]
        except KeyError as exc:
            raise DomainError(f"variable {exc.args[0]!r} missing in target ring")
        out = {}
        for exps, c in el.terms.items():
            e = [0] * len(self.vars)
            for pos, k in zip(positions, exps):
                e[pos] = k
            out[tuple(e)] = c
        return AuxPoly(self, out)

    def drop(self, name: str) -> "AuxPolyRing":
        if name not in self._index:
            raise DomainError(f"unknown auxiliary variable {name!r}")
        return AuxPolyRing(
            tuple(v for v in self.vars if v != name),
            self.base,
            {v: b for v, b in self.trunc.items() if v != name},
        )

    def split_var(self, el: AuxPoly, name: str) -> dict:
        """Decompose el = sum_j name^j * G_j with G_j free of `name`;
        returns {j: G_j} with G_j in the ring without `name`."""
        idx = self._index[name]
        small = self.drop(name)
        buckets: dict = {}
        for exps, c in el.terms.items():
            j = exps[idx]
            rest = exps[:idx] + exps[idx + 1:]
            bucket = buckets.setdefault(j, {})
            bucket[rest] = bucket.get(rest, small.base.zero) + c
        return {j: AuxPoly(small, terms) for j, terms in sorted(buckets.items())}

    def subst(self, el: AuxPoly, mapping: dict, target: "AuxPolyRing") -> AuxPoly:
        """Monomial substitution into `target`: mapping sends a variable
        name to (scalar, new_name) meaning var -> scalar * new_name, or to
        (scalar, None) meaning var -> scalar.  A scalar of None means 1;
        unmapped variables keep their names."""
        out: dict = {}
        for exps, c in el.terms.items():
            coeff = c
            e = [0] * len(target.vars)
            for v, k in zip(self.vars, exps):
                if not k:
                    continue
                scalar, new = mapping.get(v, (None, v))
                if scalar is not None:
                    s = target._coerce_base(scalar)
                    if s is NotImplemented:
                        s = scalar
                    coeff = coeff * s**k
                if new is not None:
                    if new not in target._index:
                        raise DomainError(f"variable {new!r} missing in target ring")
                    e[target._index[new]] += k
            key = tuple(e)
            cur = out.get(key)
            out[key] = coeff if cur is None else cur + coeff
        return AuxPoly(target, out)


def y_name(i: int) -> str:
    return f"y{i}"


def y_ring(k: int, base=QTRAT, extra=(), trunc: dict | None = None) -> AuxPolyRing:
    """The coefficient ring for k-partially-symmetric functions."""
    return AuxPolyRing(tuple(y_name(i) for i in range(1, k + 1)) + tuple(extra), base, trunc)
