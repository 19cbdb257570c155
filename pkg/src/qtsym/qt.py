"""Exact sparse arithmetic in Z[q,t] and its fraction field Q(q,t).

A polynomial is a sparse map {(i, j): c} holding terms c*q^i*t^j with
arbitrary-precision integer coefficients.  QtRat keeps fractions normalized:
gcd(num, den) is a unit and the denominator's leading coefficient (in graded
lexicographic order with q > t) is positive, so equal values have identical
representations.

Polynomial gcd works recursively: a polynomial is viewed as a polynomial in q
with coefficients in Z[t], reduced to integer content times primitive part,
and the primitive parts run through a subresultant pseudo-remainder sequence.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import DomainError, EvalPointError, ExactDivisionError

Mono = tuple  # (q_exponent, t_exponent)

# ---------------------------------------------------------------------------
# raw sparse-dict helpers (terms dict -> terms dict, no wrapper objects)


def _monokey(m: Mono):
    # graded lex with q > t: compare total degree, then q exponent
    i, j = m
    return (i + j, i)


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _pneg(a: dict) -> dict:
    return {m: -c for m, c in a.items()}


def _psub(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, 0) - c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


# Large products and exact divisions run through Kronecker packing: the
# evaluation t -> 2^w, q -> 2^(w*stride) is a ring map into Z, injective on
# coefficients while they stay under 2^(w-1) in magnitude, so one machine
# big-integer operation replaces a quadratic coefficient loop.


def _kwidth(bound: int) -> int:
    """Byte-aligned digit width holding signed values up to bound."""
    return (bound.bit_length() + 9) & ~7


def _kpack(p: dict, w: int, stride: int) -> int:
    nb = w >> 3
    size = nb * (max(i * stride + j for i, j in p) + 1)
    pos = bytearray(size)
    neg = bytearray(size)
    for (i, j), c in p.items():
        o = nb * (i * stride + j)
        if c > 0:
            pos[o:o + nb] = c.to_bytes(nb, "little")
        else:
            neg[o:o + nb] = (-c).to_bytes(nb, "little")
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _kdigits(n: int, w: int, count: int) -> list:
    """Balanced base-2^w digits of n, at least count slots, via one bias add."""
    nb = w >> 3
    count = max(count, (abs(n).bit_length() + w - 1) // w + 1)
    half = 1 << (w - 1)
    m = n + int.from_bytes((b"\x00" * (nb - 1) + b"\x80") * count, "little")
    raw = m.to_bytes(nb * count, "little")
    return [
        int.from_bytes(raw[o:o + nb], "little") - half
        for o in range(0, nb * count, nb)
    ]


def _kunpack(n: int, w: int, stride: int, count: int) -> dict:
    out = {}
    for k, c in enumerate(_kdigits(n, w, count)):
        if c:
            out[divmod(k, stride)] = c
    return out


def _kpack_u(p: list, w: int) -> int:
    nb = w >> 3
    pos = bytearray(nb * len(p))
    neg = bytearray(nb * len(p))
    for k, c in enumerate(p):
        if c > 0:
            pos[nb * k:nb * (k + 1)] = c.to_bytes(nb, "little")
        elif c:
            neg[nb * k:nb * (k + 1)] = (-c).to_bytes(nb, "little")
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _pmul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    if len(b) < len(a):
        a, b = b, a
    if len(a) * len(b) >= 64:
        dqa, dta = _pdeg(a)
        dqb, dtb = _pdeg(b)
        st = dta + dtb + 1
        ha = max(abs(c) for c in a.values())
        hb = max(abs(c) for c in b.values())
        w = _kwidth(len(a) * ha * hb)
        n = _kpack(a, w, st) * _kpack(b, w, st)
        return _kunpack(n, w, st, (dqa + dqb) * st + dta + dtb + 1)
    out: dict = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            m = (i1 + i2, j1 + j2)
            s = out.get(m, 0) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def _pscale(a: dict, c: int) -> dict:
    if c == 0:
        return {}
    if c == 1:
        return dict(a)
    return {m: k * c for m, k in a.items()}


def _pshift(a: dict, di: int, dj: int) -> dict:
    if not di and not dj:
        return dict(a)
    return {(i + di, j + dj): c for (i, j), c in a.items()}


def _pminexp(a: dict) -> Mono:
    return (min(i for i, _ in a), min(j for _, j in a))


def _pdeg(a: dict) -> Mono:
    return (max(i for i, _ in a), max(j for _, j in a))


def _plead(a: dict):
    m = max(a, key=_monokey)
    return m, a[m]


def _pcontent(a: dict) -> int:
    g = 0
    for c in a.values():
        g = math.gcd(g, c)
        if g == 1:
            return 1
    return g


def _padams(a: dict, k: int) -> dict:
    return {(i * k, j * k): c for (i, j), c in a.items()}


def _peval(a: dict, q0: Fraction, t0: Fraction) -> Fraction:
    total = Fraction(0)
    for (i, j), c in a.items():
        total += c * q0**i * t0**j
    return total


def _pis_const(a: dict):
    if not a:
        return 0
    if len(a) == 1 and (0, 0) in a:
        return a[(0, 0)]
    return None


# ---------------------------------------------------------------------------
# gcd machinery: dense recursive representation
#
# A Z[t] element is a dense int list (index = t exponent, no trailing zeros).
# A Z[t][q] element is a dense list of Z[t] elements (index = q exponent).
# The subresultant loop below is generic over a small coefficient-ring
# adapter providing add/sub/mul/divexact/gcd on those representations.


def _utrim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


class _ZOps:
    zero = 0
    one = 1

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def pow(a, n):
        return a**n

    @staticmethod
    def divexact(a, b):
        q, r = divmod(a, b)
        if r:
            raise ExactDivisionError("inexact integer division in gcd")
        return q

    @staticmethod
    def gcd(a, b):
        return math.gcd(a, b)


def _prem(A: list, B: list, R) -> list:
    """Pseudo-remainder of dense polys A, B over the ring adapter R."""
    dB = len(B) - 1
    lb = B[-1]
    r = list(A)
    e = len(A) - len(B) + 1
    while r and len(r) - 1 >= dB:
        lr = r[-1]
        shift = len(r) - len(B)
        r = [R.mul(lb, c) for c in r]
        for i, bc in enumerate(B):
            r[i + shift] = R.sub(r[i + shift], R.mul(lr, bc))
        while r and R.is_zero(r[-1]):
            r.pop()
        e -= 1
    for _ in range(e):
        r = [R.mul(lb, c) for c in r]
    return r


def _content(A: list, R):
    g = R.zero
    for c in A:
        if not R.is_zero(c):
            g = c if R.is_zero(g) else R.gcd(g, c)
    return g


def _primitive(A: list, R) -> list:
    g = _content(A, R)
    return [R.divexact(c, g) for c in A]


def _subres_gcd(A: list, B: list, R) -> list:
    """Gcd of dense polynomials over R (coefficient ring with gcd).

    Contents are split off, the primitive parts run through the subresultant
    PRS, and content gcd times primitive gcd is returned (sign unnormalized).
    """
    if not A:
        return list(B)
    if not B:
        return list(A)
    ca, cb = _content(A, R), _content(B, R)
    cg = R.gcd(ca, cb) if not isinstance(ca, int) else math.gcd(ca, cb)
    A = [R.divexact(c, ca) for c in A]
    B = [R.divexact(c, cb) for c in B]
    if len(A) < len(B):
        A, B = B, A
    g = R.one
    h = R.one
    while True:
        delta = len(A) - len(B)
        rem = _prem(A, B, R)
        if not rem:
            pp = _primitive(B, R)
            break
        if len(rem) == 1:
            pp = [R.one]
            break
        divisor = R.mul(g, R.pow(h, delta))
        A, B = B, [R.divexact(c, divisor) for c in rem]
        g = A[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = R.divexact(R.pow(g, delta), R.pow(h, delta - 1))
    if isinstance(cg, int):
        return [R.mul(c, cg) for c in pp] if cg != 1 else pp
    return [R.mul(c, cg) for c in pp]


def _balanced_digits(n: int, xi: int) -> list:
    """n = sum digits[k] * xi^k with digits in (-xi/2, xi/2]."""
    out = []
    while n:
        r = n % xi
        if 2 * r > xi:
            r -= xi
        out.append(r)
        n = (n - r) // xi
    return out


def _heu_gcd_zt(A: list, B: list) -> list | None:
    """Evaluation gcd of dense nonzero Z[t] polys; None when uncertified.

    t is evaluated at an odd point past twice the Cauchy root bound of the
    lower input, so once the balanced-digit lift of the integer gcd divides
    both primitive parts it must be their gcd: a nonconstant cofactor would
    take a value of magnitude above xi/2 at the point, yet has to divide
    the lift's integer content, which balanced digits keep below xi/2.
    """
    ca = 0
    for c in A:
        ca = math.gcd(ca, c)
    cb = 0
    for c in B:
        cb = math.gcd(cb, c)
    A0 = [c // ca for c in A] if ca > 1 else A
    B0 = [c // cb for c in B] if cb > 1 else B
    cg = math.gcd(ca, cb)
    xi = 2 * min(max(abs(c) for c in A0), max(abs(c) for c in B0)) + 29
    for _ in range(3):
        av = 0
        for c in reversed(A0):
            av = av * xi + c
        bv = 0
        for c in reversed(B0):
            bv = bv * xi + c
        g = _balanced_digits(math.gcd(av, bv), xi)
        cc = 0
        for c in g:
            cc = math.gcd(cc, c)
        if cc > 1:
            g = [c // cc for c in g]
        try:
            _ZTOps.divexact(A0, g)
            _ZTOps.divexact(B0, g)
        except ExactDivisionError:
            # the gcd's digits outran xi; squaring keeps it odd and sound
            xi = xi * xi
            continue
        return [c * cg for c in g] if cg > 1 else g
    return None


class _ZTOps:
    """Dense Z[t] polynomials as int lists."""

    zero: list = []
    one = [1]

    @staticmethod
    def is_zero(a):
        return not a

    @staticmethod
    def add(a, b):
        n = max(len(a), len(b))
        out = [0] * n
        for i, c in enumerate(a):
            out[i] = c
        for i, c in enumerate(b):
            out[i] += c
        return _utrim(out)

    @staticmethod
    def sub(a, b):
        n = max(len(a), len(b))
        out = [0] * n
        for i, c in enumerate(a):
            out[i] = c
        for i, c in enumerate(b):
            out[i] -= c
        return _utrim(out)

    @staticmethod
    def mul(a, b):
        if not a or not b:
            return []
        if len(a) * len(b) >= 64:
            ha = max(abs(c) for c in a)
            hb = max(abs(c) for c in b)
            w = _kwidth(min(len(a), len(b)) * ha * hb)
            n = _kpack_u(a, w) * _kpack_u(b, w)
            return _utrim(_kdigits(n, w, len(a) + len(b) - 1))
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] += ca * cb
        return _utrim(out)

    @classmethod
    def pow(cls, a, n):
        out = cls.one
        for _ in range(n):
            out = cls.mul(out, a)
        return out

    @staticmethod
    def divexact(a, b):
        if not b:
            raise DomainError("division by zero polynomial")
        if not a:
            return []
        rem = list(a)
        out = [0] * (len(a) - len(b) + 1)
        for k in range(len(out) - 1, -1, -1):
            lead = rem[k + len(b) - 1]
            c = _ZOps.divexact(lead, b[-1])
            out[k] = c
            if c:
                for i, bc in enumerate(b):
                    rem[k + i] -= c * bc
        if any(rem):
            raise ExactDivisionError("inexact Z[t] division in gcd")
        return _utrim(out)

    @staticmethod
    def gcd(a, b):
        if a and b:
            g = _heu_gcd_zt(a, b)
            if g is None:
                g = _subres_gcd(list(a), list(b), _ZOps)
        else:
            g = list(a) if a else list(b)
        if g and g[-1] < 0:
            g = [-c for c in g]
        return g


def _to_rec(p: dict) -> list:
    """Sparse {(i,j): c} -> dense list-over-q of dense-Z[t] lists."""
    dq = max(i for i, _ in p)
    heights = [0] * (dq + 1)
    for (i, j), _ in p.items():
        if j + 1 > heights[i]:
            heights[i] = j + 1
    rows = [[0] * heights[i] for i in range(dq + 1)]
    for (i, j), c in p.items():
        rows[i][j] = c
    return [_utrim(r) for r in rows]


def _from_rec(rows: list) -> dict:
    out = {}
    for i, row in enumerate(rows):
        for j, c in enumerate(row):
            if c:
                out[(i, j)] = c
    return out


_P_CERT = (1 << 61) - 1
_CERT_POINTS = (1234567890123456789, 987654321987654321, 55555555555555555)


def _img_mod(p: dict, ax: int, v: int) -> list:
    """p with the other variable evaluated at v mod _P_CERT, dense in ax."""
    dm = max(e[ax] for e in p)
    do = max(e[1 - ax] for e in p)
    pw = [1] * (do + 1)
    for k in range(1, do + 1):
        pw[k] = pw[k - 1] * v % _P_CERT
    out = [0] * (dm + 1)
    for e, c in p.items():
        out[e[ax]] = (out[e[ax]] + c * pw[e[1 - ax]]) % _P_CERT
    return _utrim(out)


def _gcd_deg_mod(a: list, b: list) -> int:
    """Degree of gcd of dense polys over the certificate prime field."""
    while b:
        db = len(b) - 1
        inv = pow(b[-1], _P_CERT - 2, _P_CERT)
        r = list(a)
        while len(r) - 1 >= db:
            f = r[-1] * inv % _P_CERT
            sh = len(r) - len(b)
            if f:
                for i in range(db):
                    r[sh + i] = (r[sh + i] - f * b[i]) % _P_CERT
            r.pop()
            while r and not r[-1]:
                r.pop()
        a, b = b, r
    return len(a) - 1


def _cofactors_coprime(ca: dict, cb: dict) -> bool:
    """Certify gcd(ca, cb) = 1 for nonzero sparse Z[q,t] term dicts.

    A common divisor of positive q-degree keeps full degree in the
    q-image of whichever cofactor's image avoids a leading-term drop, so
    a constant image gcd alongside one degree-preserved image rules it
    out; symmetrically in t.  A pass at any point is a proof; failures
    only ever send the caller to the deterministic fallback.
    """
    for ax in (0, 1):
        da = max(e[ax] for e in ca)
        db = max(e[ax] for e in cb)
        if min(da, db) == 0:
            continue
        ok = False
        for v in _CERT_POINTS:
            ia = _img_mod(ca, ax, v)
            ib = _img_mod(cb, ax, v)
            if not ia or not ib:
                continue
            if len(ia) - 1 != da and len(ib) - 1 != db:
                continue
            if _gcd_deg_mod(ia, ib) == 0:
                ok = True
                break
        if not ok:
            return False
    return True


def _eval_q(p: dict, xi: int) -> list:
    """p with q evaluated at xi, as a dense Z[t] coefficient list."""
    dq = max(i for i, _ in p)
    dt = max(j for _, j in p)
    pw = [1] * (dq + 1)
    for k in range(1, dq + 1):
        pw[k] = pw[k - 1] * xi
    out = [0] * (dt + 1)
    for (i, j), c in p.items():
        out[j] += c * pw[i]
    return _utrim(out)


def _heu_gcd_qt(a0: dict, b0: dict) -> dict | None:
    """Evaluation gcd of primitive sparse Z[q,t] dicts; None if uncertified.

    q is evaluated at an odd integer point, the exact Z[t] gcd of the
    images is lifted back by balanced digits, and the lift is accepted
    only when it divides both inputs and the two cofactors certify
    coprime, which pins it as the gcd exactly.  Anything else grows the
    point and retries, then defers to the subresultant path.
    """
    ha = max(abs(c) for c in a0.values())
    hb = max(abs(c) for c in b0.values())
    xi = 2 * min(ha, hb) + 29
    for _ in range(3):
        ia, ib = _eval_q(a0, xi), _eval_q(b0, xi)
        if not ia or not ib:
            # xi landed on a root of the taller input; push it out of range
            xi = xi * xi
            continue
        gam = _ZTOps.gcd(ia, ib)
        cand = {}
        for j, n in enumerate(gam):
            for k, d in enumerate(_balanced_digits(n, xi)):
                if d:
                    cand[(k, j)] = d
        cc = 0
        for c in cand.values():
            cc = math.gcd(cc, c)
        if cc > 1:
            cand = {e: c // cc for e, c in cand.items()}
        try:
            qa = divexact_terms(a0, cand)
            qb = divexact_terms(b0, cand)
        except ExactDivisionError:
            xi = xi * xi
            continue
        if _cofactors_coprime(qa, qb):
            return cand
        xi = xi * xi
    return None


def gcd_terms(a: dict, b: dict) -> dict:
    """Gcd of two sparse Z[q,t] term dicts, sign-normalized."""
    if not a:
        g = dict(b)
    elif not b:
        g = dict(a)
    else:
        ia, ja = _pminexp(a)
        ib, jb = _pminexp(b)
        mi, mj = min(ia, ib), min(ja, jb)
        a0 = _pshift(a, -ia, -ja)
        b0 = _pshift(b, -ib, -jb)
        ca, cb = _pcontent(a0), _pcontent(b0)
        cg = math.gcd(ca, cb)
        if len(a0) == 1 or len(b0) == 1:
            g = {(mi, mj): cg}
        else:
            if ca != 1:
                a0 = {m: c // ca for m, c in a0.items()}
            if cb != 1:
                b0 = {m: c // cb for m, c in b0.items()}
            g = _heu_gcd_qt(a0, b0)
            if g is None:
                g = _from_rec(_subres_gcd(_to_rec(a0), _to_rec(b0), _ZTOps))
            g = _pshift(_pscale(g, cg), mi, mj)
    if not g:
        return g
    if _plead(g)[1] < 0:
        g = _pneg(g)
    return g


def _kdivexact(a: dict, b: dict) -> dict | None:
    """Packed exact-division attempt; None defers to the dense decider.

    Integer division mirrors the polynomial one at the packed point, so a
    nonzero remainder proves inexactness outright.  A clean quotient is
    only trusted after remultiplying, which also catches digit widths too
    narrow for the quotient's coefficients; those get one doubling retry.
    """
    dqa, dta = _pdeg(a)
    dqb, dtb = _pdeg(b)
    if dqb > dqa or dtb > dta:
        raise ExactDivisionError("inexact polynomial division")
    st = dta + 1
    ha = max(abs(c) for c in a.values())
    hb = max(abs(c) for c in b.values())
    w = _kwidth(max(ha, hb))
    for _ in range(2):
        qn, r = divmod(_kpack(a, w, st), _kpack(b, w, st))
        if r:
            raise ExactDivisionError("inexact polynomial division")
        cand = _kunpack(qn, w, st, (dqa - dqb) * st + dta - dtb + 1)
        if _pmul(cand, b) == a:
            return cand
        w *= 2
    return None


def divexact_terms(a: dict, b: dict) -> dict:
    """Exact division of sparse term dicts; raises if b does not divide a."""
    if not b:
        raise DomainError("division by zero polynomial")
    if not a:
        return {}
    const = _pis_const(b)
    if const is not None:
        out = {}
        for m, c in a.items():
            d, r = divmod(c, const)
            if r:
                raise ExactDivisionError("inexact constant division")
            out[m] = d
        return out
    if len(b) == 1:
        ((bi, bj), bc) = next(iter(b.items()))
        out = {}
        for (i, j), c in a.items():
            d, r = divmod(c, bc)
            if r or i < bi or j < bj:
                raise ExactDivisionError("inexact monomial division")
            out[(i - bi, j - bj)] = d
        return out
    if len(a) >= 16:
        out = _kdivexact(a, b)
        if out is not None:
            return out
    ra, rb = _to_rec(a), _to_rec(b)
    # long division in q over Z[t]; exactness forces every step to divide
    out_rows = [[] for _ in range(len(ra) - len(rb) + 1)]
    rem = [list(r) for r in ra]
    for k in range(len(ra) - len(rb), -1, -1):
        lead = rem[k + len(rb) - 1]
        if not lead:
            continue
        c = _ZTOps.divexact(lead, rb[-1])
        out_rows[k] = c
        for i, bc in enumerate(rb):
            rem[k + i] = _ZTOps.sub(rem[k + i], _ZTOps.mul(c, bc))
    if any(row for row in rem):
        raise ExactDivisionError("inexact polynomial division")
    return _from_rec(out_rows)


# ---------------------------------------------------------------------------
# public wrappers


class QtPoly:
    """Immutable sparse polynomial in Z[q,t]."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        object.__setattr__(self, "terms", {m: c for m, c in (terms or {}).items() if c})

    def __setattr__(self, *_):
        raise AttributeError("QtPoly is immutable")

    @classmethod
    def _raw(cls, terms: dict) -> "QtPoly":
        self = object.__new__(cls)
        object.__setattr__(self, "terms", terms)
        return self

    @classmethod
    def const(cls, c: int) -> "QtPoly":
        return cls._raw({(0, 0): c} if c else {})

    @classmethod
    def monomial(cls, c: int, i: int, j: int) -> "QtPoly":
        return cls._raw({(i, j): c} if c else {})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, QtPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        return QtPoly._raw(_padd(self.terms, other.terms))

    def __sub__(self, other):
        return QtPoly._raw(_psub(self.terms, other.terms))

    def __neg__(self):
        return QtPoly._raw(_pneg(self.terms))

    def __mul__(self, other):
        if isinstance(other, int):
            return QtPoly._raw(_pscale(self.terms, other))
        return QtPoly._raw(_pmul(self.terms, other.terms))

    __rmul__ = __mul__

    def degree(self) -> Mono:
        if not self.terms:
            return (-1, -1)
        return _pdeg(self.terms)

    def adams(self, k: int) -> "QtPoly":
        return QtPoly._raw(_padams(self.terms, k))

    def eval_at(self, q0, t0) -> Fraction:
        return _peval(self.terms, Fraction(q0), Fraction(t0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _monokey(kv[0]), reverse=True)

    def __str__(self):
        return poly_str(self.terms)

    __repr__ = __str__


def gcd_poly(a: QtPoly, b: QtPoly) -> QtPoly:
    return QtPoly._raw(gcd_terms(a.terms, b.terms))


def _mono_str(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("q" if i == 1 else f"q^{i}")
    if j:
        parts.append("t" if j == 1 else f"t^{j}")
    return "*".join(parts)


def poly_str(terms: dict) -> str:
    """Canonical text: terms in descending graded-lex (q > t) order."""
    if not terms:
        return "0"
    out = []
    for (i, j), c in sorted(terms.items(), key=lambda kv: _monokey(kv[0]), reverse=True):
        mono = _mono_str(i, j)
        body = str(abs(c)) if not mono else (mono if abs(c) == 1 else f"{abs(c)}*{mono}")
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TOKEN_RE = re.compile(r"\d+|[qt*^+\-]")


def poly_parse(text: str) -> dict:
    """Parse the poly_str format (tolerant of whitespace and term order)."""
    toks = _TOKEN_RE.findall(text)
    if not toks or "".join(toks) != re.sub(r"\s+", "", text):
        raise ValueError(f"unexpected characters in polynomial text {text!r}")
    out: dict = {}
    pos = 0
    first = True
    while pos < len(toks):
        sign = 1
        if toks[pos] in "+-":
            sign = -1 if toks[pos] == "-" else 1
            pos += 1
        elif not first:
            raise ValueError("missing +/- between terms")
        first = False
        coeff, i, j = None, 0, 0
        need_factor = True
        while pos < len(toks):
            tok = toks[pos]
            if tok.isdigit():
                if not need_factor:
                    raise ValueError("misplaced integer in term")
                coeff = (1 if coeff is None else coeff) * int(tok)
                pos += 1
            elif tok in "qt":
                exp = 1
                pos += 1
                if pos < len(toks) and toks[pos] == "^":
                    pos += 1
                    if pos >= len(toks) or not toks[pos].isdigit():
                        raise ValueError("exponent must be a nonnegative integer")
                    exp = int(toks[pos])
                    pos += 1
                if tok == "q":
                    i += exp
                else:
                    j += exp
            else:
                break
            need_factor = False
            if pos < len(toks) and toks[pos] == "*":
                pos += 1
                need_factor = True
        if need_factor:
            raise ValueError("empty term in polynomial text")
        c = sign * (1 if coeff is None else coeff)
        s = out.get((i, j), 0) + c
        if s:
            out[(i, j)] = s
        else:
            out.pop((i, j), None)
    return out


class QtRat:
    """Normalized fraction of Z[q,t] polynomials: an element of Q(q,t)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        n, d = _as_pair(num)
        if den is not None:
            dn, dd = _as_pair(den)
            n, d = _pmul(n, dd), _pmul(d, dn)
        n, d = _ratnorm(n, d)
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)

    def __setattr__(self, *_):
        raise AttributeError("QtRat is immutable")

    @classmethod
    def _raw(cls, num: dict, den: dict) -> "QtRat":
        self = object.__new__(cls)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        return self

    @classmethod
    def _make(cls, num: dict, den: dict) -> "QtRat":
        n, d = _ratnorm(num, den)
        return cls._raw(n, d)

    # -- constructors

    @classmethod
    def from_int(cls, n: int) -> "QtRat":
        return cls._raw({(0, 0): n} if n else {}, {(0, 0): 1})

    @classmethod
    def from_fraction(cls, f) -> "QtRat":
        f = Fraction(f)
        return cls._make({(0, 0): f.numerator} if f.numerator else {}, {(0, 0): f.denominator})

    @classmethod
    def monomial(cls, c: int, i: int, j: int) -> "QtRat":
        """c*q^i*t^j with exponents of either sign."""
        num = {(max(i, 0), max(j, 0)): c} if c else {}
        den = {(max(-i, 0), max(-j, 0)): 1}
        return cls._make(num, den)

    # -- predicates

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == self.den

    def is_integer(self):
        """The integer value if this is one, else None."""
        if not self.num:
            return 0
        if self.den == {(0, 0): 1}:
            return _pis_const(self.num)
        return None

    # -- arithmetic

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return QtRat._make(_padd(self.num, other.num), dict(self.den))
        return QtRat._make(
            _padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
            _pmul(self.den, other.den),
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return QtRat._make(_psub(self.num, other.num), dict(self.den))
        return QtRat._make(
            _psub(_pmul(self.num, other.den), _pmul(other.num, self.den)),
            _pmul(self.den, other.den),
        )

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return QtRat._raw(_pneg(self.num), dict(self.den))

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return RAT_ZERO
        return QtRat._make(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            raise DomainError("division by zero in Q(q,t)")
        if not self.num:
            return RAT_ZERO
        return QtRat._make(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n: int):
        if n == 0:
            return RAT_ONE
        if n < 0:
            return (RAT_ONE / self) ** (-n)
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def inverse(self) -> "QtRat":
        return RAT_ONE / self

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((frozenset(self.num.items()), frozenset(self.den.items())))

    # -- structure maps

    def adams(self, k: int) -> "QtRat":
        """Substitute q -> q^k, t -> t^k."""
        if k < 1:
            raise DomainError("adams exponent must be >= 1")
        if k == 1:
            return self
        return QtRat._make(_padams(self.num, k), _padams(self.den, k))

    def swap_vars(self) -> "QtRat":
        """Substitute q <-> t."""
        return QtRat._make(
            {(j, i): c for (i, j), c in self.num.items()},
            {(j, i): c for (i, j), c in self.den.items()},
        )

    def invert_vars(self) -> "QtRat":
        """Substitute q -> 1/q, t -> 1/t."""
        if not self.num:
            return self
        qn, tn = _pdeg(self.num)
        qd, td = _pdeg(self.den)
        mq, mt = max(qn, qd), max(tn, td)
        num = {(mq - i, mt - j): c for (i, j), c in self.num.items()}
        den = {(mq - i, mt - j): c for (i, j), c in self.den.items()}
        return QtRat._make(num, den)

    def eval_at(self, q0, t0) -> Fraction:
        d = _peval(self.den, Fraction(q0), Fraction(t0))
        if d == 0:
            raise EvalPointError(f"denominator vanishes at q={q0}, t={t0}")
        return _peval(self.num, Fraction(q0), Fraction(t0)) / d

    # -- presentation

    def __str__(self):
        if self.den == {(0, 0): 1}:
            return poly_str(self.num)
        return f"({poly_str(self.num)})/({poly_str(self.den)})"

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "QtRat":
        text = text.strip().replace(" ", "")
        if text.startswith("(") and ")/(" in text and text.endswith(")"):
            np, dp = text[1:-1].split(")/(", 1)
            return cls._make(poly_parse(np), poly_parse(dp))
        return cls._make(poly_parse(text), {(0, 0): 1})

    def to_json(self):
        return {
            "num": [[i, j, str(c)] for (i, j), c in sorted(self.num.items(), key=lambda kv: _monokey(kv[0]), reverse=True)],
            "den": [[i, j, str(c)] for (i, j), c in sorted(self.den.items(), key=lambda kv: _monokey(kv[0]), reverse=True)],
        }

    @classmethod
    def from_json(cls, obj) -> "QtRat":
        num = {(int(i), int(j)): int(c) for i, j, c in obj["num"]}
        den = {(int(i), int(j)): int(c) for i, j, c in obj["den"]}
        return cls._make(num, den)


def _coerce(x):
    if isinstance(x, QtRat):
        return x
    if isinstance(x, int):
        return QtRat.from_int(x)
    if isinstance(x, Fraction):
        return QtRat.from_fraction(x)
    if isinstance(x, QtPoly):
        return QtRat._make(dict(x.terms), {(0, 0): 1})
    return NotImplemented


def _as_pair(x):
    if isinstance(x, QtRat):
        return dict(x.num), dict(x.den)
    if isinstance(x, QtPoly):
        return dict(x.terms), {(0, 0): 1}
    if isinstance(x, dict):
        return {m: c for m, c in x.items() if c}, {(0, 0): 1}
    if isinstance(x, int):
        return ({(0, 0): x} if x else {}), {(0, 0): 1}
    if isinstance(x, Fraction):
        return ({(0, 0): x.numerator} if x.numerator else {}), {(0, 0): x.denominator}
    raise TypeError(f"cannot build QtRat from {type(x).__name__}")


def _ratnorm(n: dict, d: dict):
    """Reduce to lowest terms with a sign-normalized denominator."""
    if not d:
        raise DomainError("zero denominator in Q(q,t)")
    if not n:
        return {}, {(0, 0): 1}
    dc = _pis_const(d)
    if dc == 1:
        return n, d
    # pull out integer content
    cn, cd = _pcontent(n), _pcontent(d)
    g = math.gcd(cn, cd)
    if g > 1:
        n = {m: c // g for m, c in n.items()}
        d = {m: c // g for m, c in d.items()}
    # pull out monomial content
    ni, nj = _pminexp(n)
    di, dj = _pminexp(d)
    mi, mj = min(ni, di), min(nj, dj)
    if mi or mj:
        n = _pshift(n, -mi, -mj)
        d = _pshift(d, -mi, -mj)
    # full gcd only when both sides are genuinely multi-term
    if len(n) > 1 and len(d) > 1:
        g2 = gcd_terms(n, d)
        if _pis_const(g2) is None or abs(_pis_const(g2) or 1) != 1:
            n = divexact_terms(n, g2)
            d = divexact_terms(d, g2)
    if _plead(d)[1] < 0:
        n = _pneg(n)
        d = _pneg(d)
    return n, d


RAT_ZERO = QtRat.from_int(0)
RAT_ONE = QtRat.from_int(1)
Q = QtRat.monomial(1, 1, 0)
T = QtRat.monomial(1, 0, 1)
QT_M = (RAT_ONE - Q) * (RAT_ONE - T)  # (1-q)(1-t), ubiquitous below


def q_pow(i: int) -> QtRat:
    return QtRat.monomial(1, i, 0)


def t_pow(j: int) -> QtRat:
    return QtRat.monomial(1, 0, j)
