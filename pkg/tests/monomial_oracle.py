"""Independent oracle: symmetric polynomials in N explicit variables.

Polynomials live as {exponent-tuple: Fraction} dicts.  Each classical basis
is enumerated straight from its combinatorial definition (subsets, multisets,
permutations, semistandard tableaux), with no shared code with the package's
transition machinery.
"""

import itertools
from fractions import Fraction


def poly_add(a, b):
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def poly_mul(a, b):
    out = {}
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            k = tuple(x + y for x, y in zip(k1, k2))
            s = out.get(k, 0) + v1 * v2
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def poly_scale(a, c):
    return {k: v * c for k, v in a.items()} if c else {}


def one_poly(N):
    return {(0,) * N: Fraction(1)}


def mono_p(k, N):
    out = {}
    for i in range(N):
        e = [0] * N
        e[i] = k
        out[tuple(e)] = Fraction(1)
    return out


def mono_e(n, N):
    out = {}
    for combo in itertools.combinations(range(N), n):
        e = [0] * N
        for i in combo:
            e[i] = 1
        out[tuple(e)] = Fraction(1)
    return out


def mono_h(n, N):
    out = {}
    for combo in itertools.combinations_with_replacement(range(N), n):
        e = [0] * N
        for i in combo:
            e[i] += 1
        k = tuple(e)
        out[k] = out.get(k, 0) + 1
    return out


def mono_m(lam, N):
    if len(lam) > N:
        return {}
    padded = tuple(lam) + (0,) * (N - len(lam))
    return {perm: Fraction(1) for perm in set(itertools.permutations(padded))}


def ssyt_fillings(lam, N):
    """Semistandard fillings of shape lam with entries in 1..N."""
    rows = [[] for _ in lam]

    def fill(j, i, acc):
        if j == len(lam):
            yield [row[:] for row in acc]
            return
        if i == lam[j]:
            yield from fill(j + 1, 0, acc)
            return
        lo = acc[j][i - 1] if i > 0 else 1
        if j > 0 and len(acc[j - 1]) > i:
            strict_lo = acc[j - 1][i] + 1
            lo = max(lo, strict_lo)
        for v in range(lo, N + 1):
            acc[j].append(v)
            yield from fill(j, i + 1, acc)
            acc[j].pop()

    yield from fill(0, 0, rows)


def mono_s(lam, N):
    out = {}
    for tab in ssyt_fillings(lam, N):
        e = [0] * N
        for row in tab:
            for v in row:
                e[v - 1] += 1
        k = tuple(e)
        out[k] = out.get(k, 0) + 1
    return out


def mono_basis(basis, lam, N):
    if basis == "m":
        return mono_m(lam, N)
    if basis == "s":
        return mono_s(lam, N)
    gen = {"e": mono_e, "h": mono_h, "p": mono_p}[basis]
    out = one_poly(N)
    for part in lam:
        out = poly_mul(out, gen(part, N))
    return out


def expand_p_coeffs(coeffs, N):
    """Expand {partition: Fraction} p-basis data into explicit monomials."""
    total = {}
    for lam, c in coeffs.items():
        term = one_poly(N)
        for part in lam:
            term = poly_mul(term, mono_p(part, N))
        total = poly_add(total, poly_scale(term, Fraction(c)))
    return total
