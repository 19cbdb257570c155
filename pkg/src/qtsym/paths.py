"""Labelled decorated Dyck path combinatorics.

A Dyck path of size n is stored through its area word (a_1, ..., a_n):
the i-th north step starts on the diagonal y = x + a_i.  A decoration
set marks a subset of the rises, and an optional label word turns the
path into a labelled one.  The module provides deterministic
enumeration, the area / dinv / dcomp / reading-word statistics, the
generating symmetric functions collected in the monomial basis, and CSV
export of enumeration streams.
"""

import csv
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Optional, Sequence

from .config import check_degree
from .errors import DomainError
from .qt import QtRat, RAT_ZERO, q_pow, t_pow
from .rings import QTRAT
from .symfunc import SymFunc

__all__ = [
    "DyckPath",
    "DecoratedLabelledPath",
    "area_words",
    "enumerate_paths",
    "gen_fn",
    "gen_fn_by_comp",
    "write_csv",
]


# ---------------------------------------------------------------------------
# path objects


@dataclass(frozen=True)
class DyckPath:
    """A Dyck path given by its area word."""

    area_word: tuple

    def __post_init__(self):
        word = tuple(int(a) for a in self.area_word)
        object.__setattr__(self, "area_word", word)
        if not word:
            raise DomainError("empty area word")
        if word[0] != 0:
            raise DomainError("area word must start at 0")
        for prev, cur in zip(word, word[1:]):
            if cur < 0 or cur > prev + 1:
                raise DomainError(f"{word} is not a valid area word")

    @property
    def n(self) -> int:
        return len(self.area_word)

    @property
    def rises(self) -> tuple:
        """Indices i >= 2 whose north step directly follows another."""
        w = self.area_word
        return tuple(i for i in range(2, len(w) + 1) if w[i - 1] > w[i - 2])

    @property
    def touch_rows(self) -> tuple:
        """Rows whose north step starts on the main diagonal."""
        return tuple(i for i, a in enumerate(self.area_word, 1) if a == 0)


@dataclass(frozen=True)
class DecoratedLabelledPath:
    """A Dyck path with decorated rises and an optional label word.

    Labels, when present, are positive and strictly increase up each
    column: a_i = a_{i-1} + 1 forces w_i > w_{i-1}.
    """

    path: DyckPath
    dr: frozenset = field(default_factory=frozenset)
    labels: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "dr", frozenset(int(i) for i in self.dr))
        rises = set(self.path.rises)
        if not self.dr <= rises:
            raise DomainError(f"decorations {sorted(self.dr)} not all rises")
        if self.labels is not None:
            w = tuple(int(x) for x in self.labels)
            object.__setattr__(self, "labels", w)
            a = self.path.area_word
            if len(w) != len(a):
                raise DomainError("label word length differs from path size")
            if any(x <= 0 for x in w):
                raise DomainError("labels must be positive")
            for i in range(1, len(a)):
                if a[i] == a[i - 1] + 1 and w[i] <= w[i - 1]:
                    raise DomainError(
                        f"labels {w} not increasing in column at row {i + 1}"
                    )

    # -- statistics

    @property
    def n(self) -> int:
        return self.path.n

    @property
    def k(self) -> int:
        return len(self.dr)

    def area(self) -> int:
        """Total area-word entries over the undecorated rows."""
        return sum(
            a for i, a in enumerate(self.path.area_word, 1) if i not in self.dr
        )

    def dinv_pairs(self):
        """Primary and secondary inversion pairs (i, j), 1-based, i < j."""
        if self.labels is None:
            raise DomainError("dinv needs a labelled path")
        a = self.path.area_word
        w = self.labels
        primary = []
        secondary = []
        for i in range(len(a)):
            for j in range(i + 1, len(a)):
                if a[i] == a[j] and w[i] < w[j]:
                    primary.append((i + 1, j + 1))
                elif a[i] == a[j] + 1 and w[i] > w[j]:
                    secondary.append((i + 1, j + 1))
        return primary, secondary

    def dinv(self) -> int:
        primary, secondary = self.dinv_pairs()
        return len(primary) + len(secondary)

    def dcomp(self) -> tuple:
        """Undecorated-row counts between consecutive diagonal touches."""
        touches = self.path.touch_rows
        n = self.n
        parts = []
        for j, start in enumerate(touches):
            stop = touches[j + 1] if j + 1 < len(touches) else n + 1
            parts.append(
                sum(1 for i in range(start, stop) if i not in self.dr)
            )
        return tuple(parts)

    def reading_word(self) -> tuple:
        """Labels by increasing diagonal, bottom-left to top-right.

        Within one diagonal the undecorated rows are read first; this is
        the order that matches the printed examples with decorations.
        """
        if self.labels is None:
            raise DomainError("reading word needs a labelled path")
        a = self.path.area_word
        order = sorted(
            range(1, self.n + 1), key=lambda i: (a[i - 1], i in self.dr, i)
        )
        return tuple(self.labels[i - 1] for i in order)

    def reverse_reading_word(self) -> tuple:
        return tuple(reversed(self.reading_word()))

    def content(self) -> tuple:
        """Label multiplicities sorted decreasingly (a partition)."""
        if self.labels is None:
            raise DomainError("content needs a labelled path")
        counts: dict = {}
        for x in self.labels:
            counts[x] = counts.get(x, 0) + 1
        return tuple(sorted(counts.values(), reverse=True))


# ---------------------------------------------------------------------------
# enumeration


def area_words(n: int) -> Iterator[tuple]:
    """All area words of size n in ascending lexicographic order."""
    if n < 1:
        raise DomainError("need n >= 1")
    word = [0] * n

    def rec(i: int):
        if i == n:
            yield tuple(word)
            return
        for a in range(word[i - 1] + 2):
            word[i] = a
            yield from rec(i + 1)

    yield from rec(1)


def _labellings(area_word: tuple, label_max: int) -> Iterator[tuple]:
    """Column-strict label words over 1..label_max, lexicographic."""
    n = len(area_word)
    word = [0] * n

    def rec(i: int):
        if i == n:
            yield tuple(word)
            return
        lo = 1
        if i > 0 and area_word[i] == area_word[i - 1] + 1:
            lo = word[i - 1] + 1
        for x in range(lo, label_max + 1):
            word[i] = x
            yield from rec(i + 1)

    yield from rec(0)


def enumerate_paths(
    n: int,
    k: int = 0,
    label_max: int = 0,
    dcomp_filter: Optional[Sequence[int]] = None,
) -> Iterator[DecoratedLabelledPath]:
    """Stream the decorated (and optionally labelled) paths of size n.

    k decorations are placed on rises; labels run over 1..label_max,
    with label_max = 0 producing unlabelled paths.  The stream is
    deterministic: area words ascend lexicographically, decoration sets
    and label words likewise.
    """
    if n < 1 or k < 0 or label_max < 0:
        raise DomainError("need n >= 1, k >= 0, label_max >= 0")
    wanted = tuple(dcomp_filter) if dcomp_filter is not None else None
    for word in area_words(n):
        path = DyckPath(word)
        for dr in combinations(path.rises, k):
            bare = DecoratedLabelledPath(path, frozenset(dr))
            if wanted is not None and bare.dcomp() != wanted:
                continue
            if label_max == 0:
                yield bare
                continue
            for w in _labellings(word, label_max):
                yield DecoratedLabelledPath(path, frozenset(dr), w)


# ---------------------------------------------------------------------------
# generating functions


_LABEL_WEIGHTS: dict = {}


def _label_weights(word: tuple) -> dict:
    """Map content partition -> sum of q^dinv over labellings in 1..n.

    Only label words whose content vector is itself weakly decreasing
    are kept: those are exactly the x^lambda monomials, so the map is
    the monomial-basis collection of the labelling sum for this path.
    """
    got = _LABEL_WEIGHTS.get(word)
    if got is not None:
        return got
    n = len(word)
    out: dict = {}
    for w in _labellings(word, n):
        counts = [0] * (n + 1)
        for x in w:
            counts[x] += 1
        vec = counts[1:]
        trimmed = tuple(p for p in vec if p)
        if any(vec[i] < vec[i + 1] for i in range(n - 1)):
            continue
        dinv = 0
        for i in range(n):
            for j in range(i + 1, n):
                if (word[i] == word[j] and w[i] < w[j]) or (
                    word[i] == word[j] + 1 and w[i] > w[j]
                ):
                    dinv += 1
        out[trimmed] = out.get(trimmed, RAT_ZERO) + q_pow(dinv)
    _LABEL_WEIGHTS[word] = out
    return out


_GEN_FN: dict = {}


def gen_fn_by_comp(n: int, k: int) -> dict:
    """All diagonal-composition slices of the path generating function.

    Returns a map from composition alpha (of n - k) to
    sum q^dinv t^area x^P over the paths with dcomp = alpha, as a
    SymFunc.  One pass over the paths serves every alpha.
    """
    if not n > k >= 0:
        raise DomainError("need n > k >= 0")
    check_degree(n, "path generating function")
    hit = _GEN_FN.get((n, k))
    if hit is not None:
        return hit
    acc: dict = {}
    for word in area_words(n):
        path = DyckPath(word)
        rises = path.rises
        if len(rises) < k:
            continue
        tweights: dict = {}
        for dr in combinations(rises, k):
            bare = DecoratedLabelledPath(path, frozenset(dr))
            alpha = bare.dcomp()
            tweights[alpha] = tweights.get(alpha, RAT_ZERO) + t_pow(bare.area())
        if not tweights:
            continue
        labelled = _label_weights(word)
        for alpha, tw in tweights.items():
            slot = acc.setdefault(alpha, {})
            for lam, c in labelled.items():
                slot[lam] = slot.get(lam, RAT_ZERO) + tw * c
    out = {}
    for alpha, mcoeffs in acc.items():
        f = SymFunc.zero(QTRAT)
        for lam, c in mcoeffs.items():
            f = f + c * SymFunc.from_basis("m", lam)
        out[alpha] = f
    _GEN_FN[(n, k)] = out
    return out


def gen_fn(n: int, k: int, alpha: Optional[Sequence[int]] = None) -> SymFunc:
    """sum q^dinv t^area x^P over the size-n paths with k decorations.

    With alpha the sum is restricted to paths of that diagonal
    composition.  Labels run over 1..n, which determines the degree-n
    symmetric function; the result is collected exactly.
    """
    table = gen_fn_by_comp(n, k)
    if alpha is not None:
        return table.get(tuple(alpha), SymFunc.zero(QTRAT))
    total = SymFunc.zero(QTRAT)
    for f in table.values():
        total = total + f
    return total


# ---------------------------------------------------------------------------
# export


def write_csv(fileobj, stream) -> int:
    """Write enumeration rows; returns the number of rows written.

    Columns: areaWord, dr, w, dinv, area, dcomp.  Sequence-valued
    columns hold space-separated integers; dinv and w are empty for
    unlabelled paths.
    """
    writer = csv.writer(fileobj)
    writer.writerow(["areaWord", "dr", "w", "dinv", "area", "dcomp"])
    rows = 0
    for p in stream:
        labelled = p.labels is not None
        writer.writerow(
            [
                " ".join(map(str, p.path.area_word)),
                " ".join(map(str, sorted(p.dr))),
                " ".join(map(str, p.labels)) if labelled else "",
                p.dinv() if labelled else "",
                p.area(),
                " ".join(map(str, p.dcomp())),
            ]
        )
        rows += 1
    return rows
