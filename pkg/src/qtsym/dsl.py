"""Expression language for the operator calculus.

Text such as ``Theta(e[1]) . nabla . C[2,1]`` denotes a chain of operators
applied right to left (the leftmost acts last, matching how the composite
is written on paper) to a symmetric-function literal.  ``+`` and ``-``
combine chains, and scalars like ``q^-2`` or ``(q + t)`` multiply in via
``*``.  ``parse`` builds a small AST, ``pprint`` renders it back to a
canonical text that reparses to an equal AST, and ``evaluate`` dispatches
to the operator implementations.

Grammar::

    expr   := ['+'|'-'] chain (('+'|'-') chain)*
    chain  := atom ('.' atom)*
    atom   := opName '(' sfLit ')' | opName | sfLit
            | scalar '*' atom | '(' expr ')'
    sfLit  := litName '[' [INT (',' INT)*] ']'
    scalar := product of INT | 'q' | 't' | '(' scalar-sum ')', each with an
              optional '^' signed-integer power, joined by '*' or '/'

``q`` and ``t`` are reserved for scalars, so a parenthesized group is a
scalar exactly when every name inside it is one of the two.  Literal
arguments of Delta/DeltaPrime/Theta/perp are single basis elements and
hence homogeneous; shape errors (wrong arity, non-partition index) raise
ExprTypeError with the literal's position.
"""

from dataclasses import dataclass, field

from .errors import ExprTypeError, ParseError
from .macdonald import (
    c_alpha,
    delta,
    delta_prime,
    e_nk,
    htilde,
    nabla,
    nabla_inv,
    pi_inv,
    pi_op,
    theta,
)
from .qt import Q, RAT_ONE, T, QtRat
from .symfunc import SymFunc, e_, h_, m_, p_, s_

__all__ = [
    "Chain",
    "Lit",
    "Op",
    "Scaled",
    "Sum",
    "evaluate",
    "parse",
    "pprint",
]

BARE_OPS = ("nabla", "nabla_inv", "Pi", "Pi_inv", "omega", "omegabar")
PARAM_OPS = ("Delta", "DeltaPrime", "Theta", "perp")
LIT_NAMES = ("e", "h", "p", "s", "m", "C", "E", "Htilde")


# ---------------------------------------------------------------------------
# AST
#
# Positions ride along for error messages but are excluded from equality,
# so the parse -> print -> parse round trip compares structurally.


@dataclass(frozen=True)
class Lit:
    """Basis-element literal such as e[3] or Htilde[2,1]."""

    name: str
    index: tuple
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Op:
    """Named operator, with a literal parameter when the family needs one."""

    name: str
    arg: Lit | None = None
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Scaled:
    """scalar * body."""

    scalar: QtRat
    body: object
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Chain:
    """Composition a . b . ... applied right to left; never nested."""

    parts: tuple
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Sum:
    """Signed terms; signs are +1/-1 and terms are never themselves Sums."""

    terms: tuple
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


# ---------------------------------------------------------------------------
# lexer


@dataclass(frozen=True)
class _Tok:
    kind: str  # "name", "int", "sym", "end"
    text: str
    line: int
    column: int


_SYMBOLS = set("^*+-./()[],")


def _lex(text: str) -> list:
    toks = []
    line, col, i = 1, 1, 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(_Tok("int", text[i:j], line, col))
            col += j - i
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("name", text[i:j], line, col))
            col += j - i
            i = j
        elif ch in _SYMBOLS:
            toks.append(_Tok("sym", ch, line, col))
            col += 1
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("end", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# parser


def _show(tok: _Tok) -> str:
    return "end of input" if tok.kind == "end" else f"'{tok.text}'"


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.pos = 0

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def advance(self) -> _Tok:
        tok = self.toks[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def fail(self, message, tok=None, expected=()):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.column, expected)

    def at_sym(self, ch: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return tok.kind == "sym" and tok.text == ch

    def expect_sym(self, ch: str) -> _Tok:
        if not self.at_sym(ch):
            self.fail(f"found {_show(self.peek())}", expected=(f"'{ch}'",))
        return self.advance()

    # -- grammar productions

    def parse_expr(self):
        first = self.peek()
        terms = []
        sign = 1
        if first.kind == "sym" and first.text in "+-":
            self.advance()
            sign = -1 if first.text == "-" else 1
        terms.append((sign, self.parse_chain()))
        while self.peek().kind == "sym" and self.peek().text in "+-":
            tok = self.advance()
            terms.append((-1 if tok.text == "-" else 1, self.parse_chain()))
        # flatten sums-of-sums so printed output never needs term parens
        flat = []
        for s, term in terms:
            if isinstance(term, Sum):
                flat.extend((s * s2, t2) for s2, t2 in term.terms)
            else:
                flat.append((s, term))
        if len(flat) == 1 and flat[0][0] == 1:
            return flat[0][1]
        return Sum(tuple(flat), line=first.line, column=first.column)

    def parse_chain(self):
        first = self.peek()
        parts = [self.parse_atom()]
        while self.at_sym("."):
            self.advance()
            parts.append(self.parse_atom())
        if len(parts) == 1:
            return parts[0]
        flat = []
        for p in parts:
            flat.extend(p.parts if isinstance(p, Chain) else (p,))
        return Chain(tuple(flat), line=first.line, column=first.column)

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "int" or (tok.kind == "name" and tok.text in ("q", "t")):
            return self.parse_scaled()
        if tok.kind == "sym" and tok.text == "(":
            if self._scalar_group(self.pos):
                return self.parse_scaled()
            self.advance()
            node = self.parse_expr()
            self.expect_sym(")")
            return node
        if tok.kind == "name":
            if tok.text in BARE_OPS:
                self.advance()
                if self.at_sym("("):
                    self.fail(f"'{tok.text}' takes no argument", tok=self.peek())
                return Op(tok.text, None, line=tok.line, column=tok.column)
            if tok.text in PARAM_OPS:
                self.advance()
                self.expect_sym("(")
                arg = self.parse_lit()
                self.expect_sym(")")
                return Op(tok.text, arg, line=tok.line, column=tok.column)
            if tok.text in LIT_NAMES:
                return self.parse_lit()
            self.fail(
                f"unknown name '{tok.text}'",
                expected=sorted(BARE_OPS + PARAM_OPS + LIT_NAMES + ("q", "t")),
            )
        self.fail(
            f"found {_show(tok)}",
            expected=("operator", "literal", "scalar", "'('"),
        )

    def parse_lit(self) -> Lit:
        tok = self.peek()
        if tok.kind != "name" or tok.text not in LIT_NAMES:
            self.fail(f"found {_show(tok)}", expected=LIT_NAMES)
        self.advance()
        self.expect_sym("[")
        index = []
        if not self.at_sym("]"):
            index.append(self._index_entry())
            while self.at_sym(","):
                self.advance()
                index.append(self._index_entry())
        self.expect_sym("]")
        lit = Lit(tok.text, tuple(index), line=tok.line, column=tok.column)
        _check_lit(lit)
        return lit

    def _index_entry(self) -> int:
        tok = self.peek()
        if tok.kind != "int":
            self.fail(f"found {_show(tok)}", expected=("integer",))
        self.advance()
        return int(tok.text)

    # -- scalars

    def _scalar_group(self, k: int) -> bool:
        """True when the '(' at token k closes over scalar-only content."""
        depth = 0
        while k < len(self.toks):
            tok = self.toks[k]
            if tok.kind == "end":
                return False
            if tok.kind == "name" and tok.text not in ("q", "t"):
                return False
            if tok.kind == "sym":
                if tok.text in ".[],":
                    return False
                if tok.text == "(":
                    depth += 1
                elif tok.text == ")":
                    depth -= 1
                    if depth == 0:
                        return True
            k += 1
        return False

    def _starts_scalar(self, tok: _Tok, k: int) -> bool:
        if tok.kind == "int":
            return True
        if tok.kind == "name" and tok.text in ("q", "t"):
            return True
        return tok.kind == "sym" and tok.text == "(" and self._scalar_group(k)

    def parse_scaled(self):
        first = self.peek()
        scal = self._scalar_product()
        if not self.at_sym("*"):
            self.fail(
                "a scalar must multiply an operator expression",
                expected=("'*'",),
            )
        self.advance()
        body = self.parse_atom()
        if isinstance(body, Scaled):
            scal = scal * body.scalar
            body = body.body
        if scal == RAT_ONE:
            return body
        return Scaled(scal, body, line=first.line, column=first.column)

    def _scalar_product(self) -> QtRat:
        val = self._scalar_factor()
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text == "/":
                self.advance()
                rhs = self._scalar_factor()
                if rhs.is_zero():
                    self.fail("division by zero in scalar", tok=tok)
                val = val / rhs
            elif (
                tok.kind == "sym"
                and tok.text == "*"
                and self._starts_scalar(self.peek(1), self.pos + 1)
            ):
                self.advance()
                val = val * self._scalar_factor()
            else:
                return val

    def _scalar_sum(self) -> QtRat:
        tok = self.peek()
        neg = False
        if tok.kind == "sym" and tok.text in "+-":
            self.advance()
            neg = tok.text == "-"
        val = self._scalar_product()
        if neg:
            val = -val
        while self.peek().kind == "sym" and self.peek().text in "+-":
            tok = self.advance()
            rhs = self._scalar_product()
            val = val - rhs if tok.text == "-" else val + rhs
        return val

    def _scalar_factor(self) -> QtRat:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            base = QtRat.from_int(int(tok.text))
        elif tok.kind == "name" and tok.text in ("q", "t"):
            self.advance()
            base = Q if tok.text == "q" else T
        elif tok.kind == "sym" and tok.text == "(":
            self.advance()
            base = self._scalar_sum()
            self.expect_sym(")")
        elif tok.kind == "sym" and tok.text == "-":
            self.advance()
            return -self._scalar_factor()
        else:
            self.fail(
                f"found {_show(tok)}",
                expected=("integer", "'q'", "'t'", "'('"),
            )
        if self.at_sym("^"):
            self.advance()
            neg = False
            if self.at_sym("-"):
                self.advance()
                neg = True
            etok = self.peek()
            if etok.kind != "int":
                self.fail(f"found {_show(etok)}", expected=("integer exponent",))
            self.advance()
            exp = int(etok.text)
            if neg:
                if base.is_zero():
                    self.fail("division by zero in scalar", tok=etok)
                base = RAT_ONE / base
            out = RAT_ONE
            for _ in range(exp):
                out = out * base
            return out
        return base


def _check_lit(lit: Lit) -> None:
    name, idx = lit.name, lit.index
    if name in ("e", "h"):
        if len(idx) != 1:
            raise ExprTypeError(
                f"'{name}' takes exactly one index", lit.line, lit.column
            )
    elif name == "E":
        if len(idx) != 2:
            raise ExprTypeError("'E' takes exactly two indices", lit.line, lit.column)
        n, k = idx
        if not 1 <= k <= n:
            raise ExprTypeError(
                f"'E[{n},{k}]' needs 1 <= k <= n", lit.line, lit.column
            )
    elif name == "C":
        if any(a < 1 for a in idx):
            raise ExprTypeError(
                "'C' takes a composition of positive parts", lit.line, lit.column
            )
    else:  # p, s, m, Htilde are partition-indexed
        if any(a < 1 for a in idx) or any(
            idx[i] < idx[i + 1] for i in range(len(idx) - 1)
        ):
            raise ExprTypeError(
                f"'{name}' takes a partition (weakly decreasing, positive)",
                lit.line,
                lit.column,
            )


def parse(text: str):
    """Parse an operator expression; ParseError carries line and column."""
    parser = _Parser(_lex(text))
    node = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "end":
        parser.fail(
            f"found {_show(tok)} after a complete expression",
            expected=("'+'", "'-'", "'.'", "end of input"),
        )
    return node


# ---------------------------------------------------------------------------
# printer


def _scalar_text(scal: QtRat) -> str:
    text = str(scal)
    if any(ch in text for ch in " +-/"):
        return f"({text})"
    return text


def pprint(node) -> str:
    """Canonical text; parse(pprint(parse(x))) == parse(x)."""
    if isinstance(node, Lit):
        return f"{node.name}[{','.join(map(str, node.index))}]"
    if isinstance(node, Op):
        return node.name if node.arg is None else f"{node.name}({pprint(node.arg)})"
    if isinstance(node, Scaled):
        body = pprint(node.body)
        if isinstance(node.body, (Chain, Sum)):
            body = f"({body})"
        return f"{_scalar_text(node.scalar)}*{body}"
    if isinstance(node, Chain):
        return " . ".join(
            f"({pprint(p)})" if isinstance(p, Sum) else pprint(p)
            for p in node.parts
        )
    out = []
    for sign, term in node.terms:
        if not out:
            out.append(("-" if sign < 0 else "") + pprint(term))
        else:
            out.append((" - " if sign < 0 else " + ") + pprint(term))
    return "".join(out)


# ---------------------------------------------------------------------------
# evaluation


def _lit_value(lit: Lit) -> SymFunc:
    name, idx = lit.name, lit.index
    if name == "e":
        return e_(idx[0])
    if name == "h":
        return h_(idx[0])
    if name == "p":
        return p_(idx)
    if name == "s":
        return s_(idx)
    if name == "m":
        return m_(idx)
    if name == "C":
        return c_alpha(idx)
    if name == "E":
        return e_nk(idx[0], idx[1])
    return htilde(idx)


_APPLY = {
    "nabla": lambda arg, f: nabla(f),
    "nabla_inv": lambda arg, f: nabla_inv(f),
    "Pi": lambda arg, f: pi_op(f),
    "Pi_inv": lambda arg, f: pi_inv(f),
    "omega": lambda arg, f: f.omega(),
    "omegabar": lambda arg, f: f.omegabar(),
    "Delta": lambda arg, f: delta(arg, f),
    "DeltaPrime": lambda arg, f: delta_prime(arg, f),
    "Theta": lambda arg, f: theta(arg, f),
    "perp": lambda arg, f: arg.perp(f),
}


def _apply_part(part, val: SymFunc) -> SymFunc:
    """Apply one chain position (anything left of a '.') to a value."""
    if isinstance(part, Op):
        arg = _lit_value(part.arg) if part.arg is not None else None
        return _APPLY[part.name](arg, val)
    if isinstance(part, Scaled):
        return part.scalar * _apply_part(part.body, val)
    if isinstance(part, Chain):
        for p in reversed(part.parts):
            val = _apply_part(p, val)
        return val
    if isinstance(part, Sum):
        out = SymFunc.zero()
        for sign, term in part.terms:
            piece = _apply_part(term, val)
            out = out - piece if sign < 0 else out + piece
        return out
    raise ExprTypeError(
        "only operators can appear left of '.'", part.line, part.column
    )


def evaluate(node) -> SymFunc:
    """Evaluate an AST to an exact symmetric function."""
    if isinstance(node, Lit):
        return _lit_value(node)
    if isinstance(node, Op):
        raise ExprTypeError(
            f"operator '{node.name}' has nothing to act on", node.line, node.column
        )
    if isinstance(node, Scaled):
        return node.scalar * evaluate(node.body)
    if isinstance(node, Sum):
        out = SymFunc.zero()
        for sign, term in node.terms:
            piece = evaluate(term)
            out = out - piece if sign < 0 else out + piece
        return out
    if isinstance(node, Chain):
        val = evaluate(node.parts[-1])
        for part in reversed(node.parts[:-1]):
            val = _apply_part(part, val)
        return val
    raise TypeError(f"not an expression node: {type(node).__name__}")
