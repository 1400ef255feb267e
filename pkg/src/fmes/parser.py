"""Expression language for the command line.

Grammar (whitespace insensitive):

    expr    := term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := atom ('^' UINT)?
    atom    := RATIONAL | generator | NAME '(' expr ')' | '(' expr ')' | '-' atom

Generators are ``G[{k1,..,kr},{d1,..,dr}]`` or ``G[k1,..,kr]`` (all lower
indices zero); in balanced mode a run of letters ``b2 b0 b3`` is one
generator, translated through the balanced isomorphism.  ``*`` is the
stuffle product and ``^`` a nonnegative stuffle power.  Operator
applications: D, W, delta, omega, t, swap.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .balanced import phi_iso_word
from .derivations import apply_D, apply_W, apply_delta, apply_omega, apply_t
from .quasishuffle import stuffle_comb, stuffle_power
from .swap import swap_lincomb
from .words import LinComb, Word


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


OPERATORS: dict[str, Callable[[LinComb], LinComb]] = {
    "D": apply_D,
    "W": apply_W,
    "delta": apply_delta,
    "omega": apply_omega,
    "t": apply_t,
    "swap": swap_lincomb,
}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<gen>G\[)
  | (?P<bletter>b\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<num>\d+)
  | (?P<sym>[-+*^(){},\[\]/])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


# AST nodes: ("num", Fraction) | ("gen", Word) | ("bgen", tuple) |
# ("add"|"sub"|"mul", l, r) | ("pow", x, n) | ("neg", x) | ("apply", name, x)


class Parser:
    def __init__(self, text: str, balanced: bool = False):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.balanced = balanced

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.advance()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.pos)
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(f"trailing input {tok.text!r}", tok.pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek().text == "*":
            self.advance()
            node = ("mul", node, self.factor())
        return node

    def factor(self):
        node = self.atom()
        if self.peek().text == "^":
            self.advance()
            tok = self.advance()
            if tok.kind != "num":
                raise ParseError("power must be a nonnegative integer", tok.pos)
            node = ("pow", node, int(tok.text))
        return node

    def atom(self):
        tok = self.peek()
        if tok.text == "-":
            self.advance()
            return ("neg", self.atom())
        if tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "num":
            self.advance()
            if self.peek().text == "/":
                self.advance()
                den = self.advance()
                if den.kind != "num" or int(den.text) == 0:
                    raise ParseError("bad rational literal", den.pos)
                return ("num", Fraction(int(tok.text), int(den.text)))
            return ("num", Fraction(int(tok.text)))
        if tok.kind == "gen":
            return self.generator()
        if tok.kind == "bletter":
            if not self.balanced:
                raise ParseError("balanced letters need the balanced input mode",
                                 tok.pos)
            letters = []
            while self.peek().kind == "bletter":
                letters.append(int(self.advance().text[1:]))
            return ("bgen", tuple(letters))
        if tok.kind == "name":
            name = self.advance().text
            if name not in OPERATORS:
                raise ParseError(f"unknown operator {name!r}", tok.pos)
            self.expect("(")
            node = self.expr()
            self.expect(")")
            return ("apply", name, node)
        raise ParseError(f"unexpected token {tok.text!r}", tok.pos)

    def int_list(self) -> list[int]:
        out = []
        while True:
            tok = self.advance()
            if tok.kind != "num":
                raise ParseError("expected an integer index", tok.pos)
            out.append(int(tok.text))
            if self.peek().text == ",":
                self.advance()
                continue
            return out

    def generator(self):
        open_tok = self.expect("G[")
        if self.peek().text == "{":
            self.advance()
            ks = self.int_list()
            self.expect("}")
            self.expect(",")
            self.expect("{")
            ds = self.int_list()
            self.expect("}")
            self.expect("]")
            if len(ks) != len(ds):
                raise ParseError("index lists differ in length", open_tok.pos)
            try:
                return ("gen", Word.from_indices(ks, ds))
            except ValueError as exc:
                raise ParseError(str(exc), open_tok.pos) from None
        ks = self.int_list()
        self.expect("]")
        try:
            return ("gen", Word.from_indices(ks))
        except ValueError as exc:
            raise ParseError(str(exc), open_tok.pos) from None


def parse(text: str, balanced: bool = False):
    return Parser(text, balanced).parse()


def evaluate(node, weight_cutoff: int | None = None) -> LinComb:
    """Evaluate an AST to a linear combination; raises when a homogeneous
    component exceeds the cutoff."""
    result = _eval(node)
    if weight_cutoff is not None:
        over = [k for k in result.weights() if k > weight_cutoff]
        if over:
            raise WeightCutoffExceeded(
                f"result has components of weight {sorted(over)} above the "
                f"cutoff {weight_cutoff}")
    return result


class WeightCutoffExceeded(ValueError):
    pass


def _eval(node) -> LinComb:
    tag = node[0]
    if tag == "num":
        return LinComb.one().scale(node[1])
    if tag == "gen":
        return LinComb.of(node[1])
    if tag == "bgen":
        return phi_iso_word(node[1])
    if tag == "add":
        return _eval(node[1]) + _eval(node[2])
    if tag == "sub":
        return _eval(node[1]) - _eval(node[2])
    if tag == "mul":
        return stuffle_comb(_eval(node[1]), _eval(node[2]))
    if tag == "pow":
        return stuffle_power(_eval(node[1]), node[2])
    if tag == "neg":
        return -_eval(node[1])
    if tag == "apply":
        return OPERATORS[node[1]](_eval(node[2]))
    raise ValueError(f"unknown AST node {tag!r}")


def print_ast(node) -> str:
    """Canonical text of an AST; parse(print_ast(x)) reproduces x."""
    tag = node[0]
    if tag == "num":
        c = node[1]
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    if tag == "gen":
        return str(node[1])
    if tag == "bgen":
        return " ".join(f"b{i}" for i in node[1])
    if tag in ("add", "sub"):
        op = " + " if tag == "add" else " - "
        return f"{print_ast(node[1])}{op}{_wrap_additive(node[2])}"
    if tag == "mul":
        return f"{_wrap_mul(node[1])}*{_wrap_mul(node[2])}"
    if tag == "pow":
        return f"{_wrap_mul(node[1])}^{node[2]}"
    if tag == "neg":
        return f"-{_wrap_mul(node[1])}"
    if tag == "apply":
        return f"{node[1]}({print_ast(node[2])})"
    raise ValueError(f"unknown AST node {tag!r}")


def _wrap_additive(node) -> str:
    if node[0] in ("add", "sub", "neg"):
        return f"({print_ast(node)})"
    return print_ast(node)


def _wrap_mul(node) -> str:
    if node[0] in ("add", "sub", "neg"):
        return f"({print_ast(node)})"
    return print_ast(node)


def normalize(text: str, balanced: bool = False) -> str:
    return print_ast(parse(text, balanced))
