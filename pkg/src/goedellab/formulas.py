"""Object-language ASTs, concrete-syntax parser and canonical printer.

The canonical AST uses only negation, implication, the universal
quantifier, equality and the Dem predicate.  Conjunction, disjunction,
biconditional and the existential quantifier exist only in the concrete
syntax and are expanded while parsing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import NotClosed, ParseError

# --- terms -------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Succ:
    arg: "Term"


@dataclass(frozen=True)
class Sub:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Diag:
    arg: "Term"


@dataclass(frozen=True)
class Num:
    """Compact numeral literal, printing/encoding-equivalent to S^value(0).

    Only produced for large parsed decimal literals; small numerals stay
    explicit Succ chains.  Structural equality does not identify Num(n)
    with the corresponding chain, so a single representation should be
    used consistently within any one comparison.
    """

    value: int


Term = Var | Zero | Succ | Sub | Diag | Num

ZERO = Zero()

# Decimal literals up to this bound parse as explicit Succ chains.
NUMERAL_CHAIN_LIMIT = 1000


def numeral(n: int) -> Term:
    """S applied n times to 0; large values use the compact literal, the
    same convention as the parser and the decoder."""
    if n > NUMERAL_CHAIN_LIMIT:
        return Num(n)
    t: Term = ZERO
    for _ in range(n):
        t = Succ(t)
    return t


def numeral_value(t: Term):
    """The natural a closed successor/zero/Num term denotes, else None."""
    n = 0
    while True:
        if isinstance(t, Succ):
            n += 1
            t = t.arg
        elif isinstance(t, Num):
            return n + t.value
        elif isinstance(t, Zero):
            return n
        else:
            return None


# --- formulas ----------------------------------------------------------


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForAll:
    var: int
    body: "Formula"


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Dem:
    arg: Term


Formula = Not | Implies | ForAll | Eq | Dem


def term_free_vars(t: Term) -> set[int]:
    if isinstance(t, Var):
        return {t.index}
    if isinstance(t, (Zero, Num)):
        return set()
    if isinstance(t, (Succ, Diag)):
        return term_free_vars(t.arg)
    return term_free_vars(t.left) | term_free_vars(t.right)


def free_vars(f: Formula) -> set[int]:
    if isinstance(f, Not):
        return free_vars(f.sub)
    if isinstance(f, Implies):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, ForAll):
        return free_vars(f.body) - {f.var}
    if isinstance(f, Eq):
        return term_free_vars(f.left) | term_free_vars(f.right)
    return term_free_vars(f.arg)


def _subst_term(t: Term, var: int, repl: Term) -> Term:
    if isinstance(t, Var):
        return repl if t.index == var else t
    if isinstance(t, (Zero, Num)):
        return t
    if isinstance(t, Succ):
        return Succ(_subst_term(t.arg, var, repl))
    if isinstance(t, Diag):
        return Diag(_subst_term(t.arg, var, repl))
    return Sub(_subst_term(t.left, var, repl), _subst_term(t.right, var, repl))


def substitute(f: Formula, var: int, t: Term) -> Formula:
    """Replace every free occurrence of x_var by the closed term t."""
    if term_free_vars(t):
        raise NotClosed("substituted term must be closed: %s" % print_term(t))

    def go(f: Formula) -> Formula:
        if isinstance(f, Not):
            return Not(go(f.sub))
        if isinstance(f, Implies):
            return Implies(go(f.left), go(f.right))
        if isinstance(f, ForAll):
            if f.var == var:
                return f
            return ForAll(f.var, go(f.body))
        if isinstance(f, Eq):
            return Eq(_subst_term(f.left, var, t), _subst_term(f.right, var, t))
        return Dem(_subst_term(f.arg, var, t))

    return go(f)


# --- printer -----------------------------------------------------------


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return "x%d" % t.index
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, Succ):
        # iterative: numerals can be hundreds of S deep
        depth = 0
        while isinstance(t, Succ):
            depth += 1
            t = t.arg
        return "S(" * depth + print_term(t) + ")" * depth
    if isinstance(t, Diag):
        return "diag(%s)" % print_term(t.arg)
    return "sub(%s,%s)" % (print_term(t.left), print_term(t.right))


def _extends_right(f: Formula) -> bool:
    # printed form that keeps consuming input (quantifier body runs to
    # the end of the enclosing context)
    if isinstance(f, ForAll):
        return True
    if isinstance(f, Not):
        return _extends_right(f.sub)
    return False


def print_formula(f: Formula) -> str:
    if isinstance(f, Not):
        inner = print_formula(f.sub)
        if isinstance(f.sub, Eq):
            inner = "(" + inner + ")"
        return "~" + inner
    if isinstance(f, Implies):
        left = print_formula(f.left)
        if _extends_right(f.left):
            left = "(" + left + ")"
        return "(%s -> %s)" % (left, print_formula(f.right))
    if isinstance(f, ForAll):
        return "forall x%d. %s" % (f.var, print_formula(f.body))
    if isinstance(f, Eq):
        return "%s = %s" % (print_term(f.left), print_term(f.right))
    return "Dem(%s)" % print_term(f.arg)


# --- parser ------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow2><->)|(?P<arrow>->)|(?P<sym>[~&|().,=])"
    r"|(?P<var>x\d+)|(?P<num>\d+)|(?P<word>[A-Za-z_]+))"
)

_KEYWORDS = {"forall", "exists", "Dem", "sub", "diag", "S"}


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError("unexpected character %r" % text[pos], pos)
        if m.lastgroup == "word" and m.group("word") not in _KEYWORDS:
            raise ParseError("unknown identifier %r" % m.group("word"), m.start("word"))
        tokens.append((m.group().strip(), m.start() + (len(m.group()) - len(m.group().lstrip()))))
        pos = m.end()
    tokens.append(("<end>", len(text)))
    return tokens


_TERM_START = {"0", "S", "sub", "diag"}


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, want: str):
        tok, pos = self.next()
        if tok != want:
            raise ParseError("expected %r, found %r" % (want, tok), pos)

    def fail(self, message: str):
        raise ParseError(message, self.tokens[self.i][1])

    # formula := iff
    def formula(self) -> Formula:
        left = self.implication()
        if self.peek() == "<->":
            self.next()
            right = self.formula()
            # (A -> B) & (B -> A)
            return Not(Implies(Implies(left, right), Not(Implies(right, left))))
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.next()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek() == "|":
            self.next()
            left = Implies(Not(left), self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.peek() == "&":
            self.next()
            left = Not(Implies(left, Not(self.unary())))
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.next()
            return Not(self.unary())
        if tok in ("forall", "exists"):
            self.next()
            var_tok, pos = self.next()
            if not var_tok.startswith("x") or not var_tok[1:].isdigit():
                raise ParseError("expected a variable after %r" % tok, pos)
            self.expect(".")
            body = self.formula()
            index = int(var_tok[1:])
            if tok == "forall":
                return ForAll(index, body)
            return Not(ForAll(index, Not(body)))
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok == "Dem":
            self.next()
            self.expect("(")
            t = self.term()
            self.expect(")")
            return Dem(t)
        if tok == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if tok in _TERM_START or tok.startswith("x") or tok.isdigit():
            left = self.term()
            self.expect("=")
            return Eq(left, self.term())
        self.fail("expected a formula, found %r" % tok)

    def term(self) -> Term:
        tok, pos = self.next()
        if tok == "0":
            return ZERO
        if tok.isdigit():
            n = int(tok)
            return numeral(n) if n <= NUMERAL_CHAIN_LIMIT else Num(n)
        if tok.startswith("x") and tok[1:].isdigit():
            return Var(int(tok[1:]))
        if tok == "S":
            self.expect("(")
            t = self.term()
            self.expect(")")
            return Succ(t)
        if tok == "diag":
            self.expect("(")
            t = self.term()
            self.expect(")")
            return Diag(t)
        if tok == "sub":
            self.expect("(")
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(")")
            return Sub(a, b)
        raise ParseError("expected a term, found %r" % tok, pos)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    tok, pos = p.tokens[p.i]
    if tok != "<end>":
        raise ParseError("trailing input %r" % tok, pos)
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    tok, pos = p.tokens[p.i]
    if tok != "<end>":
        raise ParseError("trailing input %r" % tok, pos)
    return t
