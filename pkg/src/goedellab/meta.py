"""Schema language over proposition designators with a Dem modality.

Designators name object-level propositions abstractly: App(i, j) is the
proposition obtained by feeding index j to the i-th unary formula,
InE(j) says j lies in the diagonal-unprovability set E, and q is the
distinguished symbolic index of E's membership formula, so InE(t) and
App(q, t) designate the same proposition.

Dem[...] wraps a designator as a provability statement; a bare
designator asserts the designated proposition itself.  Negation on an
asserted designator and negation of the assertion are identified
(classical meta-logic); `normalize` picks the designator-side form as
canonical.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .errors import ParseError, ResourceBound

# --- index terms -------------------------------------------------------


@dataclass(frozen=True)
class MetaVar:
    name: str


@dataclass(frozen=True)
class Const:
    value: int | str  # a natural, or the symbolic index "q"


IndexTerm = MetaVar | Const

Q = Const("q")

# --- designators -------------------------------------------------------


@dataclass(frozen=True)
class App:
    func: IndexTerm
    arg: IndexTerm


@dataclass(frozen=True)
class InE:
    arg: IndexTerm


@dataclass(frozen=True)
class NegD:
    sub: "Designator"


@dataclass(frozen=True)
class DVar:
    """Designator hole in a schema (written d*)."""

    name: str


Designator = App | InE | NegD | DVar

# --- meta formulas -----------------------------------------------------


@dataclass(frozen=True)
class Assert:
    desig: Designator


@dataclass(frozen=True)
class DemOf:
    desig: Designator


@dataclass(frozen=True)
class MNot:
    sub: "MetaFormula"


@dataclass(frozen=True)
class MImplies:
    left: "MetaFormula"
    right: "MetaFormula"


@dataclass(frozen=True)
class MIff:
    left: "MetaFormula"
    right: "MetaFormula"


@dataclass(frozen=True)
class ForAllIndex:
    var: str
    body: "MetaFormula"


MetaFormula = Assert | DemOf | MNot | MImplies | MIff | ForAllIndex


# --- structural helpers ------------------------------------------------


def normalize_desig(d: Designator) -> Designator:
    if isinstance(d, NegD):
        inner = normalize_desig(d.sub)
        if isinstance(inner, NegD):
            return inner.sub
        return NegD(inner)
    return d


def normalize(phi: MetaFormula) -> MetaFormula:
    """Double negations out; assertion-level negation pushed into the
    designator (¬Assert(d) and Assert(¬d) are identified)."""
    if isinstance(phi, Assert):
        return Assert(normalize_desig(phi.desig))
    if isinstance(phi, DemOf):
        return DemOf(normalize_desig(phi.desig))
    if isinstance(phi, MNot):
        sub = normalize(phi.sub)
        if isinstance(sub, MNot):
            return sub.sub
        if isinstance(sub, Assert):
            return Assert(normalize_desig(NegD(sub.desig)))
        return MNot(sub)
    if isinstance(phi, MImplies):
        return MImplies(normalize(phi.left), normalize(phi.right))
    if isinstance(phi, MIff):
        return MIff(normalize(phi.left), normalize(phi.right))
    return ForAllIndex(phi.var, normalize(phi.body))


def neg(phi: MetaFormula) -> MetaFormula:
    return normalize(MNot(phi))


def desig_metavars(d: Designator) -> set[str]:
    if isinstance(d, App):
        return {t.name for t in (d.func, d.arg) if isinstance(t, MetaVar)}
    if isinstance(d, InE):
        return {d.arg.name} if isinstance(d.arg, MetaVar) else set()
    if isinstance(d, NegD):
        return desig_metavars(d.sub)
    return set()


def free_metavars(phi: MetaFormula) -> set[str]:
    if isinstance(phi, (Assert, DemOf)):
        return desig_metavars(phi.desig)
    if isinstance(phi, MNot):
        return free_metavars(phi.sub)
    if isinstance(phi, (MImplies, MIff)):
        return free_metavars(phi.left) | free_metavars(phi.right)
    return free_metavars(phi.body) - {phi.var}


def has_dvar(x) -> bool:
    if isinstance(x, (Assert, DemOf)):
        return has_dvar(x.desig)
    if isinstance(x, MNot):
        return has_dvar(x.sub)
    if isinstance(x, (MImplies, MIff)):
        return has_dvar(x.left) or has_dvar(x.right)
    if isinstance(x, ForAllIndex):
        return has_dvar(x.body)
    if isinstance(x, NegD):
        return has_dvar(x.sub)
    if isinstance(x, DVar):
        return True
    return False


def is_ground(phi: MetaFormula) -> bool:
    return not free_metavars(phi) and not has_dvar(phi)


def _map_desig(d: Designator, f) -> Designator:
    """Rebuild d with index terms passed through f."""
    if isinstance(d, App):
        return App(f(d.func), f(d.arg))
    if isinstance(d, InE):
        return InE(f(d.arg))
    if isinstance(d, NegD):
        return NegD(_map_desig(d.sub, f))
    return d


def subst_index(phi: MetaFormula, name: str, value: Const) -> MetaFormula:
    def on_term(t: IndexTerm) -> IndexTerm:
        return value if isinstance(t, MetaVar) and t.name == name else t

    if isinstance(phi, Assert):
        return Assert(_map_desig(phi.desig, on_term))
    if isinstance(phi, DemOf):
        return DemOf(_map_desig(phi.desig, on_term))
    if isinstance(phi, MNot):
        return MNot(subst_index(phi.sub, name, value))
    if isinstance(phi, MImplies):
        return MImplies(
            subst_index(phi.left, name, value), subst_index(phi.right, name, value)
        )
    if isinstance(phi, MIff):
        return MIff(
            subst_index(phi.left, name, value), subst_index(phi.right, name, value)
        )
    if phi.var == name:
        return phi
    return ForAllIndex(phi.var, subst_index(phi.body, name, value))


def _subst_dvar_desig(d: Designator, name: str, repl: Designator) -> Designator:
    if isinstance(d, DVar):
        return repl if d.name == name else d
    if isinstance(d, NegD):
        return NegD(_subst_dvar_desig(d.sub, name, repl))
    return d


def subst_dvar(phi: MetaFormula, name: str, repl: Designator) -> MetaFormula:
    if isinstance(phi, Assert):
        return Assert(_subst_dvar_desig(phi.desig, name, repl))
    if isinstance(phi, DemOf):
        return DemOf(_subst_dvar_desig(phi.desig, name, repl))
    if isinstance(phi, MNot):
        return MNot(subst_dvar(phi.sub, name, repl))
    if isinstance(phi, MImplies):
        return MImplies(
            subst_dvar(phi.left, name, repl), subst_dvar(phi.right, name, repl)
        )
    if isinstance(phi, MIff):
        return MIff(subst_dvar(phi.left, name, repl), subst_dvar(phi.right, name, repl))
    return ForAllIndex(phi.var, subst_dvar(phi.body, name, repl))


def expand_ine(phi: MetaFormula) -> MetaFormula:
    """Definitional rewrite: InE(t) and App(q, t) designate the same
    proposition; expand to the App form."""

    def on_desig(d: Designator) -> Designator:
        if isinstance(d, InE):
            return App(Q, d.arg)
        if isinstance(d, NegD):
            return NegD(on_desig(d.sub))
        return d

    if isinstance(phi, Assert):
        return Assert(on_desig(phi.desig))
    if isinstance(phi, DemOf):
        return DemOf(on_desig(phi.desig))
    if isinstance(phi, MNot):
        return MNot(expand_ine(phi.sub))
    if isinstance(phi, MImplies):
        return MImplies(expand_ine(phi.left), expand_ine(phi.right))
    if isinstance(phi, MIff):
        return MIff(expand_ine(phi.left), expand_ine(phi.right))
    return ForAllIndex(phi.var, expand_ine(phi.body))


def collapse_ine(d: Designator) -> Designator:
    """Inverse definitional rewrite on a designator: App(q, t) -> InE(t)."""
    if isinstance(d, App) and d.func == Q:
        return InE(d.arg)
    if isinstance(d, NegD):
        return NegD(collapse_ine(d.sub))
    return d


# --- printing ----------------------------------------------------------


def print_iterm(t: IndexTerm) -> str:
    return t.name if isinstance(t, MetaVar) else str(t.value)


def print_desig(d: Designator) -> str:
    if isinstance(d, App):
        return "App(%s,%s)" % (print_iterm(d.func), print_iterm(d.arg))
    if isinstance(d, InE):
        return "InE(%s)" % print_iterm(d.arg)
    if isinstance(d, NegD):
        return "~" + print_desig(d.sub)
    return d.name


def print_meta(phi: MetaFormula) -> str:
    if isinstance(phi, Assert):
        return print_desig(phi.desig)
    if isinstance(phi, DemOf):
        return "Dem[%s]" % print_desig(phi.desig)
    if isinstance(phi, MNot):
        return "~" + print_meta(phi.sub)
    if isinstance(phi, MImplies):
        return "(%s -> %s)" % (print_meta(phi.left), print_meta(phi.right))
    if isinstance(phi, MIff):
        return "(%s <-> %s)" % (print_meta(phi.left), print_meta(phi.right))
    return "all %s. %s" % (phi.var, print_meta(phi.body))


# --- parsing -----------------------------------------------------------

_META_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow2><->)|(?P<arrow>->)|(?P<sym>[~().,\[\]])"
    r"|(?P<num>\d+)|(?P<word>[A-Za-z_][A-Za-z0-9_]*\*?))"
)


def _meta_tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _META_TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError("unexpected character %r" % text[pos], pos)
        tokens.append((m.group().strip(), pos))
        pos = m.end()
    tokens.append(("<end>", len(text)))
    return tokens


class _MetaParser:
    def __init__(self, text: str):
        self.tokens = _meta_tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, want):
        tok, pos = self.next()
        if tok != want:
            raise ParseError("expected %r, found %r" % (want, tok), pos)

    def formula(self) -> MetaFormula:
        left = self.implication()
        if self.peek() == "<->":
            self.next()
            return MIff(left, self.formula())
        return left

    def implication(self) -> MetaFormula:
        left = self.unary()
        if self.peek() == "->":
            self.next()
            return MImplies(left, self.implication())
        return left

    def unary(self) -> MetaFormula:
        tok = self.peek()
        if tok == "~":
            self.next()
            return MNot(self.unary())
        if tok == "all":
            self.next()
            name, pos = self.next()
            if not re.fullmatch(r"[a-z][A-Za-z0-9_]*", name):
                raise ParseError("expected an index variable, got %r" % name, pos)
            self.expect(".")
            return ForAllIndex(name, self.formula())
        if tok == "Dem":
            self.next()
            self.expect("[")
            d = self.desig()
            self.expect("]")
            return DemOf(d)
        if tok == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        return Assert(self.desig())

    def desig(self) -> Designator:
        tok, pos = self.next()
        if tok == "~":
            return NegD(self.desig())
        if tok == "App":
            self.expect("(")
            i = self.iterm()
            self.expect(",")
            j = self.iterm()
            self.expect(")")
            return App(i, j)
        if tok == "InE":
            self.expect("(")
            j = self.iterm()
            self.expect(")")
            return InE(j)
        if tok.endswith("*"):
            return DVar(tok)
        raise ParseError("expected a designator, found %r" % tok, pos)

    def iterm(self) -> IndexTerm:
        tok, pos = self.next()
        if tok == "q":
            return Q
        if tok.isdigit():
            return Const(int(tok))
        if re.fullmatch(r"[a-z][A-Za-z0-9_]*", tok):
            return MetaVar(tok)
        raise ParseError("expected an index term, found %r" % tok, pos)


def parse_meta(text: str) -> MetaFormula:
    p = _MetaParser(text)
    f = p.formula()
    tok, pos = p.tokens[p.i]
    if tok != "<end>":
        raise ParseError("trailing input %r" % tok, pos)
    return f


def parse_desig(text: str) -> Designator:
    p = _MetaParser(text)
    d = p.desig()
    tok, pos = p.tokens[p.i]
    if tok != "<end>":
        raise ParseError("trailing input %r" % tok, pos)
    return d


# --- propositional engine over modal atoms -----------------------------

MAX_ATOMS = 14


def _atom_key(phi: MetaFormula) -> str:
    return print_meta(phi)


def collect_atoms(phi: MetaFormula, acc: dict[str, MetaFormula]) -> None:
    if isinstance(phi, (Assert, DemOf)):
        acc.setdefault(_atom_key(phi), phi)
    elif isinstance(phi, MNot):
        collect_atoms(phi.sub, acc)
    elif isinstance(phi, (MImplies, MIff)):
        collect_atoms(phi.left, acc)
        collect_atoms(phi.right, acc)
    else:
        collect_atoms(phi.body, acc)


def eval_meta(phi: MetaFormula, assignment: dict[str, bool]) -> bool:
    if isinstance(phi, (Assert, DemOf)):
        return assignment[_atom_key(phi)]
    if isinstance(phi, MNot):
        return not eval_meta(phi.sub, assignment)
    if isinstance(phi, MImplies):
        return (not eval_meta(phi.left, assignment)) or eval_meta(phi.right, assignment)
    if isinstance(phi, MIff):
        return eval_meta(phi.left, assignment) == eval_meta(phi.right, assignment)
    raise ValueError("quantified formula reached the propositional engine")


def _prepare(formulas: list[MetaFormula]) -> list[MetaFormula]:
    """Strip quantifier prefixes and canonicalize for atom identity.

    Distinct DemOf/Assert atoms over distinct designators are mutually
    independent: no theory of provability is baked in here.
    """
    out = []
    for phi in formulas:
        while isinstance(phi, ForAllIndex):
            phi = phi.body
        out.append(normalize(expand_ine(phi)))
    return out


def _assignments(formulas: list[MetaFormula]):
    acc: dict[str, MetaFormula] = {}
    for phi in formulas:
        collect_atoms(phi, acc)
    keys = sorted(acc)
    if len(keys) > MAX_ATOMS:
        raise ResourceBound("%d modal atoms exceed the truth-table bound" % len(keys))
    for values in itertools.product((False, True), repeat=len(keys)):
        yield dict(zip(keys, values))


def tautological_consequence(
    premises: list[MetaFormula], conclusion: MetaFormula
) -> bool:
    """Truth-table check over the modal atoms of premises and conclusion."""
    prepared = _prepare(premises + [conclusion])
    prems, concl = prepared[:-1], prepared[-1]
    for assignment in _assignments(prepared):
        if all(eval_meta(p, assignment) for p in prems) and not eval_meta(
            concl, assignment
        ):
            return False
    return True


def satisfiable(formulas: list[MetaFormula]) -> bool:
    prepared = _prepare(list(formulas))
    for assignment in _assignments(prepared):
        if all(eval_meta(p, assignment) for p in prepared):
            return True
    return False
