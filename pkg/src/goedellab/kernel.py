"""Minimal Hilbert-style proof checker.

The trusted core is deliberately tiny: three propositional schemas, the
universal-instantiation schema, modus ponens, generalization, premises,
and an evaluation oracle for closed term equations.  Schema instances
are given explicitly in the justification, so checking is syntactic
equality throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import codec
from . import formulas as F
from .errors import NotClosed, ParseError, ResourceBound

# eval_term refuses to enumerate past this index
MAX_EVAL_INDEX = 10_000


@dataclass(frozen=True)
class Axiom:
    schema: str  # P1 | P2 | P3 | INST
    binding: tuple[tuple[str, object], ...]  # sorted (name, Formula/Term/int)

    def bound(self) -> dict:
        return dict(self.binding)


@dataclass(frozen=True)
class ModusPonens:
    implication: int  # 1-based earlier step proving A -> B
    antecedent: int  # 1-based earlier step proving A


@dataclass(frozen=True)
class Generalize:
    step: int
    var: int


@dataclass(frozen=True)
class EvalFact:
    pass


@dataclass(frozen=True)
class Premise:
    label: str


Justification = Axiom | ModusPonens | Generalize | EvalFact | Premise


@dataclass(frozen=True)
class ProofObject:
    steps: tuple[tuple[F.Formula, Justification], ...]

    def last_formula(self) -> F.Formula:
        return self.steps[-1][0]


@dataclass(frozen=True)
class Verdict:
    ok: bool
    step: int | None = None  # 1-based first failing step
    reason: str | None = None


VALID = Verdict(True)


def eval_term(t: F.Term) -> int:
    """Arithmetic meaning of a closed term; sub/diag via the codec."""
    if isinstance(t, F.Var):
        raise NotClosed("cannot evaluate open term x%d" % t.index)
    if isinstance(t, F.Zero):
        return 0
    if isinstance(t, F.Num):
        return t.value
    if isinstance(t, F.Succ):
        n = 0
        while isinstance(t, F.Succ):
            n += 1
            t = t.arg
        return n + eval_term(t)
    if isinstance(t, F.Diag):
        return codec.diag_num(eval_term(t.arg))
    n = eval_term(t.left)
    if n > MAX_EVAL_INDEX:
        raise ResourceBound("refusing to enumerate to index %d" % n)
    return codec.sub_num(n, eval_term(t.right))


def _schema_formula(schema: str, b: dict) -> F.Formula:
    if schema == "P1":
        a, c = b["A"], b["B"]
        return F.Implies(a, F.Implies(c, a))
    if schema == "P2":
        a, c, d = b["A"], b["B"], b["C"]
        return F.Implies(
            F.Implies(a, F.Implies(c, d)),
            F.Implies(F.Implies(a, c), F.Implies(a, d)),
        )
    if schema == "P3":
        a, c = b["A"], b["B"]
        return F.Implies(F.Implies(F.Not(a), F.Not(c)), F.Implies(c, a))
    if schema == "INST":
        var, body, t = b["x"], b["A"], b["t"]
        if F.term_free_vars(t):
            raise NotClosed("INST needs a closed witness term")
        return F.Implies(F.ForAll(var, body), F.substitute(body, var, t))
    raise KeyError("unknown schema %s" % schema)


def check_proof(p: ProofObject, premises: dict[str, F.Formula] | None = None) -> Verdict:
    premises = premises or {}
    for k, (f, just) in enumerate(p.steps, start=1):

        def bad(reason: str) -> Verdict:
            return Verdict(False, k, reason)

        if isinstance(just, Axiom):
            try:
                expected = _schema_formula(just.schema, just.bound())
            except KeyError as e:
                return bad(str(e))
            except NotClosed as e:
                return bad(str(e))
            if expected != f:
                return bad("not an instance of %s under the given binding" % just.schema)
        elif isinstance(just, ModusPonens):
            for cited in (just.implication, just.antecedent):
                if not 1 <= cited < k:
                    return bad("forward reference to step %d" % cited)
            imp = p.steps[just.implication - 1][0]
            ant = p.steps[just.antecedent - 1][0]
            if not isinstance(imp, F.Implies):
                return bad("cited step %d is not an implication" % just.implication)
            if imp.left != ant:
                return bad("antecedent mismatch")
            if imp.right != f:
                return bad("consequent mismatch")
        elif isinstance(just, Generalize):
            if not 1 <= just.step < k:
                return bad("forward reference to step %d" % just.step)
            if f != F.ForAll(just.var, p.steps[just.step - 1][0]):
                return bad("not the generalization of step %d" % just.step)
        elif isinstance(just, EvalFact):
            if not isinstance(f, F.Eq):
                return bad("EVAL applies to term equations only")
            try:
                left, right = eval_term(f.left), eval_term(f.right)
            except (NotClosed, ResourceBound) as e:
                return bad("evaluation failed: %s" % e)
            if left != right:
                return bad("equation is false: %d != %d" % (left, right))
        elif isinstance(just, Premise):
            if just.label not in premises:
                return bad("undeclared premise %r" % just.label)
            if premises[just.label] != f:
                return bad("formula differs from premise %r" % just.label)
        else:
            return bad("unknown justification")
    return VALID


# --- proof file format -------------------------------------------------
#
#   premise LABEL : <formula>
#   1. <formula> ; P1[A := <formula>; B := <formula>]
#   2. <formula> ; MP 1 2 | GEN 1 x0 | EVAL | PREMISE LABEL
#                | INST[x := x0; A := <formula>; t := <term>]


def _parse_binding(text: str, schema: str) -> tuple[tuple[str, object], ...]:
    entries = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if ":=" not in part:
            raise ParseError("binding entry %r lacks ':='" % part)
        name, value = (s.strip() for s in part.split(":=", 1))
        if name == "x":
            if not value.startswith("x") or not value[1:].isdigit():
                raise ParseError("binding x needs a variable, got %r" % value)
            entries[name] = int(value[1:])
        elif name == "t":
            entries[name] = F.parse_term(value)
        else:
            entries[name] = F.parse_formula(value)
    return tuple(sorted(entries.items(), key=lambda kv: kv[0]))


def _parse_justification(text: str) -> Justification:
    text = text.strip()
    if text == "EVAL":
        return EvalFact()
    if text.startswith("PREMISE"):
        return Premise(text[len("PREMISE"):].strip())
    if text.startswith("MP"):
        parts = text.split()
        if len(parts) != 3:
            raise ParseError("MP cites two steps")
        return ModusPonens(int(parts[1]), int(parts[2]))
    if text.startswith("GEN"):
        parts = text.split()
        if len(parts) != 3 or not parts[2].startswith("x"):
            raise ParseError("GEN cites a step and a variable")
        return Generalize(int(parts[1]), int(parts[2][1:]))
    for schema in ("P1", "P2", "P3", "INST"):
        if text.startswith(schema + "["):
            if not text.endswith("]"):
                raise ParseError("unterminated binding in %r" % text)
            inner = text[len(schema) + 1 : -1]
            return Axiom(schema, _parse_binding(inner, schema))
    raise ParseError("unrecognized justification %r" % text)


def parse_proof_file(text: str) -> tuple[ProofObject, dict[str, F.Formula]]:
    premises: dict[str, F.Formula] = {}
    steps: list[tuple[F.Formula, Justification]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("premise"):
            rest = line[len("premise"):].strip()
            if ":" not in rest:
                raise ParseError("premise line needs 'LABEL : formula'")
            label, formula_text = (s.strip() for s in rest.split(":", 1))
            premises[label] = F.parse_formula(formula_text)
            continue
        if "." not in line:
            raise ParseError("step line needs 'k. formula ; justification'")
        num_text, rest = line.split(".", 1)
        if not num_text.strip().isdigit():
            raise ParseError("step line needs a leading number, got %r" % num_text)
        k = int(num_text)
        if k != len(steps) + 1:
            raise ParseError("step numbered %d, expected %d" % (k, len(steps) + 1))
        if ";" not in rest:
            raise ParseError("step %d lacks a justification" % k)
        formula_text, just_text = rest.split(";", 1)
        steps.append(
            (F.parse_formula(formula_text.strip()), _parse_justification(just_text))
        )
    return ProofObject(tuple(steps)), premises


def identity_proof(a: F.Formula) -> ProofObject:
    """The 5-step derivation of a -> a from P1 and P2."""
    aa = F.Implies(a, a)
    s1 = F.Implies(
        F.Implies(a, F.Implies(aa, a)),
        F.Implies(F.Implies(a, aa), aa),
    )
    s2 = F.Implies(a, F.Implies(aa, a))
    s3 = F.Implies(F.Implies(a, aa), aa)
    s4 = F.Implies(a, aa)
    bind = lambda **kw: tuple(sorted(kw.items()))
    return ProofObject(
        (
            (s1, Axiom("P2", bind(A=a, B=aa, C=a))),
            (s2, Axiom("P1", bind(A=a, B=aa))),
            (s3, ModusPonens(1, 2)),
            (s4, Axiom("P1", bind(A=a, B=a))),
            (aa, ModusPonens(3, 4)),
        )
    )
