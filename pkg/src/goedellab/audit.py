"""Labeled meta-inference engine.

Replays the eleven-equation derivation chain and the two reductio
arguments over the designator algebra, tracking which labeled
assumptions every step consumes, flagging contradiction shapes, and
computing minimal inconsistent assumption subsets by exhaustive subset
re-checking.

All of Dem's logical behavior enters through labeled assumptions; the
engine itself only applies structural rules, which is what makes the
assumption audit meaningful.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import meta as M
from .errors import ParseError, WorkbenchError

# --- assumptions -------------------------------------------------------


@dataclass(frozen=True)
class Assumption:
    label: str
    schema: M.MetaFormula  # may contain the designator hole d*
    provenance: str = ""


BUILTIN_PROVENANCE = {
    "DEF_E": "definition of the diagonal-unprovability set E",
    "NEC_DEF": "provability closure of E's definition",
    "REFL": "reflection: whatever is provable is true",
    "COMP_E": "reconstruction: an unprovable diagonal instance has provable E-membership",
    "CONS": "consistency: no proposition is provable together with its negation",
}


# --- rules -------------------------------------------------------------


@dataclass(frozen=True)
class AssumptionRef:
    label: str
    template: M.Designator | None = None


@dataclass(frozen=True)
class UseAssumption:
    label: str
    template: M.Designator | None = None


@dataclass(frozen=True)
class Transpose:
    ref: str


@dataclass(frozen=True)
class IffElimF:
    ref: str


@dataclass(frozen=True)
class IffElimB:
    ref: str


@dataclass(frozen=True)
class Syllogism:
    first: str
    second: str


@dataclass(frozen=True)
class IffIntro:
    forward: str
    backward: str


@dataclass(frozen=True)
class Instantiate:
    ref: str
    var: str
    value: M.Const


@dataclass(frozen=True)
class RewriteE:
    ref: str


@dataclass(frozen=True)
class NegPush:
    ref: str


@dataclass(frozen=True)
class ModusPonens:
    implication: str
    antecedent: str


@dataclass(frozen=True)
class TautCons:
    """Conclusion stated, checked as a tautological consequence of the
    cited premises over their modal atoms (InE expanded definitionally)."""

    conclusion: M.MetaFormula
    premises: tuple[object, ...]  # step-id strings and AssumptionRefs


@dataclass(frozen=True)
class Suppose:
    formula: M.MetaFormula


@dataclass(frozen=True)
class Reductio:
    hypothesis: str
    positive: str
    negative: str


RuleApp = (
    UseAssumption
    | Transpose
    | IffElimF
    | IffElimB
    | Syllogism
    | IffIntro
    | Instantiate
    | RewriteE
    | NegPush
    | ModusPonens
    | TautCons
    | Suppose
    | Reductio
)


@dataclass(frozen=True)
class Step:
    id: str
    rule: RuleApp
    provenance: str = ""


@dataclass(frozen=True)
class DerivationScript:
    assumptions: tuple[Assumption, ...]
    steps: tuple[Step, ...]

    def assumption(self, label: str) -> Assumption:
        for a in self.assumptions:
            if a.label == label:
                return a
        raise RuleError("unknown assumption label %r" % label)

    def labels(self) -> list[str]:
        return [a.label for a in self.assumptions]


class RuleError(WorkbenchError):
    pass


# --- checked output ----------------------------------------------------


@dataclass
class CheckedStep:
    id: str
    formula: M.MetaFormula | None
    rule: RuleApp
    ok: bool
    reason: str | None
    assumptions: frozenset[str]
    hypotheses: frozenset[str]
    provenance: str = ""


@dataclass
class Finding:
    step: str
    pattern: str  # "iff-neg" | "dem-neg-iff" | "contradictory-pair"
    requires_consistency: bool
    detail: str
    unsat_confirmed: bool


@dataclass
class AuditReport:
    steps: list[CheckedStep]
    contradictions: list[Finding]
    classification: dict[str, str]
    consumed: frozenset[str]
    assumption_labels: list[str]
    minimal_inconsistent_subsets: list[list[str]] = field(default_factory=list)

    def step(self, id: str) -> CheckedStep:
        for s in self.steps:
            if s.id == id:
                return s
        raise KeyError(id)

    def all_valid(self) -> bool:
        return all(s.ok for s in self.steps)

    def to_json_dict(self) -> dict:
        return {
            "schema": "audit/1",
            "assumptions": self.assumption_labels,
            "steps": [
                {
                    "id": s.id,
                    "formula": M.print_meta(s.formula) if s.formula else None,
                    "rule": type(s.rule).__name__,
                    "valid": s.ok,
                    "reason": s.reason,
                    "assumptions": sorted(s.assumptions),
                    "hypotheses": sorted(s.hypotheses),
                    "provenance": s.provenance,
                }
                for s in self.steps
            ],
            "contradictions": [
                {
                    "step": f.step,
                    "pattern": f.pattern,
                    "requires_consistency": f.requires_consistency,
                    "detail": f.detail,
                    "unsat_confirmed": f.unsat_confirmed,
                }
                for f in self.contradictions
            ],
            "classification": dict(sorted(self.classification.items())),
            "consumed_assumptions": sorted(self.consumed),
            "minimal_inconsistent_subsets": [
                sorted(s) for s in self.minimal_inconsistent_subsets
            ],
        }


# --- rule application --------------------------------------------------


def _strip_prefix(phi: M.MetaFormula) -> tuple[list[str], M.MetaFormula]:
    prefix = []
    while isinstance(phi, M.ForAllIndex):
        prefix.append(phi.var)
        phi = phi.body
    return prefix, phi


def _rewrap(prefix: list[str], phi: M.MetaFormula) -> M.MetaFormula:
    for var in reversed(prefix):
        phi = M.ForAllIndex(var, phi)
    return phi


def _common_prefix(f1, f2):
    p1, m1 = _strip_prefix(f1)
    p2, m2 = _strip_prefix(f2)
    if p1 != p2:
        raise RuleError("quantifier prefixes differ: %s vs %s" % (p1, p2))
    return p1, m1, m2


def instantiate_assumption(
    assumption: Assumption, template: M.Designator | None
) -> M.MetaFormula:
    schema = assumption.schema
    if M.has_dvar(schema):
        if template is None:
            raise RuleError(
                "assumption %s is a designator schema; a [template] is required"
                % assumption.label
            )
        holes = _collect_dvars(schema)
        for hole in holes:
            schema = M.subst_dvar(schema, hole, template)
        for var in sorted(M.desig_metavars(template)):
            schema = M.ForAllIndex(var, schema)
    elif template is not None:
        raise RuleError("assumption %s takes no template" % assumption.label)
    return M.normalize(schema)


def _collect_dvars(phi: M.MetaFormula) -> set[str]:
    if isinstance(phi, (M.Assert, M.DemOf)):
        d = phi.desig
        names = set()
        while isinstance(d, M.NegD):
            d = d.sub
        if isinstance(d, M.DVar):
            names.add(d.name)
        return names
    if isinstance(phi, M.MNot):
        return _collect_dvars(phi.sub)
    if isinstance(phi, (M.MImplies, M.MIff)):
        return _collect_dvars(phi.left) | _collect_dvars(phi.right)
    if isinstance(phi, M.ForAllIndex):
        return _collect_dvars(phi.body)
    return set()


class _Engine:
    def __init__(self, script: DerivationScript, allowed: set[str] | None = None):
        self.script = script
        self.allowed = allowed  # None means every declared label
        self.checked: dict[str, CheckedStep] = {}

    def _use_label(self, label: str) -> None:
        self.script.assumption(label)  # raises on unknown
        if self.allowed is not None and label not in self.allowed:
            raise RuleError("assumption %s excluded from this run" % label)

    def _cited(self, ref: str) -> CheckedStep:
        if ref not in self.checked:
            raise RuleError("reference to unknown or later step %r" % ref)
        s = self.checked[ref]
        if not s.ok:
            raise RuleError("cites invalid step %r" % ref)
        return s

    def _premise_formula(self, ref) -> tuple[M.MetaFormula, frozenset, frozenset]:
        if isinstance(ref, AssumptionRef):
            self._use_label(ref.label)
            phi = instantiate_assumption(self.script.assumption(ref.label), ref.template)
            return phi, frozenset([ref.label]), frozenset()
        s = self._cited(ref)
        return s.formula, s.assumptions, s.hypotheses

    def run(self) -> list[CheckedStep]:
        out = []
        for step in self.script.steps:
            try:
                formula, deps, hyps = self._apply(step)
                cs = CheckedStep(
                    step.id, formula, step.rule, True, None, deps, hyps, step.provenance
                )
            except RuleError as e:
                cs = CheckedStep(
                    step.id,
                    None,
                    step.rule,
                    False,
                    str(e),
                    frozenset(),
                    frozenset(),
                    step.provenance,
                )
            if step.id in self.checked:
                cs = CheckedStep(
                    step.id,
                    None,
                    step.rule,
                    False,
                    "duplicate step id",
                    frozenset(),
                    frozenset(),
                    step.provenance,
                )
            self.checked[step.id] = cs
            out.append(cs)
        return out

    def _apply(self, step: Step):
        rule = step.rule
        if isinstance(rule, UseAssumption):
            self._use_label(rule.label)
            phi = instantiate_assumption(self.script.assumption(rule.label), rule.template)
            return phi, frozenset([rule.label]), frozenset()

        if isinstance(rule, Suppose):
            return M.normalize(rule.formula), frozenset(), frozenset([step.id])

        if isinstance(rule, (Transpose, IffElimF, IffElimB, RewriteE, NegPush)):
            s = self._cited(rule.ref)
            prefix, matrix = _strip_prefix(s.formula)
            if isinstance(rule, Transpose):
                if isinstance(matrix, M.MIff):
                    matrix = M.MIff(M.neg(matrix.left), M.neg(matrix.right))
                elif isinstance(matrix, M.MImplies):
                    matrix = M.MImplies(M.neg(matrix.right), M.neg(matrix.left))
                else:
                    raise RuleError("transpose needs an implication or equivalence")
            elif isinstance(rule, IffElimF):
                if not isinstance(matrix, M.MIff):
                    raise RuleError("iff-elim needs an equivalence")
                matrix = M.MImplies(matrix.left, matrix.right)
            elif isinstance(rule, IffElimB):
                if not isinstance(matrix, M.MIff):
                    raise RuleError("iff-elim needs an equivalence")
                matrix = M.MImplies(matrix.right, matrix.left)
            elif isinstance(rule, RewriteE):
                matrix = M.expand_ine(matrix)
            else:  # NegPush: normalization is already canonical
                pass
            return M.normalize(_rewrap(prefix, matrix)), s.assumptions, s.hypotheses

        if isinstance(rule, (Syllogism, IffIntro, ModusPonens)):
            ids = (
                (rule.first, rule.second)
                if isinstance(rule, Syllogism)
                else (rule.forward, rule.backward)
                if isinstance(rule, IffIntro)
                else (rule.implication, rule.antecedent)
            )
            s1, s2 = self._cited(ids[0]), self._cited(ids[1])
            deps = s1.assumptions | s2.assumptions
            hyps = s1.hypotheses | s2.hypotheses
            if isinstance(rule, ModusPonens):
                p1, m1 = _strip_prefix(s1.formula)
                if p1:
                    raise RuleError("modus ponens applies to unquantified steps")
                if not isinstance(m1, M.MImplies):
                    raise RuleError("step %r is not an implication" % ids[0])
                if m1.left != s2.formula:
                    raise RuleError("antecedent mismatch")
                return m1.right, deps, hyps
            prefix, m1, m2 = _common_prefix(s1.formula, s2.formula)
            if not isinstance(m1, M.MImplies) or not isinstance(m2, M.MImplies):
                raise RuleError("both cited steps must be implications")
            if isinstance(rule, Syllogism):
                if m1.right != m2.left:
                    raise RuleError("middle terms do not match")
                return _rewrap(prefix, M.MImplies(m1.left, m2.right)), deps, hyps
            if m1.left != m2.right or m1.right != m2.left:
                raise RuleError("implications are not mutually converse")
            return _rewrap(prefix, M.MIff(m1.left, m1.right)), deps, hyps

        if isinstance(rule, Instantiate):
            s = self._cited(rule.ref)
            if not isinstance(s.formula, M.ForAllIndex) or s.formula.var != rule.var:
                raise RuleError(
                    "step %r is not universally quantified over %r" % (rule.ref, rule.var)
                )
            body = M.subst_index(s.formula.body, rule.var, rule.value)
            return M.normalize(body), s.assumptions, s.hypotheses

        if isinstance(rule, TautCons):
            formulas, deps, hyps = [], frozenset(), frozenset()
            for ref in rule.premises:
                phi, d, h = self._premise_formula(ref)
                formulas.append(phi)
                deps |= d
                hyps |= h
            conclusion = M.normalize(rule.conclusion)
            if not M.tautological_consequence(formulas, conclusion):
                raise RuleError("stated conclusion is not a tautological consequence")
            return conclusion, deps, hyps

        if isinstance(rule, Reductio):
            hyp = self._cited(rule.hypothesis)
            if not isinstance(hyp.rule, Suppose):
                raise RuleError("%r is not a supposition" % rule.hypothesis)
            pos = self._cited(rule.positive)
            neg_ = self._cited(rule.negative)
            if M.neg(pos.formula) != neg_.formula and M.neg(neg_.formula) != pos.formula:
                raise RuleError("cited steps are not contradictory")
            if rule.hypothesis not in (pos.hypotheses | neg_.hypotheses):
                raise RuleError("contradiction does not depend on the supposition")
            hyps = (pos.hypotheses | neg_.hypotheses) - {rule.hypothesis}
            deps = pos.assumptions | neg_.assumptions
            return M.neg(hyp.formula), deps, hyps

        raise RuleError("unknown rule %r" % type(rule).__name__)


# --- contradiction detection and classification ------------------------


def _matrix(phi: M.MetaFormula) -> M.MetaFormula:
    return _strip_prefix(phi)[1]


def _find_contradictions(steps: list[CheckedStep]) -> list[Finding]:
    findings: list[Finding] = []
    # printed canonical formula -> (step id, formula)
    ground_seen: dict[str, tuple[str, M.MetaFormula]] = {}
    for s in steps:
        if not s.ok or s.hypotheses:
            continue
        m = _matrix(s.formula)
        if isinstance(m, M.MIff):
            left, right = m.left, m.right
            if M.neg(left) == right or M.neg(right) == left:
                findings.append(
                    Finding(
                        s.id,
                        "iff-neg",
                        False,
                        "equivalence of a statement with its own negation",
                        not M.satisfiable([m]),
                    )
                )
            elif isinstance(left, M.DemOf) and isinstance(right, M.DemOf):
                dl = M.normalize_desig(_expand_desig(left.desig))
                dr = M.normalize_desig(_expand_desig(right.desig))
                if M.normalize_desig(M.NegD(dl)) == dr:
                    findings.append(
                        Finding(
                            s.id,
                            "dem-neg-iff",
                            True,
                            "provability of a statement equivalent to provability "
                            "of its negation; contradictory given consistency",
                            False,
                        )
                    )
        if M.is_ground(s.formula):
            canon = M.normalize(M.expand_ine(s.formula))
            key = M.print_meta(canon)
            neg_key = M.print_meta(M.neg(M.expand_ine(s.formula)))
            if neg_key in ground_seen:
                other_id, other = ground_seen[neg_key]
                findings.append(
                    Finding(
                        s.id,
                        "contradictory-pair",
                        False,
                        "contradicts step %s" % other_id,
                        not M.satisfiable([canon, other]),
                    )
                )
            ground_seen.setdefault(key, (s.id, canon))
    return findings


def _expand_desig(d: M.Designator) -> M.Designator:
    if isinstance(d, M.InE):
        return M.App(M.Q, d.arg)
    if isinstance(d, M.NegD):
        return M.NegD(_expand_desig(d.sub))
    return d


def _ground_theory(steps: list[CheckedStep]) -> list[M.MetaFormula]:
    return [
        s.formula
        for s in steps
        if s.ok and not s.hypotheses and M.is_ground(s.formula)
    ]


def _ground_designators(steps: list[CheckedStep]) -> list[M.Designator]:
    seen: dict[str, M.Designator] = {}

    def visit(phi: M.MetaFormula) -> None:
        if isinstance(phi, (M.Assert, M.DemOf)):
            d = M.normalize_desig(_expand_desig(phi.desig))
            while isinstance(d, M.NegD):
                d = d.sub
            if not M.desig_metavars(d) and not isinstance(d, M.DVar):
                seen.setdefault(M.print_desig(d), d)
        elif isinstance(phi, M.MNot):
            visit(phi.sub)
        elif isinstance(phi, (M.MImplies, M.MIff)):
            visit(phi.left)
            visit(phi.right)
        elif isinstance(phi, M.ForAllIndex):
            visit(phi.body)

    for s in steps:
        if s.ok and not s.hypotheses and M.is_ground(s.formula):
            visit(s.formula)
    return [seen[k] for k in sorted(seen)]


def classify(d: M.Designator, theory: list[M.MetaFormula]) -> str:
    """Provability status of the designated proposition under the ground
    facts of a report: provable, refutable, independent, overdetermined,
    or unknown when neither side is settled."""
    d = M.normalize_desig(_expand_desig(d))
    pos = M.DemOf(d)
    neg_side = M.DemOf(M.normalize_desig(M.NegD(d)))

    def entails(phi: M.MetaFormula) -> bool:
        return M.tautological_consequence(theory, phi)

    p, n = entails(pos), entails(neg_side)
    if p and n:
        return "overdetermined"
    if p:
        return "provable"
    if n:
        return "refutable"
    if entails(M.MNot(pos)) and entails(M.MNot(neg_side)):
        return "independent"
    return "unknown"


# --- top-level checking ------------------------------------------------


def check_script(
    script: DerivationScript, allowed: set[str] | None = None
) -> AuditReport:
    steps = _Engine(script, allowed).run()
    findings = _find_contradictions(steps)
    theory = _ground_theory(steps)
    classification = {
        M.print_desig(d): classify(d, theory) for d in _ground_designators(steps)
    }
    consumed: frozenset[str] = frozenset()
    for s in steps:
        if s.ok:
            consumed |= s.assumptions
    return AuditReport(
        steps=steps,
        contradictions=findings,
        classification=classification,
        consumed=consumed,
        assumption_labels=script.labels(),
    )


def _has_contradiction(report: AuditReport, labels: set[str]) -> bool:
    for f in report.contradictions:
        if not f.requires_consistency:
            return True
        if "CONS" in labels:
            return True
    return False


def minimal_inconsistent_subsets(script: DerivationScript) -> list[list[str]]:
    """All subset-minimal assumption-label sets from which some
    contradiction step of the script remains derivable."""
    labels = script.labels()
    if len(labels) > 6:
        raise WorkbenchError("subset search limited to 6 assumptions")
    inconsistent: list[frozenset[str]] = []
    for r in range(len(labels) + 1):
        for combo in itertools.combinations(labels, r):
            s = frozenset(combo)
            if any(m <= s for m in inconsistent):
                continue  # a subset already derives the contradiction
            report = check_script(script, allowed=set(s))
            if _has_contradiction(report, set(s)):
                inconsistent.append(s)
    return sorted([sorted(s) for s in inconsistent])


# --- script text format ------------------------------------------------
#
#   assume LABEL : <meta-formula>
#   step ID := assume LABEL [<designator>]?
#   step ID := transpose REF | ifff REF | iffb REF | rewriteE REF | negpush REF
#   step ID := syll R1 R2 | iffi R1 R2 | mp R1 R2
#   step ID := inst REF VAR CONST
#   step ID := derive <meta-formula> from P1, P2, ...
#   step ID := suppose <meta-formula>
#   step ID := reductio H by R1, R2
#   an optional trailing `! note` records step provenance


def _parse_premise_ref(text: str, known_steps: set[str], known_labels: set[str]):
    text = text.strip()
    if "[" in text and text.endswith("]"):
        label, inner = text[:-1].split("[", 1)
        return AssumptionRef(label.strip(), M.parse_desig(inner))
    if text in known_steps:
        return text
    if text in known_labels:
        return AssumptionRef(text)
    raise ParseError("unknown premise reference %r" % text)


def parse_script(text: str) -> DerivationScript:
    assumptions: list[Assumption] = []
    steps: list[Step] = []
    known_labels: set[str] = set()
    known_steps: set[str] = set()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("assume "):
            rest = line[len("assume "):]
            if ":" not in rest:
                raise ParseError("assume line needs 'LABEL : formula'")
            label, formula_text = (s.strip() for s in rest.split(":", 1))
            assumptions.append(
                Assumption(
                    label,
                    M.parse_meta(formula_text),
                    BUILTIN_PROVENANCE.get(label, "script-declared"),
                )
            )
            if label in known_labels:
                raise ParseError("duplicate assumption label %r" % label)
            known_labels.add(label)
            continue
        if not line.startswith("step "):
            raise ParseError("unrecognized line %r" % line)
        rest = line[len("step "):]
        if ":=" not in rest:
            raise ParseError("step line needs 'ID := rule'")
        step_id, rule_text = (s.strip() for s in rest.split(":=", 1))
        provenance = ""
        if "!" in rule_text:
            rule_text, provenance = (s.strip() for s in rule_text.rsplit("!", 1))
        rule = _parse_rule(rule_text, known_steps, known_labels)
        steps.append(Step(step_id, rule, provenance))
        known_steps.add(step_id)
    return DerivationScript(tuple(assumptions), tuple(steps))


def _parse_rule(text: str, known_steps: set[str], known_labels: set[str]) -> RuleApp:
    head, _, rest = text.partition(" ")
    rest = rest.strip()
    if head == "assume":
        if "[" in rest and rest.endswith("]"):
            label, inner = rest[:-1].split("[", 1)
            return UseAssumption(label.strip(), M.parse_desig(inner))
        return UseAssumption(rest)
    if head == "transpose":
        return Transpose(rest)
    if head == "ifff":
        return IffElimF(rest)
    if head == "iffb":
        return IffElimB(rest)
    if head == "rewriteE":
        return RewriteE(rest)
    if head == "negpush":
        return NegPush(rest)
    if head in ("syll", "iffi", "mp"):
        parts = rest.split()
        if len(parts) != 2:
            raise ParseError("%s cites two steps" % head)
        cls = {"syll": Syllogism, "iffi": IffIntro, "mp": ModusPonens}[head]
        return cls(parts[0], parts[1])
    if head == "inst":
        parts = rest.split()
        if len(parts) != 3:
            raise ParseError("inst needs: inst REF VAR CONST")
        value = M.Q if parts[2] == "q" else M.Const(int(parts[2]))
        return Instantiate(parts[0], parts[1], value)
    if head == "suppose":
        return Suppose(M.parse_meta(rest))
    if head == "derive":
        if " from " not in rest:
            raise ParseError("derive needs: derive FORMULA from REF, ...")
        formula_text, refs_text = rest.rsplit(" from ", 1)
        refs = tuple(
            _parse_premise_ref(r, known_steps, known_labels)
            for r in refs_text.split(",")
        )
        return TautCons(M.parse_meta(formula_text), refs)
    if head == "reductio":
        if " by " not in rest:
            raise ParseError("reductio needs: reductio H by R1, R2")
        hyp, refs_text = rest.split(" by ", 1)
        refs = [r.strip() for r in refs_text.split(",")]
        if len(refs) != 2:
            raise ParseError("reductio cites two contradictory steps")
        return Reductio(hyp.strip(), refs[0], refs[1])
    raise ParseError("unknown rule %r" % head)


# --- shipped scripts ---------------------------------------------------

CANONICAL_SCRIPT_TEXT = """\
# Replay of the eleven-equation derivation chain.
assume DEF_E   : all n. InE(n) <-> ~Dem[App(n,n)]
assume NEC_DEF : all n. Dem[App(n,n)] -> Dem[~InE(n)]
assume REFL    : Dem[d*] -> d*
assume COMP_E  : all n. ~Dem[App(n,n)] -> Dem[InE(n)]

step 1  := assume DEF_E
step 2  := transpose 1
step 3  := assume NEC_DEF
step 4  := assume REFL [~InE(n)]
step 5  := ifff 2
step 6  := syll 4 5
step 7  := iffi 6 3
step 8  := rewriteE 7
step 9  := derive all n. Dem[App(q,n)] <-> ~Dem[App(n,n)] from 1, REFL[InE(n)], COMP_E ! reconstruction
step 10 := inst 8 n q
step 11 := inst 9 n q
"""

GOEDEL_SCRIPT_TEXT = """\
# The two reductio arguments; only DEF_E, REFL and CONS are consumed.
assume DEF_E : all n. InE(n) <-> ~Dem[App(n,n)]
assume REFL  : Dem[d*] -> d*
assume CONS  : Dem[d*] -> ~Dem[~d*]

step 1  := assume DEF_E
step 2  := inst 1 n q
step 3  := rewriteE 2

# branch 1: suppose the diagonal sentence is provable
step h1 := suppose Dem[App(q,q)]
step 4  := assume REFL [App(q,q)]
step 5  := mp 4 h1
step 6  := ifff 3
step 7  := mp 6 5
step r1 := reductio h1 by h1, 7

# branch 2: suppose its negation is provable
step h2 := suppose Dem[~App(q,q)]
step 8  := assume REFL [~App(q,q)]
step 9  := mp 8 h2
step 10 := transpose 3
step 11 := ifff 10
step 12 := mp 11 9
step 13 := assume CONS [App(q,q)]
step 14 := mp 13 12
step r2 := reductio h2 by h2, 14
"""

GOEDEL_EXTENSION_TEXT = """\
# With the reconstructed completeness premise added, the independence
# verdict collapses into overdetermination.
assume COMP_E : all n. ~Dem[App(n,n)] -> Dem[InE(n)]

step x1 := assume COMP_E
step x2 := inst x1 n q
step x3 := rewriteE x2
step x4 := mp x3 r1
"""


def canonical_antinomy_script() -> DerivationScript:
    return parse_script(CANONICAL_SCRIPT_TEXT)


def goedel_script(extended: bool = False) -> DerivationScript:
    text = GOEDEL_SCRIPT_TEXT
    if extended:
        text += GOEDEL_EXTENSION_TEXT
    return parse_script(text)


def goedel_replay(extended: bool = False) -> AuditReport:
    return check_script(goedel_script(extended))


def compare_modes() -> dict:
    """Which labeled premises are exclusive to the paradoxical replay."""
    canonical = check_script(canonical_antinomy_script())
    goedel = goedel_replay()
    a, b = canonical.consumed, goedel.consumed
    return {
        "schema": "audit-compare/1",
        "both": sorted(a & b),
        "only_canonical": sorted(a - b),
        "only_goedel": sorted(b - a),
        "canonical_classification": canonical.classification,
        "goedel_classification": goedel.classification,
    }
