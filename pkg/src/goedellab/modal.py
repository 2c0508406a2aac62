"""Decision procedures for the modal logics K, K4 and GL.

Two independent engines are provided on purpose:

* a direct Kripke-model checker (`KripkeModel.forces`) — the small
  trusted base;
* an exhaustive finite-model search (`find_model`) whose frames are
  enumerated constructively (GL frames are exactly the finite strict
  partial orders) and whose valuation sweep is vectorized with numpy;
* a tableau satisfiability procedure (`is_satisfiable` / `is_valid`)
  that decides the logics outright.

Every model returned by the search is re-verified by the direct checker
before it leaves this module.  Search bounds are explicit; exceeding
them raises ResourceBound rather than returning a silently wrong answer.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ParseError, ResourceBound, WorkbenchError

LOGICS = ("K", "K4", "GL")

# model-search caps; the tableau has no world bound
GL_MAX_WORLDS = 6
K_MAX_WORLDS = 4
MAX_SEARCH_BITS = 22  # atoms * worlds valuation-space bound


# --- syntax ------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Neg:
    sub: "ModalFormula"


@dataclass(frozen=True)
class Imp:
    left: "ModalFormula"
    right: "ModalFormula"


@dataclass(frozen=True)
class Box:
    sub: "ModalFormula"


ModalFormula = Atom | Neg | Imp | Box


def Dia(f: ModalFormula) -> ModalFormula:
    return Neg(Box(Neg(f)))


def And(a: ModalFormula, b: ModalFormula) -> ModalFormula:
    return Neg(Imp(a, Neg(b)))


def Or(a: ModalFormula, b: ModalFormula) -> ModalFormula:
    return Imp(Neg(a), b)


def Iff(a: ModalFormula, b: ModalFormula) -> ModalFormula:
    return And(Imp(a, b), Imp(b, a))


def atoms_of(f: ModalFormula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, (Neg, Box)):
        return atoms_of(f.sub)
    return atoms_of(f.left) | atoms_of(f.right)


def modal_depth(f: ModalFormula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Neg):
        return modal_depth(f.sub)
    if isinstance(f, Box):
        return 1 + modal_depth(f.sub)
    return max(modal_depth(f.left), modal_depth(f.right))


def print_modal(f: ModalFormula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Neg):
        return "~" + print_modal(f.sub)
    if isinstance(f, Box):
        return "[]" + print_modal(f.sub)
    return "(%s -> %s)" % (print_modal(f.left), print_modal(f.right))


_MODAL_TOKEN_RE = re.compile(
    r"\s*(?:(?P<box>\[\])|(?P<dia><>)|(?P<iff><->)|(?P<arrow>->)"
    r"|(?P<sym>[~&|()])|(?P<word>[a-z][a-z0-9_]*))"
)


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _MODAL_TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError("unexpected character %r" % text[pos], pos)
        tokens.append((m.group().strip(), pos))
        pos = m.end()
    tokens.append(("<end>", len(text)))
    return tokens


class _Parser:
    """Precedence (loosest first): <->, ->, |, &, unary.  Conjunction,
    disjunction, equivalence and diamond desugar into the ~/->/[] core."""

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def next(self) -> tuple[str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, want: str) -> None:
        tok, pos = self.next()
        if tok != want:
            raise ParseError("expected %r, found %r" % (want, tok), pos)

    def formula(self) -> ModalFormula:
        left = self.implication()
        if self.peek() == "<->":
            self.next()
            return Iff(left, self.formula())
        return left

    def implication(self) -> ModalFormula:
        left = self.disjunction()
        if self.peek() == "->":
            self.next()
            return Imp(left, self.implication())
        return left

    def disjunction(self) -> ModalFormula:
        left = self.conjunction()
        while self.peek() == "|":
            self.next()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> ModalFormula:
        left = self.unary()
        while self.peek() == "&":
            self.next()
            left = And(left, self.unary())
        return left

    def unary(self) -> ModalFormula:
        tok, pos = self.next()
        if tok == "~":
            return Neg(self.unary())
        if tok == "[]":
            return Box(self.unary())
        if tok == "<>":
            return Dia(self.unary())
        if tok == "(":
            f = self.formula()
            self.expect(")")
            return f
        if re.fullmatch(r"[a-z][a-z0-9_]*", tok):
            return Atom(tok)
        raise ParseError("expected a formula, found %r" % tok, pos)


def parse_modal(text: str) -> ModalFormula:
    p = _Parser(text)
    f = p.formula()
    tok, pos = p.tokens[p.i]
    if tok != "<end>":
        raise ParseError("trailing input %r" % tok, pos)
    return f


# --- Kripke models: the trusted base -----------------------------------


@dataclass(frozen=True)
class KripkeModel:
    worlds: int
    relation: frozenset[tuple[int, int]]
    valuation: tuple[tuple[str, frozenset[int]], ...]  # sorted by atom

    def extension(self, atom: str) -> frozenset[int]:
        return dict(self.valuation).get(atom, frozenset())

    def successors(self, w: int) -> list[int]:
        return [v for (u, v) in self.relation if u == w]

    def is_transitive(self) -> bool:
        r = self.relation
        return all((a, d) in r for (a, b) in r for (c, d) in r if b == c)

    def is_irreflexive(self) -> bool:
        return all(a != b for (a, b) in self.relation)

    def frame_ok(self, logic: str) -> bool:
        """On finite frames, transitive + irreflexive characterizes GL
        (converse well-foundedness is automatic)."""
        if logic == "K":
            return True
        if logic == "K4":
            return self.is_transitive()
        if logic == "GL":
            return self.is_transitive() and self.is_irreflexive()
        raise WorkbenchError("unknown logic %r" % logic)

    def forces(self, w: int, f: ModalFormula) -> bool:
        if not 0 <= w < self.worlds:
            raise WorkbenchError("world %d out of range" % w)
        if isinstance(f, Atom):
            return w in self.extension(f.name)
        if isinstance(f, Neg):
            return not self.forces(w, f.sub)
        if isinstance(f, Imp):
            return (not self.forces(w, f.left)) or self.forces(w, f.right)
        return all(self.forces(v, f.sub) for v in self.successors(w))

    def to_json_dict(self) -> dict:
        return {
            "worlds": self.worlds,
            "relation": sorted([list(p) for p in self.relation]),
            "valuation": {a: sorted(ws) for a, ws in self.valuation},
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "KripkeModel":
        try:
            worlds = int(d["worlds"])
            relation = frozenset((int(a), int(b)) for a, b in d["relation"])
            valuation = tuple(
                sorted(
                    (str(a), frozenset(int(w) for w in ws))
                    for a, ws in d.get("valuation", {}).items()
                )
            )
        except (KeyError, TypeError, ValueError) as e:
            raise WorkbenchError("malformed model description: %s" % e)
        m = cls(worlds, relation, valuation)
        for a, b in relation:
            if not (0 <= a < worlds and 0 <= b < worlds):
                raise WorkbenchError("relation pair (%d,%d) out of range" % (a, b))
        for a, ws in valuation:
            for w in ws:
                if not 0 <= w < worlds:
                    raise WorkbenchError("valuation world %d out of range" % w)
        return m

    @classmethod
    def load(cls, path: str) -> "KripkeModel":
        with open(path) as fh:
            try:
                return cls.from_json_dict(json.load(fh))
            except json.JSONDecodeError as e:
                raise WorkbenchError("model file is not valid JSON: %s" % e)


def make_model(
    worlds: int, relation, valuation: dict[str, set[int]]
) -> KripkeModel:
    return KripkeModel(
        worlds,
        frozenset(tuple(p) for p in relation),
        tuple(sorted((a, frozenset(ws)) for a, ws in valuation.items())),
    )


# --- frame enumeration -------------------------------------------------
#
# Frames are kept as succ-bitmask tuples: succ[w] has bit v set iff wRv.


def _gl_frames(max_n: int):
    """All strict partial orders on {0..n-1}, sizes ascending, each
    exactly once.  Element k joins an existing order with a predecessor
    set P (closed under earlier predecessors) and a successor set S
    (closed under earlier successors) such that P x S already lies in
    the order; then P, S are exactly k's neighborhoods and the extension
    is again transitive, which makes the construction canonical."""

    def exact(target: int, n: int, succ: list[int], pred: list[int]):
        if n == target:
            yield n, tuple(succ)
            return
        down_closed = [
            p
            for p in range(1 << n)
            if all(pred[x] & ~p == 0 for x in range(n) if p >> x & 1)
        ]
        up_closed = [
            s
            for s in range(1 << n)
            if all(succ[x] & ~s == 0 for x in range(n) if s >> x & 1)
        ]
        for p in down_closed:
            for s in up_closed:
                if p & s:
                    continue
                if any(s & ~succ[x] for x in range(n) if p >> x & 1):
                    continue
                new_succ = [
                    succ[x] | (1 << n) if p >> x & 1 else succ[x] for x in range(n)
                ]
                new_pred = [
                    pred[x] | (1 << n) if s >> x & 1 else pred[x] for x in range(n)
                ]
                new_succ.append(s)
                new_pred.append(p)
                yield from exact(target, n + 1, new_succ, new_pred)

    for target in range(1, max_n + 1):
        yield from exact(target, 0, [], [])


def _k_frames(max_n: int, transitive: bool):
    for n in range(1, max_n + 1):
        pairs = [(a, b) for a in range(n) for b in range(n)]
        for bits in range(1 << (n * n)):
            succ = [0] * n
            for i, (a, b) in enumerate(pairs):
                if bits >> i & 1:
                    succ[a] |= 1 << b
            if transitive:
                ok = True
                for a in range(n):
                    m, acc = succ[a], succ[a]
                    while m:
                        b = (m & -m).bit_length() - 1
                        m &= m - 1
                        acc |= succ[b]
                    if acc & ~succ[a]:
                        ok = False
                        break
                if not ok:
                    continue
            yield n, tuple(succ)


def _frames(logic: str, max_worlds: int | None):
    if logic == "GL":
        bound = GL_MAX_WORLDS if max_worlds is None else max_worlds
        if bound > GL_MAX_WORLDS:
            raise ResourceBound(
                "GL frame search capped at %d worlds" % GL_MAX_WORLDS
            )
        return _gl_frames(bound)
    if logic in ("K", "K4"):
        bound = K_MAX_WORLDS if max_worlds is None else max_worlds
        if bound > K_MAX_WORLDS:
            raise ResourceBound(
                "%s frame search capped at %d worlds" % (logic, K_MAX_WORLDS)
            )
        return _k_frames(bound, transitive=logic == "K4")
    raise WorkbenchError("unknown logic %r" % logic)


# --- vectorized valuation sweep ----------------------------------------


@lru_cache(maxsize=32)
def _extensions(n: int, k: int) -> tuple:
    """For k atoms on n worlds, column i of the result enumerates the
    i-th atom's extension bitmask across all (2^n)^k valuations."""
    idx = np.arange(1 << (n * k), dtype=np.uint32)
    full = np.uint32((1 << n) - 1)
    return tuple((idx >> np.uint32(i * n)) & full for i in range(k))


def _sweep(f: ModalFormula, succ: tuple[int, ...], atom_order: dict[str, int]):
    n = len(succ)
    ext = _extensions(n, len(atom_order))
    full = np.uint32((1 << n) - 1)

    def ev(g: ModalFormula):
        if isinstance(g, Atom):
            return ext[atom_order[g.name]]
        if isinstance(g, Neg):
            return full & ~ev(g.sub)
        if isinstance(g, Imp):
            return (full & ~ev(g.left)) | ev(g.right)
        sub = ev(g.sub)
        out = np.zeros_like(sub)
        for w in range(n):
            sw = np.uint32(succ[w])
            out |= np.where((sub & sw) == sw, np.uint32(1 << w), np.uint32(0))
        return out

    return ev(f)


def _prop_satisfiable(f: ModalFormula) -> bool:
    """Treat Box-subformulas as opaque atoms; a propositionally
    unsatisfiable formula has no model in any logic."""
    keys: dict[str, ModalFormula] = {}

    def scan(g: ModalFormula):
        if isinstance(g, (Atom, Box)):
            keys.setdefault(print_modal(g), g)
        elif isinstance(g, Neg):
            scan(g.sub)
        else:
            scan(g.left)
            scan(g.right)

    scan(f)
    names = sorted(keys)
    if len(names) > 20:
        return True  # inconclusive; defer to the real procedures

    def ev(g: ModalFormula, a: dict[str, bool]) -> bool:
        if isinstance(g, (Atom, Box)):
            return a[print_modal(g)]
        if isinstance(g, Neg):
            return not ev(g.sub, a)
        return (not ev(g.left, a)) or ev(g.right, a)

    return any(
        ev(f, dict(zip(names, vals)))
        for vals in itertools.product((False, True), repeat=len(names))
    )


@dataclass(frozen=True)
class ModelWitness:
    model: KripkeModel
    world: int

    def to_json_dict(self) -> dict:
        d = self.model.to_json_dict()
        d["world"] = self.world
        return d


def find_model(
    f: ModalFormula, logic: str = "GL", max_worlds: int | None = None
) -> ModelWitness | None:
    """Exhaustive search for a pointed model of f within the logic's
    world bound.  None means no model exists within that bound (and, if
    the formula is propositionally unsatisfiable, no model at all)."""
    if logic not in LOGICS:
        raise WorkbenchError("unknown logic %r" % logic)
    if not _prop_satisfiable(f):
        return None
    atom_names = sorted(atoms_of(f))
    atom_order = {a: i for i, a in enumerate(atom_names)}
    for n, succ in _frames(logic, max_worlds):
        if n * len(atom_names) > MAX_SEARCH_BITS:
            raise ResourceBound(
                "%d atoms on %d worlds exceed the valuation sweep bound"
                % (len(atom_names), n)
            )
        masks = _sweep(f, succ, atom_order)
        hit = np.flatnonzero(masks)
        if hit.size:
            v = int(hit[0])
            world = int(masks[v]).bit_length() - 1
            valuation = {
                a: {w for w in range(n) if (v >> (i * n + w)) & 1}
                for a, i in atom_order.items()
            }
            relation = {
                (w, u) for w in range(n) for u in range(n) if succ[w] >> u & 1
            }
            model = make_model(n, relation, valuation)
            if not (model.frame_ok(logic) and model.forces(world, f)):
                raise AssertionError(
                    "search produced a bad witness (frame/forcing re-check failed)"
                )
            return ModelWitness(model, world)
    return None


# --- tableau decision procedure ----------------------------------------


def _push(branch: frozenset, f: ModalFormula) -> frozenset | None:
    """Add f (collapsing double negation); None signals branch closure."""
    while isinstance(f, Neg) and isinstance(f.sub, Neg):
        f = f.sub.sub
    comp = f.sub if isinstance(f, Neg) else Neg(f)
    if comp in branch:
        return None
    return branch | {f}


def _saturated(branch: frozenset):
    """Fully expand the propositional connectives; yields open saturated
    branches containing only atoms, negated atoms, Box and ~Box."""
    for f in branch:
        if isinstance(f, Imp):
            rest = branch - {f}
            for side in (Neg(f.left), f.right):
                b = _push(rest, side)
                if b is not None:
                    yield from _saturated(b)
            return
        if isinstance(f, Neg) and isinstance(f.sub, Imp):
            rest = branch - {f}
            b = _push(rest, f.sub.left)
            if b is not None:
                b = _push(b, Neg(f.sub.right))
            if b is not None:
                yield from _saturated(b)
            return
    yield branch


def _branch_satisfiable(
    branch: frozenset, logic: str, path: frozenset, budget: int
) -> bool:
    if budget < 0:
        raise ResourceBound("tableau depth bound exceeded")
    for sat in _saturated(branch):
        boxed = [g for g in sat if isinstance(g, Box)]
        diamonds = [
            g for g in sat if isinstance(g, Neg) and isinstance(g.sub, Box)
        ]
        ok = True
        for d in diamonds:
            psi = d.sub.sub  # d is ~[]psi
            succ: frozenset | None = frozenset()
            for g in boxed:
                succ = _push(succ, g.sub)
                if succ is not None and logic in ("K4", "GL"):
                    succ = _push(succ, g)
                if succ is None:
                    break
            if succ is not None and logic == "GL":
                succ = _push(succ, Box(psi))
            if succ is not None:
                succ = _push(succ, Neg(psi))
            if succ is None:
                ok = False
                break
            if logic == "K4" and succ in path:
                continue  # a transitive loop realizes this demand
            if not _branch_satisfiable(succ, logic, path | {succ}, budget - 1):
                ok = False
                break
        if ok:
            return True
    return False


def is_satisfiable(f: ModalFormula, logic: str = "GL") -> bool:
    if logic not in LOGICS:
        raise WorkbenchError("unknown logic %r" % logic)
    start = _push(frozenset(), f)
    if start is None:
        return False
    # GL re-expansion terminates because each successor fulfills one more
    # Box subformula for good; the budget is a generous safety net.
    budget = 4 * (len(_box_subformulas(f)) + 1) * (modal_depth(f) + 1) + 8
    return _branch_satisfiable(start, logic, frozenset([start]), budget)


def _box_subformulas(f: ModalFormula) -> set[ModalFormula]:
    if isinstance(f, Atom):
        return set()
    if isinstance(f, Neg):
        return _box_subformulas(f.sub)
    if isinstance(f, Box):
        return {f} | _box_subformulas(f.sub)
    return _box_subformulas(f.left) | _box_subformulas(f.right)


def is_valid(f: ModalFormula, logic: str = "GL") -> bool:
    return not is_satisfiable(Neg(f), logic)


def find_countermodel(
    f: ModalFormula, logic: str = "GL", max_worlds: int | None = None
) -> ModelWitness | None:
    return find_model(Neg(f), logic, max_worlds)


# --- verdicts and the shipped corpus -----------------------------------


def status(f: ModalFormula, logic: str) -> str:
    """One of: valid | unsatisfiable | satisfiable (n worlds) |
    satisfiable."""
    if not is_satisfiable(f, logic):
        return "unsatisfiable"
    if is_valid(f, logic):
        return "valid"
    try:
        witness = find_model(f, logic)
    except ResourceBound:
        witness = None
    if witness is not None:
        return "satisfiable (%d worlds)" % witness.model.worlds
    return "satisfiable"


NOTABLE_SCHEMAS: tuple[tuple[str, str], ...] = (
    ("K distribution", "[](p -> r) -> ([]p -> []r)"),
    ("transitivity 4", "[]p -> [][]p"),
    ("reflection T", "[]p -> p"),
    ("Loeb", "[]([]p -> p) -> []p"),
    ("provable iff refutable", "[]p <-> ~[]p"),
    ("fixed point", "p <-> ~[]p"),
    ("boxed fixed point", "[](p <-> ~[]p)"),
    ("neg-box agreement", "[]~p <-> []p"),
    ("consistency", "~[]f & ~[]~f"),
    ("box of falsum", "[](p & ~p)"),
)


def schema_verdicts() -> list[dict]:
    rows = []
    for name, text in NOTABLE_SCHEMAS:
        f = parse_modal(text)
        rows.append(
            {
                "name": name,
                "formula": text,
                **{logic: status(f, logic) for logic in LOGICS},
            }
        )
    return rows


# A fixed corpus exercised by the test suite: text, plus the expected
# satisfiability of the formula in each logic per the tableau.
CORPUS: tuple[str, ...] = (
    "p",
    "~p",
    "p -> p",
    "~(p -> p)",
    "p & ~p",
    "p | ~p",
    "[]p",
    "~[]p",
    "<>p",
    "[]p & ~p",
    "[]p -> p",
    "~([]p -> p)",
    "[]p -> [][]p",
    "~([]p -> [][]p)",
    "[](p -> r) -> ([]p -> []r)",
    "~([](p -> r) -> ([]p -> []r))",
    "[]([]p -> p) -> []p",
    "~([]([]p -> p) -> []p)",
    "[]p <-> ~[]p",
    "p <-> ~[]p",
    "[](p <-> ~[]p)",
    "[](p <-> ~[]p) & ~[]p",
    "[](p <-> ~[]p) & []p",
    "[]~p <-> []p",
    "<>p & <>~p",
    "[]p & <>~p",
    "<>(p & r) -> (<>p & <>r)",
    "(<>p & <>r) -> <>(p & r)",
    "[][]p -> []p",
    "<><>p -> <>p",
    "[]((p -> r) & p) -> []r",
    "<>p -> <>[]~p",
)
