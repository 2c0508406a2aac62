import itertools
import json

import pytest

from goedellab import audit
from goedellab import meta as M
from goedellab.errors import ParseError


@pytest.fixture(scope="module")
def canonical():
    return audit.check_script(audit.canonical_antinomy_script())


@pytest.fixture(scope="module")
def goedel():
    return audit.goedel_replay()


# --- the canonical replay ----------------------------------------------

CANONICAL_FORMULAS = {
    "1": "all n. (InE(n) <-> ~Dem[App(n,n)])",
    "2": "all n. (~InE(n) <-> Dem[App(n,n)])",
    "3": "all n. (Dem[App(n,n)] -> Dem[~InE(n)])",
    "4": "all n. (Dem[~InE(n)] -> ~InE(n))",
    "5": "all n. (~InE(n) -> Dem[App(n,n)])",
    "6": "all n. (Dem[~InE(n)] -> Dem[App(n,n)])",
    "7": "all n. (Dem[~InE(n)] <-> Dem[App(n,n)])",
    "8": "all n. (Dem[~App(q,n)] <-> Dem[App(n,n)])",
    "9": "all n. (Dem[App(q,n)] <-> ~Dem[App(n,n)])",
    "10": "(Dem[~App(q,q)] <-> Dem[App(q,q)])",
    "11": "(Dem[App(q,q)] <-> ~Dem[App(q,q)])",
}

CANONICAL_DEPS = {
    "1": {"DEF_E"},
    "2": {"DEF_E"},
    "3": {"NEC_DEF"},
    "4": {"REFL"},
    "5": {"DEF_E"},
    "6": {"DEF_E", "REFL"},
    "7": {"DEF_E", "NEC_DEF", "REFL"},
    "8": {"DEF_E", "NEC_DEF", "REFL"},
    "9": {"COMP_E", "DEF_E", "REFL"},
    "10": {"DEF_E", "NEC_DEF", "REFL"},
    "11": {"COMP_E", "DEF_E", "REFL"},
}


def test_canonical_has_eleven_valid_steps(canonical):
    assert [s.id for s in canonical.steps] == [str(k) for k in range(1, 12)]
    assert canonical.all_valid()
    for s in canonical.steps:
        assert M.print_meta(s.formula) == CANONICAL_FORMULAS[s.id]
        assert set(s.assumptions) == CANONICAL_DEPS[s.id]
        assert not s.hypotheses


def test_canonical_contradictions(canonical):
    found = {f.step: f for f in canonical.contradictions}
    assert set(found) == {"10", "11"}
    assert found["11"].pattern == "iff-neg"
    assert not found["11"].requires_consistency
    assert found["11"].unsat_confirmed
    assert found["10"].pattern == "dem-neg-iff"
    assert found["10"].requires_consistency


def test_canonical_classification_and_consumption(canonical):
    assert canonical.classification == {"App(q,q)": "overdetermined"}
    assert canonical.consumed == {"DEF_E", "NEC_DEF", "REFL", "COMP_E"}


def test_reconstruction_step_is_marked(canonical):
    assert canonical.step("9").provenance == "reconstruction"
    assert all(
        s.provenance == "" for s in canonical.steps if s.id != "9"
    )


# --- minimal inconsistent subsets --------------------------------------


def test_minimal_cores_verified_independently():
    script = audit.canonical_antinomy_script()
    cores = audit.minimal_inconsistent_subsets(script)
    assert cores == [["COMP_E", "DEF_E", "REFL"]]

    def inconsistent(labels):
        report = audit.check_script(script, allowed=set(labels))
        for f in report.contradictions:
            if not f.requires_consistency or "CONS" in labels:
                return True
        return False

    for core in cores:
        assert ["DEF_E"] != core
        assert inconsistent(core)
        for r in range(len(core)):
            for sub in itertools.combinations(core, r):
                assert not inconsistent(sub)
    # and no strictly smaller mixed subset anywhere derives it
    labels = script.labels()
    for r in range(3):
        for sub in itertools.combinations(labels, r):
            assert not inconsistent(sub)


# --- the independence replay -------------------------------------------


def test_goedel_branches_close_without_hypotheses(goedel):
    assert goedel.all_valid()
    r1, r2 = goedel.step("r1"), goedel.step("r2")
    assert M.print_meta(r1.formula) == "~Dem[App(q,q)]"
    assert M.print_meta(r2.formula) == "~Dem[~App(q,q)]"
    assert not r1.hypotheses and not r2.hypotheses
    assert r1.assumptions == {"DEF_E", "REFL"}
    assert r2.assumptions == {"DEF_E", "REFL", "CONS"}


def test_goedel_classifies_the_diagonal_as_independent(goedel):
    assert goedel.classification == {"App(q,q)": "independent"}
    assert goedel.consumed == {"DEF_E", "REFL", "CONS"}
    assert goedel.contradictions == []


def test_hypothetical_steps_carry_their_suppositions(goedel):
    assert goedel.step("5").hypotheses == {"h1"}
    assert goedel.step("7").hypotheses == {"h1"}
    assert goedel.step("12").hypotheses == {"h2"}
    assert goedel.step("h1").assumptions == frozenset()


def test_extended_mode_flips_to_overdetermined():
    ext = audit.goedel_replay(extended=True)
    assert ext.all_valid()
    x4 = ext.step("x4")
    assert M.print_meta(x4.formula) == "Dem[App(q,q)]"
    assert x4.assumptions == {"DEF_E", "REFL", "COMP_E"}
    assert ext.classification == {"App(q,q)": "overdetermined"}
    pairs = [f for f in ext.contradictions if f.pattern == "contradictory-pair"]
    assert pairs and pairs[0].step == "x4" and pairs[0].unsat_confirmed


def test_compare_modes():
    result = audit.compare_modes()
    assert result["both"] == ["DEF_E", "REFL"]
    assert result["only_canonical"] == ["COMP_E", "NEC_DEF"]
    assert result["only_goedel"] == ["CONS"]
    assert result["canonical_classification"] == {"App(q,q)": "overdetermined"}
    assert result["goedel_classification"] == {"App(q,q)": "independent"}


# --- engine rule checking ----------------------------------------------


def _script(text):
    return audit.parse_script(text)


def test_modus_ponens_rejects_mismatch():
    report = audit.check_script(
        _script(
            """
assume REFL : Dem[d*] -> d*
step 1 := assume REFL [App(q,q)]
step 2 := suppose Dem[~App(q,q)]
step 3 := mp 1 2
"""
        )
    )
    bad = report.step("3")
    assert not bad.ok and "mismatch" in bad.reason


def test_reductio_requires_a_real_supposition():
    report = audit.check_script(
        _script(
            """
assume DEF_E : all n. InE(n) <-> ~Dem[App(n,n)]
step 1 := assume DEF_E
step 2 := suppose Dem[App(q,q)]
step 3 := suppose ~Dem[App(q,q)]
step 4 := reductio 1 by 2, 3
"""
        )
    )
    assert not report.step("4").ok
    assert "supposition" in report.step("4").reason


def test_steps_citing_invalid_steps_are_invalid():
    report = audit.check_script(
        _script(
            """
assume DEF_E : all n. InE(n) <-> ~Dem[App(n,n)]
step 1 := assume NOPE
step 2 := transpose 1
"""
        )
    )
    assert not report.step("1").ok
    assert not report.step("2").ok and "invalid step" in report.step("2").reason


def test_schema_assumption_requires_template():
    report = audit.check_script(
        _script(
            """
assume REFL : Dem[d*] -> d*
step 1 := assume REFL
"""
        )
    )
    assert not report.step("1").ok and "template" in report.step("1").reason


def test_excluded_assumptions_invalidate_their_steps():
    script = audit.canonical_antinomy_script()
    report = audit.check_script(script, allowed={"DEF_E", "NEC_DEF", "REFL"})
    assert report.step("8").ok
    assert not report.step("9").ok
    assert not report.step("11").ok
    # without CONS the remaining finding does not count as a contradiction
    assert all(f.requires_consistency for f in report.contradictions)


def test_parse_script_errors():
    with pytest.raises(ParseError):
        audit.parse_script("step 1 := frobnicate 2")
    with pytest.raises(ParseError):
        audit.parse_script("assume X missing-colon")
    with pytest.raises(ParseError):
        audit.parse_script(
            "assume A : Dem[App(q,q)]\nassume A : Dem[App(q,q)]"
        )
    with pytest.raises(ParseError):
        audit.parse_script(
            "step 1 := derive Dem[App(q,q)] from NOWHERE"
        )


def test_report_json_is_versioned_and_serializable(canonical):
    d = canonical.to_json_dict()
    assert d["schema"] == "audit/1"
    assert len(d["steps"]) == 11
    assert d["minimal_inconsistent_subsets"] == []
    json.dumps(d)  # must not raise
