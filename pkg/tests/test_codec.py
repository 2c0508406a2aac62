import random

import pytest

from conftest import random_formula
from goedellab import codec
from goedellab import formulas as F
from goedellab.errors import NotUnary, NotWellFormed, ResourceBound

# first primes, stated independently of the library's sieve
PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
          67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113]


# --- worked constants, recomputed from scratch -------------------------


def test_worked_constant_eq_zero_zero():
    # Eq(0,0) in Polish: = 0 0 -> tokens (4, 8, 8)
    assert 2**4 * 3**8 * 5**8 == 41_006_250_000
    assert codec.encode_formula(F.Eq(F.ZERO, F.ZERO)) == 41_006_250_000
    assert codec.decode_formula(41_006_250_000) == F.Eq(F.ZERO, F.ZERO)


def test_worked_constant_dem_x0():
    # Dem(x0) in Polish: Dem x0 -> tokens (5, 13)
    assert 2**5 * 3**13 == 51_018_336
    assert codec.encode_formula(F.Dem(F.Var(0))) == 51_018_336
    assert codec.decode_formula(51_018_336) == F.Dem(F.Var(0))


def test_sub_num_worked_value():
    # Dem(x0) at the numeral of 2: Dem S S 0 -> tokens (5, 9, 9, 8)
    expected = 2**5 * 3**9 * 5**9 * 7**8
    assert expected == 7_091_786_130_187_500_000
    assert codec.sub_num(0, 2) == expected


# --- decoding error paths ----------------------------------------------


def test_decode_rejects_non_codes():
    with pytest.raises(NotWellFormed):
        codec.decode_formula(0)
    with pytest.raises(NotWellFormed):
        codec.decode_formula(1)  # empty token sequence
    with pytest.raises(NotWellFormed):
        codec.decode_formula(2 * 5)  # exponent gap at 3
    with pytest.raises(NotWellFormed):
        codec.decode_formula(2**10 * 3**13)  # reserved token 10
    with pytest.raises(NotWellFormed):
        codec.decode_formula(2**4 * 3**8)  # truncated: = 0 <missing>
    with pytest.raises(NotWellFormed):
        codec.decode_formula(2**4 * 3**8 * 5**8 * 7**8)  # trailing token


def test_encode_is_injective_on_a_sample():
    rng = random.Random(11)
    seen = {}
    for _ in range(2000):
        f = random_formula(rng, rng.randrange(0, 4))
        toks = codec.formula_tokens(f)
        if len(toks) > 60:  # keep the prime-power products fast
            continue
        g = codec.encode_tokens(toks)
        assert seen.setdefault(g, f) == f


# --- independent enumeration oracle ------------------------------------
#
# Every Goedel number is an integer whose prime factorization uses a
# contiguous initial segment of the primes; enumerate exactly those
# integers below the bound, then filter by an arity-based Polish reader
# written here from scratch, and sort.


def _contiguous_smooth(bound):
    """All (product, exponent-tuple) with product = prod p_i^t_i <= bound,
    every t_i >= 1."""
    out = []

    def rec(i, prod, seq):
        p = PRIMES[i]
        v = prod * p
        t = 1
        while v <= bound:
            out.append((v, seq + (t,)))
            rec(i + 1, v, seq + (t,))
            v *= p
            t += 1

    rec(0, 1, ())
    return out


def _read_formula(toks, i):
    """Returns (next position, free variable set); raises ValueError."""
    if i >= len(toks):
        raise ValueError("truncated")
    t = toks[i]
    if t == 1:  # negation
        return _read_formula(toks, i + 1)
    if t == 2:  # implication
        j, fv1 = _read_formula(toks, i + 1)
        k, fv2 = _read_formula(toks, j)
        return k, fv1 | fv2
    if t == 3:  # universal quantifier
        if i + 1 >= len(toks) or toks[i + 1] < 13:
            raise ValueError("quantifier needs a variable")
        v = toks[i + 1] - 13
        j, fv = _read_formula(toks, i + 2)
        return j, fv - {v}
    if t == 4:  # equation
        j, fv1 = _read_term(toks, i + 1)
        k, fv2 = _read_term(toks, j)
        return k, fv1 | fv2
    if t == 5:  # provability predicate
        return _read_term(toks, i + 1)
    raise ValueError("not a formula token")


def _read_term(toks, i):
    if i >= len(toks):
        raise ValueError("truncated")
    t = toks[i]
    if t == 6:  # substitution function
        j, fv1 = _read_term(toks, i + 1)
        k, fv2 = _read_term(toks, j)
        return k, fv1 | fv2
    if t in (7, 9):  # diagonalization / successor
        return _read_term(toks, i + 1)
    if t == 8:  # zero
        return i + 1, set()
    if t >= 13:  # variable
        return i + 1, {t - 13}
    raise ValueError("not a term token")


def _oracle_unary_below(bound):
    found = []
    for code, toks in _contiguous_smooth(bound):
        try:
            j, fv = _read_formula(toks, 0)
        except ValueError:
            continue
        if j == len(toks) and fv == {0}:
            found.append((code, toks))
    return sorted(found)


@pytest.mark.parametrize("bound", [10**12, 10**16])
def test_enumeration_matches_brute_force_oracle(bound):
    oracle = _oracle_unary_below(bound)
    got = codec.unary_formulas_below(bound)
    assert [(c, tuple(codec.formula_tokens(f))) for c, f in got] == oracle


def test_enumeration_small_counts():
    # frozen counts, cross-checked by the oracle test above at 1e12/1e16
    assert codec.count_unary_below(10**12) == 2
    assert codec.count_unary_below(10**16) == 7
    assert codec.count_unary_below(10**20) == 14
    assert codec.count_unary_below(10**24) == 38


def test_first_two_unary_formulas():
    entries = codec.unary_formulas_below(10**12)
    assert entries[0] == (51_018_336, F.Dem(F.Var(0)))
    assert entries[1] == (593_261_718_750, F.Not(F.Dem(F.Var(0))))
    assert codec.formula_at(0) == F.Dem(F.Var(0))


def test_index_of_inverts_formula_at(tmp_path):
    cache = codec.IndexTable(str(tmp_path / "index.txt"))
    for k in list(range(15)) + [20, 30, 39]:
        f = codec.formula_at(k, cache)
        assert codec.index_of(f, cache) == k
    # the persisted table reloads to the same answers
    reloaded = codec.IndexTable(str(tmp_path / "index.txt"))
    assert reloaded.formula_at(7) == codec.formula_at(7, cache)


def test_index_of_requires_unary():
    with pytest.raises(NotUnary):
        codec.index_of(F.Eq(F.ZERO, F.ZERO))
    with pytest.raises(NotUnary):
        codec.index_of(F.Eq(F.Var(1), F.Var(0)))


# --- round trips --------------------------------------------------------


def test_round_trip_seeded_sample():
    rng = random.Random(23)
    for _ in range(300):
        f = random_formula(rng, rng.randrange(0, 5), allow_num=False)
        assert codec.decode_formula(codec.encode_formula(f)) == f


def test_round_trip_compact_numeral_literal():
    # the compact literal is the canonical decoding of a long S-chain
    f = F.Eq(F.Num(1500), F.Var(0))
    assert codec.decode_formula(codec.encode_formula(f)) == f
    g = F.Eq(F.numeral(200), F.ZERO)  # short chains stay chains
    assert codec.decode_formula(codec.encode_formula(g)) == g


def test_proof_code_round_trip():
    steps = [F.Eq(F.ZERO, F.ZERO), F.Dem(F.Var(0)), F.Not(F.Dem(F.ZERO))]
    pc = codec.encode_proof(steps)
    assert codec.decode_proof(pc) == steps
    # the materialized integer is astronomically large by design
    with pytest.raises(ResourceBound):
        pc.to_int(max_bits=10_000)


# --- numeric substitution ----------------------------------------------


def test_sub_and_diag_agree_on_their_overlap():
    # diag on the code of formula #n equals sub of n at that same code;
    # compared exactly at the run-length level since the numbers have
    # millions of digits
    entries = codec.unary_formulas_below(10**20)
    for n, (code, _) in enumerate(entries):
        assert codec.diag_num_rle(code).runs == codec.sub_num_rle(n, code).runs


def test_diag_num_small_case_exact():
    g = 51_018_336  # Dem(x0)
    # Dem applied to the numeral of g: tokens 5, then g nines, then 8
    rle = codec.diag_num_rle(g)
    assert rle.runs == ((5, 1), (9, g), (8, 1))
    with pytest.raises(ResourceBound):
        rle.to_int()  # 51 million tokens is past the materialization bound


def test_diag_num_requires_unary_decoding():
    with pytest.raises(NotUnary):
        codec.diag_num(41_006_250_000)  # Eq(0,0) is closed, not unary


def test_sub_num_on_rebinding_formula_falls_back_symbolically(monkeypatch):
    # a unary formula that additionally binds x0; its code (hence its
    # index) is astronomically large, so route the index lookup directly
    f = F.parse_formula("(forall x0. Dem(x0)) -> Dem(x0)")
    assert F.free_vars(f) == {0}
    monkeypatch.setattr(codec, "formula_at", lambda n, cache=None: f)
    direct = codec.encode_formula(F.substitute(f, 0, F.numeral(5)))
    assert codec.sub_num(0, 5) == direct
