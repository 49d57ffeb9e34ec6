import pytest
from hypothesis import assume, given, strategies as st

from powerops.dyer_lashof import DyerLashofAlgebra, is_admissible
from powerops.errors import RewriteBudgetExceeded
from powerops.hecke import t1
from powerops.rings import HRing, HSeries

import golden_values as G
from sym import hseries

MOD = 5 ** 8

scalars = st.lists(st.integers(-5, 5), min_size=1, max_size=2)
token = st.one_of(
    st.integers(0, 5).map(lambda i: ("Q", i)),
    scalars.map(lambda c: ("c", c)),
)
words = st.lists(token, min_size=1, max_size=4).filter(lambda ts: 1 <= sum(k == "Q" for k, _ in ts) <= 3)
inputs = st.lists(st.integers(-20, 20), min_size=1, max_size=3)


def as_tokens(algebra, ts):
    return [(k, HSeries(algebra.ring, v) if k == "c" else v) for k, v in ts]


def test_admissible():
    assert is_admissible((0, 0, 3)) and is_admissible((2, 5))
    assert not is_admissible((1, 0)) and not is_admissible((0, 4, 0))


def test_commutation_golden(algebra, exact):
    C = algebra.commutation_matrix()
    for k, row in G.COMMUTATION.items():
        assert [C[k][j] for j in range(6)] == [hseries(t, exact) for t in row]


def test_adem_golden(algebra, exact):
    adem = algebra.adem_relations()
    assert sorted(adem) == [1, 2, 3, 4, 5]
    for k, terms in G.ADEM.items():
        assert adem[k] == algebra.element({w: hseries(t, exact) for w, t in terms.items()})


def test_cartan_golden(algebra, exact):
    r = algebra.cartan_tensor()
    for k, row in G.CARTAN.items():
        got = {s: r[s][k] for s in range(len(r)) if not r[s][k].is_zero()}
        assert got == {s: hseries(t, exact) for s, t in row.items()}


def test_adem_from_parsed_word(algebra):
    from powerops.parser import Context, parse_expression
    ctx = Context("gamma", None, algebra=algebra)
    assert parse_expression("Q1*Q0", ctx) == algebra.adem_relations()[1]


@given(words, inputs)
def test_rewriting_is_sound(algebra, ts, x):
    tokens = as_tokens(algebra, ts)
    nf = algebra.rewrite(tokens)
    assert all(is_admissible(w) for w in nf.words())
    assert nf.degrees() <= {sum(k == "Q" for k, _ in ts)}
    x = HSeries(algebra.ring, x)
    assert algebra.evaluate_tokens(x, tokens, MOD) == algebra.evaluate(x, nf, MOD)


def q_count(ts):
    return sum(k == "Q" for k, _ in ts)


@given(words, words)
def test_multiplication_matches_concatenation(algebra, a, b):
    assume(q_count(a) + q_count(b) <= 3)
    a, b = as_tokens(algebra, a), as_tokens(algebra, b)
    assert algebra.rewrite(a) * algebra.rewrite(b) == algebra.rewrite(a + b)


def test_local_confluence(algebra, exact):
    assert algebra.associativity_failures() == []
    h = exact.gen()
    assert algebra.scalar_overlap_failures([h, h * h + 3, 7]) == []


def test_t2_is_central(algebra):
    t2g = algebra.t_gamma(2)
    for k in range(6):
        assert algebra.commutator(t2g, algebra.gen(k)).is_zero()
    assert algebra.commutator(t2g, algebra.element({(): algebra.ring.gen()})).is_zero()


def test_t1_is_not_central(algebra):
    c = algebra.commutator(algebra.t_gamma(1), algebra.gen(1)).coefficient((0, 1))
    assert c.is_constant() and c.constant() == -324 and c.constant() % 5 == 1


def test_hecke_elements_act(algebra, data):
    R = HRing(5, None, 12)
    x = HSeries(R, [3, -2, 1])
    assert algebra.evaluate(x, algebra.t_gamma(1)) == 5 * t1(data, x)
    assert algebra.evaluate(x, algebra.t_gamma(2)) == x


def test_budget(data):
    small = DyerLashofAlgebra(data, budget=50)
    with pytest.raises(RewriteBudgetExceeded):
        small.rewrite([("Q", 5), ("Q", 4), ("Q", 0)])


def test_generator_range(algebra):
    with pytest.raises(IndexError):
        algebra.gen(6)


def test_presentation_text(algebra):
    text = algebra.presentation_text()
    assert text.count(" h = ") == 6 and text.count(" Q0 = ") == 5
    assert "Q5 Q0 = Q0Q1 + (h)*Q0Q2" in text


def test_p2_algebra():
    from powerops import modelfile
    data = modelfile.load_builtin("p2_n3")
    G2 = DyerLashofAlgebra(data)
    assert G2.associativity_failures() == []
    x = HSeries(G2.ring, [1, 1])
    nf = G2.rewrite([("Q", 2), ("Q", 0)])
    assert G2.evaluate_tokens(x, [("Q", 2), ("Q", 0)], 2 ** 8) == G2.evaluate(x, nf, 2 ** 8)
