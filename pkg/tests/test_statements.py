import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mampcg import (
    DeterminationMap,
    IndependenceModel,
    IndependenceStatement,
    QueryError,
    determined_set,
)

S = IndependenceStatement.make


class TestStatements:
    def test_canonical_flank_order(self):
        assert S(("C",), ("A",), ("B",)) == S(("A",), ("C",), ("B",))
        s = S(("C",), ("A",))
        assert min(s.x) <= min(s.y)

    def test_flanks_nonempty(self):
        with pytest.raises(QueryError):
            S((), ("A",))

    def test_disjointness(self):
        with pytest.raises(QueryError):
            S(("A",), ("A",))
        with pytest.raises(QueryError):
            S(("A",), ("B",), ("A",))

    def test_string_inputs(self):
        assert S("A", "B", "C") == S(("A",), ("B",), ("C",))

    def test_rendering(self):
        assert str(S(("B", "A"), ("C",), ())) == "A,B _||_ C | {}"


@settings(max_examples=50, deadline=None)
@given(st.sets(st.sampled_from("ABCDEF"), min_size=2, max_size=6))
def test_canonicalization_is_symmetric(names):
    names = sorted(names)
    x, y = names[:1], names[1:2]
    rest = names[2:]
    assert S(x, y, rest) == S(y, x, rest)


class TestModel:
    def test_universe_guard(self):
        with pytest.raises(QueryError):
            IndependenceModel(frozenset("AB"), frozenset({S("A", "C")}))

    def test_json_round_trip(self):
        model = IndependenceModel(
            frozenset("ABC"),
            frozenset({S("A", "B"), S("A", "C", "B")}))
        again = IndependenceModel.from_json(model.to_json())
        assert again == model

    def test_json_golden_bytes(self):
        model = IndependenceModel(
            frozenset(("B", "A")), frozenset({S("B", "A")}))
        assert model.to_json() == (
            '{"universe":["A","B"],'
            '"statements":[{"x":["A"],"y":["B"],"z":[]}]}\n')

    def test_json_statement_order_is_stable(self):
        stmts = frozenset({S("A", "B"), S("A", "B", "C"), S("A", "C")})
        model = IndependenceModel(frozenset("ABC"), stmts)
        assert model.to_json() == model.to_json()
        names = [tuple(d["y"]) for d in
                 __import__("json").loads(model.to_json())["statements"]]
        assert names == sorted(names)


class TestDetermination:
    def test_single_entry_fires(self):
        det = DeterminationMap.make([("eps_C", ("A", "C"))])
        assert determined_set(("A", "C"), det) == {"A", "C", "eps_C"}

    def test_identity_without_entries(self):
        assert determined_set(("A",), None) == {"A"}
        assert determined_set(("A",), DeterminationMap()) == {"A"}

    def test_chained_fixpoint(self):
        det = DeterminationMap.make([("u", ("a",)), ("v", ("u",))])
        assert determined_set(("a",), det) == {"a", "u", "v"}

    def test_entry_validation(self):
        with pytest.raises(QueryError):
            DeterminationMap.make([("t", ())])
        with pytest.raises(QueryError):
            DeterminationMap.make([("t", ("t",))])

    def test_superset_of_input(self):
        det = DeterminationMap.make([("u", ("a", "b"))])
        assert determined_set(("a",), det) == {"a"}


@settings(max_examples=60, deadline=None)
@given(
    st.sets(st.sampled_from("abcdef"), max_size=4),
    st.sets(st.sampled_from("abcdef"), max_size=6),
)
def test_determined_set_monotone(z1, extra):
    det = DeterminationMap.make([
        ("u", ("a", "b")), ("v", ("u", "c")), ("w", ("d",))])
    z2 = z1 | extra
    d1 = determined_set(z1, det)
    d2 = determined_set(z2, det)
    assert z1 <= d1
    assert d1 <= d2
