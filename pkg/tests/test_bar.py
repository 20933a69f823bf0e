import pytest

from htransfer.bar import BarConstruction, TruncatedDga, from_tables
from htransfer.graded import WindowError, nabla


def example_dga():
    return from_tables(
        {"a2": 2, "a3": 3, "b": 3, "a2a3": 5},
        products={("a2", "a3"): {"a2a3"}, ("a3", "a2"): {"a2a3"}},
        cup1={("b", "b"): {"a2a3"}},
    )


@pytest.fixture(scope="module")
def BA():
    return BarConstruction(example_dga(), max_degree=8)


def test_example_validates():
    assert example_dga().validate() == []


def test_bar_degrees(BA):
    assert BA.degree(("a2",)) == 1
    assert BA.degree(("a2", "a3")) == 3
    assert BA.words(0) == [()]
    assert ("b",) in BA.words(2) and ("a3",) in BA.words(2)


def test_bar_differential_values(BA):
    assert BA.bar_diff({("a2", "a3")}) == {("a2a3",)}
    assert BA.bar_diff({("a3", "a2")}) == {("a2a3",)}
    assert BA.bar_diff({("b", "b")}) == set()
    assert BA.bar_diff({("a2",)}) == set()


def test_product_on_b(BA):
    assert BA.mu(("b",), ("b",)) == {("a2a3",)}
    assert BA.mu(("a2",), ("a3",)) == {("a2", "a3"), ("a3", "a2")}


def test_shuffle_without_cup_one():
    BA = BarConstruction(from_tables({"x": 2, "y": 2, "z": 2}), 6)
    assert BA.mu(("x",), ("y", "z")) == {("x", "y", "z"), ("y", "x", "z"), ("y", "z", "x")}


def test_unit_and_counit(BA):
    assert BA.check_unit() == []
    assert BA.check_counit() == []


def test_structure_checks(BA):
    assert BA.check_d_squared() == []
    assert BA.check_coassociative() == []
    assert BA.check_delta_chain() == []
    assert BA.check_mu_chain() == []
    assert BA.check_hopf() == []
    assert BA.check_associative() == []


def test_mu_matches_path_oracle(BA):
    for t in range(BA.max_degree + 1):
        for w1, w2 in BA.pairs(t):
            assert BA.mu(w1, w2) == BA.mu_oracle(w1, w2), (w1, w2)


def test_window(BA):
    with pytest.raises(WindowError):
        BA.mu(("a2a3", "a2a3"), ("a2a3",))


def test_complex_and_maps(BA):
    C = BA.complex
    assert C.is_complex()
    mu = BA.mu_map()
    delta = BA.delta_map()
    assert nabla(mu).is_zero(range(BA.max_degree - 1))
    assert nabla(delta).is_zero(range(BA.max_degree - 1))
    gb = BA.index[("b",)]
    assert mu((gb, gb)) == {(BA.index[("a2a3",)],): 1}


def test_nonassociative_table_is_rejected():
    A = from_tables({"x": 2, "y": 2, "z": 4}, products={("x", "y"): {"z"}})
    assert A.validate() == []
    bad = from_tables({"x": 2, "y": 2, "z": 4, "w": 6},
                      products={("x", "y"): {"z"}, ("z", "x"): {"w"}})
    problems = bad.validate()
    assert any("not associative" in p and "('x', 'y', 'x')" in p for p in problems)
    with pytest.raises(ValueError):
        BarConstruction(bad)


def test_degree_checks():
    assert any("1-connected" in p for p in from_tables({"x": 1}).validate())
    assert any("wrong degree" in p for p in from_tables({"x": 2, "y": 3}, products={("x", "x"): {"y"}}).validate())
    assert any("unknown letter" in p for p in from_tables({"x": 2}, cup1={("x", "x"): {"q"}}).validate())


def test_differential_must_square_to_zero():
    A = TruncatedDga({"x": 2, "y": 3, "z": 4}, diff={"x": {"y"}, "y": {"z"}})
    assert any("d^2" in p for p in A.validate())
