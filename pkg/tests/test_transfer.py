import pytest

from htransfer.abelian import FpGroup, cyclic
from htransfer.graded import Complex, HomComplex, identity_map, induced_iso_check, nabla, tensor
from htransfer.transfer import (
    SelectionError,
    TransferState,
    a_infinity_check,
    binary_homotopies,
    induce_binary,
    morphism_check,
    no_homotopy_inverse_check,
    omega22_step,
    operadic_step,
    select_g,
)

from conftest import AlgebraCase, BarCase


def test_selected_homology_and_cocycles(algebra_case):
    case = algebra_case
    H = case.H
    assert [len(H.group(k)) for k in range(13)] == [0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0]
    assert case.alg(case.g(((2, 0),))) == case.el("a")
    assert case.alg(case.g(((5, 0),))) == case.el("ac+ca")
    assert case.alg(case.g(((7, 0),))) == case.el("a(ac+ca)")
    assert nabla(case.g).is_zero(range(H.max_degree))


def test_induced_product(algebra_case):
    case = algebra_case
    mu = case.state.op(1, 2)
    u, v, w = case.u, case.v, case.w
    assert mu((u, v)) == {(w,): 1}
    assert mu((v, u)) == {(w,): 1}
    assert mu((u, u)) == {}


def test_obstruction_cocycle(algebra_case):
    case = algebra_case
    g = case.g
    z = case.state.mu_B @ tensor(g, g) - g @ case.state.op(1, 2)
    u, v, w = case.u, case.v, case.w
    assert case.alg(z((u, u))) == case.el("a^2")
    assert case.alg(z((u, w))) == case.el("a^3c+ca^3")
    assert case.alg(z((w, u))) == case.el("a^3c+ca^3")
    assert case.alg(z((u, v))) == {}
    assert nabla(z).is_zero(range(case.H.max_degree))


def test_binary_homotopy(algebra_case):
    case = algebra_case
    g2 = case.state.gmap(2, 1)
    u, v, w = case.u, case.v, case.w
    assert case.alg(g2((u, u))) == case.el("c")
    assert case.alg(g2((u, w))) == case.el("cac")
    assert case.alg(g2((w, u))) == case.el("cac")
    others = [x for x in g2.table() if x not in {(u, u), (u, w), (w, u)}]
    assert others == []


def test_pinned_binary_homotopy_agrees():
    case = AlgebraCase()
    induce_binary(case.state)
    u, w = case.u, case.w
    c = case.B.element_to_gens(case.C, case.B.parse("c"))
    binary_homotopies(case.state, {(u, u): {(x,): k for x, k in c.items()}})
    assert case.alg(case.state.gmap(2, 1)((u, u))) == case.el("c")
    assert case.alg(case.state.gmap(2, 1)((u, w))) == case.el("cac")


def test_wrong_pin_is_rejected():
    case = AlgebraCase()
    induce_binary(case.state)
    a = case.B.element_to_gens(case.C, case.B.parse("ax"))  # not a solution
    with pytest.raises(ValueError):
        binary_homotopies(case.state, {(case.u, case.u): {(x,): k for x, k in a.items()}})


@pytest.fixture(scope="module")
def higher(algebra_case):
    case = AlgebraCase()
    induce_binary(case.state)
    binary_homotopies(case.state)
    uuu = (case.u, case.u, case.u)
    steps = {3: operadic_step(case.state, 3, {uuu: {(case.v,): 1}})}
    for m in (4, 5):
        steps[m] = operadic_step(case.state, m)
    return case, steps


def test_triple_operation(higher):
    case, steps = higher
    m3 = case.state.op(1, 3)
    assert m3((case.u, case.u, case.u)) == {(case.v,): 1}
    assert steps[3].z_is_zero
    assert steps[3].correction_is_zero


def test_canonical_b_gives_same_triple_operation():
    case = AlgebraCase()
    induce_binary(case.state)
    binary_homotopies(case.state)
    res = operadic_step(case.state, 3)
    assert res.omega((case.u, case.u, case.u)) == {(case.v,): 1}
    assert not res.b_pinned


def test_higher_operations_vanish(higher):
    case, steps = higher
    for m in (4, 5):
        assert steps[m].omega.table() == {}


def test_stasheff_and_morphism_identities(higher):
    case, _ = higher
    for rep in a_infinity_check(case.state, 5):
        assert rep.ok, rep.residuals
        assert rep.checked > 0
    for rep in morphism_check(case.state):
        assert rep.ok, (rep.name, rep.residuals)


def test_induced_isomorphisms_in_torsion_example(algebra_case):
    g = algebra_case.g
    assert induced_iso_check(g, 2, 1, 0).ok
    assert induced_iso_check(g, 3, 1, -1).ok


def test_no_homotopy_inverse(algebra_case):
    case = algebra_case
    vec = case.B.to_class(case.B.parse("b"), 2)
    res = no_homotopy_inverse_check(case.g, 2, vec, label="b")
    assert not res.has_inverse
    assert res.maps_searched > 0
    assert not res.bounded


def test_homotopy_inverse_found_for_identity():
    H = Complex.with_zero_differential([cyclic(0), cyclic(2), cyclic(2)], "H")
    res = no_homotopy_inverse_check(identity_map(H), 1, (1,))
    assert res.has_inverse


def test_select_g_canonical_and_bad_pins():
    C = Complex.with_zero_differential([cyclic(0), cyclic(2, 2)], "C")
    H, g, _ = select_g(C)
    assert [G.orders for G in H.groups] == [(0,), (2, 2)]
    with pytest.raises(SelectionError):
        select_g(C, {1: [("p", (1, 0)), ("q", (1, 0))]})


def test_bar_binary_operations(bar_case):
    st = bar_case.state
    b, a2, a3, one = bar_case.beta, bar_case.alpha2, bar_case.alpha3, bar_case.one
    assert st.op(1, 2)((b, b)) == {}
    assert st.op(2, 1)((b,)) == {(one, b): 1, (b, one): 1}
    assert bar_case.words(st.gmap(2, 1)((b, b))) == {((("a2", "a3"),)): 1}
    assert st.gmap(1, 2)((b,)) == {}


def test_omega22():
    case = BarCase()
    res = omega22_step(case.state)
    b = case.beta
    assert res.z_is_zero
    assert res.residual_class_zero
    assert res.omega((b, b)) == {(case.alpha2, case.alpha3): 1}
    phi = res.phi((b, b))
    assert case.words(phi) == {(("a2",), ("a3",)): 1}
    for rep in morphism_check(case.state, res.phi):
        assert rep.ok, (rep.name, rep.residuals)


def test_omega22_under_the_other_pin():
    case = BarCase(g2_pin=("a3", "a2"))
    res = omega22_step(case.state)
    assert res.z_is_zero and res.residual_class_zero
    for rep in morphism_check(case.state, res.phi):
        assert rep.ok, (rep.name, rep.residuals)


def test_bar_induced_isomorphisms(bar_case):
    for m, n, s in [(2, 1, 0), (1, 2, 0), (3, 1, -1), (2, 2, -1)]:
        assert induced_iso_check(bar_case.g, m, n, s).ok, (m, n)


def test_omega22_requires_characteristic_two(algebra_case):
    with pytest.raises((NotImplementedError, ValueError)):
        omega22_step(algebra_case.state)
