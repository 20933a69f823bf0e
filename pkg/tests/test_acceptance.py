"""Acceptance criteria 1-10, one test (and one printed PASS/FAIL line) each.

Run with ``pytest tests/test_acceptance.py -v -s``.
"""
import pytest

from htransfer.bar import BarConstruction
from htransfer.graded import HomComplex, induced_iso_check, nabla, nabla_interior, tensor, word_degree
from htransfer.abelian import homology, solve
from htransfer.pipeline import load_problem, run_problem
from htransfer.report import to_json
from htransfer.tensoralg import format_alg
from htransfer.transfer import (
    a_infinity_check,
    binary_homotopies,
    induce_binary,
    morphism_check,
    no_homotopy_inverse_check,
    omega22_step,
    operadic_step,
)

import oracle
from conftest import AlgebraCase, BarCase, algebra_example, bar_example_dga


def line(n, ok, detail=""):
    print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip())
    return ok


@pytest.fixture(scope="module")
def alg():
    """The torsion example at D = 15 with m3, m4, m5 and their homotopies."""
    case = AlgebraCase(15)
    induce_binary(case.state)
    binary_homotopies(case.state)
    uuu = (case.u, case.u, case.u)
    case.steps = {3: operadic_step(case.state, 3, {uuu: {(case.v,): 1}})}
    for m in (4, 5):
        case.steps[m] = operadic_step(case.state, m)
    return case


@pytest.fixture(scope="module")
def bar():
    case = BarCase(6)
    case.r22 = omega22_step(case.state)
    return case


def test_criterion_01_homology_table():
    B = algebra_example(13)
    C = B.dga_complex(13)
    got = {n: C.homology_at(n).group.invariants for n in range(13)}
    want = {n: () for n in range(13)}
    want.update({0: (0,), 2: (2,), 5: (2,), 7: (2,)})
    assert line(1, got == want, "H^n(B) for n <= 12")


def test_criterion_02_obstruction_cocycle(alg):
    g = alg.g
    z = alg.state.mu_B @ tensor(g, g) - g @ alg.state.op(1, 2)
    u, w = alg.u, alg.w
    table = {x: alg.alg(v) for x, v in z.table().items()}
    want = {(u, u): alg.el("a^2"), (u, w): alg.el("a^3c+ca^3"), (w, u): alg.el("a^3c+ca^3")}
    assert line(2, table == want, f"z(u|w) = {format_alg(alg.el('a^3c+ca^3'))}")


def test_criterion_03_induced_operations(alg):
    st = alg.state
    u, v, w = alg.u, alg.v, alg.w
    ok = st.op(1, 2)((u, v)) == {(w,): 1} and st.op(1, 2)((v, u)) == {(w,): 1}
    ok &= st.op(1, 3)((u, u, u)) == {(v,): 1}
    ok &= all(not alg.steps[m].omega.table() for m in (4, 5))
    reps = a_infinity_check(st, 5)
    ok &= all(r.ok and r.checked for r in reps)
    assert line(3, ok, f"stasheff checks on {sum(r.checked for r in reps)} inputs")


def test_criterion_04_binary_homotopy(alg):
    st = alg.state
    g = alg.g
    z = st.mu_B @ tensor(g, g) - g @ st.op(1, 2)
    b = st.gmap(2, 1)
    nb = nabla(b)
    exact = all(nb(x) == z(x) for k in range(alg.H.max_degree + 1) if nabla_interior(b, k)
                for x in nb.src.basis(k))
    u, w = alg.u, alg.w
    want = {(u, u): alg.el("c"), (u, w): alg.el("cac"), (w, u): alg.el("cac")}
    # the pinned solve must reproduce the same map
    hc = HomComplex(alg.H, 2, alg.C, 1)
    c = {(x,): k for x, k in alg.B.element_to_gens(alg.C, alg.B.parse("c")).items()}
    pinned, _ = hc.solve(z, pins={(u, u): c})
    same = {x: alg.alg(v) for x, v in pinned.table().items()} == want
    formula = {x: alg.alg(v) for x, v in b.table().items()} == want
    morph = all(r.ok for r in morphism_check(st))
    assert line(4, exact and same and formula and morph, "b = c d(u|u) + cac (d(u|w) + d(w|u))")


def test_criterion_05_no_homotopy_inverse(alg):
    vec = alg.B.to_class(alg.B.parse("b"), 2)
    res = no_homotopy_inverse_check(alg.g, 2, vec, label="b")
    ok = not res.has_inverse and not res.bounded and res.maps_searched > 0
    assert line(5, ok, f"{res.maps_searched} candidates, none solves 1 - gf = sd + ds at b")


def test_criterion_06_bar_construction():
    BA = BarConstruction(bar_example_dga(), 12)
    ok = BA.mu(("b",), ("b",)) == {("a2a3",)}
    ok &= BA.bar_diff({("a2", "a3")}) == {("a2a3",)}
    for check in (BA.check_d_squared, BA.check_coassociative, BA.check_counit, BA.check_delta_chain,
                  BA.check_mu_chain, BA.check_hopf, BA.check_associative, BA.check_unit):
        ok &= check() == []
    assert line(6, ok, "bar structure checks through degree 12")


def test_criterion_07_omega22(bar):
    r = bar.r22
    b = bar.beta
    ok = r.omega((b, b)) == {(bar.alpha2, bar.alpha3): 1}
    ok &= bar.words(bar.state.gmap(2, 1)((b, b))) == {(("a2", "a3"),): 1}
    ok &= bar.state.gmap(1, 2)((b,)) == {}
    ok &= r.residual_class_zero and r.z_is_zero
    ok &= all(rep.ok for rep in morphism_check(bar.state, r.phi))
    assert line(7, ok, "w22(beta|beta) = alpha2|alpha3")


PAIRS = [(2, 1, 0), (1, 2, 0), (3, 1, -1), (2, 2, -1)]


def _iso_results(alg, bar):
    out = {}
    for label, g in (("torsion", alg.g), ("field", bar.g)):
        for m, n, s in PAIRS:
            out[(label, m, n)] = induced_iso_check(g, m, n, s)
    return out


@pytest.fixture(scope="module")
def iso(alg, bar):
    return _iso_results(alg, bar)


def test_criterion_08_parts_that_hold(iso):
    held = [k for k, r in iso.items() if r.ok]
    assert all(iso[("field", m, n)].ok for m, n, _ in PAIRS)
    assert iso[("torsion", 2, 1)].ok and iso[("torsion", 3, 1)].ok
    print(f"\ncriterion 8 (partial): holds for {sorted(held)}")


@pytest.mark.xfail(strict=True, reason=(
    "in the torsion example the homology of the target's tensor square is larger than "
    "H (x) H (Kunneth has Tor terms), so g~ is not onto in homology for (1,2) and (2,2)"))
def test_criterion_08_induced_isomorphisms(iso):
    failed = {k: r.failures for k, r in iso.items() if not r.ok}
    detail = "; ".join(f"{k}: " + ", ".join(f"{'|'.join(f['block'])} coker {f['cokernel']}" for f in v)
                       for k, v in sorted(failed.items()))
    assert line(8, not failed, detail or "all pairs, both settings")


def test_criterion_09_oracle_equivalence():
    cases = 0
    ok = True
    for seed in range(100):
        rng = oracle.rng_for(seed)
        f, g = oracle.random_complex(rng)
        total = (f.source.size or 1) * (f.target.size or 1) * (g.target.size or 1)
        assert total <= 64
        H = homology(f, g)
        divs = oracle.divisors_for(f.target)
        profile, order = oracle.homology_profile(f, g, divs)
        ok &= H.group.size == order and oracle.group_profile(H.group, divs) == profile
        for y in oracle.elements(f.target):
            x = solve(f, y)
            ok &= (x is not None) == oracle.solvable(f, y)
            if x is not None:
                ok &= oracle.apply(f, x) == f.target.reduce(y)
        cases += 1
    assert line(9, ok and cases == 100, f"{cases} random complexes")


def test_criterion_10_determinism():
    first = [to_json(run_problem(load_problem(n))[0]) for n in ("torsion_dga", "bar_bialgebra")]
    second = [to_json(run_problem(load_problem(n))[0]) for n in ("torsion_dga", "bar_bialgebra")]
    same = [a.encode() == b.encode() for a, b in zip(first, second)]
    assert line(10, all(same), "torsion_dga and bar_bialgebra reports byte-identical")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
