"""Shared builders for the two worked examples, assembled from library calls."""
import pytest

from htransfer.abelian import FpGroup
from htransfer.bar import BarConstruction, from_tables
from htransfer.tensoralg import AlgebraPresentation, GenSpec, QuotientDGA, parse_element
from htransfer.transfer import TransferState, binary_homotopies, induce_binary, select_g


def algebra_example(max_degree=15):
    def p(text):
        return parse_element(text, ["a", "b", "c", "x"])

    gens = [
        GenSpec("a", 2, 2, {}),
        GenSpec("b", 2, 2, p("2c")),
        GenSpec("c", 3, 4, p("x")),
        GenSpec("x", 4, 2, {}),
    ]
    rels = [p("a^2+x"), p("xc+cx"), p("(ac+ca)^2"), p("c^2")]
    return QuotientDGA(AlgebraPresentation(gens, rels, [("b", "both")]), max_degree)


class AlgebraCase:
    """The torsion example: reduced algebra, pinned cocycles u, v, w."""

    def __init__(self, max_degree=15):
        self.B = algebra_example(max_degree)
        self.C = self.B.dga_complex(max_degree, reduced=True)
        pins = {}
        for name, text, k in [("u", "a", 2), ("v", "ac+ca", 5), ("w", "a(ac+ca)", 7)]:
            pins[k] = [(name, self.B.to_class(self.B.parse(text), k))]
        self.H, self.g, _ = select_g(self.C, pins)
        self.state = TransferState(self.C, self.H, self.g)
        self.state.mu_B = self.B.product_map(self.C)
        self.u, self.v, self.w = (2, 0), (5, 0), (7, 0)

    def alg(self, elem):
        """A value in the target complex as a normal-form algebra element."""
        return self.B.gens_to_element(self.C, {w[0]: c for w, c in elem.items()})

    def el(self, text):
        return self.B.normal_form(self.B.parse(text))


def bar_example_dga():
    return from_tables(
        {"a2": 2, "a3": 3, "b": 3, "a2a3": 5},
        products={("a2", "a3"): {"a2a3"}, ("a3", "a2"): {"a2a3"}},
        cup1={("b", "b"): {"a2a3"}},
    )


class BarCase:
    """The Z2 bialgebra example on the bar construction."""

    def __init__(self, max_degree=6, g2_pin=("a2", "a3")):
        self.BA = BarConstruction(bar_example_dga(), max_degree)
        self.C = self.BA.complex
        ix = self.BA.index
        pins = {}
        for name, word in [("alpha2", ("a2",)), ("alpha3", ("a3",)), ("beta", ("b",))]:
            k, i = ix[word]
            vec = [0] * len(self.C.group(k))
            vec[i] = 1
            pins.setdefault(k, []).append((name, vec))
        self.H, self.g, _ = select_g(self.C, pins)
        self.state = TransferState(self.C, self.H, self.g)
        self.state.mu_B = self.BA.mu_map()
        self.state.delta_B = self.BA.delta_map()
        self.alpha2, self.alpha3, self.beta = (1, 0), (2, 0), (2, 1)
        self.one = (0, 0)
        induce_binary(self.state)
        bb = (self.beta, self.beta)
        binary_homotopies(self.state, {bb: {(ix[g2_pin],): 1}}, {(self.beta,): {}})

    def words(self, elem):
        return {tuple(self.BA.word_of(x) for x in w): c for w, c in elem.items()}


@pytest.fixture(scope="session")
def algebra_case():
    case = AlgebraCase()
    induce_binary(case.state)
    binary_homotopies(case.state)
    return case


@pytest.fixture(scope="session")
def bar_case():
    return BarCase()
