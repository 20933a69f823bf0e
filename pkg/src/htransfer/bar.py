"""Bar construction of a 1-connected truncated DGA over Z2.

Letters are named basis elements of positive degree; a bar word is a tuple
of letters and sits in degree sum(|x| - 1).  Elements are sets of words
(addition is symmetric difference).  The product on BA is built from a
cup-one table: it sums, over all ways of cutting the pair (w1, w2) into
consecutive non-empty pieces, the words whose letters are phi of the pieces.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product as iproduct
from typing import Iterable, Mapping

from .abelian import FpGroup, GroupHom
from .graded import Complex, MultiMap, WindowError

Word = tuple  # tuple of letter names; () is the unit [ ]


def _xor(acc: set, items: Iterable) -> set:
    for x in items:
        if x in acc:
            acc.remove(x)
        else:
            acc.add(x)
    return acc


@dataclass
class TruncatedDga:
    """A Z2 DGA on named positive-degree basis letters plus an implicit unit.

    ``products`` and ``cup1`` map ordered letter pairs to sets of letters;
    unlisted entries are zero.  ``diff`` maps letters to sets of letters.
    """

    degrees: dict
    products: dict = field(default_factory=dict)
    diff: dict = field(default_factory=dict)
    cup1: dict = field(default_factory=dict)
    max_degree: int | None = None

    def __post_init__(self):
        self.degrees = dict(self.degrees)
        self.products = {tuple(k): frozenset(v) for k, v in self.products.items()}
        self.diff = {k: frozenset(v) for k, v in self.diff.items()}
        self.cup1 = {tuple(k): frozenset(v) for k, v in self.cup1.items()}
        if self.max_degree is None:
            self.max_degree = max(self.degrees.values(), default=0)

    def validate(self) -> list[str]:
        problems = []
        for x, d in self.degrees.items():
            if d < 2:
                problems.append(f"letter {x} has degree {d}; the algebra must be 1-connected")
        for (x, y), v in self.products.items():
            for z in v:
                if self.degrees.get(z) != self.degrees.get(x, 0) + self.degrees.get(y, 0):
                    problems.append(f"product {x}*{y} -> {z} has the wrong degree")
        for (x, y), v in self.cup1.items():
            for z in v:
                if self.degrees.get(z) != self.degrees.get(x, 0) + self.degrees.get(y, 0) - 1:
                    problems.append(f"cup-one {x},{y} -> {z} has the wrong degree")
        for x, v in self.diff.items():
            for z in v:
                if self.degrees.get(z) != self.degrees.get(x, 0) + 1:
                    problems.append(f"d({x}) -> {z} has the wrong degree")
        for name in self.products_unknown():
            problems.append(f"unknown letter {name}")
        if not problems:
            problems += [f"product not associative at {t}" for t in self.associativity_defects()]
            problems += [f"d is not a derivation at {t}" for t in self.leibniz_defects()]
            problems += [f"d^2 != 0 at {x}" for x in self.degrees if self.d(self.d({x}))]
        return problems

    def products_unknown(self) -> list:
        names = set(self.degrees)
        seen = set()
        for table in (self.products, self.cup1):
            for (x, y), v in table.items():
                seen |= {x, y} | set(v)
        for x, v in self.diff.items():
            seen |= {x} | set(v)
        return sorted(seen - names)

    def letters(self) -> list:
        return sorted(self.degrees, key=lambda x: (self.degrees[x], x))

    def mul(self, xs: Iterable, ys: Iterable) -> set:
        out: set = set()
        for x in xs:
            for y in ys:
                _xor(out, self.products.get((x, y), ()))
        return out

    def d(self, xs: Iterable) -> set:
        out: set = set()
        for x in xs:
            _xor(out, self.diff.get(x, ()))
        return out

    def associativity_defects(self) -> list:
        bad = []
        L = self.letters()
        for x, y, z in iproduct(L, L, L):
            if self.mul(self.mul({x}, {y}), {z}) != self.mul({x}, self.mul({y}, {z})):
                bad.append((x, y, z))
        return bad

    def leibniz_defects(self) -> list:
        bad = []
        L = self.letters()
        for x, y in iproduct(L, L):
            lhs = self.d(self.mul({x}, {y}))
            rhs = _xor(self.mul(self.d({x}), {y}), self.mul({x}, self.d({y})))
            if lhs != rhs:
                bad.append((x, y))
        return bad


class BarConstruction:
    """BA over Z2 on bar degrees ``0..max_degree``."""

    def __init__(self, A: TruncatedDga, max_degree: int = 12):
        problems = A.validate()
        if problems:
            raise ValueError("; ".join(problems))
        self.A = A
        self.max_degree = max_degree
        self._mu = lru_cache(maxsize=None)(self._mu_words)

    # -- words

    def degree(self, w: Word) -> int:
        return sum(self.A.degrees[x] - 1 for x in w)

    @cached_property
    def _words(self) -> dict:
        by_deg: dict = {0: [()]}
        letters = self.A.letters()
        for k in range(1, self.max_degree + 1):
            out = []
            for x in letters:
                dx = self.A.degrees[x] - 1
                if dx <= k:
                    out.extend((x,) + w for w in by_deg.get(k - dx, []))
            by_deg[k] = sorted(out, key=self.sort_key)
        return by_deg

    def sort_key(self, w: Word):
        pos = {x: i for i, x in enumerate(self.A.letters())}
        return (len(w), [pos[x] for x in w])

    def words(self, k: int) -> list:
        if k < 0 or k > self.max_degree:
            return []
        return self._words[k]

    def label(self, w: Word) -> str:
        return "[" + "|".join(w) + "]" if w else "[ ]"

    def format(self, e: Iterable[Word]) -> str:
        e = sorted(e, key=lambda w: (self.degree(w), self.sort_key(w)))
        return " + ".join(self.label(w) for w in e) if e else "0"

    def format_pair(self, e: Iterable) -> str:
        e = sorted(e, key=lambda p: (self.sort_key(p[0]), self.sort_key(p[1])))
        return " + ".join(f"{self.label(a)}⊗{self.label(b)}" for a, b in e) if e else "0"

    # -- structure maps

    def bar_diff(self, e: Iterable[Word]) -> set:
        out: set = set()
        for w in e:
            if self.degree(w) + 1 > self.max_degree:
                raise WindowError(f"d{self.label(w)} leaves the window")
            for i, x in enumerate(w):
                for y in self.A.diff.get(x, ()):
                    _xor(out, [w[:i] + (y,) + w[i + 1:]])
            for i in range(len(w) - 1):
                for z in self.A.products.get((w[i], w[i + 1]), ()):
                    _xor(out, [w[:i] + (z,) + w[i + 2:]])
        return out

    def bar_coproduct(self, e: Iterable[Word]) -> set:
        out: set = set()
        for w in e:
            _xor(out, [(w[:i], w[i:]) for i in range(len(w) + 1)])
        return out

    def phi(self, w1: Word, w2: Word) -> frozenset:
        if len(w1) + len(w2) == 1:
            return frozenset(w1 + w2)
        if len(w1) == 1 and len(w2) == 1:
            return self.A.cup1.get((w1[0], w2[0]), frozenset())
        return frozenset()

    def _mu_words(self, w1: Word, w2: Word) -> frozenset:
        if not w1 and not w2:
            return frozenset({()})
        out: set = set()
        for i in range(min(1, len(w1)) + 1):
            for j in range(min(1, len(w2)) + 1):
                if i == 0 and j == 0:
                    continue
                head = self.phi(w1[:i], w2[:j])
                if not head:
                    continue
                tail = self._mu(w1[i:], w2[j:])
                for z in head:
                    _xor(out, [(z,) + t for t in tail])
        return frozenset(out)

    def baues_mu(self, pairs: Iterable) -> set:
        """mu on a set of (w1, w2) pairs."""
        out: set = set()
        for w1, w2 in pairs:
            if self.degree(w1) + self.degree(w2) > self.max_degree:
                raise WindowError("product leaves the window")
            _xor(out, self._mu(tuple(w1), tuple(w2)))
        return out

    def mu(self, w1: Word, w2: Word) -> set:
        return self.baues_mu([(w1, w2)])

    def mu_oracle(self, w1: Word, w2: Word) -> set:
        """Independent evaluation: lattice paths with diagonal steps at cup-one pairs."""
        n1, n2 = len(w1), len(w2)
        done: set = set()
        counts: dict = {((), 0, 0): 1}
        # breadth-first over steps, keeping path counts per (prefix, position)
        for _ in range(n1 + n2 + 1):
            nxt: dict = {}
            for (pre, i, j), c in counts.items():
                if i == n1 and j == n2:
                    if c % 2:
                        _xor(done, [pre])
                    continue
                steps = []
                if i < n1:
                    steps.append(((w1[i],), i + 1, j))
                if j < n2:
                    steps.append(((w2[j],), i, j + 1))
                if i < n1 and j < n2:
                    for z in self.A.cup1.get((w1[i], w2[j]), ()):
                        steps.append(((z,), i + 1, j + 1))
                for letter, a, b in steps:
                    key = (pre + letter, a, b)
                    nxt[key] = nxt.get(key, 0) + c
            counts = nxt
        return done

    # -- as a complex

    @cached_property
    def index(self) -> dict:
        return {w: (k, i) for k in range(self.max_degree + 1) for i, w in enumerate(self.words(k))}

    @cached_property
    def complex(self) -> Complex:
        groups = [FpGroup((2,) * len(self.words(k)), tuple(self.label(w) for w in self.words(k)))
                  for k in range(self.max_degree + 1)]
        diffs = []
        for k in range(self.max_degree):
            cols = []
            for w in self.words(k):
                v = [0] * len(self.words(k + 1))
                for t in self.bar_diff({w}):
                    v[self.index[t][1]] = 1
                cols.append(v)
            diffs.append(GroupHom.from_columns(groups[k], groups[k + 1], cols))
        return Complex(groups, diffs, "BA")

    def to_gens(self, e: Iterable[Word]) -> dict:
        return {self.index[w]: 1 for w in e}

    def word_of(self, gen) -> Word:
        return self.words(gen[0])[gen[1]]

    def mu_map(self) -> MultiMap:
        C = self.complex

        def fn(w):
            w1, w2 = self.word_of(w[0]), self.word_of(w[1])
            return {(self.index[t],): 1 for t in self._mu(w1, w2)}

        return MultiMap(C, 2, C, 1, 0, fn, "mu")

    def delta_map(self) -> MultiMap:
        C = self.complex

        def fn(w):
            return {(self.index[a], self.index[b]): 1 for a, b in self.bar_coproduct({self.word_of(w[0])})}

        return MultiMap(C, 1, C, 2, 0, fn, "Delta")

    # -- checks; each returns a list of failing inputs

    def check_d_squared(self) -> list:
        return [w for k in range(self.max_degree - 1) for w in self.words(k)
                if self.bar_diff(self.bar_diff({w}))]

    def check_coassociative(self) -> list:
        bad = []
        for k in range(self.max_degree + 1):
            for w in self.words(k):
                left: set = set()
                right: set = set()
                for a, b in self.bar_coproduct({w}):
                    _xor(left, [(x, y, b) for x, y in self.bar_coproduct({a})])
                    _xor(right, [(a, x, y) for x, y in self.bar_coproduct({b})])
                if left != right:
                    bad.append(w)
        return bad

    def check_counit(self) -> list:
        bad = []
        for k in range(self.max_degree + 1):
            for w in self.words(k):
                cop = self.bar_coproduct({w})
                if {b for a, b in cop if a == ()} != {w} or {a for a, b in cop if b == ()} != {w}:
                    bad.append(w)
        return bad

    def check_delta_chain(self) -> list:
        bad = []
        for k in range(self.max_degree):
            for w in self.words(k):
                lhs = self.bar_coproduct(self.bar_diff({w}))
                rhs: set = set()
                for a, b in self.bar_coproduct({w}):
                    _xor(rhs, [(x, b) for x in self.bar_diff({a})])
                    _xor(rhs, [(a, y) for y in self.bar_diff({b})])
                if lhs != rhs:
                    bad.append(w)
        return bad

    def pairs(self, total: int):
        for i in range(total + 1):
            for w1 in self.words(i):
                for w2 in self.words(total - i):
                    yield w1, w2

    def check_mu_chain(self, max_total: int | None = None) -> list:
        D = self.max_degree - 1 if max_total is None else max_total
        bad = []
        for t in range(D + 1):
            for w1, w2 in self.pairs(t):
                lhs = self.bar_diff(self._mu(w1, w2))
                rhs = self.baues_mu([(x, w2) for x in self.bar_diff({w1})])
                _xor(rhs, self.baues_mu([(w1, y) for y in self.bar_diff({w2})]))
                if lhs != rhs:
                    bad.append((w1, w2))
        return bad

    def check_hopf(self, max_total: int | None = None) -> list:
        """Delta mu = (mu (x) mu) s22 (Delta (x) Delta)."""
        D = self.max_degree if max_total is None else max_total
        bad = []
        for t in range(D + 1):
            for w1, w2 in self.pairs(t):
                lhs = self.bar_coproduct(self._mu(w1, w2))
                rhs: set = set()
                for a1, b1 in self.bar_coproduct({w1}):
                    for a2, b2 in self.bar_coproduct({w2}):
                        left = self._mu(a1, a2)
                        right = self._mu(b1, b2)
                        _xor(rhs, [(x, y) for x in left for y in right])
                if lhs != rhs:
                    bad.append((w1, w2))
        return bad

    def check_associative(self, max_total: int | None = None) -> list:
        D = self.max_degree if max_total is None else max_total
        bad = []
        for t in range(D + 1):
            for i in range(t + 1):
                for w1 in self.words(i):
                    for w2, w3 in self.pairs(t - i):
                        lhs = self.baues_mu([(x, w3) for x in self._mu(w1, w2)])
                        rhs = self.baues_mu([(w1, y) for y in self._mu(w2, w3)])
                        if lhs != rhs:
                            bad.append((w1, w2, w3))
        return bad

    def check_unit(self) -> list:
        return [w for k in range(self.max_degree + 1) for w in self.words(k)
                if self._mu((), w) != {w} or self._mu(w, ()) != {w}]


def from_tables(degrees: Mapping, products: Mapping | None = None, cup1: Mapping | None = None,
                diff: Mapping | None = None) -> TruncatedDga:
    return TruncatedDga(dict(degrees), dict(products or {}), dict(diff or {}), dict(cup1 or {}))
