"""Presented noncommutative DGAs, realized degree by degree.

The free algebra on graded generators is built word by word; a word's
coefficient group is Z/gcd(orders of its letters).  Relations generate a
two-sided ideal, and annihilation schemas kill every word in which a chosen
generator has a positive-degree neighbour on the given side.  Each degree of
the quotient is an ordinary quotient of f.g. abelian groups.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Mapping, Sequence

from .abelian import FpGroup, GroupHom, Lattice, dense, quotient
from .graded import Complex, MultiMap, WindowError

Word = tuple  # tuple of generator names
AlgElement = dict  # {Word: int}


@dataclass(frozen=True)
class GenSpec:
    name: str
    degree: int
    order: int = 0
    differential: Mapping = field(default_factory=dict)


@dataclass
class AlgebraPresentation:
    generators: list
    relations: list = field(default_factory=list)
    annihilators: list = field(default_factory=list)  # (generator name, "left" | "right" | "both")
    unit_order: int = 0

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        for g in self.generators:
            if g.degree <= 0:
                raise ValueError(f"generator {g.name} must have positive degree")
        for gen, side in self.annihilators:
            if gen not in names:
                raise ValueError(f"annihilator refers to unknown generator {gen}")
            if side not in ("left", "right", "both"):
                raise ValueError(f"bad annihilator side {side!r}")

    @cached_property
    def gens(self) -> dict:
        return {g.name: g for g in self.generators}

    @cached_property
    def position(self) -> dict:
        return {g.name: i for i, g in enumerate(self.generators)}

    def degree(self, word: Word) -> int:
        return sum(self.gens[x].degree for x in word)

    def word_order(self, word: Word) -> int:
        o = self.unit_order
        for x in word:
            o = gcd(o, self.gens[x].order)
        return o

    def degree_of(self, e: Mapping) -> int:
        degs = {self.degree(w) for w, c in e.items() if c}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element {format_alg(e)}")
        return degs.pop() if degs else -1

    def validate(self) -> list[str]:
        problems = []
        for g in self.generators:
            try:
                dd = self.degree_of(g.differential)
            except ValueError as exc:
                problems.append(f"d({g.name}): {exc}")
                continue
            if dd not in (-1, g.degree + 1):
                problems.append(f"d({g.name}) has degree {dd}, expected {g.degree + 1}")
            for w, c in g.differential.items():
                o = self.word_order(w)
                if g.order and (g.order * c) % o if o else g.order and c:
                    problems.append(f"d({g.name}) is not order-compatible at {''.join(w)}")
        for i, r in enumerate(self.relations):
            try:
                self.degree_of(r)
            except ValueError as exc:
                problems.append(f"relation {i + 1}: {exc}")
        return problems


def format_alg(e: Mapping) -> str:
    if not e:
        return "0"
    parts = []
    for w in sorted(e, key=lambda w: (len(w), w)):
        c = e[w]
        name = "".join(w) if all(len(x) == 1 for x in w) else "*".join(w)
        name = name or "1"
        parts.append(name if c == 1 else f"{c}{name}" if name != "1" else str(c))
    return "+".join(parts).replace("+-", "-")


def mul_elems(e1: Mapping, e2: Mapping) -> AlgElement:
    out: dict = {}
    for u, a in e1.items():
        for v, b in e2.items():
            out[u + v] = out.get(u + v, 0) + a * b
    return {w: c for w, c in out.items() if c}


def add_alg(*elems: Mapping, coeffs: Sequence[int] | None = None) -> AlgElement:
    out: dict = {}
    coeffs = coeffs or [1] * len(elems)
    for e, k in zip(elems, coeffs):
        for w, c in e.items():
            out[w] = out.get(w, 0) + k * c
    return {w: c for w, c in out.items() if c}


class ParseError(ValueError):
    pass


def parse_element(text: str, names: Sequence[str]) -> AlgElement:
    """Parse sums of products such as ``a^2 + x``, ``(ac+ca)^2`` or ``2c``.

    Juxtaposed generator names are split greedily, longest name first.
    """
    names_sorted = sorted(names, key=len, reverse=True)
    pattern = "|".join(re.escape(n) for n in names_sorted)
    tok_re = re.compile(r"\s*(?:(\d+)|(" + pattern + r")|([-+*^()]))" if names else r"\s*(?:(\d+)|([-+*^()]))")
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = tok_re.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse {text!r} at position {pos}")
        groups = m.groups()
        if groups[0] is not None:
            tokens.append(("num", int(groups[0])))
        elif names and groups[1] is not None:
            tokens.append(("gen", groups[1]))
        else:
            tokens.append(("op", groups[-1]))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else (None, None)

    def take():
        nonlocal i
        if i >= len(tokens):
            raise ParseError(f"unexpected end of {text!r}")
        i += 1
        return tokens[i - 1]

    def expr():
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        acc = add_alg(term(), coeffs=[sign])
        while peek() in (("op", "+"), ("op", "-")):
            s = 1 if take()[1] == "+" else -1
            acc = add_alg(acc, term(), coeffs=[1, s])
        return acc

    def term():
        acc = factor()
        while True:
            t = peek()
            if t == ("op", "*"):
                take()
                acc = mul_elems(acc, factor())
            elif t[0] in ("num", "gen") or t == ("op", "("):
                acc = mul_elems(acc, factor())
            else:
                return acc

    def factor():
        t = take()
        if t[0] == "num":
            base = {(): t[1]}
        elif t[0] == "gen":
            base = {(t[1],): 1}
        elif t == ("op", "("):
            base = expr()
            if take() != ("op", ")"):
                raise ParseError(f"unbalanced parentheses in {text!r}")
        else:
            raise ParseError(f"unexpected token {t[1]!r} in {text!r}")
        if peek() == ("op", "^"):
            take()
            k = take()
            if k[0] != "num":
                raise ParseError(f"exponent must be an integer in {text!r}")
            out = {(): 1}
            for _ in range(k[1]):
                out = mul_elems(out, base)
            base = out
        return base

    if not tokens:
        raise ParseError("empty expression")
    result = expr()
    if i != len(tokens):
        raise ParseError(f"trailing input in {text!r}")
    return {w: c for w, c in result.items() if c}


@dataclass
class ClosureReport:
    max_degree: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class QuotientDGA:
    """The quotient algebra realized on degrees ``0..max_degree``."""

    def __init__(self, pres: AlgebraPresentation, max_degree: int = 15):
        problems = pres.validate()
        if problems:
            raise ValueError("; ".join(problems))
        self.pres = pres
        self.max_degree = max_degree
        self._basis: dict[int, list[Word]] = {}
        self._quot: dict = {}

    # -- words

    def free_basis(self, k: int) -> list[Word]:
        """All words of degree k, lexicographic in declaration order."""
        if k in self._basis:
            return self._basis[k]
        gens = self.pres.generators
        out: list[Word] = []

        def rec(prefix, left):
            if left == 0:
                out.append(tuple(prefix))
                return
            for g in gens:
                if g.degree <= left:
                    prefix.append(g.name)
                    rec(prefix, left - g.degree)
                    prefix.pop()

        if k >= 0:
            rec([], k)
        self._basis[k] = out
        return out

    def killed(self, w: Word) -> bool:
        if self.pres.word_order(w) == 1:
            return True
        n = len(w)
        for gen, side in self.pres.annihilators:
            for i, x in enumerate(w):
                if x != gen:
                    continue
                if side in ("left", "both") and i > 0:
                    return True
                if side in ("right", "both") and i < n - 1:
                    return True
        return False

    def live_basis(self, k: int) -> list[Word]:
        return [w for w in self.free_basis(k) if not self.killed(w)]

    @cached_property
    def _live_index(self) -> dict:
        return {}

    def _index(self, k: int) -> dict:
        if k not in self._live_index:
            self._live_index[k] = {w: i for i, w in enumerate(self.live_basis(k))}
        return self._live_index[k]

    def free_group(self, k: int) -> FpGroup:
        words = self.live_basis(k)
        return FpGroup(tuple(self.pres.word_order(w) for w in words),
                       tuple("".join(w) or "1" for w in words))

    def vector(self, e: Mapping, k: int) -> tuple[int, ...]:
        idx = self._index(k)
        v = [0] * len(idx)
        for w, c in e.items():
            if self.pres.degree(w) != k:
                raise ValueError(f"term {''.join(w)} is not of degree {k}")
            if w in idx:
                v[idx[w]] += c
            elif not self.killed(w):
                raise KeyError(w)
        return self.free_group(k).reduce(v)

    def element(self, v: Sequence[int], k: int) -> AlgElement:
        words = self.live_basis(k)
        return {words[i]: c for i, c in enumerate(v) if c}

    # -- ideal and quotient

    def ideal_generators(self, k: int) -> list[AlgElement]:
        out = []
        for r in self.pres.relations:
            if not r:
                continue
            dr = self.pres.degree_of(r)
            rest = k - dr
            if rest < 0:
                continue
            for du in range(rest + 1):
                for u in self.free_basis(du):
                    for v in self.free_basis(rest - du):
                        e = {u + w + v: c for w, c in r.items()}
                        e = {w: c for w, c in e.items() if not self.killed(w)}
                        if e:
                            out.append(e)
        return out

    def ideal_at_degree(self, k: int) -> Lattice:
        n = len(self.live_basis(k))
        G = self.free_group(k)
        L = Lattice(n, G.orders)
        for e in self.ideal_generators(k):
            L.add(self.vector(e, k))
        return L

    def in_ideal(self, e: Mapping) -> bool:
        k = self.pres.degree_of(e)
        if k < 0:
            return True
        e = {w: c for w, c in e.items() if not self.killed(w)}
        return self._ideal(k).contains(self.vector(e, k))

    def _ideal(self, k: int) -> Lattice:
        key = ("ideal", k)
        if key not in self._quot:
            self._quot[key] = self.ideal_at_degree(k)
        return self._quot[key]

    def quotient_at(self, k: int):
        if not 0 <= k <= self.max_degree:
            raise WindowError(f"degree {k} outside window [0, {self.max_degree}]")
        if k not in self._quot:
            G = self.free_group(k)
            self._quot[k] = quotient(G, self._ideal(k).basis())
        return self._quot[k]

    def normal_form(self, e: Mapping) -> AlgElement:
        k = self.pres.degree_of(e)
        if k < 0:
            return {}
        if k > self.max_degree:
            raise WindowError(f"degree {k} outside window [0, {self.max_degree}]")
        e = {w: c for w, c in e.items() if not self.killed(w)}
        v = self.vector(e, k)
        red = self._ideal(k).reduce(v)
        return self.element(self.free_group(k).reduce(dense(red, len(v))), k)

    def equal(self, e1: Mapping, e2: Mapping) -> bool:
        return not self.normal_form(add_alg(e1, e2, coeffs=[1, -1]))

    def multiply(self, e1: Mapping, e2: Mapping) -> AlgElement:
        prod = mul_elems(e1, e2)
        if prod and self.pres.degree_of(prod) > self.max_degree:
            raise WindowError("product leaves the window")
        return self.normal_form(prod)

    def parse(self, text: str) -> AlgElement:
        return parse_element(text, [g.name for g in self.pres.generators])

    # -- differential

    def d_word(self, w: Word) -> AlgElement:
        out: dict = {}
        left = 0
        for i, x in enumerate(w):
            sign = -1 if left % 2 else 1
            for dw, c in self.pres.gens[x].differential.items():
                nw = w[:i] + dw + w[i + 1:]
                out[nw] = out.get(nw, 0) + sign * c
            left += self.pres.gens[x].degree
        return {w: c for w, c in out.items() if c}

    def d_free(self, e: Mapping) -> AlgElement:
        out: dict = {}
        for w, c in e.items():
            for v, a in self.d_word(w).items():
                out[v] = out.get(v, 0) + c * a
        res = {}
        for w, c in out.items():
            o = self.pres.word_order(w)
            c = c % o if o else c
            if c and not self.killed(w):
                res[w] = c
        return res

    def differential(self, e: Mapping) -> AlgElement:
        k = self.pres.degree_of(e)
        if k < 0:
            return {}
        if k + 1 > self.max_degree:
            raise WindowError("differential leaves the window")
        e = {w: c for w, c in e.items() if not self.killed(w)}
        return self.normal_form(self.d_free(e))

    def check_ideal_closure(self, max_degree: int | None = None) -> ClosureReport:
        D = self.max_degree if max_degree is None else max_degree
        rep = ClosureReport(D)
        for k in range(D):
            # killed words are ideal generators too
            gens = [{w: 1} for w in self.free_basis(k) if self.killed(w)]
            gens += self.ideal_generators(k)
            for e in gens:
                de = self.d_free(e)
                if de and not self.in_ideal(de):
                    rep.violations.append((k, format_alg(e), format_alg(de)))
        return rep

    def check_order_compatible(self, k: int) -> list:
        """d must respect each word's torsion: o(w)*d(w) = 0."""
        bad = []
        for w in self.live_basis(k):
            o = self.pres.word_order(w)
            if o and self.d_free({w: o}):
                if self.normal_form(self.d_free({w: o})):
                    bad.append(w)
        return bad

    # -- packaging

    def label(self, k: int, j: int) -> str:
        Q = self.quotient_at(k)
        rep = self.element(Q.section(Q.group.unit(j)), k)
        return format_alg(self.normal_form(rep))

    def to_class(self, e: Mapping, k: int) -> tuple[int, ...]:
        e = {w: c for w, c in e.items() if not self.killed(w)}
        return self.quotient_at(k).projection(self.vector(e, k))

    def from_class(self, x: Sequence[int], k: int) -> AlgElement:
        Q = self.quotient_at(k)
        return self.normal_form(self.element(Q.section(x), k))

    def dga_complex(self, max_degree: int | None = None, reduced: bool = False, name="B") -> Complex:
        """The quotient as a Complex; ``reduced`` drops degree 0 (the unit)."""
        D = self.max_degree if max_degree is None else min(max_degree, self.max_degree)
        key = ("complex", D, reduced)
        if key in self._quot:
            return self._quot[key]
        rep = self.check_ideal_closure(D)
        if not rep.ok:
            raise ValueError(f"ideal not closed under d: {rep.violations[:3]}")
        groups = []
        for k in range(D + 1):
            Q = self.quotient_at(k)
            g = Q.group
            if reduced and k == 0:
                g = FpGroup(())
            else:
                g = FpGroup(g.orders, tuple(self.label(k, j) for j in range(len(g))))
            groups.append(g)
        diffs = []
        for k in range(D):
            cols = []
            for j in range(len(groups[k])):
                e = self.from_class(groups[k].unit(j), k)
                cols.append(self.to_class(self.d_free(e), k + 1))
            diffs.append(GroupHom.from_columns(groups[k], groups[k + 1], cols))
        C = Complex(groups, diffs, name)
        self._quot[key] = C
        return C

    def element_to_gens(self, C: Complex, e: Mapping) -> dict:
        """An algebra element as a combination of the complex's generators."""
        k = self.pres.degree_of(e)
        if k < 0:
            return {}
        return C.from_vector(self.to_class(e, k), k)

    def gens_to_element(self, C: Complex, v: Mapping) -> AlgElement:
        out: dict = {}
        for (k, j), c in v.items():
            out = add_alg(out, self.from_class(C.groups[k].unit(j), k), coeffs=[1, c])
        return self.normal_form(out) if out else {}

    def product_map(self, C: Complex) -> MultiMap:
        """mu : C (x) C -> C for a complex made by ``dga_complex``."""
        def fn(w):
            (g1, g2) = w
            e1 = self.from_class(C.groups[g1[0]].unit(g1[1]), g1[0])
            e2 = self.from_class(C.groups[g2[0]].unit(g2[1]), g2[0])
            prod = mul_elems(e1, e2)
            if not prod:
                return {}
            k = g1[0] + g2[0]
            if k > C.max_degree:
                return {}
            if C.groups[0].orders == () and k == 0:
                return {}
            return {(g,): c for g, c in self.element_to_gens(C, prod).items()}

        return MultiMap(C, 2, C, 1, 0, fn, "mu")
