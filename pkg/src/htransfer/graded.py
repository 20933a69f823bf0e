"""Cochain complexes of f.g. abelian groups, tensor powers, multilinear maps.

Grading is cohomological: differentials raise degree by one.  A complex is
stored on a window ``[0, D]``; the differential out of degree ``D`` is taken
to be zero (the brutal quotient truncation), so every stored complex really
is a complex.  Results that depend on the truncation are only asserted at
interior degrees, and the helpers here say which degrees those are.

Basis elements of a complex are pairs ``(degree, index)``.  A basis element
of a tensor power is a tuple of those, and an element of a tensor power is a
dict ``{tuple: coefficient}``.  The tensor of cyclic groups Z/j and Z/k is
Z/gcd(j, k) (Z acting as the identity), so each tuple carries an order.

Signs follow the Koszul rule: moving a degree-p symbol past a degree-q symbol
costs (-1)^(pq).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import gcd
from typing import Callable, Iterable, Mapping, Sequence

from .abelian import FpGroup, GroupHom, Homology, homology, solve

Gen = tuple[int, int]
Word = tuple  # tuple of Gen
Elem = dict  # {Word: int}


class WindowError(ValueError):
    """An operation would leave the degree window."""


@dataclass(frozen=True, eq=False)
class Complex:
    """Degree-indexed groups on ``[0, max_degree]`` with degree +1 maps.

    ``diffs[k]`` maps degree k to degree k+1 for ``k < max_degree``.
    """

    groups: tuple[FpGroup, ...]
    diffs: tuple[GroupHom, ...]
    name: str = "C"
    zero_differential: bool = False
    exact_top: bool = False  # the complex is zero above the window

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        object.__setattr__(self, "diffs", tuple(self.diffs))
        if len(self.diffs) != max(len(self.groups) - 1, 0):
            raise ValueError("need one differential per degree below the top")
        for k, d in enumerate(self.diffs):
            if d.source.orders != self.groups[k].orders or d.target.orders != self.groups[k + 1].orders:
                raise ValueError(f"differential {k} does not match the groups")

    @classmethod
    def with_zero_differential(cls, groups: Sequence[FpGroup], name="H") -> "Complex":
        groups = tuple(groups)
        diffs = [GroupHom.zero(groups[k], groups[k + 1]) for k in range(len(groups) - 1)]
        return cls(groups, diffs, name, zero_differential=True)

    @property
    def max_degree(self) -> int:
        return len(self.groups) - 1

    def group(self, k: int) -> FpGroup:
        if 0 <= k <= self.max_degree:
            return self.groups[k]
        return FpGroup(())

    def basis(self, k: int | None = None) -> list[Gen]:
        if k is None:
            return [(d, i) for d in range(len(self.groups)) for i in range(len(self.groups[d]))]
        return [(k, i) for i in range(len(self.group(k)))]

    def order(self, gen: Gen) -> int:
        return self.groups[gen[0]].orders[gen[1]]

    def label(self, gen: Gen) -> str:
        g = self.groups[gen[0]]
        if g.labels:
            return g.labels[gen[1]]
        return f"{self.name}{gen[0]}_{gen[1]}"

    def d(self, gen: Gen) -> dict[Gen, int]:
        k, i = gen
        if k >= self.max_degree:
            return {}
        col = self.diffs[k].column(i)
        return {(k + 1, j): c for j, c in enumerate(col) if c}

    def to_vector(self, elem: Mapping[Gen, int], k: int) -> tuple[int, ...]:
        v = [0] * len(self.group(k))
        for (deg, i), c in elem.items():
            if deg != k:
                raise ValueError("inhomogeneous element")
            v[i] += c
        return self.group(k).reduce(v)

    def from_vector(self, v: Sequence[int], k: int) -> dict[Gen, int]:
        return {(k, i): c for i, c in enumerate(v) if c}

    def is_complex(self) -> bool:
        return all(self.diffs[k + 1].compose(self.diffs[k]).is_zero() for k in range(len(self.diffs) - 1))

    def homology_at(self, k: int) -> Homology:
        """Homology at degree k (exact only for k < max_degree)."""
        g = self.group(k)
        incoming = self.diffs[k - 1] if k >= 1 else GroupHom.zero(FpGroup(()), g)
        outgoing = self.diffs[k] if k < self.max_degree else GroupHom.zero(g, FpGroup(()))
        return homology(incoming, outgoing)

    def is_interior(self, k: int) -> bool:
        return self.zero_differential or self.exact_top or k < self.max_degree

    def truncated(self, max_degree: int) -> "Complex":
        D = min(max_degree, self.max_degree)
        return Complex(self.groups[: D + 1], self.diffs[:D], self.name, self.zero_differential)


def word_order(C: Complex, word: Word) -> int:
    o = 0
    for g in word:
        o = gcd(o, C.order(g))
    return o


def word_degree(word: Word) -> int:
    return sum(g[0] for g in word)


class TensorPower:
    """C^{(x)m} on the window of C, with Koszul-signed differential.

    ``free=True`` forgets the torsion of every tuple (the free cover): maps
    out of it are determined by arbitrary values on basis tuples.
    """

    def __init__(self, C: Complex, m: int, free: bool = False, max_degree: int | None = None):
        if m < 1:
            raise ValueError("tensor power needs m >= 1")
        self.C = C
        self.m = m
        self.free = free
        self.max_degree = C.max_degree if max_degree is None else max_degree
        self._basis_cache: dict[int, list[Word]] = {}

    def __repr__(self):
        return f"TensorPower({self.C.name}, {self.m}, free={self.free})"

    def order(self, word: Word) -> int:
        return 0 if self.free else word_order(self.C, word)

    def basis(self, k: int) -> list[Word]:
        if k in self._basis_cache:
            return self._basis_cache[k]
        out: list[Word] = []
        if 0 <= k <= self.max_degree:
            per_deg = [self.C.basis(d) for d in range(self.C.max_degree + 1)]

            def rec(prefix, remaining, left):
                if left == 0:
                    if remaining == 0:
                        w = tuple(prefix)
                        if word_order(self.C, w) != 1:
                            out.append(w)
                    return
                for d in range(0, remaining + 1):
                    if d > self.C.max_degree:
                        break
                    for gen in per_deg[d]:
                        prefix.append(gen)
                        rec(prefix, remaining - d, left - 1)
                        prefix.pop()

            rec([], k, self.m)
        out.sort()
        self._basis_cache[k] = out
        return out

    def all_basis(self) -> list[Word]:
        return [w for k in range(self.max_degree + 1) for w in self.basis(k)]

    @cached_property
    def _index(self) -> dict[Word, int]:
        idx = {}
        for k in range(self.max_degree + 1):
            for i, w in enumerate(self.basis(k)):
                idx[w] = i
        return idx

    def group(self, k: int) -> FpGroup:
        words = self.basis(k)
        labels = tuple("|".join(self.C.label(g) for g in w) for w in words)
        return FpGroup(tuple(self.order(w) for w in words), labels)

    def normalize(self, elem: Mapping[Word, int]) -> Elem:
        out = {}
        for w, c in elem.items():
            if word_degree(w) > self.max_degree:
                continue
            o = self.order(w)
            if o:
                c %= o
            if c:
                out[w] = c
        return out

    def to_vector(self, elem: Mapping[Word, int], k: int) -> tuple[int, ...]:
        v = [0] * len(self.basis(k))
        idx = self._index
        for w, c in elem.items():
            if word_degree(w) != k:
                raise ValueError(f"element of degree {word_degree(w)} where {k} expected")
            if w in idx:
                v[idx[w]] += c
            elif word_order(self.C, w) != 1:
                raise ValueError(f"{w} is not a basis tuple")
        return self.group(k).reduce(v)

    def from_vector(self, v: Sequence[int], k: int) -> Elem:
        words = self.basis(k)
        return {words[i]: c for i, c in enumerate(v) if c}

    def d(self, elem: Mapping[Word, int]) -> Elem:
        """Leibniz differential: the sign is (-1)^(degree to the left)."""
        out: dict[Word, int] = {}
        for w, c in elem.items():
            left = 0
            for i, g in enumerate(w):
                sign = -1 if left % 2 else 1
                for h, e in self.C.d(g).items():
                    nw = w[:i] + (h,) + w[i + 1:]
                    out[nw] = out.get(nw, 0) + sign * c * e
                left += g[0]
        return self.normalize(out)

    def diff(self, k: int) -> GroupHom:
        src = self.group(k)
        tgt = self.group(k + 1)
        cols = []
        for w in self.basis(k):
            cols.append(self.to_vector(self.d({w: 1}), k + 1) if k < self.max_degree else tgt.zero())
        return GroupHom.from_columns(src, tgt, cols)

    @cached_property
    def complex(self) -> Complex:
        if self.m == 1 and not self.free:
            return self.C
        groups = [self.group(k) for k in range(self.max_degree + 1)]
        diffs = [self.diff(k) for k in range(self.max_degree)]
        name = self.C.name if self.m == 1 else f"{self.C.name}^{self.m}"
        return Complex(groups, diffs, name, self.C.zero_differential)

    def label(self, word: Word) -> str:
        return "|".join(self.C.label(g) for g in word)

    def format(self, elem: Mapping[Word, int]) -> str:
        return format_elem(elem, self.label)


def tensor_power(C: Complex, m: int) -> Complex:
    return TensorPower(C, m).complex


def format_elem(elem: Mapping, label: Callable) -> str:
    if not elem:
        return "0"
    parts = []
    for w in sorted(elem):
        c = elem[w]
        parts.append(label(w) if c == 1 else f"{c}*{label(w)}")
    return " + ".join(parts)


def add_elems(*elems: Mapping, coeffs: Sequence[int] | None = None) -> Elem:
    out: dict = {}
    coeffs = coeffs or [1] * len(elems)
    for e, k in zip(elems, coeffs):
        for w, c in e.items():
            out[w] = out.get(w, 0) + k * c
    return {w: c for w, c in out.items() if c}


# ---------------------------------------------------------------------------
# Multilinear maps


class MultiMap:
    """A degree-homogeneous map A^{(x)m} -> B^{(x)n}, evaluated on basis tuples.

    Values are given by a function of the basis tuple and memoised.  Maps are
    determined by their values on basis tuples; composites feed canonical
    (reduced) coefficients into the outer map.
    """

    def __init__(self, A: Complex, m: int, B: Complex, n: int, shift: int,
                 fn: Callable[[Word], Mapping] | None = None, name: str = "f",
                 table: Mapping[Word, Mapping] | None = None):
        self.A, self.m, self.B, self.n, self.shift = A, m, B, n, shift
        self.name = name
        self.src = TensorPower(A, m, free=True)
        self.tgt = TensorPower(B, n)
        self._memo: dict[Word, Elem] = {}
        if table is not None:
            tbl = {tuple(w): dict(v) for w, v in table.items()}
            fn = lambda w, tbl=tbl: tbl.get(w, {})
        self._fn = fn or (lambda w: {})

    def __repr__(self):
        return f"MultiMap({self.name}: {self.A.name}^{self.m} -> {self.B.name}^{self.n}, shift {self.shift})"

    def __call__(self, w: Word) -> Elem:
        w = tuple(w)
        if w in self._memo:
            return self._memo[w]
        if len(w) != self.m:
            raise ValueError(f"{self.name} takes {self.m} inputs, got {len(w)}")
        k = word_degree(w)
        if k + self.shift > self.B.max_degree or k + self.shift < 0:
            val: Elem = {}
        else:
            val = self.tgt.normalize(self._fn(w))
            for out in val:
                if word_degree(out) != k + self.shift:
                    raise ValueError(f"{self.name}{w} has degree {word_degree(out)}, expected {k + self.shift}")
        self._memo[w] = val
        return val

    def apply(self, elem: Mapping[Word, int]) -> Elem:
        out: dict[Word, int] = {}
        for w, c in elem.items():
            for v, e in self(w).items():
                out[v] = out.get(v, 0) + c * e
        return self.tgt.normalize(out)

    def in_window(self, w: Word) -> bool:
        k = word_degree(w)
        return 0 <= k + self.shift <= self.B.max_degree

    def table(self, max_input_degree: int | None = None) -> dict[Word, Elem]:
        D = self.A.max_degree if max_input_degree is None else max_input_degree
        out = {}
        for k in range(min(D, self.src.max_degree) + 1):
            for w in self.src.basis(k):
                v = self(w)
                if v:
                    out[w] = v
        return out

    def same_as(self, other: "MultiMap", degrees: Iterable[int]) -> bool:
        return not self.residual(other, degrees)

    def residual(self, other: "MultiMap", degrees: Iterable[int]) -> dict[Word, Elem]:
        out = {}
        for k in degrees:
            for w in self.src.basis(k):
                diff = self.tgt.normalize(add_elems(self(w), other(w), coeffs=[1, -1]))
                if diff:
                    out[w] = diff
        return out

    def _check(self, other: "MultiMap"):
        if (self.A, self.m, self.B, self.n, self.shift) != (other.A, other.m, other.B, other.n, other.shift):
            raise ValueError(f"incompatible maps {self!r} and {other!r}")

    def __add__(self, other: "MultiMap") -> "MultiMap":
        self._check(other)
        return MultiMap(self.A, self.m, self.B, self.n, self.shift,
                        lambda w: add_elems(self(w), other(w)), f"({self.name}+{other.name})")

    def __sub__(self, other: "MultiMap") -> "MultiMap":
        self._check(other)
        return MultiMap(self.A, self.m, self.B, self.n, self.shift,
                        lambda w: add_elems(self(w), other(w), coeffs=[1, -1]), f"({self.name}-{other.name})")

    def __neg__(self) -> "MultiMap":
        return self.scale(-1)

    def scale(self, k: int) -> "MultiMap":
        return MultiMap(self.A, self.m, self.B, self.n, self.shift,
                        lambda w: {v: k * c for v, c in self(w).items()}, f"{k}{self.name}")

    def __matmul__(self, first: "MultiMap") -> "MultiMap":
        """Composition: (self @ first)(x) = self(first(x))."""
        if first.B is not self.A or first.n != self.m:
            raise ValueError(f"cannot compose {self!r} after {first!r}")
        return MultiMap(first.A, first.m, self.B, self.n, self.shift + first.shift,
                        lambda w: self.apply(first(w)), f"{self.name}{first.name}")

    def is_zero(self, degrees: Iterable[int]) -> bool:
        return all(not self(w) for k in degrees for w in self.src.basis(k))


def zero_map(A: Complex, m: int, B: Complex, n: int, shift: int, name="0") -> MultiMap:
    return MultiMap(A, m, B, n, shift, lambda w: {}, name)


def identity_map(C: Complex, k: int = 1) -> MultiMap:
    return MultiMap(C, k, C, k, 0, lambda w: {w: 1}, "1" if k == 1 else f"1^{k}")


def tensor(*maps: MultiMap) -> MultiMap:
    """f1 (x) f2 (x) ... with (f (x) g)(x (x) y) = (-1)^{|g||x|} f(x) (x) g(y)."""
    A, B = maps[0].A, maps[0].B
    for f in maps:
        if f.A is not A or f.B is not B:
            raise ValueError("tensor factors must share source and target complexes")
    m = sum(f.m for f in maps)
    n = sum(f.n for f in maps)
    shift = sum(f.shift for f in maps)

    def fn(w):
        result: dict = {(): 1}
        pos = 0
        for f in maps:
            piece = w[pos:pos + f.m]
            # f moves past the inputs to its left
            sign = -1 if (f.shift * word_degree(w[:pos])) % 2 else 1
            val = f(piece)
            if not val:
                return {}
            nxt: dict = {}
            for u, a in result.items():
                for v, b in val.items():
                    nw = u + v
                    nxt[nw] = nxt.get(nw, 0) + sign * a * b
            result = nxt
            pos += f.m
        return result

    name = "(" + "x".join(f.name for f in maps) + ")"
    return MultiMap(A, m, B, n, shift, fn, name)


def sigma(C: Complex, p: int, q: int) -> MultiMap:
    """(C^p)^q -> (C^q)^p, the transpose of a q x p array of tensor factors."""
    def fn(w):
        blocks = [w[i * p:(i + 1) * p] for i in range(q)]
        order = [(i, j) for j in range(p) for i in range(q)]  # output position -> (block, slot)
        flat_index = [i * p + j for (i, j) in order]
        out = tuple(w[t] for t in flat_index)
        sign = 0
        for a in range(len(flat_index)):
            for b in range(a + 1, len(flat_index)):
                if flat_index[a] > flat_index[b]:
                    sign += w[flat_index[a]][0] * w[flat_index[b]][0]
        return {out: -1 if sign % 2 else 1}

    return MultiMap(C, p * q, C, p * q, 0, fn, f"s{p},{q}")


def differential_map(C: Complex, k: int = 1) -> MultiMap:
    tp = TensorPower(C, k)
    return MultiMap(C, k, C, k, 1, lambda w: tp.d({w: 1}), "d")


def nabla(f: MultiMap) -> MultiMap:
    """d_B f - (-1)^{|f|} f d_A."""
    dB = TensorPower(f.B, f.n)
    dA = TensorPower(f.A, f.m)
    sign = -1 if f.shift % 2 == 0 else 1

    def fn(w):
        left = dB.d(f(w))
        right = f.apply(dA.d({w: 1}))
        return add_elems(left, right, coeffs=[1, sign])

    return MultiMap(f.A, f.m, f.B, f.n, f.shift + 1, fn, f"N{f.name}")


def nabla_interior(f: MultiMap, k: int) -> bool:
    """Is nabla(f) at input degree k unaffected by the window truncation?"""
    return _interior(f.A, f.B, k, f.shift)


def _interior(A: Complex, B: Complex, k: int, shift: int) -> bool:
    if not A.is_interior(k):
        return False
    if k + shift + 1 > B.max_degree and not B.exact_top:
        return False
    return B.is_interior(k + shift)


def chain_map(A: Complex, B: Complex, images: Mapping[Gen, Mapping[Gen, int]], name="g") -> MultiMap:
    """A degree-0 map A -> B from generator images."""
    tbl = {(g,): {(h,): c for h, c in v.items()} for g, v in images.items()}
    return MultiMap(A, 1, B, 1, 0, table=tbl, name=name)


def g_tilde(g: MultiMap, u: MultiMap) -> MultiMap:
    """g^{(x)n} u."""
    if g.m != 1 or g.n != 1:
        raise ValueError("g must be a (1,1) map")
    if u.B is not g.A:
        raise ValueError("u must land in the source of g")
    gn = g if u.n == 1 else tensor(*([g] * u.n))
    out = gn @ u
    out.name = f"g~({u.name})"
    return out


# ---------------------------------------------------------------------------
# Hom complexes, block by block


@dataclass
class HomBlock:
    words: tuple  # source basis tuples in this block
    shift: int
    group: FpGroup
    gens: tuple  # (source word, target word, step)


class HomComplex:
    """Hom(A^{(x)m}, B^{(x)n}) with the differential nabla.

    ``free=True`` (the default) takes maps out of the free cover of the
    source, i.e. arbitrary values on basis tuples.  ``free=False`` takes
    genuine group homomorphisms.  The complex splits into blocks, one per
    connected component of source tuples under the source differential; when
    the source differential is zero every tuple is its own block.
    """

    def __init__(self, A: Complex, m: int, B: Complex, n: int, free: bool = True):
        self.A, self.m, self.B, self.n = A, m, B, n
        self.free = free
        self.src = TensorPower(A, m, free=free)
        self.tgt = TensorPower(B, n)
        self._ssrc = TensorPower(A, m)

    @cached_property
    def blocks(self) -> list[tuple]:
        words = self._ssrc.all_basis()
        parent = {w: w for w in words}

        def find(w):
            while parent[w] != w:
                parent[w] = parent[parent[w]]
                w = parent[w]
            return w

        for w in words:
            for v in self._ssrc.d({w: 1}):
                parent[find(v)] = find(w)
        comps: dict = {}
        for w in words:
            comps.setdefault(find(w), []).append(w)
        return sorted((tuple(sorted(c)) for c in comps.values()), key=lambda c: (word_degree(c[0]), c))

    def block_of(self, w: Word) -> tuple:
        for b in self.blocks:
            if w in b:
                return b
        raise KeyError(w)

    def hom_block(self, words: tuple, shift: int) -> HomBlock:
        orders, gens, labels = [], [], []
        for w in words:
            a = self.src.order(w)
            for v in self.tgt.basis(word_degree(w) + shift):
                b = self.tgt.order(v)
                if a == 0:
                    o, st = b, 1
                elif b == 0:
                    continue
                else:
                    o = gcd(a, b)
                    st = b // o
                if o == 1:
                    continue
                orders.append(o)
                gens.append((w, v, st))
                labels.append(f"{self.tgt.label(v)}*d[{self.src.label(w)}]")
        return HomBlock(words, shift, FpGroup(tuple(orders), tuple(labels)), tuple(gens))

    def to_coords(self, blk: HomBlock, f: MultiMap | Callable) -> tuple[int, ...]:
        out = []
        for w, v, st in blk.gens:
            c = f(w).get(v, 0)
            if c % st:
                raise ValueError("map is not a homomorphism on this block")
            out.append(c // st)
        return blk.group.reduce(out)

    def from_coords(self, blk: HomBlock, x: Sequence[int]) -> dict[Word, Elem]:
        out: dict[Word, Elem] = {w: {} for w in blk.words}
        for a, (w, v, st) in zip(x, blk.gens):
            if a:
                out[w][v] = out[w].get(v, 0) + a * st
        return {w: self.tgt.normalize(e) for w, e in out.items()}

    def map_from_values(self, shift: int, values: Mapping[Word, Elem], name="f") -> MultiMap:
        return MultiMap(self.A, self.m, self.B, self.n, shift, table=values, name=name)

    def nabla_hom(self, words: tuple, shift: int) -> GroupHom:
        src = self.hom_block(words, shift)
        tgt = self.hom_block(words, shift + 1)
        cols = []
        for i in range(len(src.gens)):
            x = [0] * len(src.gens)
            x[i] = 1
            f = self.map_from_values(shift, self.from_coords(src, x))
            cols.append(self.to_coords(tgt, nabla(f)))
        return GroupHom.from_columns(src.group, tgt.group, cols)

    def block_interior(self, words: tuple, shift: int) -> bool:
        """Degrees used by the homology at this block avoid the window edge."""
        return all(_interior(self.A, self.B, word_degree(w), shift) for w in words)

    def homology(self, words: tuple, shift: int) -> Homology:
        return homology(self.nabla_hom(words, shift - 1), self.nabla_hom(words, shift))

    def blocks_at(self, shift: int, interior_only: bool = True) -> list[tuple]:
        out = []
        for b in self.blocks:
            if not any(0 <= word_degree(w) + shift <= self.B.max_degree for w in b):
                continue
            if interior_only and not self.block_interior(b, shift):
                continue
            out.append(b)
        return out

    def solve(self, z: MultiMap, pins: Mapping[Word, Elem] | None = None,
              blocks: Iterable[tuple] | None = None) -> tuple[MultiMap, list]:
        """Canonical b with nabla(b) = z blockwise; raises NotACoboundary.

        ``pins`` fixes b on chosen source tuples; pinned values are checked,
        not trusted.
        """
        shift = z.shift - 1
        values: dict[Word, Elem] = {}
        skipped = []
        if blocks is None:
            # blocks where either b or z can be nonzero
            blocks = [b for b in self.blocks
                      if b in self.blocks_at(shift, False) or b in self.blocks_at(z.shift, False)]
        for blk_words in blocks:
            if not self.block_interior(blk_words, shift):
                skipped.append(blk_words)
                continue
            tgt = self.hom_block(blk_words, z.shift)
            if not tgt.gens and not any(z(w) for w in blk_words):
                continue
            nab = self.nabla_hom(blk_words, shift)
            zc = self.to_coords(tgt, z)
            x = solve(nab, zc)
            if x is None:
                raise NotACoboundary(blk_words, z)
            values.update(self.from_coords(self.hom_block(blk_words, shift), x))
        if pins:
            for w, v in pins.items():
                values[w] = self.tgt.normalize(v)
        b = self.map_from_values(shift, {w: v for w, v in values.items() if v}, name="b")
        if pins:
            bad = [w for w in pins if nabla_interior(b, word_degree(w))
                   and self.tgt.normalize(add_elems(nabla(b)(w), z(w), coeffs=[1, -1]))]
            if bad:
                raise ValueError(f"pinned values do not solve nabla b = z at {bad}")
        return b, skipped


class NotACoboundary(ValueError):
    def __init__(self, words, z):
        super().__init__(f"{z.name} is not a coboundary on block {words}")
        self.words = words


def preimage_class(g: MultiMap, target: MultiMap, blocks: Iterable[tuple] | None = None,
                   ) -> MultiMap:
    """A cocycle u of End(A) with [g~(u)] = [target], blockwise.

    Requires A to have zero differential, so that End(A) is its own
    homology.  Raises ``ClassNotInImage`` when the class is missed.
    """
    A, B = g.A, g.B
    if not A.zero_differential:
        raise ValueError("preimage_class needs a source with zero differential")
    end = HomComplex(A, target.m, A, target.n)
    hom = HomComplex(A, target.m, B, target.n)
    s = target.shift
    values: dict[Word, Elem] = {}
    for words in (blocks if blocks is not None else hom.blocks_at(s)):
        if not hom.block_interior(words, s):
            continue
        tb = hom.hom_block(words, s)
        eb = end.hom_block(words, s)
        if not tb.gens:
            continue
        H = hom.homology(words, s)
        y = hom.to_coords(tb, target)
        if not H.is_cycle(y):
            raise ValueError(f"{target.name} is not a cocycle on {words}")
        cols = []
        for i in range(len(eb.gens)):
            x = [0] * len(eb.gens)
            x[i] = 1
            u = end.map_from_values(s, end.from_coords(eb, x))
            cols.append(H.class_of(hom.to_coords(tb, g_tilde(g, u))))
        induced = GroupHom.from_columns(eb.group, H.group, cols)
        x = solve(induced, H.class_of(y))
        if x is None:
            raise ClassNotInImage(words, target)
        values.update(end.from_coords(eb, x))
    return end.map_from_values(s, {w: v for w, v in values.items() if v}, name="u")


class ClassNotInImage(ValueError):
    def __init__(self, words, target):
        super().__init__(f"class of {target.name} on {words} is not in the image of g~_*")
        self.words = words


@dataclass
class IsoReport:
    m: int
    n: int
    shift: int
    blocks_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def induced_iso_check(g: MultiMap, m: int, n: int, shift: int, free: bool = True) -> IsoReport:
    """Is g~_* : H(End^shift) -> H(U^shift) an isomorphism on interior blocks?"""
    from .abelian import image, kernel, quotient

    A, B = g.A, g.B
    end = HomComplex(A, m, A, n, free=free)
    hom = HomComplex(A, m, B, n, free=free)
    rep = IsoReport(m, n, shift)
    for words in hom.blocks_at(shift):
        if not end.block_interior(words, shift):
            continue
        He = end.homology(words, shift)
        Hu = hom.homology(words, shift)
        eb = end.hom_block(words, shift)
        tb = hom.hom_block(words, shift)
        cols = []
        for c in range(len(He.group)):
            x = He.representative(He.group.unit(c))
            u = end.map_from_values(shift, end.from_coords(eb, x))
            cols.append(Hu.class_of(hom.to_coords(tb, g_tilde(g, u))))
        induced = GroupHom.from_columns(He.group, Hu.group, cols)
        K, _ = kernel(induced)
        _, incl, _ = image(induced)
        coker = quotient(Hu.group, [incl.column(j) for j in range(len(incl.source))]).group
        rep.blocks_checked += 1
        if not K.is_trivial() or not coker.is_trivial():
            rep.failures.append({
                "block": [end.src.label(w) for w in words],
                "source": He.group.describe(),
                "target": Hu.group.describe(),
                "kernel": K.describe(),
                "cokernel": coker.describe(),
            })
    return rep
