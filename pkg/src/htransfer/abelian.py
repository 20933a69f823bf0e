"""Exact linear algebra over Z and over finitely generated abelian groups.

Groups are presented by cyclic orders: ``FpGroup((2, 4, 0))`` is
Z/2 + Z/4 + Z.  Elements are integer tuples reduced modulo the orders
(an order of 0 means no reduction).  Homomorphisms carry an integer matrix
whose columns are the images of the source generators.

Everything here works on Python ints, so there is no overflow; the price is
speed, which is acceptable for groups of a few hundred generators.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import gcd
from typing import Callable, Iterable, Iterator, Sequence

IntMatrix = list  # list of rows, each a list of ints


def zeros(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> IntMatrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def matmul(a: IntMatrix, b: IntMatrix, inner: int | None = None, cols: int | None = None) -> IntMatrix:
    if inner is None:
        inner = len(b)
    if cols is None:
        cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        orow = out[i]
        for k in range(inner):
            aik = row[k]
            if aik:
                brow = b[k]
                for j in range(cols):
                    if brow[j]:
                        orow[j] += aik * brow[j]
    return out


def determinant(m: IntMatrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = s*a + t*b = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U * A * V == S`` with U, V unimodular and S diagonal, d1 | d2 | ..."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    Vinv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i][i] for i in range(min(len(self.S), len(self.V)))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith(a: IntMatrix, ncols: int | None = None) -> SmithDecomposition:
    """Smith normal form with both transforms (and the inverse of V)."""
    m = len(a)
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    s = [list(r) for r in a]
    u = identity(m)
    v = identity(n)
    vinv = identity(n)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q:
            sd, ss = s[dst], s[src]
            for k in range(n):
                if ss[k]:
                    sd[k] += q * ss[k]
            ud, us = u[dst], u[src]
            for k in range(m):
                if us[k]:
                    ud[k] += q * us[k]

    def add_col(dst, src, q):  # col_dst += q * col_src
        if q:
            for row in s:
                if row[src]:
                    row[dst] += q * row[src]
            for row in v:
                if row[src]:
                    row[dst] += q * row[src]
            vs, vd = vinv[src], vinv[dst]
            for k in range(n):
                if vd[k]:
                    vs[k] -= q * vd[k]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = s[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = s[t][t]
            done = True
            for i in range(t + 1, m):
                if s[i][t]:
                    q = s[i][t] // p
                    add_row(i, t, -q)
                    if s[i][t]:
                        done = False
            for j in range(t + 1, n):
                if s[t][j]:
                    q = s[t][j] // p
                    add_col(j, t, -q)
                    if s[t][j]:
                        done = False
            if done:
                # divisibility of the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if s[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move the smallest remaining entry of row/col t to the pivot
            cand = [(abs(s[i][t]), i, t) for i in range(t, m) if s[i][t]]
            cand += [(abs(s[t][j]), t, j) for j in range(t, n) if s[t][j]]
            _, i, j = min(cand)
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
        if s[t][t] < 0:
            for k in range(n):
                s[t][k] = -s[t][k]
            for k in range(m):
                u[t][k] = -u[t][k]
        t += 1
    return SmithDecomposition(u, s, v, vinv)


# ---------------------------------------------------------------------------
# Lattices in Hermite (echelon) form


class Lattice:
    """A subgroup of Z^n kept as an echelon basis with positive pivots.

    ``moduli[i] > 0`` adds ``moduli[i] * e_i`` to the lattice, which also
    lets inserted vectors be reduced coordinatewise.  ``reduce`` returns the
    canonical representative of a coset: pivot coordinates land in
    ``[0, pivot)``, scanning columns left to right.  For a full-rank lattice
    this is the lexicographically smallest nonnegative vector of the coset.
    """

    def __init__(self, n: int, moduli: Sequence[int] | None = None):
        self.n = n
        self.moduli = list(moduli) if moduli is not None else [0] * n
        self.pivots: dict[int, dict[int, int]] = {}
        for i, o in enumerate(self.moduli):
            if o:
                self.pivots[i] = {i: o}

    def copy(self) -> "Lattice":
        other = Lattice.__new__(Lattice)
        other.n = self.n
        other.moduli = self.moduli
        other.pivots = {j: dict(r) for j, r in self.pivots.items()}
        return other

    def _trim(self, v: dict[int, int], keep: int = -1) -> dict[int, int]:
        out = {}
        for k, x in v.items():
            o = self.moduli[k]
            if o and k != keep:
                x %= o
            if x:
                out[k] = x
        return out

    def add(self, vec) -> bool:
        """Insert a vector (dict or sequence); return True if the lattice grew."""
        v = self._trim(_as_sparse(vec))
        grew = False
        while v:
            j = min(v)
            p = self.pivots.get(j)
            if p is None:
                if v[j] < 0:
                    v = {k: -x for k, x in v.items()}
                self.pivots[j] = self._trim(v, keep=j)
                return True
            a, b = p[j], v[j]
            if b % a == 0:
                q = b // a
                v = self._trim(_axpy(v, p, -q))
                continue
            g, s, t = _xgcd(a, b)
            newp = _lincomb(p, s, v, t)
            rest = _lincomb(p, b // g, v, -(a // g))
            self.pivots[j] = self._trim(newp, keep=j)
            grew = True
            v = self._trim(rest)
        return grew

    def extend(self, vecs: Iterable) -> None:
        for v in vecs:
            self.add(v)

    def reduce(self, vec) -> dict[int, int]:
        v = self._trim(_as_sparse(vec))
        col = -1
        while True:
            later = [k for k in v if k > col]
            if not later:
                return v
            col = min(later)
            p = self.pivots.get(col)
            if p is None:
                continue
            q = v[col] // p[col]
            if q:
                v = self._trim(_axpy(v, p, -q))

    def contains(self, vec) -> bool:
        return not self.reduce(vec)

    def basis(self) -> list[dict[int, int]]:
        return [self.pivots[j] for j in sorted(self.pivots)]

    def rank(self) -> int:
        return len(self.pivots)

    def coords(self, vec) -> list[int] | None:
        """Coefficients of vec in ``basis()``, or None if vec is not in the lattice."""
        v = dict(_as_sparse(vec))
        out = []
        for j in sorted(self.pivots):
            p = self.pivots[j]
            x = v.get(j, 0)
            if x % p[j]:
                return None
            q = x // p[j]
            out.append(q)
            if q:
                v = _axpy(v, p, -q)
        if any(v.values()):
            return None
        return out


def _as_sparse(vec) -> dict[int, int]:
    if isinstance(vec, dict):
        return {k: x for k, x in vec.items() if x}
    return {k: x for k, x in enumerate(vec) if x}


def _axpy(v: dict, p: dict, q: int) -> dict:
    out = dict(v)
    for k, x in p.items():
        y = out.get(k, 0) + q * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def _lincomb(p: dict, s: int, v: dict, t: int) -> dict:
    out: dict[int, int] = {}
    for k, x in p.items():
        out[k] = s * x
    for k, x in v.items():
        out[k] = out.get(k, 0) + t * x
    return {k: x for k, x in out.items() if x}


def dense(vec: dict[int, int], n: int) -> tuple[int, ...]:
    out = [0] * n
    for k, x in vec.items():
        out[k] = x
    return tuple(out)


# ---------------------------------------------------------------------------
# Groups and homomorphisms


@dataclass(frozen=True)
class FpGroup:
    """Direct sum of cyclic groups Z/orders[i] (0 = infinite cyclic)."""

    orders: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(o) for o in self.orders))
        if any(o < 0 for o in self.orders):
            raise ValueError(f"negative order in {self.orders}")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != len(self.orders):
                raise ValueError("one label per generator")

    def __len__(self) -> int:
        return len(self.orders)

    def __str__(self) -> str:
        if not self.orders:
            return "0"
        return " + ".join("Z" if o == 0 else f"Z{o}" for o in self.orders)

    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.orders)

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != len(self.orders):
            raise ValueError(f"element {tuple(x)} has wrong length for {self}")
        return tuple(a % o if o else a for a, o in zip(x, self.orders))

    def unit(self, i: int) -> tuple[int, ...]:
        x = [0] * len(self.orders)
        x[i] = 1
        return self.reduce(x)

    def add(self, x, y) -> tuple[int, ...]:
        return self.reduce([a + b for a, b in zip(x, y)])

    def neg(self, x) -> tuple[int, ...]:
        return self.reduce([-a for a in x])

    def is_trivial(self) -> bool:
        return all(o == 1 for o in self.orders)

    @property
    def is_finite(self) -> bool:
        return 0 not in self.orders

    @property
    def size(self) -> int | None:
        if not self.is_finite:
            return None
        n = 1
        for o in self.orders:
            n *= o
        return n

    def elements(self) -> Iterator[tuple[int, ...]]:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return product(*(range(o) for o in self.orders))

    @cached_property
    def invariants(self) -> tuple[int, ...]:
        """Invariant factors d1 | d2 | ... (each > 1), followed by zeros."""
        n = len(self.orders)
        snf = smith([[self.orders[i] if i == j else 0 for j in range(n)] for i in range(n)], n)
        diag = snf.diagonal
        torsion = sorted(d for d in diag if d > 1)
        return tuple(torsion) + (0,) * sum(1 for d in diag if d == 0)

    def isomorphic(self, other: "FpGroup") -> bool:
        return self.invariants == other.invariants

    def describe(self) -> str:
        inv = self.invariants
        if not inv:
            return "0"
        return " + ".join("Z" if o == 0 else f"Z{o}" for o in inv)


def cyclic(*orders: int) -> FpGroup:
    return FpGroup(tuple(orders))


@dataclass(frozen=True, eq=False)
class GroupHom:
    """Homomorphism given by a len(target) x len(source) integer matrix."""

    source: FpGroup
    target: FpGroup
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.matrix)
        if len(rows) != len(self.target) or any(len(r) != len(self.source) for r in rows):
            raise ValueError(
                f"matrix shape does not match {len(self.target)}x{len(self.source)}"
            )
        # canonical entries: reduce modulo target orders
        rows = tuple(
            tuple(x % o if o else x for x in r) for r, o in zip(rows, self.target.orders)
        )
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def from_columns(cls, source, target, columns) -> "GroupHom":
        cols = [tuple(c) for c in columns]
        rows = [[cols[j][i] for j in range(len(source))] for i in range(len(target))]
        return cls(source, target, rows)

    @classmethod
    def zero(cls, source, target) -> "GroupHom":
        return cls(source, target, zeros(len(target), len(source)))

    @classmethod
    def identity(cls, group) -> "GroupHom":
        return cls(group, group, identity(len(group)))

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != len(self.source):
            raise ValueError("element length does not match source")
        out = [sum(r[j] * x[j] for j in range(len(x)) if x[j]) for r in self.matrix]
        return self.target.reduce(out)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.matrix)

    def __eq__(self, other):
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def compose(self, first: "GroupHom") -> "GroupHom":
        """self o first."""
        if first.target.orders != self.source.orders:
            raise ValueError("cannot compose: group mismatch")
        m = matmul([list(r) for r in self.matrix], [list(r) for r in first.matrix],
                   len(self.source), len(first.source))
        return GroupHom(first.source, self.target, m)

    def __add__(self, other: "GroupHom") -> "GroupHom":
        rows = [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)]
        return GroupHom(self.source, self.target, rows)

    def scale(self, k: int) -> "GroupHom":
        return GroupHom(self.source, self.target, [[k * a for a in r] for r in self.matrix])

    def is_zero(self) -> bool:
        return all(not x for r in self.matrix for x in r)

    def is_well_defined(self) -> bool:
        for j, o in enumerate(self.source.orders):
            if o and any(self.target.reduce([o * c for c in self.column(j)])):
                return False
        return True

    @cached_property
    def _lift(self) -> Lattice:
        # columns: target coordinates first, then source coordinates
        t, s = len(self.target), len(self.source)
        lat = Lattice(t + s, list(self.target.orders) + list(self.source.orders))
        for j in range(s):
            v = {i: r[j] for i, r in enumerate(self.matrix) if r[j]}
            v[t + j] = 1
            lat.add(v)
        return lat

    def kernel_lattice(self) -> Lattice:
        t, s = len(self.target), len(self.source)
        lat = Lattice(s, self.source.orders)
        for j, row in self._lift.pivots.items():
            if j >= t:
                lat.add({k - t: x for k, x in row.items()})
        return lat

    def image_lattice(self) -> Lattice:
        t = len(self.target)
        lat = Lattice(t, self.target.orders)
        for j, row in self._lift.pivots.items():
            if j < t:
                lat.add({k: x for k, x in row.items() if k < t})
        return lat


# ---------------------------------------------------------------------------
# Subquotients


@dataclass(frozen=True, eq=False)
class Subquotient:
    """L / N for lattices N <= L <= Z^n, presented as a cyclic decomposition.

    ``generators[i]`` is a vector in Z^n whose class generates the i-th
    cyclic summand of order ``group.orders[i]``.
    """

    group: FpGroup
    generators: tuple[tuple[int, ...], ...]
    ambient: int
    _L: Lattice = field(repr=False)
    _N: Lattice = field(repr=False)
    _V: IntMatrix = field(repr=False)
    _keep: tuple[int, ...] = field(repr=False)

    def class_of(self, vec) -> tuple[int, ...]:
        c = self._L.coords(vec)
        if c is None:
            raise ValueError("vector does not lie in the numerator lattice")
        out = []
        for k in self._keep:
            out.append(sum(c[i] * self._V[i][k] for i in range(len(c)) if c[i]))
        return self.group.reduce(out)

    def representative(self, cls: Sequence[int]) -> tuple[int, ...]:
        vec: dict[int, int] = {}
        for a, g in zip(cls, self.generators):
            if a:
                for k, x in enumerate(g):
                    if x:
                        vec[k] = vec.get(k, 0) + a * x
        return dense(self._N.reduce(vec), self.ambient)

    def contains(self, vec) -> bool:
        return self._L.coords(vec) is not None


def subquotient(L: Lattice, N: Lattice, labels: Sequence[str] | None = None) -> Subquotient:
    n = L.n
    basis = L.basis()
    C = []
    for row in N.basis():
        c = L.coords(row)
        if c is None:
            raise ValueError("denominator is not contained in numerator")
        C.append(c)
    r = len(basis)
    if not C:
        C = []
    snf = smith(C, r)
    diag = snf.diagonal + [0] * (r - len(snf.diagonal))
    keep, orders = [], []
    for i in range(r):
        d = diag[i] if i < len(diag) else 0
        if d != 1:
            keep.append(i)
            orders.append(d)
    gens = []
    for i in keep:
        vec: dict[int, int] = {}
        for k in range(r):
            q = snf.Vinv[i][k]
            if q:
                for col, x in basis[k].items():
                    vec[col] = vec.get(col, 0) + q * x
        gens.append(dense(N.reduce(vec), n))
    group = FpGroup(tuple(orders), tuple(labels) if labels is not None else None)
    return Subquotient(group, tuple(gens), n, L, N, snf.V, tuple(keep))


def full_lattice(n: int) -> Lattice:
    lat = Lattice(n)
    for i in range(n):
        lat.add({i: 1})
    return lat


# ---------------------------------------------------------------------------
# Operations


def solve(h: GroupHom, y: Sequence[int]) -> tuple[int, ...] | None:
    """Canonical x with h(x) = y, or None when no solution exists."""
    y = h.target.reduce(y)
    t = len(h.target)
    # v - sum c_j (h(e_j), e_j) = (0, -c) exactly when h(c) = y
    v = {i: a for i, a in enumerate(y) if a}
    r = h._lift.reduce(v)
    if any(k < t for k in r):
        return None
    x = [0] * len(h.source)
    for k, a in r.items():
        x[k - t] = -a
    x = h.source.reduce(x)
    # canonical representative of the coset x + ker(h)
    return h.source.reduce(dense(h.kernel_lattice().reduce(x), len(h.source)))


def kernel(h: GroupHom) -> tuple[FpGroup, GroupHom]:
    src = h.source
    sq = subquotient(h.kernel_lattice(), Lattice(len(src), src.orders))
    return sq.group, GroupHom.from_columns(sq.group, src, [src.reduce(g) for g in sq.generators])


def image(h: GroupHom) -> tuple[FpGroup, GroupHom, GroupHom]:
    """Image group, its inclusion into the target, and the surjection onto it."""
    tgt = h.target
    sq = subquotient(h.image_lattice(), Lattice(len(tgt), tgt.orders))
    incl = GroupHom.from_columns(sq.group, tgt, [tgt.reduce(g) for g in sq.generators])
    surj = GroupHom.from_columns(
        h.source, sq.group, [sq.class_of(h.column(j)) for j in range(len(h.source))]
    )
    return sq.group, incl, surj


@dataclass(frozen=True, eq=False)
class Quotient:
    group: FpGroup
    projection: GroupHom
    section: Callable[[Sequence[int]], tuple[int, ...]]
    canonical: Callable[[Sequence[int]], tuple[int, ...]]


def quotient(G: FpGroup, S: Iterable[Sequence[int]]) -> Quotient:
    """G / <S> with projection, a section, and the canonical-representative map."""
    n = len(G)
    N = Lattice(n, G.orders)
    N.extend(S)
    sq = subquotient(full_lattice(n), N)
    proj = GroupHom.from_columns(G, sq.group, [sq.class_of(G.unit(j)) for j in range(n)]) \
        if n else GroupHom.zero(G, sq.group)

    def section(c):
        return G.reduce(sq.representative(c))

    def canonical(x):
        return G.reduce(dense(N.reduce(x), n))

    return Quotient(sq.group, proj, section, canonical)


@dataclass(frozen=True, eq=False)
class HomGroup:
    """Hom(G, H) with a basis of elementary homomorphisms.

    Generator k sends source generator ``pairs[k][0]`` to ``step[k]`` times
    target generator ``pairs[k][1]``, and every other generator to 0.
    """

    group: FpGroup
    source: FpGroup
    target: FpGroup
    pairs: tuple[tuple[int, int], ...]
    step: tuple[int, ...]

    def hom(self, x: Sequence[int]) -> GroupHom:
        m = zeros(len(self.target), len(self.source))
        for a, (i, j), st in zip(x, self.pairs, self.step):
            m[j][i] += a * st
        return GroupHom(self.source, self.target, m)

    def coords(self, f: GroupHom) -> tuple[int, ...]:
        out = []
        for (i, j), st in zip(self.pairs, self.step):
            v = f.matrix[j][i]
            if v % st:
                raise ValueError("not a homomorphism of the presented groups")
            out.append(v // st)
        return self.group.reduce(out)


def hom_group(G: FpGroup, H: FpGroup) -> HomGroup:
    orders, pairs, steps, labels = [], [], [], []
    for i, a in enumerate(G.orders):
        for j, b in enumerate(H.orders):
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
            pairs.append((i, j))
            steps.append(st)
            if G.labels and H.labels:
                labels.append(f"{H.labels[j]}*d[{G.labels[i]}]")
    grp = FpGroup(tuple(orders), tuple(labels) if labels else None)
    return HomGroup(grp, G, H, tuple(pairs), tuple(steps))


@dataclass(frozen=True, eq=False)
class Homology:
    """ker(g) / im(f) with class/representative maps."""

    group: FpGroup
    middle: FpGroup
    _sq: Subquotient = field(repr=False)

    def class_of(self, x: Sequence[int]) -> tuple[int, ...]:
        return self._sq.class_of(self.middle.reduce(x))

    def representative(self, c: Sequence[int]) -> tuple[int, ...]:
        return self.middle.reduce(self._sq.representative(self.group.reduce(c)))

    def is_cycle(self, x: Sequence[int]) -> bool:
        return self._sq.contains(self.middle.reduce(x))

    def is_boundary(self, x: Sequence[int]) -> bool:
        return self._sq._N.contains(self.middle.reduce(x))


def homology(f: GroupHom, g: GroupHom) -> Homology:
    """Homology at the middle group of  X --f--> M --g--> Y."""
    if f.target.orders != g.source.orders:
        raise ValueError("f and g do not meet at a common group")
    if not g.compose(f).is_zero():
        raise ValueError("g o f != 0")
    sq = subquotient(g.kernel_lattice(), f.image_lattice())
    return Homology(sq.group, g.source, sq)
