"""Transfer of A-infinity (bi)algebra structure along a cocycle-selecting map.

Conventions.  Operations on H are keyed ``ops[(n, m)]`` (n outputs, m
inputs); homotopies into the target are keyed ``maps[(m, n)]`` (m inputs, n
outputs), so ``maps[(2, 1)]`` is g_2 and ``maps[(1, 2)]`` its coproduct dual.
An operation with m inputs and n outputs has degree 3 - m - n and a homotopy
has degree 2 - m - n.

Operadic signs: with m_k the k-ary operation,

    nabla(m_k) = sum_{r+s+t=k, 2<=s<k} (-1)^(r+st) m_{r+1+t}(1^r (x) m_s (x) 1^t),

which for k = 3 reads nabla(m_3) = mu(mu (x) 1) - mu(1 (x) mu).  A morphism
g_1, g_2, ... into a strict DGA satisfies nabla(g_k) = Phi_k - g m_k with

    Phi_k = sum_{i+j=k} (-1)^(i-1) mu_B(g_i (x) g_j)
            - sum (-1)^(r+st) g_{r+1+t}(1^r (x) m_s (x) 1^t).

For k = 2 this is nabla(g_2) = mu_B(g (x) g) - g mu_H.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from math import gcd
from typing import Callable, Mapping, Sequence

from .abelian import FpGroup, GroupHom, hom_group, kernel, quotient
from .graded import (Complex, HomComplex, MultiMap, add_elems, chain_map, format_elem, g_tilde, identity_map,
                     nabla, nabla_interior, preimage_class, sigma, tensor, word_degree, zero_map)


def element_order(G: FpGroup, x: Sequence[int]) -> int:
    o = 1
    for xi, oi in zip(G.reduce(x), G.orders):
        if not xi:
            continue
        if oi == 0:
            return 0
        k = oi // gcd(oi, xi)
        o = o * k // gcd(o, k)
    return o


@dataclass
class Choice:
    step: str
    argument: str
    value: str
    source: str  # "pin" or "canonical"
    degree: int = 0

    def as_dict(self) -> dict:
        return {"step": self.step, "argument": self.argument, "value": self.value, "source": self.source}


@dataclass
class TransferState:
    target: Complex
    H: Complex
    g: MultiMap
    mu_B: MultiMap | None = None
    delta_B: MultiMap | None = None
    ops: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    choices: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    format_target: Callable | None = None

    @property
    def characteristic(self) -> int:
        orders = {o for G in self.target.groups for o in G.orders}
        return 2 if orders and orders <= {2} else 0

    def op(self, n: int, m: int) -> MultiMap:
        if (n, m) in self.ops:
            return self.ops[(n, m)]
        return zero_map(self.H, m, self.H, n, 3 - m - n, name=f"w{n},{m}")

    def gmap(self, m: int, n: int = 1) -> MultiMap:
        if (m, n) == (1, 1):
            return self.g
        if (m, n) in self.maps:
            return self.maps[(m, n)]
        return zero_map(self.H, m, self.target, n, 2 - m - n, name=f"g{m},{n}")

    def fmt_H(self, elem: Mapping) -> str:
        return format_elem(elem, lambda w: "|".join(self.H.label(x) for x in w))

    def fmt_B(self, elem: Mapping) -> str:
        if self.format_target is not None:
            return self.format_target(elem)
        return format_elem(elem, lambda w: "|".join(self.target.label(x) for x in w))

    def record(self, step: str, f: MultiMap, pins: Mapping | None = None, on_H: bool = False):
        pins = pins or {}
        fmt = self.fmt_H if on_H else self.fmt_B
        for w, v in sorted(f.table().items()):
            self.choices.append(Choice(step, self.fmt_H({w: 1}), fmt(v),
                                       "pin" if w in pins else "canonical", word_degree(w)))


# ---------------------------------------------------------------------------
# cocycle selection


class SelectionError(ValueError):
    pass


def select_g(C: Complex, pins: Mapping[int, Sequence[tuple[str, Sequence[int]]]] | None = None,
             name: str = "H") -> tuple[Complex, MultiMap, list]:
    """Homology H of C with zero differential and a cocycle-selecting g: H -> C.

    ``pins`` maps a degree to (name, cocycle vector) pairs; the pinned classes
    must form a basis of that homology group.  Other degrees use the
    canonical homology generators and their canonical representatives.  The
    top degree of a truncated complex is not interior, so H stops one below.
    """
    pins = pins or {}
    groups, images, notes = [], {}, []
    top = C.max_degree if C.zero_differential else C.max_degree - 1
    if top < C.max_degree:
        notes.append(f"homology at degree {C.max_degree} not computed (window edge)")
    for k in range(top + 1):
        hk = C.homology_at(k)
        if k in pins:
            names, reps, orders = [], [], []
            for label, vec in pins[k]:
                vec = C.group(k).reduce(vec)
                if not hk.is_cycle(vec):
                    raise SelectionError(f"pin {label} is not a cocycle")
                cls = hk.class_of(vec)
                names.append(label)
                reps.append(vec)
                orders.append(element_order(hk.group, cls))
            # complete the pinned classes by lifts of generators of the quotient
            rest = quotient(hk.group, [hk.class_of(v) for v in reps])
            for j in range(len(rest.group)):
                cls = rest.section(rest.group.unit(j))
                names.append(f"h{k}_{len(names)}")
                reps.append(C.group(k).reduce(hk.representative(cls)))
                orders.append(rest.group.orders[j])
            Gk = FpGroup(tuple(orders), tuple(names))
            h = GroupHom.from_columns(Gk, hk.group, [hk.class_of(v) for v in reps])
            K, _ = kernel(h)
            coker = quotient(hk.group, [h.column(j) for j in range(len(Gk))]).group
            if not h.is_well_defined() or not K.is_trivial() or not coker.is_trivial():
                raise SelectionError(f"pinned classes in degree {k} do not extend to a basis of {hk.group.describe()}")
            groups.append(Gk)
            for i, v in enumerate(reps):
                images[(k, i)] = C.from_vector(v, k)
        else:
            G = hk.group
            labels = tuple(f"h{k}" if len(G) == 1 else f"h{k}_{i}" for i in range(len(G)))
            groups.append(FpGroup(G.orders, labels))
            for i in range(len(G)):
                images[(k, i)] = C.from_vector(hk.representative(G.unit(i)), k)
    H = Complex.with_zero_differential(groups, name)
    g = chain_map(H, C, images, name="g")
    return H, g, notes


# ---------------------------------------------------------------------------
# the negative result


@dataclass
class InverseSearch:
    degree: int
    element: str
    maps_searched: int
    solutions: list
    bounded: bool = False

    @property
    def has_inverse(self) -> bool:
        return bool(self.solutions)

    def as_dict(self) -> dict:
        return {"degree": self.degree, "element": self.element, "maps_searched": self.maps_searched,
                "solutions": len(self.solutions), "bounded": self.bounded,
                "right_homotopy_inverse": self.has_inverse}


def _hom_elements(G: FpGroup, H: FpGroup, bound: int):
    hg = hom_group(G, H)
    bounded = not hg.group.is_finite
    ranges = [range(o) if o else range(-bound, bound + 1) for o in hg.group.orders]
    return [hg.hom(x) for x in iproduct(*ranges)], bounded


def no_homotopy_inverse_check(g: MultiMap, degree: int, vector: Sequence[int], bound: int = 2,
                              label: str | None = None) -> InverseSearch:
    """Search all f: C_k -> H_k and s: C_{k+1} -> C_k, C_k -> C_{k-1} for
    (1 - g f)(x) = s(dx) + d(s x) at the element x of degree k.

    Every degree-0 group map f is searched, chain map or not, so an empty
    result rules out any right homotopy inverse.  Infinite Hom groups are
    searched with coordinates in [-bound, bound] and the result is flagged.
    """
    H, C = g.A, g.B
    k = degree
    x = C.group(k).reduce(vector)
    gk = GroupHom.from_columns(H.group(k), C.group(k),
                               [C.to_vector({t[0]: c for t, c in g(((k, i),)).items()}, k)
                                for i in range(len(H.group(k)))])
    fs, b1 = _hom_elements(C.group(k), H.group(k), bound)
    s_up, b2 = _hom_elements(C.group(k + 1), C.group(k), bound)
    s_down, b3 = _hom_elements(C.group(k), C.group(k - 1), bound)
    dx = C.diffs[k](x) if k < C.max_degree else ()
    d_prev = C.diffs[k - 1] if k >= 1 else GroupHom.zero(FpGroup(()), C.group(k))
    sols = []
    count = 0
    for f in fs:
        lhs = C.group(k).add(x, C.group(k).neg(gk(f(x))))
        for s1 in s_up:
            a = s1(dx) if k < C.max_degree else C.group(k).zero()
            for s0 in s_down:
                count += 1
                rhs = C.group(k).add(a, d_prev(s0(x)))
                if rhs == lhs:
                    sols.append((f.matrix, s1.matrix, s0.matrix))
    return InverseSearch(k, label or str(x), count, sols, b1 or b2 or b3)


# ---------------------------------------------------------------------------
# fraction products


def _insert(H: Complex, inner: MultiMap, r: int, t: int) -> MultiMap:
    parts = []
    if r:
        parts.append(identity_map(H, r))
    parts.append(inner)
    if t:
        parts.append(identity_map(H, t))
    return parts[0] if len(parts) == 1 else tensor(*parts)


def _sum(maps: list, signs: list, empty: MultiMap) -> MultiMap:
    acc = empty
    for f, s in zip(maps, signs):
        acc = acc + (f if s > 0 else -f)
    return acc


def stasheff_sum(state: TransferState, k: int, ops: Mapping | None = None, C: Complex | None = None) -> MultiMap:
    """sum (-1)^(r+st) m_{r+1+t}(1^r (x) m_s (x) 1^t) over 2 <= s < k."""
    H = C or state.H
    get = (lambda j: ops[j]) if ops is not None else (lambda j: state.op(1, j))
    terms, signs = [], []
    for s in range(2, k):
        for r in range(k - s + 1):
            t = k - s - r
            outer = get(r + 1 + t)
            terms.append(outer @ _insert(H, get(s), r, t))
            signs.append(-1 if (r + s * t) % 2 else 1)
    return _sum(terms, signs, zero_map(H, k, H, 1, 3 - k, name=f"z{k}"))


def morphism_phi(state: TransferState, k: int) -> MultiMap:
    """Phi_k: the boundary terms of nabla(g_k) other than g m_k."""
    H, B = state.H, state.target
    terms, signs = [], []
    for i in range(1, k):
        terms.append(state.mu_B @ tensor(state.gmap(i), state.gmap(k - i)))
        signs.append(-1 if (i - 1) % 2 else 1)
    for s in range(2, k):
        for r in range(k - s + 1):
            t = k - s - r
            terms.append(state.gmap(r + 1 + t) @ _insert(H, state.op(1, s), r, t))
            signs.append(1 if (r + s * t) % 2 else -1)
    phi = _sum(terms, signs, zero_map(H, k, B, 1, 2 - k))
    phi.name = f"Phi{k}"
    return phi


# ---------------------------------------------------------------------------
# steps


def induce_binary(state: TransferState) -> None:
    """mu_H from [mu_B (g (x) g)] and, dually, Delta_H from [(Delta_B) g]."""
    g = state.g
    if state.mu_B is not None:
        target = state.mu_B @ tensor(g, g)
        mu = preimage_class(g, target)
        mu.name = "mu_H"
        state.ops[(1, 2)] = _freeze(mu)
        state.record("mu_H", state.ops[(1, 2)], on_H=True)
    if state.delta_B is not None:
        target = state.delta_B @ g
        delta = preimage_class(g, target)
        delta.name = "Delta_H"
        state.ops[(2, 1)] = _freeze(delta)
        state.record("Delta_H", state.ops[(2, 1)], on_H=True)


def _freeze(f: MultiMap, name: str | None = None) -> MultiMap:
    out = MultiMap(f.A, f.m, f.B, f.n, f.shift, table=f.table(), name=name or f.name)
    return out


def solve_homotopy(state: TransferState, z: MultiMap, pins: Mapping | None = None,
                   blocks=None) -> MultiMap:
    """Canonical b with nabla(b) = z; pins override single arguments."""
    hc = HomComplex(z.A, z.m, z.B, z.n)
    b, skipped = hc.solve(z, pins=pins, blocks=blocks)
    for words in skipped:
        state.notes.append(f"{z.name}: block {[hc.src.label(w) for w in words]} skipped at the window edge")
    return _freeze(b, name="b")


def binary_homotopies(state: TransferState, pins_g2: Mapping | None = None,
                      pins_g12: Mapping | None = None) -> None:
    g = state.g
    if state.mu_B is not None:
        z = state.mu_B @ tensor(g, g) - g @ state.op(1, 2)
        z.name = "z2"
        g2 = solve_homotopy(state, z, pins_g2)
        g2.name = "g2"
        state.maps[(2, 1)] = g2
        state.record("g2", g2, pins_g2)
    if state.delta_B is not None:
        z = state.delta_B @ g - tensor(g, g) @ state.op(2, 1)
        z.name = "z12"
        g12 = solve_homotopy(state, z, pins_g12)
        g12.name = "g1^2"
        state.maps[(1, 2)] = g12
        state.record("g1^2", g12, pins_g12)


@dataclass
class StepResult:
    arity: int
    z_is_zero: bool
    correction_is_zero: bool
    b_pinned: bool
    omega: MultiMap
    correction: MultiMap
    phi: MultiMap


def operadic_step(state: TransferState, m: int, pins_b: Mapping | None = None,
                  pins_g: Mapping | None = None) -> StepResult:
    """omega^{1,m} and g_m from the lower operations and homotopies."""
    H, g = state.H, state.g
    z = stasheff_sum(state, m)
    z_zero = z.is_zero(range(H.max_degree + 1))
    b = solve_homotopy(state, z, pins_b)
    phi = morphism_phi(state, m)
    target = g_tilde(g, b) - phi
    target.name = f"g~(b)-Phi{m}"
    u = preimage_class(g, target)
    omega = _freeze(b - u, name=f"m{m}")
    state.ops[(1, m)] = omega
    state.record(f"m{m}", omega, on_H=True)
    rhs = phi - g_tilde(g, omega)
    rhs.name = f"Phi{m}-g m{m}"
    gm = solve_homotopy(state, rhs, pins_g)
    gm.name = f"g{m}"
    state.maps[(m, 1)] = gm
    state.record(f"g{m}", gm, pins_g)
    corr = _freeze(u, name="correction")
    return StepResult(m, z_zero, not corr.table(), bool(pins_b), omega, corr, phi)


def _positive_blocks(hc: HomComplex, shift: int) -> list:
    return [b for b in hc.blocks_at(shift) if all(x[0] > 0 for w in b for x in w)]


@dataclass
class Omega22Result:
    omega: MultiMap
    g22: MultiMap
    phi: MultiMap
    z: MultiMap
    z_is_zero: bool
    residual_class_zero: bool


def omega22_step(state: TransferState, pins_g22: Mapping | None = None) -> Omega22Result:
    """The 2-in/2-out operation on a bialgebra target over Z2.

    Evaluated on arguments whose factors all have positive degree.
    """
    if state.characteristic != 2:
        raise NotImplementedError("the (2,2) step is implemented over Z2 only")
    if state.mu_B is None or state.delta_B is None:
        raise ValueError("the (2,2) step needs both a product and a coproduct on the target")
    H, B, g = state.H, state.target, state.g
    mu, delta = state.mu_B, state.delta_B
    muH, dH = state.op(1, 2), state.op(2, 1)
    g21, g12 = state.gmap(2, 1), state.gmap(1, 2)

    z = tensor(muH, muH) @ sigma(H, 2, 2) @ tensor(dH, dH) + dH @ muH
    z.name = "z22"
    T1 = tensor(mu, mu) @ sigma(B, 2, 2) @ (tensor(delta @ g, g12) + tensor(g12, tensor(g, g) @ dH))
    T2 = (tensor(mu @ tensor(g, g), g21) + tensor(g21, g @ muH)) @ sigma(H, 2, 2) @ tensor(dH, dH)
    phi = T1 + T2 + delta @ g21 + g12 @ muH
    phi.name = "phi22"

    end = HomComplex(H, 2, H, 2)
    hom = HomComplex(H, 2, B, 2)
    blocks_z = _positive_blocks(end, z.shift)
    z_zero = all(not z(w) for blk in blocks_z for w in blk)
    b = solve_homotopy(state, _restrict(z, blocks_z), blocks=_positive_blocks(end, z.shift - 1))
    target = g_tilde(g, b) - phi
    u = preimage_class(g, target, blocks=_positive_blocks(hom, phi.shift))
    omega = _freeze(b - u, name="w22")
    state.ops[(2, 2)] = omega
    state.record("w22", omega, on_H=True)
    rhs = phi + g_tilde(g, omega)
    rhs.name = "phi22+(gxg)w22"
    g22 = solve_homotopy(state, rhs, pins_g22, blocks=_positive_blocks(hom, rhs.shift - 1))
    g22.name = "g2^2"
    state.maps[(2, 2)] = g22
    state.record("g2^2", g22, pins_g22)
    res_ok = not _residual(nabla(g22), rhs, _positive_blocks(hom, rhs.shift - 1))
    return Omega22Result(omega, g22, phi, z, z_zero, res_ok)


def _restrict(f: MultiMap, blocks) -> MultiMap:
    allowed = {w for b in blocks for w in b}
    out = MultiMap(f.A, f.m, f.B, f.n, f.shift, lambda w: f(w) if w in allowed else {}, f.name)
    return out


def _residual(lhs: MultiMap, rhs: MultiMap, blocks) -> dict:
    out = {}
    for blk in blocks:
        for w in blk:
            if not nabla_interior(lhs if lhs.shift == rhs.shift else rhs, word_degree(w)):
                continue
            diff = lhs.tgt.normalize(add_elems(lhs(w), rhs(w), coeffs=[1, -1]))
            if diff:
                out[w] = diff
    return out


# ---------------------------------------------------------------------------
# verification


@dataclass
class CheckReport:
    name: str
    checked: int = 0
    residuals: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.residuals

    def as_dict(self) -> dict:
        return {"name": self.name, "checked": self.checked, "ok": self.ok,
                "residuals": [list(r) for r in self.residuals]}


def a_infinity_check(state: TransferState, max_arity: int = 5) -> list[CheckReport]:
    """nabla(m_k) = stasheff_sum(k) on every interior input degree."""
    H = state.H
    reports = []
    for k in range(2, max_arity + 1):
        rep = CheckReport(f"stasheff {k}")
        lhs = nabla(state.op(1, k))
        rhs = stasheff_sum(state, k)
        for deg in range(H.max_degree + 1):
            if not nabla_interior(state.op(1, k), deg):
                continue
            for w in lhs.src.basis(deg):
                rep.checked += 1
                diff = lhs.tgt.normalize(add_elems(lhs(w), rhs(w), coeffs=[1, -1]))
                if diff:
                    rep.residuals.append((state.fmt_H({w: 1}), state.fmt_H(diff)))
        reports.append(rep)
    return reports


def _check_equation(name: str, lhs_map: MultiMap, rhs: MultiMap, state: TransferState,
                    positive_only: bool = False) -> CheckReport:
    rep = CheckReport(name)
    lhs = nabla(lhs_map)
    for deg in range(state.H.max_degree + 1):
        if not nabla_interior(lhs_map, deg):
            continue
        for w in lhs.src.basis(deg):
            if positive_only and any(x[0] == 0 for x in w):
                continue
            rep.checked += 1
            diff = lhs.tgt.normalize(add_elems(lhs(w), rhs(w), coeffs=[1, -1]))
            if diff:
                rep.residuals.append((state.fmt_H({w: 1}), state.fmt_B(diff)))
    return rep


def morphism_check(state: TransferState, phi22: MultiMap | None = None) -> list[CheckReport]:
    """Each stored homotopy satisfies its defining nabla-equation."""
    g = state.g
    out = [_check_equation("g is a chain map", g, zero_map(g.A, 1, g.B, 1, 1), state)]
    for (m, n) in sorted(state.maps):
        if n == 1:
            rhs = morphism_phi(state, m) - g_tilde(g, state.op(1, m))
            out.append(_check_equation(f"nabla g{m}", state.maps[(m, n)], rhs, state))
        elif (m, n) == (1, 2):
            rhs = state.delta_B @ g - tensor(g, g) @ state.op(2, 1)
            out.append(_check_equation("nabla g1^2", state.maps[(m, n)], rhs, state))
        elif (m, n) == (2, 2) and phi22 is not None:
            rhs = phi22 + g_tilde(g, state.op(2, 2))
            out.append(_check_equation("nabla g2^2", state.maps[(m, n)], rhs, state, positive_only=True))
    return out
