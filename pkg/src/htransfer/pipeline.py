"""Problem files: loading, validation, and the homology / bar / transfer pipelines.

A problem is one JSON document.  It defines exactly one of ``complex``,
``algebra`` or ``bar``, names a pipeline, and may pin choices.  Running a
problem returns a report dict (stable key order once serialized) and a flag
telling whether every required verification passed.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from .abelian import FpGroup, GroupHom
from .bar import BarConstruction, TruncatedDga
from .graded import Complex, format_elem, induced_iso_check, word_degree
from .tensoralg import AlgebraPresentation, GenSpec, ParseError as AlgParseError, QuotientDGA, format_alg
from .transfer import (TransferState, a_infinity_check, binary_homotopies, induce_binary, morphism_check,
                       no_homotopy_inverse_check, omega22_step, operadic_step, select_g)

PIPELINES = ("homology", "bar", "transfer", "verify")

_int_list = {"type": "array", "items": {"type": "integer", "minimum": 0}}

SCHEMA = {
    "type": "object",
    "required": ["name", "coefficients", "max_degree", "pipeline"],
    "properties": {
        "name": {"type": "string"},
        "coefficients": {"enum": ["Z", "Z2"]},
        "max_degree": {"type": "integer", "minimum": 0, "maximum": 40},
        "pipeline": {"enum": list(PIPELINES)},
        "complex": {
            "type": "object",
            "required": ["groups"],
            "properties": {
                "groups": {"type": "object", "additionalProperties": _int_list},
                "labels": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "string"}}},
                "differentials": {"type": "object", "additionalProperties": {
                    "type": "array", "items": {"type": "array", "items": {"type": "integer"}}}},
            },
            "additionalProperties": False,
        },
        "algebra": {
            "type": "object",
            "required": ["generators"],
            "properties": {
                "generators": {"type": "array", "items": {
                    "type": "object", "required": ["name", "degree"],
                    "properties": {"name": {"type": "string", "pattern": "^[A-Za-z][A-Za-z0-9_]*$"},
                                   "degree": {"type": "integer", "minimum": 1},
                                   "order": {"type": "integer", "minimum": 0},
                                   "d": {"type": "string"}},
                    "additionalProperties": False}},
                "relations": {"type": "array", "items": {"type": "string"}},
                "annihilators": {"type": "array", "items": {
                    "type": "object", "required": ["generator", "side"],
                    "properties": {"generator": {"type": "string"}, "side": {"enum": ["left", "right", "both"]}},
                    "additionalProperties": False}},
                "reduced": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
        "bar": {
            "type": "object",
            "required": ["letters"],
            "properties": {
                "letters": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 1}},
                "products": {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3,
                                                        "items": {"type": "string"}}},
                "cup1": {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3,
                                                    "items": {"type": "string"}}},
                "differential": {"type": "object", "additionalProperties": {"type": "array",
                                                                            "items": {"type": "string"}}},
                "checks_max_degree": {"type": "integer", "minimum": 0},
            },
            "additionalProperties": False,
        },
        "pins": {"type": "object", "additionalProperties": {
            "type": "object", "additionalProperties": {"type": "string"}}},
        "transfer": {
            "type": "object",
            "properties": {
                "max_arity": {"type": "integer", "minimum": 2, "maximum": 5},
                "omega22": {"type": "boolean"},
                "iso_checks": {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3,
                                                          "items": {"type": "integer"}}},
                "iso_findings": {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3,
                                                            "items": {"type": "integer"}}},
                "homotopy_inverse": {"type": "object", "required": ["degree", "element"],
                                     "properties": {"degree": {"type": "integer"}, "element": {"type": "string"}}},
            },
            "additionalProperties": False,
        },
        "report": {
            "type": "object",
            "properties": {"max_degree": {"type": "integer"}, "homology_max_degree": {"type": "integer"}},
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}


class ProblemError(Exception):
    exit_code = 3

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class ProblemParseError(ProblemError):
    exit_code = 2


class ProblemValidationError(ProblemError):
    exit_code = 3


def bundled_problems() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("htransfer.problems").iterdir() if p.name.endswith(".json"))


def load_problem(source: str | Path) -> dict:
    """Read a problem file; a bare bundled name such as ``torsion_dga`` also works."""
    path = Path(source)
    if not path.exists() and str(source) in bundled_problems():
        text = resources.files("htransfer.problems").joinpath(f"{source}.json").read_text()
    else:
        try:
            text = path.read_text()
        except OSError as exc:
            raise ProblemParseError(str(exc), str(source)) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemParseError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from exc
    return doc


def _schema_errors(doc: Any) -> list[tuple[str, str]]:
    validator = jsonschema.Draft7Validator(SCHEMA)
    out = []
    for err in sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path))):
        loc = "/".join(str(p) for p in err.absolute_path) or "<root>"
        out.append((loc, err.message))
    return out


# ---------------------------------------------------------------------------
# building the objects


@dataclass
class Built:
    doc: dict
    kind: str
    max_degree: int
    complex: Complex | None = None
    algebra: QuotientDGA | None = None
    bar: BarConstruction | None = None

    @property
    def full_complex(self) -> Complex:
        """The complex including the unit, for homology tables."""
        if self.algebra is not None:
            return self.algebra.dga_complex()
        return self.complex


def _parse_alg(Q_names, text, where):
    from .tensoralg import parse_element
    try:
        return parse_element(text, Q_names)
    except AlgParseError as exc:
        raise ProblemParseError(str(exc), where) from exc


def build_presentation(spec: Mapping) -> AlgebraPresentation:
    names = [g["name"] for g in spec["generators"]]
    gens = []
    for i, g in enumerate(spec["generators"]):
        d = _parse_alg(names, g.get("d", "0"), f"algebra/generators/{i}/d")
        gens.append(GenSpec(g["name"], g["degree"], g.get("order", 0), d))
    rels = [_parse_alg(names, r, f"algebra/relations/{i}") for i, r in enumerate(spec.get("relations", []))]
    ann = [(a["generator"], a["side"]) for a in spec.get("annihilators", [])]
    try:
        pres = AlgebraPresentation(gens, rels, ann)
    except ValueError as exc:
        raise ProblemValidationError(str(exc), "algebra") from exc
    problems = pres.validate()
    if problems:
        raise ProblemValidationError("; ".join(problems), "algebra")
    return pres


def build_truncated_dga(spec: Mapping) -> TruncatedDga:
    products: dict = {}
    for x, y, z in spec.get("products", []):
        products.setdefault((x, y), set()).symmetric_difference_update({z})
    cup1: dict = {}
    for x, y, z in spec.get("cup1", []):
        cup1.setdefault((x, y), set()).symmetric_difference_update({z})
    return TruncatedDga(dict(spec["letters"]), products, dict(spec.get("differential", {})), cup1)


def build_complex(spec: Mapping, D: int) -> Complex:
    groups = []
    for k in range(D + 1):
        orders = tuple(spec["groups"].get(str(k), []))
        labels = spec.get("labels", {}).get(str(k))
        if labels is not None and len(labels) != len(orders):
            raise ProblemValidationError("label count does not match the group", f"complex/labels/{k}")
        groups.append(FpGroup(orders, tuple(labels) if labels else None))
    for key in list(spec["groups"]) + list(spec.get("differentials", {})):
        if not key.isdigit() or int(key) > D:
            raise ProblemValidationError(f"degree {key} outside the window [0, {D}]", f"complex/{key}")
    diffs = []
    for k in range(D):
        m = spec.get("differentials", {}).get(str(k))
        src, tgt = groups[k], groups[k + 1]
        if m is None:
            diffs.append(GroupHom.zero(src, tgt))
            continue
        if len(m) != len(tgt) or any(len(r) != len(src) for r in m):
            raise ProblemValidationError(f"matrix must be {len(tgt)}x{len(src)}", f"complex/differentials/{k}")
        h = GroupHom(src, tgt, m)
        if not h.is_well_defined():
            raise ProblemValidationError("differential is not order-compatible", f"complex/differentials/{k}")
        diffs.append(h)
    C = Complex(groups, diffs, "C", exact_top=True)
    for k in range(D - 1):
        if not diffs[k + 1].compose(diffs[k]).is_zero():
            raise ProblemValidationError("d^2 != 0", f"complex/differentials/{k}")
    return C


def build(doc: dict, max_degree: int | None = None) -> Built:
    errs = _schema_errors(doc)
    if errs:
        loc, msg = errs[0]
        raise ProblemValidationError(msg, loc)
    kinds = [k for k in ("complex", "algebra", "bar") if k in doc]
    if len(kinds) != 1:
        raise ProblemValidationError("exactly one of complex, algebra, bar is required", "<root>")
    kind = kinds[0]
    D = doc["max_degree"] if max_degree is None else max_degree
    b = Built(doc, kind, D)
    if kind == "complex":
        b.complex = build_complex(doc["complex"], D)
    elif kind == "algebra":
        pres = build_presentation(doc["algebra"])
        Q = QuotientDGA(pres, D)
        rep = Q.check_ideal_closure()
        if not rep.ok:
            k, e, de = rep.violations[0]
            raise ProblemValidationError(f"d({e}) = {de} is not in the ideal", f"algebra (degree {k})")
        for k in range(D):
            bad = Q.check_order_compatible(k)
            if bad:
                raise ProblemValidationError(f"d is not order-compatible on {''.join(bad[0])}", f"algebra (degree {k})")
        b.algebra = Q
        b.complex = Q.dga_complex(reduced=doc["algebra"].get("reduced", False))
    else:
        if doc["coefficients"] != "Z2":
            raise ProblemValidationError("bar constructions are over Z2", "coefficients")
        A = build_truncated_dga(doc["bar"])
        problems = A.validate()
        if problems:
            raise ProblemValidationError(problems[0], "bar")
        b.bar = BarConstruction(A, D)
        b.complex = b.bar.complex
    if doc["coefficients"] == "Z2" and any(o not in (2,) for G in b.complex.groups for o in G.orders):
        raise ProblemValidationError("coefficients Z2 but some group is not a Z2 vector space", "coefficients")
    return b


def validate(doc: dict) -> list[str]:
    """Diagnostics without running a pipeline (empty when valid)."""
    errs = [f"{loc}: {msg}" for loc, msg in _schema_errors(doc)]
    if errs:
        return errs
    try:
        b = build(doc)
    except ProblemParseError:
        raise
    except ProblemError as exc:
        return [str(exc)]
    out = []
    if not b.complex.is_complex():
        out.append("d^2 != 0")
    return out


# ---------------------------------------------------------------------------
# pins


def _split_pin_name(name: str) -> tuple[str, str]:
    return (name.split(".", 1)[0], name.split(".", 1)[1]) if "." in name else (name, "")


def _parse_bar_word(text: str, where: str) -> tuple:
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise ProblemParseError(f"bar word expected, got {text!r}", where)
    inner = t[1:-1].strip()
    return tuple(x.strip() for x in inner.split("|")) if inner else ()


def target_element(built: Built, text: str, n: int, where: str) -> dict:
    """A target value: an algebra expression, or bar words joined by ⊗ for n = 2."""
    text = text.strip()
    if text == "0":
        return {}
    C = built.complex
    if built.kind == "algebra":
        if n != 1:
            raise ProblemValidationError("algebra pins take a single output", where)
        Q = built.algebra
        e = _parse_alg([g.name for g in Q.pres.generators], text, where)
        return {(gen,): c for gen, c in Q.element_to_gens(C, e).items()}
    if built.kind == "bar":
        BA = built.bar
        out: dict = {}
        for term in text.split("+"):
            parts = re.split(r"⊗|\(x\)", term)
            if len(parts) != n:
                raise ProblemValidationError(f"expected {n} tensor factors in {term!r}", where)
            words = [_parse_bar_word(p, where) for p in parts]
            for w in words:
                if w not in BA.index:
                    raise ProblemValidationError(f"{BA.label(w)} is not a bar word in the window", where)
            key = tuple(BA.index[w] for w in words)
            out[key] = (out.get(key, 0) + 1) % 2
        return {k: c for k, c in out.items() if c}
    raise ProblemValidationError("pins need an algebra or bar target", where)


def h_word(H: Complex, text: str, where: str) -> tuple:
    names = {H.label(g): g for g in H.basis()}
    out = []
    for part in text.split("|"):
        part = part.strip()
        if part not in names:
            raise ProblemValidationError(f"unknown homology class {part!r}", where)
        out.append(names[part])
    return tuple(out)


def h_element(H: Complex, text: str, where: str) -> dict:
    text = text.strip()
    if text == "0":
        return {}
    out: dict = {}
    for term in text.split("+"):
        w = h_word(H, term, where)
        out[w] = out.get(w, 0) + 1
    return out


def apply_pin_overrides(doc: dict, overrides: list[str]) -> dict:
    """``slot:argument=value`` strings, e.g. ``g2:beta|beta=[a3|a2]``."""
    doc = json.loads(json.dumps(doc))
    pins = doc.setdefault("pins", {})
    for item in overrides:
        m = re.fullmatch(r"([^:=]+):([^=]+)=(.*)", item)
        if not m:
            raise ProblemParseError(f"pin must look like slot:argument=value, got {item!r}", "--pin")
        slot, arg, value = (s.strip() for s in m.groups())
        pins.setdefault(slot, {})[arg] = value
    return doc


# ---------------------------------------------------------------------------
# reports


def homology_table(C: Complex, upto: int) -> dict:
    out = {}
    for k in range(min(upto, C.max_degree) + 1):
        if not C.is_interior(k):
            continue
        G = C.homology_at(k).group
        out[str(k)] = {"group": G.describe(), "invariants": list(G.invariants)}
    return out


def _table(state: TransferState, f, upto: int, on_H: bool) -> dict:
    fmt = state.fmt_H if on_H else state.fmt_B
    return {state.fmt_H({w: 1}): fmt(v) for w, v in sorted(f.table().items()) if word_degree(w) <= upto}


def _target_formatter(built: Built):
    C = built.complex
    if built.kind == "algebra":
        Q = built.algebra

        def fmt(e):
            if all(len(w) == 1 for w in e):
                return format_alg(Q.gens_to_element(C, {w[0]: c for w, c in e.items()}))
            return format_elem(e, lambda w: "⊗".join(format_alg(Q.gens_to_element(C, {x: 1})) for x in w))
        return fmt
    if built.kind == "bar":
        BA = built.bar
        return lambda e: format_elem(e, lambda w: "⊗".join(BA.label(BA.word_of(x)) for x in w))
    return None


def run_homology(built: Built, report: dict) -> bool:
    C = built.full_complex
    upto = built.doc.get("report", {}).get("homology_max_degree", built.max_degree)
    report["homology"] = homology_table(C, upto)
    report["checks"] = {"d^2 = 0": {"ok": C.is_complex(), "residuals": []}}
    if upto >= C.max_degree and not C.is_interior(C.max_degree):
        report["truncation"]["notes"].append(f"degree {C.max_degree} is at the window edge and not reported")
    return C.is_complex()


def run_bar_checks(built: Built, report: dict) -> bool:
    spec = built.doc["bar"]
    D = spec.get("checks_max_degree", built.max_degree)
    BA = BarConstruction(built.bar.A, D)
    checks = {
        "d^2 = 0": BA.check_d_squared(),
        "Delta coassociative": BA.check_coassociative(),
        "Delta counital": BA.check_counit(),
        "Delta chain map": BA.check_delta_chain(),
        "mu unital": BA.check_unit(),
        "mu chain map": BA.check_mu_chain(),
        "Hopf compatibility": BA.check_hopf(),
        "mu associative": BA.check_associative(),
    }
    report["bar_checks"] = {name: {"ok": not bad, "residuals": [str(b) for b in bad[:10]]}
                            for name, bad in checks.items()}
    report["bar_values"] = {
        "mu([b]⊗[b])": BA.format(BA.mu(("b",), ("b",))) if "b" in BA.A.degrees else None,
        "d[a2|a3]": BA.format(BA.bar_diff({("a2", "a3")})) if {"a2", "a3"} <= set(BA.A.degrees) else None,
        "mu([a2]⊗[a3])": BA.format(BA.mu(("a2",), ("a3",))) if {"a2", "a3"} <= set(BA.A.degrees) else None,
    }
    report["truncation"]["bar_checks_max_degree"] = D
    return all(not bad for bad in checks.values())


def run_transfer(built: Built, report: dict, arity: int | None = None) -> bool:
    doc = built.doc
    C = built.complex
    tr = doc.get("transfer", {})
    pins = doc.get("pins", {})
    upto = doc.get("report", {}).get("max_degree", built.max_degree)
    ok = True

    g_pins: dict = {}
    for name, text in pins.get("g", {}).items():
        e = target_element(built, text, 1, f"pins/g/{name}")
        degs = {gen[0] for (gen,) in e} if e else {0}
        if len(degs) != 1:
            raise ProblemValidationError("pin must be homogeneous", f"pins/g/{name}")
        k = degs.pop()
        vec = C.to_vector({gen: c for (gen,), c in e.items()}, k) if e else C.group(k).zero()
        g_pins.setdefault(k, []).append((name, vec))
    try:
        H, g, notes = select_g(C, g_pins)
    except ValueError as exc:
        raise ProblemValidationError(str(exc), "pins/g") from exc
    report["truncation"]["notes"].extend(notes)
    hmax = doc.get("report", {}).get("homology_max_degree", upto)
    state = TransferState(C, H, g, format_target=_target_formatter(built))
    report["homology"] = homology_table(built.full_complex, hmax)
    report["g"] = {H.label(x): state.fmt_B(g((x,))) for x in H.basis() if x[0] <= upto}
    if built.kind == "algebra":
        state.mu_B = built.algebra.product_map(C)
    elif built.kind == "bar":
        state.mu_B = built.bar.mu_map()
        state.delta_B = built.bar.delta_map()

    def pins_for(slot, n, on_H=False):
        out = {}
        for arg, text in pins.get(slot, {}).items():
            w = h_word(H, arg, f"pins/{slot}/{arg}")
            out[w] = h_element(H, text, f"pins/{slot}/{arg}") if on_H else \
                target_element(built, text, n, f"pins/{slot}/{arg}")
        return out

    known = {"g", "g2", "g1^2", "g2^2"} | {f"m{k}.b" for k in range(3, 6)} | {f"g{k}" for k in range(3, 6)}
    for slot in pins:
        if slot not in known:
            raise ProblemValidationError(f"unknown pin slot {slot!r}", f"pins/{slot}")

    induce_binary(state)
    g2_pins = pins_for("g2", 1)
    g12_pins = pins_for("g1^2", 2)
    binary_homotopies(state, g2_pins or None, g12_pins or None)
    ops = {}
    homs = {}
    paths = {}
    if state.mu_B is not None:
        ops["mu_H"] = _table(state, state.op(1, 2), upto, True)
        homs["g2"] = _table(state, state.gmap(2, 1), upto, False)
        paths["g2"] = "pinned" if g2_pins else "canonical"
    if state.delta_B is not None:
        ops["Delta_H"] = _table(state, state.op(2, 1), upto, True)
        homs["g1^2"] = _table(state, state.gmap(1, 2), upto, False)
        paths["g1^2"] = "pinned" if g12_pins else "canonical"

    max_arity = arity if arity is not None else tr.get("max_arity", 2)
    for m in range(3, max_arity + 1):
        res = operadic_step(state, m, pins_for(f"m{m}.b", 1, on_H=True) or None, pins_for(f"g{m}", 1) or None)
        ops[f"m{m}"] = _table(state, res.omega, upto, True)
        homs[f"g{m}"] = _table(state, state.gmap(m, 1), upto, False)
        paths[f"m{m}"] = {"b": "pinned" if pins.get(f"m{m}.b") else "canonical",
                          "z_zero": res.z_is_zero, "correction_zero": res.correction_is_zero,
                          "phi": _table(state, res.phi, upto, False)}

    checks = {}
    counts = {}
    phi22 = None
    if tr.get("omega22"):
        r22 = omega22_step(state, pins_for("g2^2", 2) or None)
        ops["w22"] = _table(state, r22.omega, upto, True)
        homs["g2^2"] = _table(state, r22.g22, upto, False)
        paths["w22"] = {"z_zero": r22.z_is_zero, "phi": _table(state, r22.phi, upto, False)}
        checks["z22 = 0"] = {"ok": r22.z_is_zero, "residuals": []}
        checks["g2^2 residual class"] = {"ok": r22.residual_class_zero, "residuals": []}
        ok &= r22.z_is_zero and r22.residual_class_zero
        phi22 = r22.phi

    for rep in a_infinity_check(state, max(max_arity, 2)) + morphism_check(state, phi22):
        checks[rep.name] = {"ok": rep.ok, "residuals": [list(r) for r in rep.residuals[:10]]}
        counts[rep.name] = rep.checked
        ok &= rep.ok

    iso_report = {"required": [], "findings": []}
    for key, free in (("iso_checks", True), ("iso_findings", True)):
        for m, n, s in tr.get(key, []):
            rep = induced_iso_check(g, m, n, s, free=free)
            entry = {"m": m, "n": n, "shift": s, "model": "free", "ok": rep.ok, "failures": rep.failures}
            counts[f"iso {m},{n},{s}"] = rep.blocks_checked
            if key == "iso_checks":
                iso_report["required"].append(entry)
                ok &= rep.ok
            else:
                iso_report["findings"].append(entry)
    if doc["coefficients"] == "Z" and tr.get("iso_checks"):
        m, n, s = tr["iso_checks"][0]
        rep = induced_iso_check(g, m, n, s, free=False)
        iso_report["findings"].append({"m": m, "n": n, "shift": s, "model": "strict", "ok": rep.ok,
                                  "failures": rep.failures})

    if "homotopy_inverse" in tr:
        spec = tr["homotopy_inverse"]
        e = target_element(built, spec["element"], 1, "transfer/homotopy_inverse")
        vec = C.to_vector({gen: c for (gen,), c in e.items()}, spec["degree"])
        res = no_homotopy_inverse_check(g, spec["degree"], vec, label=spec["element"])
        report["homotopy_inverse"] = res.as_dict()
        ok &= not res.has_inverse

    report["operations"] = ops
    report["homotopies"] = homs
    report["paths"] = paths
    report["checks"] = checks
    report["homology_isomorphisms"] = iso_report
    report["choices"] = [c.as_dict() for c in state.choices if c.degree <= upto]
    report["truncation"]["checked_inputs"] = counts
    report["truncation"]["notes"].extend(sorted(set(state.notes)))
    return ok


def run_problem(doc: dict, max_degree: int | None = None, arity: int | None = None,
                pins: list[str] | None = None) -> tuple[dict, bool]:
    if pins:
        doc = apply_pin_overrides(doc, pins)
    built = build(doc, max_degree)
    report: dict = {
        "problem": doc["name"],
        "pipeline": doc["pipeline"],
        "coefficients": doc["coefficients"],
        "truncation": {"window": built.max_degree, "notes": []},
    }
    pipe = doc["pipeline"]
    if pipe == "homology":
        ok = run_homology(built, report)
    elif pipe == "bar":
        ok = run_bar_checks(built, report)
    elif pipe == "verify":
        ok = run_homology(built, report)
        if built.kind == "bar":
            ok &= run_bar_checks(built, report)
        if built.kind == "algebra":
            report["checks"]["ideal closure"] = {"ok": built.algebra.check_ideal_closure().ok, "residuals": []}
    else:
        ok = True
        if built.kind == "bar" and "checks_max_degree" in doc["bar"]:
            ok &= run_bar_checks(built, report)
        ok &= run_transfer(built, report, arity)
    report["ok"] = bool(ok)
    return report, bool(ok)
