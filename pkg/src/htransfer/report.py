"""Serializing reports and comparing them."""
from __future__ import annotations

import json
from typing import Any


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def to_text(report: dict) -> str:
    lines = [f"problem: {report.get('problem')}  pipeline: {report.get('pipeline')}  "
             f"coefficients: {report.get('coefficients')}"]
    trunc = report.get("truncation", {})
    lines.append(f"window: [0, {trunc.get('window')}]")
    if "homology" in report:
        lines.append("")
        lines.append("homology")
        for k, v in sorted(report["homology"].items(), key=lambda kv: int(kv[0])):
            lines.append(f"  H^{k} = {v['group']}")
    for section in ("g", "operations", "homotopies"):
        if section not in report:
            continue
        lines.append("")
        lines.append(section)
        if section == "g":
            for x, v in sorted(report["g"].items()):
                lines.append(f"  g({x}) = {v}")
            continue
        for name, table in sorted(report[section].items()):
            if not table:
                lines.append(f"  {name} = 0")
            for arg, val in sorted(table.items()):
                lines.append(f"  {name}({arg}) = {val}")
    if "paths" in report:
        lines.append("")
        lines.append("choices")
        for name, v in sorted(report["paths"].items()):
            if isinstance(v, dict):
                flags = ", ".join(f"{k}={v[k]}" for k in sorted(v) if k != "phi")
                lines.append(f"  {name}: {flags}")
            else:
                lines.append(f"  {name}: {v}")
    for section in ("checks", "bar_checks"):
        if section not in report:
            continue
        lines.append("")
        lines.append(section)
        for name, v in sorted(report[section].items()):
            lines.append(f"  [{'ok' if v['ok'] else 'FAIL'}] {name}")
    if "homology_isomorphisms" in report:
        lines.append("")
        lines.append("homology isomorphism of g~")
        for kind in ("required", "findings"):
            for e in report["homology_isomorphisms"][kind]:
                tag = "ok" if e["ok"] else ("FAIL" if kind == "required" else "not iso")
                lines.append(f"  [{tag}] (m,n)=({e['m']},{e['n']}) shift {e['shift']} {e['model']} model")
    if "homotopy_inverse" in report:
        h = report["homotopy_inverse"]
        verdict = "exists" if h["right_homotopy_inverse"] else "none"
        lines.append("")
        lines.append(f"right homotopy inverse at {h['element']}: {verdict} "
                     f"({h['maps_searched']} candidates searched)")
    notes = trunc.get("notes", [])
    if notes:
        lines.append("")
        lines.append("truncation")
        lines.extend(f"  {n}" for n in notes)
    lines.append("")
    lines.append("result: " + ("ok" if report.get("ok") else "FAILED"))
    return "\n".join(lines) + "\n"


def report_diff(a: Any, b: Any, path: str = "") -> list[dict]:
    """Field-level differences; empty when the reports are equal."""
    if isinstance(a, dict) and isinstance(b, dict):
        out = []
        for key in sorted(set(a) | set(b), key=str):
            p = f"{path}/{key}"
            if key not in a:
                out.append({"path": p, "change": "added", "new": b[key]})
            elif key not in b:
                out.append({"path": p, "change": "removed", "old": a[key]})
            else:
                out.extend(report_diff(a[key], b[key], p))
        return out
    if isinstance(a, list) and isinstance(b, list) and len(a) == len(b):
        out = []
        for i, (x, y) in enumerate(zip(a, b)):
            out.extend(report_diff(x, y, f"{path}/{i}"))
        return out
    if a != b:
        return [{"path": path or "/", "change": "changed", "old": a, "new": b}]
    return []
