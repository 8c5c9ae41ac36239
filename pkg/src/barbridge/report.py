"""Result documents: canonical JSON and payload builders."""

from __future__ import annotations

import json
import math
from typing import Any

from .chains import Chain
from .extension import BarExtensionResult, ExtensionResult
from .persistence import BarRepresentation, PersistenceResult, bars_by_rank

SCHEMA = "barbridge/1"


def dumps(obj: Any, indent: int = 2) -> str:
    """Canonical JSON: sorted keys, shortest round-trip floats, no NaN/inf."""

    def enc(o: Any, level: int) -> str:
        pad, inner = " " * (indent * level), " " * (indent * (level + 1))
        if o is None or isinstance(o, (bool, str)):
            return json.dumps(o)
        if isinstance(o, int):
            return str(o)
        if isinstance(o, float):
            if not math.isfinite(o):
                raise ValueError("non-finite float in document")
            return repr(float(o))
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{inner}{json.dumps(str(k))}: {enc(o[k], level + 1)}" for k in sorted(o, key=str)]
            return "{\n" + ",\n".join(items) + "\n" + pad + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            return "[\n" + ",\n".join(inner + enc(v, level + 1) for v in o) + "\n" + pad + "]"
        if hasattr(o, "item"):
            return enc(o.item(), level)
        raise TypeError(f"cannot encode {type(o).__name__}")

    return enc(obj, 0) + "\n"


def _value(v: float) -> float | None:
    return None if math.isinf(v) else float(v)


def barcode_doc(label: str, result: PersistenceResult) -> list[dict[str, Any]]:
    rank = {b.id: i for i, b in enumerate(bars_by_rank(result))}
    out = []
    for b in result.barcode:
        birth, death = result.bar_values(b)
        out.append({
            "id": f"{label}:{b.id}",
            "rank": rank[b.id],
            "birth": float(birth),
            "death": _value(death),
            "birth_grade": b.birth,
            "death_grade": b.death,
        })
    return out


def cycle_doc(z: Chain) -> list[list[Any]]:
    return [[list(s), c] for s, c in z.items()]


def rep_doc(label: str, rep: BarRepresentation | None) -> list[dict[str, Any]] | None:
    if rep is None:
        return None
    return [{"bar": f"{label}:{b}", "coeff": c} for c, b in rep.terms]


def extension_doc(ext: ExtensionResult, y_label: str) -> dict[str, Any]:
    scale = ext.aux.complex.scale
    grades = []
    for g in ext.grades:
        entry: dict[str, Any] = {
            "grade": g.at,
            "value": scale.value(g.at),
            "baseline": {"cycle": cycle_doc(g.cycles.baseline)},
            "offsets": [{"cycle": cycle_doc(o)} for o in g.cycles.offsets],
        }
        if ext.target is not None:
            entry["baseline"]["bars"] = rep_doc(y_label, g.baseline_bars)
            for o, rep in zip(entry["offsets"], g.offset_bars):
                o["bars"] = rep_doc(y_label, rep)
        grades.append(entry)
    return {
        "psi": ext.psi,
        "ell0": ext.ell0,
        "p_Y": list(ext.p_Y),
        "source_cycle": cycle_doc(ext.source),
        "aux_barcode": [[b.birth, b.death] for b in ext.aux.barcode],
        "grades": grades,
    }


def bar_extension_doc(res: BarExtensionResult, z_label: str, y_label: str) -> dict[str, Any]:
    return {
        "bar": f"{z_label}:{res.bar.id}",
        "psi": res.psi,
        "mode": res.mode,
        "terminal_classes": len(res.terminal_classes),
        "extensions": [extension_doc(e, y_label) for e in res.extensions],
    }


def document(command: str, config: dict[str, Any], **sections: Any) -> dict[str, Any]:
    doc = {"schema": SCHEMA, "command": command, "config": config}
    doc.update({k: v for k, v in sections.items() if v is not None})
    return doc
