"""CPT exporters: CSV for spreadsheets, JSON for round-trips, and an
XMLBIF definition fragment for Bayesian-network tools.

All formats list rows in enumeration order (first parent slowest-varying)
so repeated exports are byte-identical. Floats are written in shortest
round-trip form.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Union
from xml.sax.saxutils import escape

from .engine import GenerationResult
from .model import Cpt, Distribution, NetworkSpec, ParentalConfiguration, ParentSpec, enumerate_configurations

FORMATS = ("csv", "json", "xmlbif")

Exportable = Union[GenerationResult, Cpt]


def _as_cpt(result: Exportable) -> Cpt:
    return result.cpt if isinstance(result, GenerationResult) else result


def export_cpt(result: Exportable, format: str) -> bytes:
    """Serialize a generated table. ``format`` is one of csv, json, xmlbif."""
    cpt = _as_cpt(result)
    if format == "csv":
        return _export_csv(cpt)
    if format == "json":
        return _export_json(cpt)
    if format in ("xmlbif", "xmlbif-fragment"):
        return _export_xmlbif(cpt)
    raise ValueError(f"unknown export format {format!r}; expected one of {FORMATS}")


def _export_csv(cpt: Cpt) -> bytes:
    spec = cpt.spec
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(spec.parent_names) + list(spec.child_states))
    for config in enumerate_configurations(spec):
        labels = config.labels(spec)
        row = [labels[name] for name in spec.parent_names]
        row += [repr(v) for v in cpt.rows[config].values]
        writer.writerow(row)
    return buffer.getvalue().encode("utf-8")


def _export_json(cpt: Cpt) -> bytes:
    spec = cpt.spec
    payload = {
        "child": {"name": spec.child_name, "states": list(spec.child_states)},
        "parents": [
            {"name": p.name, "weight": p.weight, "states": list(p.states)}
            for p in spec.parents
        ],
        "rows": [
            {
                "configuration": config.labels(spec),
                "distribution": list(cpt.rows[config].values),
            }
            for config in enumerate_configurations(spec)
        ],
    }
    return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def import_cpt(data: bytes | str) -> Cpt:
    """Rebuild a table from its JSON export (the inverse of format=json)."""
    raw = json.loads(data.decode("utf-8") if isinstance(data, bytes) else data)
    spec = NetworkSpec(
        child_name=raw["child"]["name"],
        child_states=raw["child"]["states"],
        parents=[
            ParentSpec(name=p["name"], states=p["states"], weight=p["weight"])
            for p in raw["parents"]
        ],
    )
    rows = {
        ParentalConfiguration.from_labels(spec, r["configuration"]):
            Distribution(r["distribution"])
        for r in raw["rows"]
    }
    return Cpt(spec=spec, rows=rows)


def _export_xmlbif(cpt: Cpt) -> bytes:
    """One <DEFINITION> block in standard row-major order: configurations
    enumerate with the first parent slowest, child states vary fastest."""
    spec = cpt.spec
    lines = ["<DEFINITION>", f"    <FOR>{escape(spec.child_name)}</FOR>"]
    for name in spec.parent_names:
        lines.append(f"    <GIVEN>{escape(name)}</GIVEN>")
    lines.append("    <TABLE>")
    for config in enumerate_configurations(spec):
        values = " ".join(repr(v) for v in cpt.rows[config].values)
        lines.append(f"        {values}")
    lines.append("    </TABLE>")
    lines.append("</DEFINITION>")
    return ("\n".join(lines) + "\n").encode("utf-8")
