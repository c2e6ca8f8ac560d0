"""Elicitation documents: the JSON interchange format and its transforms.

A document bundles everything needed to generate a table: the network
(child, parents, weights), the compatibility section (a ``diagonal``
directive and/or explicit entries; explicit entries win), and one anchor
distribution per distinct compatible configuration. Free-form ``metadata``
travels along untouched.

Loading is strict by default: unknown fields anywhere are an error. In
lenient mode unknown fields are preserved and re-emitted on save. Saving is
canonical (fixed key order, anchors and entries sorted, two-space indent,
trailing newline), so save-after-load is byte-stable and a document's
revision token can be a digest of its canonical bytes.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Any, Mapping, Sequence

from .elicit import (
    AnchorSet,
    CompatibilityMap,
    DiagonalUnavailableError,
    build_diagonal_compatibility,
)
from .model import (
    Distribution,
    NetworkSpec,
    ParentalConfiguration,
    ParentSpec,
    SpecViolation,
    ValidationError,
    validate_spec,
)

FORMAT_VERSION = "1"


class DocumentError(ValueError):
    """A parse or schema problem, located by line (syntax) or field path."""

    def __init__(self, message: str, *, path: str = "", line: int | None = None,
                 column: int | None = None):
        self.path = path
        self.line = line
        self.column = column
        where = path or (f"line {line}, column {column}" if line else "document")
        super().__init__(f"{where}: {message}")


@dataclass(eq=False)
class CompatEntryRecord:
    parent: str
    state: str
    configuration: ParentalConfiguration
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass(eq=False)
class AnchorRecord:
    configuration: ParentalConfiguration
    distribution: Distribution
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass(eq=False)
class ElicitationDocument:
    """A parsed document. Treat as immutable; transforms return copies."""

    spec: NetworkSpec
    diagonal: bool
    compat_entries: tuple[CompatEntryRecord, ...]
    anchors: tuple[AnchorRecord, ...]
    version: str = FORMAT_VERSION
    metadata: dict[str, Any] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)
    network_extra: dict[str, Any] = field(default_factory=dict)
    child_extra: dict[str, Any] = field(default_factory=dict)
    parent_extras: tuple[dict[str, Any], ...] = ()
    compatibility_extra: dict[str, Any] = field(default_factory=dict)

    @cached_property
    def compat(self) -> CompatibilityMap:
        entries: dict[tuple[str, str], ParentalConfiguration] = {}
        if self.diagonal:
            entries.update(build_diagonal_compatibility(self.spec).entries)
        for record in self.compat_entries:
            entries[(record.parent, record.state)] = record.configuration
        return CompatibilityMap(entries)

    @cached_property
    def anchor_set(self) -> AnchorSet:
        return AnchorSet(
            compat=self.compat,
            anchors={rec.configuration: rec.distribution for rec in self.anchors},
        )

    @cached_property
    def revision(self) -> str:
        return hashlib.sha256(save_document(self)).hexdigest()[:16]

    def validate(self) -> list[SpecViolation]:
        violations = validate_spec(self.spec)
        if violations:
            return violations
        seen: set[ParentalConfiguration] = set()
        for i, record in enumerate(self.anchors):
            if record.configuration in seen:
                violations.append(SpecViolation(
                    "anchor-duplicate", f"anchors[{i}]",
                    f"duplicate anchor for "
                    f"{{{record.configuration.describe(self.spec)}}}"))
            seen.add(record.configuration)
        violations.extend(self.anchor_set.validate_for(self.spec))
        return violations

    def require_valid(self) -> "ElicitationDocument":
        violations = self.validate()
        if violations:
            raise ValidationError(violations)
        return self


# ---------------------------------------------------------------- loading

def _check_keys(obj: Mapping[str, Any], allowed: set[str], path: str,
                strict: bool) -> dict[str, Any]:
    unknown = {k: v for k, v in obj.items() if k not in allowed}
    if unknown and strict:
        names = ", ".join(sorted(unknown))
        raise DocumentError(f"unknown field(s): {names}", path=path or "document")
    return unknown


def _require(obj: Mapping[str, Any], key: str, kind: type, path: str) -> Any:
    if key not in obj:
        raise DocumentError(f"missing required field {key!r}",
                            path=path or "document")
    value = obj[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise DocumentError(f"field {key!r} must be a number",
                                path=f"{path}.{key}" if path else key)
        return float(value)
    if not isinstance(value, kind):
        raise DocumentError(
            f"field {key!r} must be of type {kind.__name__}",
            path=f"{path}.{key}" if path else key)
    return value


def _parse_configuration(raw: Any, spec: NetworkSpec, path: str) -> ParentalConfiguration:
    if not isinstance(raw, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in raw.items()
    ):
        raise DocumentError("configuration must map parent names to state labels",
                            path=path)
    try:
        return ParentalConfiguration.from_labels(spec, raw)
    except KeyError as exc:
        raise DocumentError(str(exc.args[0]) if exc.args else str(exc), path=path) from None


def load_document(data: bytes | str, *, strict: bool = True) -> ElicitationDocument:
    """Parse and fully validate a document.

    Raises DocumentError for syntax and schema problems (carrying the line
    or field path) and ValidationError for semantic invariant violations
    (carrying the per-field report).
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, line=exc.lineno, column=exc.colno) from None
    if not isinstance(raw, dict):
        raise DocumentError("top level must be an object")

    top_extra = _check_keys(
        raw, {"version", "metadata", "network", "compatibility", "anchors"},
        "", strict)
    version = _require(raw, "version", str, "")
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported format version {version!r}; "
                            f"expected {FORMAT_VERSION!r}", path="version")
    metadata = raw.get("metadata", {})
    if not isinstance(metadata, dict):
        raise DocumentError("metadata must be an object", path="metadata")

    network = _require(raw, "network", dict, "")
    network_extra = _check_keys(network, {"child", "parents"}, "network", strict)
    child = _require(network, "child", dict, "network")
    child_extra = _check_keys(child, {"name", "states"}, "network.child", strict)
    child_name = _require(child, "name", str, "network.child")
    child_states = _require(child, "states", list, "network.child")

    raw_parents = _require(network, "parents", list, "network")
    parents: list[ParentSpec] = []
    parent_extras: list[dict[str, Any]] = []
    for i, raw_parent in enumerate(raw_parents):
        path = f"network.parents[{i}]"
        if not isinstance(raw_parent, dict):
            raise DocumentError("parent must be an object", path=path)
        parent_extras.append(
            _check_keys(raw_parent, {"name", "weight", "states"}, path, strict))
        parents.append(ParentSpec(
            name=_require(raw_parent, "name", str, path),
            states=_require(raw_parent, "states", list, path),
            weight=_require(raw_parent, "weight", float, path),
        ))

    spec = NetworkSpec(child_name=child_name, child_states=child_states,
                       parents=parents)
    violations = validate_spec(spec)
    if violations:
        raise ValidationError(violations)

    compatibility = raw.get("compatibility", {})
    if not isinstance(compatibility, dict):
        raise DocumentError("compatibility must be an object", path="compatibility")
    compatibility_extra = _check_keys(
        compatibility, {"diagonal", "entries"}, "compatibility", strict)
    diagonal = compatibility.get("diagonal", False)
    if not isinstance(diagonal, bool):
        raise DocumentError("diagonal must be a boolean",
                            path="compatibility.diagonal")
    entry_records: list[CompatEntryRecord] = []
    raw_entries = compatibility.get("entries", [])
    if not isinstance(raw_entries, list):
        raise DocumentError("entries must be a list", path="compatibility.entries")
    seen_keys: set[tuple[str, str]] = set()
    for i, raw_entry in enumerate(raw_entries):
        path = f"compatibility.entries[{i}]"
        if not isinstance(raw_entry, dict):
            raise DocumentError("entry must be an object", path=path)
        entry_extra = _check_keys(
            raw_entry, {"parent", "state", "configuration"}, path, strict)
        parent = _require(raw_entry, "parent", str, path)
        state = _require(raw_entry, "state", str, path)
        config = _parse_configuration(
            raw_entry.get("configuration"), spec, f"{path}.configuration")
        if (parent, state) in seen_keys:
            raise DocumentError(f"duplicate entry for ({parent}, {state})", path=path)
        seen_keys.add((parent, state))
        entry_records.append(CompatEntryRecord(parent, state, config, entry_extra))

    raw_anchors = _require(raw, "anchors", list, "")
    anchor_records: list[AnchorRecord] = []
    for i, raw_anchor in enumerate(raw_anchors):
        path = f"anchors[{i}]"
        if not isinstance(raw_anchor, dict):
            raise DocumentError("anchor must be an object", path=path)
        anchor_extra = _check_keys(
            raw_anchor, {"configuration", "distribution"}, path, strict)
        config = _parse_configuration(
            raw_anchor.get("configuration"), spec, f"{path}.configuration")
        values = _require(raw_anchor, "distribution", list, path)
        try:
            dist = Distribution.from_values(values)
        except ValidationError as exc:
            raise ValidationError([
                SpecViolation(v.code, f"{path}.distribution", v.message)
                for v in exc.violations
            ]) from None
        anchor_records.append(AnchorRecord(config, dist, anchor_extra))

    document = ElicitationDocument(
        spec=spec,
        diagonal=diagonal,
        compat_entries=tuple(entry_records),
        anchors=tuple(anchor_records),
        version=version,
        metadata=metadata,
        extra=top_extra,
        network_extra=network_extra,
        child_extra=child_extra,
        parent_extras=tuple(parent_extras),
        compatibility_extra=compatibility_extra,
    )
    try:
        document.compat
    except DiagonalUnavailableError as exc:
        raise DocumentError(str(exc), path="compatibility.diagonal") from None
    return document.require_valid()


# ----------------------------------------------------------------- saving

def _sorted_jsonable(value: Any) -> Any:
    """Deep-sort mapping keys so free-form metadata serializes stably."""
    if isinstance(value, dict):
        return {k: _sorted_jsonable(value[k]) for k in sorted(value)}
    if isinstance(value, list):
        return [_sorted_jsonable(v) for v in value]
    return value


def _with_extra(base: dict[str, Any], extra: Mapping[str, Any]) -> dict[str, Any]:
    for key in sorted(extra):
        base[key] = _sorted_jsonable(extra[key])
    return base


def document_to_jsonable(doc: ElicitationDocument) -> dict[str, Any]:
    """The canonical JSON object form: fixed key order, sorted records."""
    spec = doc.spec
    out: dict[str, Any] = {"version": doc.version}
    if doc.metadata:
        out["metadata"] = _sorted_jsonable(doc.metadata)

    parents = []
    extras = doc.parent_extras
    if len(extras) != len(spec.parents):
        extras = tuple({} for _ in spec.parents)
    for parent, extra in zip(spec.parents, extras):
        parents.append(_with_extra(
            {"name": parent.name, "weight": parent.weight,
             "states": list(parent.states)},
            extra))
    out["network"] = _with_extra(
        {
            "child": _with_extra(
                {"name": spec.child_name, "states": list(spec.child_states)},
                doc.child_extra),
            "parents": parents,
        },
        doc.network_extra)

    compatibility: dict[str, Any] = {}
    if doc.diagonal:
        compatibility["diagonal"] = True
    if doc.compat_entries:
        order = {
            (p.name, s): (i, j)
            for i, p in enumerate(spec.parents) for j, s in enumerate(p.states)
        }
        compatibility["entries"] = [
            _with_extra(
                {"parent": rec.parent, "state": rec.state,
                 "configuration": rec.configuration.labels(spec)},
                rec.extra)
            for rec in sorted(
                doc.compat_entries,
                key=lambda r: order.get((r.parent, r.state), (len(order), 0)))
        ]
    if compatibility or doc.compatibility_extra:
        out["compatibility"] = _with_extra(compatibility, doc.compatibility_extra)

    out["anchors"] = [
        _with_extra(
            {"configuration": rec.configuration.labels(spec),
             "distribution": list(rec.distribution.values)},
            rec.extra)
        for rec in sorted(doc.anchors,
                          key=lambda r: r.configuration.sort_key(spec))
    ]
    return _with_extra(out, doc.extra)


def save_document(doc: ElicitationDocument) -> bytes:
    """Canonical bytes: two-space indent, fixed key order, trailing newline."""
    text = json.dumps(document_to_jsonable(doc), indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


# -------------------------------------------------------------- overrides

def apply_overrides(
    doc: ElicitationDocument,
    weights: Mapping[str, float] | None = None,
    anchors: Sequence[tuple[Mapping[str, str], Sequence[float]]] | None = None,
) -> ElicitationDocument:
    """A new document with weight and/or anchor-row replacements applied.

    Overridden weights are renormalized to sum 1 (scaling the whole
    vector); overridden anchor rows must be valid distributions and must
    target configurations the document already elicits.
    """
    violations: list[SpecViolation] = []
    new_spec = doc.spec
    if weights:
        current = {p.name: p.weight for p in doc.spec.parents}
        for name, value in weights.items():
            if name not in current:
                violations.append(SpecViolation(
                    "override-unknown-parent", f"weights.{name}",
                    f"no parent named {name!r}"))
            elif value < 0.0:
                violations.append(SpecViolation(
                    "override-negative-weight", f"weights.{name}",
                    f"weight {value!r} must be nonnegative"))
            else:
                current[name] = float(value)
        total = math.fsum(current.values())
        if not violations and total <= 0.0:
            violations.append(SpecViolation(
                "weights-sum", "weights", "overridden weights sum to zero"))
        if not violations:
            new_spec = NetworkSpec(
                child_name=doc.spec.child_name,
                child_states=doc.spec.child_states,
                parents=[
                    replace(p, weight=current[p.name] / total)
                    for p in doc.spec.parents
                ],
            )

    new_anchors = list(doc.anchors)
    if anchors:
        by_config = {rec.configuration: i for i, rec in enumerate(new_anchors)}
        for j, (raw_config, values) in enumerate(anchors):
            where = f"anchors[{j}]"
            try:
                config = ParentalConfiguration.from_labels(doc.spec, raw_config)
            except KeyError as exc:
                violations.append(SpecViolation(
                    "override-bad-configuration", where,
                    str(exc.args[0]) if exc.args else str(exc)))
                continue
            if config not in by_config:
                violations.append(SpecViolation(
                    "override-unknown-anchor", where,
                    f"{{{config.describe(doc.spec)}}} is not an elicited "
                    f"configuration"))
                continue
            try:
                dist = Distribution.from_values(values)
            except ValidationError as exc:
                violations.extend(
                    SpecViolation(v.code, f"{where}.distribution", v.message)
                    for v in exc.violations)
                continue
            index = by_config[config]
            new_anchors[index] = replace(new_anchors[index], distribution=dist)

    if violations:
        raise ValidationError(violations)
    return replace(doc, spec=new_spec, anchors=tuple(new_anchors))
