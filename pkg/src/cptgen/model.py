"""Core domain types: networks, parental configurations, distributions, CPTs.

A network here is a single child variable with ordered states, influenced by
one or more weighted parent variables. A parental configuration assigns one
state to every parent; a CPT maps each of the prod(k_i) configurations to a
probability distribution over the child states.

State identity is by label throughout the public surface; integer indices
into the ordered state lists are an internal detail.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

#: Absolute tolerance for "sums to one" checks on human-entered values.
#: Values within tolerance are renormalized on ingest.
SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SpecViolation:
    """One broken invariant: stable machine code, location, human message."""

    code: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.where}: {self.message}"


class ValidationError(ValueError):
    """Raised where a violation report cannot be returned instead."""

    def __init__(self, violations: Iterable[SpecViolation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class ParentSpec:
    """A parent variable: name, ordered state labels, and a relative weight.

    The weight quantifies this parent's share of influence on the child and
    must lie in [0, 1]; across all parents of a network the weights sum to 1.
    """

    name: str
    states: tuple[str, ...]
    weight: float

    def __init__(self, name: str, states: Sequence[str], weight: float):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "states", tuple(states))
        object.__setattr__(self, "weight", float(weight))

    @property
    def state_count(self) -> int:
        return len(self.states)

    def state_index(self, label: str) -> int:
        try:
            return self.states.index(label)
        except ValueError:
            raise KeyError(
                f"parent {self.name!r} has no state {label!r}; "
                f"states are {list(self.states)}"
            ) from None


@dataclass(frozen=True)
class NetworkSpec:
    """One child node plus its ordered list of weighted parents."""

    child_name: str
    child_states: tuple[str, ...]
    parents: tuple[ParentSpec, ...]

    def __init__(
        self,
        child_name: str,
        child_states: Sequence[str],
        parents: Sequence[ParentSpec],
    ):
        object.__setattr__(self, "child_name", child_name)
        object.__setattr__(self, "child_states", tuple(child_states))
        object.__setattr__(self, "parents", tuple(parents))

    @property
    def parent_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.parents)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(p.weight for p in self.parents)

    @property
    def child_state_count(self) -> int:
        return len(self.child_states)

    @property
    def row_count(self) -> int:
        """Number of distinct parental configurations, prod over k_i."""
        return math.prod(p.state_count for p in self.parents)

    def parent(self, name: str) -> ParentSpec:
        for p in self.parents:
            if p.name == name:
                return p
        raise KeyError(f"unknown parent {name!r}; parents are {list(self.parent_names)}")

    def parent_index(self, name: str) -> int:
        for i, p in enumerate(self.parents):
            if p.name == name:
                return i
        raise KeyError(f"unknown parent {name!r}; parents are {list(self.parent_names)}")

    def require_valid(self) -> "NetworkSpec":
        violations = validate_spec(self)
        if violations:
            raise ValidationError(violations)
        return self


@dataclass(frozen=True, init=False)
class ParentalConfiguration:
    """One joint state assignment: exactly one state index per parent.

    Stored as (parent name, state index) pairs sorted by name, so equality
    and hashing are independent of construction order. Hashability lets a
    configuration key CPT rows and anchor tables directly.
    """

    entries: tuple[tuple[str, int], ...]

    def __init__(self, assignment: Mapping[str, int]):
        object.__setattr__(self, "entries", tuple(sorted(assignment.items())))

    @classmethod
    def from_labels(cls, spec: NetworkSpec, labels: Mapping[str, str]) -> "ParentalConfiguration":
        return cls({name: spec.parent(name).state_index(s) for name, s in labels.items()})

    @property
    def assignment(self) -> dict[str, int]:
        return dict(self.entries)

    @property
    def parent_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.entries)

    def __getitem__(self, parent_name: str) -> int:
        for name, idx in self.entries:
            if name == parent_name:
                return idx
        raise KeyError(f"configuration has no entry for parent {parent_name!r}")

    def __contains__(self, parent_name: str) -> bool:
        return any(name == parent_name for name, _ in self.entries)

    def labels(self, spec: NetworkSpec) -> dict[str, str]:
        """State labels keyed by parent, in the spec's parent order."""
        return {
            p.name: p.states[self[p.name]]
            for p in spec.parents
            if p.name in self
        }

    def sort_key(self, spec: NetworkSpec) -> tuple[int, ...]:
        """State indices in the spec's parent order; total configs only."""
        return tuple(self[p.name] for p in spec.parents)

    def describe(self, spec: NetworkSpec) -> str:
        return ", ".join(f"{n}={s}" for n, s in self.labels(spec).items())

    def validate_for(self, spec: NetworkSpec) -> list[SpecViolation]:
        """Check totality (one entry per parent) and index ranges."""
        violations = []
        names = set(self.parent_names)
        for p in spec.parents:
            if p.name not in names:
                violations.append(SpecViolation(
                    "configuration-missing-parent", "configuration",
                    f"no state assigned for parent {p.name!r}"))
        for name, idx in self.entries:
            try:
                parent = spec.parent(name)
            except KeyError:
                violations.append(SpecViolation(
                    "configuration-unknown-parent", "configuration",
                    f"parent {name!r} is not in the network"))
                continue
            if not 0 <= idx < parent.state_count:
                violations.append(SpecViolation(
                    "configuration-state-range", "configuration",
                    f"state index {idx} out of range for parent {name!r}"))
        return violations


@dataclass(frozen=True)
class Distribution:
    """A probability distribution over the child states.

    Invariants (enforced at construction): every entry >= 0 and the entries
    sum to 1 within SUM_TOLERANCE. The plain constructor does not repair
    drift; use ``from_values`` for human-entered rows, which renormalizes.
    """

    values: tuple[float, ...]

    def __init__(self, values: Sequence[float]):
        vals = tuple(float(v) for v in values)
        if not vals:
            raise ValidationError([SpecViolation(
                "distribution-empty", "distribution", "no entries")])
        if any(v < 0.0 for v in vals):
            raise ValidationError([SpecViolation(
                "distribution-negative", "distribution",
                f"negative entry in {list(vals)}")])
        total = math.fsum(vals)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValidationError([SpecViolation(
                "distribution-sum", "distribution",
                f"entries sum to {total!r}, not 1 within {SUM_TOLERANCE}")])
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "Distribution":
        """Ingest a human-entered row: validate, then renormalize exactly."""
        vals = [float(v) for v in values]
        if vals and all(v >= 0.0 for v in vals):
            total = math.fsum(vals)
            if abs(total - 1.0) <= SUM_TOLERANCE and total > 0.0:
                vals = [v / total for v in vals]
        return cls(vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, index: int) -> float:
        return self.values[index]


@dataclass(frozen=True, eq=False)
class Cpt:
    """The generated table: one distribution per parental configuration."""

    spec: NetworkSpec
    rows: Mapping[ParentalConfiguration, Distribution]

    def row(self, labels: Mapping[str, str]) -> Distribution:
        return self.rows[ParentalConfiguration.from_labels(self.spec, labels)]

    def validate(self) -> list[SpecViolation]:
        violations = []
        if len(self.rows) != self.spec.row_count:
            violations.append(SpecViolation(
                "cpt-row-count", "cpt",
                f"expected {self.spec.row_count} rows, found {len(self.rows)}"))
        for config, dist in self.rows.items():
            violations.extend(config.validate_for(self.spec))
            if len(dist) != self.spec.child_state_count:
                violations.append(SpecViolation(
                    "cpt-row-length", "cpt",
                    f"row for {{{config.describe(self.spec)}}} has {len(dist)} "
                    f"entries, expected {self.spec.child_state_count}"))
        return violations


def enumerate_configurations(spec: NetworkSpec) -> list[ParentalConfiguration]:
    """All parental configurations in lexicographic order.

    The first-listed parent varies slowest, the last-listed fastest, like a
    nested loop with one level per parent. Deterministic, no duplicates,
    exactly spec.row_count entries.
    """
    names = spec.parent_names
    ranges = [range(p.state_count) for p in spec.parents]
    return [
        ParentalConfiguration(dict(zip(names, combo)))
        for combo in itertools.product(*ranges)
    ]


def validate_spec(spec: NetworkSpec) -> list[SpecViolation]:
    """Check every network invariant; an empty report means valid.

    The report is the error channel: this never raises.
    """
    violations: list[SpecViolation] = []
    if not spec.child_name:
        violations.append(SpecViolation(
            "child-name-empty", "network.child", "child name must be non-empty"))
    if len(spec.child_states) < 2:
        violations.append(SpecViolation(
            "child-too-few-states", "network.child",
            f"child needs at least 2 states, found {len(spec.child_states)}"))
    if len(set(spec.child_states)) != len(spec.child_states):
        violations.append(SpecViolation(
            "child-states-duplicate", "network.child",
            f"duplicate child state labels in {list(spec.child_states)}"))
    if not spec.parents:
        violations.append(SpecViolation(
            "parents-empty", "network.parents", "at least one parent required"))
    seen_names: set[str] = set()
    for i, parent in enumerate(spec.parents):
        where = f"network.parents[{i}]"
        if not parent.name:
            violations.append(SpecViolation(
                "parent-name-empty", where, "parent name must be non-empty"))
        if parent.name in seen_names:
            violations.append(SpecViolation(
                "parent-name-duplicate", where,
                f"duplicate parent name {parent.name!r}"))
        seen_names.add(parent.name)
        if parent.state_count < 2:
            violations.append(SpecViolation(
                "parent-too-few-states", where,
                f"parent {parent.name!r} needs at least 2 states, "
                f"found {parent.state_count}"))
        if len(set(parent.states)) != len(parent.states):
            violations.append(SpecViolation(
                "parent-states-duplicate", where,
                f"duplicate state labels in {list(parent.states)}"))
        if not 0.0 <= parent.weight <= 1.0:
            violations.append(SpecViolation(
                "weight-range", f"{where}.weight",
                f"weight {parent.weight!r} outside [0, 1]"))
    if spec.parents:
        total = math.fsum(p.weight for p in spec.parents)
        if abs(total - 1.0) > SUM_TOLERANCE:
            violations.append(SpecViolation(
                "weights-sum", "network.parents",
                f"weights must sum to 1, found {total!r}"))
    return violations
