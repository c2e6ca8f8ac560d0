"""Compatibility judgments and the anchor distributions hung off them.

For every (parent, state) pair the expert names the *compatible* parental
configuration: the joint assignment they judge most plausible when that
parent holds that state. Each distinct configuration in the map's image
gets one elicited child distribution (an *anchor*). Distinct-ness is the
whole point: when several (parent, state) keys share a configuration, the
expert answers one question instead of several, so the number of anchors
grows at most linearly with the parents and often stays constant.

Compatibility is data, not inference. Nothing here guesses compatible
states; the map is supplied explicitly or through the diagonal constructor
for the special case where all parents share one state list.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .model import (
    Distribution,
    NetworkSpec,
    ParentalConfiguration,
    SpecViolation,
)


class CompatibilityLookupError(KeyError):
    """A (parent, state) key is absent from the compatibility map."""


class AnchorCompletenessError(ValueError):
    """Some compatible configurations have no anchor distribution."""

    def __init__(self, missing: list[ParentalConfiguration], spec: NetworkSpec | None = None):
        self.missing = list(missing)
        if spec is not None:
            gaps = "; ".join("{" + c.describe(spec) + "}" for c in self.missing)
        else:
            gaps = "; ".join(str(c.entries) for c in self.missing)
        super().__init__(f"missing anchor distributions for: {gaps}")


class DiagonalUnavailableError(ValueError):
    """Parents do not share one state list, so the one-to-one correspondence
    the diagonal construction relies on is unavailable."""


@dataclass(frozen=True, eq=False)
class CompatibilityMap:
    """Maps every (parent name, state label) to its compatible configuration."""

    entries: Mapping[tuple[str, str], ParentalConfiguration]

    def image(self) -> list[ParentalConfiguration]:
        """Distinct configurations, first-appearance order."""
        seen: dict[ParentalConfiguration, None] = {}
        for config in self.entries.values():
            seen.setdefault(config)
        return list(seen)

    def keys_for(self, config: ParentalConfiguration) -> list[tuple[str, str]]:
        return [key for key, c in self.entries.items() if c == config]

    def validate_for(self, spec: NetworkSpec) -> list[SpecViolation]:
        """Coverage (one entry per parent-state) plus self-consistency."""
        violations: list[SpecViolation] = []
        expected = {
            (p.name, s) for p in spec.parents for s in p.states
        }
        present = set(self.entries)
        for parent, state in sorted(expected - present):
            violations.append(SpecViolation(
                "compatibility-missing-entry", "compatibility",
                f"no compatible configuration for {parent}={state}"))
        for parent, state in sorted(present - expected):
            violations.append(SpecViolation(
                "compatibility-unknown-key", "compatibility",
                f"({parent}, {state}) does not name a parent state"))
        for (parent, state), config in self.entries.items():
            where = f"compatibility[{parent}={state}]"
            violations.extend(
                SpecViolation(v.code, where, v.message)
                for v in config.validate_for(spec)
            )
            if (parent, state) in expected and parent in config:
                own_state = spec.parent(parent).states[config[parent]]
                if own_state != state:
                    violations.append(SpecViolation(
                        "compatibility-self-inconsistent", where,
                        f"configuration assigns {parent}={own_state}, "
                        f"expected {parent}={state}"))
        return violations


@dataclass(frozen=True, eq=False)
class AnchorSet:
    """A compatibility map plus one elicited distribution per distinct
    configuration in its image."""

    compat: CompatibilityMap
    anchors: Mapping[ParentalConfiguration, Distribution]

    def anchor_for(self, parent: str, state: str) -> Distribution:
        """The anchor attached to Comp(parent = state)."""
        config = resolve_compatible(self.compat, parent, state)
        try:
            return self.anchors[config]
        except KeyError:
            raise AnchorCompletenessError([config]) from None

    def validate_for(self, spec: NetworkSpec) -> list[SpecViolation]:
        violations = self.compat.validate_for(spec)
        image = set(self.compat.image())
        missing = [c for c in image if c not in self.anchors]
        for config in missing:
            violations.append(SpecViolation(
                "anchor-missing", "anchors",
                f"no distribution for compatible configuration "
                f"{{{config.describe(spec)}}}"))
        for config, dist in self.anchors.items():
            if config not in image:
                violations.append(SpecViolation(
                    "anchor-orphan", "anchors",
                    f"distribution for {{{config.describe(spec)}}} matches no "
                    f"compatible configuration"))
            if len(dist) != spec.child_state_count:
                violations.append(SpecViolation(
                    "anchor-length", "anchors",
                    f"distribution for {{{config.describe(spec)}}} has "
                    f"{len(dist)} entries, expected {spec.child_state_count}"))
        return violations


def resolve_compatible(
    compat: CompatibilityMap, parent: str, state: str
) -> ParentalConfiguration:
    """The compatible configuration recorded for parent = state."""
    try:
        return compat.entries[(parent, state)]
    except KeyError:
        raise CompatibilityLookupError(
            f"no compatibility entry for ({parent!r}, {state!r})"
        ) from None


def build_diagonal_compatibility(spec: NetworkSpec) -> CompatibilityMap:
    """The diagonal map: every parent's state t is compatible with every
    other parent's state t.

    Requires all parents to share one state list (the one-to-one
    correspondence). The image then has exactly k distinct configurations,
    one per shared state, regardless of the number of parents.
    """
    state_lists = {p.states for p in spec.parents}
    if len(state_lists) != 1:
        raise DiagonalUnavailableError(
            "one-to-one correspondence unavailable: parents have differing "
            "state lists; supply an explicit compatibility map")
    (states,) = state_lists
    entries: dict[tuple[str, str], ParentalConfiguration] = {}
    for t, _ in enumerate(states):
        config = ParentalConfiguration({p.name: t for p in spec.parents})
        for p in spec.parents:
            entries[(p.name, p.states[t])] = config
    return CompatibilityMap(entries)


def distinct_anchor_count(compat: CompatibilityMap) -> int:
    """How many distributions the expert must supply: the number of
    distinct configurations in the map's image."""
    return len(compat.image())


def expand_anchors(
    anchor_set: AnchorSet, spec: NetworkSpec
) -> dict[tuple[str, str], Distribution]:
    """The full (parent, state) -> distribution table.

    Keys sharing a compatible configuration share the stored distribution
    object, so their equalities hold exactly by construction rather than
    approximately.
    """
    missing: dict[ParentalConfiguration, None] = {}
    expanded: dict[tuple[str, str], Distribution] = {}
    for key, config in anchor_set.compat.entries.items():
        dist = anchor_set.anchors.get(config)
        if dist is None:
            missing.setdefault(config)
            continue
        expanded[key] = dist
    if missing:
        raise AnchorCompletenessError(list(missing), spec)
    return expanded
