"""The weighted-sum table generator.

Every CPT row is the weight-blend of the n anchor distributions selected by
that row's parental states: row[l] = sum_j w_j * anchor(Y_j, s_j)[l]. Being
a convex combination of distributions, each row is itself a distribution;
we assert that instead of renormalizing, so an upstream bug surfaces as an
error rather than being silently repaired.

Summation runs in parent order, fixed, so repeated runs are bit-identical.
When all n lookups land on one shared anchor (the row's configuration is
itself a compatible configuration for every parent), the anchor is returned
verbatim: the blend equals it algebraically because the weights sum to 1,
and returning the stored row keeps the identity exact in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .elicit import AnchorCompletenessError, AnchorSet, resolve_compatible
from .model import (
    Cpt,
    Distribution,
    NetworkSpec,
    ParentalConfiguration,
    enumerate_configurations,
)

#: One anchor contribution to a row: (compatible configuration, weight).
AnchorContribution = tuple[ParentalConfiguration, float]


@dataclass(frozen=True, eq=False)
class GenerationResult:
    """A generated CPT plus, per row, the n weighted anchors that built it
    (in parent order, weights are the parent weights)."""

    cpt: Cpt
    per_row_anchors: Mapping[ParentalConfiguration, tuple[AnchorContribution, ...]]


def row_contributions(
    spec: NetworkSpec, anchor_set: AnchorSet, config: ParentalConfiguration
) -> list[AnchorContribution]:
    contributions = []
    for parent in spec.parents:
        state = parent.states[config[parent.name]]
        contributions.append(
            (resolve_compatible(anchor_set.compat, parent.name, state), parent.weight)
        )
    return contributions


def generate_row(
    spec: NetworkSpec, anchor_set: AnchorSet, config: ParentalConfiguration
) -> Distribution:
    """The blended distribution for one parental configuration."""
    contributions = row_contributions(spec, anchor_set, config)
    return _blend(spec, anchor_set, contributions)


def _blend(
    spec: NetworkSpec,
    anchor_set: AnchorSet,
    contributions: list[AnchorContribution],
) -> Distribution:
    first = contributions[0][0]
    if all(c == first for c, _ in contributions):
        try:
            return anchor_set.anchors[first]
        except KeyError:
            raise AnchorCompletenessError([first], spec) from None

    rows = []
    missing: dict[ParentalConfiguration, None] = {}
    for anchor_config, weight in contributions:
        dist = anchor_set.anchors.get(anchor_config)
        if dist is None:
            missing.setdefault(anchor_config)
            continue
        rows.append((weight, dist.values))
    if missing:
        raise AnchorCompletenessError(list(missing), spec)

    values = []
    for l in range(spec.child_state_count):
        acc = 0.0
        for weight, anchor_values in rows:
            acc += weight * anchor_values[l]
        values.append(acc)
    return Distribution(values)


def generate_cpt(spec: NetworkSpec, anchor_set: AnchorSet) -> GenerationResult:
    """One row per enumerated configuration; deterministic."""
    rows: dict[ParentalConfiguration, Distribution] = {}
    per_row: dict[ParentalConfiguration, tuple[AnchorContribution, ...]] = {}
    for config in enumerate_configurations(spec):
        contributions = row_contributions(spec, anchor_set, config)
        rows[config] = _blend(spec, anchor_set, contributions)
        per_row[config] = tuple(contributions)
    return GenerationResult(cpt=Cpt(spec=spec, rows=rows), per_row_anchors=per_row)


#: A secondary peak at least this fraction of the tallest peak counts as
#: competing; below that the row reads as singly dominated.
COMPETING_MODE_RATIO = 0.5


def modality_profile(dist: Distribution) -> list[int]:
    """Indices of the local maxima over the ordered state axis.

    An entry is a mode when it is >= both neighbors (boundary entries
    compare against their single neighbor). A plateau of equal values
    counts once, at the run's first index; a uniform distribution is a
    single plateau and reports one mode at index 0.
    """
    values = dist.values
    modes: list[int] = []
    start = 0
    while start < len(values):
        end = start
        while end + 1 < len(values) and values[end + 1] == values[start]:
            end += 1
        left_ok = start == 0 or values[start - 1] < values[start]
        right_ok = end == len(values) - 1 or values[end + 1] < values[start]
        if left_ok and right_ok:
            modes.append(start)
        start = end + 1
    return modes


def competing_modes(
    dist: Distribution, *, ratio: float = COMPETING_MODE_RATIO
) -> list[int]:
    """The modes whose height is at least ``ratio`` of the tallest mode.

    Two or more competing modes mean the row is pulled toward conflicting
    outcomes; one tall peak with a distant minor bump is not a conflict.
    """
    modes = modality_profile(dist)
    top = max(dist.values[i] for i in modes)
    return [i for i in modes if dist.values[i] >= ratio * top]
