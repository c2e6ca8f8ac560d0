"""Shared builders and independent oracles for the test suite.

The oracles here re-derive expected values through deliberately separate
code paths (raw double loops over the maps, finite differences, explicit
geometry) so the library is never checked against itself.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from cptgen.document import AnchorRecord, CompatEntryRecord, ElicitationDocument
from cptgen.elicit import AnchorSet, CompatibilityMap
from cptgen.model import (
    Distribution,
    NetworkSpec,
    ParentalConfiguration,
    ParentSpec,
)

STATES5 = ("vl", "l", "a", "h", "vh")

#: The five elicited anchor rows of the business-efficiency fixture, keyed
#: by the shared parent state; columns run over the child states in order.
ANCHOR_ROWS = {
    "vl": (0.8, 0.15, 0.03, 0.015, 0.005),
    "l": (0.08, 0.8, 0.08, 0.03, 0.01),
    "a": (0.02, 0.08, 0.8, 0.08, 0.02),
    "h": (0.01, 0.03, 0.08, 0.8, 0.08),
    "vh": (0.005, 0.015, 0.03, 0.15, 0.8),
}

#: Blends of the vh and twice the vl anchor row, frozen from hand
#: computation: 0.5/0.25/0.25 gives twin peaks, 0.1/0.45/0.45 one dominant.
BIMODAL_BLEND = (0.4025, 0.0825, 0.03, 0.0825, 0.4025)
DOMINANT_BLEND = (0.7205, 0.1365, 0.03, 0.0285, 0.0845)


def efficiency_spec(weights=(0.5, 0.25, 0.25)) -> NetworkSpec:
    return NetworkSpec(
        child_name="E",
        child_states=STATES5,
        parents=[
            ParentSpec("PM", STATES5, weights[0]),
            ParentSpec("PT", STATES5, weights[1]),
            ParentSpec("ME", STATES5, weights[2]),
        ],
    )


def random_weights(rng: np.random.Generator, n: int) -> list[float]:
    raw = rng.random(n) + 0.1
    total = raw.sum()
    return [float(w / total) for w in raw]


def random_distribution(rng: np.random.Generator, size: int, floor: float = 0.05) -> Distribution:
    raw = rng.random(size) + floor
    return Distribution([float(v / raw.sum()) for v in raw])


def random_spec(
    rng: np.random.Generator,
    *,
    max_parents: int = 4,
    max_parent_states: int = 5,
    max_child_states: int = 5,
) -> NetworkSpec:
    n = int(rng.integers(1, max_parents + 1))
    weights = random_weights(rng, n)
    parents = []
    for i in range(n):
        k = int(rng.integers(2, max_parent_states + 1))
        parents.append(ParentSpec(
            name=f"P{i}", states=[f"s{j}" for j in range(k)], weight=weights[i]))
    m_plus_1 = int(rng.integers(2, max_child_states + 1))
    return NetworkSpec(
        child_name="C",
        child_states=[f"c{j}" for j in range(m_plus_1)],
        parents=parents,
    )


def random_compat(rng: np.random.Generator, spec: NetworkSpec) -> CompatibilityMap:
    """A random self-consistent map: each key pins its own parent's state
    and draws the remaining parents' states uniformly."""
    entries = {}
    for parent in spec.parents:
        for idx, state in enumerate(parent.states):
            assignment = {
                other.name: int(rng.integers(0, other.state_count))
                for other in spec.parents
            }
            assignment[parent.name] = idx
            entries[(parent.name, state)] = ParentalConfiguration(assignment)
    return CompatibilityMap(entries)


def random_anchor_set(rng: np.random.Generator, spec: NetworkSpec) -> AnchorSet:
    compat = random_compat(rng, spec)
    anchors = {
        config: random_distribution(rng, spec.child_state_count)
        for config in compat.image()
    }
    return AnchorSet(compat=compat, anchors=anchors)


def random_document(rng: np.random.Generator, **spec_kwargs) -> ElicitationDocument:
    spec = random_spec(rng, **spec_kwargs)
    anchor_set = random_anchor_set(rng, spec)
    entries = tuple(
        CompatEntryRecord(parent, state, config)
        for (parent, state), config in anchor_set.compat.entries.items()
    )
    anchors = tuple(
        AnchorRecord(config, dist) for config, dist in anchor_set.anchors.items()
    )
    return ElicitationDocument(
        spec=spec, diagonal=False, compat_entries=entries, anchors=anchors,
    ).require_valid()


def naive_rows(spec: NetworkSpec, anchor_set: AnchorSet) -> dict[ParentalConfiguration, list[float]]:
    """Brute-force re-derivation of every row straight from the raw maps:
    independent double loop, no shortcuts, fsum accumulation."""
    rows = {}
    for combo in itertools.product(*[range(p.state_count) for p in spec.parents]):
        terms_by_outcome: list[list[float]] = [
            [] for _ in range(spec.child_state_count)
        ]
        for j, parent in enumerate(spec.parents):
            state_label = parent.states[combo[j]]
            anchor_config = anchor_set.compat.entries[(parent.name, state_label)]
            anchor = anchor_set.anchors[anchor_config]
            for l in range(spec.child_state_count):
                terms_by_outcome[l].append(parent.weight * anchor.values[l])
        config = ParentalConfiguration(dict(zip(spec.parent_names, combo)))
        rows[config] = [math.fsum(terms) for terms in terms_by_outcome]
    return rows


def outside_point(anchors: list[Distribution], step: float = 1e-3) -> Distribution:
    """A distribution provably outside the anchors' convex hull.

    Pushes the anchor farthest from the centroid further out along the
    same ray; the norm-to-centroid is convex, so no hull point exceeds the
    farthest anchor's and the pushed point cannot be a member. Requires
    anchors far enough from the simplex boundary that the pushed point
    stays a valid distribution.
    """
    matrix = np.array([list(a.values) for a in anchors], dtype=float)
    centroid = matrix.mean(axis=0)
    distances = np.linalg.norm(matrix - centroid, axis=1)
    far = matrix[int(np.argmax(distances))]
    direction = far - centroid
    if np.abs(direction).max() < 1e-9:
        # Degenerate hull (all anchors equal): any distinct direction escapes.
        direction = np.zeros_like(far)
        direction[0], direction[1] = 1.0, -1.0
    direction = direction / np.abs(direction).max()
    pushed = far + step * direction
    if pushed.min() < 0.0:
        raise ValueError("anchors too close to the simplex boundary to push")
    return Distribution([float(v) for v in pushed / pushed.sum()])
