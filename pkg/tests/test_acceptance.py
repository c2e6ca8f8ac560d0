"""Acceptance suite: one test per exit criterion, each printing a PASS/FAIL
line (run with ``pytest tests/test_acceptance.py -v -s`` to see them live).

Tolerances are pinned here and nowhere else: golden blends at 1e-12, hull
membership at 1e-9 in L-inf, flatness at 1e-12, with the stated runtime
budgets.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from cptgen.document import apply_overrides, load_document
from cptgen.engine import generate_cpt
from cptgen.geometry import (
    SimplexPoint,
    connection_coefficients,
    fisher_metric,
    geodesic_point,
    hull_membership,
)
from cptgen.model import ParentalConfiguration
from cptgen.verify import verify_generation
from conftest import fixture_bytes
from support import (
    ANCHOR_ROWS,
    BIMODAL_BLEND,
    DOMINANT_BLEND,
    STATES5,
    naive_rows,
    outside_point,
    random_anchor_set,
    random_document,
    random_spec,
)

CLASH = {"PM": "vh", "PT": "vl", "ME": "vl"}


def report(name: str, ok: bool) -> None:
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}")


def test_golden_blend_reproduction():
    started = time.perf_counter()
    doc = load_document(fixture_bytes("fig1.cpt.json"))
    result = generate_cpt(doc.spec, doc.anchor_set)
    config = ParentalConfiguration.from_labels(doc.spec, CLASH)
    first = result.cpt.rows[config].values

    retuned = apply_overrides(doc, weights={"PM": 0.1, "PT": 0.45, "ME": 0.45})
    second = generate_cpt(retuned.spec, retuned.anchor_set).cpt.rows[config].values
    elapsed = time.perf_counter() - started

    err_first = max(abs(a - b) for a, b in zip(first, BIMODAL_BLEND))
    err_second = max(abs(a - b) for a, b in zip(second, DOMINANT_BLEND))
    ok = err_first <= 1e-12 and err_second <= 1e-12 and elapsed < 1.0
    report("golden-blend-reproduction", ok)
    assert err_first <= 1e-12, first
    assert err_second <= 1e-12, second
    assert elapsed < 1.0, f"took {elapsed:.3f}s"


def test_anchor_identity(efficiency_doc):
    result = generate_cpt(efficiency_doc.spec, efficiency_doc.anchor_set)
    exact = []
    for t, state in enumerate(STATES5):
        config = ParentalConfiguration({"PM": t, "PT": t, "ME": t})
        exact.append(result.cpt.rows[config].values == ANCHOR_ROWS[state])
    ok = all(exact)
    report("anchor-identity", ok)
    assert ok, exact


def test_count_claims(efficiency_doc, training3_doc):
    rows = len(generate_cpt(efficiency_doc.spec, efficiency_doc.anchor_set).cpt.rows)
    five = len(efficiency_doc.anchor_set.anchors)
    seven = len(training3_doc.anchor_set.anchors)
    ok = rows == 125 and five == 5 and seven == 7
    report("count-claims", ok)
    assert rows == 125
    assert five == 5
    assert seven == 7


def test_hull_membership_end_to_end():
    rng = np.random.default_rng(20260809)
    started = time.perf_counter()
    member_failures = 0
    adversarial_misses = 0
    worst_residual = 0.0
    for _ in range(100):
        doc = random_document(
            rng, max_parents=4, max_parent_states=5, max_child_states=5)
        result = generate_cpt(doc.spec, doc.anchor_set)
        verification = verify_generation(doc.spec, doc.anchor_set, result)
        worst_residual = max(worst_residual, verification.max_hull_residual)
        if not all(r.hull_member and r.hull_residual < 1e-9
                   for r in verification.rows):
            member_failures += 1
        # Push a few rows provably outside their anchor hulls: each must fail.
        for config in list(result.cpt.rows)[:3]:
            anchors = [doc.anchor_set.anchors[c]
                       for c, _ in result.per_row_anchors[config]]
            pushed = outside_point(anchors)
            if hull_membership(pushed, anchors).member:
                adversarial_misses += 1
    elapsed = time.perf_counter() - started
    ok = member_failures == 0 and adversarial_misses == 0 and elapsed < 30.0
    report("hull-membership-end-to-end", ok)
    assert member_failures == 0
    assert adversarial_misses == 0
    assert elapsed < 30.0, f"took {elapsed:.1f}s"
    assert worst_residual < 1e-9


def test_flat_connection_suite():
    rng = np.random.default_rng(31415)
    flat_max = 0.0
    asymmetry = 0.0
    min_eigenvalue = float("inf")
    points_by_m: dict[int, list[SimplexPoint]] = {m: [] for m in range(1, 6)}
    for i in range(200):
        m = (i % 5) + 1
        raw = rng.random(m + 1) + 0.05
        probs = raw / raw.sum()
        point = SimplexPoint(tuple(float(v) for v in probs[1:]))
        points_by_m[m].append(point)
        gamma = connection_coefficients(point, -1.0).gamma
        flat_max = max(flat_max, float(np.abs(gamma).max()))
        g = fisher_metric(point).g
        asymmetry = max(asymmetry, float(np.abs(g - g.T).max()))
        min_eigenvalue = min(min_eigenvalue, float(np.linalg.eigvalsh(g).min()))

    second_diff = 0.0
    for m, points in points_by_m.items():
        for a, b in zip(points[::2], points[1::2]):
            grid = np.array([geodesic_point(a, b, t / 100).theta
                             for t in range(101)])
            deltas = grid[2:] - 2.0 * grid[1:-1] + grid[:-2]
            second_diff = max(second_diff, float(np.abs(deltas).max()))

    ok = (flat_max <= 1e-12 and asymmetry <= 1e-12
          and min_eigenvalue > 0.0 and second_diff < 1e-12)
    report("flat-connection-suite", ok)
    assert flat_max <= 1e-12
    assert asymmetry <= 1e-12
    assert min_eigenvalue > 0.0
    assert second_diff < 1e-12


def test_oracle_equivalence():
    rng = np.random.default_rng(271828)
    worst = 0.0
    for _ in range(1000):
        spec = random_spec(
            rng, max_parents=3, max_parent_states=4, max_child_states=4)
        anchor_set = random_anchor_set(rng, spec)
        result = generate_cpt(spec, anchor_set)
        expected = naive_rows(spec, anchor_set)
        for config, row in result.cpt.rows.items():
            worst = max(worst, max(
                abs(a - b) for a, b in zip(row.values, expected[config])))
    ok = worst <= 1e-12
    report("oracle-equivalence", ok)
    assert worst <= 1e-12, worst


def test_primary_suite_is_self_contained():
    # The checks above are golden-table plus property-based by design, and
    # none of the primary package imports the browser frontend.
    import pathlib

    import cptgen

    package_dir = pathlib.Path(cptgen.__file__).parent
    offenders = [
        path.name
        for path in package_dir.glob("*.py")
        if "frontend" in path.read_text()
    ]
    ok = not offenders
    report("golden-plus-property-scope", ok)
    assert not offenders, offenders
