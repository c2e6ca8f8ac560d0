"""Geometric verification of generated tables.

Every table row is a weight-blend of its per-row anchors, so it must lie in
their convex hull; and on the chart the blend geometry is flat, so the
connection coefficients at each row must vanish at alpha = -1. Both facts
are checked numerically, row by row. A row that was edited or corrupted
after generation escapes the hull and fails.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elicit import AnchorSet
from .engine import GenerationResult, generate_cpt, row_contributions
from .geometry import connection_coefficients, hull_membership, to_mixture
from .model import Cpt, NetworkSpec, ParentalConfiguration, enumerate_configurations

#: Max L-inf hull-reconstruction error for a row to pass.
HULL_TOLERANCE = 1e-9
#: Max |Gamma_{ij,k}| at alpha = -1 for the flatness check to pass.
FLATNESS_TOLERANCE = 1e-12


@dataclass(frozen=True)
class RowVerification:
    configuration: ParentalConfiguration
    hull_residual: float
    hull_member: bool
    flatness_max: float
    clamped: bool

    @property
    def ok(self) -> bool:
        return self.hull_member and self.flatness_max <= FLATNESS_TOLERANCE


@dataclass(frozen=True)
class VerificationReport:
    rows: tuple[RowVerification, ...]
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def max_hull_residual(self) -> float:
        return max((r.hull_residual for r in self.rows), default=0.0)

    @property
    def max_flatness(self) -> float:
        return max((r.flatness_max for r in self.rows), default=0.0)

    @property
    def clamped_count(self) -> int:
        return sum(r.clamped for r in self.rows)

    def summary_lines(self) -> list[str]:
        lines = [
            f"rows checked: {len(self.rows)}",
            f"max hull residual: {self.max_hull_residual:.3e} "
            f"(tolerance {HULL_TOLERANCE:.0e})",
            f"max connection coefficient at alpha=-1: {self.max_flatness:.3e} "
            f"(tolerance {FLATNESS_TOLERANCE:.0e})",
            f"rows clamped off the simplex boundary: {self.clamped_count}",
        ]
        lines.extend(f"FAIL: {f}" for f in self.failures)
        return lines


def verify_rows(
    spec: NetworkSpec,
    anchor_set: AnchorSet,
    cpt: Cpt,
    *,
    hull_tol: float = HULL_TOLERANCE,
    flat_tol: float = FLATNESS_TOLERANCE,
) -> VerificationReport:
    """Check every row of ``cpt`` against the anchors selected by its
    parental states: hull membership plus flatness at the row's chart point."""
    rows: list[RowVerification] = []
    failures: list[str] = []
    expected = enumerate_configurations(spec)
    if set(cpt.rows) != set(expected):
        failures.append(
            f"table has {len(cpt.rows)} rows; expected the "
            f"{len(expected)} enumerated configurations")
        return VerificationReport(rows=tuple(rows), failures=tuple(failures))

    for config in expected:
        q = cpt.rows[config]
        anchors = [
            anchor_set.anchors[c]
            for c, _ in row_contributions(spec, anchor_set, config)
        ]
        certificate = hull_membership(q, anchors, tol=hull_tol)
        point = to_mixture(q, clamp=True)
        flatness = float(np.abs(connection_coefficients(point, -1.0).gamma).max())
        row = RowVerification(
            configuration=config,
            hull_residual=certificate.residual,
            hull_member=certificate.member,
            flatness_max=flatness,
            clamped=point.clamped,
        )
        rows.append(row)
        if not certificate.member:
            failures.append(
                f"row {{{config.describe(spec)}}} lies outside its anchor hull "
                f"(residual {certificate.residual:.3e})")
        if flatness > flat_tol:
            failures.append(
                f"row {{{config.describe(spec)}}} breaks flatness "
                f"(max coefficient {flatness:.3e})")
    return VerificationReport(rows=tuple(rows), failures=tuple(failures))


def verify_generation(
    spec: NetworkSpec,
    anchor_set: AnchorSet,
    result: GenerationResult | None = None,
    *,
    hull_tol: float = HULL_TOLERANCE,
    flat_tol: float = FLATNESS_TOLERANCE,
) -> VerificationReport:
    """Generate (unless a result is supplied) and verify all rows."""
    if result is None:
        result = generate_cpt(spec, anchor_set)
    return verify_rows(spec, anchor_set, result.cpt,
                       hull_tol=hull_tol, flat_tol=flat_tol)
