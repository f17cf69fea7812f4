"""The rank-vs-oracle consistency loop.

For a system: compute the rank report, derive the predicted multivariate
profile, then run the sensitivity searches for each tuple size and grade
every cell.  A witness where sensitivity is predicted is consistent; a
witness where equicontinuity is predicted contradicts the prediction; an
exhausted search where sensitivity is predicted is inconclusive, because a
bigger budget might still find the witness.
"""

from __future__ import annotations

from dataclasses import dataclass

from .oracles import SearchBudget, _aggregate_from_scans, block_sensitivity_scan, sensitivity_scan
from .ranks import MultivariateProfile, RankReport, predict_profile, rank_report
from .verdicts import Verdict

CONSISTENT = "CONSISTENT"
INCONSISTENT = "INCONSISTENT"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Cell:
    m: int
    test: str  # "sensitivity" | "block"
    predicted_positive: bool
    verdict: Verdict
    label: str

    def to_payload(self) -> dict:
        return {
            "m": self.m,
            "test": self.test,
            "predicted_positive": self.predicted_positive,
            "verdict": self.verdict.status.value,
            "label": self.label,
        }


@dataclass(frozen=True)
class VerifyReport:
    system: str
    ranks: RankReport
    profile: MultivariateProfile
    cells: tuple[Cell, ...]

    @property
    def consistent(self) -> bool:
        return all(c.label != INCONSISTENT for c in self.cells)

    def witnessed_certificates(self) -> list[dict]:
        return [
            c.verdict.certificate
            for c in self.cells
            if c.verdict.witnessed and c.verdict.certificate
        ]

    def to_payload(self) -> dict:
        return {
            "system": self.system,
            "ranks": self.ranks.to_payload(),
            "profile": self.profile.to_payload(),
            "cells": [c.to_payload() for c in self.cells],
            "consistent": self.consistent,
        }


def _grade(predicted_positive: bool, verdict: Verdict) -> str:
    if verdict.witnessed:
        return CONSISTENT if predicted_positive else INCONSISTENT
    return INCONCLUSIVE if predicted_positive else CONSISTENT


def verify_system(
    system,
    m_max: int = 5,
    budget: SearchBudget | None = None,
    depth_max: int = 4,
    radius_max: int = 64,
    block_scale: int = 1,
) -> VerifyReport:
    """Grade sensitivity and block-sensitivity cells against the rank predictions.

    Sensitivity cells run at the budget's scale.  Block cells run at the
    finest scale (``block_scale`` = 1 by default): block separation at a
    scale comparable to the cylinder radius admits spurious desk witnesses
    that the coincidence rank only rules out in the limit, while at scale
    one the searches track the rank on every reference system.
    """
    budget = budget or SearchBudget()
    ranks = rank_report(system, depth_max, radius_max)
    profile = predict_profile(ranks, m_max)
    sens_scans = sensitivity_scan(system, m_max, budget.K, budget)
    block_scans = block_sensitivity_scan(system, m_max, block_scale, budget.B, budget)
    cells = []
    for m in range(2, m_max + 1):
        row = profile.row(m)
        sens = _aggregate_from_scans(
            system,
            sens_scans,
            m,
            budget.K,
            budget,
            "m-sensitivity",
            f"{m}-sensitivity at scale 2^-{budget.K} on {system.name}",
        )
        cells.append(
            Cell(m, "sensitivity", row.m_sensitive, sens.aggregate, _grade(row.m_sensitive, sens.aggregate))
        )
        block = _aggregate_from_scans(
            system,
            block_scans,
            m,
            block_scale,
            budget,
            "block-m-sensitivity",
            f"block {m}-sensitivity at scale 2^-{block_scale}, half-length {budget.B}, on {system.name}",
            extra={"B": budget.B},
        )
        cells.append(
            Cell(
                m,
                "block",
                row.compactly_m_sensitive,
                block.aggregate,
                _grade(row.compactly_m_sensitive, block.aggregate),
            )
        )
    return VerifyReport(system.name, ranks, profile, tuple(cells))
