"""Serialization and search-free replay of witness certificates.

A certificate is a JSON document whose payload suffices to re-verify the
claimed inequalities using window operations alone: shifting, comparing, and
checking agreement radii.  Replay never consults a language table and never
searches; it either reproduces every claimed scale condition or fails.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .words import CenteredWord, scale_of_difference, shift_window

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    checks: int
    failures: tuple[str, ...]

    def summary(self) -> str:
        state = "ok" if self.ok else "FAILED"
        return f"replay {state}: {self.checks} checks, {len(self.failures)} failures"


def certificate_json(payload: dict) -> str:
    """Canonical JSON for a certificate: schema-tagged, sorted, timestamp-free."""
    doc = {"schema": SCHEMA_VERSION, **payload}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def load_certificate(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported certificate schema: {doc.get('schema')!r}")
    return doc


def _windows(items: list[str]) -> list[CenteredWord]:
    return [CenteredWord.parse(t) for t in items]


def _check_separated_tuple(
    windows: list[CenteredWord], g: int, K: int, failures: list[str], label: str
) -> int:
    checks = 0
    shifted = [shift_window(w, g) for w in windows]
    for i in range(len(shifted)):
        for j in range(i + 1, len(shifted)):
            checks += 1
            if not scale_of_difference(shifted[i], shifted[j]).separated_within(K):
                failures.append(f"{label}: pair ({i},{j}) not separated at shift {g}")
    return checks


def _replay_sensitivity_entry(entry: dict, K: int, failures: list[str]) -> int:
    windows = _windows(entry["windows"])
    cylinder = entry["cylinder"]
    half = len(cylinder) // 2
    checks = 0
    for idx, w in enumerate(windows):
        checks += 1
        if w.central(half) != cylinder:
            failures.append(f"window {idx} does not carry the cylinder {cylinder!r}")
    block_half = entry.get("block_half")
    g = entry["shift"]
    if block_half is None:
        checks += _check_separated_tuple(windows, g, K, failures, f"cylinder {cylinder!r}")
    else:
        for t in range(g - block_half, g + block_half + 1):
            checks += _check_separated_tuple(windows, t, K, failures, f"cylinder {cylinder!r}")
    matrix = entry.get("scale_matrix")
    if matrix:
        shifted = [shift_window(w, g) for w in windows]
        for i, row in enumerate(matrix):
            for j, claimed in enumerate(row):
                if i == j:
                    continue
                checks += 1
                got = scale_of_difference(shifted[i], shifted[j]).first_difference
                if got != claimed:
                    failures.append(f"scale matrix mismatch at ({i},{j}): {got} != {claimed}")
    return checks


def _replay_proximal(doc: dict, failures: list[str]) -> int:
    x = CenteredWord.parse(doc["x"])
    y = CenteredWord.parse(doc["y"])
    g, K = doc["g"], doc["K"]
    if not scale_of_difference(shift_window(x, g), shift_window(y, g)).within(K):
        failures.append(f"shift {g} does not bring the pair within 2^-{K}")
    return 1


def _replay_regional(doc: dict, failures: list[str]) -> int:
    originals = _windows(doc["originals"])
    perturbed = _windows(doc["perturbed"])
    g, K = doc["g"], doc["K"]
    checks = 0
    for i, (x, xp) in enumerate(zip(originals, perturbed)):
        checks += 1
        if not scale_of_difference(x, xp).within(K):
            failures.append(f"perturbed point {i} is not within 2^-{K} of the original")
    shifted = [shift_window(w, g) for w in perturbed]
    for i in range(len(shifted)):
        for j in range(i + 1, len(shifted)):
            checks += 1
            if not scale_of_difference(shifted[i], shifted[j]).within(K):
                failures.append(f"pair ({i},{j}) not within 2^-{K} at shift {g}")
    return checks


def _replay_cover_falsified(doc: dict, failures: list[str]) -> int:
    checks = 0
    K = doc["K"]
    for stage in doc["stages"]:
        windows = _windows(stage["windows"])
        for t in range(stage["gap_start"], stage["gap_end"] + 1):
            checks += _check_separated_tuple(
                windows, t, K, failures, f"gap stage W={stage['delta_radius']}"
            )
    return checks


def replay(doc: dict) -> ReplayResult:
    """Re-verify a certificate's inequalities; no search, windows only."""
    kind = doc["kind"]
    failures: list[str] = []
    checks = 0
    if kind == "proximal-pair":
        checks = _replay_proximal(doc, failures)
    elif kind == "regional-proximal":
        checks = _replay_regional(doc, failures)
    elif kind in ("m-sensitivity", "block-m-sensitivity"):
        K = doc["K"]
        for entry in doc["cylinders"]:
            checks += _replay_sensitivity_entry(entry, K, failures)
    elif kind == "eq-point-counterexample":
        # each stage's "cylinder" is the base point's central word at that
        # delta radius, so the entry replay also pins agreement with the point
        K = doc["K"]
        for stage in doc["stages"]:
            checks += _replay_sensitivity_entry(stage, K, failures)
    elif kind == "cover-falsified":
        checks = _replay_cover_falsified(doc, failures)
    elif kind == "cover-witness":
        checks = 1  # universal claim: the payload is a summary, nothing to replay
    else:
        raise ValueError(f"unknown certificate kind: {kind!r}")
    return ReplayResult(not failures, checks, tuple(failures))
