"""Named reference systems with frozen expectations, plus random sampling."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from importlib import resources

from .substitution import (
    RegimeError,
    StabilizationError,
    Substitution,
    SubstitutionSystem,
    aperiodicity_check,
    height,
    is_primitive,
)
from .toeplitz import Stage, ToeplitzSkeleton, ToeplitzSystem, doubling_skeleton, rank_family_skeleton
from .verdicts import VerdictStatus


@dataclass(frozen=True)
class SystemSpec:
    """One catalog entry: construction recipe plus golden expectations."""

    name: str
    kind: str  # substitution | toeplitz | documentation
    params: dict = field(default_factory=dict)
    golden: dict = field(default_factory=dict)  # rank -> (value, provenance)
    verify: bool = False
    note: str = ""


def _parse_catalog(text: str) -> dict[str, SystemSpec]:
    specs: dict[str, SystemSpec] = {}
    current: dict | None = None

    def flush() -> None:
        if current is not None:
            spec = SystemSpec(
                current["name"],
                current.get("kind", "substitution"),
                current.get("params", {}),
                current.get("golden", {}),
                current.get("verify", False),
                current.get("note", ""),
            )
            specs[spec.name] = spec

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[system ") and line.endswith("]"):
            flush()
            current = {"name": line[len("[system ") : -1].strip(), "params": {}, "golden": {}}
            continue
        if current is None:
            raise ValueError(f"catalog line outside a system block: {line!r}")
        if line.startswith("rule "):
            current["params"].setdefault("rules", []).append(line[len("rule ") :])
        elif line.startswith("golden "):
            body = line[len("golden ") :]
            lhs, _, rhs = body.partition("=")
            parts = rhs.split()
            current["golden"][lhs.strip()] = (int(parts[0]), parts[1])
        elif line.startswith("note ="):
            current["note"] = line.partition("=")[2].strip()
        elif line.startswith("verify ="):
            current["verify"] = line.partition("=")[2].strip() == "yes"
        elif line.startswith("kind ="):
            current["kind"] = line.partition("=")[2].strip()
        else:
            key, eq, value = line.partition("=")
            if not eq:
                raise ValueError(f"bad catalog line: {line!r}")
            current["params"][key.strip()] = value.strip()
    flush()
    return specs


def _load_specs() -> dict[str, SystemSpec]:
    text = resources.files("shiftrank.data").joinpath("catalog.txt").read_text()
    return _parse_catalog(text)


_SPECS: dict[str, SystemSpec] | None = None
_SYSTEMS: dict[str, object] = {}


def specs() -> dict[str, SystemSpec]:
    global _SPECS
    if _SPECS is None:
        _SPECS = _load_specs()
    return _SPECS


def names() -> tuple[str, ...]:
    return tuple(specs())


def get(name: str) -> SystemSpec:
    try:
        return specs()[name]
    except KeyError:
        raise KeyError(f"unknown system {name!r}; see `catalog` for the inventory") from None


def system_for(name: str):
    """Instantiate (and cache) the runnable system behind a catalog entry."""
    if name in _SYSTEMS:
        return _SYSTEMS[name]
    spec = get(name)
    if spec.kind == "substitution":
        sub = Substitution.from_text("\n".join(spec.params["rules"]))
        system = SubstitutionSystem(spec.name, sub)
    elif spec.kind == "toeplitz":
        builder = spec.params.get("builder")
        depth = int(spec.params.get("depth", 16))
        if builder == "doubling":
            skeleton = doubling_skeleton(depth)
        elif builder == "rank-family":
            skeleton = rank_family_skeleton(int(spec.params["r"]), depth)
        else:
            raise ValueError(f"unknown toeplitz builder {builder!r}")
        system = ToeplitzSystem(spec.name, skeleton)
    elif spec.kind == "documentation":
        raise RegimeError(
            f"{name} is a documentation-only entry (nonconstructive family); "
            "it has no finite presentation to compute on"
        )
    else:
        raise ValueError(f"unknown system kind {spec.kind!r}")
    _SYSTEMS[name] = system
    return system


def custom_substitution(rules_text: str, name: str = "custom") -> SubstitutionSystem:
    """An ad-hoc system from the same rules format the catalog file uses."""
    return SubstitutionSystem(name, Substitution.from_text(rules_text))


def toeplitz_from_skeleton(
    periods: list[int],
    fillers: dict[int, list[tuple[int, str]]],
    name: str = "custom-toeplitz",
    prefix_length: int = 1 << 15,
) -> ToeplitzSystem:
    """Assemble a Toeplitz system from explicit periods and per-stage fills.

    ``fillers[p]`` lists (residue, symbol) pairs filled at the stage with
    period ``p``; stages must nest through divisibility, fills must not
    collide with earlier stages, and every position of the generated prefix
    must be filled by some stage, all of which the skeleton validates.
    """
    stages = tuple(Stage(p, tuple(fillers.get(p, ()))) for p in periods)
    return ToeplitzSystem(name, ToeplitzSkeleton(stages), prefix_length)


def random_exact_substitutions(
    count: int,
    seed: int = 20260811,
    alphabet_max: int = 3,
    q_max: int = 4,
) -> list[Substitution]:
    """Sample primitive, aperiodic, height-1 constant-length substitutions.

    Candidates are drawn uniformly over rule tables and filtered through the
    structural predicates; the flatness scan of the aperiodicity check runs
    to length 48, deep enough to catch every periodic fixed point in this
    parameter range.  Deterministic for a fixed seed.
    """
    rng = random.Random(seed)
    out: list[Substitution] = []
    while len(out) < count:
        size = rng.randint(2, alphabet_max)
        q = rng.randint(2, q_max)
        letters = "0123456789"[:size]
        rules = tuple("".join(rng.choice(letters) for _ in range(q)) for _ in range(size))
        s = Substitution(rules)
        if not is_primitive(s):
            continue
        try:
            if aperiodicity_check(s, n_max=48).status is not VerdictStatus.WITNESSED:
                continue
            if height(s) != 1:
                continue
        except (StabilizationError, RegimeError):
            continue
        out.append(s)
    return out
