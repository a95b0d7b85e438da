"""Build configuration, irrationality screening, and the artifact format.

An artifact is a canonical JSON document that pins down one symmetric Denjoy
system completely: the validated configuration plus derived constants (exact
tick values for the angles, truncation depths and tail bounds at standard
tolerances). Artifacts with equal configuration are byte-identical; the gap
table is recomputed on load, so the config *is* the artifact.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Union

from .cantor import DEFAULT_EPS, CantorApprox, GapSchedule, resolve_angle
from .circle import DEFAULT_BITS, EPSILON_CMP_TICKS, exact_decimal, fixed_decimal
from .denjoy import DenjoyMap
from .errors import ConfigInvalid
from .planar import AdmissibleMap

SCHEMA_ARTIFACT = "symdenjoy/artifact/1"

# Rationality screen: reject tau whose continued fraction terminates within
# this many terms, or shows a partial quotient so large that tau is within a
# hair of a low-denominator rational.
CF_TERM_WINDOW = 64


def continued_fraction_terms(value: Fraction, max_terms: int) -> tuple[list[int], bool]:
    """Leading continued fraction terms of value; True if expansion ended."""
    terms = []
    num, den = value.numerator, value.denominator
    while den and len(terms) < max_terms:
        a, rem = divmod(num, den)
        terms.append(a)
        num, den = den, rem
    return terms, den == 0


def screen_irrational(tau_ticks: int, bits: int) -> None:
    """Reject angles that behave rationally at working precision.

    The resolved angle is an exact rational on the grid; what the screen
    rejects is a continued fraction that terminates early or contains a giant
    partial quotient, both of which mean the map would act like a rational
    rotation before the grid resolution is exhausted.
    """
    if not EPSILON_CMP_TICKS <= tau_ticks <= (1 << bits) - EPSILON_CMP_TICKS:
        raise ConfigInvalid("tau", "coincides with an integer at working precision")
    terms, terminated = continued_fraction_terms(
        Fraction(tau_ticks, 1 << bits), CF_TERM_WINDOW
    )
    if terminated:
        raise ConfigInvalid(
            "tau",
            f"rational at working precision (continued fraction ends after "
            f"{len(terms)} terms)",
        )
    cap = 1 << (bits // 2)
    for i, a in enumerate(terms[1:], start=1):
        if a > cap:
            raise ConfigInvalid(
                "tau",
                f"too close to a rational: continued fraction term {i} is {a}",
            )


@dataclass(frozen=True)
class BuildConfig:
    """Everything needed to rebuild a system deterministically."""

    m: int = 2
    tau: str = "golden"
    phi: str = "0"
    schedule: GapSchedule = field(default_factory=GapSchedule)
    depth: int = 8
    precision_bits: int = DEFAULT_BITS
    pi_cap: Fraction = Fraction(1, 4)

    def validate(self) -> None:
        if not isinstance(self.m, int) or self.m < 1:
            raise ConfigInvalid("m", "symmetry order must be a positive integer")
        if not isinstance(self.depth, int) or self.depth < 1:
            raise ConfigInvalid("depth", "must be a positive integer")
        if self.precision_bits < 64:
            raise ConfigInvalid("precision_bits", "need at least 64 bits")
        if self.schedule.mass != 1:
            raise ConfigInvalid(
                "schedule.mass",
                f"gap lengths must sum to exactly 1, got {self.schedule.mass}",
            )
        if not 0 < self.pi_cap < Fraction(3, 8):
            raise ConfigInvalid("pi_cap", "must lie in (0, 3/8)")
        tau_ticks = self._resolve(self.tau, "tau")
        screen_irrational(tau_ticks, self.precision_bits)
        self._resolve(self.phi, "phi")

    def _resolve(self, text: str, name: str) -> int:
        try:
            return resolve_angle(text, self.precision_bits)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigInvalid(name, f"not a readable angle: {exc}") from exc

    @property
    def tau_ticks(self) -> int:
        return resolve_angle(self.tau, self.precision_bits)

    @property
    def phi_ticks(self) -> int:
        return resolve_angle(self.phi, self.precision_bits)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "tau": self.tau,
            "phi": self.phi,
            "schedule": self.schedule.to_dict(),
            "depth": self.depth,
            "precision_bits": self.precision_bits,
            "pi_cap": str(self.pi_cap),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BuildConfig":
        if not isinstance(data, dict):
            raise ConfigInvalid("config", "expected a JSON object")
        known = {
            "m",
            "tau",
            "phi",
            "schedule",
            "depth",
            "precision_bits",
            "pi_cap",
        }
        unknown = set(data) - known
        if unknown:
            raise ConfigInvalid(sorted(unknown)[0], "unknown config field")
        try:
            kwargs = {}
            if "m" in data:
                kwargs["m"] = int(data["m"])
            if "tau" in data:
                kwargs["tau"] = str(data["tau"])
            if "phi" in data:
                kwargs["phi"] = str(data["phi"])
            if "schedule" in data:
                kwargs["schedule"] = GapSchedule.from_dict(data["schedule"])
            if "depth" in data:
                kwargs["depth"] = int(data["depth"])
            if "precision_bits" in data:
                kwargs["precision_bits"] = int(data["precision_bits"])
            if "pi_cap" in data:
                kwargs["pi_cap"] = Fraction(data["pi_cap"])
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ConfigInvalid("config", f"unreadable field: {exc}") from exc
        return cls(**kwargs)


class System(NamedTuple):
    """A built system: gap table, circle map, planar map."""

    cantor: CantorApprox
    denjoy: DenjoyMap
    planar: AdmissibleMap


def build_system(config: BuildConfig, eps: float = DEFAULT_EPS) -> System:
    cantor = CantorApprox(
        m=config.m,
        tau=config.tau,
        phi=config.phi,
        schedule=config.schedule,
        depth=config.depth,
        bits=config.precision_bits,
        eps=eps,
    )
    denjoy = DenjoyMap(cantor)
    planar = AdmissibleMap(denjoy, pi_cap=config.pi_cap)
    return System(cantor, denjoy, planar)


def canonical_json(obj) -> bytes:
    return (
        json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"
    ).encode("ascii")


def config_hash(config: BuildConfig) -> str:
    return hashlib.sha256(canonical_json(config.to_dict())).hexdigest()


def build_artifact(config: BuildConfig, eps: float = DEFAULT_EPS) -> dict:
    """Validate the config, build once to prove it, emit the artifact."""
    config.validate()
    system = build_system(config, eps)
    cantor = system.cantor
    bits = config.precision_bits
    eps_levels = {}
    for label, tol in (("1e-10", 1e-10), ("1e-20", 1e-20), ("1e-30", 1e-30)):
        depth = config.schedule.truncation_depth(tol)
        eps_levels[label] = {
            "depth": depth,
            "tail_bound": fixed_decimal(config.schedule.tail_bound(depth), 40),
        }
    return {
        "schema": SCHEMA_ARTIFACT,
        "config": config.to_dict(),
        "config_hash": config_hash(config),
        "derived": {
            "tau": exact_decimal(cantor.tau_ticks, bits),
            "tau_ticks_hex": hex(cantor.tau_ticks),
            "phi": exact_decimal(cantor.phi_ticks, bits),
            "phi_ticks_hex": hex(cantor.phi_ticks),
            "table_depth": cantor.depth,
            "table_size": cantor.table_size,
            "epsilon_cmp": exact_decimal(EPSILON_CMP_TICKS, bits),
            "eps_levels": eps_levels,
        },
    }


def write_artifact(path: Union[str, Path], config: BuildConfig, eps: float = DEFAULT_EPS) -> dict:
    artifact = build_artifact(config, eps)
    Path(path).write_bytes(canonical_json(artifact))
    return artifact


def load_artifact(path: Union[str, Path]) -> dict:
    """Parse an artifact document; schema errors become ConfigInvalid.

    Deliberately lenient about the config contents: verification must be able
    to load a defective artifact in order to report which checks fail.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="ascii"))
    except (OSError, ValueError) as exc:
        raise ConfigInvalid("artifact", f"unreadable: {exc}") from exc
    if not isinstance(data, dict) or data.get("schema") != SCHEMA_ARTIFACT:
        raise ConfigInvalid("schema", f"expected {SCHEMA_ARTIFACT}")
    if "config" not in data:
        raise ConfigInvalid("config", "missing")
    return data


def system_from_artifact(artifact: dict, eps: float = DEFAULT_EPS) -> tuple[BuildConfig, System]:
    """Rebuild deterministically from the stored config."""
    config = BuildConfig.from_dict(artifact["config"])
    return config, build_system(config, eps)
