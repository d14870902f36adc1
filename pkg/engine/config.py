"""
Logic:
- Owns physical parameters: unit operation times, base error rates, improvement factors
- Describes the architecture under evaluation (SDQC, QCCD, Photonic DQC)
- Loads scenario lists from a JSON document with sections times/errors/architecture/sweep
- Resolves the config path from --config, then the SDQC_COST_CONFIG environment variable
- Applies --set dotted overrides before validation; unknown keys are rejected
- All models are frozen, so scenarios can be shared across concurrent evaluations
"""

import itertools
import json
import logging
import os
from enum import Enum
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from engine.exceptions import ConfigError, DomainError

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "SDQC_COST_CONFIG"
SUPPORTED_DISTANCES = (3, 5, 7, 9, 11, 13)


class ArchitectureKind(str, Enum):
    SDQC = "SDQC"
    QCCD = "QCCD"
    PHOTONIC = "PhotonicDQC"

    @property
    def is_distributed(self):
        return self is not ArchitectureKind.QCCD

    @classmethod
    def parse(cls, text):
        """
        Input: architecture name as typed on the command line or in a config file
        Process: Case-insensitive lookup that also accepts short aliases
        Output: ArchitectureKind
        """
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower().replace("_", "").replace("-", "").replace(" ", "")
        aliases = {
            "sdqc": cls.SDQC,
            "qccd": cls.QCCD,
            "photonic": cls.PHOTONIC,
            "photonicdqc": cls.PHOTONIC,
            "pdqc": cls.PHOTONIC,
        }
        if key not in aliases:
            raise DomainError(f"unknown architecture {text!r}; expected sdqc, qccd or photonic")
        return aliases[key]


class FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)


class OperationTimes(FrozenModel):
    """Unit operation durations in microseconds."""

    single_qubit_gate: float = Field(5.0, gt=0)
    tq_slope: float = Field(13.33, gt=0)
    tq_offset: float = Field(54.0, ge=0)
    tq_floor: float = Field(100.0, ge=0)
    measurement: float = Field(400.0, gt=0)
    cooling: float = Field(300.0, gt=0)
    photonic_entangling_mean: float = Field(4000.0, gt=0)
    stable_transport_per_unit: float = Field(46.9, gt=0)
    fast_transport_per_unit: float = Field(4.6, gt=0)
    split: float = Field(128.0, gt=0)
    merge: float = Field(128.0, gt=0)
    physical_swap: float = Field(200.0, gt=0)
    # micrometres between adjacent trap sites
    unit_distance: float = Field(375.0, gt=0)


class ErrorRates(FrozenModel):
    """Base error probabilities; p_junction is per junction traversal, p_idle_per_ms per millisecond."""

    p_sq: float = Field(1.5e-7, ge=0, lt=1)
    p_tq: float = Field(3.0e-4, ge=0, lt=1)
    p_meas: float = Field(9.0e-5, ge=0, lt=1)
    p_pe: float = Field(2.85e-2, ge=0, lt=1)
    p_junction: float = Field(1.0e-5, ge=0, lt=1)
    p_idle_per_ms: float = Field(3.7e-6, ge=0, lt=1)


class ImprovementFactors(FrozenModel):
    lam: float = Field(1.0, gt=0, alias="lambda")
    lambda_se: Optional[float] = Field(None, gt=0)
    # False keeps idle decoherence at its base rate under the global factor
    scale_idle: bool = True

    @model_validator(mode="before")
    @classmethod
    def _default_lambda_se(cls, data):
        if isinstance(data, dict) and data.get("lambda_se") is None:
            data = dict(data)
            data["lambda_se"] = data.get("lambda", data.get("lam", 1.0))
        return data


class ArchitectureSpec(FrozenModel):
    kind: ArchitectureKind = ArchitectureKind.SDQC
    purification_enabled: bool = False
    chain_capacity: int = Field(60, ge=2)
    # Bell-measurement detection leaves the syndrome-round critical path (DQC only)
    pipeline_detection: bool = False
    photonic_interfaces: int = Field(1, ge=1)

    @field_validator("kind", mode="before")
    @classmethod
    def _parse_kind(cls, value):
        return value if isinstance(value, ArchitectureKind) else ArchitectureKind.parse(value)

    @model_validator(mode="after")
    def _purification_is_sdqc_only(self):
        if self.purification_enabled and self.kind is not ArchitectureKind.SDQC:
            raise ValueError("purification_enabled is only available for SDQC")
        return self


class Scenario(FrozenModel):
    architecture: ArchitectureSpec = ArchitectureSpec()
    code_distance: int = 13
    n_logical: int = Field(132, ge=1)
    improvements: ImprovementFactors = ImprovementFactors()
    times: OperationTimes = OperationTimes()
    errors: ErrorRates = ErrorRates()

    @field_validator("code_distance")
    @classmethod
    def _odd_distance(cls, value):
        if value < 3 or value % 2 == 0:
            raise ValueError("code_distance must be an odd integer >= 3")
        return value

    @model_validator(mode="after")
    def _chains_fit_capacity(self):
        from engine.datasets import CHAIN_MAPPING
        from engine.layout import chain_mapping, check_capacity

        # untabulated distances fail later with MappingNotTabulatedError
        if self.kind.is_distributed and self.code_distance in CHAIN_MAPPING:
            check_capacity(chain_mapping(self.kind, self.code_distance), self.architecture.chain_capacity)
        return self

    @property
    def kind(self):
        return self.architecture.kind

    @property
    def effective_errors(self):
        """Error rates after the global improvement factor."""
        scaled = apply_improvement(self.errors, self.improvements.lam)
        if not self.improvements.scale_idle:
            scaled = scaled.model_copy(update={"p_idle_per_ms": self.errors.p_idle_per_ms})
        return scaled

    def with_updates(self, **changes):
        """
        Input: top-level field replacements (nested models or plain dicts)
        Process: Re-validates the merged document so invariants still hold
        Output: New Scenario
        """
        data = self.model_dump(by_alias=True)
        for key, value in changes.items():
            data[key] = value.model_dump(by_alias=True) if isinstance(value, BaseModel) else value
        return Scenario.model_validate(data)

    def with_architecture(self, kind, **changes):
        """Same scenario on another architecture; purification is dropped where unavailable."""
        architecture = self.architecture.model_dump()
        architecture["kind"] = ArchitectureKind.parse(kind)
        if architecture["kind"] is not ArchitectureKind.SDQC:
            architecture["purification_enabled"] = False
        return self.with_updates(architecture=architecture, **changes)

    def with_lambda(self, lam, lambda_se=None):
        improvements = {
            "lambda": lam,
            "lambda_se": lambda_se,
            "scale_idle": self.improvements.scale_idle,
        }
        return self.with_updates(improvements=improvements)

    def to_json(self):
        return self.model_dump_json(by_alias=True)

    @classmethod
    def from_json(cls, text):
        return cls.model_validate_json(text)


class SweepSection(FrozenModel):
    architectures: Optional[List[ArchitectureKind]] = None
    code_distances: List[int] = Field(default_factory=lambda: [13], min_length=1)
    n_logical: List[int] = Field(default_factory=lambda: [132], min_length=1)
    lambdas: List[float] = Field(default_factory=lambda: [1.0], min_length=1)
    lambda_se: Optional[float] = Field(None, gt=0)
    scale_idle: bool = True

    @field_validator("architectures", mode="before")
    @classmethod
    def _parse_kinds(cls, value):
        if value is None:
            return None
        return [v if isinstance(v, ArchitectureKind) else ArchitectureKind.parse(v) for v in value]


class ConfigFile(FrozenModel):
    times: OperationTimes = OperationTimes()
    errors: ErrorRates = ErrorRates()
    architecture: ArchitectureSpec = ArchitectureSpec()
    sweep: SweepSection = SweepSection()


def apply_improvement(rates, lam):
    """
    Input: ErrorRates and an improvement factor
    Process: Divides every error probability by the factor
    Output: New ErrorRates
    """
    if not lam > 0:
        raise DomainError(f"improvement factor must be positive, got {lam}")
    scaled = {name: value / lam for name, value in rates.model_dump().items()}
    for name, value in scaled.items():
        if value >= 1:
            raise DomainError(f"{name} = {value:.4g} is not a probability at improvement factor {lam}")
    return ErrorRates.model_construct(**scaled)


def resolve_config_path(cli_path=None):
    """
    Input: path given on the command line, possibly None
    Process: Falls back to the SDQC_COST_CONFIG environment variable
    Output: Path or None when built-in defaults should be used
    """
    if cli_path:
        return Path(cli_path)
    env_path = os.environ.get(CONFIG_ENV_VAR)
    return Path(env_path) if env_path else None


def parse_override(assignment):
    """Split "section.key=value" into (["section", "key"], value), decoding JSON values."""
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r} is not of the form key=value")
    key, raw = assignment.split("=", 1)
    path = [part for part in key.strip().split(".") if part]
    if not path:
        raise ConfigError(f"override {assignment!r} has an empty key")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw.strip()
    return path, value


def apply_overrides(document, assignments):
    """
    Input: raw config dict and a list of "dotted.key=value" strings
    Process: Writes each value into the nested dict, creating sections as needed
    Output: The updated dict
    """
    for assignment in assignments or []:
        path, value = parse_override(assignment)
        node = document
        for part in path[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(f"override {assignment!r}: {part!r} is not a section")
            node = child
        node[path[-1]] = value
    return document


def _read_document(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    if not text.strip():
        return {}
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(document, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return document


def _describe_validation(error):
    parts = []
    for item in error.errors():
        field = ".".join(str(loc) for loc in item["loc"]) or "<root>"
        parts.append(f"{field}: {item['msg']}")
    return "; ".join(parts)


def load_config(path=None, overrides=None):
    """
    Input: config file path (None for defaults) and optional --set overrides
    Process: Parses, validates and expands the sweep section into scenarios
             (architecture outer, then distance, n_logical, lambda)
    Output: List of fully resolved Scenario objects
    """
    try:
        document = _read_document(path) if path is not None else {}
        document = apply_overrides(document, overrides)
        config = ConfigFile.model_validate(document)
    except ValidationError as e:
        message = _describe_validation(e)
        logger.error(f"Error validating config: {message}")
        raise ConfigError(message) from e
    except ConfigError as e:
        logger.error(f"Error loading config: {str(e)}")
        raise

    sweep = config.sweep
    kinds = sweep.architectures or [config.architecture.kind]
    scenarios = []
    try:
        for kind, d, n_logical, lam in itertools.product(
            kinds, sweep.code_distances, sweep.n_logical, sweep.lambdas
        ):
            architecture = config.architecture.model_dump()
            architecture["kind"] = kind
            scenarios.append(Scenario.model_validate({
                "architecture": architecture,
                "code_distance": d,
                "n_logical": n_logical,
                "improvements": {
                    "lambda": lam,
                    "lambda_se": sweep.lambda_se,
                    "scale_idle": sweep.scale_idle,
                },
                "times": config.times.model_dump(),
                "errors": config.errors.model_dump(),
            }))
    except ValidationError as e:
        message = _describe_validation(e)
        logger.error(f"Error validating scenario: {message}")
        raise ConfigError(message) from e

    logger.info(f"Loaded {len(scenarios)} scenario(s) from {path or 'defaults'}")
    return scenarios
