"""
MAPFlow Settings Manager
Run configuration, validation and JSON persistence
"""

import json
import logging
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .errors import ValidationError
from .topology import parse_kind

logger = logging.getLogger(__name__)

ALL_ARCHITECTURES = "ALL"
OUTPUT_FORMATS = ("csv", "svg")
TAU_RULE_NAMES = ("lead", "all")

# Reference configurations A and B, (s, f)
REFERENCE_CONFIGS: Dict[str, Tuple[float, float]] = {
    "A": (0.8, 0.1),
    "B": (0.1, 0.8),
}

# dataclass field -> CLI flag
FLAGS: Dict[str, str] = {
    'arch': '--arch',
    'n_agents': '--agents',
    's': '--s',
    'f': '--f',
    'b': '--b',
    'w': '--w',
    'steps': '--steps',
    'threshold': '--threshold',
    'out': '--out',
    'format': '--format',
    'tau_rule': '--tau-rule',
}


def _coerce(name: str, kind: type, value: Any) -> Any:
    # bool is an int subclass but never a valid number here
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if kind is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    if kind is str and isinstance(value, str):
        return value
    raise ValidationError(f"{name} must be {kind.__name__}, got {value!r}",
                          flag=FLAGS.get(name))


@dataclass
class RunConfig:
    """One simulation request"""
    arch: str = ALL_ARCHITECTURES
    n_agents: int = 5
    s: float = 0.8
    f: float = 0.1
    b: float = 1.0
    w: float = 1.0
    steps: int = 200
    threshold: float = 0.8
    out: str = ""  # empty: print to the console
    format: str = "csv"  # "csv", "svg"
    tau_rule: str = "lead"  # "lead", "all"

    @property
    def e(self) -> float:
        return 1.0 - self.s - self.f

    def problems(self) -> List[Tuple[str, str]]:
        """(flag, message) for every invalid field"""
        found: List[Tuple[str, str]] = []
        if self.arch.upper() != ALL_ARCHITECTURES:
            try:
                parse_kind(self.arch)
            except ValidationError as e:
                found.append((FLAGS['arch'], e.args[0]))
        if self.n_agents < 2:
            found.append((FLAGS['n_agents'], f"n_agents must be >= 2, got {self.n_agents}"))
        for name in ('s', 'f', 'w'):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                found.append((FLAGS[name], f"{name} must lie in [0, 1], got {value}"))
        if self.s + self.f > 1.0:
            found.append((FLAGS['f'], f"fractions exceed unity: s + f = {self.s + self.f:g}"))
        if not self.b > 0:
            found.append((FLAGS['b'], f"b must be positive, got {self.b}"))
        if self.steps < 1:
            found.append((FLAGS['steps'], f"steps must be >= 1, got {self.steps}"))
        if not 0.0 < self.threshold < 1.0:
            found.append((FLAGS['threshold'], f"threshold must lie in (0, 1), got {self.threshold}"))
        if self.format not in OUTPUT_FORMATS:
            found.append((FLAGS['format'], f"format must be one of {OUTPUT_FORMATS}"))
        if self.tau_rule not in TAU_RULE_NAMES:
            found.append((FLAGS['tau_rule'], f"tau rule must be one of {TAU_RULE_NAMES}"))
        return found

    def validate(self) -> List[str]:
        """Describe every invalid field; empty when valid"""
        return [message for _, message in self.problems()]

    def check(self) -> 'RunConfig':
        """Raise ValidationError on the first invalid field"""
        found = self.problems()
        if found:
            flag, message = found[0]
            raise ValidationError(message, flag=flag)
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> 'RunConfig':
        """Build from plain values; unknown keys are ignored, mistyped ones rejected"""
        values = {}
        for f in fields(cls):
            if f.name in data:
                values[f.name] = _coerce(f.name, f.type, data[f.name])
        return cls(**values)

    def to_flags(self) -> List[str]:
        """Command-line flags reproducing this config (--dump-config)"""
        flags: List[str] = []
        for name, flag in FLAGS.items():
            value = getattr(self, name)
            if name == 'out' and not value:
                continue
            flags.extend([flag, repr(value) if isinstance(value, float) else str(value)])
        return flags


class SettingsManager:
    """Loads and saves a RunConfig as JSON"""

    def __init__(self, data_path: str = "data/settings.json",
                 settings: Optional[RunConfig] = None):
        self.data_path = Path(data_path)
        if settings is not None:
            self.settings = settings
        else:
            self.settings = RunConfig()
            self._load()

    def _load(self):
        """Load settings from file; a missing file keeps the defaults"""
        if not self.data_path.exists():
            return
        try:
            with open(self.data_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except ValueError as e:
            raise ValidationError(f"cannot read settings from {self.data_path}: {e}",
                                  flag="--config") from e
        if not isinstance(data, dict):
            raise ValidationError(f"settings in {self.data_path} must be a JSON object",
                                  flag="--config")
        try:
            self.settings = RunConfig.from_dict(data)
        except ValidationError as e:
            raise ValidationError(f"{self.data_path}: {e.args[0]}", flag="--config") from e
        logger.debug("loaded settings from %s", self.data_path)

    def save(self):
        """Save settings to file"""
        self.data_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.data_path, 'w', encoding='utf-8') as f:
            json.dump(asdict(self.settings), f, indent=2, ensure_ascii=False)
        logger.debug("saved settings to %s", self.data_path)
