"""Pipeline configuration: defaults, key=value files, and validation."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    corpus: str = ""
    test_corpus: str = ""            # defaults to corpus when empty
    seeds: list[str] = field(default_factory=list)  # first file is A_M, rest pool into E_K
    seeds_old: str = ""
    seeds_new: str = ""
    c: float = 0.75
    lam: float = 0.1
    alpha: float = 0.95
    min_score: float = 0.0
    coarseness_cutoff: float = 0.2
    embeddings: str = "token-hash"   # or file:<manifest path>
    out: str = "out"
    jobs: int = 1

    def validate(self) -> None:
        if not 0.0 < self.c < 1.0:
            raise ConfigError(f"c must be in (0, 1), got {self.c}")
        if self.lam < 0.0:
            raise ConfigError(f"lambda must be >= 0, got {self.lam}")
        for name in ("alpha", "min_score", "coarseness_cutoff"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if self.embeddings != "token-hash" and not self.embeddings.startswith("file:"):
            raise ConfigError(
                f"embeddings must be token-hash or file:<path>, got {self.embeddings!r}")

    def resolved_test_corpus(self) -> str:
        return self.test_corpus or self.corpus


_FLOAT_KEYS = {"c", "lam", "alpha", "min_score", "coarseness_cutoff"}
_INT_KEYS = {"jobs"}
_ALIASES = {"lambda": "lam"}  # file/flag name -> field name


def load_config(path: str | Path) -> PipelineConfig:
    """Parse a key=value file; '#' starts a comment; seeds may repeat."""
    config = PipelineConfig()
    known = {f.name for f in fields(PipelineConfig)}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = _ALIASES.get(key, key)
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        if key == "seeds":
            config.seeds.append(value)
        elif key in _FLOAT_KEYS:
            try:
                setattr(config, key, float(value))
            except ValueError:
                raise ConfigError(f"{key} expects a number, got {value!r}")
        elif key in _INT_KEYS:
            try:
                setattr(config, key, int(value))
            except ValueError:
                raise ConfigError(f"{key} expects an integer, got {value!r}")
        else:
            setattr(config, key, value)
    config.validate()
    return config


def show_config(config: PipelineConfig) -> str:
    lines = []
    for f in fields(PipelineConfig):
        value = getattr(config, f.name)
        name = "lambda" if f.name == "lam" else f.name
        if f.name == "seeds":
            if value:
                lines.extend(f"seeds={s}" for s in value)
            else:
                lines.append("seeds=")
        else:
            lines.append(f"{name}={value}")
    return "\n".join(lines) + "\n"
