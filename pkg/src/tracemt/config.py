"""Plain-text ``key = value`` configuration and the tolerance table."""
from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

DATA_DIR = Path(__file__).parent / "data"
DEFAULT_TOLERANCES = DATA_DIR / "tolerances.cfg"


def load_kv(path) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


@dataclass(frozen=True)
class Tolerances:
    bounded_ratio: float = 3.0
    divergence_factor: float = 10.0
    r2_min: float = 0.95
    slope_zero_tol: float = 0.15
    slope_rel_tol: float = 0.15
    cert_tol: float = 0.05
    hardy_tol: float = 1e-9
    representation_tol: float = 0.05
    fuglede_tol: float = 1e-3
    kernel_tol: float = 0.02
    rearrange_tol: float = 0.02
    riesz_tol: float = 0.01
    hbw_variation: float = 5.0
    hbw_tol: float = 1e-9
    oneil_tol: float = 1e-9

    @classmethod
    def from_mapping(cls, kv: dict) -> "Tolerances":
        known = {f.name for f in fields(cls)}
        unknown = set(kv) - known
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in kv.items()})

    @classmethod
    def load(cls, path=None) -> "Tolerances":
        return cls.from_mapping(load_kv(DEFAULT_TOLERANCES if path is None else path))

    def items(self):
        return [(f.name, getattr(self, f.name)) for f in fields(self)]
