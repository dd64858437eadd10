"""Default windows and sample grids for the experiment scripts."""

from dataclasses import dataclass, field
from fractions import Fraction


@dataclass(frozen=True)
class OracleConfig:
    window: int = 6
    inner: int = 3
    # a second, wider window used to confirm the projected dimension is stable
    confirm_window: int = 8


@dataclass(frozen=True)
class ModuleConfig:
    window: int = 5
    values: tuple = (Fraction(0), Fraction(1), Fraction(1, 2))
    vir_order: int = 3
    mixed_order: int = 2


@dataclass(frozen=True)
class SweepConfig:
    oracle: OracleConfig = field(default_factory=OracleConfig)
    modules: ModuleConfig = field(default_factory=ModuleConfig)
    jacobi_window: int = 6
