"""Physical constants (CODATA 2018) and lab-unit helpers."""

from dataclasses import dataclass
import math


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34  # J s
    mu_b: float = 9.2740100783e-24  # J/T
    debye: float = 3.33564095e-30  # C m
    k_b: float = 1.380649e-23  # J/K

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar


CONSTANTS = PhysicalConstants()

# lab-unit conversion factors
KV_PER_CM = 1.0e5  # V/m
GHZ = 1.0e9
