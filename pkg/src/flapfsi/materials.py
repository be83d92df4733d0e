"""Linear-elastic material records shared by the wing and structure modules."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Material:
    """Isotropic material with Rayleigh damping coefficients.

    Damping enters the transient solve as C = rayleigh_alpha * M +
    rayleigh_beta * K, with K the reference-configuration tangent.
    """

    E: float                    # Young's modulus, Pa
    nu: float                   # Poisson ratio
    rho: float                  # density, kg/m^3
    rayleigh_alpha: float = 0.0   # 1/s
    rayleigh_beta: float = 0.0    # s

    def __post_init__(self):
        if self.E <= 0:
            raise ValueError(f"E must be > 0, got {self.E}")
        if not 0.0 <= self.nu < 0.5:
            raise ValueError(f"nu must lie in [0, 0.5), got {self.nu}")
        if self.rho <= 0:
            raise ValueError(f"rho must be > 0, got {self.rho}")
        if self.rayleigh_alpha < 0 or self.rayleigh_beta < 0:
            raise ValueError("Rayleigh coefficients must be >= 0")

    @property
    def shear_modulus(self) -> float:
        return self.E / (2.0 * (1.0 + self.nu))


# Representative handbook values for the default wing build: carbon-fibre
# composite veins, polyimide-film membrane. All overridable per case file and
# echoed into every results bundle.
VEIN_DEFAULT = Material(E=230e9, nu=0.30, rho=1600.0)
MEMBRANE_DEFAULT = Material(E=2.5e9, nu=0.34, rho=1420.0)
