"""
Lattice parameter models for SkinLock.
"""

import math
from dataclasses import dataclass

from ..errors import ParameterError


@dataclass(frozen=True)
class HatanoNelsonParams:
    """
    Hatano-Nelson chain parameters.

    Attributes:
        n_sites: Number of sites N
        t_right: Rightward hopping t_R
        t_left: Leftward hopping t_L
        kappa: Uniform damping shift
    """
    n_sites: int = 40
    t_right: float = 1.0
    t_left: float = 0.17
    kappa: float = 0.91

    def validate(self) -> None:
        """Raise ParameterError unless the chain is buildable."""
        if int(self.n_sites) != self.n_sites or self.n_sites < 1:
            raise ParameterError(f"n_sites must be a positive integer, got {self.n_sites}")
        if not (self.t_right > 0 and self.t_left > 0):
            raise ParameterError(f"hoppings must be positive, got t_R={self.t_right}, t_L={self.t_left}")
        if not math.isfinite(self.kappa):
            raise ParameterError("kappa must be finite")

    @property
    def envelope_ratio(self) -> float:
        """r = sqrt(t_R / t_L)."""
        return math.sqrt(self.t_right / self.t_left)

    @property
    def coupling(self) -> float:
        """sqrt(t_R t_L), the hopping of the Hermitian reference chain."""
        return math.sqrt(self.t_right * self.t_left)

    @property
    def is_stable(self) -> bool:
        """kappa > 2 sqrt(t_R t_L) puts every relaxation rate in the right half plane."""
        return self.kappa > 2.0 * self.coupling

    def to_dict(self) -> dict:
        return {
            'n_sites': self.n_sites,
            't_right': self.t_right,
            't_left': self.t_left,
            'kappa': self.kappa,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'HatanoNelsonParams':
        defaults = cls()
        return cls(
            n_sites=int(data.get('n_sites', defaults.n_sites)),
            t_right=float(data.get('t_right', defaults.t_right)),
            t_left=float(data.get('t_left', defaults.t_left)),
            kappa=float(data.get('kappa', defaults.kappa)),
        )


@dataclass(frozen=True)
class SshParams:
    """
    Nonreciprocal SSH chain parameters.

    Hoppings are t1*e^{+g} / t1*e^{-g} inside a cell and t2*e^{+g} /
    t2*e^{-g} between cells, the e^{+g} factor acting to the right.

    Attributes:
        n_cells: Number of unit cells N (2N sites)
        t1: Intracell hopping scale
        t2: Intercell hopping scale
        g: Nonreciprocity exponent
        kappa: Uniform damping shift
    """
    n_cells: int = 20
    t1: float = 0.5
    t2: float = 1.0
    g: float = -0.25
    kappa: float = 1.5

    def validate(self) -> None:
        """Raise ParameterError unless the chain is buildable."""
        if int(self.n_cells) != self.n_cells or self.n_cells < 1:
            raise ParameterError(f"n_cells must be a positive integer, got {self.n_cells}")
        if not (self.t1 > 0 and self.t2 > 0):
            raise ParameterError(f"hoppings must be positive, got t1={self.t1}, t2={self.t2}")
        if not (math.isfinite(self.g) and math.isfinite(self.kappa)):
            raise ParameterError("g and kappa must be finite")

    @property
    def n_sites(self) -> int:
        return 2 * self.n_cells

    @property
    def is_topological(self) -> bool:
        return self.t1 < self.t2

    @property
    def intracell_bond(self) -> float:
        """beta_1 = t1 e^g + t1 e^-g."""
        return 2.0 * self.t1 * math.cosh(self.g)

    @property
    def intercell_bond(self) -> float:
        """beta_2 = t2 e^g + t2 e^-g."""
        return 2.0 * self.t2 * math.cosh(self.g)

    def with_g(self, g: float) -> 'SshParams':
        return SshParams(self.n_cells, self.t1, self.t2, float(g), self.kappa)

    def to_dict(self) -> dict:
        return {
            'n_cells': self.n_cells,
            't1': self.t1,
            't2': self.t2,
            'g': self.g,
            'kappa': self.kappa,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'SshParams':
        defaults = cls()
        return cls(
            n_cells=int(data.get('n_cells', defaults.n_cells)),
            t1=float(data.get('t1', defaults.t1)),
            t2=float(data.get('t2', defaults.t2)),
            g=float(data.get('g', defaults.g)),
            kappa=float(data.get('kappa', defaults.kappa)),
        )
