"""
Run configuration for the SkinLock command line.

A RunConfig is loaded from a JSON file and then overridden by command-line
flags. Its to_dict() form is embedded in every output file.
"""

import json
from dataclasses import dataclass, field, fields
from typing import List, Optional

import numpy as np

from ..errors import ParameterError
from .params import HatanoNelsonParams, SshParams

MODELS = ("hn", "ssh", "custom-file")
SOLVERS = ("direct", "spectral")

# Pump defaults per model: (site label, strength).
DEFAULT_PUMP = {
    "hn": ("15", 0.03),
    "ssh": ("1A", 1e-8),
    "custom-file": ("1", 1.0),
}


def _check_keys(cls, data: dict, where: str) -> None:
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ParameterError(f"unknown {where} key(s): {', '.join(unknown)}")


@dataclass
class PumpSpec:
    """
    Pump description.

    Attributes:
        site: Site label of a local pump ("15", "1A"); model default if None
        strength: Pump strength Gamma (or uniform gamma); model default if None
        diagonal_file: JSON file with a list of per-site pump rates y_j
        uniform: Pump every site with the strength (gamma I)
    """
    site: Optional[str] = None
    strength: Optional[float] = None
    diagonal_file: Optional[str] = None
    uniform: bool = False

    def to_dict(self) -> dict:
        return {'site': self.site, 'strength': self.strength, 'diagonal_file': self.diagonal_file,
                'uniform': self.uniform}

    @classmethod
    def from_dict(cls, data: dict) -> 'PumpSpec':
        _check_keys(cls, data, "pump")
        site = data.get('site')
        strength = data.get('strength')
        return cls(
            site=None if site is None else str(site),
            strength=None if strength is None else float(strength),
            diagonal_file=data.get('diagonal_file'),
            uniform=bool(data.get('uniform', False)),
        )


@dataclass
class ScanSpec:
    """
    Scan grids.

    Attributes:
        sites: Pump sites of the source scan; all sites if None
        g_start: First g of the crossover grid
        g_stop: Last g of the crossover grid
        g_points: Number of grid points
        g_values: Explicit g list, overrides the uniform grid
        profile_g: g values at which ssh-profiles writes profiles
    """
    sites: Optional[List[int]] = None
    g_start: float = -0.55
    g_stop: float = 0.60
    g_points: int = 24
    g_values: Optional[List[float]] = None
    profile_g: List[float] = field(default_factory=lambda: [-0.25, 0.20])

    def g_grid(self) -> np.ndarray:
        if self.g_values is not None:
            return np.array(self.g_values, dtype=float)
        if self.g_points < 1:
            raise ParameterError("g_points must be at least 1")
        if self.g_points == 1:
            return np.array([self.g_start], dtype=float)
        return np.linspace(self.g_start, self.g_stop, self.g_points)

    def to_dict(self) -> dict:
        return {
            'sites': self.sites,
            'g_start': self.g_start,
            'g_stop': self.g_stop,
            'g_points': self.g_points,
            'g_values': self.g_values,
            'profile_g': list(self.profile_g),
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'ScanSpec':
        _check_keys(cls, data, "scan")
        defaults = cls()
        sites = data.get('sites')
        g_values = data.get('g_values')
        return cls(
            sites=None if sites is None else [int(s) for s in sites],
            g_start=float(data.get('g_start', defaults.g_start)),
            g_stop=float(data.get('g_stop', defaults.g_stop)),
            g_points=int(data.get('g_points', defaults.g_points)),
            g_values=None if g_values is None else [float(g) for g in g_values],
            profile_g=[float(g) for g in data.get('profile_g', defaults.profile_g)],
        )


@dataclass
class OracleSpec:
    """
    Settings of the master-equation cross-check.

    Attributes:
        chain: Hatano-Nelson chain realized microscopically
        gamma: Uniform pump rate
        initial_occupations: Fock state the trajectory starts from
        t_final: Trajectory length
        dt: RK4 step
        stride: Steps between compared snapshots
    """
    chain: HatanoNelsonParams = field(
        default_factory=lambda: HatanoNelsonParams(n_sites=3, t_right=1.0, t_left=0.17, kappa=1.5))
    gamma: float = 0.1
    initial_occupations: List[int] = field(default_factory=lambda: [1, 0, 1])
    t_final: float = 10.0
    dt: float = 0.0025
    stride: int = 40

    def to_dict(self) -> dict:
        return {
            'chain': self.chain.to_dict(),
            'gamma': self.gamma,
            'initial_occupations': list(self.initial_occupations),
            't_final': self.t_final,
            'dt': self.dt,
            'stride': self.stride,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'OracleSpec':
        _check_keys(cls, data, "oracle")
        defaults = cls()
        return cls(
            chain=HatanoNelsonParams.from_dict(data['chain']) if 'chain' in data else defaults.chain,
            gamma=float(data.get('gamma', defaults.gamma)),
            initial_occupations=[int(n) for n in data.get('initial_occupations', defaults.initial_occupations)],
            t_final=float(data.get('t_final', defaults.t_final)),
            dt=float(data.get('dt', defaults.dt)),
            stride=int(data.get('stride', defaults.stride)),
        )


@dataclass
class RunConfig:
    """
    Complete configuration of one command-line run.

    Attributes:
        model: 'hn', 'ssh' or 'custom-file'
        hn: Hatano-Nelson parameters
        ssh: SSH parameters
        custom_x: Matrix JSON file holding X (custom-file model, validate)
        custom_y: Matrix JSON file holding Y (validate)
        pump: Pump description
        solver: 'direct' or 'spectral'
        scan: Scan grids
        oracle: Master-equation cross-check settings
        edge_window: Edge-candidate window as a fraction of the spectral range
        out_dir: Output directory
        threads: Worker threads for scans
        seed: Reserved; no deterministic path draws random numbers
    """
    model: str = "hn"
    hn: HatanoNelsonParams = field(default_factory=HatanoNelsonParams)
    ssh: SshParams = field(default_factory=SshParams)
    custom_x: Optional[str] = None
    custom_y: Optional[str] = None
    pump: PumpSpec = field(default_factory=PumpSpec)
    solver: str = "direct"
    scan: ScanSpec = field(default_factory=ScanSpec)
    oracle: OracleSpec = field(default_factory=OracleSpec)
    edge_window: float = 0.1
    out_dir: str = "out"
    threads: int = 1
    seed: Optional[int] = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ParameterError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.solver not in SOLVERS:
            raise ParameterError(f"solver must be one of {SOLVERS}, got {self.solver!r}")
        if self.threads < 1:
            raise ParameterError("threads must be at least 1")

    @property
    def pump_site(self) -> str:
        return self.pump.site if self.pump.site is not None else DEFAULT_PUMP[self.model][0]

    @property
    def pump_strength(self) -> float:
        return self.pump.strength if self.pump.strength is not None else DEFAULT_PUMP[self.model][1]

    def apply_overrides(self, out_dir: Optional[str] = None, threads: Optional[int] = None,
                        solver: Optional[str] = None) -> 'RunConfig':
        """Return a copy with command-line flags applied; flags win over the file."""
        data = self.to_dict()
        if out_dir is not None:
            data['out_dir'] = out_dir
        if threads is not None:
            data['threads'] = threads
        if solver is not None:
            data['solver'] = solver
        return RunConfig.from_dict(data)

    def to_dict(self) -> dict:
        return {
            'model': self.model,
            'hn': self.hn.to_dict(),
            'ssh': self.ssh.to_dict(),
            'custom_x': self.custom_x,
            'custom_y': self.custom_y,
            'pump': self.pump.to_dict(),
            'solver': self.solver,
            'scan': self.scan.to_dict(),
            'oracle': self.oracle.to_dict(),
            'edge_window': self.edge_window,
            'out_dir': self.out_dir,
            'threads': self.threads,
            'seed': self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'RunConfig':
        _check_keys(cls, data, "config")
        defaults = cls()
        return cls(
            model=data.get('model', defaults.model),
            hn=HatanoNelsonParams.from_dict(data.get('hn', {})),
            ssh=SshParams.from_dict(data.get('ssh', {})),
            custom_x=data.get('custom_x'),
            custom_y=data.get('custom_y'),
            pump=PumpSpec.from_dict(data.get('pump', {})),
            solver=data.get('solver', defaults.solver),
            scan=ScanSpec.from_dict(data.get('scan', {})),
            oracle=OracleSpec.from_dict(data.get('oracle', {})),
            edge_window=float(data.get('edge_window', defaults.edge_window)),
            out_dir=data.get('out_dir', defaults.out_dir),
            threads=int(data.get('threads', defaults.threads)),
            seed=data.get('seed'),
        )

    @classmethod
    def from_json_file(cls, path: str) -> 'RunConfig':
        """Load a config file; a missing key keeps its default."""
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ParameterError(f"cannot read config {path}: {e}") from e
        if not isinstance(data, dict):
            raise ParameterError(f"config {path} must hold a JSON object")
        return cls.from_dict(data)
