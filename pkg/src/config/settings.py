"""Numeric defaults of the search, the baselines and the ensemble sweeps."""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Tuple


@dataclass
class OptimizerSettings:
    """
    Defaults of the configuration search.

    Fields:
        grid_points_per_dim: Lattice points per free theta coordinate (GRID)
        grid_limit: Largest lattice (points_per_dim ** free dims) GRID accepts
        restarts: Random starting points per QMF set (COORDINATE)
        sweeps: Full coordinate passes per start (COORDINATE)
        tol: Theta resolution of the line search
        coarse_grid_budget: Lattice size used to seed COORDINATE starts
        seed: Seed of the random restarts
        rate_tie_tol: Rates closer than this are considered tied
    """
    grid_points_per_dim: int = 101
    grid_limit: int = 10 ** 7
    restarts: int = 2
    sweeps: int = 4
    tol: float = 1e-6
    coarse_grid_budget: int = 1024
    seed: int = 0
    rate_tie_tol: float = 1e-12

    def __post_init__(self):
        # Below this the line search only chases rounding noise
        self.tol = max(self.tol, 1e-9)

    def validate(self):
        """Raise ValueError naming the first invalid field."""
        if self.grid_points_per_dim < 2:
            raise ValueError(f"grid_points_per_dim must be >= 2, got {self.grid_points_per_dim}")
        if self.grid_limit < 1:
            raise ValueError(f"grid_limit must be >= 1, got {self.grid_limit}")
        if self.restarts < 0:
            raise ValueError(f"restarts must be >= 0, got {self.restarts}")
        if self.sweeps < 1:
            raise ValueError(f"sweeps must be >= 1, got {self.sweeps}")
        if not 0.0 < self.tol < 1.0:
            raise ValueError(f"tol must lie in (0, 1), got {self.tol}")
        if self.coarse_grid_budget < 1:
            raise ValueError(f"coarse_grid_budget must be >= 1, got {self.coarse_grid_budget}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class BaselineSettings:
    """
    Constants of the fixed-distortion QMF baselines.

    Fields:
        noise_level_floor: Distortion floor of every relay in NOISE_LEVEL_QMF
        stage_depth_constant: c in the STAGE_DEPTH_QMF floor c*K
    """
    noise_level_floor: float = 1.0
    stage_depth_constant: float = 1.0

    def validate(self):
        """Raise ValueError naming the first invalid field."""
        if not self.noise_level_floor >= 0.0:
            raise ValueError(f"noise_level_floor must be >= 0, got {self.noise_level_floor}")
        if not self.stage_depth_constant >= 0.0:
            raise ValueError(f"stage_depth_constant must be >= 0, got {self.stage_depth_constant}")

    def stage_depth_floor(self, num_stages: int) -> float:
        return self.stage_depth_constant * num_stages

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class SweepSettings:
    """Defaults of the ensemble sweep flags."""
    snr_db: float = 20.0
    alpha_lo: float = 1.0
    alpha_hi: float = 2.0
    trials: int = 200
    seed: int = 0
    k_list: Tuple[int, ...] = field(default_factory=lambda: (1, 2, 3, 4, 5))
    workers: int = 1

    def validate(self):
        """Raise ValueError naming the first invalid field."""
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.k_list or any(k < 1 for k in self.k_list):
            raise ValueError(f"k_list must hold stage counts >= 1, got {list(self.k_list)}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['k_list'] = list(self.k_list)
        return data


OPTIMIZER = OptimizerSettings()
BASELINES = BaselineSettings()
SWEEP = SweepSettings()
