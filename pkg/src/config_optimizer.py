"""
Search over relay modes and power splits for the best symmetric rate.

Every QMF set V (all 2^K of them, or a single given one) is searched
independently: theta_k is pinned to 1 on V and the remaining coordinates are
maximized either on a regular lattice (GRID) or by multi-start coordinate
ascent with golden-section line searches (COORDINATE). The per-set results
are reduced in a fixed order, so the answer does not depend on how the sets
were distributed over worker processes.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from multiprocessing import Pool
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config.settings import OPTIMIZER, OptimizerSettings
from .mixed_rate_engine import batch_symmetric_rate, evaluate, symmetric_rate
from .models.channel import ChannelInstance
from .models.modes import Decoder, FormulaVariant, ModeConfig, normalize_qmf_set
from .models.rates import Optimum, SubsetResult
from .utils.errors import ContractViolation, SearchGuardError
from .utils.golden_section import golden_section_max
from .utils.random_streams import stream

logger = logging.getLogger(__name__)

# Rows per batch when scanning a lattice
_CHUNK_ROWS = 1 << 15

# Points of the vectorized scan that brackets each line search
_LINE_SCAN_POINTS = 33


class ModeSearch(str, Enum):
    EXHAUSTIVE = 'exhaustive'  # all 2^K QMF sets
    GIVEN = 'given'            # only the QMF set named by the search


@dataclass(frozen=True)
class GridSearch:
    """Regular lattice with points_per_dim values of every free theta."""
    points_per_dim: int = OPTIMIZER.grid_points_per_dim
    kind: str = field(default='grid', init=False)

    def __post_init__(self):
        if self.points_per_dim < 2:
            raise ContractViolation(f"points_per_dim must be >= 2, got {self.points_per_dim}")

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'points_per_dim': self.points_per_dim}


@dataclass(frozen=True)
class CoordinateSearch:
    """
    Multi-start coordinate ascent.

    Fields:
        restarts: Random starts in addition to the lattice and diagonal starts
        sweeps: Maximum coordinate passes per start
        tol: Theta resolution of the golden-section line search (floor 1e-9)
    """
    restarts: int = OPTIMIZER.restarts
    sweeps: int = OPTIMIZER.sweeps
    tol: float = OPTIMIZER.tol
    kind: str = field(default='coordinate', init=False)

    def __post_init__(self):
        if self.restarts < 0:
            raise ContractViolation(f"restarts must be >= 0, got {self.restarts}")
        if self.sweeps < 1:
            raise ContractViolation(f"sweeps must be >= 1, got {self.sweeps}")
        if not 0.0 < self.tol < 1.0:
            raise ContractViolation(f"tol must lie in (0, 1), got {self.tol}")
        object.__setattr__(self, 'tol', max(float(self.tol), 1e-9))

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'restarts': self.restarts, 'sweeps': self.sweeps, 'tol': self.tol}


ThetaSearch = Union[GridSearch, CoordinateSearch]


@dataclass(frozen=True)
class SearchSpec:
    """
    What to search and how.

    Fields:
        mode_search: EXHAUSTIVE over all QMF sets, or GIVEN (qmf_set only)
        theta_search: GridSearch or CoordinateSearch
        decoder: SD or JD
        formula_variant: Reading of the cross constraint
        qmf_set: The QMF set searched under GIVEN
    """
    mode_search: ModeSearch = ModeSearch.EXHAUSTIVE
    theta_search: ThetaSearch = field(default_factory=CoordinateSearch)
    decoder: Decoder = Decoder.SD
    formula_variant: FormulaVariant = FormulaVariant.AS_PRINTED
    qmf_set: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'mode_search', ModeSearch(self.mode_search))
        object.__setattr__(self, 'decoder', Decoder(self.decoder))
        object.__setattr__(self, 'formula_variant', FormulaVariant(self.formula_variant))
        object.__setattr__(self, 'qmf_set', tuple(sorted(set(int(k) for k in self.qmf_set))))

    def candidate_sets(self, num_stages: int) -> List[Tuple[int, ...]]:
        """QMF sets to search, in lexicographic order."""
        if self.mode_search is ModeSearch.GIVEN:
            return [normalize_qmf_set(num_stages, self.qmf_set)]
        stages = range(1, num_stages + 1)
        subsets = [combo for size in range(num_stages + 1) for combo in itertools.combinations(stages, size)]
        return sorted(subsets)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SearchSpec':
        """Create a spec from its JSON document."""
        theta = dict(data.get('theta_search') or {'kind': 'coordinate'})
        kind = theta.pop('kind', 'coordinate')
        if kind == 'grid':
            theta_search = GridSearch(**theta)
        elif kind == 'coordinate':
            theta_search = CoordinateSearch(**theta)
        else:
            raise ContractViolation(f"theta_search.kind must be 'grid' or 'coordinate', got {kind!r}")
        return cls(
            mode_search=data.get('mode_search', ModeSearch.EXHAUSTIVE.value),
            theta_search=theta_search,
            decoder=data.get('decoder', Decoder.SD.value),
            formula_variant=data.get('variant', FormulaVariant.AS_PRINTED.value),
            qmf_set=tuple(data.get('qmf_set') or ()),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mode_search': self.mode_search.value,
            'theta_search': self.theta_search.to_dict(),
            'decoder': self.decoder.value,
            'variant': self.formula_variant.value,
            'qmf_set': list(self.qmf_set),
        }


def _free_stages(num_stages: int, qmf_set: Sequence[int]) -> List[int]:
    return [k for k in range(1, num_stages + 1) if k not in qmf_set]


def _full_theta(num_stages: int, free: Sequence[int], values: Sequence[float]) -> List[float]:
    theta = [1.0] * num_stages
    for k, value in zip(free, values):
        theta[k - 1] = float(value)
    return theta


def _lattice_rows(num_stages: int, free: Sequence[int], axis: np.ndarray, start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of the lattice axis^|free|, in lexicographic order."""
    if not free:
        return np.ones((stop - start, num_stages))
    indices = np.unravel_index(np.arange(start, stop), (len(axis),) * len(free))
    thetas = np.ones((stop - start, num_stages))
    for column, k in enumerate(free):
        thetas[:, k - 1] = axis[indices[column]]
    return thetas


def check_grid_guard(num_stages: int, qmf_sets: Sequence[Tuple[int, ...]], points_per_dim: int, limit: int):
    """
    Refuse a GRID search whose largest lattice exceeds the limit.

    Raises:
        SearchGuardError: If points_per_dim ** (free dims) > limit for some V
    """
    most_free = max(len(_free_stages(num_stages, v)) for v in qmf_sets)
    size = points_per_dim ** most_free
    if size > limit:
        raise SearchGuardError(
            f"GRID search needs {points_per_dim}^{most_free} = {size} points per QMF set, "
            f"above the limit of {limit}; use the coordinate search or fewer points"
        )


def _grid_subset(
    inst: ChannelInstance,
    qmf_set: Tuple[int, ...],
    search: GridSearch,
    decoder: Decoder,
    variant: FormulaVariant,
    settings: OptimizerSettings,
) -> SubsetResult:
    K = inst.num_stages
    free = _free_stages(K, qmf_set)
    axis = np.linspace(0.0, 1.0, search.points_per_dim)
    total = search.points_per_dim ** len(free)
    best_value, best_row = -math.inf, None
    for start in range(0, total, _CHUNK_ROWS):
        stop = min(total, start + _CHUNK_ROWS)
        thetas = _lattice_rows(K, free, axis, start, stop)
        rates = batch_symmetric_rate(inst, qmf_set, thetas, decoder, variant)
        chunk_max = float(rates.max())
        if chunk_max > best_value + settings.rate_tie_tol:
            # First lattice row within tolerance of the max is the smallest theta
            first = int(np.argmax(rates >= chunk_max - settings.rate_tie_tol))
            best_value, best_row = chunk_max, thetas[first]
    theta = tuple(float(t) for t in best_row)
    rate = symmetric_rate(inst, qmf_set, theta, decoder, variant)
    return SubsetResult(qmf_set=qmf_set, rate=rate, theta=theta, evaluations=total)


class _Objective:
    """Symmetric rate as a function of the free coordinates, counting evaluations."""

    def __init__(self, inst: ChannelInstance, qmf_set: Tuple[int, ...], free: Sequence[int],
                 decoder: Decoder, variant: FormulaVariant):
        self.inst = inst
        self.qmf_set = qmf_set
        self.free = list(free)
        self.decoder = decoder
        self.variant = variant
        self.evaluations = 0

    def __call__(self, x: Sequence[float]) -> float:
        self.evaluations += 1
        theta = _full_theta(self.inst.num_stages, self.free, x)
        return symmetric_rate(self.inst, self.qmf_set, theta, self.decoder, self.variant)

    def batch(self, xs: np.ndarray) -> np.ndarray:
        self.evaluations += xs.shape[0]
        thetas = np.ones((xs.shape[0], self.inst.num_stages))
        for column, k in enumerate(self.free):
            thetas[:, k - 1] = xs[:, column]
        return batch_symmetric_rate(self.inst, self.qmf_set, thetas, self.decoder, self.variant)


def _line_search(objective: _Objective, x: np.ndarray, direction: np.ndarray, tol: float) -> Tuple[np.ndarray, float]:
    """
    Maximize the objective along x + t*direction inside the unit cube.

    A vectorized scan brackets the best point, golden-section search refines it.
    """
    lows, highs = [], []
    for xi, di in zip(x, direction):
        if di > 0:
            lows.append(-xi / di)
            highs.append((1.0 - xi) / di)
        elif di < 0:
            lows.append((1.0 - xi) / di)
            highs.append(-xi / di)
    t_lo, t_hi = max(lows), min(highs)
    if t_hi - t_lo <= tol:
        return x, objective(x)

    ts = np.linspace(t_lo, t_hi, _LINE_SCAN_POINTS)
    points = np.clip(x[None, :] + ts[:, None] * direction[None, :], 0.0, 1.0)
    values = objective.batch(points)
    best = int(np.argmax(values))
    lo = ts[max(best - 1, 0)]
    hi = ts[min(best + 1, len(ts) - 1)]

    def along(t: float) -> float:
        return objective(np.clip(x + t * direction, 0.0, 1.0))

    t_star, value = golden_section_max(along, lo, hi, tol=tol)
    return np.clip(x + t_star * direction, 0.0, 1.0), value


def _coarse_starts(objective: _Objective, dims: int, budget: int) -> List[np.ndarray]:
    """Best point of a lattice with at most budget points."""
    per_dim = max(2, int(math.floor(budget ** (1.0 / dims) + 1e-9)))
    axis = np.linspace(0.0, 1.0, per_dim)
    grid = np.array(list(itertools.product(axis, repeat=dims)))
    values = objective.batch(grid)
    return [grid[int(np.argmax(values))]]


def _coordinate_subset(
    inst: ChannelInstance,
    qmf_set: Tuple[int, ...],
    search: CoordinateSearch,
    decoder: Decoder,
    variant: FormulaVariant,
    settings: OptimizerSettings,
) -> SubsetResult:
    K = inst.num_stages
    free = _free_stages(K, qmf_set)
    objective = _Objective(inst, qmf_set, free, decoder, variant)
    dims = len(free)
    if dims == 0:
        theta = tuple(_full_theta(K, free, []))
        return SubsetResult(qmf_set=qmf_set, rate=objective([]), theta=theta, evaluations=1)

    starts = _coarse_starts(objective, dims, settings.coarse_grid_budget)
    starts += [np.full(dims, value) for value in (0.0, 0.5, 1.0)]
    mask = sum(1 << (k - 1) for k in qmf_set)
    rng = stream(settings.seed, K, mask)
    starts += [rng.uniform(0.0, 1.0, size=dims) for _ in range(search.restarts)]

    unit = np.eye(dims)
    pairs = [unit[i] + sign * unit[j] for i, j in itertools.combinations(range(dims), 2) for sign in (1.0, -1.0)]

    best_x, best_value = None, -math.inf
    for start in starts:
        x = np.array(start, dtype=float)
        value = objective(x)
        for _ in range(search.sweeps):
            improved = False
            for direction in list(unit) + pairs:
                candidate, candidate_value = _line_search(objective, x, direction, search.tol)
                if candidate_value > value + settings.rate_tie_tol:
                    x, value, improved = candidate, candidate_value, True
            if not improved:
                break
        if value > best_value + settings.rate_tie_tol or (
            abs(value - best_value) <= settings.rate_tie_tol and tuple(x) < tuple(best_x)
        ):
            best_x, best_value = x, value

    theta = tuple(_full_theta(K, free, best_x))
    return SubsetResult(qmf_set=qmf_set, rate=best_value, theta=theta, evaluations=objective.evaluations)


def search_subset(
    inst: ChannelInstance,
    qmf_set: Tuple[int, ...],
    search: ThetaSearch,
    decoder: Decoder,
    variant: FormulaVariant,
    settings: OptimizerSettings = OPTIMIZER,
) -> SubsetResult:
    """
    Best theta for one QMF set.

    Args:
        inst: Channel instance
        qmf_set: Normalized QMF set V
        search: GridSearch or CoordinateSearch
        decoder: SD or JD
        variant: Cross-term reading
        settings: Tie tolerance, seeds and lattice budget

    Returns:
        SubsetResult: Best rate for V, the theta achieving it (smallest among
                      ties) and the number of evaluations spent
    """
    if isinstance(search, GridSearch):
        result = _grid_subset(inst, qmf_set, search, decoder, variant, settings)
    else:
        result = _coordinate_subset(inst, qmf_set, search, decoder, variant, settings)
    logger.debug(f"V={list(qmf_set)}: rate {result.rate:.6f} after {result.evaluations} evaluations")
    return result


def optimize(
    inst: ChannelInstance,
    spec: SearchSpec,
    settings: OptimizerSettings = OPTIMIZER,
    workers: int = 1,
) -> Optimum:
    """
    Maximize the symmetric rate over QMF sets and power splits.

    Args:
        inst: Channel instance
        spec: Search description
        settings: Numeric search settings
        workers: Processes used to search QMF sets in parallel

    Returns:
        Optimum: Best configuration (lexicographically smallest V among ties,
                 then smallest theta), its breakdown and the per-set table

    Raises:
        SearchGuardError: If a GRID lattice would exceed settings.grid_limit
    """
    subsets = spec.candidate_sets(inst.num_stages)
    if isinstance(spec.theta_search, GridSearch):
        check_grid_guard(inst.num_stages, subsets, spec.theta_search.points_per_dim, settings.grid_limit)

    task = partial(
        search_subset,
        inst,
        search=spec.theta_search,
        decoder=spec.decoder,
        variant=spec.formula_variant,
        settings=settings,
    )
    if workers > 1 and len(subsets) > 1:
        with Pool(min(workers, len(subsets))) as pool:
            results = pool.map(task, subsets)
    else:
        results = [task(v) for v in subsets]

    best: Optional[SubsetResult] = None
    for result in results:
        if best is None or result.rate > best.rate + settings.rate_tie_tol:
            best = result

    config = ModeConfig(
        qmf_set=best.qmf_set,
        theta=best.theta,
        decoder=spec.decoder,
        formula_variant=spec.formula_variant,
    )
    breakdown = evaluate(inst, config)
    evaluated = sum(r.evaluations for r in results)
    logger.info(
        f"Best configuration V={list(best.qmf_set)} with rate {breakdown.symmetric_rate:.6f} "
        f"({len(subsets)} QMF sets, {evaluated} evaluations)"
    )
    return Optimum(
        best_config=config,
        best_breakdown=breakdown,
        configs_evaluated=evaluated,
        per_config_rates=list(results),
    )


def best_per_subset(
    inst: ChannelInstance,
    spec: SearchSpec,
    settings: OptimizerSettings = OPTIMIZER,
    workers: int = 1,
) -> Dict[Tuple[int, ...], float]:
    """Best rate of every searched QMF set, keyed by V."""
    return optimize(inst, spec, settings=settings, workers=workers).table()


def check_coordinate_against_grid(
    inst: ChannelInstance,
    decoder: Decoder = Decoder.SD,
    variant: FormulaVariant = FormulaVariant.AS_PRINTED,
    points_per_dim: int = OPTIMIZER.grid_points_per_dim,
    coordinate: Optional[CoordinateSearch] = None,
    tolerance: float = 1e-4,
    settings: OptimizerSettings = OPTIMIZER,
) -> Tuple[float, float]:
    """
    Run both theta strategies on one instance and log when they disagree.

    Returns:
        Tuple[float, float]: (coordinate optimum, grid optimum)
    """
    coordinate = coordinate or CoordinateSearch()
    coord = optimize(inst, SearchSpec(theta_search=coordinate, decoder=decoder, formula_variant=variant), settings)
    grid = optimize(
        inst, SearchSpec(theta_search=GridSearch(points_per_dim), decoder=decoder, formula_variant=variant), settings
    )
    if coord.rate < grid.rate - tolerance:
        logger.warning(
            f"Coordinate search fell {grid.rate - coord.rate:.3e} bits short of the grid "
            f"on instance {inst.digest()[:12]} (V={list(coord.best_config.qmf_set)} vs "
            f"V={list(grid.best_config.qmf_set)})"
        )
    return coord.rate, grid.rate
