"""Result types of the Gaussian rate engine and the configuration search."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

from .modes import ModeConfig


@dataclass(frozen=True)
class BindingConstraint:
    """
    Label of the constraint that set a segment rate.

    Fields:
        kind: 'I' for a link term I_k, "I'" for a cross term I'_k, 'blocked'
              when a downstream segment had zero rate
        stage: Transmitting node k of the term (for 'blocked', the start of
               the zero-rate downstream segment)
    """
    kind: str
    stage: int

    def __str__(self) -> str:
        if self.kind == 'blocked':
            return f"blocked by segment {self.stage}"
        return f"{self.kind}_{self.stage}"


@dataclass(frozen=True)
class RateBreakdown:
    """
    Symmetric achievable rate of one configuration with its derivation.

    Fields:
        symmetric_rate: r, rate of the source segment (bits/channel use)
        per_path_throughput: r/2, the per-path rate under successive relaying
        segment_rates: Segment start k_l -> r_{k_l}
        quant_noise: QMF stage -> quantization noise variance (only for
                     stages with a positive segment rate)
        binding: Segment start -> constraint that set its rate
        infeasible_stages: Segment starts whose rate collapsed to 0 because
                           a downstream segment had zero rate, plus that
                           downstream segment's own start
        floor_active: QMF stages whose distortion floor exceeded the
                      Wyner-Ziv noise
        config: The evaluated configuration
    """
    symmetric_rate: float
    per_path_throughput: float
    segment_rates: Dict[int, float]
    quant_noise: Dict[int, float]
    binding: Dict[int, BindingConstraint]
    config: ModeConfig
    infeasible_stages: Tuple[int, ...] = ()
    floor_active: Tuple[int, ...] = ()

    @property
    def infeasible(self) -> bool:
        return bool(self.infeasible_stages)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the JSON report layout."""
        return {
            'symmetric_rate': float(self.symmetric_rate),
            'per_path_throughput': float(self.per_path_throughput),
            'segment_rates': {str(k): float(v) for k, v in sorted(self.segment_rates.items())},
            'quant_noise': {str(k): float(v) for k, v in sorted(self.quant_noise.items())},
            'binding': {str(k): str(v) for k, v in sorted(self.binding.items())},
            'infeasible_stages': list(self.infeasible_stages),
            'floor_active': list(self.floor_active),
            'config': self.config.to_dict(),
        }


@dataclass(frozen=True)
class SubsetResult:
    """Best rate found for one QMF set V, with the theta achieving it."""
    qmf_set: Tuple[int, ...]
    rate: float
    theta: Tuple[float, ...]
    evaluations: int


@dataclass(frozen=True)
class Optimum:
    """
    Outcome of the configuration search.

    Fields:
        best_config: Configuration with the largest symmetric rate
        best_breakdown: Full breakdown of best_config
        configs_evaluated: Number of (V, theta) evaluations performed
        per_config_rates: One entry per searched V, in subset order
    """
    best_config: ModeConfig
    best_breakdown: RateBreakdown
    configs_evaluated: int
    per_config_rates: List[SubsetResult] = field(default_factory=list)

    @property
    def rate(self) -> float:
        return self.best_breakdown.symmetric_rate

    @property
    def num_qmf_stages(self) -> int:
        """Number of stages containing a QMF relay in the best configuration."""
        return len(self.best_config.qmf_set)

    def table(self) -> Dict[Tuple[int, ...], float]:
        """Per-subset best rates keyed by V."""
        return {entry.qmf_set: entry.rate for entry in self.per_config_rates}

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the JSON report layout."""
        return {
            'rate': float(self.rate),
            'num_qmf_stages': self.num_qmf_stages,
            'configs_evaluated': self.configs_evaluated,
            'best_config': self.best_config.to_dict(),
            'best_breakdown': self.best_breakdown.to_dict(),
            'per_config_rates': [
                {
                    'qmf_set': list(entry.qmf_set),
                    'rate': float(entry.rate),
                    'theta': [float(t) for t in entry.theta],
                }
                for entry in self.per_config_rates
            ],
        }
