"""
Reference schemes compared against the mixed DF/QMF scheme.

The fixed-distortion QMF baselines run through the same backward recursion
as the mixed scheme with every relay quantizing; each relay's distortion is
the larger of its prescribed floor and the Wyner-Ziv noise that keeps its
index rate forwardable.
"""

import logging
import math
from enum import Enum
from typing import Optional

from .config.settings import BASELINES, OPTIMIZER, BaselineSettings, OptimizerSettings
from .config_optimizer import CoordinateSearch, ModeSearch, SearchSpec, ThetaSearch, optimize
from .mixed_rate_engine import evaluate
from .models.channel import ChannelInstance
from .models.modes import Decoder, FormulaVariant, ModeConfig
from .models.rates import BindingConstraint, RateBreakdown

logger = logging.getLogger(__name__)

BASELINE_NOTE = (
    "noise_level_qmf and stage_depth_qmf use the sequential-decoding recursion of the mixed "
    "scheme with all relays quantizing and distortion max(floor, Wyner-Ziv noise); "
    "hop_bound is the interference-free per-hop benchmark min_k log2(1+SNR_k), not a cut-set bound"
)


class BaselineKind(str, Enum):
    OPTIMIZED_QMF = 'optimized_qmf'
    NOISE_LEVEL_QMF = 'noise_level_qmf'
    STAGE_DEPTH_QMF = 'stage_depth_qmf'
    PURE_DF = 'pure_df'
    HOP_CAPACITY_BOUND = 'hop_bound'


def _all_qmf(inst: ChannelInstance, decoder: Decoder, variant: FormulaVariant) -> ModeConfig:
    K = inst.num_stages
    return ModeConfig.for_stages(K, range(1, K + 1), decoder=decoder, formula_variant=variant)


def _hop_bound(inst: ChannelInstance, decoder: Decoder, variant: FormulaVariant) -> RateBreakdown:
    capacities = [math.log2(1.0 + snr) for snr in inst.snr]
    rate = min(capacities)
    weakest = capacities.index(rate)
    return RateBreakdown(
        symmetric_rate=rate,
        per_path_throughput=rate / 2.0,
        segment_rates={0: rate},
        quant_noise={},
        binding={0: BindingConstraint('I', weakest)},
        config=ModeConfig.for_stages(inst.num_stages, (), decoder=decoder, formula_variant=variant),
    )


def baseline_rate(
    inst: ChannelInstance,
    kind: BaselineKind,
    decoder: Decoder = Decoder.SD,
    formula_variant: FormulaVariant = FormulaVariant.AS_PRINTED,
    settings: BaselineSettings = BASELINES,
    theta_search: Optional[ThetaSearch] = None,
    optimizer_settings: OptimizerSettings = OPTIMIZER,
) -> RateBreakdown:
    """
    Rate of a reference scheme on one instance.

    Args:
        inst: Channel instance
        kind: Which baseline
        decoder: SD or JD (matters for PURE_DF only; all-QMF chains have no
                 cross terms)
        formula_variant: Cross-term reading
        settings: Distortion floors of the fixed-distortion baselines
        theta_search: Theta strategy of PURE_DF (coordinate search by default)
        optimizer_settings: Search settings of PURE_DF

    Returns:
        RateBreakdown: The scheme's rate; for HOP_CAPACITY_BOUND the binding
                       label names the transmitting node of the weakest hop
    """
    kind = BaselineKind(kind)
    K = inst.num_stages
    if kind is BaselineKind.OPTIMIZED_QMF:
        return evaluate(inst, _all_qmf(inst, decoder, formula_variant))
    if kind is BaselineKind.NOISE_LEVEL_QMF:
        floors = {k: settings.noise_level_floor for k in range(1, K + 1)}
        return evaluate(inst, _all_qmf(inst, decoder, formula_variant), noise_floors=floors)
    if kind is BaselineKind.STAGE_DEPTH_QMF:
        floor = settings.stage_depth_floor(K)
        floors = {k: floor for k in range(1, K + 1)}
        return evaluate(inst, _all_qmf(inst, decoder, formula_variant), noise_floors=floors)
    if kind is BaselineKind.PURE_DF:
        spec = SearchSpec(
            mode_search=ModeSearch.GIVEN,
            qmf_set=(),
            theta_search=theta_search or _coordinate_from(optimizer_settings),
            decoder=decoder,
            formula_variant=formula_variant,
        )
        return optimize(inst, spec, settings=optimizer_settings).best_breakdown
    return _hop_bound(inst, decoder, formula_variant)


def _coordinate_from(settings: OptimizerSettings) -> CoordinateSearch:
    return CoordinateSearch(restarts=settings.restarts, sweeps=settings.sweeps, tol=settings.tol)


# Sweep evaluators, registered by dotted path in src/config/schemes.py

def evaluate_mixed(
    inst: ChannelInstance,
    decoder: Decoder,
    variant: FormulaVariant,
    optimizer_settings: OptimizerSettings = OPTIMIZER,
    baseline_settings: BaselineSettings = BASELINES,
) -> float:
    spec = SearchSpec(
        theta_search=_coordinate_from(optimizer_settings),
        decoder=decoder,
        formula_variant=variant,
    )
    return optimize(inst, spec, settings=optimizer_settings).rate


def evaluate_optimized_qmf(inst, decoder, variant, optimizer_settings=OPTIMIZER, baseline_settings=BASELINES) -> float:
    return baseline_rate(inst, BaselineKind.OPTIMIZED_QMF, decoder, variant, baseline_settings).symmetric_rate


def evaluate_noise_level_qmf(inst, decoder, variant, optimizer_settings=OPTIMIZER, baseline_settings=BASELINES) -> float:
    return baseline_rate(inst, BaselineKind.NOISE_LEVEL_QMF, decoder, variant, baseline_settings).symmetric_rate


def evaluate_stage_depth_qmf(inst, decoder, variant, optimizer_settings=OPTIMIZER, baseline_settings=BASELINES) -> float:
    return baseline_rate(inst, BaselineKind.STAGE_DEPTH_QMF, decoder, variant, baseline_settings).symmetric_rate


def evaluate_pure_df(inst, decoder, variant, optimizer_settings=OPTIMIZER, baseline_settings=BASELINES) -> float:
    return baseline_rate(
        inst, BaselineKind.PURE_DF, decoder, variant, baseline_settings,
        optimizer_settings=optimizer_settings,
    ).symmetric_rate


def evaluate_hop_bound(inst, decoder, variant, optimizer_settings=OPTIMIZER, baseline_settings=BASELINES) -> float:
    return baseline_rate(inst, BaselineKind.HOP_CAPACITY_BOUND, decoder, variant, baseline_settings).symmetric_rate
