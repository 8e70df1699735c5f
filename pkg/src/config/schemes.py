"""
Rate schemes a sweep can evaluate on each drawn instance.

A scheme is the mixed DF/QMF optimum or one of the reference schemes it is
compared against. Each entry names its evaluator by dotted path, so the
registry imports nothing from the rate modules until a sweep asks for a
scheme; evaluators are looked up inside worker processes the same way.
Every evaluator is called as

    evaluator(inst, decoder, variant, optimizer_settings, baseline_settings)

and returns a rate in bits per channel use.
"""

import importlib
import logging
from dataclasses import dataclass
from typing import Callable, List

from ..utils.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RateScheme:
    """
    One rate scheme.

    Fields:
        label: Column label in reports (e.g., 'Mixed DF/QMF')
        evaluator: Dotted path of the evaluator function
        achievable: False for benchmarks that are not achievable rates
    """
    label: str
    evaluator: str
    achievable: bool = True


# Sweeps report schemes in this order
SCHEMES = {
    'mixed': RateScheme('Mixed DF/QMF', 'src.baselines.evaluate_mixed'),
    'optimized_qmf': RateScheme('Optimized QMF', 'src.baselines.evaluate_optimized_qmf'),
    'noise_level_qmf': RateScheme('Noise-level QMF', 'src.baselines.evaluate_noise_level_qmf'),
    'stage_depth_qmf': RateScheme('Stage-depth QMF', 'src.baselines.evaluate_stage_depth_qmf'),
    'pure_df': RateScheme('Pure DF', 'src.baselines.evaluate_pure_df'),
    'hop_bound': RateScheme('Hop-capacity benchmark', 'src.baselines.evaluate_hop_bound', achievable=False),
}


def get_scheme(scheme_id: str) -> RateScheme:
    """
    Look up a scheme.

    Raises:
        DomainError: If the id is not registered
    """
    scheme = SCHEMES.get(scheme_id)
    if scheme is None:
        raise DomainError(f"unknown scheme {scheme_id!r}; choose from {list(SCHEMES)}")
    return scheme


def benchmark_schemes() -> List[str]:
    """Ids of registered schemes whose value is not an achievable rate."""
    return [scheme_id for scheme_id, scheme in SCHEMES.items() if not scheme.achievable]


def resolve_scheme_evaluator(scheme_id: str) -> Callable:
    """
    Import and return the evaluator function of a scheme.

    Raises:
        DomainError: If the scheme is unknown
        ImportError: If the evaluator's module cannot be imported
        AttributeError: If the module has no such function
    """
    scheme = get_scheme(scheme_id)
    module_path, function_name = scheme.evaluator.rsplit('.', 1)
    try:
        return getattr(importlib.import_module(module_path), function_name)
    except (ImportError, AttributeError) as e:
        logger.error(f"Cannot load evaluator {scheme.evaluator} of scheme {scheme_id!r}: {e}")
        raise
