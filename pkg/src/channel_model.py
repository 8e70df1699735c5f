"""
Channel descriptions: Gaussian instances, random ensembles and the discrete
memoryless network spec.

Gaussian instances are drawn with a counter-based generator keyed by
(seed, trial, stage), so a trial's instance does not depend on which worker
draws it or in which order.
"""

import logging
from typing import List

import numpy as np

from .models.channel import ChannelInstance, EnsembleSpec, db_to_linear, linear_to_db
from .models.dm_network import PATHS, DmNetworkSpec, NodeInput, SpecViolation, other_path
from .models.quantizers import QUANTIZER_FAMILIES
from .utils.errors import ContractViolation
from .utils.joint_pmf import MAX_TABLE_ENTRIES
from .utils.random_streams import uniform

logger = logging.getLogger(__name__)

ROW_SUM_TOLERANCE = 1e-12

__all__ = [
    'ChannelInstance',
    'EnsembleSpec',
    'DmNetworkSpec',
    'db_to_linear',
    'linear_to_db',
    'draw_alphas',
    'draw_instance',
    'validate_dm_spec',
]


def draw_alphas(spec: EnsembleSpec, trial_index: int, num_stages: int) -> List[float]:
    """Cross-gain exponents alpha_1..alpha_K of one trial."""
    return [
        uniform(spec.seed, (trial_index, k), spec.alpha_lo, spec.alpha_hi)
        for k in range(1, num_stages + 1)
    ]


def draw_instance(spec: EnsembleSpec, trial_index: int, num_stages: int) -> ChannelInstance:
    """
    Draw the channel instance of one trial.

    Every direct gain equals the ensemble SNR and INR_k = SNR**alpha_k with
    alpha_k uniform on [alpha_lo, alpha_hi]. alpha_k depends only on
    (seed, trial_index, k), so the first K stages of a trial agree across
    stage counts.

    Args:
        spec: Ensemble description
        trial_index: Trial number, 0 <= trial_index < spec.trials
        num_stages: K

    Returns:
        ChannelInstance: The trial's instance

    Raises:
        ContractViolation: If trial_index or num_stages is out of range
    """
    if not 0 <= trial_index < spec.trials:
        raise ContractViolation(f"trial_index {trial_index} outside 0..{spec.trials - 1}")
    if num_stages < 1:
        raise ContractViolation(f"num_stages must be >= 1, got {num_stages}")
    snr = spec.snr_linear
    alphas = draw_alphas(spec, trial_index, num_stages)
    return ChannelInstance(
        num_stages=num_stages,
        snr=(snr,) * (num_stages + 1),
        inr=tuple(snr ** alpha for alpha in alphas),
    )


def _check_rows(array: np.ndarray, where: str, violations: List[SpecViolation]):
    """Append a violation for negative entries and for every row not summing to 1."""
    if np.any(array < 0.0) or not np.all(np.isfinite(array)):
        violations.append(SpecViolation(where, "entries must be finite and >= 0"))
    if array.ndim == 1:
        total = float(array.sum())
        if abs(total - 1.0) > ROW_SUM_TOLERANCE:
            violations.append(SpecViolation(where, "does not sum to 1", total))
        return
    sums = array.sum(axis=-1)
    for index in zip(*np.nonzero(np.abs(sums - 1.0) > ROW_SUM_TOLERANCE)):
        row = tuple(int(i) for i in index)
        violations.append(SpecViolation(f"{where} row {list(row)}", "does not sum to 1", float(sums[row])))


def _check_node(node: NodeInput, where: str, is_source: bool, violations: List[SpecViolation]):
    x_size = len(node.x_alphabet)
    if x_size == 0:
        violations.append(SpecViolation(where, "x_alphabet is empty"))
        return
    if node.p_x is not None:
        if node.p_x.shape != (x_size,):
            violations.append(SpecViolation(f"{where}.p_x", f"shape {node.p_x.shape} != ({x_size},)"))
        else:
            _check_rows(node.p_x, f"{where}.p_x", violations)
    if not node.has_auxiliary:
        if node.p_x is None:
            violations.append(SpecViolation(where, "p_x is required when no auxiliary is given"))
        return
    if is_source:
        violations.append(SpecViolation(where, "the source has no same-stage relay and cannot split its message"))
        return
    u_size = len(node.u_alphabet)
    if node.p_u is None or node.p_x_given_u is None:
        violations.append(SpecViolation(where, "p_u and p_x_given_u are required with u_alphabet"))
        return
    shapes_ok = True
    if node.p_u.shape != (u_size,):
        violations.append(SpecViolation(f"{where}.p_u", f"shape {node.p_u.shape} != ({u_size},)"))
        shapes_ok = False
    if node.p_x_given_u.shape != (u_size, x_size):
        violations.append(
            SpecViolation(f"{where}.p_x_given_u", f"shape {node.p_x_given_u.shape} != ({u_size}, {x_size})")
        )
        shapes_ok = False
    if not shapes_ok:
        return
    _check_rows(node.p_u, f"{where}.p_u", violations)
    _check_rows(node.p_x_given_u, f"{where}.p_x_given_u", violations)
    if node.p_x is not None and node.p_x.shape == (x_size,):
        implied = node.p_u @ node.p_x_given_u
        if np.max(np.abs(implied - node.p_x)) > ROW_SUM_TOLERANCE:
            violations.append(SpecViolation(f"{where}.p_x", "disagrees with sum_u p(u) p(x|u)"))


def validate_dm_spec(spec: DmNetworkSpec) -> List[SpecViolation]:
    """
    Check every pmf and the factorization of a discrete memoryless network.

    Args:
        spec: Network description

    Returns:
        List[SpecViolation]: Empty iff every pmf row sums to 1 within 1e-12,
                             every array has the shape its alphabets imply,
                             node inputs factor as p(u)p(x|u) or p(x), and
                             every stage's product alphabet fits the summation
                             limit
    """
    violations: List[SpecViolation] = []
    K = spec.num_stages
    if K < 1:
        return [SpecViolation('K', f"must be >= 1, got {K}")]

    for i in PATHS:
        path = spec.path(i)
        where = f"path {i}"
        if len(path.nodes) != K + 1:
            violations.append(SpecViolation(f"{where}.nodes", f"expected {K + 1} nodes, got {len(path.nodes)}"))
        if len(path.channels) != K + 1:
            violations.append(
                SpecViolation(f"{where}.channels", f"expected {K + 1} channels, got {len(path.channels)}")
            )
        for stage, name in path.quantizers.items():
            if not 1 <= stage <= K:
                violations.append(SpecViolation(f"{where}.quantizers", f"stage {stage} outside 1..{K}"))
            if name not in QUANTIZER_FAMILIES:
                violations.append(SpecViolation(f"{where}.quantizers.{stage}", f"unknown family {name!r}"))
        for k, node in enumerate(path.nodes):
            _check_node(node, f"{where} node {k}", k == 0, violations)

    if violations:
        # Channel shapes are meaningless without the right node counts
        return violations

    for i in PATHS:
        j = other_path(i)
        for stage in range(1, K + 2):
            channel = spec.channel(i, stage)
            where = f"path {i} channel {stage}"
            y_size = len(channel.y_alphabet)
            x_own = len(spec.node(i, stage - 1).x_alphabet)
            if stage <= K:
                x_other = len(spec.node(j, stage).x_alphabet)
                expected = (x_own, x_other, y_size)
            else:
                expected = (x_own, y_size)
            if y_size == 0 or channel.pmf.shape != expected:
                violations.append(SpecViolation(where, f"pmf shape {channel.pmf.shape} != {expected}"))
                continue
            _check_rows(channel.pmf, where, violations)

            entries = y_size * (y_size + 1)
            for node in [spec.node(i, stage - 1)] + ([spec.node(j, stage)] if stage <= K else []):
                entries *= len(node.x_alphabet) * max(1, len(node.u_alphabet))
            if entries > MAX_TABLE_ENTRIES:
                violations.append(
                    SpecViolation(where, f"stage joint needs {entries} entries, above {MAX_TABLE_ENTRIES}")
                )

    if violations:
        logger.debug(f"DM spec has {len(violations)} violations")
    return violations
