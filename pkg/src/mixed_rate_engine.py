"""
Symmetric achievable rate of the mixed DF/QMF scheme on Gaussian channels.

For a fixed configuration (QMF set V, power splits theta) the nodes 0..K are
split into segments that each start at the source or at a QMF relay. Segment
rates are computed backwards from the destination: the rate of a segment is
the smallest of its link terms I_k and cross terms I'_k, and the QMF relay
opening the segment then picks the Wyner-Ziv quantization noise whose index
rate equals that segment rate. The source segment's rate is the symmetric
rate r.

Conventions at the destination: INR_{K+1} = 0, theta_{K+1} = 1 and no
quantization noise. The source split theta_0 never enters a constraint.
"""

import logging
import math
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .models.channel import ChannelInstance
from .models.modes import (
    Decoder,
    FormulaVariant,
    ModeConfig,
    RelayScenario,
    Segmentation,
    normalize_qmf_set,
)
from .models.rates import BindingConstraint, RateBreakdown
from .utils.errors import ContractViolation, DomainError
from .utils.information import RateValue, wyner_ziv_noise

logger = logging.getLogger(__name__)

Number = Union[float, np.ndarray]

_LN2 = math.log(2.0)


def _log2(value: Number) -> Number:
    if isinstance(value, np.ndarray):
        return np.log2(value)
    return math.log2(value)


# Closed forms shared by the scalar recursion and the batch evaluator. Every
# argument may be a float or an array of matching shape.

def _noise_level(inr_next: Number, theta_next: Number, sigma_next: Number) -> Number:
    return 1.0 + (1.0 - theta_next) * inr_next + sigma_next


def _link_term(snr_next: Number, noise: Number) -> Number:
    return _log2(1.0 + snr_next / noise)


def _split_term(theta_k: Number, snr_next: Number, noise: Number) -> Number:
    return _log2(1.0 + (1.0 - theta_k) * snr_next / noise)


def _common_term(decoder: Decoder, variant: FormulaVariant, snr: Number, inr: Number, theta: Number) -> Number:
    """First summand of I'_k, evaluated on the stage the variant prescribes."""
    if decoder is Decoder.JD:
        return 0.5 * _log2(1.0 + (snr + theta * inr) / (1.0 + (1.0 - theta) * inr))
    if variant is FormulaVariant.AS_PRINTED:
        return _log2(1.0 + theta * inr / (1.0 + snr))
    return _log2(1.0 + theta * inr / (1.0 + snr + (1.0 - theta) * inr))


def _cross_term(decoder: Decoder, common: Number, split: Number) -> Number:
    if decoder is Decoder.JD:
        return common + 0.5 * split
    return common + split


def segment(num_stages: int, qmf_set: Iterable[int]) -> Segmentation:
    """
    Partition nodes 0..K into segments opened by the source and the QMF relays.

    Args:
        num_stages: K
        qmf_set: QMF stages V (subset of 1..K)

    Returns:
        Segmentation: boundaries {0} + sorted V and the node runs between them

    Raises:
        DomainError: If V holds an index outside 1..K
    """
    if num_stages < 1:
        raise DomainError(f"num_stages must be >= 1, got {num_stages}")
    boundaries = (0,) + normalize_qmf_set(num_stages, qmf_set)
    ends = boundaries[1:] + (num_stages + 1,)
    segments = tuple(tuple(range(start, end)) for start, end in zip(boundaries, ends))
    return Segmentation(num_stages=num_stages, boundaries=boundaries, segments=segments)


def relay_scenarios(num_stages: int, own_qmf_set: Iterable[int], other_qmf_set: Iterable[int]) -> Dict[int, RelayScenario]:
    """
    Classify each transmitting node of a path by its constraint type.

    The next hop decides whether the observation is quantized (next relay is
    QMF) or not (next relay is DF, or the destination). The interfered relay of
    the same stage on the other path decides rate splitting: a node splits
    when that relay decodes (DF). The source never splits.

    Args:
        num_stages: K
        own_qmf_set: QMF stages on this path
        other_qmf_set: QMF stages on the other path

    Returns:
        Dict[int, RelayScenario]: Node k (0..K) -> scenario
    """
    own = set(normalize_qmf_set(num_stages, own_qmf_set))
    other = set(normalize_qmf_set(num_stages, other_qmf_set))
    scenarios = {}
    for k in range(num_stages + 1):
        quantized = (k + 1) in own
        splits = k >= 1 and k not in other
        if quantized:
            scenarios[k] = RelayScenario.TYPE_IV if splits else RelayScenario.TYPE_III
        else:
            scenarios[k] = RelayScenario.TYPE_II if splits else RelayScenario.TYPE_I
    return scenarios


def _check_term_args(inst: ChannelInstance, cfg: ModeConfig, quant_noise_next: Optional[float], k: int) -> float:
    """Validate a single-term request and return the quantization noise at stage k+1."""
    if cfg.num_stages != inst.num_stages:
        raise ContractViolation(
            f"config has {cfg.num_stages} stages but the instance has {inst.num_stages}"
        )
    if not 0 <= k <= inst.num_stages:
        raise DomainError(f"transmitting node {k} outside 0..{inst.num_stages}")
    if (k + 1) in cfg.qmf_set:
        if quant_noise_next is None:
            raise ContractViolation(
                f"stage {k + 1} performs QMF; its quantization noise must be supplied"
            )
        sigma = float(quant_noise_next)
        if not math.isfinite(sigma) or sigma < 0.0:
            raise DomainError(f"quant_noise_next must be finite and >= 0, got {sigma!r}")
        return sigma
    return 0.0


def link_rate_Ik(inst: ChannelInstance, cfg: ModeConfig, quant_noise_next: Optional[float], k: int) -> RateValue:
    """
    Link term I_k from node k to the receiver of stage k+1.

    Args:
        inst: Channel instance
        cfg: Mode configuration
        quant_noise_next: Quantization noise of stage k+1 (required when k+1 is QMF)
        k: Transmitting node 0..K

    Returns:
        RateValue: log2(1 + SNR_{k+1} / (1 + (1-theta_{k+1}) INR_{k+1} + sigma_{k+1}))
    """
    sigma = _check_term_args(inst, cfg, quant_noise_next, k)
    noise = _noise_level(inst.inr_at(k + 1), cfg.theta_at(k + 1), sigma)
    return float(_link_term(inst.snr_at(k + 1), noise))


def split_rate_Ik1(inst: ChannelInstance, cfg: ModeConfig, quant_noise_next: Optional[float], k: int) -> RateValue:
    """
    Private-message term I_{k1}: the link term with the numerator scaled by 1 - theta_k.

    Args and constraints as link_rate_Ik.
    """
    sigma = _check_term_args(inst, cfg, quant_noise_next, k)
    noise = _noise_level(inst.inr_at(k + 1), cfg.theta_at(k + 1), sigma)
    return float(_split_term(cfg.theta_at(k), inst.snr_at(k + 1), noise))


def cross_constraint_Ipk(inst: ChannelInstance, cfg: ModeConfig, quant_noise_next: Optional[float], k: int) -> RateValue:
    """
    Cross term I'_k combining common-message decodability with I_{k1}.

    SD adds the full common-message term to I_{k1}; JD halves both summands.
    The formula variant of cfg selects which stage's gains the common-message
    term uses (stage k+1 as printed, or stage k with the residual private
    interference counted as noise).

    Raises:
        DomainError: For k = 0 under the theorem-consistent variant (the
                     source has no same-stage relay)
    """
    sigma = _check_term_args(inst, cfg, quant_noise_next, k)
    noise = _noise_level(inst.inr_at(k + 1), cfg.theta_at(k + 1), sigma)
    split = _split_term(cfg.theta_at(k), inst.snr_at(k + 1), noise)
    if cfg.formula_variant is FormulaVariant.AS_PRINTED:
        common = _common_term(cfg.decoder, cfg.formula_variant,
                              inst.snr_at(k + 1), inst.inr_at(k + 1), cfg.theta_at(k + 1))
    else:
        if k == 0:
            raise DomainError("the source has no interfered relay; I'_0 is undefined for this variant")
        common = _common_term(cfg.decoder, cfg.formula_variant,
                              inst.snr_at(k), inst.inr_at(k), cfg.theta_at(k))
    return float(_cross_term(cfg.decoder, common, split))


def _extended_gains(inst: ChannelInstance) -> Tuple[List[float], List[float]]:
    """Gains indexed by stage 0..K+1 (index 0 unused, INR_{K+1} = 0)."""
    snr = [0.0] + list(inst.snr)
    inr = [0.0] + list(inst.inr) + [0.0]
    return snr, inr


def _segment_minimum(
    snr: Sequence[float],
    inr: Sequence[float],
    theta: Sequence[float],
    nodes: Sequence[int],
    qmf: frozenset,
    sigma: Mapping[int, float],
    decoder: Decoder,
    variant: FormulaVariant,
) -> Tuple[float, BindingConstraint]:
    """Smallest constraint over one segment; ties go to the smallest k, I before I'."""
    start = nodes[0]
    best = math.inf
    label = BindingConstraint('I', start)
    for k in nodes:
        noise = _noise_level(inr[k + 1], theta[k + 1], sigma.get(k + 1, 0.0) if (k + 1) in qmf else 0.0)
        value = _link_term(snr[k + 1], noise)
        if value < best:
            best, label = value, BindingConstraint('I', k)
        if k == start:
            continue
        split = _split_term(theta[k], snr[k + 1], noise)
        if variant is FormulaVariant.AS_PRINTED:
            common = _common_term(decoder, variant, snr[k + 1], inr[k + 1], theta[k + 1])
        else:
            common = _common_term(decoder, variant, snr[k], inr[k], theta[k])
        value = _cross_term(decoder, common, split)
        if value < best:
            best, label = value, BindingConstraint("I'", k)
    return best, label


def _recursion(
    inst: ChannelInstance,
    qmf_set: Tuple[int, ...],
    theta: Sequence[float],
    decoder: Decoder,
    variant: FormulaVariant,
    noise_floors: Optional[Mapping[int, float]] = None,
):
    """Backward recursion over segments. Returns every piece of the breakdown."""
    K = inst.num_stages
    snr, inr = _extended_gains(inst)
    theta_ext = [0.0] + [float(t) for t in theta] + [1.0]
    qmf = frozenset(qmf_set)
    seg = segment(K, qmf_set)

    sigma: Dict[int, float] = {}
    segment_rates: Dict[int, float] = {}
    binding: Dict[int, BindingConstraint] = {}
    infeasible: List[int] = []
    floor_active: List[int] = []
    blocked_by: Optional[int] = None

    for nodes in reversed(seg.segments):
        start = nodes[0]
        if blocked_by is not None:
            segment_rates[start] = 0.0
            binding[start] = BindingConstraint('blocked', blocked_by)
            infeasible.append(start)
            continue
        rate, label = _segment_minimum(snr, inr, theta_ext, nodes, qmf, sigma, decoder, variant)
        segment_rates[start] = rate
        binding[start] = label
        if start == 0:
            continue
        noise = wyner_ziv_noise(snr[start], rate) if rate > 0.0 else math.inf
        if not math.isfinite(noise):
            # An index rate too small for a finite distortion (zero, or so small
            # the noise overflows) cuts off everything upstream
            logger.debug(f"Segment {start} rate {rate!r} leaves no finite quantization noise")
            segment_rates[start] = 0.0
            blocked_by = start
            infeasible.append(start)
            continue
        if noise_floors:
            floor = noise_floors.get(start, 0.0)
            if floor > noise:
                noise = floor
                floor_active.append(start)
        sigma[start] = noise

    return segment_rates, sigma, binding, tuple(sorted(infeasible)), tuple(sorted(floor_active))


def _validate_floors(cfg: ModeConfig, noise_floors: Optional[Mapping[int, float]]) -> Optional[Dict[int, float]]:
    if noise_floors is None:
        return None
    floors = {}
    for k, value in noise_floors.items():
        if k not in cfg.qmf_set:
            raise ContractViolation(f"noise floor given for stage {k}, which is not a QMF stage")
        value = float(value)
        if not math.isfinite(value) or value < 0.0:
            raise DomainError(f"noise floor of stage {k} must be finite and >= 0, got {value!r}")
        floors[int(k)] = value
    return floors


def evaluate(
    inst: ChannelInstance,
    cfg: ModeConfig,
    noise_floors: Optional[Mapping[int, float]] = None,
) -> RateBreakdown:
    """
    Symmetric achievable rate of a configuration with its full breakdown.

    Args:
        inst: Channel instance
        cfg: Mode configuration (theta of length K, V within 1..K)
        noise_floors: Optional QMF stage -> minimum quantization noise. When a
                      floor exceeds the Wyner-Ziv noise the floor is used.

    Returns:
        RateBreakdown: Symmetric rate, segment rates, quantization noises and
                       binding labels. A zero-rate segment is reported as a
                       result: every upstream segment gets rate 0 and is
                       listed in infeasible_stages.

    Raises:
        ContractViolation: If cfg does not match inst or floors name DF stages
    """
    if cfg.num_stages != inst.num_stages:
        raise ContractViolation(
            f"config has {cfg.num_stages} stages but the instance has {inst.num_stages}"
        )
    floors = _validate_floors(cfg, noise_floors)
    segment_rates, sigma, binding, infeasible, floor_active = _recursion(
        inst, cfg.qmf_set, cfg.theta, cfg.decoder, cfg.formula_variant, floors
    )
    r = segment_rates[0]
    if infeasible:
        logger.debug(f"Configuration V={list(cfg.qmf_set)} has zero-rate segments at {list(infeasible)}")
    return RateBreakdown(
        symmetric_rate=r,
        per_path_throughput=r / 2.0,
        segment_rates=segment_rates,
        quant_noise=sigma,
        binding=binding,
        config=cfg,
        infeasible_stages=infeasible,
        floor_active=floor_active,
    )


def symmetric_rate(
    inst: ChannelInstance,
    qmf_set: Tuple[int, ...],
    theta: Sequence[float],
    decoder: Decoder,
    variant: FormulaVariant,
) -> float:
    """
    Symmetric rate only, skipping config validation.

    Used in the inner loop of the configuration search; callers guarantee
    theta has K entries in [0, 1] with 1 on every QMF stage.
    """
    segment_rates, _, _, _, _ = _recursion(inst, qmf_set, theta, decoder, variant)
    return segment_rates[0]


def batch_symmetric_rate(
    inst: ChannelInstance,
    qmf_set: Iterable[int],
    thetas: np.ndarray,
    decoder: Decoder,
    variant: FormulaVariant,
) -> np.ndarray:
    """
    Symmetric rate for many theta rows at once.

    Args:
        inst: Channel instance
        qmf_set: QMF stages V
        thetas: Array of shape (n, K); columns of QMF stages must be 1
        decoder: SD or JD
        variant: Cross-term reading

    Returns:
        np.ndarray: Rates of shape (n,), equal to evaluate(...).symmetric_rate
                    row by row up to floating-point rounding
    """
    K = inst.num_stages
    qmf = normalize_qmf_set(K, qmf_set)
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim != 2 or thetas.shape[1] != K:
        raise ContractViolation(f"thetas must have shape (n, {K}), got {thetas.shape}")
    n = thetas.shape[0]
    snr, inr = _extended_gains(inst)
    theta_ext = [np.zeros(n)] + [thetas[:, j] for j in range(K)] + [np.ones(n)]
    seg = segment(K, qmf)
    qmf_lookup = frozenset(qmf)

    sigma: Dict[int, np.ndarray] = {}
    rates = np.zeros(n)
    for nodes in reversed(seg.segments):
        start = nodes[0]
        best = np.full(n, np.inf)
        for k in nodes:
            sigma_next = sigma[k + 1] if (k + 1) in qmf_lookup else 0.0
            noise = _noise_level(inr[k + 1], theta_ext[k + 1], sigma_next)
            best = np.minimum(best, _link_term(snr[k + 1] * np.ones(n), noise))
            if k == start:
                continue
            split = _split_term(theta_ext[k], snr[k + 1], noise)
            if variant is FormulaVariant.AS_PRINTED:
                common = _common_term(decoder, variant, snr[k + 1], inr[k + 1], theta_ext[k + 1])
            else:
                common = _common_term(decoder, variant, snr[k], inr[k], theta_ext[k])
            best = np.minimum(best, _cross_term(decoder, common, split))
        rates = best
        if start != 0:
            # Zero rate means infinite distortion, which drives every upstream term to 0;
            # so does a rate small enough for the noise to overflow
            positive = best > 0.0
            denominator = np.expm1(np.where(positive, best, 1.0) * _LN2)
            with np.errstate(over='ignore'):
                sigma[start] = np.where(positive, (1.0 + snr[start]) / denominator, np.inf)
    return rates


def schedule_throughput(r: float, num_stages: int, num_messages: float) -> RateValue:
    """
    Per-path throughput of successive relaying over N messages per path.

    Over N + K slots the destination collects N/2 messages per path, so the
    rate is r*N / (2*(N+K)), tending to r/2 as N grows.

    Args:
        r: Symmetric rate (bits/channel use)
        num_stages: K
        num_messages: N >= 1 (may be math.inf)

    Returns:
        RateValue: r*N / (2*(N+K))
    """
    r = float(r)
    if not math.isfinite(r) or r < 0.0:
        raise DomainError(f"rate must be finite and >= 0, got {r!r}")
    if num_stages < 0:
        raise DomainError(f"num_stages must be >= 0, got {num_stages}")
    if not num_messages >= 1:
        raise DomainError(f"N must be >= 1, got {num_messages!r}")
    if math.isinf(num_messages):
        return r / 2.0
    return r * num_messages / (2.0 * (num_messages + num_stages))
