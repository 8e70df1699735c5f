"""
Rate evaluation for finite-alphabet (discrete memoryless) two-path networks.

All terms are conditional mutual informations of small per-stage joint pmfs.
The joint of the receiver at stage s of path i holds

    Ut, Xt   the transmitter (i, s-1) and its common-message auxiliary
    Ui, Xi   the interfering relay (other, s) and its auxiliary (s <= K)
    Y        the received symbol
    Yq       the quantized observation (QMF receivers only)

A node (i, k) uses its auxiliary only when it splits its message, which
happens for relays (k >= 1) whose interfered same-stage relay on the other
path decodes (k not in V_other). Otherwise U is a single dummy symbol and X
follows its marginal.
"""

import logging
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .channel_model import validate_dm_spec
from .mixed_rate_engine import segment
from .models.dm_network import (
    PATHS,
    ConstraintSet,
    ConstraintTerm,
    DmNetworkSpec,
    DmRateResult,
    NodeInput,
    other_path,
)
from .models.modes import Decoder, Segmentation, normalize_qmf_set
from .models.quantizers import QuantizerFamily, get_quantizer_family
from .utils.errors import DmSpecError, DomainError, NonMonotoneQuantizerError
from .utils.joint_pmf import JointPmf, mutual_information

logger = logging.getLogger(__name__)

# Wyner-Ziv equality residual targeted by the bisection
RESIDUAL_TOLERANCE = 1e-10

# Knob values checked for a non-increasing Wyner-Ziv term
_MONOTONE_GRID = np.linspace(0.0, 1.0, 33)

Modes = Tuple[Tuple[int, ...], Tuple[int, ...]]


def normalize_modes(spec: DmNetworkSpec, modes: Sequence[Sequence[int]]) -> Modes:
    """Check and sort the QMF sets (V_1, V_2)."""
    if len(modes) != 2:
        raise DomainError(f"modes must hold one QMF set per path, got {len(modes)}")
    return (
        normalize_qmf_set(spec.num_stages, modes[0]),
        normalize_qmf_set(spec.num_stages, modes[1]),
    )


class _NetworkTerms:
    """Mutual-information terms of one network under fixed modes."""

    def __init__(self, spec: DmNetworkSpec, modes: Modes):
        self.spec = spec
        self.modes = {1: modes[0], 2: modes[1]}
        self.K = spec.num_stages

    def qmf(self, i: int, stage: int) -> bool:
        return stage in self.modes[i]

    def splits(self, i: int, k: int) -> bool:
        return k >= 1 and k not in self.modes[other_path(i)]

    def family(self, i: int, stage: int) -> QuantizerFamily:
        return get_quantizer_family(self.spec.path(i).quantizer_name(stage))

    @staticmethod
    def _node_factors(node: NodeInput, splits: bool, u_label: str, x_label: str):
        if splits and node.has_auxiliary:
            return [((u_label,), node.p_u), ((u_label, x_label), node.p_x_given_u)]
        return [((u_label,), np.ones(1)), ((u_label, x_label), node.marginal_x()[None, :])]

    def joint(self, i: int, stage: int, d: Optional[float] = None) -> JointPmf:
        """Joint pmf seen by the receiver of `stage` on path i (quantized when d is given)."""
        j = other_path(i)
        factors = self._node_factors(self.spec.node(i, stage - 1), self.splits(i, stage - 1), 'Ut', 'Xt')
        labels = ['Ut', 'Xt']
        channel = self.spec.channel(i, stage)
        if stage <= self.K:
            factors += self._node_factors(self.spec.node(j, stage), self.splits(j, stage), 'Ui', 'Xi')
            factors.append((('Xt', 'Xi', 'Y'), channel.pmf))
            labels += ['Ui', 'Xi', 'Y']
        else:
            factors.append((('Xt', 'Y'), channel.pmf))
            labels.append('Y')
        if d is not None:
            family = self.family(i, stage)
            factors.append((('Y', 'Yq'), family.conditional(len(channel.y_alphabet), d)))
            labels.append('Yq')
        try:
            return JointPmf.from_factors(factors, labels)
        except DomainError as e:
            raise DmSpecError(f"path {i} stage {stage}: {e}")

    def link(self, i: int, k: int, d_next: Optional[float], with_common: bool = False) -> float:
        """I_{i,k}, or I_{i,k1} with with_common (conditioning on U_{i,k} as well)."""
        stage = k + 1
        extra = ('Ut',) if with_common else ()
        if stage <= self.K and self.qmf(i, stage):
            if d_next is None:
                raise DomainError(f"distortion of QMF relay (path {i}, stage {stage}) is missing")
            return mutual_information(self.joint(i, stage, d_next), ['Xt'], ['Yq'], ('Xi',) + extra)
        p = self.joint(i, stage)
        if stage <= self.K:
            return mutual_information(p, ['Xt'], ['Y'], ('Ui',) + extra)
        return mutual_information(p, ['Xt'], ['Y'], extra)

    def split(self, i: int, k: int, d_next: Optional[float]) -> float:
        return self.link(i, k, d_next, with_common=True)

    def cross(self, i: int, k: int) -> float:
        """I(U_{i,k}; Y_{other,k}): the interfered relay decodes the common part first."""
        return mutual_information(self.joint(other_path(i), k), ['Ui'], ['Y'])

    def joint_decoding(self, i: int, k: int) -> float:
        """I(U_{i,k}, X_{other,k-1}; Y_{other,k})."""
        return mutual_information(self.joint(other_path(i), k), ['Ui', 'Xt'], ['Y'])

    def wyner_ziv(self, i: int, stage: int, d: float) -> float:
        """I(Yhat_{i,s}; Y_{i,s} | X_{other,s})."""
        return mutual_information(self.joint(i, stage, d), ['Yq'], ['Y'], ['Xi'])


def assemble_constraints(
    spec: DmNetworkSpec,
    modes: Sequence[Sequence[int]],
    distortions: Dict[Tuple[int, int], float],
) -> ConstraintSet:
    """
    Evaluate every rate-region term for fixed modes and quantizer knobs.

    Per path i and node k the set holds the link term I_{i,k}; for nodes that
    split, the private term I_{i,k1}, the common term I(U_{i,k}; Y_{other,k})
    and their sum (the successive-decoding bound); at stages where both relays
    decode, the joint-decoding sum I(U_{i,k}, X_{other,k-1}; Y_{other,k}) +
    I_{i,k1}; and for each QMF relay the Wyner-Ziv term.

    Args:
        spec: Validated network description
        modes: (V_1, V_2)
        distortions: (path, stage) -> knob d for every QMF relay

    Returns:
        ConstraintSet: Terms tagged with the segment start whose rate they bound

    Raises:
        DomainError: If a QMF relay has no distortion or alphabets disagree
    """
    V = normalize_modes(spec, modes)
    terms_of = _NetworkTerms(spec, V)
    terms: List[ConstraintTerm] = []
    for i in PATHS:
        seg = segment(spec.num_stages, terms_of.modes[i])
        for k in range(spec.num_stages + 1):
            d_next = distortions.get((i, k + 1)) if terms_of.qmf(i, k + 1) else None
            g = seg.g(k)
            terms.append(ConstraintTerm(i, k, 'link', terms_of.link(i, k, d_next), g))
            if not terms_of.splits(i, k):
                continue
            split = terms_of.split(i, k, d_next)
            cross = terms_of.cross(i, k)
            terms.append(ConstraintTerm(i, k, 'split', split, g))
            terms.append(ConstraintTerm(i, k, 'cross', cross, g))
            terms.append(ConstraintTerm(i, k, 'cross_sd', cross + split, g))
            if k not in V[0] and k not in V[1]:
                terms.append(ConstraintTerm(i, k, 'jd_sum', terms_of.joint_decoding(i, k) + split, g))
        for stage in terms_of.modes[i]:
            if (i, stage) not in distortions:
                raise DomainError(f"distortion of QMF relay (path {i}, stage {stage}) is missing")
            value = terms_of.wyner_ziv(i, stage, distortions[(i, stage)])
            terms.append(ConstraintTerm(i, stage, 'wyner_ziv', value, stage))
    return ConstraintSet(terms=tuple(terms))


def _check_monotone(terms_of: _NetworkTerms, i: int, stage: int):
    """Raise unless the Wyner-Ziv term is non-increasing in d (degenerate observations skip)."""
    values = np.array([terms_of.wyner_ziv(i, stage, d) for d in _MONOTONE_GRID])
    if values[0] <= 1e-12:
        logger.debug(f"Relay (path {i}, stage {stage}) observes a deterministic signal; index rate is 0")
        return
    steps = np.diff(values)
    if np.any(steps > 1e-12) or values[0] - values[-1] <= 0.0:
        worst = int(np.argmax(steps))
        raise NonMonotoneQuantizerError(
            f"quantizer family {terms_of.family(i, stage).name!r} at (path {i}, stage {stage}) is not "
            f"decreasing in d: I(Yhat;Y|X) rises from {values[worst]!r} to {values[worst + 1]!r} "
            f"between d={_MONOTONE_GRID[worst]:.4f} and d={_MONOTONE_GRID[worst + 1]:.4f}"
        )


def _match_index_rate(terms_of: _NetworkTerms, i: int, stage: int, target: float):
    """
    Bisection for the knob d whose Wyner-Ziv term equals target.

    Returns:
        (d, achieved rate, residual, bracket): bracket is None when the
        equality is attainable, else (I at d=1, I at d=0)
    """
    top = terms_of.wyner_ziv(i, stage, 0.0)
    bottom = terms_of.wyner_ziv(i, stage, 1.0)
    if target >= top - RESIDUAL_TOLERANCE:
        bracket = (bottom, top) if target > top + RESIDUAL_TOLERANCE else None
        return 0.0, min(target, top), abs(top - target) if bracket is None else 0.0, bracket
    if target <= bottom + RESIDUAL_TOLERANCE:
        bracket = (bottom, top) if target < bottom - RESIDUAL_TOLERANCE else None
        return 1.0, max(target, bottom), abs(bottom - target) if bracket is None else 0.0, bracket

    lo, hi = 0.0, 1.0
    d, value = 0.5, None
    for _ in range(200):
        d = 0.5 * (lo + hi)
        value = terms_of.wyner_ziv(i, stage, d)
        if abs(value - target) < RESIDUAL_TOLERANCE or hi - lo < 1e-16:
            break
        if value > target:
            lo = d
        else:
            hi = d
    return d, target, abs(value - target), None


def solve_symmetric(
    spec: DmNetworkSpec,
    modes: Sequence[Sequence[int]],
    decoder: Decoder = Decoder.SD,
) -> DmRateResult:
    """
    Largest symmetric rate of the mixed scheme on a discrete memoryless network.

    Segments of both paths are closed backwards, from the last segment start
    to the sources. A segment's rate is the smallest of its link terms and
    the decoding bounds of its splitting nodes; the QMF relay opening it then
    gets the knob d at which its Wyner-Ziv term equals that rate. Under JD
    the sum bound of a stage where both relays decode is shared equally by
    the two paths.

    Args:
        spec: Network description
        modes: (V_1, V_2)
        decoder: SD or JD

    Returns:
        DmRateResult: r_1, r_2, their minimum and all constraint values.
                      A segment rate above what the quantizer family can
                      reach is clamped to its lossless index rate and
                      reported under `infeasible` with the reachable bracket.

    Raises:
        DmSpecError: If the spec fails validation
        NonMonotoneQuantizerError: If a quantizer family is not decreasing in d
    """
    violations = validate_dm_spec(spec)
    if violations:
        raise DmSpecError(
            f"network spec has {len(violations)} violations: " + '; '.join(str(v) for v in violations),
            violations=violations,
        )
    decoder = Decoder(decoder)
    V = normalize_modes(spec, modes)
    terms_of = _NetworkTerms(spec, V)
    K = spec.num_stages

    for i in PATHS:
        for stage in terms_of.modes[i]:
            _check_monotone(terms_of, i, stage)

    segmentations: Dict[int, Segmentation] = {i: segment(K, terms_of.modes[i]) for i in PATHS}
    distortions: Dict[Tuple[int, int], float] = {}
    residuals: Dict[Tuple[int, int], float] = {}
    infeasible: Dict[Tuple[int, int], Tuple[float, float]] = {}
    segment_rates: Dict[int, Dict[int, float]] = {1: {}, 2: {}}

    def d_after(i: int, k: int) -> Optional[float]:
        return distortions.get((i, k + 1)) if terms_of.qmf(i, k + 1) else None

    @lru_cache(maxsize=None)
    def joint_bound(k: int) -> float:
        sums = [terms_of.joint_decoding(i, k) + terms_of.split(i, k, d_after(i, k)) for i in PATHS]
        return 0.5 * min(sums)

    starts = sorted(((s, i) for i in PATHS for s in segmentations[i].boundaries), reverse=True)
    for start, i in starts:
        nodes = segmentations[i].segments[segmentations[i].boundaries.index(start)]
        bounds = []
        for k in nodes:
            bounds.append(terms_of.link(i, k, d_after(i, k)))
            if not terms_of.splits(i, k):
                continue
            if decoder is Decoder.JD and k not in V[0] and k not in V[1]:
                bounds.append(joint_bound(k))
            else:
                bounds.append(terms_of.cross(i, k) + terms_of.split(i, k, d_after(i, k)))
        rate = max(0.0, min(bounds))
        if start >= 1:
            d, rate, residual, bracket = _match_index_rate(terms_of, i, start, rate)
            distortions[(i, start)] = d
            residuals[(i, start)] = residual
            if bracket is not None:
                infeasible[(i, start)] = bracket
                logger.warning(
                    f"Relay (path {i}, stage {start}) cannot match segment rate {min(bounds):.6f}; "
                    f"its quantizer reaches [{bracket[0]:.6f}, {bracket[1]:.6f}] bits"
                )
        segment_rates[i][start] = rate

    constraints = assemble_constraints(spec, V, distortions)
    rate_pair = (segment_rates[1][0], segment_rates[2][0])
    logger.info(f"DM network rates r_1={rate_pair[0]:.6f}, r_2={rate_pair[1]:.6f} ({decoder.value})")
    return DmRateResult(
        rate_pair=rate_pair,
        symmetric_rate=min(rate_pair),
        segment_rates=segment_rates,
        distortions=distortions,
        residuals=residuals,
        infeasible=infeasible,
        constraints=constraints,
        decoder=decoder.value,
    )
