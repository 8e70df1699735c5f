"""Relay mode configurations and the segmentation they induce."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple

from ..utils.errors import ContractViolation, DomainError


class Decoder(str, Enum):
    """Decoding rule at stages where both relays perform DF."""
    SD = 'sd'  # successive decoding
    JD = 'jd'  # joint decoding


class FormulaVariant(str, Enum):
    """
    Reading of the cross-stage constraint I'_k.

    AS_PRINTED uses the next-stage quantities exactly as the closed form is
    usually stated; THEOREM_CONSISTENT evaluates the common-message constraint
    at stage k with the residual private interference counted as noise.
    """
    AS_PRINTED = 'printed'
    THEOREM_CONSISTENT = 'theorem'


class RelayScenario(str, Enum):
    """Constraint type of a transmitting node, set by its next hop and interfered relay."""
    TYPE_I = 'I'      # unquantized next hop, no rate splitting
    TYPE_II = 'II'    # unquantized next hop, rate splitting
    TYPE_III = 'III'  # quantized next hop, no rate splitting
    TYPE_IV = 'IV'    # quantized next hop, rate splitting


def normalize_qmf_set(num_stages: int, qmf_set: Iterable[int]) -> Tuple[int, ...]:
    """
    Sort and check a set of QMF stage indices.

    Raises:
        DomainError: If an index lies outside 1..K
    """
    normalized = tuple(sorted(set(int(k) for k in qmf_set)))
    for k in normalized:
        if not 1 <= k <= num_stages:
            raise DomainError(f"QMF stage {k} outside 1..{num_stages}")
    return normalized


@dataclass(frozen=True)
class ModeConfig:
    """
    Relay modes and power splits of the symmetric Gaussian scheme.

    Fields:
        qmf_set: Sorted stages whose relays quantize-map-and-forward; all others DF
        theta: K common-message power fractions; theta[k-1] belongs to stage k
               and must be 1 on QMF stages
        decoder: SD or JD at DF-only stages
        formula_variant: Reading of the cross constraint
    """
    qmf_set: Tuple[int, ...]
    theta: Tuple[float, ...]
    decoder: Decoder = Decoder.SD
    formula_variant: FormulaVariant = FormulaVariant.AS_PRINTED

    def __post_init__(self):
        """Normalize containers and enforce theta_k = 1 on QMF stages."""
        theta = tuple(float(t) for t in self.theta)
        if not theta:
            raise ContractViolation("theta must have one entry per stage (K >= 1)")
        for index, value in enumerate(theta):
            if not math.isfinite(value) or not 0.0 <= value <= 1.0:
                raise ContractViolation(f"theta[{index}] must lie in [0, 1], got {value!r}")
        qmf_set = normalize_qmf_set(len(theta), self.qmf_set)
        for k in qmf_set:
            if theta[k - 1] != 1.0:
                raise ContractViolation(
                    f"theta_{k} = {theta[k - 1]!r} but stage {k} performs QMF; "
                    f"theta_k must equal 1 for every k in V"
                )
        object.__setattr__(self, 'theta', theta)
        object.__setattr__(self, 'qmf_set', qmf_set)
        object.__setattr__(self, 'decoder', Decoder(self.decoder))
        object.__setattr__(self, 'formula_variant', FormulaVariant(self.formula_variant))

    @property
    def num_stages(self) -> int:
        return len(self.theta)

    def theta_at(self, k: int) -> float:
        """
        Power split of the node transmitting at stage k.

        The source split (k = 0) never enters a constraint and is fixed at 0;
        the destination (k = K+1) behaves like a fully common node.
        """
        if k == 0:
            return 0.0
        if k == self.num_stages + 1:
            return 1.0
        if not 1 <= k <= self.num_stages:
            raise DomainError(f"stage index {k} outside 0..{self.num_stages + 1}")
        return self.theta[k - 1]

    def is_qmf(self, k: int) -> bool:
        return k in self.qmf_set

    @classmethod
    def for_stages(
        cls,
        num_stages: int,
        qmf_set: Iterable[int] = (),
        theta: Optional[Sequence[float]] = None,
        decoder: Decoder = Decoder.SD,
        formula_variant: FormulaVariant = FormulaVariant.AS_PRINTED,
    ) -> 'ModeConfig':
        """
        Build a config, filling theta with 1 on QMF stages.

        Args:
            num_stages: K
            qmf_set: QMF stages
            theta: Splits for all K stages; entries on QMF stages are overwritten
                   with 1. Defaults to 0 on every DF stage.
        """
        qmf = normalize_qmf_set(num_stages, qmf_set)
        base = list(theta) if theta is not None else [0.0] * num_stages
        if len(base) != num_stages:
            raise ContractViolation(f"theta must have K={num_stages} entries, got {len(base)}")
        for k in qmf:
            base[k - 1] = 1.0
        return cls(qmf_set=qmf, theta=tuple(base), decoder=decoder, formula_variant=formula_variant)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the JSON layout used by reports."""
        return {
            'qmf_set': list(self.qmf_set),
            'theta': list(self.theta),
            'decoder': self.decoder.value,
            'variant': self.formula_variant.value,
        }


@dataclass(frozen=True)
class Segmentation:
    """
    Partition of nodes 0..K into runs that carry the same message.

    Segment l starts at boundary k_l (k_0 = 0 is the source, the others are
    the QMF stages) and holds every DF stage up to the next boundary.

    Fields:
        num_stages: K
        boundaries: (k_0 = 0, k_1, ..., k_|V|)
        segments: Node indices of each segment, in order
    """
    num_stages: int
    boundaries: Tuple[int, ...]
    segments: Tuple[Tuple[int, ...], ...]

    def g(self, k: int) -> int:
        """Start of the segment containing node k."""
        if not 0 <= k <= self.num_stages:
            raise DomainError(f"node index {k} outside 0..{self.num_stages}")
        start = 0
        for boundary in self.boundaries:
            if boundary <= k:
                start = boundary
        return start

    def segment_of(self, k: int) -> int:
        """Index l of the segment containing node k."""
        return self.boundaries.index(self.g(k))
