"""Gaussian channel instances and Monte Carlo ensemble descriptions."""

import hashlib
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

from ..utils.errors import ContractViolation, DomainError


def db_to_linear(value_db: Optional[float]) -> float:
    """
    Convert a power ratio from decibels to a linear gain.

    Args:
        value_db: Gain in dB. None or -inf stand for a zero linear gain.

    Returns:
        float: 10**(value_db/10)
    """
    if value_db is None:
        return 0.0
    value_db = float(value_db)
    if value_db == -math.inf:
        return 0.0
    if not math.isfinite(value_db):
        raise DomainError(f"gain in dB must be finite, got {value_db!r}")
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> Optional[float]:
    """Convert a linear gain to dB; a zero gain maps to None (JSON null)."""
    if value == 0.0:
        return None
    return 10.0 * math.log10(value)


@dataclass(frozen=True)
class ChannelInstance:
    """
    Symmetric K-stage virtual full-duplex relay channel.

    Both paths see the same gains. Gains are linear; dB only appears at the
    JSON boundary.

    Fields:
        num_stages: Number of relay stages K (>= 1)
        snr: K+1 direct hop gains; snr[k-1] is the hop into stage k, the last
             entry is the hop into the destination
        inr: K cross gains; inr[k-1] couples the two relays of stage k
    """
    num_stages: int
    snr: Tuple[float, ...]
    inr: Tuple[float, ...]

    def __post_init__(self):
        """Coerce gains to float tuples and check the invariants."""
        if not isinstance(self.num_stages, int) or isinstance(self.num_stages, bool) or self.num_stages < 1:
            raise ContractViolation(f"num_stages must be an integer >= 1, got {self.num_stages!r}")
        snr = tuple(float(v) for v in self.snr)
        inr = tuple(float(v) for v in self.inr)
        if len(snr) != self.num_stages + 1:
            raise ContractViolation(
                f"snr must have K+1={self.num_stages + 1} entries, got {len(snr)}"
            )
        if len(inr) != self.num_stages:
            raise ContractViolation(
                f"inr must have K={self.num_stages} entries, got {len(inr)}"
            )
        for name, values in (("snr", snr), ("inr", inr)):
            for index, value in enumerate(values):
                if not math.isfinite(value) or value < 0.0:
                    raise DomainError(f"{name}[{index}] must be finite and >= 0, got {value!r}")
        object.__setattr__(self, 'snr', snr)
        object.__setattr__(self, 'inr', inr)

    def snr_at(self, k: int) -> float:
        """Direct gain of the hop into stage k (k = 1..K+1, K+1 = destination)."""
        if not 1 <= k <= self.num_stages + 1:
            raise DomainError(f"hop index {k} outside 1..{self.num_stages + 1}")
        return self.snr[k - 1]

    def inr_at(self, k: int) -> float:
        """Cross gain at stage k; the destination (k = K+1) hears no cross link."""
        if not 1 <= k <= self.num_stages + 1:
            raise DomainError(f"stage index {k} outside 1..{self.num_stages + 1}")
        if k == self.num_stages + 1:
            return 0.0
        return self.inr[k - 1]

    def with_gains(self, snr: Optional[Sequence[float]] = None, inr: Optional[Sequence[float]] = None) -> 'ChannelInstance':
        """Return a copy with replaced gain vectors."""
        return ChannelInstance(
            num_stages=self.num_stages,
            snr=tuple(snr) if snr is not None else self.snr,
            inr=tuple(inr) if inr is not None else self.inr,
        )

    def digest(self) -> str:
        """SHA-256 over the repr of the linear gains, used to tag sweep records."""
        text = repr((self.num_stages, self.snr, self.inr))
        return hashlib.sha256(text.encode('utf-8')).hexdigest()

    @classmethod
    def from_db(cls, snr_db: Sequence[Optional[float]], inr_db: Sequence[Optional[float]]) -> 'ChannelInstance':
        """Build an instance from dB gains (None meaning a zero linear gain)."""
        return cls(
            num_stages=len(inr_db),
            snr=tuple(db_to_linear(v) for v in snr_db),
            inr=tuple(db_to_linear(v) for v in inr_db),
        )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ChannelInstance':
        """Create an instance from the JSON document layout {"K", "snr_db", "inr_db"}."""
        instance = cls.from_db(data['snr_db'], data['inr_db'])
        if instance.num_stages != data['K']:
            raise ContractViolation(
                f"K={data['K']} does not match {len(data['inr_db'])} inr_db entries"
            )
        return instance

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the JSON document layout."""
        return {
            'K': self.num_stages,
            'snr_db': [linear_to_db(v) for v in self.snr],
            'inr_db': [linear_to_db(v) for v in self.inr],
        }


@dataclass(frozen=True)
class EnsembleSpec:
    """
    Random ensemble of channel instances with INR_k = SNR**alpha_k.

    Fields:
        snr_db: Common direct gain in dB
        alpha_lo: Lower end of the uniform alpha interval (>= 0)
        alpha_hi: Upper end of the uniform alpha interval (>= alpha_lo)
        trials: Number of instances per stage count
        seed: 64-bit seed keying the counter-based generator
    """
    snr_db: float
    alpha_lo: float
    alpha_hi: float
    trials: int
    seed: int = 0
    snr_linear: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        """Validate the interval and derive the linear gain once."""
        if not math.isfinite(self.snr_db):
            raise DomainError(f"snr_db must be finite, got {self.snr_db!r}")
        if not (0.0 <= self.alpha_lo <= self.alpha_hi) or not math.isfinite(self.alpha_hi):
            raise DomainError(
                f"alpha interval must satisfy 0 <= alpha_lo <= alpha_hi, got [{self.alpha_lo}, {self.alpha_hi}]"
            )
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ContractViolation(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.seed, int) or not -(2 ** 63) <= self.seed < 2 ** 64:
            raise ContractViolation(f"seed must be a 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, 'snr_linear', db_to_linear(self.snr_db))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EnsembleSpec':
        """Create a spec from its JSON document."""
        return cls(
            snr_db=float(data['snr_db']),
            alpha_lo=float(data['alpha_lo']),
            alpha_hi=float(data['alpha_hi']),
            trials=int(data['trials']),
            seed=int(data.get('seed', 0)),
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the JSON document layout."""
        return {
            'snr_db': self.snr_db,
            'alpha_lo': self.alpha_lo,
            'alpha_hi': self.alpha_hi,
            'trials': self.trials,
            'seed': self.seed,
        }
