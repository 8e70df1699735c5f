"""One-parameter quantizer families for QMF relays of discrete memoryless networks."""

from abc import ABC, abstractmethod
from typing import Dict, Sequence, Tuple

import numpy as np

from ..utils.errors import DmSpecError


class QuantizerFamily(ABC):
    """
    Conditional pmfs p(yhat | y) indexed by a distortion knob d in [0, 1].

    Every family is lossless at d = 0 and carries no information about y at
    d = 1. Subclasses must make I(Yhat; Y | side information) non-increasing
    in d; the solver checks this numerically before bisecting on d.
    """

    name: str = ''

    @abstractmethod
    def output_alphabet(self, y_alphabet: Sequence[str]) -> Tuple[str, ...]:
        """Alphabet of the quantized observation."""

    @abstractmethod
    def conditional(self, y_size: int, d: float) -> np.ndarray:
        """Array of shape (|Y|, |Yhat|) whose row y is p(yhat | y)."""

    @staticmethod
    def _check_knob(d: float) -> float:
        d = float(d)
        if not 0.0 <= d <= 1.0:
            raise ValueError(f"distortion knob must lie in [0, 1], got {d!r}")
        return d


class ErasureQuantizer(QuantizerFamily):
    """Keep y with probability 1 - d, output an erasure symbol otherwise."""

    name = 'erasure'
    erasure_symbol = '?'

    def output_alphabet(self, y_alphabet: Sequence[str]) -> Tuple[str, ...]:
        symbol = self.erasure_symbol
        while symbol in y_alphabet:
            symbol += '?'
        return tuple(y_alphabet) + (symbol,)

    def conditional(self, y_size: int, d: float) -> np.ndarray:
        d = self._check_knob(d)
        table = np.zeros((y_size, y_size + 1))
        table[:, :y_size] = (1.0 - d) * np.eye(y_size)
        table[:, y_size] = d
        return table


class FlipQuantizer(QuantizerFamily):
    """Keep y with probability 1 - d, otherwise replace it by a uniform symbol."""

    name = 'flip'

    def output_alphabet(self, y_alphabet: Sequence[str]) -> Tuple[str, ...]:
        return tuple(y_alphabet)

    def conditional(self, y_size: int, d: float) -> np.ndarray:
        d = self._check_knob(d)
        return (1.0 - d) * np.eye(y_size) + d / y_size


QUANTIZER_FAMILIES: Dict[str, QuantizerFamily] = {
    'erasure': ErasureQuantizer(),
    'flip': FlipQuantizer(),
}

DEFAULT_QUANTIZER = 'erasure'


def get_quantizer_family(name: str) -> QuantizerFamily:
    """
    Look up a built-in quantizer family.

    Raises:
        DmSpecError: If no family has the given name
    """
    family = QUANTIZER_FAMILIES.get(name)
    if family is None:
        raise DmSpecError(
            f"unknown quantizer family {name!r}; choose one of {sorted(QUANTIZER_FAMILIES)}"
        )
    return family
