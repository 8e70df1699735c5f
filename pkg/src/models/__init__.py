"""Models package initialization."""

from .channel import ChannelInstance, EnsembleSpec
from .dm_network import DmNetworkSpec, DmRateResult
from .modes import Decoder, FormulaVariant, ModeConfig
from .rates import RateBreakdown

__all__ = [
    'ChannelInstance',
    'EnsembleSpec',
    'DmNetworkSpec',
    'DmRateResult',
    'Decoder',
    'FormulaVariant',
    'ModeConfig',
    'RateBreakdown',
]
