"""Scalar information-theoretic primitives for Gaussian links.

All rates are in bits per channel use (log base 2 of 1 + SNR). Inputs are
validated, never clamped: a negative or non-finite argument is a bug upstream
and raises DomainError instead of producing NaN.
"""

import math

from .errors import DomainError, InfeasibleQuantizationError

# Rates handed around the library are plain floats in bits/channel use
RateValue = float


def _check_finite_nonnegative(name: str, value: float) -> float:
    """Return value as float, raising DomainError if it is negative or not finite."""
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
    return value


def gaussian_rate(effective_snr: float) -> RateValue:
    """
    Capacity of a point-to-point Gaussian link at the given effective SNR.

    Args:
        effective_snr: Linear signal-to-(noise plus interference) ratio

    Returns:
        RateValue: log2(1 + effective_snr)

    Raises:
        DomainError: If effective_snr is negative or not finite
    """
    effective_snr = _check_finite_nonnegative("effective_snr", effective_snr)
    return math.log2(1.0 + effective_snr)


def wyner_ziv_noise(snr_in: float, index_rate: float) -> float:
    """
    Quantization noise variance whose Wyner-Ziv index rate equals index_rate.

    Solves log2(1 + (1 + snr_in) / noise) = index_rate for noise.

    Args:
        snr_in: Linear SNR of the signal observed by the quantizing relay
        index_rate: Rate available to forward the bin index (bits/channel use)

    Returns:
        float: (1 + snr_in) / (2**index_rate - 1)

    Raises:
        DomainError: If snr_in is negative or not finite
        InfeasibleQuantizationError: If index_rate <= 0
    """
    snr_in = _check_finite_nonnegative("snr_in", snr_in)
    index_rate = float(index_rate)
    if math.isnan(index_rate) or index_rate <= 0.0:
        raise InfeasibleQuantizationError(
            f"index_rate must be > 0 for a finite quantization noise, got {index_rate!r}"
        )
    if math.isinf(index_rate):
        return 0.0
    return (1.0 + snr_in) / math.expm1(index_rate * math.log(2.0))


def wyner_ziv_rate(snr_in: float, noise: float) -> RateValue:
    """
    Index rate produced by quantizing with the given noise variance.

    Exact inverse of wyner_ziv_noise.

    Args:
        snr_in: Linear SNR of the signal observed by the quantizing relay
        noise: Quantization noise variance (> 0)

    Returns:
        RateValue: log2(1 + (1 + snr_in) / noise)

    Raises:
        DomainError: If snr_in is invalid or noise <= 0
    """
    snr_in = _check_finite_nonnegative("snr_in", snr_in)
    noise = float(noise)
    if not math.isfinite(noise) or noise <= 0.0:
        raise DomainError(f"noise must be finite and > 0, got {noise!r}")
    return math.log2(1.0 + (1.0 + snr_in) / noise)
