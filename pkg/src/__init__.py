"""Achievable rates of multihop virtual full-duplex relay channels."""

__version__ = "1.0.0"
