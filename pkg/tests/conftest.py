"""Shared fixtures: the worked Gaussian instance and small binary networks."""

import json
import math
from typing import Any, Dict, List, Optional

import numpy as np
import pytest

from src.models.channel import ChannelInstance
from src.models.dm_network import DmNetworkSpec


def h2(p: float) -> float:
    """Binary entropy in bits."""
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def bsc(flip: float) -> List[List[float]]:
    return [[1 - flip, flip], [flip, 1 - flip]]


def relay_channel(rule) -> List[List[List[float]]]:
    """Stage pmf with axes (x_own_prev, x_other, y) from rule(a, b) -> row over y."""
    return [[list(rule(a, b)) for b in range(2)] for a in range(2)]


def uniform_node() -> Dict[str, Any]:
    return {'x_alphabet': ['0', '1'], 'p_x': [0.5, 0.5]}


def split_node() -> Dict[str, Any]:
    """Binary relay input with a binary common-message auxiliary."""
    return {
        'x_alphabet': ['0', '1'],
        'u_alphabet': ['a', 'b'],
        'p_u': [0.5, 0.5],
        'p_x_given_u': [[0.9, 0.1], [0.2, 0.8]],
    }


def one_relay_network(
    stage_pmf: List[List[List[float]]],
    y_alphabet: List[str],
    destination_pmf: List[List[float]],
    relay: Optional[Dict[str, Any]] = None,
    quantizer: str = 'erasure',
) -> Dict[str, Any]:
    """JSON document of a symmetric K=1 network."""
    return {
        'K': 1,
        'paths': [{
            'nodes': [uniform_node(), relay or uniform_node()],
            'channels': [
                {'y_alphabet': y_alphabet, 'pmf': stage_pmf},
                {'y_alphabet': ['0', '1'], 'pmf': destination_pmf},
            ],
            'quantizers': {'1': quantizer},
        }],
    }


def noiseless_document() -> Dict[str, Any]:
    identity = relay_channel(lambda a, b: [1.0 if y == a else 0.0 for y in range(2)])
    return one_relay_network(identity, ['0', '1'], bsc(0.0))


def noisy_adder_document() -> Dict[str, Any]:
    """Relay hears a + b through 10% uniform noise; the destination sees a BSC(0.05)."""
    def rule(a, b):
        row = [0.1 / 3] * 3
        row[a + b] += 0.9
        return row
    return one_relay_network(relay_channel(rule), ['0', '1', '2'], bsc(0.05), relay=split_node())


@pytest.fixture
def worked_instance() -> ChannelInstance:
    return ChannelInstance(num_stages=1, snr=(100.0, 100.0), inr=(100.0,))


@pytest.fixture
def noiseless_network() -> DmNetworkSpec:
    return DmNetworkSpec.from_dict(noiseless_document())


@pytest.fixture
def noisy_adder_network() -> DmNetworkSpec:
    return DmNetworkSpec.from_dict(noisy_adder_document())


@pytest.fixture
def write_json(tmp_path):
    """Write a document into tmp_path and return its path as a string."""
    def write(name: str, data: Any) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding='utf-8')
        return str(path)
    return write


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


def random_instance(rng: np.random.Generator, max_stages: int = 4) -> ChannelInstance:
    K = int(rng.integers(1, max_stages + 1))
    return ChannelInstance(
        num_stages=K,
        snr=tuple(10 ** rng.uniform(0.0, 3.0, size=K + 1)),
        inr=tuple(10 ** rng.uniform(-1.0, 3.0, size=K)),
    )
