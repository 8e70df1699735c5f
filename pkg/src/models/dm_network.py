"""
Discrete memoryless two-path relay networks.

Paths are numbered 1 and 2. On path i, node k (k = 0 is the source) sends
X_{i,k}; the relay of stage k receives Y_{i,k}, which depends on the
previous node of its own path and on the same-stage relay of the other path:
p(y_{i,k} | x_{i,k-1}, x_{other,k}). The destination output Y_{i,K+1}
depends on x_{i,K} only.

JSON layout (pmfs are nested arrays in row-major order):

    {"K": 1,
     "paths": [{"nodes": [{"x_alphabet": [...], "p_x": [...],
                           "u_alphabet": [...], "p_u": [...],
                           "p_x_given_u": [[...]]}, ...],          # nodes 0..K
                "channels": [{"y_alphabet": [...],
                              "pmf": [[[...]]]}, ...],             # stages 1..K+1
                "quantizers": {"1": "erasure"}}, ...]}

Channel pmf axes are (x_own_prev, x_other, y) for stages 1..K and
(x_own_prev, y) at the destination. A single entry in "paths" describes both
paths (the symmetric network).
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..utils.errors import DmSpecError
from .quantizers import DEFAULT_QUANTIZER

PATHS = (1, 2)


def other_path(path: int) -> int:
    return 3 - path


def _as_array(value: Any, where: str) -> np.ndarray:
    try:
        return np.asarray(value, dtype=float)
    except (TypeError, ValueError) as e:
        raise DmSpecError(f"{where}: not a rectangular numeric array ({e})")


@dataclass(frozen=True)
class NodeInput:
    """
    Input distribution of one transmitting node.

    Fields:
        x_alphabet: Symbols of X
        p_x: Marginal p(x); derived from p_u and p_x_given_u when omitted
        u_alphabet: Symbols of the common-message auxiliary U (empty when the
                    node never splits its message)
        p_u: p(u)
        p_x_given_u: Array of shape (|U|, |X|), row u is p(x | u)
    """
    x_alphabet: Tuple[str, ...]
    p_x: Optional[np.ndarray] = None
    u_alphabet: Tuple[str, ...] = ()
    p_u: Optional[np.ndarray] = None
    p_x_given_u: Optional[np.ndarray] = None

    @property
    def has_auxiliary(self) -> bool:
        return bool(self.u_alphabet)

    def marginal_x(self) -> np.ndarray:
        if self.p_x is not None:
            return self.p_x
        return self.p_u @ self.p_x_given_u

    @classmethod
    def from_dict(cls, data: Dict[str, Any], where: str) -> 'NodeInput':
        def optional(key):
            return _as_array(data[key], f"{where}.{key}") if data.get(key) is not None else None
        return cls(
            x_alphabet=tuple(str(s) for s in data['x_alphabet']),
            p_x=optional('p_x'),
            u_alphabet=tuple(str(s) for s in data.get('u_alphabet') or ()),
            p_u=optional('p_u'),
            p_x_given_u=optional('p_x_given_u'),
        )

    def to_dict(self) -> Dict[str, Any]:
        data = {'x_alphabet': list(self.x_alphabet)}
        if self.p_x is not None:
            data['p_x'] = self.p_x.tolist()
        if self.u_alphabet:
            data['u_alphabet'] = list(self.u_alphabet)
            data['p_u'] = self.p_u.tolist() if self.p_u is not None else None
            data['p_x_given_u'] = self.p_x_given_u.tolist() if self.p_x_given_u is not None else None
        return data


@dataclass(frozen=True)
class StageChannel:
    """Receiver alphabet and channel conditional of one stage."""
    y_alphabet: Tuple[str, ...]
    pmf: np.ndarray

    @classmethod
    def from_dict(cls, data: Dict[str, Any], where: str) -> 'StageChannel':
        return cls(
            y_alphabet=tuple(str(s) for s in data['y_alphabet']),
            pmf=_as_array(data['pmf'], f"{where}.pmf"),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {'y_alphabet': list(self.y_alphabet), 'pmf': self.pmf.tolist()}


@dataclass(frozen=True)
class PathSpec:
    """
    One relay path.

    Fields:
        nodes: Input distributions of nodes 0..K
        channels: Channels of stages 1..K+1 (the last one feeds the destination)
        quantizers: Stage -> quantizer family name for relays that may run QMF
    """
    nodes: Tuple[NodeInput, ...]
    channels: Tuple[StageChannel, ...]
    quantizers: Dict[int, str] = field(default_factory=dict)

    def quantizer_name(self, stage: int) -> str:
        return self.quantizers.get(stage, DEFAULT_QUANTIZER)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], where: str) -> 'PathSpec':
        return cls(
            nodes=tuple(NodeInput.from_dict(node, f"{where}.nodes.{k}") for k, node in enumerate(data['nodes'])),
            channels=tuple(
                StageChannel.from_dict(channel, f"{where}.channels.{s}") for s, channel in enumerate(data['channels'])
            ),
            quantizers={int(k): str(v) for k, v in (data.get('quantizers') or {}).items()},
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'nodes': [node.to_dict() for node in self.nodes],
            'channels': [channel.to_dict() for channel in self.channels],
            'quantizers': {str(k): v for k, v in sorted(self.quantizers.items())},
        }


@dataclass(frozen=True)
class DmNetworkSpec:
    """
    Finite-alphabet two-path network with its input and quantizer choices.

    Fields:
        num_stages: K
        paths: (path 1, path 2)
    """
    num_stages: int
    paths: Tuple[PathSpec, PathSpec]

    def path(self, i: int) -> PathSpec:
        return self.paths[i - 1]

    def node(self, i: int, k: int) -> NodeInput:
        return self.path(i).nodes[k]

    def channel(self, i: int, stage: int) -> StageChannel:
        """Channel into stage 1..K+1 of path i."""
        return self.path(i).channels[stage - 1]

    @classmethod
    def symmetric(cls, num_stages: int, path: PathSpec) -> 'DmNetworkSpec':
        return cls(num_stages=num_stages, paths=(path, path))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DmNetworkSpec':
        """Create a spec from its JSON document; array shapes are checked by validate_dm_spec."""
        paths = [PathSpec.from_dict(p, f"paths.{n}") for n, p in enumerate(data['paths'])]
        if len(paths) == 1:
            paths = paths * 2
        if len(paths) != 2:
            raise DmSpecError(f"paths: expected 1 or 2 entries, got {len(paths)}")
        return cls(num_stages=int(data['K']), paths=(paths[0], paths[1]))

    def to_dict(self) -> Dict[str, Any]:
        return {'K': self.num_stages, 'paths': [p.to_dict() for p in self.paths]}


@dataclass(frozen=True)
class SpecViolation:
    """One failed check of a network spec."""
    location: str
    problem: str
    row_sum: Optional[float] = None

    def __str__(self) -> str:
        if self.row_sum is not None:
            return f"{self.location}: {self.problem} (row sum {self.row_sum!r})"
        return f"{self.location}: {self.problem}"


@dataclass(frozen=True)
class ConstraintTerm:
    """
    One mutual-information term of the rate region.

    Fields:
        path: Path i whose rate the term bounds (for 'wyner_ziv', the path of
              the quantizing relay)
        node: Transmitting node k (for 'wyner_ziv', the quantizing stage)
        kind: 'link' I_{i,k}, 'split' I_{i,k1}, 'cross' I(U_{i,k}; Y_{other,k}),
              'cross_sd' cross + split, 'jd_sum' I(U_{i,k}, X_{other,k-1}; Y_{other,k})
              + split, or 'wyner_ziv' I(Yhat_{i,k}; Y_{i,k} | X_{other,k})
        value: Bits per channel use
        segment: Segment start g_i(k) whose rate the term bounds
    """
    path: int
    node: int
    kind: str
    value: float
    segment: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'path': self.path,
            'node': self.node,
            'kind': self.kind,
            'value': float(self.value),
            'segment': self.segment,
        }


@dataclass(frozen=True)
class ConstraintSet:
    """Every region term for fixed modes and distortions."""
    terms: Tuple[ConstraintTerm, ...]

    def of_kind(self, kind: str) -> List[ConstraintTerm]:
        return [t for t in self.terms if t.kind == kind]

    def get(self, path: int, node: int, kind: str) -> ConstraintTerm:
        for term in self.terms:
            if term.path == path and term.node == node and term.kind == kind:
                return term
        raise KeyError(f"no {kind} term for path {path}, node {node}")

    def to_list(self) -> List[Dict[str, Any]]:
        return [t.to_dict() for t in self.terms]


@dataclass(frozen=True)
class DmRateResult:
    """
    Symmetric rate of a discrete memoryless network.

    Fields:
        rate_pair: (r_1, r_2), source-segment rates of the two paths
        symmetric_rate: min(r_1, r_2)
        segment_rates: Path -> {segment start: rate}
        distortions: (path, stage) -> knob d of each QMF relay
        residuals: (path, stage) -> |I(Yhat;Y|X_other) - segment rate| at d
        infeasible: (path, stage) -> (lowest, highest) index rate the family
                    reaches, for relays whose segment rate could not be matched
        constraints: All terms evaluated at the final distortions
        decoder: 'sd' or 'jd'
    """
    rate_pair: Tuple[float, float]
    symmetric_rate: float
    segment_rates: Dict[int, Dict[int, float]]
    distortions: Dict[Tuple[int, int], float]
    residuals: Dict[Tuple[int, int], float]
    infeasible: Dict[Tuple[int, int], Tuple[float, float]]
    constraints: ConstraintSet
    decoder: str

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the JSON report layout."""
        return {
            'rate_pair': [float(r) for r in self.rate_pair],
            'symmetric_rate': float(self.symmetric_rate),
            'segment_rates': {
                str(i): {str(k): float(v) for k, v in sorted(rates.items())}
                for i, rates in sorted(self.segment_rates.items())
            },
            'distortions': {f"{i},{k}": float(d) for (i, k), d in sorted(self.distortions.items())},
            'residuals': {f"{i},{k}": float(r) for (i, k), r in sorted(self.residuals.items())},
            'infeasible': {
                f"{i},{k}": [float(lo), float(hi)] for (i, k), (lo, hi) in sorted(self.infeasible.items())
            },
            'constraints': self.constraints.to_list(),
            'decoder': self.decoder,
        }
