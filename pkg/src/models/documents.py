"""
JSON documents read by the command-line tools.

Each document is parsed by a pydantic model first, so that structural
problems are reported with the path of the offending field
(`file: instance.snr_db.2: Input should be a valid number`). The domain
constructors then enforce the numeric invariants.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..utils.errors import ConfigFileError

Document = TypeVar('Document', bound=BaseModel)


class _Strict(BaseModel):
    model_config = ConfigDict(extra='forbid')


class ChannelInstanceDoc(_Strict):
    K: int = Field(ge=1)
    snr_db: List[Optional[float]]
    inr_db: List[Optional[float]]

    @model_validator(mode='after')
    def check_lengths(self):
        if len(self.snr_db) != self.K + 1:
            raise ValueError(f"snr_db needs K+1={self.K + 1} values, got {len(self.snr_db)}")
        if len(self.inr_db) != self.K:
            raise ValueError(f"inr_db needs K={self.K} values, got {len(self.inr_db)}")
        return self


class EnsembleSpecDoc(_Strict):
    snr_db: float
    alpha_lo: float = Field(ge=0.0)
    alpha_hi: float = Field(ge=0.0)
    trials: int = Field(ge=1)
    seed: int = 0


class ModeConfigDoc(_Strict):
    qmf_set: List[int] = Field(default_factory=list)
    theta: Optional[List[float]] = None
    decoder: Literal['sd', 'jd'] = 'sd'
    variant: Literal['printed', 'theorem'] = 'printed'


class GridSearchDoc(_Strict):
    kind: Literal['grid']
    points_per_dim: int = Field(default=101, ge=2)


class CoordinateSearchDoc(_Strict):
    kind: Literal['coordinate']
    restarts: int = Field(default=2, ge=0)
    sweeps: int = Field(default=4, ge=1)
    tol: float = Field(default=1e-6, gt=0.0, lt=1.0)


class SearchSpecDoc(_Strict):
    mode_search: Literal['exhaustive', 'given'] = 'exhaustive'
    qmf_set: List[int] = Field(default_factory=list)
    theta_search: Union[GridSearchDoc, CoordinateSearchDoc] = Field(
        default_factory=lambda: CoordinateSearchDoc(kind='coordinate'), discriminator='kind'
    )
    decoder: Literal['sd', 'jd'] = 'sd'
    variant: Literal['printed', 'theorem'] = 'printed'


class RateConfigDoc(_Strict):
    """Input of `rate`: one instance and one configuration."""
    instance: ChannelInstanceDoc
    config: ModeConfigDoc = Field(default_factory=ModeConfigDoc)


class OptimizeConfigDoc(_Strict):
    """Input of `optimize`: one instance and an optional search description."""
    instance: ChannelInstanceDoc
    search: SearchSpecDoc = Field(default_factory=SearchSpecDoc)


class NodeInputDoc(_Strict):
    x_alphabet: List[str] = Field(min_length=1)
    p_x: Optional[List[float]] = None
    u_alphabet: List[str] = Field(default_factory=list)
    p_u: Optional[List[float]] = None
    p_x_given_u: Optional[List[List[float]]] = None


class StageChannelDoc(_Strict):
    y_alphabet: List[str] = Field(min_length=1)
    pmf: List[Any]


class PathSpecDoc(_Strict):
    nodes: List[NodeInputDoc]
    channels: List[StageChannelDoc]
    quantizers: Dict[str, str] = Field(default_factory=dict)


class DmNetworkSpecDoc(_Strict):
    K: int = Field(ge=1)
    paths: List[PathSpecDoc] = Field(min_length=1, max_length=2)


def _format_errors(source: str, error: ValidationError) -> str:
    lines = []
    for item in error.errors():
        location = '.'.join(str(part) for part in item['loc']) or '<root>'
        lines.append(f"{source}: {location}: {item['msg']}")
    return '\n'.join(lines)


def parse_document(data: Any, model: Type[Document], source: str = '<input>') -> Document:
    """
    Validate already-decoded JSON against a document model.

    Raises:
        ConfigFileError: With one path-qualified line per problem
    """
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise ConfigFileError(_format_errors(source, e))


def load_document(path: Union[str, Path], model: Type[Document]) -> Document:
    """
    Read and validate a JSON document.

    Args:
        path: File to read
        model: Document model to validate against

    Returns:
        Document: The validated model

    Raises:
        ConfigFileError: If the file is unreadable, not JSON, or invalid
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigFileError(f"{path}: cannot read file ({e.strerror})")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigFileError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")
    return parse_document(data, model, str(path))


def dump_document(data: Dict[str, Any]) -> str:
    """Serialize a report: UTF-8 friendly, indent 2, sorted keys."""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + '\n'
