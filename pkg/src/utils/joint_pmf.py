"""
Dense joint pmfs over labelled finite alphabets and their information measures.

A JointPmf is an n-dimensional numpy array whose axis i belongs to label i.
Information measures are computed by direct summation over the table.
"""

import logging
import string
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError

logger = logging.getLogger(__name__)

# Direct summation only; larger tables are refused by callers
MAX_TABLE_ENTRIES = 10 ** 6

_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class JointPmf:
    """
    Joint distribution of labelled discrete variables.

    Fields:
        labels: Variable names, one per table axis
        table: Probabilities; table[i0, i1, ...] = p(labels[0]=i0, labels[1]=i1, ...)
    """
    labels: Tuple[str, ...]
    table: np.ndarray

    def __post_init__(self):
        """Check shape and normalization, then store a read-only normalized copy."""
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise DomainError(f"duplicate labels in {labels}")
        table = np.array(self.table, dtype=float)
        if table.ndim != len(labels):
            raise DomainError(f"table has {table.ndim} axes but {len(labels)} labels were given")
        if not np.all(np.isfinite(table)) or np.any(table < 0.0):
            raise DomainError("pmf entries must be finite and >= 0")
        total = float(table.sum())
        if abs(total - 1.0) > _SUM_TOLERANCE:
            raise DomainError(f"pmf over {labels} sums to {total!r}, not 1")
        table = table / total
        table.setflags(write=False)
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'table', table)

    @property
    def sizes(self) -> Dict[str, int]:
        return dict(zip(self.labels, self.table.shape))

    def _axes(self, labels: Iterable[str]) -> List[int]:
        axes = []
        for label in labels:
            if label not in self.labels:
                raise DomainError(f"label {label!r} not in pmf over {self.labels}")
            axes.append(self.labels.index(label))
        return axes

    def marginal(self, labels: Sequence[str]) -> 'JointPmf':
        """Marginal pmf of the given labels, axes in the given order."""
        labels = tuple(labels)
        keep = self._axes(labels)
        drop = tuple(i for i in range(len(self.labels)) if i not in keep)
        reduced = self.table.sum(axis=drop) if drop else self.table
        kept_order = sorted(keep)
        permutation = [kept_order.index(i) for i in keep]
        return JointPmf(labels=labels, table=np.transpose(reduced, permutation))

    def entropy(self, labels: Optional[Sequence[str]] = None) -> float:
        """Joint entropy in bits of the given labels (all labels by default)."""
        if labels is None:
            probs = self.table
        elif len(labels) == 0:
            return 0.0
        else:
            probs = self.marginal(labels).table
        positive = probs[probs > 0.0]
        return float(-np.sum(positive * np.log2(positive)))

    @classmethod
    def from_factors(
        cls,
        factors: Sequence[Tuple[Sequence[str], np.ndarray]],
        labels: Sequence[str],
        max_entries: int = MAX_TABLE_ENTRIES,
    ) -> 'JointPmf':
        """
        Multiply conditional and marginal factors into one joint table.

        Each factor is (axis labels, array); a conditional p(b | a) is given
        with its conditioning labels first, e.g. (("a", "b"), p_b_given_a).

        Args:
            factors: Factors whose product is the joint pmf
            labels: Output axis order; every label must appear in some factor
            max_entries: Largest allowed product alphabet

        Raises:
            DomainError: On unknown labels, inconsistent axis sizes or an
                         oversized product alphabet
        """
        labels = tuple(labels)
        letters = string.ascii_letters
        if len(labels) > len(letters):
            raise DomainError(f"at most {len(letters)} variables are supported, got {len(labels)}")
        symbol = {label: letters[i] for i, label in enumerate(labels)}

        sizes: Dict[str, int] = {}
        operands = []
        subscripts = []
        for factor_labels, array in factors:
            array = np.asarray(array, dtype=float)
            if array.ndim != len(factor_labels):
                raise DomainError(
                    f"factor over {tuple(factor_labels)} has {array.ndim} axes"
                )
            for label, size in zip(factor_labels, array.shape):
                if label not in symbol:
                    raise DomainError(f"factor label {label!r} not among {labels}")
                if sizes.setdefault(label, size) != size:
                    raise DomainError(
                        f"alphabet of {label!r} has size {sizes[label]} in one factor and {size} in another"
                    )
            operands.append(array)
            subscripts.append(''.join(symbol[label] for label in factor_labels))

        missing = [label for label in labels if label not in sizes]
        if missing:
            raise DomainError(f"no factor mentions {missing}")
        entries = int(np.prod([sizes[label] for label in labels], dtype=object))
        if entries > max_entries:
            raise DomainError(
                f"product alphabet has {entries} entries, above the limit of {max_entries}"
            )

        expression = ','.join(subscripts) + '->' + ''.join(symbol[label] for label in labels)
        logger.debug(f"Building joint pmf with einsum '{expression}' ({entries} entries)")
        return cls(labels=labels, table=np.einsum(expression, *operands))


def mutual_information(
    p: JointPmf,
    group_a: Sequence[str],
    group_b: Sequence[str],
    given: Sequence[str] = (),
) -> float:
    """
    Conditional mutual information I(A; B | C) in bits.

    Computed as H(A,C) + H(B,C) - H(A,B,C) - H(C).

    Args:
        p: Joint pmf holding every label
        group_a: Labels of A (non-empty)
        group_b: Labels of B (non-empty)
        given: Labels of C (may be empty)

    Returns:
        float: I(A; B | C) >= 0

    Raises:
        DomainError: If the groups overlap, are empty or name unknown labels
    """
    a, b, c = tuple(group_a), tuple(group_b), tuple(given)
    if not a or not b:
        raise DomainError("mutual information needs two non-empty label groups")
    seen = set()
    for label in a + b + c:
        if label in seen:
            raise DomainError(f"label {label!r} appears in more than one group")
        seen.add(label)
    p._axes(a + b + c)
    value = p.entropy(a + c) + p.entropy(b + c) - p.entropy(a + b + c) - p.entropy(c)
    # Entropy differences may land a few ulps below zero
    return max(0.0, value)
