"""Circuit-cost and qubit-resource accounting for DQNN vs the two
duplication-based baselines (QCL, CCQ)."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidArgumentError
from .statevec import build_ansatz


@dataclass(frozen=True)
class ResourceEstimate:
    algorithm: str            # "DQNN", "QCL" or "CCQ"
    duplication: int
    data_qubits: int
    n_g: object               # int for DQNN, symbolic descriptor for baselines
    n_b: object
    c: object                 # n_g * n_b when both are numeric
    data_qubits_table: int = None   # asymptotic ceil(log2 d) variant, DQNN only

    def __post_init__(self):
        if self.duplication < 1:
            raise InvalidArgumentError("duplication must be >= 1")


def circuit_cost(n_g: int, n_b: int) -> int:
    """Cost figure c = n_g * n_b."""
    if n_g < 1 or n_b < 1:
        raise InvalidArgumentError("gate and observable counts must be positive")
    return n_g * n_b


def dqnn_qubits(d: int) -> int:
    """ceil(log2(d+1)): the auxiliary slot needs one extra amplitude."""
    return math.ceil(math.log2(d + 1))


def resource_table(d: int, m_order: int, n_b: int = None, layers: int = 1):
    """Qubit/duplication comparison for approximating an M-order polynomial.

    DQNN gate count comes from the ring ansatz layout; baseline gate counts
    stay symbolic (polynomial-order descriptors). The table-style DQNN qubit
    count ceil(log2 d) is reported alongside the exact ceil(log2(d+1)).
    """
    if d < 1 or m_order < 1:
        raise InvalidArgumentError("need d >= 1 and M >= 1")
    n_dqnn = dqnn_qubits(d)
    ansatz = build_ansatz(n_dqnn, layers)
    n_g = len(ansatz.layout)
    dqnn = ResourceEstimate(
        algorithm="DQNN",
        duplication=1,
        data_qubits=n_dqnn,
        n_g=n_g,
        n_b=n_b,
        c=circuit_cost(n_g, n_b) if n_b else None,
        data_qubits_table=max(1, math.ceil(math.log2(max(d, 2)))),
    )
    qcl = ResourceEstimate(
        algorithm="QCL",
        duplication=m_order,
        data_qubits=d,
        n_g=f"poly(M*d) = poly({m_order}*{d})",
        n_b="O(1)",
        c=None,
    )
    ccq = ResourceEstimate(
        algorithm="CCQ",
        duplication=m_order,
        data_qubits=max(1, math.ceil(math.log2(d))) if d > 1 else 1,
        n_g=f"poly(M*ceil(log d)) = poly({m_order}*{max(1, math.ceil(math.log2(max(d, 2))))})",
        n_b="O(1)",
        c=None,
    )
    return dqnn, qcl, ccq
