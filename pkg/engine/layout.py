"""
Logic:
- Counts the qubits of one superdense color-code logical qubit at distance d
- Places them on ion chains: tabulated segmented layouts for SDQC and Photonic DQC,
  one qubit per zone on the grid for QCCD
- Reports the chain size that sets the two-qubit gate time in syndrome rounds
- Renders the tabulated mapping as a DataFrame for the layout command
"""

import logging
from typing import List, Optional, Tuple

import pandas as pd

from engine.config import ArchitectureKind, FrozenModel
from engine.datasets import CHAIN_MAPPING
from engine.exceptions import CapacityError, DomainError, MappingNotTabulatedError

logger = logging.getLogger(__name__)

QCCD_GATE_CHAIN_SIZE = 2


class CodeCounts(FrozenModel):
    d: int
    n_ph: int
    n_d: int
    n_a: int
    # None where no segmented layout is tabulated
    n_seg: Optional[int] = None
    n_nonseg: Optional[int] = None
    n_c: Optional[int] = None


class ChainLayout(FrozenModel):
    kind: ArchitectureKind
    d: int
    chains: List[Tuple[int, int, int]]

    @property
    def occupancies(self):
        return [sum(chain) for chain in self.chains]

    def column_totals(self):
        data = sum(chain[0] for chain in self.chains)
        nonseg = sum(chain[1] for chain in self.chains)
        seg = sum(chain[2] for chain in self.chains)
        return data, nonseg, seg


def code_qubit_counts(d):
    """
    Input: odd code distance d >= 1
    Process: Closed-form qubit inventory; the segmented split comes from the tabulated mapping
    Output: CodeCounts
    """
    if not isinstance(d, int) or d < 1 or d % 2 == 0:
        raise DomainError(f"code distance must be a positive odd integer, got {d}")
    n_ph = (3 * d * d - 1) // 2
    n_d = (3 * d * d + 1) // 4
    n_a = 3 * (d * d - 1) // 4
    counts = {"d": d, "n_ph": n_ph, "n_d": n_d, "n_a": n_a}
    if d in CHAIN_MAPPING:
        chains = CHAIN_MAPPING[d]
        counts["n_nonseg"] = sum(chain[1] for chain in chains)
        counts["n_seg"] = sum(chain[2] for chain in chains)
        counts["n_c"] = len(chains)
    elif d == 1:
        counts.update(n_nonseg=0, n_seg=0, n_c=1)
    return CodeCounts(**counts)


def chain_mapping(kind, d):
    """
    Input: architecture kind and code distance
    Process: DQC kinds read the tabulated chains; QCCD places one qubit per zone,
             data zones first, then syndrome zones
    Output: ChainLayout
    """
    kind = ArchitectureKind(kind)
    if kind.is_distributed:
        if d not in CHAIN_MAPPING:
            raise MappingNotTabulatedError(
                f"chain mapping not tabulated for d={d}; available: {sorted(CHAIN_MAPPING)}"
            )
        return ChainLayout(kind=kind, d=d, chains=list(CHAIN_MAPPING[d]))

    counts = code_qubit_counts(d)
    zones = [(1, 0, 0)] * counts.n_d + [(0, 1, 0)] * counts.n_a
    return ChainLayout(kind=kind, d=d, chains=zones)


def max_gate_chain_size(layout):
    """Largest chain a two-qubit gate runs on during a syndrome round."""
    if layout.kind is ArchitectureKind.QCCD:
        return QCCD_GATE_CHAIN_SIZE
    return max(layout.occupancies)


def check_capacity(layout, chain_capacity):
    """
    Input: ChainLayout and the processor node capacity
    Process: Compares each chain's round occupancy against the capacity
    Output: None; raises CapacityError naming the first overfull chain
    """
    for index, occupancy in enumerate(layout.occupancies):
        if occupancy > chain_capacity:
            raise CapacityError(
                f"chain {index} at d={layout.d} holds {occupancy} ions, capacity is {chain_capacity}"
            )


def mapping_frame(distances=None):
    """
    Input: optional list of code distances (defaults to every tabulated distance)
    Process: One row per chain with the per-type counts and the chain total
    Output: DataFrame with columns d, chain, data, nonseg, seg, total
    """
    rows = []
    for d in distances or sorted(CHAIN_MAPPING):
        layout = chain_mapping(ArchitectureKind.SDQC, d)
        for index, (data, nonseg, seg) in enumerate(layout.chains):
            rows.append({
                "d": d,
                "chain": index,
                "data": data,
                "nonseg": nonseg,
                "seg": seg,
                "total": data + nonseg + seg,
            })
    return pd.DataFrame(rows, columns=["d", "chain", "data", "nonseg", "seg", "total"])
