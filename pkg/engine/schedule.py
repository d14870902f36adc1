"""
Logic:
- Two-qubit gate time as a function of ions resident in the chain
- Routing metrics: mean shuttling distance, swaps and junction traversals per architecture
- Counted operation sequences on the critical path of a remote gate, a syndrome round
  and entanglement distribution; pipelined entries are hidden from latency
- Schedule = latency sums over those sequences; logical clock = remote gate + d syndrome rounds
- Entanglement factory throughput against peak pair demand
- Heralded photonic entangling latency distribution (reporting only)
"""

import logging
import math
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from engine.config import ArchitectureKind, FrozenModel
from engine.datasets import PAIRS_DISTANCE, PAIRS_PER_FACTORY
from engine.exceptions import DomainError, MappingNotTabulatedError
from engine.layout import chain_mapping, check_capacity, code_qubit_counts, max_gate_chain_size

logger = logging.getLogger(__name__)

ROLES = ("remote_gate", "se_round", "ed")
SEGMENTED_FROM_DISTANCE = 7
SE_TWO_QUBIT_GATES = 7
PHOTONIC_ATTEMPT_RATE_HZ = 1.0e6
PHOTONIC_SUCCESS_PROBABILITY = 2.5e-4


class OperationKind(str, Enum):
    SINGLE_QUBIT_GATE = "single_qubit_gate"
    TWO_QUBIT_GATE = "two_qubit_gate"
    COOLING = "cooling"
    MERGE = "merge"
    SPLIT = "split"
    DETECTION = "detection"
    SWAP = "swap"
    PHOTONIC_ENTANGLING = "photonic_entangling"
    STABLE_TRANSPORT = "stable_transport"
    FAST_TRANSPORT = "fast_transport"


# OperationTimes field holding the unit duration of each kind
UNIT_TIME_FIELDS = {
    OperationKind.SINGLE_QUBIT_GATE: "single_qubit_gate",
    OperationKind.COOLING: "cooling",
    OperationKind.MERGE: "merge",
    OperationKind.SPLIT: "split",
    OperationKind.DETECTION: "measurement",
    OperationKind.SWAP: "physical_swap",
    OperationKind.PHOTONIC_ENTANGLING: "photonic_entangling_mean",
    OperationKind.STABLE_TRANSPORT: "stable_transport_per_unit",
    OperationKind.FAST_TRANSPORT: "fast_transport_per_unit",
}


class RoutingMetrics(FrozenModel):
    mean_distance: float
    mean_swaps: float = 0.0
    mean_junctions_distribution: float
    mean_junctions_detection: float

    @property
    def total_junctions(self):
        return self.mean_junctions_distribution + self.mean_junctions_detection


class OperationEntry(FrozenModel):
    kind: OperationKind
    count: float
    pipelined: bool = False
    # ions in the chain; two-qubit gates only
    chain_size: Optional[int] = None


class OperationSequence(FrozenModel):
    role: str
    entries: List[OperationEntry]

    def count(self, kind, pipelined=None):
        return sum(
            entry.count for entry in self.entries
            if entry.kind is kind and (pipelined is None or entry.pipelined is pipelined)
        )

    def critical(self):
        return [entry for entry in self.entries if not entry.pipelined]

    def hidden(self):
        return [entry for entry in self.entries if entry.pipelined]


class ScheduleResult(FrozenModel):
    kind: ArchitectureKind
    d: int
    n_logical: int
    pipelined: bool
    t_remote_tq: float
    # remote gate with distribution hidden; decoherence exposure is built from this
    t_remote_tq_pipelined: float
    t_ed: float
    t_se_round: float
    t_logical_clock: float
    breakdown: Dict[str, float]
    routing: RoutingMetrics


class ThroughputReport(FrozenModel):
    kind: ArchitectureKind
    pairs_per_factory_per_cycle: int
    photonic_pairs_per_cycle: int = 0
    pairs_estimated: bool = False
    t_logical_clock_us: float
    peak_demand_hz: float
    factory_throughput_hz: float
    photonic_only_demand_hz: Optional[float] = None
    photonic_interface_rate_hz: Optional[float] = None
    feasible: bool


def tq_gate_time(n_resident, times):
    """
    Input: number of ions in the chain and the unit operation times
    Process: max(slope * N - offset, floor)
    Output: duration in microseconds
    """
    if n_resident < 2:
        raise DomainError(f"a two-qubit gate needs at least 2 resident ions, got {n_resident}")
    return max(times.tq_slope * n_resident - times.tq_offset, times.tq_floor)


def sdqc_mean_distance(n_chains, n_logical):
    if n_logical < 2:
        raise DomainError(f"mean pair distance needs at least 2 logical qubits, got {n_logical}")
    return 2.0 * n_chains * (n_logical + 1) / 3.0


def routing_metrics(kind, counts, n_logical):
    """
    Input: architecture kind, CodeCounts and number of logical qubits
    Process: Closed-form mean distance, swaps and junction traversals
    Output: RoutingMetrics
    """
    kind = ArchitectureKind(kind)
    if kind is ArchitectureKind.QCCD:
        root = math.sqrt(counts.n_ph * n_logical)
        return RoutingMetrics(
            mean_distance=1.3 * root + 2.0,
            mean_swaps=0.23 * root + 0.1,
            mean_junctions_distribution=2.0 * (0.4 * root + 2.0),
            mean_junctions_detection=0.0,
        )
    if kind is ArchitectureKind.PHOTONIC:
        return RoutingMetrics(mean_distance=0.0, mean_junctions_distribution=4.0, mean_junctions_detection=2.0)

    if counts.n_c is None:
        raise MappingNotTabulatedError(f"no chain count tabulated for d={counts.d}")
    mean_distance = sdqc_mean_distance(counts.n_c, n_logical)
    return RoutingMetrics(
        mean_distance=mean_distance,
        mean_junctions_distribution=4.0 + mean_distance,
        mean_junctions_detection=2.0,
    )


def _entry(kind, count, pipelined=False, chain_size=None):
    return OperationEntry(kind=kind, count=count, pipelined=pipelined, chain_size=chain_size)


def _remote_gate_entries(kind, routing, chain_capacity):
    K = OperationKind
    if kind is ArchitectureKind.QCCD:
        swaps = routing.mean_swaps
        return [
            _entry(K.TWO_QUBIT_GATE, 1, chain_size=2),
            _entry(K.COOLING, 1),
            _entry(K.MERGE, swaps),
            _entry(K.SPLIT, swaps),
            _entry(K.SWAP, swaps),
            _entry(K.STABLE_TRANSPORT, routing.mean_distance),
        ]

    entries = [
        _entry(K.TWO_QUBIT_GATE, 1, chain_size=chain_capacity),
        _entry(K.SINGLE_QUBIT_GATE, 1),
        _entry(K.COOLING, 1),
        _entry(K.MERGE, 1),
        _entry(K.SPLIT, 1),
        _entry(K.DETECTION, 1),
        _entry(K.FAST_TRANSPORT, 2),
    ]
    return entries + _distribution_entries(kind, routing, chain_capacity)


def _distribution_entries(kind, routing, chain_capacity):
    K = OperationKind
    if kind is ArchitectureKind.SDQC:
        return [
            _entry(K.TWO_QUBIT_GATE, 1, pipelined=True, chain_size=chain_capacity),
            _entry(K.SINGLE_QUBIT_GATE, 1, pipelined=True),
            _entry(K.SPLIT, 1, pipelined=True),
            _entry(K.STABLE_TRANSPORT, 3 + routing.mean_distance, pipelined=True),
        ]
    if kind is ArchitectureKind.PHOTONIC:
        return [
            _entry(K.PHOTONIC_ENTANGLING, 1, pipelined=True),
            _entry(K.STABLE_TRANSPORT, 3, pipelined=True),
        ]
    return []


def _se_round_entries(kind, d, gate_chain_size, pipeline_detection):
    K = OperationKind
    if kind is ArchitectureKind.QCCD:
        return [
            _entry(K.TWO_QUBIT_GATE, SE_TWO_QUBIT_GATES, chain_size=gate_chain_size),
            _entry(K.SINGLE_QUBIT_GATE, 1),
            _entry(K.COOLING, 7),
            _entry(K.MERGE, 7),
            _entry(K.SPLIT, 6),
            _entry(K.DETECTION, 1),
            _entry(K.STABLE_TRANSPORT, 20),
        ]
    extra = 1 if d >= SEGMENTED_FROM_DISTANCE else 0
    return [
        _entry(K.TWO_QUBIT_GATE, SE_TWO_QUBIT_GATES, chain_size=gate_chain_size),
        _entry(K.SINGLE_QUBIT_GATE, 1),
        _entry(K.COOLING, 1 + extra),
        _entry(K.MERGE, 1),
        _entry(K.SPLIT, 1 + extra),
        _entry(K.DETECTION, 1, pipelined=pipeline_detection),
        _entry(K.FAST_TRANSPORT, 2),
    ]


def operation_sequence(kind, d, role, routing=None, chain_capacity=60, pipeline_detection=False):
    """
    Input: architecture kind, code distance, role (remote_gate, se_round or ed),
           routing metrics for the scale-dependent counts (two logical qubits when
           omitted), node capacity
    Process: Lists the counted unit operations of the role; entries hidden behind
             data-qubit operations carry pipelined=True
    Output: OperationSequence
    """
    kind = ArchitectureKind(kind)
    if role not in ROLES:
        raise DomainError(f"unknown role {role!r}; expected one of {', '.join(ROLES)}")

    if role == "se_round":
        gate_chain_size = max_gate_chain_size(chain_mapping(kind, d))
        entries = _se_round_entries(kind, d, gate_chain_size, pipeline_detection and kind.is_distributed)
        return OperationSequence(role=role, entries=entries)

    if routing is None:
        routing = routing_metrics(kind, code_qubit_counts(d), 2)
    if role == "ed":
        entries = _distribution_entries(kind, routing, chain_capacity)
    else:
        entries = _remote_gate_entries(kind, routing, chain_capacity)
    return OperationSequence(role=role, entries=entries)


def entry_duration(entry, times):
    if entry.kind is OperationKind.TWO_QUBIT_GATE:
        return entry.count * tq_gate_time(entry.chain_size, times)
    return entry.count * getattr(times, UNIT_TIME_FIELDS[entry.kind])


def sequence_latency(entries, times):
    return sum(entry_duration(entry, times) for entry in entries)


def _accumulate(breakdown, entries, times, weight=1.0):
    for entry in entries:
        key = entry.kind.value
        breakdown[key] = breakdown.get(key, 0.0) + weight * entry_duration(entry, times)


def schedule(scenario, pipelined=True):
    """
    Input: Scenario (architecture, distance, n_logical, times) and whether
           entanglement distribution is pipelined away
    Process: Sums unit times over critical-path entries of the remote gate and the
             syndrome round; distribution entries give T_ED, added to the remote gate
             only when not pipelined
    Output: ScheduleResult with durations in microseconds
    """
    kind = scenario.kind
    d = scenario.code_distance
    times = scenario.times
    capacity = scenario.architecture.chain_capacity
    try:
        layout = chain_mapping(kind, d)
        if kind.is_distributed:
            check_capacity(layout, capacity)
        routing = routing_metrics(kind, code_qubit_counts(d), scenario.n_logical)
        remote = operation_sequence(kind, d, "remote_gate", routing, capacity)
        se_round = operation_sequence(
            kind, d, "se_round", routing, capacity, scenario.architecture.pipeline_detection
        )
    except Exception as e:
        logger.error(f"Error building schedule for {kind.value} d={d}: {str(e)}")
        raise

    t_gate = sequence_latency(remote.critical(), times)
    t_ed = sequence_latency(remote.hidden(), times)
    t_se_round = sequence_latency(se_round.critical(), times)
    t_remote_tq = t_gate if pipelined else t_gate + t_ed

    breakdown = {}
    _accumulate(breakdown, remote.critical(), times)
    if not pipelined:
        _accumulate(breakdown, remote.hidden(), times)
    _accumulate(breakdown, se_round.critical(), times, weight=d)

    logger.debug(f"{kind.value} d={d} n_L={scenario.n_logical}: remote {t_remote_tq:.1f} us, round {t_se_round:.1f} us")
    return ScheduleResult(
        kind=kind,
        d=d,
        n_logical=scenario.n_logical,
        pipelined=pipelined,
        t_remote_tq=t_remote_tq,
        t_remote_tq_pipelined=t_gate,
        t_ed=t_ed,
        t_se_round=t_se_round,
        t_logical_clock=t_remote_tq + d * t_se_round,
        breakdown=breakdown,
        routing=routing,
    )


def estimate_pairs_per_factory(kind, d):
    """
    Input: distributed architecture kind and code distance
    Process: Per chain, d rounds of syndrome pairs plus half the data qubits for the
             transversal gate; the busiest chain sets the factory load
    Output: (total pairs, photonic-only pairs), both approximate
    """
    kind = ArchitectureKind(kind)
    if not kind.is_distributed:
        raise DomainError("QCCD has no entanglement factories")
    layout = chain_mapping(kind, d)
    if kind is ArchitectureKind.SDQC:
        total = max(math.ceil(d * (nonseg + seg) / 2 + data / 2) for data, nonseg, seg in layout.chains)
        return total, 0
    total = max(math.ceil(d * (nonseg + 2 * seg) / 2 + data / 2) for data, nonseg, seg in layout.chains)
    photonic = max(math.ceil(d * seg / 2 + data / 2) for data, nonseg, seg in layout.chains)
    return total, photonic


def factory_throughput_hz(chain_capacity, times):
    """Bell pairs per second from one factory chain filled to capacity."""
    if chain_capacity % 2:
        raise DomainError(f"factory chain capacity must be even, got {chain_capacity}")
    cycle_us = tq_gate_time(chain_capacity, times) + times.single_qubit_gate
    return (chain_capacity / 2) / (cycle_us * 1e-6)


def throughput_check(scenario, pairs_per_factory=None, photonic_pairs=None, t_logical_clock_us=None):
    """
    Input: Scenario, optional pair counts per factory per FT cycle and an optional
           FT cycle duration (defaults to the scenario's own pipelined logical clock)
    Process: Compares factory and photonic-interface rates against peak demand
    Output: ThroughputReport
    """
    kind = scenario.kind
    if not kind.is_distributed:
        raise DomainError("QCCD has no entanglement factories")
    d = scenario.code_distance
    estimated = False
    if pairs_per_factory is None:
        if d == PAIRS_DISTANCE:
            pairs_per_factory, default_photonic = PAIRS_PER_FACTORY[kind.value]
        else:
            pairs_per_factory, default_photonic = estimate_pairs_per_factory(kind, d)
            estimated = True
        if photonic_pairs is None:
            photonic_pairs = default_photonic
    if pairs_per_factory <= 0:
        raise DomainError(f"pairs per factory must be positive, got {pairs_per_factory}")
    photonic_pairs = photonic_pairs or 0

    if t_logical_clock_us is None:
        t_logical_clock_us = schedule(scenario).t_logical_clock
    cycle_s = t_logical_clock_us * 1e-6
    times = scenario.times
    throughput = factory_throughput_hz(scenario.architecture.chain_capacity, times)
    demand = pairs_per_factory / cycle_s
    feasible = throughput >= demand

    photonic_demand = None
    interface_rate = None
    if kind is ArchitectureKind.PHOTONIC:
        photonic_demand = photonic_pairs / cycle_s
        interface_rate = scenario.architecture.photonic_interfaces / (times.photonic_entangling_mean * 1e-6)
        feasible = feasible and interface_rate >= photonic_demand

    return ThroughputReport(
        kind=kind,
        pairs_per_factory_per_cycle=pairs_per_factory,
        photonic_pairs_per_cycle=photonic_pairs,
        pairs_estimated=estimated,
        t_logical_clock_us=t_logical_clock_us,
        peak_demand_hz=demand,
        factory_throughput_hz=throughput,
        photonic_only_demand_hz=photonic_demand,
        photonic_interface_rate_hz=interface_rate,
        feasible=feasible,
    )


def photonic_success_cdf(t_us, attempt_rate=PHOTONIC_ATTEMPT_RATE_HZ, success_probability=PHOTONIC_SUCCESS_PROBABILITY):
    """
    Input: elapsed time(s) in microseconds, attempt rate in Hz, per-attempt success probability
    Process: Probability that at least one of floor(t * rate) attempts heralded
    Output: float or ndarray in [0, 1]
    """
    attempts = np.floor(np.asarray(t_us, dtype=float) * 1e-6 * attempt_rate)
    cdf = -np.expm1(attempts * np.log1p(-success_probability))
    return float(cdf) if np.ndim(cdf) == 0 else cdf


def photonic_mean_latency(attempt_rate=PHOTONIC_ATTEMPT_RATE_HZ, success_probability=PHOTONIC_SUCCESS_PROBABILITY):
    """Mean heralding latency in microseconds."""
    return 1e6 / (attempt_rate * success_probability)


def timing_frame(base, kinds, n_logical_values):
    """
    Input: base Scenario, architecture kinds and a grid of logical-qubit counts
    Process: Schedules every point; distributed kinds are reported pipelined and not,
             QCCD only as scheduled
    Output: DataFrame with columns arch, n_logical, d, t_remote_tq_us, t_logical_clock_ms, pipelined
    """
    rows = []
    for kind in kinds:
        kind = ArchitectureKind.parse(kind)
        modes = (True, False) if kind.is_distributed else (False,)
        for n_logical in n_logical_values:
            scenario = base.with_architecture(kind, n_logical=n_logical)
            for pipelined in modes:
                result = schedule(scenario, pipelined=pipelined)
                rows.append({
                    "arch": result.kind.value,
                    "n_logical": n_logical,
                    "d": result.d,
                    "t_remote_tq_us": result.t_remote_tq,
                    "t_logical_clock_ms": result.t_logical_clock / 1000.0,
                    "pipelined": pipelined,
                })
    columns = ["arch", "n_logical", "d", "t_remote_tq_us", "t_logical_clock_ms", "pipelined"]
    return pd.DataFrame(rows, columns=columns)


def photonic_cdf_frame(t_values_us, attempt_rate=PHOTONIC_ATTEMPT_RATE_HZ, success_probability=PHOTONIC_SUCCESS_PROBABILITY):
    cdf = photonic_success_cdf(np.asarray(t_values_us, dtype=float), attempt_rate, success_probability)
    return pd.DataFrame({"t_us": list(t_values_us), "cdf": np.atleast_1d(cdf)})
