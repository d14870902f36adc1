import pytest

from engine.config import ArchitectureKind, SUPPORTED_DISTANCES
from engine.datasets import CHAIN_MAPPING_TOTALS
from engine.exceptions import CapacityError, DomainError, MappingNotTabulatedError
from engine.layout import chain_mapping, check_capacity, code_qubit_counts, mapping_frame, max_gate_chain_size


@pytest.mark.parametrize("d,n_ph,n_d,n_a", [
    (1, 1, 1, 0),
    (3, 13, 7, 6),
    (5, 37, 19, 18),
    (13, 253, 127, 126),
])
def test_code_qubit_counts(d, n_ph, n_d, n_a):
    counts = code_qubit_counts(d)
    assert (counts.n_ph, counts.n_d, counts.n_a) == (n_ph, n_d, n_a)
    assert counts.n_d + counts.n_a == counts.n_ph


def test_segmented_split_at_thirteen():
    counts = code_qubit_counts(13)
    assert (counts.n_nonseg, counts.n_seg, counts.n_c) == (52, 74, 6)


def test_distance_one_has_a_single_chain():
    counts = code_qubit_counts(1)
    assert (counts.n_seg, counts.n_nonseg, counts.n_c) == (0, 0, 1)


def test_untabulated_distance_has_no_split():
    counts = code_qubit_counts(15)
    assert counts.n_ph == 337
    assert counts.n_seg is None and counts.n_c is None


@pytest.mark.parametrize("d", [0, -3, 4, 2.0])
def test_code_qubit_counts_rejects_bad_distance(d):
    with pytest.raises(DomainError):
        code_qubit_counts(d)


@pytest.mark.parametrize("d", SUPPORTED_DISTANCES)
def test_tabulated_chains_agree_with_closed_forms(d):
    counts = code_qubit_counts(d)
    layout = chain_mapping(ArchitectureKind.SDQC, d)
    data, nonseg, seg = layout.column_totals()
    assert data == counts.n_d
    assert nonseg + seg == counts.n_a
    assert sum(layout.occupancies) == CHAIN_MAPPING_TOTALS[d]
    check_capacity(layout, 60)


def test_largest_chain_at_thirteen():
    assert max_gate_chain_size(chain_mapping(ArchitectureKind.SDQC, 13)) == 58
    assert max_gate_chain_size(chain_mapping(ArchitectureKind.PHOTONIC, 3)) == 13


def test_qccd_uses_one_zone_per_qubit():
    layout = chain_mapping(ArchitectureKind.QCCD, 3)
    assert len(layout.chains) == 13
    assert layout.column_totals() == (7, 6, 0)
    assert max_gate_chain_size(layout) == 2


def test_distributed_mapping_needs_a_table_row():
    with pytest.raises(MappingNotTabulatedError):
        chain_mapping(ArchitectureKind.SDQC, 15)
    assert len(chain_mapping(ArchitectureKind.QCCD, 15).chains) == 337


def test_capacity_error_names_the_chain():
    with pytest.raises(CapacityError, match="chain 4"):
        check_capacity(chain_mapping(ArchitectureKind.SDQC, 13), 50)


def test_mapping_frame():
    frame = mapping_frame([3, 7])
    assert list(frame.columns) == ["d", "chain", "data", "nonseg", "seg", "total"]
    assert frame.to_dict("records") == [
        {"d": 3, "chain": 0, "data": 7, "nonseg": 6, "seg": 0, "total": 13},
        {"d": 7, "chain": 0, "data": 15, "nonseg": 10, "seg": 5, "total": 30},
        {"d": 7, "chain": 1, "data": 22, "nonseg": 16, "seg": 5, "total": 43},
    ]
    assert len(mapping_frame()) == 1 + 1 + 2 + 3 + 4 + 6
