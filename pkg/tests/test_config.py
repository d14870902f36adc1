import json

import pytest

from engine.config import (
    ArchitectureKind,
    ArchitectureSpec,
    ErrorRates,
    ImprovementFactors,
    OperationTimes,
    Scenario,
    apply_improvement,
    apply_overrides,
    load_config,
    resolve_config_path,
)
from engine.exceptions import ConfigError, DomainError


def test_defaults_match_published_unit_times_and_rates():
    times = OperationTimes()
    assert (times.single_qubit_gate, times.measurement, times.cooling) == (5.0, 400.0, 300.0)
    assert (times.split, times.merge, times.physical_swap) == (128.0, 128.0, 200.0)
    assert (times.stable_transport_per_unit, times.fast_transport_per_unit) == (46.9, 4.6)
    assert times.photonic_entangling_mean == 4000.0
    assert times.unit_distance == 375.0
    rates = ErrorRates()
    assert (rates.p_sq, rates.p_tq, rates.p_meas, rates.p_pe, rates.p_junction, rates.p_idle_per_ms) == (
        1.5e-7, 3.0e-4, 9.0e-5, 2.85e-2, 1.0e-5, 3.7e-6,
    )


def test_empty_config_gives_one_default_scenario(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("{}")
    (scenario,) = load_config(path)
    assert scenario.kind is ArchitectureKind.SDQC
    assert scenario.code_distance == 13
    assert scenario.n_logical == 132
    assert scenario.improvements.lam == 1.0
    assert scenario.improvements.lambda_se == 1.0
    assert scenario.times == OperationTimes()
    assert scenario.errors == ErrorRates()


def test_no_path_uses_defaults():
    (scenario,) = load_config(None)
    assert scenario == Scenario()


def test_overriding_p_tq_matches_lambda_ten(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"errors": {"p_tq": 3.0e-5}}))
    (scenario,) = load_config(path)
    scaled = apply_improvement(ErrorRates(), 10.0)
    assert scenario.effective_errors.p_tq == pytest.approx(scaled.p_tq, rel=1e-15)


def test_even_distance_error_names_the_field(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"sweep": {"code_distances": [4]}}))
    with pytest.raises(ConfigError, match="code_distance"):
        load_config(path)


def test_unknown_key_is_rejected(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"errors": {"p_tqq": 1e-4}}))
    with pytest.raises(ConfigError, match="errors.p_tqq"):
        load_config(path)


def test_parse_failure_reports_line_and_column(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "errors": {\n    "p_tq": ,\n  }\n}\n')
    with pytest.raises(ConfigError, match="line 3 column"):
        load_config(path)


def test_sweep_section_expands_in_order(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({
        "sweep": {"architectures": ["sdqc", "qccd"], "code_distances": [3, 5], "lambdas": [1, 10]},
    }))
    scenarios = load_config(path)
    keys = [(s.kind.value, s.code_distance, s.improvements.lam) for s in scenarios]
    assert keys == [
        ("SDQC", 3, 1.0), ("SDQC", 3, 10.0), ("SDQC", 5, 1.0), ("SDQC", 5, 10.0),
        ("QCCD", 3, 1.0), ("QCCD", 3, 10.0), ("QCCD", 5, 1.0), ("QCCD", 5, 10.0),
    ]


def test_set_overrides_are_parsed_as_json():
    document = apply_overrides({}, ["errors.p_tq=3e-5", "architecture.kind=qccd", "sweep.lambdas=[1, 10]"])
    assert document == {
        "errors": {"p_tq": 3e-5},
        "architecture": {"kind": "qccd"},
        "sweep": {"lambdas": [1, 10]},
    }
    (first, second) = load_config(None, ["sweep.lambdas=[1, 10]", "architecture.kind=qccd"])
    assert first.kind is ArchitectureKind.QCCD
    assert second.improvements.lam == 10.0


def test_override_without_equals_is_rejected():
    with pytest.raises(ConfigError):
        apply_overrides({}, ["errors.p_tq"])


def test_config_path_resolution(monkeypatch, tmp_path):
    monkeypatch.delenv("SDQC_COST_CONFIG", raising=False)
    assert resolve_config_path(None) is None
    monkeypatch.setenv("SDQC_COST_CONFIG", str(tmp_path / "env.json"))
    assert resolve_config_path(None) == tmp_path / "env.json"
    assert resolve_config_path("cli.json").name == "cli.json"


def test_apply_improvement_examples():
    rates = ErrorRates()
    assert apply_improvement(rates, 1.0) == rates
    scaled = apply_improvement(rates, 10.0)
    assert scaled.p_tq == pytest.approx(3.0e-5)
    assert scaled.p_pe == pytest.approx(2.85e-3)
    assert apply_improvement(rates, 0.1).p_tq == pytest.approx(3.0e-3)


@pytest.mark.parametrize("lam", [0.0, -1.0])
def test_apply_improvement_rejects_nonpositive_lambda(lam):
    with pytest.raises(DomainError):
        apply_improvement(ErrorRates(), lam)


@pytest.mark.parametrize("a,b", [(2.0, 5.0), (0.1, 30.0), (7.0, 0.5)])
def test_apply_improvement_composes_multiplicatively(a, b):
    twice = apply_improvement(apply_improvement(ErrorRates(), a), b)
    once = apply_improvement(ErrorRates(), a * b)
    for name, value in once.model_dump().items():
        assert getattr(twice, name) == pytest.approx(value, rel=1e-14)


def test_lambda_se_defaults_to_lambda():
    assert ImprovementFactors(**{"lambda": 10.0}).lambda_se == 10.0
    assert ImprovementFactors(**{"lambda": 10.0, "lambda_se": 2.0}).lambda_se == 2.0


def test_unscaled_idle_keeps_base_decoherence():
    scenario = Scenario(improvements=ImprovementFactors(**{"lambda": 10.0, "scale_idle": False}))
    assert scenario.effective_errors.p_idle_per_ms == 3.7e-6
    assert scenario.effective_errors.p_tq == pytest.approx(3.0e-5)


def test_purification_requires_sdqc():
    with pytest.raises(ValueError, match="purification"):
        ArchitectureSpec(kind="qccd", purification_enabled=True)
    assert ArchitectureSpec(kind="sdqc", purification_enabled=True).purification_enabled


def test_with_architecture_drops_purification():
    scenario = Scenario(architecture=ArchitectureSpec(purification_enabled=True))
    assert not scenario.with_architecture("photonic").architecture.purification_enabled


@pytest.mark.parametrize("kind", ["sdqc", "photonic"])
def test_overfull_chains_fail_at_config_time(kind):
    with pytest.raises(ConfigError, match="capacity is 40"):
        load_config(None, [f"architecture.kind={kind}", "architecture.chain_capacity=40"])


@pytest.mark.parametrize("kind,d", [("qccd", 13), ("sdqc", 15)])
def test_capacity_only_binds_tabulated_dqc_chains(kind, d):
    scenario = Scenario(architecture=ArchitectureSpec(kind=kind, chain_capacity=2), code_distance=d)
    assert scenario.architecture.chain_capacity == 2


def test_scenario_json_round_trip_is_exact():
    scenario = Scenario(
        code_distance=11,
        n_logical=2871,
        improvements=ImprovementFactors(**{"lambda": 3.7, "lambda_se": 0.1 + 0.2}),
        errors=ErrorRates(p_tq=1.0 / 3.0),
    )
    restored = Scenario.from_json(scenario.to_json())
    assert restored == scenario
    assert restored.errors.p_tq == scenario.errors.p_tq
    assert restored.improvements.lambda_se == scenario.improvements.lambda_se


@pytest.mark.parametrize("text,kind", [
    ("sdqc", ArchitectureKind.SDQC),
    ("QCCD", ArchitectureKind.QCCD),
    ("photonic", ArchitectureKind.PHOTONIC),
    ("PhotonicDQC", ArchitectureKind.PHOTONIC),
])
def test_architecture_aliases(text, kind):
    assert ArchitectureKind.parse(text) is kind


def test_unknown_architecture():
    with pytest.raises(DomainError):
        ArchitectureKind.parse("superconducting")
