import pytest

from engine.config import ArchitectureKind, ErrorRates
from engine.errors import (
    SYNDROME_DOMINATED,
    TRANSVERSAL_DOMINATED,
    budget_frame,
    crossover,
    fit_params,
    gate_loss_probability,
    logical_error,
    logical_error_frame,
    loss_model,
    monte_carlo_gate_loss,
    operational_error,
    pair_loss_probability,
    size_spares,
    transversal_gate_error,
)
from engine.exceptions import DatasetError, DomainError, NoFiniteSpareError


def test_operational_error_per_architecture():
    rates = ErrorRates()
    assert operational_error(ArchitectureKind.QCCD, rates) == pytest.approx(3.0e-4)
    assert operational_error(ArchitectureKind.SDQC, rates) == pytest.approx(1.08045e-3)
    assert operational_error(ArchitectureKind.SDQC, rates, purification_enabled=True) == pytest.approx(7.803e-4)
    assert operational_error(ArchitectureKind.PHOTONIC, rates) == pytest.approx(2.928045e-2)


def test_sdqc_error_budget(make_scenario):
    budget = transversal_gate_error(make_scenario("SDQC"))
    assert budget.p_o == pytest.approx(1.08045e-3)
    assert budget.junction_term == pytest.approx(2.0e-5)
    assert budget.decoherence_term == pytest.approx(2.17577e-4, rel=1e-5)
    assert budget.p_trans == pytest.approx(1.318027e-3, rel=1e-5)
    assert not budget.saturated


def test_qccd_error_budget(make_scenario):
    budget = transversal_gate_error(make_scenario("QCCD"))
    assert budget.n_junctions == pytest.approx(150.1966, rel=1e-5)
    assert budget.p_trans == pytest.approx(2.03024e-3, rel=1e-4)


def test_photonic_error_budget_ignores_scale(make_scenario):
    small = transversal_gate_error(make_scenario("photonic", n_logical=10))
    large = transversal_gate_error(make_scenario("photonic", n_logical=10000))
    assert small.p_trans == pytest.approx(2.935649e-2, rel=1e-6)
    assert small.p_trans == large.p_trans


def test_qccd_error_grows_with_scale(make_scenario):
    p = [transversal_gate_error(make_scenario("QCCD", n_logical=n)).p_trans for n in (2, 132, 2871)]
    assert p == sorted(p)


def test_purification_ratio(make_scenario):
    for n_logical, expected in ((2, 1.3584), (132, 1.2949)):
        plain = transversal_gate_error(make_scenario("SDQC", n_logical=n_logical)).p_trans
        purified = transversal_gate_error(make_scenario("SDQC", n_logical=n_logical, purification_enabled=True)).p_trans
        assert plain / purified == pytest.approx(expected, rel=1e-3)


def test_improvement_factor_scales_the_budget(make_scenario):
    base = transversal_gate_error(make_scenario("SDQC")).p_trans
    improved = transversal_gate_error(make_scenario("SDQC", lam=10.0)).p_trans
    assert improved == pytest.approx(base / 10, rel=1e-12)


def test_pair_loss_probability():
    assert pair_loss_probability(1e-5, 538) == pytest.approx(5.36558e-3, rel=1e-5)
    assert pair_loss_probability(0.0, 538) == 0.0
    assert pair_loss_probability(1e-5, 0) == 0.0
    assert pair_loss_probability(1e-18, 10) == pytest.approx(1e-17, rel=1e-9)
    with pytest.raises(DomainError):
        pair_loss_probability(1.0, 3)


def test_gate_loss_probability():
    p = 0.05
    expected = 1 - 0.95**11 - 11 * p * 0.95**10
    assert gate_loss_probability(p, 10, 1) == pytest.approx(expected, rel=1e-10)
    assert gate_loss_probability(p, 0, 3) == 0.0
    assert gate_loss_probability(0.0, 127, 0) == 0.0


def test_gate_loss_falls_with_spares():
    tails = [gate_loss_probability(5.366e-3, 127, n) for n in range(10)]
    assert tails == sorted(tails, reverse=True)


def test_size_spares():
    assert size_spares(0.0, 127, 1e-5) == 0
    n_spare = size_spares(5.36558e-3, 127, 1.318027e-5)
    assert n_spare == 6
    assert gate_loss_probability(5.36558e-3, 127, n_spare) < 1.318027e-5
    assert gate_loss_probability(5.36558e-3, 127, n_spare - 1) >= 1.318027e-5


def test_size_spares_rejects_total_loss():
    with pytest.raises(NoFiniteSpareError):
        size_spares(1.0, 127, 1e-5)
    with pytest.raises(DomainError):
        size_spares(0.1, 127, 0.0)


def test_loss_model_for_fermi_hubbard_scale(make_scenario):
    scenario = make_scenario("SDQC")
    model = loss_model(scenario, transversal_gate_error(scenario).p_trans)
    assert model.n_junctions == pytest.approx(538.0)
    assert model.n_pairs_required == 127
    assert model.n_spare == 6
    assert model.p_loss_per_gate < model.threshold


def test_monte_carlo_agrees_with_binomial_tail():
    analytic = gate_loss_probability(0.05, 10, 1)
    estimate, standard_error = monte_carlo_gate_loss(0.05, 10, 1, trials=200_000, seed=7)
    assert abs(estimate - analytic) < 5 * standard_error


def test_monte_carlo_is_independent_of_workers():
    serial = monte_carlo_gate_loss(0.05, 10, 1, trials=50_000, seed=3, workers=1)
    threaded = monte_carlo_gate_loss(0.05, 10, 1, trials=50_000, seed=3, workers=4)
    assert serial == threaded


def test_fit_params():
    fit = fit_params("sdqc", 13)
    assert fit.A == pytest.approx(2.08e4)
    assert fit.sigma_A == pytest.approx(0.51e4)
    assert fit.B == pytest.approx(7.33e-9)
    with pytest.raises(DatasetError):
        fit_params("sdqc", 15)


@pytest.mark.parametrize("kind,d", [("SDQC", 3), ("SDQC", 13), ("QCCD", 7), ("PhotonicDQC", 9), ("PhotonicDQC", 13)])
def test_crossover_matches_stored_value(kind, d):
    assert crossover(kind, d) == pytest.approx(fit_params(kind, d).p_star_at_lambda1, rel=0.02)


def test_crossover_balances_both_terms():
    p_star = crossover("SDQC", 11, 10.0)
    estimate = logical_error("SDQC", 11, p_star, 10.0)
    assert estimate.transversal_term == pytest.approx(estimate.syndrome_term, rel=1e-9)


@pytest.mark.parametrize("kind,expected", [("SDQC", 6.8096e-15), ("QCCD", 5.388e-15), ("photonic", 6.294e-7)])
def test_syndrome_floor(kind, expected):
    estimate = logical_error(kind, 13, 0.0, 10.0)
    assert estimate.transversal_term == 0.0
    assert estimate.central == pytest.approx(expected, rel=1e-3)
    assert estimate.regime == SYNDROME_DOMINATED


def test_logical_error_bounds_bracket_the_central_value():
    for p in (0.0, 1e-4, 1.3e-3, 0.1):
        for lambda_se in (0.5, 1.0, 10.0):
            estimate = logical_error("SDQC", 9, p, lambda_se)
            assert estimate.lower <= estimate.central <= estimate.upper


def test_regime_follows_crossover():
    assert logical_error("SDQC", 13, 0.1, 1.0).regime == TRANSVERSAL_DOMINATED
    assert logical_error("SDQC", 13, 1e-4, 1.0).regime == SYNDROME_DOMINATED


def test_logical_error_rejects_bad_inputs():
    with pytest.raises(DomainError):
        logical_error("SDQC", 13, -1e-3, 1.0)
    with pytest.raises(DomainError):
        logical_error("SDQC", 13, 1e-3, 0.0)


def test_logical_error_frame():
    frame = logical_error_frame(["sdqc", "qccd"], [3, 13], [1e-4, 1e-3, 1e-2], [1.0])
    assert len(frame) == 2 * 2 * 3
    for _, group in frame.groupby(["arch", "d"]):
        assert group["central"].is_monotonic_increasing


def test_budget_frame(make_scenario):
    frame = budget_frame(make_scenario("SDQC"), ["sdqc", "photonic"], [2, 132])
    assert list(frame["arch"]) == ["SDQC", "SDQC", "PhotonicDQC", "PhotonicDQC"]
    row = frame[(frame["arch"] == "SDQC") & (frame["n_logical"] == 132)].iloc[0]
    assert row["p_trans"] == pytest.approx(1.318027e-3, rel=1e-5)
    assert row["p_trans"] == pytest.approx(row["p_o"] + row["junction"] + row["decoherence"])


def test_pair_loss_matches_high_precision_exponentiation():
    from decimal import Decimal, getcontext

    getcontext().prec = 50
    for eps, n in ((1e-5, 538), (1e-6, 11494), (1e-4, 3)):
        exact = 1 - (1 - Decimal(eps)) ** n
        assert pair_loss_probability(eps, n) == pytest.approx(float(exact), rel=1e-12)
