"""
Logic:
- Error budget of one remote physical two-qubit gate: operations + junction traversals + decoherence
- Ion loss: per-pair loss over junction traversals, per-gate binomial tail over spares,
  and the smallest spare count keeping loss below 1% of the gate error
- Seeded Monte Carlo estimate of the per-gate loss on independent substreams
- Two-regime logical error model from the fitted table, with corner bounds and crossover
- Curve builders for the errors command
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd
from scipy.special import logsumexp
from scipy.stats import binom

from engine.config import ArchitectureKind, FrozenModel
from engine.datasets import load_fit_rows
from engine.exceptions import DatasetError, DomainError, NoFiniteSpareError
from engine.layout import code_qubit_counts
from engine.schedule import schedule

logger = logging.getLogger(__name__)

SPARE_THRESHOLD_FRACTION = 0.01
TRANSVERSAL_DOMINATED = "transversal-dominated"
SYNDROME_DOMINATED = "syndrome-dominated"


class TransversalErrorBreakdown(FrozenModel):
    p_o: float
    junction_term: float
    decoherence_term: float
    p_trans: float
    n_junctions: float
    exposure_ms: float
    saturated: bool = False


class LossModel(FrozenModel):
    p_loss_per_pair: float
    n_junctions: float
    n_pairs_required: int
    n_spare: int
    p_loss_per_gate: float
    threshold: float


class FitParams(FrozenModel):
    arch: ArchitectureKind
    d: int
    A: float
    B: float
    alpha: float
    beta: float
    sigma_A: float
    sigma_B: float
    sigma_alpha: float
    sigma_beta: float
    r_squared: float
    p_star_at_lambda1: float


class LogicalErrorEstimate(FrozenModel):
    central: float
    lower: float
    upper: float
    regime: str
    transversal_term: float
    syndrome_term: float


def operational_error(kind, rates, purification_enabled=False):
    """Active-operation error of one remote gate."""
    if kind is ArchitectureKind.QCCD:
        return rates.p_tq
    if kind is ArchitectureKind.PHOTONIC:
        return rates.p_pe + 2 * rates.p_tq + 2 * rates.p_meas + 3 * rates.p_sq
    p_o = 3 * rates.p_tq + 2 * rates.p_meas + 3 * rates.p_sq
    if purification_enabled:
        # purified pairs remove the preparation gate's error
        p_o -= rates.p_tq + rates.p_sq
    return p_o


def transversal_gate_error(scenario, schedule_result=None):
    """
    Input: Scenario and optionally its ScheduleResult (computed when omitted)
    Process: p_trans = p_o + n_j * p_j + exposure_ms * p_idle with the globally scaled rates;
             distribution junctions of distributed kinds are left to the spare pairs
    Output: TransversalErrorBreakdown, flagged saturated when the budget reaches 1
    """
    kind = scenario.kind
    rates = scenario.effective_errors
    if schedule_result is None:
        schedule_result = schedule(scenario)
    routing = schedule_result.routing

    p_o = operational_error(kind, rates, scenario.architecture.purification_enabled)
    if kind is ArchitectureKind.QCCD:
        n_junctions = routing.total_junctions
        exposure_us = 2 * schedule_result.t_remote_tq_pipelined
    else:
        n_junctions = routing.mean_junctions_detection
        exposure_us = 2 * schedule_result.t_ed + 4 * schedule_result.t_remote_tq_pipelined

    exposure_ms = exposure_us / 1000.0
    junction_term = n_junctions * rates.p_junction
    decoherence_term = exposure_ms * rates.p_idle_per_ms
    p_trans = p_o + junction_term + decoherence_term
    saturated = max(p_o, junction_term, decoherence_term, p_trans) >= 1
    if saturated:
        logger.warning(f"Transversal gate error saturated for {kind.value} n_L={scenario.n_logical}: {p_trans:.3g}")
    return TransversalErrorBreakdown(
        p_o=p_o,
        junction_term=junction_term,
        decoherence_term=decoherence_term,
        p_trans=p_trans,
        n_junctions=n_junctions,
        exposure_ms=exposure_ms,
        saturated=saturated,
    )


def pair_loss_probability(eps_junction, n_junctions):
    """1 - (1 - eps)^n, evaluated without cancellation for small eps."""
    if not 0 <= eps_junction < 1:
        raise DomainError(f"junction loss probability must lie in [0, 1), got {eps_junction}")
    if n_junctions < 0:
        raise DomainError(f"junction count must be nonnegative, got {n_junctions}")
    if n_junctions == 0 or eps_junction == 0:
        return 0.0
    return float(-np.expm1(n_junctions * np.log1p(-eps_junction)))


def gate_loss_probability(p_pair, n_required, n_spare):
    """
    Input: per-pair loss probability, pairs a gate needs and spare pairs provisioned
    Process: P[more than n_spare of n_required + n_spare pairs are lost], summed in log space
    Output: probability
    """
    if not 0 <= p_pair < 1:
        raise DomainError(f"pair loss probability must lie in [0, 1), got {p_pair}")
    if n_required < 0 or n_spare < 0:
        raise DomainError("pair counts must be nonnegative")
    n_trials = n_required + n_spare
    if p_pair == 0 or n_spare >= n_trials:
        return 0.0
    losses = np.arange(n_spare + 1, n_trials + 1)
    log_tail = logsumexp(binom.logpmf(losses, n_trials, p_pair))
    return float(min(1.0, np.exp(log_tail)))


def size_spares(p_pair, n_required, threshold):
    """
    Input: per-pair loss probability, required pairs and the loss threshold
    Process: Increments the spare count from 0 until the gate loss drops below threshold
    Output: smallest sufficient spare count
    """
    if not threshold > 0:
        raise DomainError(f"loss threshold must be positive, got {threshold}")
    if p_pair >= 1:
        raise NoFiniteSpareError("every pair is lost; no spare count meets the threshold")
    if p_pair == 0:
        return 0
    n_spare = 0
    while gate_loss_probability(p_pair, n_required, n_spare) >= threshold:
        n_spare += 1
    return n_spare


def loss_model(scenario, p_trans, schedule_result=None):
    """
    Input: Scenario, its transversal gate error and optionally its ScheduleResult
    Process: Every junction on the distribution and detection paths feeds the pair loss;
             spares are sized against 1% of p_trans
    Output: LossModel
    """
    if schedule_result is None:
        schedule_result = schedule(scenario)
    n_junctions = schedule_result.routing.total_junctions
    p_pair = pair_loss_probability(scenario.effective_errors.p_junction, n_junctions)
    n_required = code_qubit_counts(scenario.code_distance).n_d
    threshold = SPARE_THRESHOLD_FRACTION * p_trans
    n_spare = size_spares(p_pair, n_required, threshold)
    logger.info(f"Sized {n_spare} spare pairs for {scenario.kind.value} n_L={scenario.n_logical} (p_pair={p_pair:.4g})")
    return LossModel(
        p_loss_per_pair=p_pair,
        n_junctions=n_junctions,
        n_pairs_required=n_required,
        n_spare=n_spare,
        p_loss_per_gate=gate_loss_probability(p_pair, n_required, n_spare),
        threshold=threshold,
    )


def _count_losses(rng, n_trials, p_pair, n_spare, size):
    return int(np.count_nonzero(rng.binomial(n_trials, p_pair, size=size) > n_spare))


def monte_carlo_gate_loss(p_pair, n_required, n_spare, trials=10**7, seed=42, chunks=8, workers=1):
    """
    Input: loss parameters, trial count, seed, number of substreams and worker threads
    Process: Each chunk draws binomial loss counts from its own spawned generator,
             so the estimate does not depend on how chunks are scheduled
    Output: (estimate, standard error of the estimate)
    """
    if trials <= 0 or chunks <= 0:
        raise DomainError("trials and chunks must be positive")
    sizes = [trials // chunks + (1 if i < trials % chunks else 0) for i in range(chunks)]
    generators = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(chunks)]
    n_trials = n_required + n_spare

    def run(pair):
        rng, size = pair
        return _count_losses(rng, n_trials, p_pair, n_spare, size)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        hits = sum(executor.map(run, zip(generators, sizes)))
    estimate = hits / trials
    standard_error = float(np.sqrt(estimate * (1 - estimate) / trials))
    return estimate, standard_error


def fit_params(kind, d):
    """
    Input: architecture kind and code distance
    Process: Looks up the fitted row
    Output: FitParams
    """
    kind = ArchitectureKind.parse(kind)
    row = load_fit_rows().get((kind.value, d))
    if row is None:
        raise DatasetError(f"no fitted logical error parameters for {kind.value} d={d}")
    return FitParams(
        arch=kind,
        d=d,
        A=row["A"][0],
        B=row["B"][0],
        alpha=row["alpha"][0],
        beta=row["beta"][0],
        sigma_A=row["A"][1],
        sigma_B=row["B"][1],
        sigma_alpha=row["alpha"][1],
        sigma_beta=row["beta"][1],
        r_squared=row["r_squared"],
        p_star_at_lambda1=row["p_star_at_lambda1"],
    )


def _term(coefficient, base, exponent, d):
    if base == 0:
        return 0.0
    return coefficient * base ** (exponent * d)


def _term_bounds(coefficient, sigma_c, base, exponent, sigma_e, d):
    """Corner bounds of coefficient * base^(exponent * d); the exponent corner flips when base > 1."""
    shrink = -sigma_e if base < 1 else sigma_e
    upper = _term(coefficient + sigma_c, base, exponent + shrink, d)
    lower = _term(max(coefficient - sigma_c, 0.0), base, exponent - shrink, d)
    return lower, upper


def logical_error(kind, d, p_trans, lambda_se):
    """
    Input: architecture kind, code distance, transversal gate error, syndrome improvement factor
    Process: A * p^(alpha d) + B * (1/lambda_se)^(beta d); bounds from parameter corners
    Output: LogicalErrorEstimate
    """
    if p_trans < 0:
        raise DomainError(f"transversal gate error must be nonnegative, got {p_trans}")
    if not lambda_se > 0:
        raise DomainError(f"syndrome improvement factor must be positive, got {lambda_se}")
    fit = fit_params(kind, d)
    syndrome_base = 1.0 / lambda_se

    transversal = _term(fit.A, p_trans, fit.alpha, d)
    syndrome = _term(fit.B, syndrome_base, fit.beta, d)
    t_lo, t_hi = _term_bounds(fit.A, fit.sigma_A, p_trans, fit.alpha, fit.sigma_alpha, d)
    s_lo, s_hi = _term_bounds(fit.B, fit.sigma_B, syndrome_base, fit.beta, fit.sigma_beta, d)

    regime = TRANSVERSAL_DOMINATED if p_trans > crossover(kind, d, lambda_se) else SYNDROME_DOMINATED
    return LogicalErrorEstimate(
        central=transversal + syndrome,
        lower=t_lo + s_lo,
        upper=t_hi + s_hi,
        regime=regime,
        transversal_term=transversal,
        syndrome_term=syndrome,
    )


def crossover(kind, d, lambda_se=1.0):
    """Transversal error at which both terms of the logical error model are equal."""
    fit = fit_params(kind, d)
    return (fit.B / (fit.A * lambda_se ** (fit.beta * d))) ** (1.0 / (fit.alpha * d))


def logical_error_frame(kinds, distances, p_values, lambda_se_values):
    """
    Input: architecture kinds, distances, transversal error grid and syndrome factors
    Process: Evaluates the logical error model at every grid point
    Output: DataFrame with arch, d, lambda_se, p_trans, central, lower, upper, regime
    """
    rows = []
    for kind in kinds:
        kind = ArchitectureKind.parse(kind)
        for d in distances:
            for lambda_se in lambda_se_values:
                for p_trans in p_values:
                    estimate = logical_error(kind, d, p_trans, lambda_se)
                    rows.append({
                        "arch": kind.value,
                        "d": d,
                        "lambda_se": lambda_se,
                        "p_trans": p_trans,
                        "central": estimate.central,
                        "lower": estimate.lower,
                        "upper": estimate.upper,
                        "regime": estimate.regime,
                    })
    columns = ["arch", "d", "lambda_se", "p_trans", "central", "lower", "upper", "regime"]
    return pd.DataFrame(rows, columns=columns)


def budget_frame(base, kinds, n_logical_values):
    """
    Input: base Scenario, architecture kinds and a grid of logical-qubit counts
    Process: Error budget and logical error at the scenario's distance and factors
    Output: DataFrame with arch, n_logical, d, lambda, p_o, junction, decoherence, p_trans,
            central, lower, upper
    """
    rows = []
    for kind in kinds:
        for n_logical in n_logical_values:
            scenario = base.with_architecture(kind, n_logical=n_logical)
            budget = transversal_gate_error(scenario)
            estimate = logical_error(
                scenario.kind, scenario.code_distance, budget.p_trans, scenario.improvements.lambda_se
            )
            rows.append({
                "arch": scenario.kind.value,
                "n_logical": n_logical,
                "d": scenario.code_distance,
                "lambda": scenario.improvements.lam,
                "p_o": budget.p_o,
                "junction": budget.junction_term,
                "decoherence": budget.decoherence_term,
                "p_trans": budget.p_trans,
                "central": estimate.central,
                "lower": estimate.lower,
                "upper": estimate.upper,
            })
    columns = ["arch", "n_logical", "d", "lambda", "p_o", "junction", "decoherence", "p_trans", "central", "lower", "upper"]
    return pd.DataFrame(rows, columns=columns)
