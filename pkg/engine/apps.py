"""
Logic:
- Application workloads (Fermi-Hubbard, ECDLP) as validated descriptors
- Space cost: data, syndrome-extraction and gate-teleportation qubits per architecture
- Success rate of one shot from gate and idle logical errors, in log space, with bounds
- Execution time = layers x logical clock x shots
- Full scenario evaluation, (d, lambda) sweeps with in-row failures, and the
  smallest improvement factor that reaches a success target
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np
import pandas as pd

from engine.config import ArchitectureKind, FrozenModel, Scenario
from engine.datasets import APPLICATION_ALIASES, APPLICATIONS
from engine.errors import LogicalErrorEstimate, LossModel, TransversalErrorBreakdown, logical_error, loss_model, transversal_gate_error
from engine.exceptions import DatasetError, DomainError, MappingNotTabulatedError, ModelError, MonotonicityError
from engine.layout import code_qubit_counts
from engine.schedule import schedule
from utils.helpers import record_failures

logger = logging.getLogger(__name__)

SECONDS_PER_DAY = 86400.0
FRONTIER_LAMBDA_MIN = 0.1
FRONTIER_LAMBDA_MAX = 1000.0
FRONTIER_SAMPLES = 13
SWEEP_COLUMNS = [
    "app", "arch", "d", "lambda", "space_total", "n_spare", "p_trans",
    "p_logical", "p_logical_lo", "p_logical_hi", "success", "success_lo", "success_hi",
    "t_exec_days", "error",
]


class ApplicationSpec(FrozenModel):
    key: str
    name: str
    n_logical: int
    n_layer: float
    n_gate: float
    n_idle: float
    n_shots: int
    max_gates_per_layer: int


class SpaceCost(FrozenModel):
    data: int
    syndrome_extraction: int
    gate_teleportation: int
    total: int
    n_spare_used: int


class SuccessEstimate(FrozenModel):
    central: float
    lower: float
    upper: float
    saturated: bool = False


class EvalResult(FrozenModel):
    app: str
    scenario: Scenario
    space: SpaceCost
    transversal: TransversalErrorBreakdown
    loss: Optional[LossModel] = None
    p_trans: float
    p_logical: LogicalErrorEstimate
    p_idle_logical: LogicalErrorEstimate
    success: SuccessEstimate
    t_logical_clock_us: float
    t_exec_s: float
    t_exec_days: float


class FrontierResult(FrozenModel):
    app: str
    arch: ArchitectureKind
    d: int
    target: float
    lambda_star: Optional[float] = None
    reachable: bool
    success_at_lambda_star: Optional[float] = None


def load_application(name):
    """
    Input: application name or alias (fermi, ecdlp, ...)
    Process: Resolves the alias and validates the embedded descriptor
    Output: ApplicationSpec
    """
    key = APPLICATION_ALIASES.get(str(name).strip().lower())
    if key is None:
        raise DatasetError(f"unknown application {name!r}; expected one of {', '.join(sorted(APPLICATIONS))}")
    return ApplicationSpec(key=key, **APPLICATIONS[key])


def space_cost(kind, app, counts, n_spare=0):
    """
    Input: architecture kind, ApplicationSpec, CodeCounts and SDQC spare pairs
    Process: data = n_d n_L; syndrome = 2 n_a n_L (+ 2 n_seg n_L for Photonic);
             teleportation pairs per layer (none for QCCD, no spares for Photonic)
    Output: SpaceCost
    """
    kind = ArchitectureKind.parse(kind)
    if n_spare < 0:
        raise DomainError(f"spare count must be nonnegative, got {n_spare}")
    n_logical = app.n_logical
    data = counts.n_d * n_logical
    syndrome = 2 * counts.n_a * n_logical
    if kind is ArchitectureKind.SDQC:
        teleportation = 2 * (counts.n_d + n_spare) * app.max_gates_per_layer
    elif kind is ArchitectureKind.PHOTONIC:
        if counts.n_seg is None:
            raise MappingNotTabulatedError(f"segmented qubit count not tabulated for d={counts.d}")
        syndrome += 2 * counts.n_seg * n_logical
        teleportation = 2 * counts.n_d * app.max_gates_per_layer
        n_spare = 0
    else:
        teleportation = 0
        n_spare = 0
    return SpaceCost(
        data=data,
        syndrome_extraction=syndrome,
        gate_teleportation=teleportation,
        total=data + syndrome + teleportation,
        n_spare_used=n_spare,
    )


def success_probability(n_gate, n_idle, p_logical, p_idle):
    """
    Input: gate and idle counts with their logical error probabilities
    Process: exp(n_gate log1p(-2 p_L) + n_idle log1p(-p_idle))
    Output: (probability, saturated)
    """
    if p_logical < 0 or p_idle < 0:
        raise DomainError("logical error probabilities must be nonnegative")
    if 2 * p_logical >= 1 or p_idle >= 1:
        return 0.0, True
    log_success = n_gate * math.log1p(-2 * p_logical) + n_idle * math.log1p(-p_idle)
    return math.exp(log_success), False


def success_rate(app, p_logical, p_idle_logical):
    """
    Input: ApplicationSpec and the gate/idle LogicalErrorEstimate pair
    Process: Central value from the central errors; the lower bound from the upper
             error corners and the other way round
    Output: SuccessEstimate
    """
    central, saturated = success_probability(app.n_gate, app.n_idle, p_logical.central, p_idle_logical.central)
    lower, saturated_lo = success_probability(app.n_gate, app.n_idle, p_logical.upper, p_idle_logical.upper)
    upper, _ = success_probability(app.n_gate, app.n_idle, p_logical.lower, p_idle_logical.lower)
    return SuccessEstimate(central=central, lower=lower, upper=upper, saturated=saturated or saturated_lo)


def execution_time(app, schedule_result):
    """Seconds for all shots: layers x logical clock x shots."""
    return app.n_layer * schedule_result.t_logical_clock * 1e-6 * app.n_shots


def evaluate(app, scenario, n_spare=None):
    """
    Input: ApplicationSpec, a Scenario (its n_logical is replaced by the application's)
           and an optional fixed SDQC spare count
    Process: Schedule -> transversal error -> spares (SDQC) -> logical errors ->
             space cost, success rate and execution time
    Output: EvalResult
    """
    scenario = scenario.with_updates(n_logical=app.n_logical)
    kind = scenario.kind
    d = scenario.code_distance
    lambda_se = scenario.improvements.lambda_se
    try:
        schedule_result = schedule(scenario)
        budget = transversal_gate_error(scenario, schedule_result)
        loss = loss_model(scenario, budget.p_trans, schedule_result) if kind is ArchitectureKind.SDQC else None
        p_logical = logical_error(kind, d, budget.p_trans, lambda_se)
        p_idle_logical = logical_error(kind, d, 0.0, lambda_se)
        spares = n_spare if n_spare is not None else (loss.n_spare if loss else 0)
        space = space_cost(kind, app, code_qubit_counts(d), spares)
    except ModelError as e:
        logger.error(f"Error evaluating {app.name} on {kind.value} d={d}: {str(e)}")
        raise

    success = success_rate(app, p_logical, p_idle_logical)
    t_exec = execution_time(app, schedule_result)
    return EvalResult(
        app=app.key,
        scenario=scenario,
        space=space,
        transversal=budget,
        loss=loss,
        p_trans=budget.p_trans,
        p_logical=p_logical,
        p_idle_logical=p_idle_logical,
        success=success,
        t_logical_clock_us=schedule_result.t_logical_clock,
        t_exec_s=t_exec,
        t_exec_days=t_exec / SECONDS_PER_DAY,
    )


def result_row(result):
    """Flattens an EvalResult into one sweep-table row."""
    return {
        "app": result.app,
        "arch": result.scenario.kind.value,
        "d": result.scenario.code_distance,
        "lambda": result.scenario.improvements.lam,
        "space_total": result.space.total,
        "n_spare": result.space.n_spare_used,
        "p_trans": result.p_trans,
        "p_logical": result.p_logical.central,
        "p_logical_lo": result.p_logical.lower,
        "p_logical_hi": result.p_logical.upper,
        "success": result.success.central,
        "success_lo": result.success.lower,
        "success_hi": result.success.upper,
        "t_exec_days": result.t_exec_days,
    }


@record_failures(ModelError)
def _sweep_point(app, scenario):
    return result_row(evaluate(app, scenario))


def sweep(app, kinds, d_grid, lambda_grid, base=None, lambda_se=None, workers=1):
    """
    Input: ApplicationSpec, architecture kinds, distance and lambda grids, base Scenario,
           optional fixed syndrome factor and worker count
    Process: Evaluates every (arch, d, lambda) point, arch outer then d then lambda;
             a failing point records its message in the error column
    Output: DataFrame with SWEEP_COLUMNS, in grid order regardless of workers
    """
    base = base or Scenario()
    points = []
    for kind in kinds:
        for d in d_grid:
            for lam in lambda_grid:
                points.append((ArchitectureKind.parse(kind), d, lam))
    logger.info(f"Sweeping {len(points)} point(s) for {app.name}")

    def run(point):
        kind, d, lam = point
        try:
            scenario = base.with_architecture(kind, code_distance=d).with_lambda(lam, lambda_se)
        except Exception as e:
            logger.warning(f"Error building scenario {kind.value} d={d} lambda={lam}: {str(e)}")
            row = {"error": str(e)}
        else:
            row = _sweep_point(app, scenario)
        return {"app": app.key, "arch": kind.value, "d": d, "lambda": lam, **row}

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        rows = list(executor.map(run, points))
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def round_up_significant(value, digits=3):
    """
    Input: positive value and number of significant figures
    Process: Rounds toward +inf at the requested precision
    Output: smallest digits-significant-figure float that is >= value
    """
    if not value > 0:
        raise DomainError(f"can only round positive values, got {value}")
    scale = 10.0 ** (digits - 1 - math.floor(math.log10(value)))
    steps = math.ceil(value * scale)
    rounded = steps / scale
    if rounded < value:
        # scale and divide can both lose an ulp
        rounded = (steps + 1) / scale
    return rounded


def _success_at(app, base, lam, lambda_se):
    return evaluate(app, base.with_lambda(lam, lambda_se)).success.central


def min_improvement_for_target(app, kind, d, target=0.90, base=None, lambda_se=None,
                               lower=FRONTIER_LAMBDA_MIN, upper=FRONTIER_LAMBDA_MAX):
    """
    Input: ApplicationSpec, architecture, distance, success target and the lambda range
    Process: Samples success on a log grid to confirm it never decreases with lambda,
             then bisects in log lambda; lambda* is the bracket top rounded up to three significant figures
    Output: FrontierResult; reachable is False when the top of the range misses the target
    """
    if not target < 1:
        raise DomainError(f"success target must be below 1, got {target}")
    kind = ArchitectureKind.parse(kind)
    base = (base or Scenario()).with_architecture(kind, code_distance=d)

    samples = np.geomspace(lower, upper, FRONTIER_SAMPLES).tolist()
    successes = [_success_at(app, base, lam, lambda_se) for lam in samples]
    for (lam_a, s_a), (lam_b, s_b) in zip(zip(samples, successes), zip(samples[1:], successes[1:])):
        if s_b < s_a - 1e-12:
            raise MonotonicityError(
                f"success fell from {s_a:.6g} at lambda={lam_a:.4g} to {s_b:.6g} at lambda={lam_b:.4g}",
                (lam_a, s_a),
                (lam_b, s_b),
            )

    result = {"app": app.key, "arch": kind, "d": d, "target": target}
    if successes[0] >= target:
        return FrontierResult(**result, lambda_star=lower, reachable=True, success_at_lambda_star=successes[0])
    if successes[-1] < target:
        logger.info(f"{app.name} on {kind.value} d={d} misses {target:.0%} even at lambda={upper:g}")
        return FrontierResult(**result, reachable=False)

    # bracket from the sampled grid, then bisect the bracket in log space
    index = next(i for i, s in enumerate(successes) if s >= target)
    lo, hi = samples[index - 1], samples[index]
    while hi / lo > 1.0005:
        mid = math.sqrt(lo * hi)
        if _success_at(app, base, mid, lambda_se) >= target:
            hi = mid
        else:
            lo = mid
    lambda_star = round_up_significant(hi)
    return FrontierResult(
        **result,
        lambda_star=lambda_star,
        reachable=True,
        success_at_lambda_star=_success_at(app, base, lambda_star, lambda_se),
    )


def frontier_frame(app, kinds, d_grid, target=0.90, base=None, lambda_se=None):
    """
    Input: ApplicationSpec, kinds, distances and success target
    Process: One frontier search per (arch, d); failures are recorded in-row
    Output: DataFrame with app, arch, d, target, lambda_star, reachable, success, error
    """
    rows = []
    for kind in kinds:
        for d in d_grid:
            row = {"app": app.key, "arch": ArchitectureKind.parse(kind).value, "d": d, "target": target}
            try:
                found = min_improvement_for_target(app, kind, d, target, base, lambda_se)
            except ModelError as e:
                logger.warning(f"Error searching frontier for {row['arch']} d={d}: {str(e)}")
                row.update(lambda_star=None, reachable=None, success=None, error=str(e))
            else:
                row.update(
                    lambda_star=found.lambda_star,
                    reachable=found.reachable,
                    success=found.success_at_lambda_star,
                    error="",
                )
            rows.append(row)
    columns = ["app", "arch", "d", "target", "lambda_star", "reachable", "success", "error"]
    return pd.DataFrame(rows, columns=columns)
