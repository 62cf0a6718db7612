"""
Experiment runner: config-driven runs and temporal convergence studies
"""

import logging
import time
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional, Sequence

from gpsav import __version__
from gpsav.config import ExperimentConfig, resolve_step_count
from gpsav.core.diagnostics import DriftSeries, DriftTracker, convergence_rate, field_error
from gpsav.core.grid import fft_workers
from gpsav.core.integrator import SavIntegrator
from gpsav.core.models import SavState, StepStats
from gpsav.core.operator import GpOperator
from gpsav.core.state import init_state
from gpsav.core.tableau import gauss_tableau
from gpsav.exceptions import ConfigError, IntegrationError, InvalidArgumentError
from gpsav.initial import get_registry
from gpsav.storage import write_csv, write_diagnostics, write_manifest, write_snapshot

logger = logging.getLogger(__name__)

ERROR_FLOOR = 1e-12
REFERENCE_STAGES = 3
REFERENCE_REFINEMENT = 10

StepCallback = Callable[[int, int], None]


@dataclass
class SnapshotRecord:
    requested: float
    step: int
    time: float
    path: Path

    def to_dict(self) -> dict:
        return {
            "requested": self.requested,
            "step": self.step,
            "time": self.time,
            "file": self.path.name,
        }


@dataclass
class RunResult:
    """Outcome and artifact locations of one run"""
    output_dir: Path
    manifest_path: Path
    final_state: SavState
    n_steps: int
    series: DriftSeries = field(default_factory=DriftSeries)
    snapshots: list[SnapshotRecord] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def diagnostics_path(self) -> Optional[Path]:
        path = self.output_dir / "diagnostics.csv"
        return path if path.exists() else None


def _snapshot_schedule(times: Sequence[float], tau: float, n_steps: int) -> dict[int, list[float]]:
    """Map step index -> requested times snapping to it"""
    schedule: dict[int, list[float]] = {}
    for requested in times:
        index = min(int(round(requested / tau)), n_steps)
        if abs(index * tau - requested) > 1e-9 * tau:
            logger.info("snapshot time %g snapped to step %d (t=%g)", requested, index, index * tau)
        schedule.setdefault(index, []).append(requested)
    return schedule


def _prepare(config: ExperimentConfig):
    grid = config.grid()
    params = config.params()
    try:
        operator = GpOperator(params, grid)
        psi0 = get_registry().build(config.initial_spec(), grid)
    except InvalidArgumentError as e:
        # potential or initial data that do not fit the configured grid
        raise ConfigError(str(e))
    return params, operator, init_state(params, psi0)


def run(
    config: ExperimentConfig,
    output_dir: Optional[Path] = None,
    on_step: Optional[StepCallback] = None,
) -> RunResult:
    """
    Run one experiment and write its artifacts.

    Writes ``manifest.json`` and ``initial.gpf`` always; for t_final > 0 also
    ``diagnostics.csv``, one ``snapshot_NNNNNN.gpf`` per requested time and
    ``final.gpf``. On an integration error the manifest and diagnostics
    gathered so far are written before the error is re-raised.

    Args:
        config: Validated experiment configuration
        output_dir: Overrides ``config.output_dir``
        on_step: Called as on_step(index, n_steps) after every step
    """
    config.validate()
    started = datetime.now(timezone.utc)
    clock = time.perf_counter()

    out = Path(output_dir or config.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    tab = config.tableau()
    n_steps, step_warning = config.step_count()
    warnings = [step_warning] if step_warning else []
    params, operator, state0 = _prepare(config)
    schedule = _snapshot_schedule(config.snapshot_times, config.tau, n_steps)

    logger.info(
        "run: dim=%d sizes=%s s=%d tau=%g steps=%d -> %s",
        config.dim, config.sizes, tab.s, config.tau, n_steps, out,
    )

    snapshots: list[SnapshotRecord] = []

    def save_snapshots(index: int, state: SavState) -> None:
        requests = schedule.get(index)
        if not requests:
            return
        t = index * config.tau
        path = write_snapshot(out / f"snapshot_{index:06d}.gpf", state.psi, t, state.q)
        snapshots.extend(SnapshotRecord(requested, index, t, path) for requested in requests)

    write_snapshot(out / "initial.gpf", state0.psi, 0.0, state0.q)
    save_snapshots(0, state0)

    manifest = {
        "gpsav_version": __version__,
        "config": config.to_dict(),
        "tableau": tab.to_dict(),
        "n_steps": n_steps,
        "t_end": n_steps * config.tau,
        "fft_workers": fft_workers(),
    }

    def finish(status: str, final_state: SavState, series: Optional[DriftSeries], error=None) -> Path:
        artifacts = ["initial.gpf"] + sorted({r.path.name for r in snapshots})
        if series is not None:
            write_diagnostics(out / "diagnostics.csv", series)
            artifacts.append("diagnostics.csv")
            manifest["summary"] = {
                "max_mass_err": series.max_mass_err,
                "max_quad_err": series.max_quad_err,
                "max_ham_err": series.max_ham_err,
                "mass0": series.mass[0],
                "energy0": series.energy[0],
                "hamiltonian0": series.hamiltonian[0],
            }
        if status == "completed" and n_steps > 0:
            write_snapshot(out / "final.gpf", final_state.psi, n_steps * config.tau, final_state.q)
            artifacts.append("final.gpf")
        manifest.update(
            status=status,
            warnings=warnings,
            snapshots=[r.to_dict() for r in snapshots],
            artifacts=artifacts,
            wall_clock={
                "started": started.isoformat(),
                "elapsed_seconds": time.perf_counter() - clock,
            },
        )
        if error is not None:
            manifest["error"] = {"type": type(error).__name__, "message": str(error)}
        return write_manifest(out / "manifest.json", manifest)

    if n_steps == 0:
        manifest_path = finish("completed", state0, None)
        return RunResult(
            output_dir=out,
            manifest_path=manifest_path,
            final_state=state0,
            n_steps=0,
            snapshots=snapshots,
            warnings=warnings,
            elapsed=time.perf_counter() - clock,
        )

    tracker = DriftTracker(params, operator, stride=config.diag_stride)
    tracker.start(state0)
    integrator = SavIntegrator(params, tab, config.solver_options(), operator=operator)

    def observer(index: int, t: float, state: SavState, stats: StepStats) -> None:
        tracker.record(index, t, state, stats, force=index == n_steps)
        save_snapshots(index, state)
        if on_step:
            on_step(index, n_steps)

    try:
        final_state = integrator.evolve(state0, config.tau, n_steps, observer)
    except IntegrationError as e:
        logger.error("run failed: %s", e)
        finish("failed", state0, tracker.series, error=e)
        raise

    manifest_path = finish("completed", final_state, tracker.series)
    elapsed = time.perf_counter() - clock
    logger.info(
        "run finished in %.2fs: max mass_err %.3e, max quad_err %.3e",
        elapsed, tracker.series.max_mass_err, tracker.series.max_quad_err,
    )
    return RunResult(
        output_dir=out,
        manifest_path=manifest_path,
        final_state=final_state,
        n_steps=n_steps,
        series=tracker.series,
        snapshots=snapshots,
        warnings=warnings,
        elapsed=elapsed,
    )


# Temporal convergence

CONVERGENCE_COLUMNS = ("beta", "stages", "tau", "steps", "error", "rate", "seconds")


@dataclass(frozen=True)
class ConvergenceRow:
    beta: float
    stages: int
    tau: float
    steps: int
    error: float
    rate: Optional[float]  # order against the previous rung; None on the first rung or at the floor
    seconds: float

    def as_tuple(self) -> tuple:
        return (self.beta, self.stages, self.tau, self.steps, self.error, self.rate, self.seconds)


@dataclass
class ConvergenceTable:
    """Self-referenced errors and observed orders along a step-size ladder"""
    stages: int
    ladder: tuple[float, ...]
    reference_tau: float
    reference_stages: int = REFERENCE_STAGES
    rows: list[ConvergenceRow] = field(default_factory=list)

    @property
    def betas(self) -> list[float]:
        return sorted({row.beta for row in self.rows})

    def for_beta(self, beta: float) -> list[ConvergenceRow]:
        return [row for row in self.rows if row.beta == beta]

    def rates(self, beta: float) -> list[Optional[float]]:
        return [row.rate for row in self.for_beta(beta)[1:]]

    def to_csv(self, path: Path) -> Path:
        return write_csv(path, CONVERGENCE_COLUMNS, (row.as_tuple() for row in self.rows))


def _validate_ladder(tau_ladder: Sequence[float], t_final: float) -> tuple[float, ...]:
    ladder = tuple(float(tau) for tau in tau_ladder)
    if len(ladder) < 3:
        raise InvalidArgumentError(f"ladder needs at least 3 step sizes, got {len(ladder)}")
    if any(tau <= 0 for tau in ladder):
        raise InvalidArgumentError(f"ladder step sizes must be positive: {ladder}")
    if any(later >= earlier for earlier, later in zip(ladder, ladder[1:])):
        raise InvalidArgumentError(f"ladder must be strictly decreasing: {ladder}")
    if t_final <= 0:
        raise InvalidArgumentError("convergence study needs t_final > 0")
    for tau in ladder:
        if resolve_step_count(t_final, tau)[1] is not None:
            raise InvalidArgumentError(f"tau={tau} does not divide t_final={t_final}")
    return ladder


def _integrate(config: ExperimentConfig, operator, params, state0, stages: int, tau: float):
    n_steps, _ = resolve_step_count(config.t_final, tau)
    integrator = SavIntegrator(params, gauss_tableau(stages), config.solver_options(), operator=operator)
    clock = time.perf_counter()
    final = integrator.evolve(state0, tau, n_steps)
    return final, n_steps, time.perf_counter() - clock


def convergence_study(
    config: ExperimentConfig,
    tau_ladder: Sequence[float],
    betas: Optional[Sequence[float]] = None,
    output_dir: Optional[Path] = None,
    on_rung: Optional[Callable[[ConvergenceRow], None]] = None,
) -> ConvergenceTable:
    """
    Temporal self-convergence of the configured scheme.

    For each beta, a reference run with s = 3 at tau = min(ladder) / 10 on the
    same grid is compared in the max norm against every ladder rung at t_final.
    Rates between consecutive rungs use ln(e1/e2) / ln(tau1/tau2) and are left
    undefined once either error reaches 1e-12.
    """
    config.validate()
    ladder = _validate_ladder(tau_ladder, config.t_final)
    reference_tau = min(ladder) / REFERENCE_REFINEMENT
    table = ConvergenceTable(stages=config.stages, ladder=ladder, reference_tau=reference_tau)

    for beta in betas if betas is not None else [config.beta]:
        cfg = replace(config, beta=float(beta))
        params, operator, state0 = _prepare(cfg)
        logger.info("beta=%g: reference run s=%d tau=%g", beta, REFERENCE_STAGES, reference_tau)
        reference, _, _ = _integrate(cfg, operator, params, state0, REFERENCE_STAGES, reference_tau)

        errors: list[float] = []
        for index, tau in enumerate(ladder):
            final, n_steps, seconds = _integrate(cfg, operator, params, state0, cfg.stages, tau)
            error = field_error(final.psi, reference.psi, "inf")
            rate = None
            if index > 0 and errors[-1] > ERROR_FLOOR and error > ERROR_FLOOR:
                rate = float(convergence_rate([errors[-1], error], [ladder[index - 1], tau])[0])
            errors.append(error)
            row = ConvergenceRow(
                beta=float(beta),
                stages=cfg.stages,
                tau=tau,
                steps=n_steps,
                error=error,
                rate=rate,
                seconds=seconds,
            )
            table.rows.append(row)
            logger.info("beta=%g tau=%g error=%.4e rate=%s", beta, tau, error, rate)
            if on_rung:
                on_rung(row)

    if output_dir is not None:
        table.to_csv(Path(output_dir) / "convergence.csv")
    return table
