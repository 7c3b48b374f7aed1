"""Command-line interface: ``explicit-heat run|bench|validate|patch-test|dt-estimate|genmesh``.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure,
3 IO error.
"""

import logging
import sys
import time
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import click
import numpy as np
import pandas as pd
import typer
from typer.core import TyperGroup

from .config import RunConfig, config_to_dict, load_config
from .exceptions import ExplicitHeatError, SolverError
from .mesh import Mesh, generate_box_mesh, load_mesh, save_mesh
from .oracle import ImplicitIntegrator, compare_steady, compare_trajectories, patch_test
from .output import SnapshotWriter, write_summary
from .solver import PrecomputedModel, SolverOptions, estimate_critical_dt, initial_state, march, precompute, run

# Configure module logger
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3

# Largest interior error the patch test accepts, °C.
PATCH_TOLERANCE = {"hex8": 2e-3, "tet4": 2e-2}

# Steps compared by validate when the config runs to steady state.
DEFAULT_VALIDATE_STEPS = 1000


class _CommandGroup(TyperGroup):
    """Typer group that reports command-line usage errors with ``EXIT_USAGE``.

    Click exits 2 on a bad option, argument or choice, which would collide
    with ``EXIT_NUMERICAL``.
    """

    def main(  # type: ignore[override]
        self,
        args: Optional[Sequence[str]] = None,
        prog_name: Optional[str] = None,
        complete_var: Optional[str] = None,
        standalone_mode: bool = True,
        **extra: Any,
    ) -> Any:
        if not standalone_mode:
            return super().main(
                args=args, prog_name=prog_name, complete_var=complete_var, standalone_mode=False, **extra
            )
        try:
            code = super().main(
                args=args, prog_name=prog_name, complete_var=complete_var, standalone_mode=False, **extra
            )
        except click.UsageError as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.ClickException as e:
            e.show()
            sys.exit(e.exit_code)
        except click.Abort:
            typer.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        sys.exit(code if isinstance(code, int) else 0)


app = typer.Typer(
    cls=_CommandGroup,
    help="Explicit, matrix-free finite element solver for 3-D transient heat transfer.",
    no_args_is_help=True,
    add_completion=False,
)


class ElementKindChoice(str, Enum):
    tet4 = "tet4"
    hex8 = "hex8"


class StabilityMethodChoice(str, Enum):
    gershgorin = "gershgorin"
    dense_eigen = "dense-eigen"


@app.callback()
def main(
    log_level: str = typer.Option(
        "WARNING", "--log-level", envvar="EXPLICIT_HEAT_LOG_LEVEL", help="DEBUG, INFO, WARNING or ERROR"
    ),
) -> None:
    level = logging.getLevelName(log_level.upper())
    if not isinstance(level, int):
        typer.echo(f"Error: unknown log level {log_level!r}", err=True)
        raise typer.Exit(EXIT_USAGE)
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger("explicit_heat").setLevel(level)


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Map library exceptions to exit codes."""
    try:
        yield
    except SolverError as e:
        typer.echo(f"Numerical failure: {e}", err=True)
        raise typer.Exit(EXIT_NUMERICAL)
    except OSError as e:
        typer.echo(f"IO error: {e}", err=True)
        raise typer.Exit(EXIT_IO)
    except (ExplicitHeatError, ValueError) as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(EXIT_USAGE)


def _prepare(config_path: Path, options: Optional[SolverOptions] = None) -> Tuple[RunConfig, Mesh, PrecomputedModel]:
    config = load_config(config_path)
    mesh = load_mesh(config.mesh_path)
    model = precompute(
        mesh,
        config.material.to_model(),
        config.boundary,
        config.time.dt,
        options=options or config.solver_options(),
        initial_temperature=config.initial_temperature,
    )
    return config, mesh, model


def _frame(rows: List[Dict[str, object]]) -> str:
    return pd.DataFrame(rows).to_string(index=False)


@app.command("run")
def command_run(
    config_path: Path = typer.Argument(..., help="Run configuration (JSON)"),
    out: Optional[Path] = typer.Option(None, "--out", help="Override output.directory"),
) -> None:
    """Run a simulation, writing snapshots and summary.json."""
    with _exit_codes():
        config, mesh, model = _prepare(config_path)
        directory = out or config.output.directory
        writer = SnapshotWriter(mesh, directory, config.output.format)
        result = run(model, config.initial_temperature, config.schedule(), on_snapshot=writer)
        write_summary(directory, result, model, {"config": config_to_dict(config)})

    steady = f", steady at step {result.steady_step}" if result.steady_step is not None else ""
    typer.echo(
        f"{result.steps} steps, t = {result.final_time:g} s{steady}; "
        f"{result.timing.mean_ms:.4g} ms/step (max {result.timing.max_ms:.4g}), "
        f"total {result.timing.total_ms:.6g} ms; {len(writer.written)} snapshot(s) in {directory}"
    )


def _bench_one(model: PrecomputedModel, T0: float, repeats: int, steps: int) -> np.ndarray:
    durations: List[float] = []
    for _ in range(repeats):
        _, times = march(model, T0, steps)
        durations.extend(times)
    return np.asarray(durations) * 1e3


def _bench_implicit(model: PrecomputedModel, T0: float, steps: int) -> float:
    integrator = ImplicitIntegrator(model)
    T = integrator.step(initial_state(model, T0).T)
    started = time.perf_counter()
    for _ in range(steps):
        T = integrator.step(T)
    return (time.perf_counter() - started) * 1e3 / steps


@app.command("bench")
def command_bench(
    config_paths: List[Path] = typer.Argument(..., help="One or more run configurations"),
    repeats: int = typer.Option(3, "--repeats", help="Repetitions of the stepping loop"),
    steps: int = typer.Option(100, "--steps", help="Steps per repetition"),
    implicit: bool = typer.Option(False, "--implicit", help="Also time the backward-Euler reference"),
) -> None:
    """Time the IO-free stepping loop."""
    if steps < 1 or repeats < 1:
        typer.echo("Error: --steps and --repeats must be at least 1", err=True)
        raise typer.Exit(EXIT_USAGE)

    rows: List[Dict[str, object]] = []
    per_step: Dict[Tuple[str, str], float] = {}
    with _exit_codes():
        for path in config_paths:
            config, mesh, model = _prepare(path)
            ms = _bench_one(model, config.initial_temperature, repeats, steps)
            row: Dict[str, object] = {
                "config": path.name,
                "form": model.form,
                "elements": mesh.n_elements,
                "nodes": mesh.n_nodes,
                "mean_ms": float(ms.mean()),
                "median_ms": float(np.median(ms)),
                "max_ms": float(ms.max()),
                "real_time_factor": model.dt / (ms.mean() / 1e3),
            }
            if implicit:
                implicit_ms = _bench_implicit(model, config.initial_temperature, max(1, min(steps, 20)))
                row["implicit_ms"] = implicit_ms
                row["implicit/explicit"] = implicit_ms / float(ms.mean())
            rows.append(row)
            per_step[(str(config.mesh_path.resolve()), model.form)] = float(ms.mean())

    typer.echo(_frame(rows))
    for (mesh_path, form), ti_ms in per_step.items():
        if form == "TI" and (mesh_path, "TD") in per_step:
            typer.echo(f"TD/TI per-step ratio on {Path(mesh_path).name}: {per_step[(mesh_path, 'TD')] / ti_ms:.3f}")


@app.command("validate")
def command_validate(
    config_path: Path = typer.Argument(..., help="Run configuration (JSON)"),
    steps: Optional[int] = typer.Option(None, "--steps", help="Steps to compare (default: the configured duration)"),
) -> None:
    """Compare the explicit solver with the backward-Euler reference."""
    with _exit_codes():
        config, _, model = _prepare(config_path)
        if steps is not None:
            n_steps = steps
        elif config.time.duration is not None:
            n_steps = config.schedule().step_count(model.dt)
        else:
            n_steps = DEFAULT_VALIDATE_STEPS
        rows = compare_trajectories(model, config.initial_temperature, n_steps)
        typer.echo(_frame([{"step": r.step, "time_s": r.time, "relative_error": r.error} for r in rows]))
        if config.time.stop_on_steady:
            steady_step, error = compare_steady(
                model, config.initial_temperature, config.time.steady_tolerance, config.time.max_steps
            )
            typer.echo(f"Steady state at step {steady_step}: relative error against the direct solve {error:.3e}")


@app.command("patch-test")
def command_patch_test(
    kind: ElementKindChoice = typer.Option(ElementKindChoice.hex8, "--kind", help="Element kind"),
    n: int = typer.Option(3, "--n", help="Nodes per cube edge"),
    offset: float = typer.Option(0.0, "--offset", help="Constant added to the linear field"),
) -> None:
    """Reproduce T = 200x + 100y + 200z at interior nodes of a unit cube."""
    if n < 3:
        typer.echo("Error: --n must be at least 3 to have an interior node", err=True)
        raise typer.Exit(EXIT_USAGE)
    with _exit_codes():
        result = patch_test(kind.value, n=n, offset=offset)
    limit = PATCH_TOLERANCE[kind.value]
    verdict = "PASS" if result.max_error <= limit else "FAIL"
    typer.echo(
        f"{verdict}: {kind.value}, {result.interior_nodes} interior node(s), max error {result.max_error:.3e} °C "
        f"(limit {limit:g}) after {result.steps} steps in {result.seconds:.2f} s"
    )
    if verdict == "FAIL":
        raise typer.Exit(EXIT_NUMERICAL)


@app.command("dt-estimate")
def command_dt_estimate(
    config_path: Path = typer.Argument(..., help="Run configuration (JSON)"),
    method: Optional[StabilityMethodChoice] = typer.Option(None, "--method", help="Only this method"),
) -> None:
    """Print the critical time step estimates."""
    with _exit_codes():
        config, _, model = _prepare(config_path, SolverOptions(strict_stability=False))
        methods = [method.value] if method else ["gershgorin", "dense-eigen"]
        rows: List[Dict[str, object]] = []
        for name in methods:
            if name == "dense-eigen" and model.n_nodes > model.options.dense_eigen_max_nodes:
                if method:
                    raise ValueError(f"dense-eigen is limited to {model.options.dense_eigen_max_nodes} nodes")
                continue
            estimate = estimate_critical_dt(model, name, config.initial_temperature)  # type: ignore[arg-type]
            rows.append(
                {
                    "method": estimate.method,
                    "lambda_max": estimate.lambda_max,
                    "critical_dt_s": estimate.critical_dt,
                    "dt/critical": model.dt / estimate.critical_dt,
                }
            )
    typer.echo(_frame(rows))


@app.command("genmesh")
def command_genmesh(
    out: Path = typer.Option(..., "--out", help="Mesh file to write"),
    kind: ElementKindChoice = typer.Option(ElementKindChoice.hex8, "--kind", help="Element kind"),
    n: Optional[int] = typer.Option(None, "--n", help="Nodes per edge of a cube"),
    size: float = typer.Option(1.0, "--size", help="Cube edge length, m"),
    nx: Optional[int] = typer.Option(None, "--nx", help="Cells along x"),
    ny: Optional[int] = typer.Option(None, "--ny", help="Cells along y"),
    nz: Optional[int] = typer.Option(None, "--nz", help="Cells along z"),
    lx: Optional[float] = typer.Option(None, "--lx", help="Box length along x, m"),
    ly: Optional[float] = typer.Option(None, "--ly", help="Box length along y, m"),
    lz: Optional[float] = typer.Option(None, "--lz", help="Box length along z, m"),
) -> None:
    """Generate a structured box mesh with face sets left/right/front/back/bottom/top."""
    if n is not None and n < 2:
        typer.echo("Error: --n must be at least 2", err=True)
        raise typer.Exit(EXIT_USAGE)
    cells = (n - 1) if n is not None else 1
    shape = (nx or cells, ny or cells, nz or cells)
    lengths = (lx or size, ly or size, lz or size)
    with _exit_codes():
        mesh = generate_box_mesh(kind.value, shape, lengths)
        save_mesh(mesh, out)
    typer.echo(f"Wrote {mesh.n_nodes} nodes, {mesh.n_elements} {kind.value} elements to {out}")


if __name__ == "__main__":
    app()
