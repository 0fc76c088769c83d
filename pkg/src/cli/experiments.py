"""Experiment runner: results CSV, analytic overlay CSV and run manifest."""

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from src import __version__
from src.analysis import formula_rows, optimal_bit_allocation
from src.analysis.allocation import BitAllocation
from src.channel import SystemParams, db_to_linear
from src.cli.specs import ExperimentKind, ExperimentSpec
from src.sim import distribution_checks, sweep
from src.utils.config import config
from src.utils.hashing import content_hash, dumps
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

FLOAT_FORMAT = "%.9g"
OVERLAY_FORMULAS = [
    "pu_outage",
    "theorem1",
    "theorem2",
    "corollary1",
    "exact_ocb",
    "exact_ocb_ff",
    "prop2",
    "prop2_ff",
    "corollary3",
    "delta_p",
]
OVERLAY_KEYS = ["antennas", "gamma_p_db", "gamma_max_db", "b_cdi", "a_ipc"]
OVERLAY_COLUMNS = OVERLAY_KEYS + OVERLAY_FORMULAS[:4] + ["corollary1_lower"] + OVERLAY_FORMULAS[4:] + ["valid"]


@dataclass
class ExperimentResult:
    """Files and summary of one experiment run."""

    spec: ExperimentSpec
    results: pd.DataFrame
    overlay: pd.DataFrame
    manifest: Dict[str, Any]
    paths: Dict[str, Path] = field(default_factory=dict)
    allocations: List[Dict[str, Any]] = field(default_factory=list)


def manifest_hash(spec: ExperimentSpec) -> str:
    """Hash of everything that determines the CSV contents."""
    return content_hash(
        {
            "spec": spec.document(),
            "version": __version__,
            "block_size": config.block_size,
        }
    )


def overlay_table(points: List[SystemParams]) -> pd.DataFrame:
    """
    Closed-form values for each distinct parameter point, one row per point.

    Args:
        points: Parameter points in sweep order (duplicates are skipped)

    Returns:
        DataFrame in OVERLAY_COLUMNS order; formulas that do not apply
        to a point (the IPC bounds when A is unset) are empty
    """
    rows = []
    seen = set()
    for params in points:
        key = params.fingerprint()
        if key in seen:
            continue
        seen.add(key)
        formulas = formula_rows(params)
        row: Dict[str, Any] = {name: formulas[0][name] for name in OVERLAY_KEYS}
        for formula in formulas:
            row[formula["formula"]] = formula["value"]
            if formula["formula"] == "corollary1":
                row["corollary1_lower"] = formula["lower_bound"]
        row["valid"] = all(bool(formula["valid"]) for formula in formulas)
        rows.append(row)
    return pd.DataFrame(rows, columns=OVERLAY_COLUMNS)


def allocation_table(allocation: BitAllocation) -> pd.DataFrame:
    """J(B) curve for B = 0..F with the analytic choice marked."""
    return pd.DataFrame(
        {
            "b_cdi": range(allocation.total_bits + 1),
            "a_ipc": [allocation.total_bits - b for b in range(allocation.total_bits + 1)],
            "j_value": allocation.j_values,
            "analytic_choice": [b == allocation.b_bits for b in range(allocation.total_bits + 1)],
        }
    )


def empirical_allocations(spec: ExperimentSpec, results: pd.DataFrame) -> List[Dict[str, Any]]:
    """Per γ_max: Monte Carlo argmin of A next to the closed-form A*."""
    summaries = []
    ok = results[results["error"] == ""]
    for gamma_max_db, group in ok.groupby("gamma_max_db", sort=False):
        best = group.loc[group["su_outage"].idxmin()]
        base = spec.base_params()
        params = base.with_updates(p_max=base.sigma2 * db_to_linear(float(gamma_max_db)))
        analytic = optimal_bit_allocation(spec.total_bits, params)
        summaries.append(
            {
                "gamma_max_db": float(gamma_max_db),
                "a_star_empirical": int(best["a_ipc"]),
                "a_star_analytic": analytic.a_bits,
                "b_star_continuous": analytic.b_continuous,
                "su_outage_min": float(best["su_outage"]),
            }
        )
    return summaries


def _with_hash(table: pd.DataFrame, digest: str) -> pd.DataFrame:
    table = table.copy()
    table["manifest_hash"] = digest
    return table


def write_csv(table: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Wrote {len(table)} rows to {path}")
    return path


def run_experiment(
    spec: ExperimentSpec,
    workers: Optional[int] = None,
    out_dir: Optional[Path] = None,
) -> ExperimentResult:
    """
    Run an experiment and write its results, overlay and manifest.

    Args:
        spec: Experiment specification
        workers: Worker processes; defaults to config.workers
        out_dir: Parent directory used when spec.output_path is unset

    Returns:
        ExperimentResult

    Raises:
        ConfigurationError: If the spec expands to an invalid grid
        OSError: If the output directory is not writable
    """
    started = time.perf_counter()
    digest = manifest_hash(spec)
    target = spec.output_path or Path(out_dir or config.out_dir) / spec.name
    logger.info(f"Starting experiment {spec.name} ({spec.kind.value}), manifest {digest}")

    allocations: List[Dict[str, Any]] = []
    if spec.kind is ExperimentKind.VALIDATE_DISTRIBUTIONS:
        params = spec.base_params()
        results = distribution_checks(params, n_samples=spec.validation_samples, seed=spec.master_seed)
        overlay = overlay_table([params])
    elif spec.kind is ExperimentKind.ALLOCATE_BITS:
        params = spec.base_params()
        allocation = optimal_bit_allocation(spec.total_bits, params)
        results = allocation_table(allocation)
        overlay = overlay_table(
            [params.with_updates(a_ipc=a, b_cdi=spec.total_bits - a) for a in range(1, spec.total_bits + 1)]
        )
        allocations.append(
            {
                "total_bits": spec.total_bits,
                "a_star_analytic": allocation.a_bits,
                "b_star_analytic": allocation.b_bits,
                "b_star_continuous": allocation.b_continuous,
                "chi": allocation.chi,
            }
        )
        if spec.empirical:
            grid_spec = spec.with_updates(kind=ExperimentKind.FIGURE6)
            if spec.overrides.gamma_max_db is not None:
                grid_spec = grid_spec.with_updates(
                    grid=spec.grid.model_copy(update={"gamma_max_db": [spec.overrides.gamma_max_db]})
                )
            empirical = sweep(grid_spec.trial_grid(), workers=workers)
            allocations.extend(empirical_allocations(spec, empirical))
    else:
        grid = spec.trial_grid()
        results = sweep(grid, workers=workers)
        overlay = overlay_table([cfg.params for cfg in grid])
        if spec.kind is ExperimentKind.FIGURE6:
            allocations = empirical_allocations(spec, results)

    paths = {
        "results": write_csv(_with_hash(results, digest), target / "results.csv"),
        "overlay": write_csv(_with_hash(overlay, digest), target / "overlay.csv"),
    }
    codebooks = sorted(
        {label for label in results.get("codebooks", pd.Series(dtype=str)).tolist() if label}
    )
    manifest = {
        "manifest_hash": digest,
        "name": spec.name,
        "kind": spec.kind.value,
        "spec": spec.document(),
        "version": __version__,
        "seeds": {"master_seed": spec.master_seed, "codebook_seed": spec.codebook_seed},
        "block_size": config.block_size,
        "workers": config.workers if workers is None else workers,
        "codebooks": codebooks,
        "degenerate_codebooks": any("degenerate" in label for label in codebooks),
        "allocations": allocations,
        "files": {name: path.name for name, path in paths.items()},
        "wall_time_s": time.perf_counter() - started,
    }
    paths["manifest"] = target / "manifest.json"
    paths["manifest"].write_bytes(dumps(manifest, indent=True))
    logger.info(f"Finished experiment {spec.name} in {manifest['wall_time_s']:.1f}s")
    return ExperimentResult(
        spec=spec, results=results, overlay=overlay, manifest=manifest, paths=paths, allocations=allocations
    )
