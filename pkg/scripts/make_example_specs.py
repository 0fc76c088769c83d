#!/usr/bin/env python3
"""
Write one example experiment spec per kind into configs/.

Usage:
    python scripts/make_example_specs.py [OUT_DIR]
"""

import os
import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.cli.specs import ExperimentKind, ExperimentSpec
from src.utils.hashing import dumps

# Figures 2-5 keep IPC unquantized (a_ipc unset).
EXAMPLES = {
    "figure2": (ExperimentKind.FIGURE2, {"n_trials": 1_000_000}),
    "figure3": (ExperimentKind.FIGURE3, {"n_trials": 1_000_000}),
    "figure4": (ExperimentKind.FIGURE4, {"n_trials": 1_000_000}),
    "figure5": (ExperimentKind.FIGURE5, {"n_trials": 1_000_000}),
    "figure6": (ExperimentKind.FIGURE6, {"n_trials": 1_000_000, "total_bits": 12}),
    "figure6_13db": (
        ExperimentKind.FIGURE6,
        {"n_trials": 1_000_000, "total_bits": 12, "overrides": {"gamma_p_db": 13.0}},
    ),
    "validate-distributions": (
        ExperimentKind.VALIDATE_DISTRIBUTIONS,
        {"overrides": {"b_cdi": 12}, "validation_samples": 100_000},
    ),
    "allocate-bits": (ExperimentKind.ALLOCATE_BITS, {"total_bits": 12, "overrides": {"gamma_max_db": 20.0}}),
    "custom-sweep": (
        ExperimentKind.CUSTOM_SWEEP,
        {
            "n_trials": 200_000,
            "overrides": {"gamma_max_db": 20.0},
            "grid": {"b_cdi": [8, 12], "a_ipc": [None, 4], "modes": ["ocb", "nocb"]},
        },
    ),
}


def main():
    """Main entry point."""
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent.parent / "configs"
    out_dir.mkdir(parents=True, exist_ok=True)

    for name, (kind, values) in EXAMPLES.items():
        spec = ExperimentSpec.create(name=name, kind=kind, master_seed=1, **values)
        document = spec.model_dump(mode="json", exclude_defaults=True)
        path = out_dir / f"{name}.json"
        path.write_bytes(dumps(document, indent=True) + b"\n")
        print(f"✓ {path}")


if __name__ == "__main__":
    main()
