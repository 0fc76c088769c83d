"""Tests for experiment specs, the runner and the command-line interface."""

import importlib.util
from pathlib import Path

import orjson
import pandas as pd
import pytest
from typer.testing import CliRunner

from src.channel import SystemParams
from src.cli import ExperimentKind, ExperimentSpec, ParamOverrides, manifest_hash, overlay_table, run_experiment
from src.cli.app import app
from src.cli.experiments import OVERLAY_COLUMNS
from src.sim import KS_COLUMNS
from src.utils.errors import ConfigurationError

runner = CliRunner()

ROOT = Path(__file__).parent.parent
CONFIGS = ROOT / "configs"


def _spec(**values):
    base = {
        "name": "small",
        "kind": "custom-sweep",
        "n_trials": 2000,
        "master_seed": 5,
        "overrides": {"b_cdi": 8},
        "grid": {"gamma_max_db": [10.0]},
    }
    return ExperimentSpec.create(**{**base, **values})


class TestExperimentSpec:
    """Tests for ExperimentSpec parsing and grid expansion."""

    def test_invalid_json(self):
        """Test malformed documents."""
        with pytest.raises(ConfigurationError):
            ExperimentSpec.from_json(b"{not json")
        with pytest.raises(ConfigurationError):
            ExperimentSpec.from_json(b"[1, 2]")

    def test_unknown_field(self):
        """Test that unknown keys are rejected with their path."""
        with pytest.raises(ConfigurationError) as excinfo:
            ExperimentSpec.from_json(orjson.dumps({"name": "x", "kind": "figure2", "overrides": {"bogus": 1}}))
        assert excinfo.value.field_path.startswith("overrides")

    def test_missing_name(self):
        """Test that a name is required."""
        with pytest.raises(ConfigurationError):
            ExperimentSpec.from_json(orjson.dumps({"kind": "figure2"}))

    def test_overrides_in_db(self):
        """Test dB overrides."""
        params = ParamOverrides(gamma_p_db=20.0, gamma_max_db=30.0, antennas=6).to_params()
        assert params.gamma_p == pytest.approx(100.0)
        assert params.p_max == pytest.approx(1000.0)
        assert params.antennas == 6

    def test_figure2_grid(self):
        """Test the γ_max × B grid."""
        grid = ExperimentSpec.create(name="f2", kind="figure2").trial_grid()
        assert len(grid) == 9 * 4
        assert {cfg.params.b_cdi for cfg in grid} == {8, 12, 16, 20}

    def test_figure3_grid(self):
        """Test both beamforming modes."""
        grid = ExperimentSpec.create(name="f3", kind="figure3").trial_grid()
        assert len(grid) == 9 * 2 * 2
        assert {cfg.mode.value for cfg in grid} == {"ocb", "nocb"}

    def test_figure6_grid(self):
        """Test that each A is paired with B = F − A."""
        grid = ExperimentSpec.create(name="f6", kind="figure6", total_bits=12).trial_grid()
        assert len(grid) == 3 * 11
        assert all(cfg.params.a_ipc + cfg.params.b_cdi == 12 for cfg in grid)

    def test_analysis_kinds_have_no_grid(self):
        """Test that analytic kinds need no Monte Carlo grid."""
        assert ExperimentSpec.create(name="v", kind="validate-distributions").trial_grid() == []

    def test_explicit_grid_wins(self):
        """Test that grid axes override kind defaults."""
        spec = ExperimentSpec.create(name="f2", kind="figure2", grid={"b_cdi": [10], "gamma_max_db": [0.0]})
        grid = spec.trial_grid()
        assert len(grid) == 1
        assert grid[0].params.b_cdi == 10

    def test_perfect_cdi_override(self):
        """Test that perfect_cdi yields unquantized CDI across the grid."""
        spec = _spec(overrides={"perfect_cdi": True})
        assert spec.base_params().b_cdi is None
        assert all(cfg.params.b_cdi is None for cfg in spec.trial_grid())

    def test_perfect_cdi_conflicts_with_bits(self):
        """Test that perfect_cdi and b_cdi cannot both be set."""
        with pytest.raises(ConfigurationError) as excinfo:
            _spec(overrides={"perfect_cdi": True, "b_cdi": 8})
        assert excinfo.value.field_path.startswith("overrides")

    def test_manifest_hash(self):
        """Test that the hash follows the spec contents."""
        assert manifest_hash(_spec()) == manifest_hash(_spec())
        assert manifest_hash(_spec()) != manifest_hash(_spec(master_seed=6))


def _example_specs():
    path = ROOT / "scripts" / "make_example_specs.py"
    module_spec = importlib.util.spec_from_file_location("make_example_specs", path)
    module = importlib.util.module_from_spec(module_spec)
    module_spec.loader.exec_module(module)
    return module.EXAMPLES


class TestShippedSpecs:
    """Tests for the example specs in configs/."""

    def test_configs_match_generator(self):
        """Test that every shipped file is what make_example_specs writes."""
        examples = _example_specs()
        assert sorted(path.stem for path in CONFIGS.glob("*.json")) == sorted(examples)
        for name, (kind, values) in examples.items():
            expected = ExperimentSpec.create(name=name, kind=kind, master_seed=1, **values)
            assert ExperimentSpec.load(CONFIGS / f"{name}.json") == expected

    @pytest.mark.parametrize("name", ["figure2", "figure3", "figure4", "figure5"])
    def test_cdi_figures_use_exact_ipc(self, name):
        """Test that only CDI is quantized in the CDI-resolution experiments."""
        grid = ExperimentSpec.load(CONFIGS / f"{name}.json").trial_grid()
        assert grid
        assert all(cfg.params.a_ipc is None for cfg in grid)

    def test_figure4_feedforward_pairs(self):
        """Test that figure4 compares feedforward on and off at equal parameters."""
        grid = ExperimentSpec.load(CONFIGS / "figure4.json").trial_grid()
        assert {cfg.feedforward for cfg in grid} == {False, True}
        assert {cfg.params.antennas for cfg in grid} == {4, 6}

    def test_figure6_variants(self):
        """Test the bit split at γ_p = 10 dB and 13 dB."""
        for name, gamma_p_db in (("figure6", 10.0), ("figure6_13db", 13.0)):
            grid = ExperimentSpec.load(CONFIGS / f"{name}.json").trial_grid()
            assert all(cfg.params.a_ipc + cfg.params.b_cdi == 12 for cfg in grid)
            assert all(cfg.params.gamma_p == pytest.approx(10.0 ** (gamma_p_db / 10)) for cfg in grid)


class TestRunExperiment:
    """Tests for run_experiment."""

    def test_custom_sweep_files(self, tmp_path):
        """Test results, overlay and manifest outputs."""
        result = run_experiment(_spec(), workers=1, out_dir=tmp_path)
        results = pd.read_csv(tmp_path / "small" / "results.csv")
        overlay = pd.read_csv(tmp_path / "small" / "overlay.csv")
        manifest = orjson.loads((tmp_path / "small" / "manifest.json").read_bytes())

        assert len(results) == 1
        assert pd.isna(results.loc[0, "error"])
        assert set(results["manifest_hash"]) == {manifest["manifest_hash"]}
        assert "theorem1" in overlay.columns
        assert manifest["seeds"]["master_seed"] == 5
        assert manifest["files"] == {"results": "results.csv", "overlay": "overlay.csv"}
        assert result.paths["manifest"].exists()

    def test_overlay_header(self, tmp_path):
        """Test the overlay.csv column order."""
        run_experiment(_spec(), workers=1, out_dir=tmp_path)
        header = (tmp_path / "small" / "overlay.csv").read_text().splitlines()[0].split(",")
        assert header == OVERLAY_COLUMNS + ["manifest_hash"]
        assert header == [
            "antennas",
            "gamma_p_db",
            "gamma_max_db",
            "b_cdi",
            "a_ipc",
            "pu_outage",
            "theorem1",
            "theorem2",
            "corollary1",
            "corollary1_lower",
            "exact_ocb",
            "exact_ocb_ff",
            "prop2",
            "prop2_ff",
            "corollary3",
            "delta_p",
            "valid",
            "manifest_hash",
        ]
        overlay = pd.read_csv(tmp_path / "small" / "overlay.csv")
        assert len(overlay) == 1
        assert overlay[["prop2", "corollary3", "delta_p"]].isna().all().all()

    def test_results_are_reproducible(self, tmp_path):
        """Test byte-identical results for repeated runs."""
        run_experiment(_spec(), workers=1, out_dir=tmp_path / "a")
        run_experiment(_spec(), workers=2, out_dir=tmp_path / "b")
        first = (tmp_path / "a" / "small" / "results.csv").read_bytes()
        second = (tmp_path / "b" / "small" / "results.csv").read_bytes()
        assert first == second

    def test_validate_distributions(self, tmp_path):
        """Test the KS table output."""
        spec = _spec(kind="validate-distributions", validation_samples=20_000)
        result = run_experiment(spec, workers=1, out_dir=tmp_path)
        assert list(result.results.columns) == KS_COLUMNS

    def test_allocate_bits(self, tmp_path):
        """Test the J(B) table and the recorded allocation."""
        spec = _spec(kind="allocate-bits", total_bits=10)
        result = run_experiment(spec, workers=1, out_dir=tmp_path)
        assert len(result.results) == 11
        assert int(result.results["analytic_choice"].sum()) == 1
        assert result.allocations[0]["total_bits"] == 10

    def test_overlay_skips_duplicates(self):
        """Test one overlay row per distinct parameter point."""
        params = SystemParams(b_cdi=8)
        table = overlay_table([params, params, params.with_updates(b_cdi=12)])
        assert len(table) == 2


class TestCli:
    """Tests for the cogfeed CLI."""

    def test_allocate_bits(self):
        """Test the analytic split printout."""
        result = runner.invoke(app, ["allocate-bits", "--total", "12"])
        assert result.exit_code == 0
        assert "(A*, B*)" in result.output

    def test_run_missing_file(self):
        """Test that a missing spec file fails."""
        result = runner.invoke(app, ["run", "does-not-exist.json"])
        assert result.exit_code != 0

    def test_run_invalid_spec(self, tmp_path):
        """Test that a bad spec reports an error."""
        path = tmp_path / "bad.json"
        path.write_bytes(orjson.dumps({"name": "bad", "kind": "figure9"}))
        result = runner.invoke(app, ["run", str(path)])
        assert result.exit_code == 1
        assert "Error" in result.output

    def test_run_spec(self, tmp_path):
        """Test running a small spec end to end."""
        path = tmp_path / "spec.json"
        path.write_bytes(_spec().model_dump_json().encode())
        result = runner.invoke(app, ["--workers", "1", "--out-dir", str(tmp_path / "out"), "run", str(path)])
        assert result.exit_code == 0
        assert (tmp_path / "out" / "small" / "results.csv").exists()

    def test_validate(self):
        """Test the KS command."""
        result = runner.invoke(app, ["validate", "--samples", "20000", "--b-cdi", "8"])
        # exit code 1 marks a failed KS check
        assert result.exit_code in (0, 1)
        assert "Distribution checks" in result.output

    def test_unknown_log_level(self):
        """Test that a bad --log-level is reported as an error."""
        result = runner.invoke(app, ["--log-level", "loud", "allocate-bits"])
        assert result.exit_code == 1
        assert "Error" in result.output
