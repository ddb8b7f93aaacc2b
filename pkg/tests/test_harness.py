"""Sweep runner, CSV emission, presets, config files, CLI, and figures."""

import math
from dataclasses import replace

import numpy as np
import pytest

from pairpca import (
    ConfigError,
    ExperimentConfig,
    InvalidInput,
    MethodSpec,
    ModelTemplate,
    emit_csv,
    emit_summary,
    preset,
    preset_names,
    run_sweep,
    summarize,
    sweep_points,
)
from pairpca.cli import main, read_records_csv
from pairpca.config import config_from_pairs, load_config, parse_config_text

TINY = ExperimentConfig(
    name="tiny",
    model=ModelTemplate(signal_variances=(10.0,), background_variances=(40.0,)),
    n=60,
    aspect_ratios=(0.2, 0.5),
    methods=(MethodSpec(kind="pca_plus"), MethodSpec(kind="pca_plus_plus", s=2)),
    trials=2,
    base_seed=99,
)


class TestSweep:
    def test_one_record_per_cell(self):
        config = replace(TINY, trials=1)
        records, _ = run_sweep(config)
        assert len(records) == 2 * 2  # methods x ratios
        assert {(r.method, r.aspect_ratio) for r in records} == {
            ("pca_plus", 0.2), ("pca_plus", 0.5),
            ("pca_plus_plus", 0.2), ("pca_plus_plus", 0.5),
        }

    def test_dimension_derived_from_ratio(self):
        points = sweep_points(TINY)
        assert [(p.d, p.aspect_ratio) for p in points] == [(12, 0.2), (30, 0.5)]

    def test_canonical_order_independent_of_workers(self):
        serial, _ = run_sweep(TINY)
        threaded, _ = run_sweep(TINY, max_workers=4)
        strip = lambda rs: [(r.preset, r.method, r.aspect_ratio, r.trial, r.dist) for r in rs]
        assert strip(serial) == strip(threaded)

    def test_truncation_column_only_for_gep_methods(self):
        records, _ = run_sweep(replace(TINY, trials=1))
        for record in records:
            if record.method == "pca_plus_plus":
                assert record.s == 2
            else:
                assert record.s is None

    def test_failed_trials_become_nan_rows(self):
        config = ExperimentConfig(
            name="degenerate",
            model=ModelTemplate(signal_variances=(4.0,), noise_variance=0.0),
            n=20,
            aspect_ratios=(0.5,),
            methods=(MethodSpec(kind="cca", k=3),),  # rank 1 < k: every trial fails
            trials=2,
            base_seed=0,
        )
        records, summaries = run_sweep(config)
        assert all(math.isnan(r.dist) for r in records)
        assert summaries[0].failed == 2 and summaries[0].trials == 0

    def test_theory_overlay_rows(self):
        config = replace(TINY, theory_overlay="fixed")
        records, _ = run_sweep(replace(config, trials=1))
        theory_rows = [r for r in records if r.method == "theory"]
        assert [r.aspect_ratio for r in theory_rows] == [0.2, 0.5]
        from pairpca import fixed_aspect_error

        assert theory_rows[0].dist == pytest.approx(fixed_aspect_error(10.0, 0.2))

    def test_growing_overlay_uses_effective_snr(self):
        config = replace(TINY, theory_overlay="growing", scale_factor=10.0)
        records, _ = run_sweep(replace(config, trials=1))
        row = next(r for r in records if r.method == "theory" and r.aspect_ratio == 0.5)
        from pairpca import growing_spike_error

        assert row.d == 300  # 0.5 * 60 * 10
        assert row.dist == pytest.approx(growing_spike_error(row.d / (60 * 100.0)))

    def test_sample_size_axis_suffixes_labels(self):
        config = replace(TINY, sample_sizes=(30, 60), trials=1)
        records, _ = run_sweep(config)
        assert {r.preset for r in records} == {"tiny[n=30]", "tiny[n=60]"}

    def test_snr_axis_sets_background(self):
        config = replace(TINY, snr_sweep=(0.5, 1.0), trials=1, aspect_ratios=(0.5,))
        points = sweep_points(config)
        assert [p.preset_label for p in points] == ["tiny[snr=0.5]", "tiny[snr=1]"]
        # snr = lambda_A1 / sqrt(lambda_B1)  =>  lambda_B1 = (10 / snr)^2
        assert points[0].spec.background_variances == (400.0,)
        assert points[1].spec.background_variances == (100.0,)

    def test_reproducible_records(self):
        first, _ = run_sweep(TINY)
        second, _ = run_sweep(TINY)
        assert [(r.dist, r.trial) for r in first] == [(r.dist, r.trial) for r in second]


class TestSummaries:
    def test_mean_and_sd(self):
        records, summaries = run_sweep(replace(TINY, trials=3))
        group = [r.dist for r in records if r.method == "pca_plus" and r.aspect_ratio == 0.2]
        row = next(s for s in summaries if s.method == "pca_plus" and s.aspect_ratio == 0.2)
        assert row.mean_dist == pytest.approx(np.mean(group))
        assert row.sd_dist == pytest.approx(np.std(group, ddof=1))
        assert row.trials == 3 and row.failed == 0

    def test_single_trial_sd_is_zero(self):
        _, summaries = run_sweep(replace(TINY, trials=1))
        assert all(s.sd_dist == 0.0 for s in summaries)


class TestEmission:
    def test_records_schema(self, tmp_path):
        records, _ = run_sweep(replace(TINY, trials=1))
        path = tmp_path / "records.csv"
        emit_csv(records, path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "preset,method,n,d,aspect_ratio,s,trial,dist,elapsed_seconds"
        first = lines[1].split(",")
        assert first[0] == "tiny" and first[2] == "60"
        assert len(lines) == 1 + len(records)

    def test_empty_records_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_csv([], path)
        assert path.read_text() == "preset,method,n,d,aspect_ratio,s,trial,dist,elapsed_seconds\n"

    def test_one_record_two_lines(self, tmp_path):
        records, _ = run_sweep(replace(TINY, trials=1, aspect_ratios=(0.2,), methods=(MethodSpec(kind="pca"),)))
        path = tmp_path / "one.csv"
        emit_csv(records, path)
        assert len(path.read_text().splitlines()) == 2

    def test_bytes_reproducible_up_to_timing(self, tmp_path):
        # Everything except the wall-clock column is byte-identical across
        # reruns with the same seed.
        for name in ("a.csv", "b.csv"):
            records, _ = run_sweep(TINY)
            emit_csv(records, tmp_path / name)
        strip = lambda text: [line.rsplit(",", 1)[0] for line in text.splitlines()]
        assert strip((tmp_path / "a.csv").read_text()) == strip((tmp_path / "b.csv").read_text())
        summaries = [emit_summary(run_sweep(TINY)[1], tmp_path / f"s{i}.csv") for i in (0, 1)]
        assert (tmp_path / "s0.csv").read_bytes() == (tmp_path / "s1.csv").read_bytes()

    def test_lf_endings(self, tmp_path):
        records, _ = run_sweep(replace(TINY, trials=1))
        path = tmp_path / "lf.csv"
        emit_csv(records, path)
        assert b"\r" not in path.read_bytes()

    def test_nan_dist_written_as_nan(self, tmp_path):
        config = ExperimentConfig(
            name="degenerate",
            model=ModelTemplate(signal_variances=(4.0,), noise_variance=0.0),
            n=20,
            aspect_ratios=(0.5,),
            methods=(MethodSpec(kind="cca", k=3),),
            trials=1,
            base_seed=0,
        )
        records, summaries = run_sweep(config)
        path = tmp_path / "nan.csv"
        emit_csv(records, path)
        assert ",nan," in path.read_text().splitlines()[1]
        emit_summary(summaries, tmp_path / "nansum.csv")
        summary_line = (tmp_path / "nansum.csv").read_text().splitlines()[1]
        assert summary_line.endswith(",0,1")

    def test_summary_schema_and_formatting(self, tmp_path):
        _, summaries = run_sweep(replace(TINY, trials=2))
        path = tmp_path / "summary.csv"
        emit_summary(summaries, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "preset,method,aspect_ratio,mean_dist,sd_dist,trials,failed"
        mean_field = lines[1].split(",")[3]
        assert len(mean_field.split(".")[1]) == 3

    def test_roundtrip_through_reader(self, tmp_path):
        records, _ = run_sweep(replace(TINY, trials=2))
        path = tmp_path / "rt.csv"
        emit_csv(records, path)
        loaded = read_records_csv(path)
        assert [(r.preset, r.method, r.n, r.d, r.s, r.trial) for r in loaded] == [
            (r.preset, r.method, r.n, r.d, r.s, r.trial) for r in records
        ]
        np.testing.assert_allclose(
            [r.dist for r in loaded], [float(f"{r.dist:.6g}") for r in records]
        )


class TestPresets:
    def test_catalog_loads(self):
        for name in preset_names():
            config = preset(name)
            assert config.trials == 50
            assert config.methods

    def test_unknown_name(self):
        with pytest.raises(InvalidInput):
            preset("fig9-upper-left")

    def test_table1_protocol(self):
        config = preset("table1")
        assert config.sample_sizes == (100, 500, 5000)
        assert config.aspect_ratios == (0.4,)
        assert config.model.signal_variances == (20.0, 20.0, 15.0, 10.0, 10.0)
        assert config.model.background_variances == (500.0, 500.0, 200.0, 100.0, 100.0)
        assert config.theory_overlay == "fixed"
        pcapp = next(m for m in config.methods if m.kind == "pca_plus_plus")
        assert pcapp.resolve_s(2000, 5) == 10

    def test_fig1_left_snr_grid(self):
        config = preset("fig1-left")
        assert config.n == 2000 and config.aspect_ratios == (0.4,)
        assert len(config.snr_sweep) == 8
        assert config.snr_sweep[0] == pytest.approx(0.3125)
        assert config.snr_sweep[-1] == pytest.approx(0.666)

    def test_fig2_truncation_grid(self):
        config = preset("fig2-right")
        resolved = sorted(m.resolve_s(1000, 1) for m in config.methods)
        assert resolved == [2, 100, 200, 400]

    def test_fig3_right_scaling(self):
        config = preset("fig3-right")
        assert config.scale_factor == 10.0
        assert config.theory_overlay == "growing"
        point = next(p for p in sweep_points(config) if p.aspect_ratio == 1.8)
        assert point.d == 9000
        assert point.spec.signal_variances[0] == 500.0

    def test_overlap_presets_share_coordinates(self):
        config = preset("appendix-overlap-large-fixed")
        assert config.model.overlap_pairs == ((3, 3), (4, 4))
        assert config.model.background_variances == (500.0, 400.0, 300.0, 100.0, 50.0)

    def test_appendix_g_methods(self):
        config = preset("appendix-g-large")
        kinds = {m.kind for m in config.methods}
        assert kinds == {"cpca", "cpca_pp", "cca", "pca_plus_plus"}
        cca = next(m for m in config.methods if m.kind == "cca")
        assert cca.standardize


class TestConfigFiles:
    def test_parse_pairs(self):
        pairs = parse_config_text("a = 1\n# comment\nb.c = 2, 3\n\n")
        assert pairs == {"a": "1", "b.c": "2, 3"}

    def test_malformed_line(self):
        with pytest.raises(ConfigError):
            parse_config_text("not a pair")

    def test_preset_with_overrides(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(
            "preset = fig3-left\n"
            "trials = 3\n"
            "aspect_ratios = 0.1, 0.9\n"
            "method.pca_plus_plus.s = 0.1d\n"
        )
        config = load_config(path)
        assert config.trials == 3
        assert config.aspect_ratios == (0.1, 0.9)
        pcapp = next(m for m in config.methods if m.kind == "pca_plus_plus")
        assert pcapp.resolve_s(450, 5) == 45
        assert config.theory_overlay == "fixed"  # inherited

    def test_standalone_config(self):
        config = config_from_pairs(
            {
                "name": "custom",
                "n": "100",
                "aspect_ratios": "0.5",
                "model.signal_variances": "8, 2",
                "model.background_variances": "16",
                "model.overlap_pairs": "",
                "methods": "pca, pca_plus_plus",
                "method.pca_plus_plus.s": "4",
                "method.pca_plus_plus.k": "2",
                "theory_overlay": "none",
            }
        )
        assert config.model.signal_variances == (8.0, 2.0)
        assert config.theory_overlay is None
        assert config.methods[1].k == 2

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            config_from_pairs({"wat": "1"})

    def test_unknown_method_key_rejected(self):
        with pytest.raises(ConfigError):
            config_from_pairs(
                {
                    "preset": "fig1-right",
                    "method.pca.window": "3",
                }
            )

    def test_relabeled_method(self):
        config = config_from_pairs(
            {
                "preset": "fig1-right",
                "methods": "narrow, wide",
                "method.narrow.method": "pca_plus_plus",
                "method.narrow.s": "2",
                "method.wide.method": "pca_plus_plus",
                "method.wide.s": "full",
            }
        )
        assert [m.label for m in config.methods] == ["narrow", "wide"]
        assert config.methods[1].resolve_s(300, 1) == 300


class TestCLI:
    def test_theory_fixed(self, capsys):
        assert main(["theory", "--regime", "fixed", "--lambda", "10", "--c", "0.4"]) == 0
        assert capsys.readouterr().out == "0.20569\n"

    def test_theory_growing(self, capsys):
        assert main(["theory", "--regime", "growing", "--c", "0.18"]) == 0
        assert capsys.readouterr().out == "0.39057\n"

    def test_theory_missing_lambda(self, capsys):
        assert main(["theory", "--regime", "fixed", "--c", "0.4"]) == 1

    def test_bad_subcommand_exits_1(self):
        assert main(["simulate", "--preset", "nope", "--out", "x.csv"]) == 1

    def test_missing_required_flag_exits_1(self):
        assert main(["simulate", "--preset", "fig1-right"]) == 1

    def test_simulate_with_config(self, tmp_path, capsys):
        cfg = tmp_path / "mini.cfg"
        cfg.write_text(
            "name = mini\n"
            "n = 40\n"
            "trials = 2\n"
            "aspect_ratios = 0.3\n"
            "model.signal_variances = 10\n"
            "model.background_variances = 40\n"
            "methods = pca_plus_plus\n"
            "method.pca_plus_plus.s = 2\n"
        )
        out = tmp_path / "records.csv"
        summary = tmp_path / "summary.csv"
        code = main(
            ["simulate", "--config", str(cfg), "--out", str(out), "--summary", str(summary)]
        )
        assert code == 0
        assert out.exists() and summary.exists()
        assert len(out.read_text().splitlines()) == 3

    def test_simulate_trial_and_seed_overrides(self, tmp_path):
        out = tmp_path / "records.csv"
        code = main(
            ["simulate", "--preset", "fig1-right", "--trials", "1", "--seed", "7",
             "--out", str(out)]
        )
        assert code == 0
        rows = read_records_csv(out)
        assert {r.trial for r in rows} == {0}

    def test_list_presets(self, capsys):
        assert main(["list-presets"]) == 0
        out = capsys.readouterr().out
        for name in preset_names():
            assert name in out

    def test_unwritable_output_is_runtime_failure(self, tmp_path):
        code = main(
            ["simulate", "--preset", "fig1-right", "--trials", "1",
             "--out", str(tmp_path / "missing" / "records.csv")]
        )
        assert code == 2

    def test_plot_from_records(self, tmp_path):
        cfg = tmp_path / "mini.cfg"
        cfg.write_text(
            "name = mini\n"
            "n = 40\n"
            "trials = 2\n"
            "aspect_ratios = 0.3, 0.6\n"
            "model.signal_variances = 10\n"
            "model.background_variances = 40\n"
            "methods = pca_plus, pca_plus_plus\n"
            "method.pca_plus_plus.s = 2\n"
            "theory_overlay = fixed\n"
        )
        out = tmp_path / "records.csv"
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
        figdir = tmp_path / "figs"
        assert main(["plot", "--records", str(out), "--out-dir", str(figdir)]) == 0
        assert (figdir / "mini.png").exists()

    def test_simulate_renders_figures_alongside_csv(self, tmp_path):
        out = tmp_path / "records.csv"
        figdir = tmp_path / "figs"
        code = main(
            ["simulate", "--preset", "fig1-right", "--trials", "1",
             "--out", str(out), "--figures", str(figdir)]
        )
        assert code == 0
        assert (figdir / "fig1-right.png").exists()
