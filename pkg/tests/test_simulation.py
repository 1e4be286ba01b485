"""Tests for the scenario samplers and the power-study engine.

Sampler correctness is checked through moments of large draws; the engine is
checked for determinism (counter-based substreams), output format, level
control under the null fixtures, and power growth under the dependent ones.
"""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from lisind.ln_test import PValueVariant
from lisind.simulation import (
    DEFAULT_SIZES,
    PowerStudyConfig,
    PowerTable,
    ScenarioKind,
    ScenarioSpec,
    load_config,
    run_power_study,
    sample_scenario,
)

from conftest import HEAVY_TAIL_SCENARIOS, MIXTURE_RHOS


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


class TestScenarioSpec:
    def test_labels(self):
        cases = [
            (ScenarioSpec(kind=ScenarioKind.INDEP_NORMAL), "IndepNormal"),
            (
                ScenarioSpec(kind=ScenarioKind.INDEP_PARETO, scale=1.0, shape=0.25),
                "IndepPareto(scale=1;shape=0.25)",
            ),
            (
                ScenarioSpec(kind=ScenarioKind.INDEP_WEIBULL, scale=1.0, shape=2.0),
                "IndepWeibull(scale=1;shape=2)",
            ),
            (
                ScenarioSpec(kind=ScenarioKind.INDEP_STUDENT_T, df=16),
                "IndepStudentT(df=16)",
            ),
            (
                ScenarioSpec(kind=ScenarioKind.BIVARIATE_NORMAL, rho=0.7),
                "BivariateNormal(rho=0.7)",
            ),
            (
                ScenarioSpec(kind=ScenarioKind.MIXTURE_NORMAL_5050, rho=0.5),
                "MixtureNormal5050(rho=0.5)",
            ),
        ]
        for spec, label in cases:
            assert spec.label == label
            assert "," not in label  # labels must survive the CSV format

    def test_missing_required_parameter(self):
        with pytest.raises(ValueError, match="requires"):
            ScenarioSpec(kind=ScenarioKind.BIVARIATE_NORMAL)
        with pytest.raises(ValueError, match="requires"):
            ScenarioSpec(kind=ScenarioKind.INDEP_PARETO, scale=1.0)
        with pytest.raises(ValueError, match="requires"):
            ScenarioSpec(kind=ScenarioKind.INDEP_STUDENT_T)

    def test_unexpected_parameter(self):
        with pytest.raises(ValueError, match="does not take"):
            ScenarioSpec(kind=ScenarioKind.INDEP_NORMAL, rho=0.5)
        with pytest.raises(ValueError, match="does not take"):
            ScenarioSpec(kind=ScenarioKind.BIVARIATE_NORMAL, rho=0.5, df=3)

    def test_parameter_ranges(self):
        with pytest.raises(ValueError, match="positive"):
            ScenarioSpec(kind=ScenarioKind.INDEP_PARETO, scale=0.0, shape=1.0)
        with pytest.raises(ValueError, match="positive"):
            ScenarioSpec(kind=ScenarioKind.INDEP_WEIBULL, scale=1.0, shape=-2.0)
        with pytest.raises(ValueError, match="df"):
            ScenarioSpec(kind=ScenarioKind.INDEP_STUDENT_T, df=0)
        for bad_rho in (-1.0, 1.0, 1.5):
            with pytest.raises(ValueError, match="rho"):
                ScenarioSpec(kind=ScenarioKind.MIXTURE_NORMAL_5050, rho=bad_rho)
        with pytest.raises(ValueError, match="sample size"):
            ScenarioSpec(kind=ScenarioKind.INDEP_NORMAL, n=0)


class TestSamplers:
    def test_independent_normal_moments(self):
        spec = ScenarioSpec(kind=ScenarioKind.INDEP_NORMAL, n=100_000)
        sample = sample_scenario(spec, _rng(1))
        assert sample.n == 100_000
        for arr in (sample.xs, sample.ys):
            assert abs(float(arr.mean())) < 4 / math.sqrt(arr.size)
            assert abs(float(arr.var()) - 1.0) < 5 * math.sqrt(2 / arr.size)
        r = float(np.corrcoef(sample.xs, sample.ys)[0, 1])
        assert abs(r) < 0.012

    def test_bivariate_normal_correlation(self):
        spec = ScenarioSpec(kind=ScenarioKind.BIVARIATE_NORMAL, rho=0.7, n=200_000)
        sample = sample_scenario(spec, _rng(2))
        r = float(np.corrcoef(sample.xs, sample.ys)[0, 1])
        assert r == pytest.approx(0.7, abs=0.01)

    def test_mixture_even_n_split_in_halves(self):
        n = 200_000
        spec = ScenarioSpec(kind=ScenarioKind.MIXTURE_NORMAL_5050, rho=0.8, n=n)
        sample = sample_scenario(spec, _rng(3))
        half = n // 2
        r_first = float(np.corrcoef(sample.xs[:half], sample.ys[:half])[0, 1])
        r_second = float(np.corrcoef(sample.xs[half:], sample.ys[half:])[0, 1])
        r_total = float(np.corrcoef(sample.xs, sample.ys)[0, 1])
        assert r_first == pytest.approx(0.8, abs=0.01)
        assert r_second == pytest.approx(-0.8, abs=0.01)
        assert abs(r_total) < 0.01

    def test_mixture_odd_n_positionwise_signs(self):
        # With n = 3 the first pair leans +rho, the second -rho, and the
        # odd leftover averages out to zero across draws.
        spec = ScenarioSpec(kind=ScenarioKind.MIXTURE_NORMAL_5050, rho=0.9, n=3)
        rng = _rng(4)
        draws = 4000
        acc = np.zeros(3)
        for _ in range(draws):
            s = sample_scenario(spec, rng)
            acc += s.xs * s.ys
        acc /= draws
        assert acc[0] == pytest.approx(0.9, abs=0.1)
        assert acc[1] == pytest.approx(-0.9, abs=0.1)
        assert abs(acc[2]) < 0.1

    def test_pareto_support(self):
        spec = ScenarioSpec(
            kind=ScenarioKind.INDEP_PARETO, scale=1.0, shape=0.25, n=50_000
        )
        sample = sample_scenario(spec, _rng(5))
        assert float(sample.xs.min()) > 1.0
        assert float(sample.ys.min()) > 1.0
        assert np.isfinite(sample.xs).all()

    def test_weibull_support(self):
        spec = ScenarioSpec(
            kind=ScenarioKind.INDEP_WEIBULL, scale=2.0, shape=0.25, n=50_000
        )
        sample = sample_scenario(spec, _rng(6))
        assert float(sample.xs.min()) > 0.0
        assert float(sample.ys.min()) > 0.0
        assert np.isfinite(sample.ys).all()

    def test_student_t_finite_and_symmetric(self):
        spec = ScenarioSpec(kind=ScenarioKind.INDEP_STUDENT_T, df=1, n=50_000)
        sample = sample_scenario(spec, _rng(7))
        assert np.isfinite(sample.xs).all()
        assert np.isfinite(sample.ys).all()
        assert abs(float(np.median(sample.xs))) < 0.05


def _small_config(**overrides) -> PowerStudyConfig:
    base = dict(
        scenarios=(ScenarioSpec(kind=ScenarioKind.INDEP_NORMAL),),
        sample_sizes=(10, 15),
        levels=(0.05, 0.2),
        replications=300,
        seed=11,
        tests=("Ln", "Pearson", "Spearman", "Kendall", "Hoeffding"),
        hoeffding_mc_reps=49,
    )
    base.update(overrides)
    return PowerStudyConfig(**base)


class TestEngine:
    def test_row_count_and_grid(self):
        config = _small_config()
        table = run_power_study(config)
        assert len(table.rows) == 1 * 2 * 2 * 5
        seen = {(r.scenario, r.test, r.n, r.level) for r in table.rows}
        assert len(seen) == len(table.rows)
        for row in table.rows:
            assert 0.0 <= row.power <= 1.0
            assert row.replications == 300
            assert row.seed == 11

    def test_rerun_is_bit_identical(self, tmp_path):
        config = _small_config()
        a = run_power_study(config)
        b = run_power_study(config)
        assert a.rows == b.rows
        pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
        a.to_csv(pa)
        b.to_csv(pb)
        assert pa.read_bytes() == pb.read_bytes()

    def test_seed_changes_output(self):
        a = run_power_study(_small_config(seed=11))
        b = run_power_study(_small_config(seed=12))
        assert a.rows != b.rows

    def test_csv_format(self, tmp_path):
        table = run_power_study(_small_config())
        path = tmp_path / "study.csv"
        table.to_csv(path)
        lines = path.read_text(encoding="utf-8").splitlines()
        meta = [line for line in lines if line.startswith("# ")]
        keys = {line[2:].split(":", 1)[0] for line in meta}
        assert {
            "generator",
            "substreams",
            "normal_method",
            "rejection_rule",
            "ln_p_value_variant",
            "hoeffding_mc_reps",
            "failed_replications",
        } <= keys
        header_index = lines.index("scenario,test,n,level,power,reps,seed")
        assert header_index == len(meta)
        data = lines[header_index + 1 :]
        assert len(data) == len(table.rows)
        for line in data:
            fields = line.split(",")
            assert len(fields) == 7
            assert fields[0] == "IndepNormal"
            int(fields[2]), float(fields[3]), float(fields[4])

    def test_no_failed_replications_for_continuous_samplers(self):
        table = run_power_study(_small_config())
        assert table.metadata["failed_replications"] == "none"

    def test_power_lookup_missing_row_raises(self):
        table = run_power_study(_small_config())
        with pytest.raises(KeyError):
            table.power("IndepNormal", "Ln", 999, 0.05)

    def test_asymptotic_branch_smoke(self):
        config = _small_config(
            sample_sizes=(120,), replications=30, tests=("Ln",), levels=(0.05,)
        )
        table = run_power_study(config)
        rate = table.power("IndepNormal", "Ln", 120, 0.05)
        assert 0.0 <= rate <= 0.5

    def test_hoeffding_level_in_engine(self):
        config = _small_config(
            sample_sizes=(10, 30),
            replications=300,
            tests=("Hoeffding",),
            levels=(0.05,),
            hoeffding_mc_reps=99,
            seed=1,
        )
        table = run_power_study(config)
        bound = 0.05 + 3 * math.sqrt(0.05 * 0.95 / 300)
        for n in (10, 30):
            assert table.power("IndepNormal", "Hoeffding", n, 0.05) <= bound

    def test_ln_variant_is_recorded(self):
        table = run_power_study(_small_config(tests=("Ln",), levels=(0.05,)))
        assert table.metadata["ln_p_value_variant"] == "DOUBLED_INCLUSIVE"


class TestConfigValidation:
    def test_default_grid(self):
        assert DEFAULT_SIZES == (10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 500, 1000)

    def test_empty_scenarios(self):
        with pytest.raises(ValueError, match="scenario"):
            PowerStudyConfig(scenarios=())

    def test_bad_sizes(self):
        with pytest.raises(ValueError, match="sample sizes"):
            _small_config(sample_sizes=())
        with pytest.raises(ValueError, match="sample sizes"):
            _small_config(sample_sizes=(10, 0))

    def test_bad_levels(self):
        with pytest.raises(ValueError, match="levels"):
            _small_config(levels=(0.0,))
        with pytest.raises(ValueError, match="levels"):
            _small_config(levels=(0.05, 1.0))
        with pytest.raises(ValueError, match="levels"):
            _small_config(levels=())

    def test_bad_replications(self):
        with pytest.raises(ValueError, match="replications"):
            _small_config(replications=0)

    def test_bad_tests(self):
        with pytest.raises(ValueError, match="tests"):
            _small_config(tests=("Ln", "Bogus"))
        with pytest.raises(ValueError, match="tests"):
            _small_config(tests=())

    def test_bad_hoeffding_reps(self):
        with pytest.raises(ValueError, match="hoeffding_mc_reps"):
            _small_config(hoeffding_mc_reps=0)

    def test_bad_variant(self):
        with pytest.raises(ValueError, match="ln_variant"):
            _small_config(ln_variant="doubled")


class TestLoadConfig:
    def test_round_trip(self, tmp_path):
        payload = {
            "scenarios": [
                {"kind": "IndepNormal"},
                {"kind": "BivariateNormal", "rho": 0.7},
                {"kind": "IndepPareto", "scale": 1.0, "shape": 4.0},
            ],
            "sizes": [10, 20],
            "levels": [0.05],
            "replications": 50,
            "seed": 3,
            "tests": ["Ln", "Pearson"],
            "hoeffding_mc_reps": 20,
            "ln_variant": "doubled",
        }
        path = tmp_path / "config.json"
        path.write_text(json.dumps(payload), encoding="utf-8")
        config = load_config(path)
        assert config == PowerStudyConfig(
            scenarios=(
                ScenarioSpec(kind=ScenarioKind.INDEP_NORMAL),
                ScenarioSpec(kind=ScenarioKind.BIVARIATE_NORMAL, rho=0.7),
                ScenarioSpec(kind=ScenarioKind.INDEP_PARETO, scale=1.0, shape=4.0),
            ),
            sample_sizes=(10, 20),
            levels=(0.05,),
            replications=50,
            seed=3,
            tests=("Ln", "Pearson"),
            hoeffding_mc_reps=20,
            ln_variant=PValueVariant.DOUBLED,
        )

    def test_defaults_fill_in(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"scenarios": [{"kind": "IndepNormal"}]}))
        config = load_config(path)
        assert config.sample_sizes == DEFAULT_SIZES
        assert config.levels == (0.01, 0.05)
        assert config.replications == 10000
        assert config.ln_variant is PValueVariant.DOUBLED_INCLUSIVE

    @pytest.mark.parametrize(
        "payload,message",
        [
            ({"scenarios": [{"kind": "IndepNormal"}], "bogus": 1}, "unknown config keys"),
            ({"scenarios": [{"kind": "Nope"}]}, "unknown scenario kind"),
            (
                {"scenarios": [{"kind": "IndepNormal", "weird": 2}]},
                "unknown scenario parameters",
            ),
            ({}, "scenarios"),
            ({"scenarios": []}, "scenarios"),
            ({"scenarios": [{"rho": 0.5}]}, "kind"),
            ([1, 2], "JSON object"),
            (
                {"scenarios": [{"kind": "IndepNormal"}], "ln_variant": "nope"},
                "ln_variant",
            ),
        ],
    )
    def test_rejects_malformed(self, tmp_path, payload, message):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(ValueError, match=message):
            load_config(path)


class TestNullLevelControl:
    def test_normal_null_rates_below_bound(self, study_null_normal):
        bound = 0.05 + 3 * math.sqrt(0.05 * 0.95 / 10000)
        for n in range(10, 101, 10):
            rate = study_null_normal.power("IndepNormal", "Ln", n, 0.05)
            assert 0.0 < rate <= bound

    def test_heavy_tail_null_rates_below_level(self, study_heavy_tails):
        for spec in HEAVY_TAIL_SCENARIOS:
            for level in (0.01, 0.05):
                for n in (20, 40, 60, 80, 100):
                    rate = study_heavy_tails.power(spec.label, "Ln", n, level)
                    assert rate <= level

    def test_no_failed_replications(self, study_null_normal, study_heavy_tails):
        assert study_null_normal.metadata["failed_replications"] == "none"
        assert study_heavy_tails.metadata["failed_replications"] == "none"


class TestPowerTrends:
    def test_bivariate_power_grows_on_doubling_grid(self, study_bivariate):
        label = "BivariateNormal(rho=0.7)"
        powers = [
            study_bivariate.power(label, "Ln", n, 0.05) for n in (10, 20, 40, 80)
        ]
        assert all(a < b for a, b in zip(powers, powers[1:]))
        assert powers[-1] > 0.9

    def test_mixture_power_grows_with_n_and_rho(self, study_mixture):
        for rho in MIXTURE_RHOS:
            label = f"MixtureNormal5050(rho={rho:g})"
            powers = [
                study_mixture.power(label, "Ln", n, 0.05) for n in (20, 80, 500)
            ]
            assert powers[0] < powers[1] < powers[2]
        at_n500 = [
            study_mixture.power(f"MixtureNormal5050(rho={rho:g})", "Ln", 500, 0.05)
            for rho in MIXTURE_RHOS
        ]
        assert all(a < b for a, b in zip(at_n500, at_n500[1:]))

    def test_strong_mixture_detected_at_n500(self, study_mixture):
        for rho in (0.8, 0.9):
            label = f"MixtureNormal5050(rho={rho:g})"
            assert study_mixture.power(label, "Ln", 500, 0.05) > 0.95

    def test_classical_tests_blind_to_mixture(self, study_mixture):
        # The balanced mixture has zero overall correlation, so the three
        # classical tests hover near their levels while the LIS test gains
        # power; checked at the strongest mixture.
        label = "MixtureNormal5050(rho=0.9)"
        ln = study_mixture.power(label, "Ln", 500, 0.05)
        for t in ("Pearson", "Spearman", "Kendall"):
            assert study_mixture.power(label, t, 500, 0.05) < 0.2 < ln

    def test_mixture_n1000_rates(self, study_mixture_n1000):
        for rho in (0.8, 0.9):
            label = f"MixtureNormal5050(rho={rho:g})"
            assert study_mixture_n1000.power(label, "Ln", 1000, 0.05) > 0.95
