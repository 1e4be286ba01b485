"""Shared fixtures: the packaged exact table, the Tracy-Widom distribution,
and the Monte Carlo studies that several test modules assert against.

The studies are session-scoped because they are the expensive part of the
suite (a few minutes in total at their full replication counts); every test
that needs a rejection rate reads it from one of these shared runs.
"""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from lisind.simulation import (
    PowerStudyConfig,
    ScenarioKind,
    ScenarioSpec,
    run_power_study,
)
from lisind.tableaux import build_table, packaged_table
from lisind.tracy_widom import default_tw

settings.register_profile(
    "suite",
    max_examples=100,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

MIXTURE_RHOS = (0.5, 0.6, 0.7, 0.8, 0.9)
HEAVY_TAIL_SCENARIOS = (
    ScenarioSpec(kind=ScenarioKind.INDEP_PARETO, scale=1.0, shape=0.25),
    ScenarioSpec(kind=ScenarioKind.INDEP_PARETO, scale=1.0, shape=4.0),
    ScenarioSpec(kind=ScenarioKind.INDEP_WEIBULL, scale=1.0, shape=0.25),
    ScenarioSpec(kind=ScenarioKind.INDEP_WEIBULL, scale=1.0, shape=2.0),
    ScenarioSpec(kind=ScenarioKind.INDEP_STUDENT_T, df=1),
    ScenarioSpec(kind=ScenarioKind.INDEP_STUDENT_T, df=16),
)


@pytest.fixture(scope="session")
def packaged():
    return packaged_table()


@pytest.fixture(scope="session")
def tw():
    return default_tw()


@pytest.fixture(scope="session")
def built12():
    return build_table(12)


@pytest.fixture(scope="session")
def study_null_normal(packaged):
    """LIS-test rejection rates under independence, normal marginals.

    10 sizes x 10^4 replications at level 0.05; seed 0.
    """
    config = PowerStudyConfig(
        scenarios=(ScenarioSpec(kind=ScenarioKind.INDEP_NORMAL),),
        sample_sizes=tuple(range(10, 101, 10)),
        levels=(0.05,),
        replications=10000,
        seed=0,
        tests=("Ln",),
    )
    return run_power_study(config, table=packaged)


@pytest.fixture(scope="session")
def study_null_reference_n100(packaged):
    """Classical-test rejection rates under independence at n=100, 10^4 reps."""
    config = PowerStudyConfig(
        scenarios=(ScenarioSpec(kind=ScenarioKind.INDEP_NORMAL),),
        sample_sizes=(100,),
        levels=(0.05,),
        replications=10000,
        seed=0,
        tests=("Pearson", "Spearman", "Kendall"),
    )
    return run_power_study(config, table=packaged)


@pytest.fixture(scope="session")
def study_bivariate(packaged):
    """Power against the bivariate normal with rho = 0.7, level 0.05."""
    config = PowerStudyConfig(
        scenarios=(ScenarioSpec(kind=ScenarioKind.BIVARIATE_NORMAL, rho=0.7),),
        sample_sizes=tuple(range(10, 101, 10)),
        levels=(0.05,),
        replications=10000,
        seed=0,
        tests=("Ln", "Pearson"),
    )
    return run_power_study(config, table=packaged)


@pytest.fixture(scope="session")
def study_mixture(packaged, tw):
    """Power against the balanced +rho/-rho mixtures, level 0.05, n <= 500."""
    config = PowerStudyConfig(
        scenarios=tuple(
            ScenarioSpec(kind=ScenarioKind.MIXTURE_NORMAL_5050, rho=rho)
            for rho in MIXTURE_RHOS
        ),
        sample_sizes=(20, 40, 60, 80, 100, 500),
        levels=(0.05,),
        replications=10000,
        seed=0,
        tests=("Ln", "Pearson", "Spearman", "Kendall"),
    )
    return run_power_study(config, table=packaged, tw=tw)


@pytest.fixture(scope="session")
def study_mixture_n1000(packaged, tw):
    """The n = 1000 mixture cells at reduced replication (10^3)."""
    config = PowerStudyConfig(
        scenarios=tuple(
            ScenarioSpec(kind=ScenarioKind.MIXTURE_NORMAL_5050, rho=rho)
            for rho in MIXTURE_RHOS
        ),
        sample_sizes=(1000,),
        levels=(0.05,),
        replications=1000,
        seed=0,
        tests=("Ln", "Pearson", "Spearman", "Kendall"),
    )
    return run_power_study(config, table=packaged, tw=tw)


@pytest.fixture(scope="session")
def study_heavy_tails(packaged):
    """LIS-test null rates for six heavy-tailed marginals at both levels."""
    config = PowerStudyConfig(
        scenarios=HEAVY_TAIL_SCENARIOS,
        sample_sizes=(20, 40, 60, 80, 100),
        levels=(0.01, 0.05),
        replications=10000,
        seed=0,
        tests=("Ln",),
    )
    return run_power_study(config, table=packaged)
