"""Independence testing via the longest increasing subsequence of ranks.

The package turns a paired numeric sample into its rank permutation,
measures the length of the permutation's longest increasing subsequence,
and compares it against the exact null distribution (computed by
determinantal recurrences over Young tableaux counts) for small samples,
or against the Tracy-Widom limit law (computed from the Hastings-McLeod
solution of Painleve II) for large ones.  Classical correlation tests,
Hoeffding's dependence statistic, and a Monte Carlo power-study harness
are included for comparison.
"""

from .permutation import (
    EmptySampleError,
    LisResult,
    PairedSample,
    Permutation,
    TiePolicy,
    TiesPresentError,
    lis_lds,
    permutation_from_sample,
)
from .tableaux import (
    ExactLnTable,
    ShapePartition,
    TableFormatError,
    build_table,
    count_perms_with_lis,
    count_syt,
    enumerate_partitions,
    hook_numbers,
    load_table,
    packaged_table,
    save_table,
)
from .tracy_widom import (
    Painleve2Solution,
    TwDistribution,
    airy,
    airy_prime,
    default_tw,
    solve_painleve2,
    tw_cdf,
    tw_quantile,
)
from .ln_test import PValueVariant, TestReport, chi_n, ln_test
from .reference import (
    AssociationStatistic,
    hoeffding_statistic,
    hoeffding_test,
    kendall_test,
    normal_cdf,
    pearson_test,
    regularized_incomplete_beta,
    spearman_test,
    student_t_cdf,
)
from .simulation import (
    DEFAULT_SIZES,
    PowerRow,
    PowerStudyConfig,
    PowerTable,
    ScenarioKind,
    ScenarioSpec,
    load_config,
    run_power_study,
    sample_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # permutation
    "EmptySampleError",
    "TiesPresentError",
    "TiePolicy",
    "PairedSample",
    "Permutation",
    "LisResult",
    "permutation_from_sample",
    "lis_lds",
    # tableaux / exact distribution
    "ShapePartition",
    "TableFormatError",
    "ExactLnTable",
    "enumerate_partitions",
    "hook_numbers",
    "count_syt",
    "count_perms_with_lis",
    "build_table",
    "save_table",
    "load_table",
    "packaged_table",
    # Tracy-Widom
    "Painleve2Solution",
    "TwDistribution",
    "airy",
    "airy_prime",
    "solve_painleve2",
    "default_tw",
    "tw_cdf",
    "tw_quantile",
    # LIS test
    "PValueVariant",
    "TestReport",
    "chi_n",
    "ln_test",
    # reference tests
    "AssociationStatistic",
    "normal_cdf",
    "student_t_cdf",
    "regularized_incomplete_beta",
    "pearson_test",
    "spearman_test",
    "kendall_test",
    "hoeffding_statistic",
    "hoeffding_test",
    # simulation
    "ScenarioKind",
    "ScenarioSpec",
    "PowerStudyConfig",
    "PowerRow",
    "PowerTable",
    "DEFAULT_SIZES",
    "sample_scenario",
    "run_power_study",
    "load_config",
]
