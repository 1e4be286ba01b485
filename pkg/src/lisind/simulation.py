"""Seeded scenario samplers and the Monte Carlo power-study engine.

Scenarios cover independent pairs with normal, Pareto, Weibull, and
Student-t marginals (null cases for level checks), plus two dependent
families: the bivariate normal with correlation rho and a 50-50 mixture of
bivariate normals with correlations +rho and -rho.  The mixture uses an
exact half-and-half composition per sample (odd n assigns the leftover pair
by a fair coin): overall correlation is zero and the balanced composition
keeps rank-correlation statistics essentially at their null behavior, so
only tests sensitive to non-monotone dependence detect it.  (An i.i.d.
per-pair coin would instead let the binomial fluctuation of the component
counts inflate every correlation statistic's variance, turning the mixture
into a weak signal for all of them.)

The study's rejection rule is p <= level for every test.  For the exact
LIS test this uses the inclusive-tail p-value variant by default: its
rejection region is the equal-tail region {P(L <= l0) <= level/2 or
P(L >= l0) <= level/2}, whose size never exceeds the level, so the null
scenarios are guaranteed-calibrated level checks.  (The non-inclusive
variant excludes the observed value's mass from the upper tail and its
exact size overshoots the level at most n; it remains available via
``ln_variant`` for side-by-side comparison.)

Reproducibility: all randomness flows through the counter-based Philox
generator.  Replication r of scenario index s at sample size n uses the
substream SeedSequence(entropy=seed, spawn_key=(s, n, r)), so every
replication is independent and the study result is a pure function of its
configuration, regardless of evaluation order.  Normal variates use the
inverse-CDF of 53-bit offset uniforms u = (k + 1/2) / 2^53, which never hit
0 or 1; heavy-tailed marginals invert u directly.  These choices are
recorded in the output metadata.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy.special import ndtri

from . import _kernels
from .ln_test import PValueVariant, _exact_p_value
from .permutation import PairedSample
from .reference import _t_transform_p, normal_cdf
from .tableaux import ExactLnTable, packaged_table
from .tracy_widom import TwDistribution, default_tw

__all__ = [
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

#: Default size grid: the dense small-sample grid plus the two large sizes.
DEFAULT_SIZES = (10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 500, 1000)

KNOWN_TESTS = ("Ln", "Pearson", "Spearman", "Kendall", "Hoeffding")


class ScenarioKind(enum.Enum):
    INDEP_NORMAL = "IndepNormal"
    INDEP_PARETO = "IndepPareto"
    INDEP_WEIBULL = "IndepWeibull"
    INDEP_STUDENT_T = "IndepStudentT"
    BIVARIATE_NORMAL = "BivariateNormal"
    MIXTURE_NORMAL_5050 = "MixtureNormal5050"


_NEEDS_SCALE_SHAPE = (ScenarioKind.INDEP_PARETO, ScenarioKind.INDEP_WEIBULL)
_NEEDS_RHO = (ScenarioKind.BIVARIATE_NORMAL, ScenarioKind.MIXTURE_NORMAL_5050)


@dataclass(frozen=True)
class ScenarioSpec:
    """One sampling scenario: a distribution family, its parameters, and n."""

    kind: ScenarioKind
    n: int = 1
    scale: Optional[float] = None
    shape: Optional[float] = None
    df: Optional[int] = None
    rho: Optional[float] = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"sample size must be >= 1, got {self.n}")
        kind = self.kind
        allowed = {
            ScenarioKind.INDEP_NORMAL: (),
            ScenarioKind.INDEP_PARETO: ("scale", "shape"),
            ScenarioKind.INDEP_WEIBULL: ("scale", "shape"),
            ScenarioKind.INDEP_STUDENT_T: ("df",),
            ScenarioKind.BIVARIATE_NORMAL: ("rho",),
            ScenarioKind.MIXTURE_NORMAL_5050: ("rho",),
        }[kind]
        for name in ("scale", "shape", "df", "rho"):
            value = getattr(self, name)
            if name in allowed:
                if value is None:
                    raise ValueError(f"{kind.value} requires parameter '{name}'")
            elif value is not None:
                raise ValueError(f"{kind.value} does not take parameter '{name}'")
        if kind in _NEEDS_SCALE_SHAPE and (self.scale <= 0 or self.shape <= 0):
            raise ValueError("scale and shape must be positive")
        if kind is ScenarioKind.INDEP_STUDENT_T and self.df < 1:
            raise ValueError(f"df must be >= 1, got {self.df}")
        if kind in _NEEDS_RHO and not -1.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (-1, 1), got {self.rho}")

    @property
    def label(self) -> str:
        """Comma-free label used in output tables."""
        kind = self.kind
        if kind in _NEEDS_SCALE_SHAPE:
            return f"{kind.value}(scale={self.scale:g};shape={self.shape:g})"
        if kind is ScenarioKind.INDEP_STUDENT_T:
            return f"{kind.value}(df={self.df})"
        if kind in _NEEDS_RHO:
            return f"{kind.value}(rho={self.rho:g})"
        return kind.value


def _uniform_open(rng: np.random.Generator, size) -> np.ndarray:
    """Uniforms strictly inside (0, 1): (k + 1/2) / 2^53 over 53-bit k."""
    return (rng.integers(0, 1 << 53, size=size) + 0.5) * 2.0**-53


def _std_normal(rng: np.random.Generator, size) -> np.ndarray:
    """Standard normals by inverse-CDF of open uniforms (one draw per variate)."""
    return ndtri(_uniform_open(rng, size))


def _student_t(rng: np.random.Generator, n: int, df: int) -> np.ndarray:
    z = _std_normal(rng, n)
    chisq = np.sum(_std_normal(rng, (df, n)) ** 2, axis=0)
    return z / np.sqrt(chisq / df)


def _sample_arrays(spec: ScenarioSpec, rng: np.random.Generator):
    n = spec.n
    kind = spec.kind
    if kind is ScenarioKind.INDEP_NORMAL:
        return _std_normal(rng, n), _std_normal(rng, n)
    if kind is ScenarioKind.INDEP_PARETO:
        u, v = _uniform_open(rng, n), _uniform_open(rng, n)
        inv = -1.0 / spec.shape
        return spec.scale * u**inv, spec.scale * v**inv
    if kind is ScenarioKind.INDEP_WEIBULL:
        u, v = _uniform_open(rng, n), _uniform_open(rng, n)
        inv = 1.0 / spec.shape
        return (
            spec.scale * (-np.log(u)) ** inv,
            spec.scale * (-np.log(v)) ** inv,
        )
    if kind is ScenarioKind.INDEP_STUDENT_T:
        return _student_t(rng, n, spec.df), _student_t(rng, n, spec.df)
    if kind is ScenarioKind.BIVARIATE_NORMAL:
        x = _std_normal(rng, n)
        z = _std_normal(rng, n)
        return x, spec.rho * x + math.sqrt(1.0 - spec.rho**2) * z
    if kind is ScenarioKind.MIXTURE_NORMAL_5050:
        x = _std_normal(rng, n)
        z = _std_normal(rng, n)
        signs = np.ones(n)
        signs[n // 2 :] = -1.0  # exact 50-50 composition
        if n % 2:
            signs[-1] = 2.0 * float(rng.integers(0, 2)) - 1.0
        return x, signs * spec.rho * x + math.sqrt(1.0 - spec.rho**2) * z
    raise ValueError(f"unknown scenario kind {kind!r}")  # pragma: no cover


def sample_scenario(spec: ScenarioSpec, rng: np.random.Generator) -> PairedSample:
    """Draw spec.n i.i.d. pairs from the scenario using the given generator."""
    x, y = _sample_arrays(spec, rng)
    return PairedSample.from_arrays(x, y)


@dataclass(frozen=True)
class PowerStudyConfig:
    """Configuration of a power study; the result is a pure function of it."""

    scenarios: tuple[ScenarioSpec, ...]
    sample_sizes: tuple[int, ...] = DEFAULT_SIZES
    levels: tuple[float, ...] = (0.01, 0.05)
    replications: int = 10000
    seed: int = 0
    tests: tuple[str, ...] = KNOWN_TESTS
    hoeffding_mc_reps: int = 200
    ln_variant: PValueVariant = PValueVariant.DOUBLED_INCLUSIVE

    def __post_init__(self) -> None:
        object.__setattr__(self, "scenarios", tuple(self.scenarios))
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in self.sample_sizes))
        object.__setattr__(self, "levels", tuple(float(a) for a in self.levels))
        object.__setattr__(self, "tests", tuple(self.tests))
        if not self.scenarios:
            raise ValueError("need at least one scenario")
        if not self.sample_sizes or any(n < 1 for n in self.sample_sizes):
            raise ValueError("sample sizes must be positive")
        if not self.levels or any(not 0.0 < a < 1.0 for a in self.levels):
            raise ValueError("levels must lie strictly inside (0, 1)")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.hoeffding_mc_reps < 1:
            raise ValueError("hoeffding_mc_reps must be >= 1")
        unknown = [t for t in self.tests if t not in KNOWN_TESTS]
        if unknown or not self.tests:
            raise ValueError(f"tests must be a nonempty subset of {KNOWN_TESTS}")
        if not isinstance(self.ln_variant, PValueVariant):
            raise ValueError(f"ln_variant must be a PValueVariant, got {self.ln_variant!r}")


@dataclass(frozen=True)
class PowerRow:
    scenario: str
    test: str
    n: int
    level: float
    power: float
    replications: int
    seed: int


@dataclass(frozen=True)
class PowerTable:
    """Empirical rejection rates per (scenario, test, n, level), plus metadata."""

    rows: tuple[PowerRow, ...]
    metadata: Mapping[str, str]

    def power(self, scenario: str, test: str, n: int, level: float) -> float:
        for row in self.rows:
            if (
                row.scenario == scenario
                and row.test == test
                and row.n == n
                and math.isclose(row.level, level)
            ):
                return row.power
        raise KeyError(f"no row for ({scenario}, {test}, n={n}, level={level})")

    def to_csv(self, path: str | Path) -> None:
        """Write `scenario,test,n,level,power,reps,seed` rows after a metadata block."""
        lines = [f"# {key}: {value}" for key, value in self.metadata.items()]
        lines.append("scenario,test,n,level,power,reps,seed")
        for r in self.rows:
            lines.append(
                f"{r.scenario},{r.test},{r.n},{r.level:g},{r.power:.10g},"
                f"{r.replications},{r.seed}"
            )
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _ln_reject_masks(
    n: int, levels: Sequence[float], table: ExactLnTable, variant: PValueVariant
) -> dict[float, np.ndarray]:
    """reject[l] per level for the exact test under the chosen p-value variant."""
    masks = {}
    for level in levels:
        mask = np.zeros(n + 1, dtype=bool)
        for l0 in range(1, n + 1):
            mask[l0] = _exact_p_value(l0, n, table, variant) <= level
        masks[level] = mask
    return masks


def run_power_study(
    config: PowerStudyConfig,
    table: Optional[ExactLnTable] = None,
    tw: Optional[TwDistribution] = None,
) -> PowerTable:
    """Estimate rejection rates for every (scenario, test, size, level) cell.

    Each replication draws one sample from its own substream (see module
    docstring) and applies every configured test to it; the rejection rule is
    p <= level throughout (matching the exact test's convention).  Counts are
    aggregated as integers in replication order, so the outcome is
    deterministic and independent of any internal scheduling.  Replications
    where a test raises (e.g. ties under an atomless-in-theory sampler) are
    excluded from that test's count and reported in the metadata instead of
    being silently dropped.
    """
    if table is None:
        table = packaged_table()
    needs_tw = any(n > table.n_max for n in config.sample_sizes) and "Ln" in config.tests
    if needs_tw and tw is None:
        tw = default_tw()

    levels = config.levels
    tests = config.tests
    rows: list[PowerRow] = []
    error_notes: list[str] = []

    for s_index, scenario in enumerate(config.scenarios):
        for n in config.sample_sizes:
            spec = replace(scenario, n=n)
            use_exact = n <= table.n_max
            if "Ln" in tests:
                if use_exact:
                    ln_masks = _ln_reject_masks(n, levels, table, config.ln_variant)
                else:
                    tw_bounds = {
                        level: (tw.quantile(level / 2.0), tw.quantile(1.0 - level / 2.0))
                        for level in levels
                    }
                root_n2 = 2.0 * math.sqrt(n)
                n_sixth = n ** (1.0 / 6.0)
            centered_index = np.arange(1, n + 1, dtype=float) - 0.5 * (n + 1)
            kendall_sd = math.sqrt(2.0 * (2 * n + 5) / (9.0 * n * (n - 1))) if n >= 2 else 1.0
            hoeff_denom = (
                n * (n - 1) * (n - 2) * (n - 3) * (n - 4) if n >= 5 else 0
            )

            counts = {t: {level: 0 for level in levels} for t in tests}
            errors = {t: 0 for t in tests}

            for r in range(config.replications):
                seq = np.random.SeedSequence(
                    entropy=config.seed, spawn_key=(s_index, n, r)
                )
                rng = np.random.Generator(np.random.Philox(seq))
                x, y = _sample_arrays(spec, rng)

                order_x = np.argsort(x, kind="stable")
                sorted_x = x[order_x]
                order_y = np.argsort(y, kind="stable")
                sorted_y = y[order_y]
                tied = bool(
                    np.any(sorted_x[1:] == sorted_x[:-1])
                    or np.any(sorted_y[1:] == sorted_y[:-1])
                )
                image = None
                if not tied:
                    y_ranks = np.empty(n, dtype=np.int64)
                    y_ranks[order_y] = np.arange(1, n + 1)
                    image = y_ranks[order_x]

                for t in tests:
                    try:
                        if t == "Pearson":
                            dx = x - x.mean()
                            dy = y - y.mean()
                            denom = math.sqrt(float(dx @ dx) * float(dy @ dy))
                            if denom == 0.0:
                                raise ValueError("degenerate variance")
                            r_val = max(-1.0, min(1.0, float(dx @ dy) / denom))
                            _, p = _t_transform_p(r_val, n)
                            for level in levels:
                                counts[t][level] += p <= level
                            continue
                        if tied:
                            raise ValueError("tied ranks")
                        if t == "Ln":
                            l0 = int(_kernels.patience_lis(image))
                            if use_exact:
                                for level in levels:
                                    counts[t][level] += bool(ln_masks[level][l0])
                            else:
                                chi = (l0 - root_n2) / n_sixth
                                for level in levels:
                                    q_lo, q_hi = tw_bounds[level]
                                    counts[t][level] += chi < q_lo or chi > q_hi
                        elif t == "Spearman":
                            r_s = 12.0 * float(centered_index @ (image - 0.5 * (n + 1))) / (
                                n * (n * n - 1.0)
                            )
                            r_s = max(-1.0, min(1.0, r_s))
                            _, p = _t_transform_p(r_s, n)
                            for level in levels:
                                counts[t][level] += p <= level
                        elif t == "Kendall":
                            disc = int(_kernels.count_discordant(image))
                            tau = (n * (n - 1.0) - 4.0 * disc) / (n * (n - 1.0))
                            p = 2.0 * (1.0 - normal_cdf(abs(tau) / kendall_sd))
                            for level in levels:
                                counts[t][level] += p <= level
                        elif t == "Hoeffding":
                            if n < 5:
                                raise ValueError("needs n >= 5")
                            a_s, b_s, c_s = _kernels.hoeffding_terms(image)
                            obs = (
                                int(a_s)
                                - 2 * (n - 2) * int(b_s)
                                + (n - 2) * (n - 3) * int(c_s)
                            )
                            exceed = 0
                            for _ in range(config.hoeffding_mc_reps):
                                perm = rng.permutation(image)
                                pa, pb, pc = _kernels.hoeffding_terms(perm)
                                num = (
                                    int(pa)
                                    - 2 * (n - 2) * int(pb)
                                    + (n - 2) * (n - 3) * int(pc)
                                )
                                exceed += num >= obs
                            p = (1.0 + exceed) / (config.hoeffding_mc_reps + 1.0)
                            for level in levels:
                                counts[t][level] += p <= level
                    except (ValueError, ArithmeticError):
                        errors[t] += 1

            for t in tests:
                effective = config.replications - errors[t]
                if errors[t]:
                    error_notes.append(
                        f"{scenario.label}|n={n}|{t}: {errors[t]} failed replications"
                    )
                for level in levels:
                    denom_reps = effective if effective > 0 else 1
                    rows.append(
                        PowerRow(
                            scenario=scenario.label,
                            test=t,
                            n=n,
                            level=level,
                            power=counts[t][level] / denom_reps,
                            replications=config.replications,
                            seed=config.seed,
                        )
                    )

    metadata = {
        "generator": "philox4x64 counter-based",
        "substreams": "SeedSequence(seed, spawn_key=(scenario_index, sample_size, replication))",
        "normal_method": "inverse-cdf of (k+1/2)/2^53 uniforms",
        "rejection_rule": "p <= level",
        "ln_p_value_variant": config.ln_variant.name,
        "hoeffding_mc_reps": str(config.hoeffding_mc_reps),
        "failed_replications": "; ".join(error_notes) if error_notes else "none",
    }
    return PowerTable(rows=tuple(rows), metadata=metadata)


def load_config(path: str | Path) -> PowerStudyConfig:
    """Read a study configuration from a JSON file.

    Schema: {"scenarios": [{"kind": <name>, ...params}], "sizes": [...],
    "levels": [...], "replications": N, "seed": S, "tests": [...],
    "hoeffding_mc_reps": M, "ln_variant": "doubled"|"doubled-inclusive"} —
    all but "scenarios" optional.
    """
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    known = {
        "scenarios",
        "sizes",
        "levels",
        "replications",
        "seed",
        "tests",
        "hoeffding_mc_reps",
        "ln_variant",
    }
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "scenarios" not in data or not data["scenarios"]:
        raise ValueError("config needs a nonempty 'scenarios' list")

    kinds = {k.value: k for k in ScenarioKind}
    scenarios = []
    for entry in data["scenarios"]:
        if not isinstance(entry, dict) or "kind" not in entry:
            raise ValueError(f"scenario entries need a 'kind': {entry!r}")
        kind_name = entry["kind"]
        if kind_name not in kinds:
            raise ValueError(f"unknown scenario kind {kind_name!r}")
        params = {k: v for k, v in entry.items() if k != "kind"}
        bad = set(params) - {"scale", "shape", "df", "rho"}
        if bad:
            raise ValueError(f"unknown scenario parameters {sorted(bad)}")
        scenarios.append(ScenarioSpec(kind=kinds[kind_name], **params))

    kwargs = {}
    if "sizes" in data:
        kwargs["sample_sizes"] = tuple(data["sizes"])
    if "levels" in data:
        kwargs["levels"] = tuple(data["levels"])
    if "replications" in data:
        kwargs["replications"] = int(data["replications"])
    if "seed" in data:
        kwargs["seed"] = int(data["seed"])
    if "tests" in data:
        kwargs["tests"] = tuple(data["tests"])
    if "hoeffding_mc_reps" in data:
        kwargs["hoeffding_mc_reps"] = int(data["hoeffding_mc_reps"])
    if "ln_variant" in data:
        variants = {
            "doubled": PValueVariant.DOUBLED,
            "doubled-inclusive": PValueVariant.DOUBLED_INCLUSIVE,
        }
        if data["ln_variant"] not in variants:
            raise ValueError(f"unknown ln_variant {data['ln_variant']!r}")
        kwargs["ln_variant"] = variants[data["ln_variant"]]
    return PowerStudyConfig(scenarios=tuple(scenarios), **kwargs)
