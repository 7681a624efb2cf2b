"""Statistics kernel: ANOVA, Scheffé, z-scores, chi-square, t, Pearson r,
bootstrap balancing and median split.

Statistics are computed with numpy and the distribution tails come from
scipy.stats. Every routine checks for degenerate input first and raises
DegenerateStatisticsError instead of returning inf or nan.

Denominators: ``zscores`` uses the population SD (n); t and r use sample
variances (n - 1).
"""

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence, TypeVar

import numpy as np
from scipy import stats as sps

from .errors import DegenerateStatisticsError

T = TypeVar("T")

# bootstrap reproducibility depends on this exact generator
PRNG_ALGORITHM = "PCG64"


def is_constant(values: Sequence[float] | np.ndarray) -> bool:
    """True when every value is identical; decided on the data, not on a computed variance."""
    x = np.asarray(values, dtype=float)
    return x.size == 0 or float(np.ptp(x)) == 0.0


@dataclass(frozen=True)
class TestResult:
    __test__ = False  # not a pytest class

    statistic: float
    df: float | tuple[float, float]
    p_value: float


@dataclass(frozen=True)
class AnovaTable:
    ss_between: float
    ss_within: float
    df_between: int
    df_within: int
    result: TestResult

    @property
    def ms_within(self) -> float:
        return self.ss_within / self.df_within


@dataclass(frozen=True)
class ScheffeResult:
    """Pairwise Scheffé comparisons; ``pairs[i][j]`` is None on the diagonal."""

    pairs: tuple[tuple[TestResult | None, ...], ...]
    means: tuple[float, ...]
    critical: float
    alpha: float

    def significant(self, i: int, j: int) -> bool:
        result = self.pairs[i][j]
        return result is not None and result.statistic > self.critical


@dataclass(frozen=True)
class ContingencyTable:
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.counts) != len(self.rows) or any(len(r) != len(self.cols) for r in self.counts):
            raise ValueError("counts shape does not match row/col labels")
        if any(c < 0 for r in self.counts for c in r):
            raise ValueError("contingency counts must be non-negative")

    @classmethod
    def zeros(cls, rows: Sequence[str], cols: Sequence[str]) -> "ContingencyTable":
        return cls(tuple(rows), tuple(cols), tuple((0,) * len(cols) for _ in rows))

    @property
    def total(self) -> int:
        return sum(sum(r) for r in self.counts)

    def cell(self, row: str, col: str) -> int:
        return self.counts[self.rows.index(row)][self.cols.index(col)]

    def __add__(self, other: "ContingencyTable") -> "ContingencyTable":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("cannot add tables with different labels")
        counts = tuple(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.counts, other.counts)
        )
        return ContingencyTable(self.rows, self.cols, counts)

    def pruned(self) -> "ContingencyTable":
        """Drop all-zero rows and columns."""
        keep_r = [i for i, r in enumerate(self.counts) if sum(r)]
        keep_c = [j for j in range(len(self.cols)) if any(self.counts[i][j] for i in range(len(self.rows)))]
        return ContingencyTable(
            tuple(self.rows[i] for i in keep_r),
            tuple(self.cols[j] for j in keep_c),
            tuple(tuple(self.counts[i][j] for j in keep_c) for i in keep_r),
        )


@dataclass(frozen=True)
class MedianSplit:
    low: frozenset
    high: frozenset
    median: float

    @property
    def degenerate(self) -> bool:
        return not self.low or not self.high


def _as_groups(groups: Sequence[Sequence[float]]) -> list[np.ndarray]:
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if len(arrays) < 2:
        raise DegenerateStatisticsError("ANOVA needs at least 2 groups")
    for i, a in enumerate(arrays):
        if a.size < 2:
            raise DegenerateStatisticsError(f"group {i} has fewer than 2 values")
    return arrays


def anova_table(groups: Sequence[Sequence[float]]) -> AnovaTable:
    arrays = _as_groups(groups)
    values = np.concatenate(arrays)
    grand = values.mean()
    ss_between = float(sum(a.size * (a.mean() - grand) ** 2 for a in arrays))
    ss_within = float(sum(((a - a.mean()) ** 2).sum() for a in arrays))
    if is_constant(values):
        raise DegenerateStatisticsError("constant data: ANOVA undefined")
    if all(is_constant(a) for a in arrays):
        raise DegenerateStatisticsError("zero within-group variance: F is infinite")
    df_b, df_w = len(arrays) - 1, values.size - len(arrays)
    f = (ss_between / df_b) / (ss_within / df_w)
    return AnovaTable(
        ss_between=ss_between,
        ss_within=ss_within,
        df_between=df_b,
        df_within=df_w,
        result=TestResult(float(f), (df_b, df_w), float(sps.f.sf(f, df_b, df_w))),
    )


def oneway_anova(groups: Sequence[Sequence[float]]) -> TestResult:
    return anova_table(groups).result


def scheffe_pairwise(groups: Sequence[Sequence[float]], alpha: float = 0.05) -> ScheffeResult:
    """Scheffé statistic ``(m_i - m_j)^2 / (MSW (1/n_i + 1/n_j))`` for every pair.

    A pair is significant when the statistic exceeds ``(k - 1) F_crit(alpha, k - 1, N - k)``;
    its p-value is the F tail of ``statistic / (k - 1)``.
    """
    table = anova_table(groups)
    arrays = _as_groups(groups)
    k = len(arrays)
    df_b, df_w = table.df_between, table.df_within
    msw = table.ms_within
    means = tuple(float(a.mean()) for a in arrays)
    critical = (k - 1) * float(sps.f.isf(alpha, df_b, df_w))

    pairs: list[list[TestResult | None]] = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            stat = (means[i] - means[j]) ** 2 / (msw * (1 / arrays[i].size + 1 / arrays[j].size))
            result = TestResult(float(stat), (df_b, df_w), float(sps.f.sf(stat / (k - 1), df_b, df_w)))
            pairs[i][j] = pairs[j][i] = result
    return ScheffeResult(tuple(tuple(row) for row in pairs), means, critical, alpha)


def zscores(values: Sequence[float]) -> list[float]:
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        raise DegenerateStatisticsError("z-scores need at least 2 values")
    if is_constant(x):
        raise DegenerateStatisticsError("z-scores undefined for zero variance")
    return ((x - x.mean()) / x.std()).tolist()


def chi_square(table: ContingencyTable) -> TestResult:
    """Pearson chi-square without continuity correction."""
    pruned = table.pruned()
    if pruned.total == 0:
        raise DegenerateStatisticsError("empty contingency table")
    if len(pruned.rows) < 2 or len(pruned.cols) < 2:
        raise DegenerateStatisticsError(
            f"contingency table is {len(pruned.rows)}x{len(pruned.cols)} after dropping empty rows/cols"
        )
    chi2, p, dof, _ = sps.chi2_contingency(np.array(pruned.counts, dtype=float), correction=False)
    return TestResult(float(chi2), int(dof), float(p))


def t_test_independent(a: Sequence[float], b: Sequence[float], pooled: bool = True) -> TestResult:
    """Student t (pooled variance) or Welch t; the sign follows ``mean(a) - mean(b)``."""
    xa, xb = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if xa.size < 2 or xb.size < 2:
        raise DegenerateStatisticsError("t-test needs at least 2 values per group")
    if is_constant(xa) and is_constant(xb):
        raise DegenerateStatisticsError("both groups are constant")
    res = sps.ttest_ind(xa, xb, equal_var=pooled)
    if pooled:
        df = float(xa.size + xb.size - 2)
    else:
        qa, qb = xa.var(ddof=1) / xa.size, xb.var(ddof=1) / xb.size
        df = float((qa + qb) ** 2 / (qa**2 / (xa.size - 1) + qb**2 / (xb.size - 1)))
    return TestResult(float(res.statistic), df, float(res.pvalue))


def pearson_r(x: Sequence[float], y: Sequence[float]) -> TestResult:
    ax, ay = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if ax.size != ay.size:
        raise DegenerateStatisticsError(f"length mismatch: {ax.size} vs {ay.size}")
    if ax.size < 3:
        raise DegenerateStatisticsError("correlation needs at least 3 pairs")
    if is_constant(ax) or is_constant(ay):
        raise DegenerateStatisticsError("correlation undefined for zero variance")
    r, p = sps.pearsonr(ax, ay)
    return TestResult(float(r), ax.size - 2, float(p))


def make_rng(seed: int | np.random.SeedSequence | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(getattr(np.random, PRNG_ALGORITHM)(seed))


def spawn_rngs(seed: int, n: int) -> list[np.random.Generator]:
    """``n`` independent streams; stream i is the same whatever ``n`` is."""
    return [make_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def bootstrap_balance(larger: Sequence[T], target_n: int, seed: int | np.random.Generator) -> list[T]:
    """``target_n`` draws with replacement from ``larger``."""
    if target_n < 1:
        raise ValueError("target_n must be at least 1")
    if not larger:
        raise DegenerateStatisticsError("cannot resample an empty group")
    idx = make_rng(seed).integers(0, len(larger), size=target_n)
    return [larger[i] for i in idx]


def median_split(scores: Mapping[Hashable, float]) -> MedianSplit:
    """Ids scoring at or below the median go low, the rest high."""
    if len(scores) < 2:
        raise DegenerateStatisticsError("median split needs at least 2 ids")
    median = float(np.median(np.fromiter(scores.values(), dtype=float)))
    low = frozenset(k for k, v in scores.items() if v <= median)
    high = frozenset(k for k, v in scores.items() if v > median)
    return MedianSplit(low, high, median)


def describe(values: Sequence[float]) -> tuple[float, float]:
    """Mean and sample SD; SD is 0 for fewer than 2 values."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        return 0.0, 0.0
    return float(x.mean()), float(x.std(ddof=1)) if x.size > 1 else 0.0
