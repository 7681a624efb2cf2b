import math

import numpy as np
import pytest
from scipy import integrate

from moodco.errors import DegenerateStatisticsError
from moodco.stats import (
    ContingencyTable,
    anova_table,
    bootstrap_balance,
    chi_square,
    describe,
    make_rng,
    median_split,
    oneway_anova,
    pearson_r,
    is_constant,
    scheffe_pairwise,
    spawn_rngs,
    t_test_independent,
    zscores,
)


def table(counts) -> ContingencyTable:
    labels = ("positive", "negative")
    return ContingencyTable(labels, labels, tuple(tuple(r) for r in counts))


def t_density(t: float, df: int) -> float:
    c = math.gamma((df + 1) / 2) / (math.sqrt(df * math.pi) * math.gamma(df / 2))
    return c * (1 + t * t / df) ** (-(df + 1) / 2)


def f_density(x: float, d1: int, d2: int) -> float:
    beta = math.gamma(d1 / 2) * math.gamma(d2 / 2) / math.gamma((d1 + d2) / 2)
    return math.sqrt((d1 * x) ** d1 * d2**d2 / (d1 * x + d2) ** (d1 + d2)) / (x * beta)


# -- ANOVA / Scheffé ---------------------------------------------------------


def test_anova_identical_groups():
    result = oneway_anova([[1, 2, 3]] * 3)
    assert result.statistic == 0.0
    assert result.p_value == pytest.approx(1.0)


def test_anova_zero_within_variance():
    with pytest.raises(DegenerateStatisticsError, match="infinite"):
        oneway_anova([[0, 0], [1, 1], [2, 2]])
    with pytest.raises(DegenerateStatisticsError, match="constant"):
        oneway_anova([[1, 1], [1, 1]])


def test_anova_hand_computed():
    t = anova_table([[1, 2], [3, 4], [5, 6]])
    assert t.ss_between == pytest.approx(16.0)
    assert t.ss_within == pytest.approx(1.5)
    assert t.result.df == (2, 3)
    # MSB = 8, MSW = 0.5
    assert t.result.statistic == pytest.approx(16.0)
    tail, _ = integrate.quad(f_density, 16.0, np.inf, args=(2, 3))
    assert t.result.p_value == pytest.approx(tail, rel=1e-6)


def test_anova_needs_two_values_per_group():
    with pytest.raises(DegenerateStatisticsError):
        oneway_anova([[1], [2, 3]])
    with pytest.raises(DegenerateStatisticsError):
        oneway_anova([[1, 2, 3]])


def test_scheffe_flags_only_the_outlying_group():
    spread = np.tile([-1.0, 1.0], 10)
    groups = [spread, spread, spread + 10]
    result = scheffe_pairwise(groups, alpha=0.05)
    assert result.means == pytest.approx((0.0, 0.0, 10.0))
    assert not result.significant(0, 1)
    assert result.significant(0, 2)
    assert result.significant(1, 2)
    assert result.pairs[0][2].p_value < 0.05


def test_scheffe_identical_groups():
    result = scheffe_pairwise([[1, 2, 3, 4]] * 3)
    assert not any(result.significant(i, j) for i in range(3) for j in range(3) if i != j)


def test_scheffe_statistic_formula():
    groups = [[1, 2], [3, 4], [5, 6]]
    result = scheffe_pairwise(groups)
    # (1.5 - 5.5)^2 / (0.5 * (1/2 + 1/2))
    assert result.pairs[0][2].statistic == pytest.approx(32.0)


def test_zscores():
    assert zscores([1, 2, 3]) == pytest.approx([-1.2247449, 0.0, 1.2247449])
    with pytest.raises(DegenerateStatisticsError):
        zscores([4, 4, 4])


# -- chi-square --------------------------------------------------------------


def test_chi_square_independence():
    result = chi_square(table([[10, 10], [10, 10]]))
    assert result.statistic == pytest.approx(0.0)
    assert result.p_value == pytest.approx(1.0)


@pytest.mark.parametrize("counts, expected", [([[20, 0], [0, 20]], 40.0), ([[30, 10], [10, 30]], 20.0)])
def test_chi_square_hand_computed(counts, expected):
    result = chi_square(table(counts))
    assert result.statistic == pytest.approx(expected)
    assert result.df == 1
    # one degree of freedom: P(X > x) = erfc(sqrt(x / 2))
    assert result.p_value == pytest.approx(math.erfc(math.sqrt(expected / 2)), rel=1e-6)


def test_chi_square_has_no_continuity_correction():
    result = chi_square(table([[5, 1], [1, 5]]))
    # E = 3 everywhere: 4 * 2^2 / 3
    assert result.statistic == pytest.approx(16 / 3)


def test_chi_square_degenerate_tables():
    with pytest.raises(DegenerateStatisticsError, match="empty"):
        chi_square(table([[0, 0], [0, 0]]))
    with pytest.raises(DegenerateStatisticsError, match="1x2"):
        chi_square(table([[5, 3], [0, 0]]))


def test_contingency_table_validation():
    with pytest.raises(ValueError):
        ContingencyTable(("a", "b"), ("x", "y"), ((1, 2),))
    with pytest.raises(ValueError):
        table([[1, -1], [0, 0]])
    summed = table([[1, 2], [3, 4]]) + table([[1, 1], [1, 1]])
    assert summed.counts == ((2, 3), (4, 5))
    assert summed.cell("negative", "positive") == 4
    assert summed.total == 14


# -- t / r -------------------------------------------------------------------


def test_t_identical_groups():
    assert t_test_independent([1, 2, 3], [1, 2, 3]).statistic == pytest.approx(0.0)


def test_t_hand_computed():
    result = t_test_independent([1, 2, 3], [4, 5, 6])
    assert result.statistic == pytest.approx(-3.674, abs=1e-3)
    assert result.df == 4
    tail, _ = integrate.quad(t_density, abs(result.statistic), np.inf, args=(4,))
    assert result.p_value == pytest.approx(2 * tail, rel=1e-6)


def test_t_sign_follows_group_order():
    assert t_test_independent([4, 5, 6], [1, 2, 3]).statistic > 0


def test_welch_degrees_of_freedom():
    a, b = [1.0, 2.0, 3.0], [4.0, 6.0, 8.0, 10.0]
    qa, qb = np.var(a, ddof=1) / 3, np.var(b, ddof=1) / 4
    expected = (qa + qb) ** 2 / (qa**2 / 2 + qb**2 / 3)
    assert t_test_independent(a, b, pooled=False).df == pytest.approx(expected)


def test_t_degenerate():
    with pytest.raises(DegenerateStatisticsError, match="constant"):
        t_test_independent([2, 2], [3, 3])
    with pytest.raises(DegenerateStatisticsError):
        t_test_independent([1], [2, 3])


@pytest.mark.parametrize(
    "x, y, r",
    [
        ([1, 2, 3, 4], [1, 2, 3, 4], 1.0),
        ([1, 2, 3, 4], [5, 3, 1, -1], -1.0),
        ([1, 2, 3, 4], [1, 3, 2, 4], 0.8),
    ],
)
def test_pearson(x, y, r):
    result = pearson_r(x, y)
    assert result.statistic == pytest.approx(r)
    assert result.df == 2


def test_pearson_degenerate():
    with pytest.raises(DegenerateStatisticsError, match="zero variance"):
        pearson_r([1, 2, 3], [5, 5, 5])
    with pytest.raises(DegenerateStatisticsError, match="mismatch"):
        pearson_r([1, 2, 3], [1, 2])
    with pytest.raises(DegenerateStatisticsError, match="at least 3"):
        pearson_r([1, 2], [2, 1])


# -- resampling and splits ---------------------------------------------------


def test_bootstrap_balance_is_deterministic():
    items = list(range(100))
    first = bootstrap_balance(items, 10, seed=42)
    assert first == bootstrap_balance(items, 10, seed=42)
    assert len(first) == 10
    assert set(first) <= set(items)
    assert first != bootstrap_balance(items, 10, seed=43)


def test_bootstrap_balance_accepts_generator():
    a = bootstrap_balance("abcdef", 4, make_rng(7))
    b = bootstrap_balance("abcdef", 4, np.random.Generator(np.random.PCG64(7)))
    assert a == b


def test_median_split():
    split = median_split({"a": 1.0, "b": 2.0, "c": 3.0, "d": 4.0})
    assert split.median == 2.5
    assert split.low == {"a", "b"}
    assert split.high == {"c", "d"}
    assert not split.degenerate


def test_median_split_ties_go_low():
    split = median_split({"a": 1.0, "b": 2.0, "c": 2.0, "d": 5.0, "e": 6.0})
    assert split.low == {"a", "b", "c"}
    assert median_split({"a": 3.0, "b": 3.0}).degenerate


def test_describe():
    assert describe([]) == (0.0, 0.0)
    assert describe([5]) == (5.0, 0.0)
    assert describe([1, 2, 3]) == (2.0, 1.0)


# -- brute-force oracle ------------------------------------------------------


def brute_anova(groups):
    values = [v for g in groups for v in g]
    grand = sum(values) / len(values)
    means = [sum(g) / len(g) for g in groups]
    ssb = sum(len(g) * (m - grand) ** 2 for g, m in zip(groups, means))
    ssw = sum((v - m) ** 2 for g, m in zip(groups, means) for v in g)
    d1, d2 = len(groups) - 1, len(values) - len(groups)
    return (ssb / d1) / (ssw / d2), d1, d2


def brute_pooled_t(a, b):
    ma, mb = sum(a) / len(a), sum(b) / len(b)
    ss = sum((v - ma) ** 2 for v in a) + sum((v - mb) ** 2 for v in b)
    df = len(a) + len(b) - 2
    return (ma - mb) / math.sqrt(ss / df * (1 / len(a) + 1 / len(b))), df


def brute_r(x, y):
    mx, my = sum(x) / len(x), sum(y) / len(y)
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def brute_chi2(counts):
    n = sum(map(sum, counts))
    rows = [sum(r) for r in counts]
    cols = [sum(c) for c in zip(*counts)]
    return sum((counts[i][j] - rows[i] * cols[j] / n) ** 2 / (rows[i] * cols[j] / n) for i in range(2) for j in range(2))


@pytest.mark.parametrize("seed", range(20))
def test_kernel_matches_oracle(seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    groups = [rng.normal(loc, 1.0, size=int(rng.integers(5, 11))).tolist() for loc in (0.0, 0.4, 0.8)]

    f, d1, d2 = brute_anova(groups)
    result = oneway_anova(groups)
    assert result.statistic == pytest.approx(f, rel=1e-9)
    tail, _ = integrate.quad(f_density, f, np.inf, args=(d1, d2))
    assert result.p_value == pytest.approx(tail, abs=1e-6)

    a, b = groups[0], groups[2]
    t, df = brute_pooled_t(a, b)
    result = t_test_independent(a, b)
    assert result.statistic == pytest.approx(t, rel=1e-9)
    tail, _ = integrate.quad(t_density, abs(t), np.inf, args=(df,))
    assert result.p_value == pytest.approx(2 * tail, abs=1e-6)

    x = rng.normal(size=12).tolist()
    y = [v + rng.normal() for v in x]
    r = brute_r(x, y)
    result = pearson_r(x, y)
    assert result.statistic == pytest.approx(r, rel=1e-9)
    t_r = r * math.sqrt(10 / (1 - r * r))
    tail, _ = integrate.quad(t_density, abs(t_r), np.inf, args=(10,))
    assert result.p_value == pytest.approx(2 * tail, abs=1e-6)

    counts = rng.integers(1, 30, size=(2, 2)).tolist()
    chi2 = brute_chi2(counts)
    result = chi_square(table(counts))
    assert result.statistic == pytest.approx(chi2, rel=1e-9)
    assert result.p_value == pytest.approx(math.erfc(math.sqrt(chi2 / 2)), abs=1e-6)

    scheffe = scheffe_pairwise(groups)
    msw = sum((v - m) ** 2 for g, m in zip(groups, scheffe.means) for v in g) / d2
    stat = (scheffe.means[0] - scheffe.means[2]) ** 2 / (msw * (1 / len(groups[0]) + 1 / len(groups[2])))
    assert scheffe.pairs[0][2].statistic == pytest.approx(stat, rel=1e-9)


@pytest.mark.parametrize("k", [2, 3, 7])
def test_chi_square_scales_with_counts(k):
    base = chi_square(table([[12, 5], [3, 9]])).statistic
    assert chi_square(table([[12 * k, 5 * k], [3 * k, 9 * k]])).statistic == pytest.approx(k * base, rel=1e-12)


# -- constant float data -----------------------------------------------------


def test_is_constant():
    assert is_constant([0.1, 0.1, 0.1])
    assert is_constant([100 / 3] * 4)
    assert is_constant([])
    assert not is_constant([0.1, 0.1, 0.1 + 1e-12])


def test_constant_floats_are_degenerate_everywhere():
    # 0.1 has no exact binary mean, so computed variances come out nonzero
    with pytest.raises(DegenerateStatisticsError, match="constant"):
        oneway_anova([[0.1] * 3] * 3)
    with pytest.raises(DegenerateStatisticsError, match="infinite"):
        oneway_anova([[0.1] * 3, [0.2] * 3, [0.3] * 3])
    with pytest.raises(DegenerateStatisticsError):
        zscores([0.1, 0.1, 0.1])
    with pytest.raises(DegenerateStatisticsError, match="constant"):
        t_test_independent([0.1] * 3, [0.1] * 3)
    with pytest.raises(DegenerateStatisticsError, match="zero variance"):
        pearson_r([1, 2, 3], [0.1] * 3)


def test_one_constant_group_still_gives_finite_t():
    result = t_test_independent([0.1] * 3, [0.2, 0.3, 0.4], pooled=False)
    assert math.isfinite(result.statistic)
    assert math.isfinite(result.p_value)


# -- invariances -------------------------------------------------------------


def test_scheffe_two_groups_equals_t_squared():
    rng = make_rng(11)
    a, b = rng.normal(0, 1, 9), rng.normal(0.5, 2, 13)
    t = t_test_independent(a, b).statistic
    assert scheffe_pairwise([a, b]).pairs[0][1].statistic == pytest.approx(t**2, rel=1e-12)
    assert oneway_anova([a, b]).statistic == pytest.approx(t**2, rel=1e-12)


@pytest.mark.parametrize("shift", [-7.5, 0.25, 1e3])
def test_statistics_ignore_a_common_shift(shift):
    rng = make_rng(12)
    groups = [rng.normal(m, 1, 8) for m in (0.0, 0.4, 1.1)]
    x, y = rng.normal(0, 1, 15), rng.normal(0, 1, 15)
    shifted = [g + shift for g in groups]

    assert oneway_anova(shifted).statistic == pytest.approx(oneway_anova(groups).statistic, rel=1e-9)
    assert t_test_independent(*shifted[:2]).statistic == pytest.approx(
        t_test_independent(*groups[:2]).statistic, rel=1e-9
    )
    assert pearson_r(x + shift, y + shift).statistic == pytest.approx(pearson_r(x, y).statistic, rel=1e-9)


@pytest.mark.parametrize("scale, offset", [(2.0, 0.0), (0.01, 5.0), (300.0, -40.0)])
def test_pearson_ignores_positive_affine_maps(scale, offset):
    rng = make_rng(13)
    x = rng.normal(0, 1, 20)
    y = x + rng.normal(0, 1, 20)
    assert pearson_r(scale * x + offset, y).statistic == pytest.approx(pearson_r(x, y).statistic, rel=1e-9)
    assert pearson_r(x, -scale * y + offset).statistic == pytest.approx(-pearson_r(x, y).statistic, rel=1e-9)


def test_spawned_streams_do_not_depend_on_count():
    first = [g.integers(0, 2**32, 4).tolist() for g in spawn_rngs(5, 3)]
    more = [g.integers(0, 2**32, 4).tolist() for g in spawn_rngs(5, 6)]
    assert first == more[:3]
