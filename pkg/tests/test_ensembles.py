import itertools
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import binom

from turbolp.bounds import BoundParams, chernoff_q
from turbolp.ensembles import (
    EXACT,
    MONTE_CARLO,
    EnsembleSpec,
    bad_count,
    exact_bad_prob,
    log_binomial_upper_tail,
    log_row_overflow_prob_exact,
    monte_carlo_bad_freq,
    row_overflow_prob_exact,
)
from turbolp.exceptions import InvalidArgumentError, ResourceError


def enumerate_bad(spec):
    N, h = spec.N, spec.heavy_min
    bad = 0
    for cells in itertools.combinations(range(spec.n), spec.t):
        counts = np.bincount(np.array(cells, dtype=int) // N, minlength=N)
        bad += int((counts >= h).sum() >= h)
    return bad


@pytest.mark.parametrize("n, t, theta, override", [
    (9, 4, 1.5, None),
    (9, 6, 0.5, None),
    (16, 5, 1.2, None),
    (16, 8, 1.9, None),
    (16, 7, 0.0, 3),
    (25, 5, 1.1, None),
    (25, 6, 0.0, 2),
])
def test_dp_matches_enumeration(n, t, theta, override):
    spec = EnsembleSpec(n, t, theta, heavy_override=override)
    assert bad_count(spec) == enumerate_bad(spec)


def test_exact_fraction_n81():
    res = exact_bad_prob(EnsembleSpec.from_alpha(81, 4))
    assert res.exact == Fraction(46656, 1663740)
    assert res.method == EXACT
    assert res.log10_probability == pytest.approx(-1.5522, abs=1e-4)


def test_bad_needs_h_squared_errors():
    spec = EnsembleSpec.from_alpha(441, 8)  # h = 3 needs at least 9 errors
    assert spec.heavy_min == 3
    assert bad_count(spec) == 0
    assert exact_bad_prob(spec).log10_probability == -math.inf
    assert bad_count(EnsembleSpec.from_alpha(441, 9)) > 0


def test_exact_is_monotone_in_t():
    probs = [exact_bad_prob(EnsembleSpec.from_alpha(121, t)).probability for t in range(0, 30, 3)]
    assert probs == sorted(probs)


def test_exact_budget():
    with pytest.raises(ResourceError):
        bad_count(EnsembleSpec.from_alpha(65 * 65, 10))


def test_spec_validation():
    with pytest.raises(InvalidArgumentError):
        EnsembleSpec(80, 4, 1.0)
    with pytest.raises(InvalidArgumentError):
        EnsembleSpec(81, 82, 1.0)


@pytest.mark.parametrize("n, t", [(81, 4), (121, 12)])
def test_monte_carlo_within_three_se(n, t):
    spec = EnsembleSpec.from_alpha(n, t)
    exact = exact_bad_prob(spec).probability
    mc = monte_carlo_bad_freq(spec, 40000, seed=7)
    se = math.sqrt(exact * (1 - exact) / mc.trials)
    assert abs(mc.probability - exact) <= 3 * se
    assert mc.method == MONTE_CARLO


def test_monte_carlo_extremes():
    assert monte_carlo_bad_freq(EnsembleSpec.from_alpha(81, 0), 100, 1).probability == 0.0
    assert monte_carlo_bad_freq(EnsembleSpec.from_alpha(81, 81), 100, 1).probability == 1.0


def test_monte_carlo_deterministic():
    spec = EnsembleSpec.from_alpha(441, 30)
    a = monte_carlo_bad_freq(spec, 5000, seed=3)
    b = monte_carlo_bad_freq(spec, 5000, seed=3)
    c = monte_carlo_bad_freq(spec, 5000, seed=4)
    assert a == b
    assert a.probability != c.probability


def test_monte_carlo_validation():
    with pytest.raises(InvalidArgumentError):
        monte_carlo_bad_freq(EnsembleSpec.from_alpha(81, 4), 0, 1)


@pytest.mark.parametrize("n, t", [(81, 4), (441, 10), (10000, 160), (1369, 73)])
def test_row_overflow_matches_scipy(n, t):
    spec = EnsembleSpec.from_alpha(n, t)
    ref = binom.sf(spec.heavy_min - 1, t, 1 / spec.N)
    assert row_overflow_prob_exact(spec) == pytest.approx(ref, rel=1e-9)


def test_row_overflow_below_chernoff_bound():
    for n in [10**4, 10**6, 10**8]:
        p = BoundParams(n)
        t = round(0.65 * n ** 0.75 / math.log(n))
        spec = EnsembleSpec.from_alpha(n, t)
        assert log_row_overflow_prob_exact(spec) <= math.log(chernoff_q(p))


@pytest.mark.parametrize("trials, prob, threshold", [(50, 0.03, 1.7), (400, 0.01, 3.2), (10, 0.5, -1.0), (5, 0.2, 5.0)])
def test_binomial_tail_matches_scipy(trials, prob, threshold):
    ref = binom.logsf(math.floor(threshold), trials, prob)
    assert log_binomial_upper_tail(trials, prob, threshold) == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_row_overflow_impossible():
    assert log_row_overflow_prob_exact(EnsembleSpec.from_alpha(81, 1)) == -math.inf


def test_result_json():
    d = json.loads(exact_bad_prob(EnsembleSpec.from_alpha(81, 4)).to_json())
    assert {"n", "t", "alpha", "method", "probability", "log10", "trials", "std_error", "seed"} == d.keys()
