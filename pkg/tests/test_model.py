import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thinrig.model import (
    BernoulliParams,
    Binomial,
    Dirac,
    Explicit,
    ModelParams,
    bernoulli_to_model,
    factorial_moment,
    p_r,
)


def test_factorial_moment_dirac():
    assert factorial_moment(Dirac(3), 2) == 6


def test_factorial_moment_binomial():
    assert factorial_moment(Binomial(10, 0.5), 2) == pytest.approx(22.5, rel=1e-15)


def test_factorial_moment_explicit():
    assert factorial_moment(Explicit({2: 0.5, 4: 0.5}), 3) == 12


def test_factorial_moment_beyond_support_is_zero():
    assert factorial_moment(Dirac(2), 3) == 0
    assert factorial_moment(Binomial(3, 0.7), 4) == 0


def test_factorial_moment_rejects_r0():
    with pytest.raises(ValueError):
        factorial_moment(Dirac(3), 0)


def test_binomial_matches_direct_sum():
    # closed form against explicit summation over the binomial pmf
    d = Binomial(12, 0.3)
    xs, ws = d.support()
    for r in range(1, 6):
        direct = sum(math.perm(int(x), r) * w for x, w in zip(xs, ws))
        assert d.factorial_moment(r) == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize(
    "params, r, expected",
    [
        (ModelParams(3, 1, Dirac(2), 1.0), 2, 1 / 3),
        (ModelParams(10, 1, Binomial(10, 0.2), 1.0), 2, 0.04),
        (ModelParams(5, 1, Dirac(5), 1.0), 3, 1.0),
    ],
)
def test_p_r_examples(params, r, expected):
    assert p_r(params, r) == pytest.approx(expected, rel=1e-14)


def test_p_r_rejects_r_above_n():
    with pytest.raises(ValueError):
        p_r(ModelParams(3, 1, Dirac(2), 1.0), 4)


def test_bernoulli_to_model_examples():
    mp = bernoulli_to_model(BernoulliParams(5, 2, 0.5, 10000))
    assert mp.m == 4000
    assert mp.dist == Binomial(10000, 5e-4)
    assert mp.q == 0.5

    mp = bernoulli_to_model(BernoulliParams(1, 1, 1, 100))
    assert (mp.m, mp.dist.p) == (100, 0.01)


def test_bernoulli_to_model_rejects_large_p():
    with pytest.raises(ValueError, match="p out of range"):
        bernoulli_to_model(BernoulliParams(10, 1, 0.1, 50))


def test_bernoulli_to_model_rejects_zero_m():
    # mu^2 q n / lambda = 0.01 * 1 * 50 / 1 < 1
    with pytest.raises(ValueError, match="m ="):
        bernoulli_to_model(BernoulliParams(1, 0.1, 1.0, 50))


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(0, 1, Dirac(0), 0.5)
    with pytest.raises(ValueError):
        ModelParams(4, 1, Dirac(5), 0.5)
    with pytest.raises(ValueError):
        ModelParams(4, 1, Dirac(2), 1.5)
    with pytest.raises(ValueError):
        ModelParams(4, -1, Dirac(2), 0.5)


def test_explicit_validation():
    with pytest.raises(ValueError):
        Explicit({1: 0.5, 2: 0.4})
    with pytest.raises(ValueError):
        Explicit({-1: 1.0})
    Explicit({1: 0.1 + 0.2, 2: 0.7})  # float roundoff within 1e-12


def test_explicit_from_file(tmp_path):
    path = tmp_path / "pmf.txt"
    path.write_text("# size probability\n2 0.25\n3 0.75  # trailing\n\n")
    d = Explicit.from_file(path)
    assert d.pmf == {2: 0.25, 3: 0.75}
    assert d.factorial_moment(2) == pytest.approx(0.25 * 2 + 0.75 * 6)


pmfs = st.dictionaries(
    st.integers(0, 30), st.floats(0.01, 1.0), min_size=1, max_size=6
).map(lambda d: {k: v / sum(d.values()) for k, v in d.items()})


@st.composite
def dists(draw):
    kind = draw(st.sampled_from(["dirac", "binomial", "explicit"]))
    if kind == "dirac":
        return Dirac(draw(st.integers(0, 30)))
    if kind == "binomial":
        return Binomial(draw(st.integers(0, 30)), draw(st.floats(0, 1)))
    pmf = draw(pmfs)
    # renormalize exactly enough for the 1e-12 check
    total = math.fsum(pmf.values())
    return Explicit({k: v / total for k, v in pmf.items()})


def _mean(dist):
    xs, ws = dist.support()
    return float(np.dot(xs, ws))


@given(dists())
def test_first_factorial_moment_is_mean(dist):
    assert factorial_moment(dist, 1) == pytest.approx(_mean(dist), rel=1e-9, abs=1e-12)


@given(dists(), st.integers(0, 10))
def test_p_r_nonincreasing(dist, m):
    n = max(dist.max_size, 3)
    params = ModelParams(n, m, dist, 0.5)
    ps = [p_r(params, r) for r in range(1, n + 1)]
    assert all(b <= a * (1 + 1e-12) + 1e-300 for a, b in zip(ps, ps[1:]))


@settings(max_examples=50)
@given(
    st.floats(0.5, 20), st.floats(0.5, 5), st.floats(0.05, 1.0), st.sampled_from([10**4, 10**5, 10**6])
)
def test_bernoulli_reproduces_lambda(lam, mu, q, n):
    bp = BernoulliParams(lam, mu, q, n)
    try:
        mp = bernoulli_to_model(bp)
    except ValueError:
        return
    # floor on m costs at most one community: relative slack lambda / (mu^2 q n)
    got = n * q * mp.m * mp.dist.p**2
    assert abs(got - lam) / lam <= lam / (mu**2 * q * n) + 1e-12
