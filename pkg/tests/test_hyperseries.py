"""Hypergeometric series of matrix argument.

The scalar oracle below sums the classical one-variable series directly
with ordinary rising factorials; every dimension-1 result must reduce to
it.  Two-dimensional results are checked against the determinant binomial
identity, which is an independent closed form.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvfrac import (
    DimensionError,
    HyperParams,
    NonConvergenceError,
    ParameterDomainError,
    RectConfig,
    SpdMatrix,
    Truncation,
    gauss_2f1_rect,
    hyper_pfq,
    hyper_pfq_at_identity,
    pathway_det_limit,
)


def _scalar_pfq(num, den, z, k_max):
    # direct classical series: sum_k prod(a)_k / prod(b)_k * z^k / k!
    total = 0.0
    term = 1.0
    for k in range(k_max + 1):
        total += term
        ratio = 1.0
        for a in num:
            ratio *= a + k
        for b in den:
            ratio /= b + k
        term *= ratio * z / (k + 1)
    return total


@given(st.floats(min_value=0.2, max_value=3.0),
       st.floats(min_value=0.2, max_value=3.0),
       st.floats(min_value=0.8, max_value=4.0),
       st.floats(min_value=0.01, max_value=0.5))
@settings(max_examples=80, deadline=None)
def test_dimension_one_reduces_to_scalar_series(a, b, c, z):
    trunc = Truncation(k_max=25)
    got = hyper_pfq(HyperParams((a, b), (c,)), SpdMatrix(np.array([[z]])),
                    trunc)
    want = _scalar_pfq((a, b), (c,), z, 25)
    assert got.value == pytest.approx(want, rel=1e-10, abs=1e-12)


def test_gauss_frozen_value(monkeypatch):
    # 2F1(1,1;2;z) = -log(1-z)/z, so the value at z = 1/2 is 2 log 2;
    # dimension 1 needs about forty weights for ten digits here
    monkeypatch.setenv("MVFRAC_KMAX_CEILING", "45")
    res = hyper_pfq(HyperParams((1.0, 1.0), (2.0,)),
                    SpdMatrix(np.array([[0.5]])), Truncation(k_max=40))
    assert res.value == pytest.approx(2.0 * math.log(2.0), rel=1e-10)


def test_exponential_series_any_radius():
    # no numerator and no denominator gives the exponential of the trace,
    # with no radius restriction
    res = hyper_pfq(HyperParams((), ()), SpdMatrix.diagonal((0.4, 0.3)),
                    Truncation(k_max=25))
    assert res.value == pytest.approx(math.exp(0.7), rel=1e-10)


@given(st.floats(min_value=0.5, max_value=2.5),
       st.floats(min_value=0.05, max_value=0.25),
       st.floats(min_value=0.05, max_value=0.25))
@settings(max_examples=40, deadline=None)
def test_binomial_identity_p2(b, e1, e2):
    # sum_K (b)_K C_K(Z) / k! against |I - Z|^{-b}
    z = SpdMatrix.diagonal((e1, e2))
    res = hyper_pfq(HyperParams((b,), ()), z, Truncation(k_max=25))
    direct = (1.0 - e1) ** (-b) * (1.0 - e2) ** (-b)
    assert res.value == pytest.approx(direct, abs=1e-8)


def test_negative_integer_parameter_terminates():
    # 1F0(-2; z) is the polynomial (1-z)^2; termination leaves a zero tail
    res = hyper_pfq(HyperParams((-2.0,), ()), SpdMatrix(np.array([[0.6]])),
                    Truncation(k_max=25))
    assert res.value == pytest.approx(0.16, rel=1e-12)
    assert res.tail_estimate == 0.0


def test_balanced_series_needs_radius_below_one():
    with pytest.raises(ParameterDomainError):
        hyper_pfq(HyperParams((1.0, 1.0), (2.0,)),
                  SpdMatrix(np.array([[1.0]])), Truncation(k_max=10))


def test_divergent_series_detected():
    # 2F0 diverges for any nonzero argument; the growth guard must fire
    with pytest.raises(NonConvergenceError):
        hyper_pfq(HyperParams((1.5, 2.0), ()), SpdMatrix(np.array([[0.9]])),
                  Truncation(k_max=25))


def test_denominator_pochhammer_zero_rejected():
    with pytest.raises(ParameterDomainError):
        hyper_pfq(HyperParams((1.0,), (-2.0,)), SpdMatrix(np.array([[0.3]])),
                  Truncation(k_max=10))


def test_truncation_validation():
    with pytest.raises(ParameterDomainError):
        Truncation(k_max=-1)
    with pytest.raises(ParameterDomainError):
        Truncation(k_max=5, tail_tol=-1e-3)


# ---------------------------------------------------------------------------
# value at the identity argument

def test_at_identity_gauss_oracle():
    # 2F1(a,b;c;1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b))
    a, b, c = 0.3, 0.2, 2.0
    res = hyper_pfq_at_identity(HyperParams((a, b), (c,)), 1,
                                Truncation(k_max=25))
    want = math.exp(math.lgamma(c) + math.lgamma(c - a - b)
                    - math.lgamma(c - a) - math.lgamma(c - b))
    # truncation at weight 25 leaves a few parts in 1e4; the reported tail
    # estimate must cover the distance to the exact value
    assert res.value == pytest.approx(want, rel=1e-3)
    assert abs(res.value - want) < 3.0 * res.tail_estimate
    assert res.ratio < 0.95


def test_at_identity_rejects_slow_convergence():
    # c - a - b barely positive: the tail ratio stays near one
    with pytest.raises(NonConvergenceError):
        hyper_pfq_at_identity(HyperParams((1.0, 1.0), (2.05,)), 1,
                              Truncation(k_max=25))


# ---------------------------------------------------------------------------
# weighted Gauss function for rectangular configurations

def test_gauss_rect_scalar_consistency():
    # dimension 1 with r = 1 shifts a and c by one half
    cfg = RectConfig.with_identity_weights(1, 1)
    a, b, c, y = 0.8, 0.5, 2.0, 0.4
    got = gauss_2f1_rect(a, b, c, SpdMatrix(np.array([[y]])), cfg,
                         Truncation(k_max=25))
    want = _scalar_pfq((a + 0.5, b), (c + 0.5,), y, 25)
    assert got == pytest.approx(want, rel=1e-10)


def test_gauss_rect_preconditions():
    cfg = RectConfig.with_identity_weights(2, 2)
    y = SpdMatrix.diagonal((0.3, 0.1))
    with pytest.raises(ParameterDomainError):
        gauss_2f1_rect(1.0, 0.5, 1.2, y, cfg)  # c - a too small
    with pytest.raises(ParameterDomainError):
        gauss_2f1_rect(1.0, 0.5, 3.0, SpdMatrix.diagonal((1.2, 0.1)), cfg)
    with pytest.raises(DimensionError):
        gauss_2f1_rect(1.0, 0.5, 3.0, SpdMatrix(np.array([[0.3]])), cfg)


# ---------------------------------------------------------------------------
# pathway determinant limit

def test_pathway_det_limit_frozen():
    # (1 + (q-1) tr)^(-1/(q-1)) at q = 1.01, single eigenvalue 1: 1.01^{-100}
    got = pathway_det_limit(1.01, np.array([1.0]))
    assert got == pytest.approx(1.01 ** (-100), rel=1e-12)


def test_pathway_det_limit_accepts_spd():
    z = SpdMatrix.diagonal((0.5, 0.25))
    got = pathway_det_limit(1.001, z)
    want = (1 + 0.001 * 0.5) ** (-1000) * (1 + 0.001 * 0.25) ** (-1000)
    assert got == pytest.approx(want, rel=1e-12)


def test_pathway_det_limit_zero_spectrum_exact():
    assert pathway_det_limit(1.0001, np.zeros(3)) == 1.0


def test_pathway_det_limit_approaches_exponential():
    eigs = np.array([0.7, 0.2])
    target = math.exp(-0.9)
    errs = [abs(pathway_det_limit(q, eigs) - target) / target
            for q in (1.01, 1.001, 1.0001)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3


def test_pathway_det_limit_domain():
    with pytest.raises(ParameterDomainError):
        pathway_det_limit(1.0, np.array([0.5]))
    with pytest.raises(ParameterDomainError):
        pathway_det_limit(1.01, np.array([-0.5]))
