"""Zonal polynomial tables: construction, evaluation, classical identities.

The strongest oracle here is the normalization identity: the polynomials
for weight k must sum to (tr Z)^k exactly.  Together with homogeneity,
permutation symmetry, and the hand-checkable weight-2 monomial table this
pins the coefficients completely for the sizes we exercise.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvfrac import (
    DimensionError,
    MissingTableEntryError,
    Partition,
    ResourceLimitError,
    SpdMatrix,
    build_zonal_table,
    fetch_table,
    partitions_of,
    table_from_records,
    table_to_records,
    zonal_at_identity,
    zonal_eval,
)


def _spd_from_eigs(eigs, seed=0):
    p = len(eigs)
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((p, p)))
    q = q * np.sign(np.diag(r))
    m = (q * np.asarray(eigs)) @ q.T
    return SpdMatrix(0.5 * (m + m.T))


def test_weight_one_is_trace():
    table = fetch_table(1, 3)
    z = _spd_from_eigs((0.5, 1.5, 2.0))
    assert zonal_eval((1,), z, table) == pytest.approx(z.trace, rel=1e-12)


def test_weight_two_frozen_table():
    # weight-2 monomial table: row (2) is m2 + (2/3)m11, row (1,1) is (4/3)m11
    table = fetch_table(2, 2)
    z = SpdMatrix.diagonal((1.0, 2.0))
    assert zonal_eval((2,), z, table) == pytest.approx(1 + 4 + (2 / 3) * 2,
                                                       rel=1e-12)
    assert zonal_eval((1, 1), z, table) == pytest.approx((4 / 3) * 2, rel=1e-12)


def test_weight_two_at_identity():
    table = fetch_table(2, 2)
    assert zonal_at_identity((2,), 2, table) == pytest.approx(8 / 3, rel=1e-12)
    assert zonal_at_identity((1, 1), 2, table) == pytest.approx(4 / 3, rel=1e-12)


def test_dimension_one_is_power():
    table = fetch_table(6, 1)
    z = SpdMatrix(np.array([[0.7]]))
    for k in range(7):
        part = (k,) if k else ()
        assert zonal_eval(part, z, table) == pytest.approx(0.7 ** k, rel=1e-12)


@pytest.mark.parametrize("p,k", [(2, 4), (3, 5), (4, 6)])
def test_normalization_identity(p, k):
    table = fetch_table(k, p)
    z = _spd_from_eigs(tuple(0.4 + 0.3 * i for i in range(p)), seed=p * 10 + k)
    total = sum(zonal_eval(K, z, table) for K in partitions_of(k, p))
    assert total == pytest.approx(z.trace ** k, rel=1e-11)


@given(st.floats(min_value=0.1, max_value=3.0))
@settings(max_examples=30, deadline=None)
def test_homogeneity(c):
    table = fetch_table(3, 2)
    z = SpdMatrix.diagonal((0.8, 1.7))
    zc = SpdMatrix.diagonal((0.8 * c, 1.7 * c))
    for parts in ((3,), (2, 1)):
        assert zonal_eval(parts, zc, table) == pytest.approx(
            c ** 3 * zonal_eval(parts, z, table), rel=1e-10)


def test_permutation_symmetry():
    table = fetch_table(4, 3)
    a = SpdMatrix.diagonal((0.5, 1.0, 2.5))
    b = SpdMatrix.diagonal((2.5, 0.5, 1.0))
    for K in partitions_of(4, 3):
        assert zonal_eval(K, a, table) == pytest.approx(
            zonal_eval(K, b, table), rel=1e-12)


def test_long_partition_vanishes_on_small_argument():
    # table holds length-3 rows; a 2x2 argument kills every m with 3 slots
    table = fetch_table(3, 3)
    z = SpdMatrix.diagonal((0.9, 1.4))
    assert zonal_eval((1, 1, 1), z, table) == 0.0


def test_superset_table_reuse():
    small = fetch_table(3, 2)
    large = fetch_table(5, 3)
    z = SpdMatrix.diagonal((1.2, 0.4))
    for K in partitions_of(3, 2):
        assert zonal_eval(K, z, small) == pytest.approx(
            zonal_eval(K, z, large), rel=1e-13)


def test_at_identity_matches_eval():
    table = fetch_table(4, 3)
    eye = SpdMatrix.identity(3)
    for K in partitions_of(4, 3):
        assert zonal_at_identity(K, 3, table) == pytest.approx(
            zonal_eval(K, eye, table), rel=1e-12)


def test_missing_entry_errors():
    # build directly: fetch_table may hand back a wider cached table
    table = build_zonal_table(3, 2)
    z = SpdMatrix.diagonal((1.0, 1.0))
    with pytest.raises(MissingTableEntryError):
        zonal_eval((4,), z, table)  # weight above k_max
    with pytest.raises(MissingTableEntryError):
        zonal_eval((1, 1, 1), z, table)  # more parts than table dimension
    with pytest.raises(DimensionError):
        zonal_eval((2,), SpdMatrix.identity(3), table)


def test_build_ceiling(monkeypatch):
    monkeypatch.setenv("MVFRAC_KMAX_CEILING", "9")
    with pytest.raises(ResourceLimitError):
        build_zonal_table(10, 2)
    monkeypatch.setenv("MVFRAC_KMAX_CEILING", "12")
    build_zonal_table(10, 2)


def test_records_round_trip():
    table = fetch_table(4, 2)
    records = table_to_records(table)
    back = table_from_records(records)
    z = SpdMatrix.diagonal((0.6, 1.9))
    for K in partitions_of(4, 2):
        assert zonal_eval(K, z, back) == zonal_eval(K, z, table)


def test_empty_partition_is_constant_one():
    table = fetch_table(2, 2)
    z = SpdMatrix.diagonal((0.3, 5.0))
    assert zonal_eval((), z, table) == 1.0
    assert zonal_at_identity(Partition.coerce(()), 2, table) == 1.0
