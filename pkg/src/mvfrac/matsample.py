"""Deterministic samplers for random symmetric positive definite matrices.

Three families back the verification suites:

* matrix gamma draws via the triangular square-root construction: the
  diagonal of T holds square roots of gamma variates with shapes that
  decrease by one half per row, the strict lower triangle holds normals of
  variance one half, and W = T T' has the matrix gamma density with the
  requested shape and identity scale;
* rectangular exponential-weight draws X with density proportional to
  exp(-tr(A X B X')), realized as A^{-1/2} G B^{-1/2} for iid normal G of
  variance one half;
* uniform draws from the set of symmetric positive definite matrices with
  both W and I - W positive definite, by rejection from a box of diagonal
  entries in (0,1) and off-diagonal entries in (-1,1).

The rejection sampler also powers a hit-or-miss Monte Carlo integrator over
that set: rejected proposals count as zero-valued integrand samples, so the
box volume times the mean over all proposals estimates the integral.  Every
sampler is a pure function of (seed, counter), so equal seeds reproduce equal
output regardless of batch sizes.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc

from .errors import (
    DegenerateInputError,
    DimensionError,
    ParameterDomainError,
    ResourceLimitError,
)
from .gammacalc import log_matrix_gamma
from .rng import derive_key, gamma_variates, normals, uniforms
from .spdcore import RectMatrix, SpdMatrix

__all__ = [
    "McEstimate",
    "MatrixGammaSpec",
    "sample_matrix_gamma",
    "sample_rect_exponential",
    "sample_uniform_spd_unit",
    "sample_type1_beta",
    "cone_acceptance_report",
    "mc_integrate_unit_cone",
    "verify_sum_density",
]

# stream tags; diagonal gamma streams add the row index to the base
_TAG_GAMMA_DIAG = 0x100
_TAG_GAMMA_OFF = 0x1F0
_TAG_RECT = 0x200
_TAG_CONE = 0x300
_TAG_BETA_FIRST = 0x400
_TAG_BETA_SECOND = 0x500

# proposals this close to the boundary of the positivity set are discarded;
# the shaved layer has volume of the same order, far below Monte Carlo
# resolution, and keeps every accepted matrix safely inside the SPD checks
_EDGE = 1e-10

_KS_CRIT_1PCT = 1.6276  # asymptotic one-percent Kolmogorov-Smirnov quantile


def _check_count(n):
    n = int(n)
    if n < 1:
        raise ParameterDomainError(f"sample count must be at least 1, got {n}")
    return n


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo value with its standard error and provenance.

    n counts the accepted (evaluated) samples; n_proposals additionally
    counts rejected proposals when the estimate came from the rejection
    sampler, and is zero otherwise.
    """

    value: float
    stderr: float
    n: int
    seed: int
    n_proposals: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.value) and math.isfinite(self.stderr)):
            raise DegenerateInputError("Monte Carlo estimate is not finite")
        if self.stderr < 0.0:
            raise DegenerateInputError("negative standard error")
        if self.n < 1:
            raise ParameterDomainError("sample count must be at least 1")


@dataclass(frozen=True)
class MatrixGammaSpec:
    """Dimension and shape of a matrix gamma distribution, identity scale."""

    dim: int
    shape: float

    def __post_init__(self):
        if self.dim < 1:
            raise ParameterDomainError(f"dimension must be positive, got {self.dim}")
        if not self.shape > 0.5 * (self.dim - 1):
            raise ParameterDomainError(
                f"matrix gamma shape must exceed (dim-1)/2 = "
                f"{0.5 * (self.dim - 1)}, got {self.shape}")


def _matrix_gamma_raw(p, shape, n, seed, tag_base):
    """n matrix gamma draws as an (n, p, p) array, W = T T'."""
    t = np.zeros((n, p, p))
    for j in range(p):
        key = derive_key(seed, tag_base + j)
        t[:, j, j] = np.sqrt(gamma_variates(key, shape - 0.5 * j, n))
    q = p * (p - 1) // 2
    if q:
        key = derive_key(seed, tag_base + 0xF0)
        z = normals(key, 0, n * q).reshape(n, q) * math.sqrt(0.5)
        col = 0
        for i in range(1, p):
            for j in range(i):
                t[:, i, j] = z[:, col]
                col += 1
    w = t @ t.transpose(0, 2, 1)
    return 0.5 * (w + w.transpose(0, 2, 1))


def sample_matrix_gamma(spec, n, seed):
    """n independent matrix gamma draws for the given spec."""
    n = _check_count(n)
    raw = _matrix_gamma_raw(spec.dim, spec.shape, n, seed, _TAG_GAMMA_DIAG)
    return [SpdMatrix(raw[i]) for i in range(n)]


def _rect_raw(cfg, n, seed, stream=0):
    """n rectangular exponential-weight draws as an (n, p, r) array."""
    key = derive_key(seed, _TAG_RECT + stream)
    g = normals(key, 0, n * cfg.p * cfg.r).reshape(n, cfg.p, cfg.r)
    g *= math.sqrt(0.5)
    inv_sqrt_a = np.linalg.inv(cfg._sqrt_A.entries)
    vals_b, vecs_b = np.linalg.eigh(np.asarray(cfg.B.entries))
    inv_sqrt_b = (vecs_b / np.sqrt(vals_b)) @ vecs_b.T
    return np.einsum("ij,njk,kl->nil", inv_sqrt_a, g, inv_sqrt_b)


def sample_rect_exponential(cfg, n, seed, stream=0):
    """n independent draws with density exp(-tr(A X B X')) up to constant.

    Distinct stream values give independent sequences under the same seed.
    """
    n = _check_count(n)
    raw = _rect_raw(cfg, n, seed, stream)
    return [RectMatrix(raw[i]) for i in range(n)]


def _pd_minors(w):
    """(positive-definite mask, determinant) for a batch of symmetric
    matrices, requiring every leading principal minor to clear the edge
    margin."""
    p = w.shape[-1]
    if p == 1:
        d = w[:, 0, 0]
        return d > _EDGE, d.copy()
    if p == 2:
        m1 = w[:, 0, 0]
        det = m1 * w[:, 1, 1] - w[:, 0, 1] ** 2
        return (m1 > _EDGE) & (det > _EDGE), det
    m1 = w[:, 0, 0]
    m2 = m1 * w[:, 1, 1] - w[:, 0, 1] ** 2
    det = (m1 * (w[:, 1, 1] * w[:, 2, 2] - w[:, 1, 2] ** 2)
           - w[:, 0, 1] * (w[:, 0, 1] * w[:, 2, 2] - w[:, 1, 2] * w[:, 0, 2])
           + w[:, 0, 2] * (w[:, 0, 1] * w[:, 1, 2] - w[:, 1, 1] * w[:, 0, 2]))
    return (m1 > _EDGE) & (m2 > _EDGE) & (det > _EDGE), det


def _cone_raw(p, n, seed):
    """Accept exactly n uniform draws from {W : W > 0, I - W > 0}.

    Returns (W, det W, det(I - W), n_proposals) where n_proposals counts every
    proposal up to and including the one that produced the n-th acceptance, as
    the hit-or-miss estimator requires.
    """
    n = _check_count(n)
    p = int(p)
    if p not in (1, 2, 3):
        raise ParameterDomainError(
            f"rejection sampling is limited to dimensions 1..3, got {p}; "
            f"higher dimensions need the beta importance sampler")
    key = derive_key(seed, _TAG_CONE)
    q = p * (p - 1) // 2
    width = p + q
    pairs = [(i, j) for i in range(1, p) for j in range(i)]
    eye = np.eye(p)

    kept_w, kept_dw, kept_dv = [], [], []
    accepted = 0
    offered = 0
    n_proposals = 0
    batch = 1 << 15
    while accepted < n:
        slots = uniforms(key, offered * width, batch * width).reshape(batch, width)
        w = np.zeros((batch, p, p))
        for j in range(p):
            w[:, j, j] = slots[:, j]
        for t, (i, j) in enumerate(pairs):
            v = 2.0 * slots[:, p + t] - 1.0
            w[:, i, j] = v
            w[:, j, i] = v
        ok_w, det_w = _pd_minors(w)
        ok_v, det_v = _pd_minors(eye - w)
        hits = np.nonzero(ok_w & ok_v)[0]
        if accepted + hits.size >= n:
            need = n - accepted
            hits = hits[:need]
            n_proposals = offered + int(hits[-1]) + 1
            accepted = n
        else:
            accepted += hits.size
        kept_w.append(w[hits])
        kept_dw.append(det_w[hits])
        kept_dv.append(det_v[hits])
        offered += batch
        if accepted < n:
            if offered >= 10_000 and accepted / offered < 1e-4:
                raise ResourceLimitError(
                    f"cone rejection rate below 1e-4 for dimension {p} "
                    f"({accepted} acceptances in {offered} proposals)")
            if accepted:
                rate = accepted / offered
                batch = int(min(max((n - accepted) / rate * 1.15, 1 << 14),
                                1 << 21))
    return (np.concatenate(kept_w), np.concatenate(kept_dw),
            np.concatenate(kept_dv), n_proposals)


def sample_uniform_spd_unit(p, n, seed):
    """n uniform draws from {W : W > 0, I - W > 0}."""
    w, _, _, _ = _cone_raw(p, n, seed)
    return [SpdMatrix(w[i]) for i in range(n)]


def cone_acceptance_report(p, n, seed):
    """Acceptance statistics of the rejection sampler, for sizing runs."""
    _, _, _, n_proposals = _cone_raw(p, n, seed)
    return {
        "dimension": int(p),
        "accepted": int(n),
        "proposals": int(n_proposals),
        "acceptance_rate": n / n_proposals,
        "box_volume": 2.0 ** (p * (p - 1) // 2),
        "seed": int(seed),
    }


def _indicator_estimate(h, n_proposals, box_volume, n, seed):
    """Hit-or-miss estimate from the accepted-sample integrand values h;
    rejected proposals enter the mean and variance as exact zeros."""
    total = float(np.sum(h))
    total_sq = float(np.sum(np.square(h)))
    m = n_proposals
    value = box_volume * total / m
    var = (total_sq - total * total / m) / (m - 1) if m > 1 else 0.0
    stderr = box_volume * math.sqrt(max(var, 0.0) / m)
    return McEstimate(value=value, stderr=stderr, n=n,
                      seed=int(seed), n_proposals=m)


def mc_integrate_unit_cone(g, p, n, seed):
    """Monte Carlo integral of g over {W : W > 0, I - W > 0}.

    g maps an SpdMatrix to a float and is evaluated once per accepted draw.
    """
    w, _, _, n_proposals = _cone_raw(p, n, seed)
    h = np.empty(n)
    for i in range(n):
        h[i] = float(g(SpdMatrix(w[i])))
    if not np.all(np.isfinite(h)):
        raise DegenerateInputError("integrand returned a non-finite value")
    box_volume = 2.0 ** (p * (p - 1) // 2)
    return _indicator_estimate(h, n_proposals, box_volume, n, seed)


def _batch_sym_inv_sqrt(s):
    vals, vecs = np.linalg.eigh(s)
    if not np.all(vals > 0.0):
        raise DegenerateInputError("matrix sum is not positive definite")
    scaled = vecs / np.sqrt(vals)[:, None, :]
    return scaled @ vecs.transpose(0, 2, 1)


def sample_type1_beta(p, a1, a2, n, seed):
    """n draws of (W1+W2)^{-1/2} W1 (W1+W2)^{-1/2} for independent matrix
    gamma W1, W2 with shapes a1, a2; the result has the type-1 matrix beta
    density with parameters (a1, a2)."""
    n = _check_count(n)
    MatrixGammaSpec(p, a1)
    MatrixGammaSpec(p, a2)
    w1 = _matrix_gamma_raw(p, a1, n, seed, _TAG_BETA_FIRST)
    w2 = _matrix_gamma_raw(p, a2, n, seed, _TAG_BETA_SECOND)
    e = _batch_sym_inv_sqrt(w1 + w2)
    b = e @ w1 @ e
    b = 0.5 * (b + b.transpose(0, 2, 1))
    return [SpdMatrix(b[i]) for i in range(n)]


def _batch_det(m):
    p = m.shape[-1]
    if p == 1:
        return m[:, 0, 0].copy()
    if p == 2:
        return m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
    return np.linalg.det(m)


def _batch_transform(x, cfg):
    """rect_transform applied across an (n, p, r) batch."""
    sa = np.asarray(cfg._sqrt_A.entries)
    b = np.asarray(cfg.B.entries)
    y = np.einsum("ij,njk,kl->nil", sa, x, b)
    z = np.einsum("nik,njk->nij", y, np.einsum("ij,njk->nik", sa, x))
    return 0.5 * (z + z.transpose(0, 2, 1))


def verify_sum_density(cfg1, cfg2, n, seed):
    """Check that the sum of two independent transformed rectangular draws
    follows the matrix gamma law with shape (r1+r2)/2.

    Z_i is the quadratic transform of a draw from the exponential-weight
    density for cfg_i, and U = Z_1 + Z_2 should be matrix gamma with shape
    (r1+r2)/2 and identity scale whatever the weights are.  Compares the mean
    trace and mean determinant against exact moments at four standard errors,
    and for p = 1 adds a Kolmogorov-Smirnov test at the one-percent level.
    """
    n = _check_count(n)
    if cfg1.p != cfg2.p:
        raise DimensionError(
            f"configurations disagree on dimension: {cfg1.p} vs {cfg2.p}")
    p = cfg1.p
    r1 = cfg1.r
    r2 = cfg2.r
    u = (_batch_transform(_rect_raw(cfg1, n, seed, stream=1), cfg1)
         + _batch_transform(_rect_raw(cfg2, n, seed, stream=2), cfg2))

    a = 0.5 * (r1 + r2)
    cases = []

    traces = np.trace(u, axis1=1, axis2=2)
    expected_trace = p * a
    mean_tr = float(np.mean(traces))
    se_tr = float(np.std(traces, ddof=1) / math.sqrt(n))
    z_tr = (mean_tr - expected_trace) / se_tr
    cases.append({
        "name": "mean-trace",
        "observed": mean_tr,
        "expected": expected_trace,
        "z": z_tr,
        "pass": bool(abs(z_tr) <= 4.0),
    })

    dets = _batch_det(u)
    expected_det = math.exp(log_matrix_gamma(p, a + 1.0)
                            - log_matrix_gamma(p, a))
    mean_det = float(np.mean(dets))
    se_det = float(np.std(dets, ddof=1) / math.sqrt(n))
    z_det = (mean_det - expected_det) / se_det
    cases.append({
        "name": "mean-determinant",
        "observed": mean_det,
        "expected": expected_det,
        "z": z_det,
        "pass": bool(abs(z_det) <= 4.0),
    })

    if p == 1:
        xs = np.sort(u[:, 0, 0])
        cdf = gammainc(a, xs)
        grid = np.arange(1, n + 1) / n
        stat = float(np.max(np.maximum(grid - cdf, cdf - (grid - 1.0 / n))))
        crit = _KS_CRIT_1PCT / math.sqrt(n)
        cases.append({
            "name": "ks-distribution",
            "statistic": stat,
            "critical": crit,
            "pass": bool(stat < crit),
        })

    return {
        "check": "sum-density",
        "dimension": int(p),
        "orders": [int(r1), int(r2)],
        "samples": n,
        "seed": int(seed),
        "cases": cases,
        "pass": all(c["pass"] for c in cases),
    }
