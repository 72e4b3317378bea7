"""Fractional integral operators for matrix argument.

The operator of order alpha with rectangular weight configuration (p, r, A, B)
acts on a scalar function f of a symmetric positive definite matrix as

    (I f)(Z) = pi^(rp/2) / (|A|^(r/2) |B|^(p/2) Gamma_p(alpha) Gamma_p(r/2))
               * integral over O < X < Z of
                 |Z - X|^(alpha-(p+1)/2) |X|^(r/2-(p+1)/2) f(X) dX,

the rectangular-variable average with weight exp(-tr(A X B X')) already
reduced to the cone through the r-frame surface constant.  Closed forms are
available when f is a determinant power or a zonal polynomial; everything
else goes through the Monte Carlo route, which substitutes X = Z^(1/2) W
Z^(1/2) and integrates uniformly over {W : O < W < I}.

Values are carried in log-magnitude plus sign form since gamma ratios
overflow quickly as the dimension grows.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, DimensionError, ParameterDomainError
from .gammacalc import (
    Partition,
    log_matrix_gamma,
    signed_log_gen_pochhammer,
)
from .hyperseries import HyperParams, hyper_pfq_at_identity
from .matsample import McEstimate, _cone_raw, _indicator_estimate
from .spdcore import RectConfig, SpdMatrix, spd_sqrt, stiefel_constant
from .zonal import fetch_table, zonal_eval

__all__ = [
    "FracOrder",
    "FracValue",
    "SaigoParams",
    "DetPowerOperand",
    "frac_integral_power_closed",
    "frac_integral_zonal_closed",
    "saigo_power_closed",
    "frac_integral_numeric",
]


@dataclass(frozen=True)
class FracOrder:
    """Order alpha and weight configuration of a fractional integral."""

    alpha: float
    config: RectConfig

    def __post_init__(self):
        if not self.alpha > 0.5 * (self.config.p - 1):
            raise ParameterDomainError(
                f"order must exceed (p-1)/2 = {0.5 * (self.config.p - 1)}, "
                f"got {self.alpha}")


@dataclass(frozen=True)
class SaigoParams:
    """Upper parameters (a, b) and lower parameter c of the Gauss kernel
    |Z - X|^(alpha-(p+1)/2) 2F1(a, b; c; I - Z^(-1/2) X Z^(-1/2))."""

    a: float
    b: float
    c: float


@dataclass(frozen=True)
class DetPowerOperand:
    """The operand f(X) = |X|^exponent, eligible for closed forms and for
    the vectorized Monte Carlo path."""

    exponent: float


@dataclass(frozen=True)
class FracValue:
    """Signed log-scale operator value.

    det_exponent records the power of |Z| the value carries, which is how
    these operators act on determinant-power operands; the |Z| factor itself
    is already included in log_magnitude.
    """

    log_magnitude: float
    sign: int
    det_exponent: float

    def value(self):
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)


def _check_argument(order, Z):
    if Z.dim != order.config.p:
        raise DimensionError(
            f"argument dimension {Z.dim} does not match configuration "
            f"dimension {order.config.p}")


def _operand_exponent_check(cfg, eta):
    if not 0.5 * cfg.r + eta > 0.5 * (cfg.p - 1):
        raise ParameterDomainError(
            f"need r/2 + eta > (p-1)/2: r={cfg.r}, eta={eta}, p={cfg.p}")


def frac_integral_power_closed(order, Z, eta=0.0):
    """Exact operator value on the operand |X|^eta.

    The cone integral is a matrix beta integral, so the result is
    |Z|^(alpha+r/2+eta-(p+1)/2) * pi^(rp/2) Gamma_p(r/2+eta) /
    (|A|^(r/2) |B|^(p/2) Gamma_p(r/2) Gamma_p(alpha+r/2+eta)).
    """
    _check_argument(order, Z)
    cfg = order.config
    eta = float(eta)
    _operand_exponent_check(cfg, eta)
    det_exponent = order.alpha + 0.5 * cfg.r + eta - 0.5 * (cfg.p + 1)
    log_magnitude = (det_exponent * Z.log_det
                     + stiefel_constant(cfg.p, cfg.r)
                     - cfg.log_weight_factor
                     + log_matrix_gamma(cfg.p, 0.5 * cfg.r + eta)
                     - log_matrix_gamma(cfg.p, order.alpha + 0.5 * cfg.r + eta))
    return FracValue(log_magnitude=log_magnitude, sign=1,
                     det_exponent=det_exponent)


def frac_integral_zonal_closed(order, Z, K, table=None):
    """Exact operator value on a zonal polynomial operand.

    The cone average of a zonal polynomial against the beta weight scales it
    by a ratio of partition Pochhammer symbols, giving

        |Z|^(alpha+r/2-(p+1)/2) * pi^(rp/2) /
        (|A|^(r/2) |B|^(p/2) Gamma_p(alpha+r/2))
        * [(r/2)_K / (alpha+r/2)_K] * C_K(Z).

    The leading Pochhammer factor vanishes for some partitions when r/2 sits
    on a half-integer ladder, in which case the value is exactly zero.
    """
    _check_argument(order, Z)
    cfg = order.config
    K = Partition.coerce(K)
    if table is None:
        table = fetch_table(K.weight, Z.dim)
    cz = zonal_eval(K, Z, table)
    num_log, num_sign = signed_log_gen_pochhammer(0.5 * cfg.r, K)
    den_log, den_sign = signed_log_gen_pochhammer(order.alpha + 0.5 * cfg.r, K)
    if den_sign == 0:
        raise ParameterDomainError(
            f"partition Pochhammer of alpha + r/2 = {order.alpha + 0.5 * cfg.r} "
            f"vanishes at {K.parts}")
    det_exponent = order.alpha + 0.5 * cfg.r - 0.5 * (cfg.p + 1)
    sign = num_sign * den_sign * (1 if cz > 0.0 else (0 if cz == 0.0 else -1))
    if sign == 0:
        return FracValue(log_magnitude=float("-inf"), sign=0,
                         det_exponent=det_exponent)
    log_magnitude = (det_exponent * Z.log_det
                     + 0.5 * cfg.r * cfg.p * math.log(math.pi)
                     - cfg.log_weight_factor
                     - log_matrix_gamma(cfg.p, order.alpha + 0.5 * cfg.r)
                     + num_log - den_log
                     + math.log(abs(cz)))
    return FracValue(log_magnitude=log_magnitude, sign=sign,
                     det_exponent=det_exponent)


def saigo_power_closed(order, Z, saigo, eta=0.0, trunc=None, table=None):
    """Operator value on |X|^eta when the kernel carries the extra Gauss
    factor 2F1(a, b; c; I - Z^(-1/2) X Z^(-1/2)).

    Expanding the kernel and integrating term by term turns each Gauss term
    into a beta average that contributes a partition Pochhammer of the order,
    so the cone integral collapses to a one-higher series at the identity:

        value = |Z|^(alpha+eta+r/2-(p+1)/2) * pi^(rp/2) Gamma_p(r/2+eta) /
                (|A|^(r/2) |B|^(p/2) Gamma_p(r/2) Gamma_p(alpha+eta+r/2))
                * 3F2(a, b, alpha; c, alpha+eta+r/2; I).

    With a = 0 the Gauss factor is identically one and the value reduces to
    the plain power form, bit for bit.
    """
    _check_argument(order, Z)
    cfg = order.config
    eta = float(eta)
    _operand_exponent_check(cfg, eta)
    shifted = 0.5 * cfg.r + eta
    params = HyperParams((saigo.a, saigo.b, order.alpha),
                         (saigo.c, order.alpha + shifted))
    series = hyper_pfq_at_identity(params, cfg.p, trunc=trunc, table=table)
    f = series.value
    det_exponent = order.alpha + 0.5 * cfg.r + eta - 0.5 * (cfg.p + 1)
    base = (det_exponent * Z.log_det
            + stiefel_constant(cfg.p, cfg.r)
            - cfg.log_weight_factor
            + log_matrix_gamma(cfg.p, 0.5 * cfg.r + eta)
            - log_matrix_gamma(cfg.p, order.alpha + 0.5 * cfg.r + eta))
    if f == 0.0:
        return FracValue(log_magnitude=float("-inf"), sign=0,
                         det_exponent=det_exponent)
    sign = 1 if f > 0.0 else -1
    return FracValue(log_magnitude=base + math.log(abs(f)), sign=sign,
                     det_exponent=det_exponent)


def frac_integral_numeric(order, Z, operand, n, seed):
    """Monte Carlo operator value on an arbitrary operand.

    The operand is either a DetPowerOperand, which runs on the vectorized
    determinant arrays straight from the rejection sampler, or a callable
    mapping an SpdMatrix to a float, which is evaluated once per accepted
    draw at X = Z^(1/2) W Z^(1/2).  Returns the estimate on the absolute
    scale together with its standard error.
    """
    _check_argument(order, Z)
    cfg = order.config
    p = cfg.p
    half = 0.5 * (p + 1)
    alpha = order.alpha
    w, det_w, det_v, n_proposals = _cone_raw(p, n, seed)
    log_prefactor = (stiefel_constant(p, cfg.r)
                     - cfg.log_weight_factor
                     - log_matrix_gamma(p, alpha)
                     + (alpha + 0.5 * cfg.r - half) * Z.log_det)
    if isinstance(operand, DetPowerOperand):
        eta = operand.exponent
        _operand_exponent_check(cfg, eta)
        h = np.exp((alpha - half) * np.log(det_v)
                   + (0.5 * cfg.r + eta - half) * np.log(det_w))
        log_prefactor += eta * Z.log_det
    else:
        root = np.asarray(spd_sqrt(Z).entries)
        kern_v = det_v ** (alpha - half)
        kern_w = det_w ** (0.5 * cfg.r - half)
        h = np.empty(n)
        for i in range(n):
            x = root @ w[i] @ root
            x = 0.5 * (x + x.T)
            h[i] = kern_v[i] * kern_w[i] * float(operand(SpdMatrix(x)))
    if not np.all(np.isfinite(h)):
        raise DegenerateInputError("integrand returned a non-finite value")
    raw = _indicator_estimate(h, n_proposals, 2.0 ** (p * (p - 1) // 2),
                              n, seed)
    scale = math.exp(log_prefactor)
    return McEstimate(value=raw.value * scale, stderr=raw.stderr * scale,
                      n=n, seed=int(seed), n_proposals=n_proposals)
