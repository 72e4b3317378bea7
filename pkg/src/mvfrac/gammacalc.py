"""Partition combinatorics and the matrix-variate gamma/beta family.

Gamma-type quantities are computed and returned on the log scale; they are
astronomically large already for moderate dimension.  Generalized Pochhammer
products, which may legitimately vanish or go negative, are returned as plain
floats, with a signed log variant where callers need the split.
"""

import math
from dataclasses import dataclass

from .errors import ParameterDomainError

__all__ = [
    "Partition",
    "partitions_of",
    "log_gamma",
    "log_matrix_gamma",
    "gen_pochhammer",
    "signed_log_gen_pochhammer",
    "log_matrix_gamma_partition",
    "log_matrix_beta",
    "pathway_factor",
]


# ---------------------------------------------------------------------------
# scalar log-gamma
# ---------------------------------------------------------------------------

# Lanczos approximation, g = 7 with 9 coefficients.  Relative error below
# 1e-13 on the positive real axis, and the constants are language-neutral
# (no dependence on a platform libm).
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(x):
    """Natural log of the scalar gamma function for x > 0."""
    if not x > 0.0:
        raise ParameterDomainError(
            f"log_gamma requires x > 0, got x={x!r} (pole or wrong sign)")
    if x < 0.5:
        # reflection keeps the Lanczos sum on its accurate branch
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    z = x - 1.0
    s = _LANCZOS_COEFFS[0]
    for i in range(1, 9):
        s += _LANCZOS_COEFFS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * math.log(t) - t + math.log(s)


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """An integer partition: non-increasing positive parts.

    Zero parts are stripped on construction, so ``Partition((2, 1, 0))`` and
    ``Partition((2, 1))`` are the same object value.  The empty partition is
    ``Partition(())`` and has weight 0.
    """

    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ParameterDomainError(
                    f"partition parts must be non-increasing, got {parts}")
        if parts and parts[-1] < 0:
            raise ParameterDomainError(
                f"partition parts must be non-negative, got {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def coerce(cls, obj):
        if isinstance(obj, cls):
            return obj
        if isinstance(obj, int):
            return cls((obj,)) if obj else cls(())
        return cls(tuple(obj))

    @property
    def weight(self):
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __repr__(self):
        return f"Partition{self.parts!r}"


def partitions_of(k, max_parts):
    """All partitions of k into at most max_parts parts, reverse-lex order.

    Reverse-lexicographic means (k) first and the flattest partition last;
    this refines dominance order, which the zonal recurrence relies on.
    """
    if k < 0:
        raise ParameterDomainError(f"partitions_of requires k >= 0, got {k}")
    if max_parts < 1:
        raise ParameterDomainError(
            f"partitions_of requires max_parts >= 1, got {max_parts}")
    out = []
    prefix = []

    def rec(remaining, cap):
        if remaining == 0:
            out.append(Partition(tuple(prefix)))
            return
        slots = max_parts - len(prefix)
        if slots == 0:
            return
        for part in range(min(remaining, cap), 0, -1):
            if part * slots < remaining:
                break
            prefix.append(part)
            rec(remaining - part, part)
            prefix.pop()

    rec(k, k)
    return out


# ---------------------------------------------------------------------------
# matrix-variate gamma and friends
# ---------------------------------------------------------------------------

def _check_dim(p):
    if not isinstance(p, int) or p < 1:
        raise ParameterDomainError(f"dimension p must be a positive integer, got {p!r}")


def log_matrix_gamma(p, alpha):
    """log of the matrix-variate gamma function of dimension p at alpha.

    The value is pi**(p(p-1)/4) times the product of Gamma(alpha - (j-1)/2)
    over j = 1..p, so the argument must satisfy alpha > (p-1)/2 or the last
    factor hits a pole.
    """
    _check_dim(p)
    if not alpha > (p - 1) / 2.0:
        raise ParameterDomainError(
            f"log_matrix_gamma requires alpha > (p-1)/2: alpha={alpha}, p={p}")
    acc = 0.25 * p * (p - 1) * math.log(math.pi)
    for j in range(p):
        acc += log_gamma(alpha - 0.5 * j)
    return acc


def gen_pochhammer(a, K):
    """Generalized rising factorial of a over the partition K.

    Product over parts k_j of the ordinary Pochhammer (a - (j-1)/2)_{k_j}.
    May be zero or negative; returned as a plain float.
    """
    K = Partition.coerce(K)
    out = 1.0
    for j, kj in enumerate(K.parts):
        base = a - 0.5 * j
        for i in range(kj):
            out *= base + i
    return out


def signed_log_gen_pochhammer(a, K):
    """(log |(a)_K|, sign) with sign in {-1, 0, +1}."""
    K = Partition.coerce(K)
    log_abs = 0.0
    sign = 1
    for j, kj in enumerate(K.parts):
        base = a - 0.5 * j
        for i in range(kj):
            f = base + i
            if f == 0.0:
                return float("-inf"), 0
            if f < 0.0:
                sign = -sign
            log_abs += math.log(abs(f))
    return log_abs, sign


def log_matrix_gamma_partition(p, b, K):
    """log of the partition-shifted matrix gamma: log Gamma_p(b) + log (b)_K.

    Requires (b)_K > 0; use signed_log_gen_pochhammer for the general case.
    """
    _check_dim(p)
    K = Partition.coerce(K)
    if len(K) > p:
        raise ParameterDomainError(
            f"partition has {len(K)} parts but dimension is {p}")
    log_abs, sign = signed_log_gen_pochhammer(b, K)
    if sign == 0:
        raise ParameterDomainError(
            f"({b})_{K.parts} vanishes; log form undefined")
    if sign < 0:
        raise ParameterDomainError(
            f"({b})_{K.parts} is negative; use the signed variant")
    return log_matrix_gamma(p, b) + log_abs


def log_matrix_beta(p, alpha, beta):
    """log of the matrix-variate beta function of dimension p."""
    return (log_matrix_gamma(p, alpha) + log_matrix_gamma(p, beta)
            - log_matrix_gamma(p, alpha + beta))


def pathway_factor(q, K):
    """(q-1)**|K| times (1/(q-1))_K, in cancelled product form.

    Multiplying the factors as 1 - (q-1)(j-1)/2 + (q-1)(i-1) keeps the
    evaluation stable as q -> 1+, where the naive split overflows.  The
    product tends to 1 in that limit.
    """
    if not q > 1.0:
        raise ParameterDomainError(f"pathway_factor requires q > 1, got q={q}")
    K = Partition.coerce(K)
    eps = q - 1.0
    out = 1.0
    for j, kj in enumerate(K.parts):
        for i in range(kj):
            out *= 1.0 - eps * 0.5 * j + eps * i
    return out
