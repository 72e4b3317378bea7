"""Deterministic counter-based random streams.

Every draw is a pure function of (key, counter index): the raw 64-bit output
at index i is the splitmix finalizer applied to key + (i+1) * golden ratio.
That makes all samplers reproducible bit-for-bit across platforms and numpy
versions, and lets sub-streams be addressed by absolute index instead of by
shared mutable state.

Uniforms are mapped to the open interval (0,1) as (x >> 11 + 0.5) * 2**-53,
normals come from Box-Muller on consecutive uniform pairs (even index takes
the cosine branch, odd the sine branch), and gamma variates use the
Marsaglia-Tsang squeeze with the power boost below shape one.  Each gamma
variate owns a fixed block of counter slots so rejection never desynchronizes
neighbouring variates.
"""

import math

import numpy as np

from .errors import ParameterDomainError, ResourceLimitError

__all__ = [
    "derive_key",
    "uniforms",
    "uniforms_at",
    "normals",
    "gamma_variates",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_TWO_NEG53 = 2.0 ** -53
_TWO_PI = 2.0 * math.pi

# counter budget per gamma variate: 84 squeeze attempts of 3 slots each,
# plus one reserved slot for the small-shape boost
_GAMMA_STRIDE = 256
_GAMMA_MAX_ATTEMPTS = 84
_GAMMA_BOOST_SLOT = 255


def derive_key(seed, tag=0):
    """A 64-bit stream key from a seed and a small stream tag."""
    z = (int(seed) & _MASK64)
    z = (z * 0x9E3779B97F4A7C15 + 0xD1B54A32D192ED03) & _MASK64
    z ^= ((int(tag) & _MASK64) * 0xC2B2AE3D27D4EB4F) & _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return np.uint64(z)


def _raw(key, idx):
    """Finalized 64-bit words at the given uint64 counter indices."""
    z = key + (idx + np.uint64(1)) * _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def uniforms(key, start, n):
    """n uniforms in the open interval (0,1) at counter positions
    start..start+n-1."""
    idx = np.arange(int(start), int(start) + int(n), dtype=np.uint64)
    return ((_raw(key, idx) >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_NEG53


def uniforms_at(key, idx):
    """Uniforms in (0,1) at explicit counter positions."""
    idx = np.asarray(idx, dtype=np.uint64)
    return ((_raw(key, idx) >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_NEG53


def normals(key, first, n):
    """n standard normals at normal-stream positions first..first+n-1.

    Normal position e consumes the uniform pair (2*(e//2), 2*(e//2)+1); even
    positions take the Box-Muller cosine branch, odd ones the sine branch, so
    any contiguous block of positions is reproducible in isolation.
    """
    e = np.arange(int(first), int(first) + int(n), dtype=np.int64)
    pair = (e >> 1).astype(np.uint64)
    u1 = uniforms_at(key, pair * np.uint64(2))
    u2 = uniforms_at(key, pair * np.uint64(2) + np.uint64(1))
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = _TWO_PI * u2
    return np.where(e & 1, radius * np.sin(angle), radius * np.cos(angle))


def gamma_variates(key, shape, n, first=0):
    """n gamma(shape, rate 1) variates at variate positions first..first+n-1.

    Marsaglia-Tsang: with d = shape - 1/3 and c = 1/(3 sqrt(d)), propose
    d*(1+c*x)**3 for a standard normal x and accept via the quartic squeeze
    u < 1 - 0.0331 x**4 or the exact log test.  Shapes below one are drawn at
    shape+1 and scaled by u**(1/shape).  Each variate consumes slots from its
    own fixed counter block; the acceptance rate is high enough that running
    out of the 84-attempt budget is not a reachable event for valid shapes.
    """
    if not shape > 0.0:
        raise ParameterDomainError(f"gamma shape must be positive, got {shape}")
    n = int(n)
    boosted = shape < 1.0
    a = shape + 1.0 if boosted else float(shape)
    d = a - 1.0 / 3.0
    c = 1.0 / (3.0 * math.sqrt(d))
    out = np.empty(n, dtype=np.float64)
    pending = np.arange(n, dtype=np.int64)
    base_first = int(first)
    for attempt in range(_GAMMA_MAX_ATTEMPTS):
        if pending.size == 0:
            break
        slot = ((base_first + pending) * _GAMMA_STRIDE + 3 * attempt).astype(np.uint64)
        u1 = uniforms_at(key, slot)
        u2 = uniforms_at(key, slot + np.uint64(1))
        u3 = uniforms_at(key, slot + np.uint64(2))
        x = np.sqrt(-2.0 * np.log(u1)) * np.cos(_TWO_PI * u2)
        v = (1.0 + c * x) ** 3
        positive = v > 0.0
        x2 = x * x
        squeeze = u3 < 1.0 - 0.0331 * x2 * x2
        safe_v = np.where(positive, v, 1.0)
        slow = np.log(u3) < 0.5 * x2 + d * (1.0 - safe_v + np.log(safe_v))
        accept = positive & (squeeze | slow)
        out[pending[accept]] = d * v[accept]
        pending = pending[~accept]
    if pending.size:
        raise ResourceLimitError(
            f"gamma sampler exhausted {_GAMMA_MAX_ATTEMPTS} attempts for "
            f"{pending.size} variates (shape={shape})")
    if boosted:
        slot = ((base_first + np.arange(n, dtype=np.int64)) * _GAMMA_STRIDE
                + _GAMMA_BOOST_SLOT).astype(np.uint64)
        out *= uniforms_at(key, slot) ** (1.0 / shape)
    return out
