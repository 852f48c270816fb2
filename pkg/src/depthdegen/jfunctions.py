"""Joint ReLU moments of correlated standard Gaussians.

``J(a, b; theta) = E[relu(G)^a relu(H)^b]`` where ``G, H`` are standard
normal with correlation ``cos(theta)``. Writing ``G = r cos t`` and
``H = r cos(t - theta)`` in polar coordinates splits the expectation into a
closed-form radial moment and a smooth angular integral over the arc where
the rectified factors are positive. The angular part is integrated with
Gauss-Legendre, which is exact up to rounding for these trigonometric
polynomials.
"""

from functools import lru_cache

import numpy as np
from scipy import special

from .core import DomainError

MAX_ORDER = 8
_NODES = 64


@lru_cache(maxsize=None)
def _legendre():
    return np.polynomial.legendre.leggauss(_NODES)


def _radial_moment(k: int) -> float:
    # integral_0^inf r^k r exp(-r^2/2) dr
    return 2.0 ** (k / 2) * special.gamma(k / 2 + 1)


def _arc(a: int, b: int, theta: float):
    # the integrand is 2 pi periodic, so any arc of length <= 2 pi will do
    if a == 0 and b == 0:
        return -np.pi, np.pi
    lo, hi = -np.inf, np.inf
    if a > 0:
        lo, hi = -np.pi / 2, np.pi / 2
    if b > 0:
        lo, hi = max(lo, theta - np.pi / 2), min(hi, theta + np.pi / 2)
    return lo, hi


def j_numeric(a: int, b: int, theta: float) -> float:
    """Evaluate ``J(a, b; theta)`` by quadrature; ``relu^0`` is taken as 1."""
    if a < 0 or b < 0 or int(a) != a or int(b) != b:
        raise DomainError("exponents must be nonnegative integers")
    if a + b > MAX_ORDER:
        raise DomainError(f"a + b must not exceed {MAX_ORDER}")
    theta = float(theta)
    if not 0.0 <= theta <= np.pi:
        raise DomainError("theta must lie in [0, pi]")
    lo, hi = _arc(a, b, theta)
    if hi <= lo:
        return 0.0
    nodes, weights = _legendre()
    t = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
    f = np.cos(t) ** a * np.cos(t - theta) ** b
    angular = 0.5 * (hi - lo) * np.dot(weights, f)
    return float(angular * _radial_moment(a + b) / (2 * np.pi))


def j11_closed(theta):
    """``J(1, 1; theta) = (sin theta + (pi - theta) cos theta) / (2 pi)``."""
    theta = np.asarray(theta, dtype=np.float64)
    if np.any((theta < 0) | (theta > np.pi)):
        raise DomainError("theta must lie in [0, pi]")
    val = (np.sin(theta) + (np.pi - theta) * np.cos(theta)) / (2 * np.pi)
    return float(val) if val.ndim == 0 else val


def j_monte_carlo(a: int, b: int, theta: float, samples: int, rng: np.random.Generator,
                  chunk: int = 1_000_000):
    """Plain Monte Carlo estimate of ``J(a, b; theta)`` and its standard error."""
    total = 0.0
    total_sq = 0.0
    done = 0
    c, s = np.cos(theta), np.sin(theta)
    while done < samples:
        m = min(chunk, samples - done)
        g = rng.standard_normal(m)
        h = c * g + s * rng.standard_normal(m)
        f = np.maximum(g, 0.0) ** a * np.maximum(h, 0.0) ** b
        total += f.sum()
        total_sq += (f * f).sum()
        done += m
    mean = total / samples
    var = (total_sq / samples - mean**2) * samples / (samples - 1)
    return mean, float(np.sqrt(max(var, 0.0) / samples))
