"""Scalar update rules for the angle between two inputs of a ReLU network.

All functions accept Python scalars or numpy arrays and return the same
shape. Angles are in radians. The log-sin-squared coordinate
``x = ln sin^2(theta)`` is used by the finite-width rules; ``x = -inf``
is the absorbing collinear state and is passed through unchanged.
"""

import logging

import numpy as np

logger = logging.getLogger(__name__)

_TWO_OVER_3PI = 2.0 / (3.0 * np.pi)


class DomainError(ValueError):
    """Raised when an argument violates a mathematical precondition."""


def _result(value):
    value = np.asarray(value, dtype=np.float64)
    return float(value) if value.ndim == 0 else value


def _check_width(n):
    n = np.asarray(n, dtype=np.float64)
    if np.any(~(n >= 2)):
        raise DomainError(
            "width must be >= 2 (rho(n) has a pole at n = 1), got "
            f"{np.min(n) if n.size else n}"
        )
    return n


def _check_half_angle(theta, allow_zero=True):
    theta = np.asarray(theta, dtype=np.float64)
    lo_ok = theta >= 0 if allow_zero else theta > 0
    if np.any(~lo_ok) or np.any(theta > np.pi / 2):
        raise DomainError(
            "angle must lie in [0, pi/2] for the small-angle expansion; map "
            "larger angles through infinite_step first"
        )
    return theta


def rho(n):
    """Width-dependent drift constant of the finite-width update.

    ``rho(n) = ln((n+5)/(n-1)) - 10n/(n+5)^2 + 6n/(n-1)^2``, which behaves
    like ``2/n + O(n^-2)`` for large widths.
    """
    n = _check_width(n)
    val = np.log((n + 5) / (n - 1)) - 10 * n / (n + 5) ** 2 + 6 * n / (n - 1) ** 2
    return _result(val)


def theta_to_x(theta):
    """Map an angle to ``ln sin^2(theta)``.

    Near ``pi/2`` the value is formed from ``cos(theta)`` with ``log1p`` so
    the round trip through :func:`x_to_theta` keeps full relative precision.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if np.any((theta < 0) | (theta > np.pi)):
        raise DomainError("angle must lie in [0, pi]")
    s = np.sin(theta)
    c = np.cos(theta)
    with np.errstate(divide="ignore"):
        x = np.where(s < 0.7, 2.0 * np.log(s), np.log1p(-c * c))
    return _result(x)


def x_to_theta(x):
    """Inverse of :func:`theta_to_x` on ``[0, pi/2]``; ``-inf`` maps to 0."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x > 0):
        raise DomainError("ln sin^2(theta) must be <= 0")
    s = np.exp(0.5 * x)
    c = np.sqrt(-np.expm1(x))
    return _result(np.arctan2(s, c))


def mu(theta, n):
    """Conditional mean of ``ln sin^2`` of the next-layer angle.

    Expansion about ``theta = 0`` kept through the ``theta^2`` term::

        ln sin^2(t) - 2t/(3 pi) - rho(n) - 8t/(15 pi n)
            - (2/(9 pi^2) - 68/(45 pi^2 n)) t^2

    The truncation error is largest at ``theta = pi/2`` (orthogonal inputs).
    ``theta = 0`` returns ``-inf``.
    """
    theta = _check_half_angle(theta)
    n = _check_width(n)
    pi = np.pi
    with np.errstate(divide="ignore"):
        lss = theta_to_x(theta)
    val = (
        lss
        - _TWO_OVER_3PI * theta
        - rho(n)
        - 8 * theta / (15 * pi * n)
        - (2 / (9 * pi**2) - 68 / (45 * pi**2 * n)) * theta**2
    )
    return _result(val)


def sigma_sq(theta, n):
    """Conditional variance of ``ln sin^2`` of the next-layer angle.

    ``8/n - (64/(15 pi)) t/n - (8 + 296/(45 pi)) t^2/n``, clamped at zero.
    The truncated polynomial turns negative above ``theta ~ 0.825``.
    """
    theta = _check_half_angle(theta)
    n = _check_width(n)
    pi = np.pi
    raw = (8 - 64 / (15 * pi) * theta - (8 + 296 / (45 * pi)) * theta**2) / n
    if np.any(raw < 0):
        logger.debug("sigma_sq clamped to 0 at %d point(s)", int(np.sum(raw < 0)))
    return _result(np.maximum(raw, 0.0))


def finite_step_simple(x, n):
    """Small-angle linear update ``x - 2 theta/(3 pi) - rho(n)``."""
    theta = x_to_theta(x)
    with np.errstate(invalid="ignore"):
        val = np.asarray(x, dtype=np.float64) - _TWO_OVER_3PI * np.asarray(theta) - rho(n)
    return _result(val)


def finite_step_full(x, n):
    """One step of the finite-width mean chain: ``mu(theta(x), n)``."""
    return mu(x_to_theta(x), n)


def _sin_minus_theta_cos(theta):
    # sin t - t cos t, with a series below 0.5 to avoid cancellation
    theta = np.asarray(theta, dtype=np.float64)
    out = np.sin(theta) - theta * np.cos(theta)
    small = theta < 0.5
    if np.any(small):
        t = theta[small] if theta.ndim else theta
        t2 = t * t
        term = t * t2 / 3.0
        acc = term.copy() if np.ndim(term) else term
        for k in range(2, 14):
            term = -term * t2 * k / ((k - 1) * (2 * k) * (2 * k + 1))
            acc = acc + term
        if theta.ndim:
            out[small] = acc
        else:
            out = acc
    return out


def infinite_step(theta):
    """Infinite-width angle map.

    ``cos(theta') = (sin(theta) + (pi - theta) cos(theta)) / pi``; evaluated
    through ``1 - cos(theta')`` so that tiny angles keep relative precision.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if np.any((theta < 0) | (theta > np.pi)):
        raise DomainError("angle must lie in [0, pi]")
    one_minus_cos = 2 * np.sin(theta / 2) ** 2
    gap = (np.pi * one_minus_cos - _sin_minus_theta_cos(theta)) / np.pi
    gap = np.clip(gap, 0.0, 2.0)
    return _result(np.minimum(2 * np.arcsin(np.sqrt(gap / 2)), np.pi / 2))
