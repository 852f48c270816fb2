"""Monte Carlo ground truth: random Gaussian ReLU networks fed two inputs.

Networks follow ``z1 = W1 x`` and ``z(l+1) = sqrt(2/n_l) W(l+1) relu(z_l)``
with i.i.d. standard normal weights and no biases. Two samplers produce
the same distribution of per-layer angles:

``"dense"``
    Builds every weight matrix of every replica (row-major fill from the
    replica's stream) and multiplies it through. Literal, and slow for wide
    deep nets.
``"projected"``
    Uses the fact that a fresh Gaussian matrix applied to two fixed vectors
    ``a, b`` gives rows ``(w.a, w.b)`` that are i.i.d. bivariate normal with
    the Gram matrix of ``(a, b)``. Each layer therefore needs only ``2 n``
    normals per replica. Because angles are scale-free only ``(cos, sin)`` of
    the incoming angle matters.
"""

from dataclasses import dataclass

import numpy as np

from . import core, streams
from .core import DomainError
from .propagation import Architecture, PropagationTrace

PROJECTED_BLOCK = 256
DENSE_BLOCK = 16
_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class NetworkInstance:
    weights: tuple

    def __post_init__(self):
        for prev, cur in zip(self.weights, self.weights[1:]):
            if cur.shape[1] != prev.shape[0]:
                raise ValueError("weight shapes do not chain")
        for w in self.weights:
            w.setflags(write=False)


def sample_network(arch: Architecture, seed: int, replica: int = 0) -> NetworkInstance:
    rng = streams.stream(seed, replica, streams.NETWORK)
    dims = (arch.input_dim,) + arch.hidden_widths
    return NetworkInstance(
        tuple(rng.standard_normal((n_out, n_in)) for n_in, n_out in zip(dims, dims[1:]))
    )


def measure_angle(a: np.ndarray, b: np.ndarray, axis: int = -1):
    """Angle between ``a`` and ``b`` along ``axis`` as ``(theta, x)``.

    ``sin(theta)`` comes from the norm of the part of ``b`` orthogonal to
    ``a`` (re-orthogonalised once), so ``x = ln sin^2(theta)`` keeps its
    relative precision for nearly collinear vectors. Residuals below the
    rounding floor are reported as exactly collinear. Zero vectors give NaN.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na = np.linalg.norm(a, axis=axis, keepdims=True)
    nb = np.linalg.norm(b, axis=axis, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        ua = a / na
        bn = b / nb
        proj = np.sum(bn * ua, axis=axis, keepdims=True)
        perp = bn - proj * ua
        again = np.sum(perp * ua, axis=axis, keepdims=True)
        perp = perp - again * ua
        proj = proj + again
        sin = np.linalg.norm(perp, axis=axis)
        cos = np.squeeze(proj, axis=axis)
        floor = 8 * _EPS * np.sqrt(a.shape[axis])
        sin = np.where(sin <= floor, 0.0, sin)
        theta = np.arctan2(sin, cos)
        x = 2 * (np.log(sin) - np.log(np.hypot(sin, cos)))
    dead = (np.squeeze(na, axis=axis) == 0) | (np.squeeze(nb, axis=axis) == 0)
    theta = np.where(dead, np.nan, theta)
    x = np.where(dead, np.nan, x)
    return theta, x


def make_input_pair(dim: int, theta0: float, seed: int):
    """Two unit vectors in ``R^dim`` at exact angle ``theta0``."""
    if dim < 2:
        raise DomainError("input dimension must be >= 2 to hold two directions")
    if not 0 <= theta0 <= np.pi:
        raise DomainError("theta0 must lie in [0, pi]")
    rng = streams.stream(seed, 0, streams.INPUT_PAIR)
    u = rng.standard_normal(dim)
    u /= np.linalg.norm(u)
    w = rng.standard_normal(dim)
    w -= (w @ u) * u
    w -= (w @ u) * u
    w /= np.linalg.norm(w)
    return u, np.cos(theta0) * u + np.sin(theta0) * w


def _check_inputs(arch, u, v):
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != (arch.input_dim,) or v.shape != (arch.input_dim,):
        raise DomainError(f"inputs must have dimension {arch.input_dim}")
    if not np.any(u) or not np.any(v):
        raise DomainError("inputs must be nonzero")
    return u, v


def _forward_x(arch, instance, u, v):
    theta = np.full(arch.depth + 1, np.nan)
    x = np.full(arch.depth + 1, np.nan)
    theta[0], x[0] = measure_angle(u, v)
    h = np.stack([u, v], axis=1)
    for layer, w in enumerate(instance.weights):
        z = w @ h if layer == 0 else np.sqrt(2.0 / h.shape[0]) * (w @ h)
        h = np.maximum(z, 0.0)
        t, xx = measure_angle(h[:, 0], h[:, 1])
        if np.isnan(t):
            break
        theta[layer + 1], x[layer + 1] = t, xx
    return theta, x


def forward_pair(arch: Architecture, instance: NetworkInstance, u, v) -> PropagationTrace:
    """Push ``u`` and ``v`` through ``instance`` and measure the angle per layer.

    A layer whose activation vanishes for either input leaves NaN in that
    record and every later one; ``diagnostics['dead_layer']`` names it.
    """
    u, v = _check_inputs(arch, u, v)
    theta, x = _forward_x(arch, instance, u, v)
    dead = np.flatnonzero(np.isnan(theta))
    trace = PropagationTrace(theta, x, np.zeros(arch.depth + 1), "monte-carlo")
    trace.diagnostics["dead_layer"] = int(dead[0]) if dead.size else None
    return trace


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo settings.

    Give either ``theta0`` (a pair at that angle, built by
    :func:`make_input_pair`) or explicit input vectors ``u`` and ``v``.
    """

    replicas: int
    seed: int = 0
    theta0: float | None = None
    u: tuple | None = None
    v: tuple | None = None
    sampler: str = "projected"
    threads: int | None = None

    def __post_init__(self):
        if self.replicas < 1:
            raise ValueError("replicas must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if (self.theta0 is None) == (self.u is None or self.v is None):
            raise ValueError("give exactly one of theta0 or the pair (u, v)")
        if self.sampler not in ("projected", "dense"):
            raise ValueError("sampler must be 'projected' or 'dense'")

    def input_pair(self, dim: int):
        if self.theta0 is not None:
            return make_input_pair(dim, self.theta0, self.seed)
        return np.asarray(self.u, dtype=np.float64), np.asarray(self.v, dtype=np.float64)


@dataclass
class LayerDistribution:
    """Empirical distribution of ``x = ln sin^2(theta)`` at one layer.

    ``samples`` holds the finite values only; replicas that became exactly
    collinear (``x = -inf``) or lost a layer to dead ReLUs are counted in
    ``count_absorbed`` and excluded from the moments.
    """

    layer: int
    samples: np.ndarray
    count_collinear: int
    count_dead: int

    @property
    def count_absorbed(self) -> int:
        return self.count_collinear + self.count_dead

    @property
    def replicas(self) -> int:
        return self.samples.size + self.count_absorbed

    @property
    def mean(self) -> float:
        return float(np.mean(self.samples)) if self.samples.size else float("nan")

    @property
    def variance(self) -> float:
        return float(np.var(self.samples, ddof=1)) if self.samples.size > 1 else float("nan")

    @property
    def std(self) -> float:
        return float(np.sqrt(self.variance))

    @property
    def stderr(self) -> float:
        return self.std / np.sqrt(self.samples.size)


def _projected_block(widths, cos0, sin0, seed, block, count):
    rng = streams.stream(seed, block, streams.PROJECTED)
    out = np.full((count, len(widths) + 1), np.nan)
    out[:, 0] = core.theta_to_x(np.arctan2(sin0, cos0))
    c = np.full(count, cos0)
    s = np.full(count, sin0)
    alive = np.ones(count, dtype=bool)
    for layer, n in enumerate(widths):
        g = rng.standard_normal((2, PROJECTED_BLOCK, n))[:, :count]
        a = np.maximum(g[0], 0.0)
        b = np.maximum(c[:, None] * g[0] + s[:, None] * g[1], 0.0)
        theta, x = measure_angle(a, b, axis=1)
        alive &= ~np.isnan(theta)
        out[alive, layer + 1] = x[alive]
        c = np.where(alive, np.cos(theta), 1.0)
        s = np.where(alive, np.sin(theta), 0.0)
    return out


def simulate_x(arch: Architecture, cfg: McConfig) -> np.ndarray:
    """Raw ``(replicas, L + 1)`` array of measured ``x``; NaN marks dead layers."""
    u, v = _check_inputs(arch, *cfg.input_pair(arch.input_dim))
    if cfg.sampler == "dense":
        def run(block):
            lo = block * DENSE_BLOCK
            hi = min(lo + DENSE_BLOCK, cfg.replicas)
            return np.stack([
                _forward_x(arch, sample_network(arch, cfg.seed, r), u, v)[1]
                for r in range(lo, hi)
            ])
        n_blocks = -(-cfg.replicas // DENSE_BLOCK)
    else:
        theta_in, _ = measure_angle(u, v)
        cos0, sin0 = np.cos(theta_in), np.sin(theta_in)
        if cfg.theta0 is not None:
            cos0, sin0 = np.cos(cfg.theta0), np.sin(cfg.theta0)

        def run(block):
            count = min(PROJECTED_BLOCK, cfg.replicas - block * PROJECTED_BLOCK)
            return _projected_block(arch.hidden_widths, cos0, sin0, cfg.seed, block, count)
        n_blocks = -(-cfg.replicas // PROJECTED_BLOCK)
    return np.concatenate(streams.map_blocks(run, n_blocks, cfg.threads))


def distributions_from_x(xs: np.ndarray) -> list[LayerDistribution]:
    out = []
    for layer in range(xs.shape[1]):
        col = xs[:, layer]
        out.append(LayerDistribution(
            layer=layer,
            samples=col[np.isfinite(col)],
            count_collinear=int(np.sum(np.isneginf(col))),
            count_dead=int(np.sum(np.isnan(col))),
        ))
    return out


def run_monte_carlo(arch: Architecture, cfg: McConfig) -> list[LayerDistribution]:
    """Per-layer distributions for layers ``0..L`` over ``cfg.replicas`` networks.

    Output is a pure function of ``(arch, cfg)`` apart from ``cfg.threads``,
    which only changes how blocks are scheduled.
    """
    return distributions_from_x(simulate_x(arch, cfg))
