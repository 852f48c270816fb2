"""Layer-by-layer angle chains over whole architectures.

Three chains are provided: the deterministic finite-width mean chain
(:func:`predict_finite`), the width-blind infinite-width chain
(:func:`predict_infinite`), and the stochastic Gaussian chain
(:func:`sample_gaussian_chain`) in which each layer draws
``ln sin^2(theta)`` from a normal with the finite-width mean and variance.
"""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special, stats

from . import core, streams
from .core import DomainError

METHODS = ("finite-full", "finite-simple", "infinite", "gaussian-sample", "monte-carlo")

# Samples per RNG block in the Gaussian chain. Changing it changes the draws.
CHAIN_BLOCK = 4096


@dataclass(frozen=True)
class Architecture:
    """A fully connected ReLU network described by its hidden widths."""

    input_dim: int
    hidden_widths: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        widths = tuple(int(w) for w in self.hidden_widths)
        object.__setattr__(self, "hidden_widths", widths)
        if int(self.input_dim) < 1:
            raise DomainError("input_dim must be a positive integer")
        if not widths:
            raise DomainError("an architecture needs at least one hidden layer")
        bad = [w for w in widths if w < 2]
        if bad:
            raise DomainError(
                f"hidden width {bad[0]} < 2: rho(n) has a pole at n = 1"
            )

    @property
    def depth(self) -> int:
        return len(self.hidden_widths)

    @property
    def avg_width(self) -> float:
        return float(np.mean(self.hidden_widths))

    def truncated(self, depth: int) -> "Architecture":
        return Architecture(self.input_dim, self.hidden_widths[:depth], self.label)


@dataclass
class PropagationTrace:
    """Per-layer records ``l = 0..L`` of angle, ``ln sin^2`` and variance.

    For deterministic chains ``variance[l]`` is the one-step conditional
    variance of ``x[l]`` given the record at ``l - 1``; it is not compounded.
    """

    theta: np.ndarray
    x: np.ndarray
    variance: np.ndarray
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")

    def __len__(self):
        return len(self.theta)

    @property
    def depth(self) -> int:
        return len(self.theta) - 1

    @property
    def final_theta(self) -> float:
        return float(self.theta[-1])

    @property
    def final_x(self) -> float:
        return float(self.x[-1])


def _initial_state(theta0: float, allow_pi: bool = True):
    theta0 = float(theta0)
    if theta0 == np.pi and allow_pi:
        return theta0
    if not 0.0 <= theta0 <= np.pi / 2:
        raise DomainError(
            "theta0 must lie in [0, pi/2] or equal pi for the finite-width chain"
        )
    return theta0


def predict_finite(arch: Architecture, theta0: float, variant: str = "full") -> PropagationTrace:
    """Run the deterministic finite-width chain over ``arch``.

    Record ``l + 1`` is obtained from record ``l`` with the width of hidden
    layer ``l + 1``. Antipodal inputs (``theta0 = pi``) cross the first layer
    with the exact infinite-width map ``pi -> pi/2``.
    """
    if variant == "full":
        step = core.finite_step_full
    elif variant == "simple":
        step = core.finite_step_simple
    else:
        raise ValueError("variant must be 'full' or 'simple'")
    theta0 = _initial_state(theta0)
    L = arch.depth
    theta = np.empty(L + 1)
    x = np.empty(L + 1)
    var = np.zeros(L + 1)
    theta[0] = theta0
    x[0] = core.theta_to_x(theta0)
    start = 0
    if theta0 == np.pi:
        theta[1] = core.infinite_step(np.pi)
        x[1] = core.theta_to_x(theta[1])
        start = 1
    for layer in range(start, L):
        n = arch.hidden_widths[layer]
        x[layer + 1] = step(x[layer], n)
        theta[layer + 1] = core.x_to_theta(x[layer + 1])
        if theta[layer] > 0:
            var[layer + 1] = core.sigma_sq(theta[layer], n)
    return PropagationTrace(theta, x, var, "finite-" + variant)


def predict_infinite(arch: Architecture | int, theta0: float) -> PropagationTrace:
    """Iterate the infinite-width map; accepts an architecture or a bare depth."""
    depth = arch if isinstance(arch, int) else arch.depth
    if depth < 0:
        raise DomainError("depth must be nonnegative")
    theta0 = float(theta0)
    if not 0.0 <= theta0 <= np.pi:
        raise DomainError("theta0 must lie in [0, pi]")
    theta = np.empty(depth + 1)
    theta[0] = theta0
    for layer in range(depth):
        theta[layer + 1] = core.infinite_step(theta[layer])
    x = np.asarray(core.theta_to_x(theta), dtype=np.float64).reshape(depth + 1)
    return PropagationTrace(theta, x, np.zeros(depth + 1), "infinite")


@dataclass(frozen=True)
class GaussianChainConfig:
    num_samples: int
    seed: int = 0
    variance_scale: float = 1.0  # test hook: 0 collapses to the mean chain
    threads: int | None = None

    def __post_init__(self):
        if self.num_samples < 1:
            raise ValueError("num_samples must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


class ChainSamples(Sequence):
    """Sample paths of the Gaussian chain; indexing yields a PropagationTrace."""

    def __init__(self, x: np.ndarray, variance: np.ndarray, truncated_mass: np.ndarray):
        self.x = x
        self.variance = variance
        self.truncated_mass = truncated_mass

    def __len__(self):
        return self.x.shape[0]

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        xs = self.x[i]
        return PropagationTrace(
            np.asarray(core.x_to_theta(xs)), xs.copy(), self.variance[i].copy(), "gaussian-sample"
        )

    @property
    def theta(self) -> np.ndarray:
        return np.asarray(core.x_to_theta(self.x))

    def layer_mean(self) -> np.ndarray:
        return self.x.mean(axis=0)

    def layer_std(self) -> np.ndarray:
        return self.x.std(axis=0, ddof=1) if len(self) > 1 else np.zeros(self.x.shape[1])


def _chain_block(arch, theta0, cfg, block, count):
    L = arch.depth
    u = 1.0 - streams.stream(cfg.seed, block, streams.CHAIN).random((L, CHAIN_BLOCK))
    u = u[:, :count]
    x = np.empty((count, L + 1))
    var = np.zeros((count, L + 1))
    x[:, 0] = core.theta_to_x(theta0)
    trunc = np.zeros((count, L + 1))
    start = 0
    if theta0 == np.pi:
        x[:, 1] = core.theta_to_x(core.infinite_step(np.pi))
        start = 1
    with np.errstate(divide="ignore", invalid="ignore"):
        for layer in range(start, L):
            n = arch.hidden_widths[layer]
            theta = np.asarray(core.x_to_theta(x[:, layer]))
            m = np.asarray(core.mu(theta, n))
            v = np.asarray(core.sigma_sq(theta, n)) * cfg.variance_scale
            s = np.sqrt(v)
            live = (s > 0) & np.isfinite(m)
            p = np.ones(count)
            p[live] = special.ndtr(-m[live] / s[live])
            step = m.copy()
            step[live] = m[live] + s[live] * special.ndtri(u[layer, live] * p[live])
            x[:, layer + 1] = np.minimum(step, 0.0)
            var[:, layer + 1] = np.where(np.isfinite(m), v, 0.0)
            trunc[:, layer + 1] = 1.0 - p
    return x, var, trunc


def sample_gaussian_chain(arch: Architecture, theta0: float, cfg: GaussianChainConfig) -> ChainSamples:
    """Draw ``cfg.num_samples`` independent paths of the Gaussian chain.

    Draws that would land at ``x > 0`` are excluded by sampling the normal
    truncated to ``x <= 0`` (inverse CDF of the truncated law), which is the
    same distribution as rejecting and redrawing. Sample ``i`` depends only on
    ``(seed, i)``.
    """
    theta0 = _initial_state(theta0)
    n_blocks = -(-cfg.num_samples // CHAIN_BLOCK)

    def run(block):
        count = min(CHAIN_BLOCK, cfg.num_samples - block * CHAIN_BLOCK)
        return _chain_block(arch, theta0, cfg, block, count)

    parts = streams.map_blocks(run, n_blocks, cfg.threads)
    x = np.concatenate([p[0] for p in parts])
    var = np.concatenate([p[1] for p in parts])
    trunc = np.concatenate([p[2] for p in parts])
    return ChainSamples(x, var, trunc.mean(axis=0))


def _normal_density(arch, theta0, grid):
    theta0 = _initial_state(theta0)
    n = arch.hidden_widths[0]
    if theta0 == np.pi:
        return np.zeros_like(grid)
    m = core.mu(theta0, n)
    s = np.sqrt(core.sigma_sq(theta0, n))
    if s == 0 or not np.isfinite(m):
        return np.zeros_like(grid)
    pdf = stats.norm.pdf(grid, loc=m, scale=s) / special.ndtr(-m / s)
    return np.where(grid <= 0, pdf, 0.0)


def predicted_density(
    arch: Architecture,
    theta0: float,
    layer: int,
    grid,
    cfg: GaussianChainConfig | None = None,
    exact_first_layer: bool = False,
) -> np.ndarray:
    """Density of ``x`` at ``layer`` under the Gaussian chain, on ``grid``.

    Estimated with a Gaussian kernel density (Silverman bandwidth) over
    chain samples. With ``exact_first_layer`` the one-step truncated normal
    is returned directly for ``layer == 1``.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    if not 1 <= layer <= arch.depth:
        raise DomainError(f"layer must lie in [1, {arch.depth}]")
    if layer == 1 and exact_first_layer:
        return _normal_density(arch, theta0, grid)
    cfg = cfg or GaussianChainConfig(num_samples=20000)
    samples = sample_gaussian_chain(arch.truncated(layer), theta0, cfg).x[:, layer]
    samples = samples[np.isfinite(samples)]
    if samples.size < 2 or np.ptp(samples) == 0:
        raise DomainError("the chain is degenerate at this layer; no density exists")
    kde = stats.gaussian_kde(samples, bw_method="silverman")
    return kde(grid)
