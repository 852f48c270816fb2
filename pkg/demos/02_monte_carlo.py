"""
Monte Carlo check of the Gaussian chain
=======================================

Sample 5000 random networks with thirty layers of width 256, feed them two
inputs at angle 0.1 and measure the angle at every layer. Compare the
Monte Carlo mean and spread with the deterministic mean chain and with the Gaussian chain.
"""

import numpy as np

from depthdegen import Architecture, GaussianChainConfig, predict_finite, sample_gaussian_chain
from depthdegen.montecarlo import McConfig, run_monte_carlo
from depthdegen.svg import Plot

arch = Architecture(256, (256,) * 30)
theta0 = 0.1

# Replicas are keyed by (seed, replica index), so the result does not depend
# on how many threads run the simulation.
dists = run_monte_carlo(arch, McConfig(5000, seed=7, theta0=theta0))
pred = predict_finite(arch, theta0)
chain = sample_gaussian_chain(arch, theta0, GaussianChainConfig(20000, seed=7))

print(" layer   MC mean   predicted   MC std   chain std")
for d in dists[::5]:
    k = d.layer
    std = d.std if k else 0.0
    print(f"{k:6d} {d.mean:9.3f} {pred.x[k]:11.3f} {std:8.3f} {chain.layer_std()[k]:11.3f}")

layers = np.arange(31)
mean = np.array([d.mean for d in dists])
std = np.array([d.std if d.layer else 0.0 for d in dists])
plot = Plot("Monte Carlo vs Gaussian chain, width 256", "layer", "ln sin^2(theta)")
plot.line(layers, mean, "Monte Carlo", band=(mean - std, mean + std))
plot.line(layers, chain.layer_mean(), "Gaussian chain",
          band=(chain.layer_mean() - chain.layer_std(), chain.layer_mean() + chain.layer_std()))
plot.line(layers, pred.x, "mean chain")
with open("monte_carlo.svg", "w") as fh:
    fh.write(plot.render())
print("wrote monte_carlo.svg")
