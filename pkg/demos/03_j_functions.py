"""
Joint ReLU moments
==================

``J(a, b; theta)`` is the expectation of ``relu(G)^a relu(H)^b`` for standard
normals with correlation ``cos(theta)``. ``J(1, 1)`` gives the infinite-width
angle map in closed form; the higher orders feed the width corrections.
"""

import numpy as np

from depthdegen.jfunctions import j11_closed, j_monte_carlo, j_numeric

# Quadrature against the closed form.
for theta in (0.0, 0.5, np.pi / 2, 3.0):
    print(f"theta = {theta:.3f}: J11 quadrature {j_numeric(1, 1, theta):.15f}"
          f"  closed form {j11_closed(theta):.15f}")

# Higher orders, with a plain Monte Carlo estimate for comparison.
rng = np.random.default_rng(0)
for a, b in ((2, 2), (1, 3), (4, 4)):
    est, se = j_monte_carlo(a, b, 1.0, 10**6, rng)
    print(f"J({a},{b}; 1.0) = {j_numeric(a, b, 1.0):.6f}   Monte Carlo {est:.6f} +- {se:.6f}")

# The infinite-width map: cos(theta') = 2 J11(theta).
theta = np.pi / 2
print(f"one infinite-width layer maps pi/2 to {np.arccos(2 * j_numeric(1, 1, theta)):.6f} rad")
