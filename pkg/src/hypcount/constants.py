"""Constants located once by verified runs at 128 bits and frozen here.

Each value is an empirical fixture, not a derived quantity; ``specfun-check``
prints them and the test suite asserts against them.
"""

# sqrt(t) |G(1/2 + it)| stays in [C1, C2] for t in [5, 500]; the limit is sqrt(pi/8)
G_WINDOW = (0.61, 0.63)

# Re G(1/2 + it) changes sign exactly once on (0, 1000], here; it is
# negative below and positive above
RE_G_ZERO = 0.995938433677775

# a_half(X, 1) / (sqrt(X) log X) for X in [1e2, 1e6]
A_HALF_WINDOW = (0.45, 0.75)

# psi_hat(tau) = 1/2 for the bundled mollifier
TAU = 4.07920009381906

# |d_t - approx| <= c t^(-3/2) on the transform grid
HUBER_APPROX_C = 0.5

# (1/X) int_X^{2X} E^2 <= c X log^2 X on the bundled group, X in {50, 100, 200}
MEAN_VALUE_C = 0.1

# N(X) on the bundled group
BOLZA_COUNTS = {10: 5, 25: 17, 50: 25, 100: 37, 200: 77, 400: 233, 800: 429}

# bundled group, zero-diagonal search at norm bound 2 cosh(8); a = d = 0 forces
# trace 0, and the surface group has no torsion
BOLZA_ZERO_DIAGONAL = False
