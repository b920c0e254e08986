"""Reference values for the W-family example at e^2 = 2/3, f^2 = 1/6.

These are inputs and comparison targets, not results computed here.
"""
import numpy as np

F2 = 1.0 / 6.0
E2 = 2.0 / 3.0

# closest-state parameters chosen for the inverse stationarity construction
SIGMA_XYZ = (0.4875473233, 0.1286406856, 0.2953073521)

# rho_AB^a - rho_AB(2/3, 1/6), printed to three significant digits
PERTURBATION = 1e-10 * np.array([
    [0.672, 0.0, 0.0, 1.32],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, -1.67, 0.0],
    [1.32, 0.0, 0.0, 0.995],
])

ES_RHO_A = 0.354761489848
ES_UNCERTAINTY = 3.1e-8
BALANCE_PREDICTION = 0.3167
