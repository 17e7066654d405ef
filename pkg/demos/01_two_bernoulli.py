"""Two correlated coin flips, solved twice.

Both inputs are fair coins with P(X1 = X2 = 1) = 0.3, so they agree more
often than independent coins would. We decompose a model on this law with
the general solver and with the hand-derived closed form, then look at the
angle between the two marginal spaces that controls how oblique the
decomposition is.
"""

import numpy as np

from hoeffding import (
    BernoulliPair,
    bernoulli_pmf,
    build_component_subspaces,
    closed_form_decomposition,
    decompose,
    feshchenko_matrix,
    friedrichs_angle,
    validate_pmf,
)
from hoeffding.lattice import label

pair = BernoulliPair(q1=0.5, q2=0.5, rho=0.3)
support = validate_pmf(bernoulli_pmf(pair))
print("cell weights (00, 01, 10, 11):", pair.weights)

# With binary inputs the cosine of the Friedrichs angle is the absolute Pearson correlation.
print("cos Friedrichs angle between L2(X1) and L2(X2):", friedrichs_angle(support, 0b01, 0b10))
delta = feshchenko_matrix(support)
print("smallest eigenvalue of the Feshchenko matrix:", delta.min_eigenvalue)

g = np.array([1.0, -0.5, 2.0, 0.3])
general = decompose(build_component_subspaces(support), g)
closed = closed_form_decomposition(pair, g)
print("\ncomponent   general solver                        closed form")
for a in range(4):
    print(f"{label(a):<10}  {np.array2string(general[a], precision=6):<36}  "
          f"{np.array2string(closed.components[a], precision=6)}")

# Main effects are not orthogonal to each other, only to the constant.
p = support.p
print("\nE[G_1] =", np.sum(p * general[1]), " E[G_1 G_2] =", np.sum(p * general[1] * general[2]))
print("E[G_12 G_1] =", np.sum(p * general[3] * general[1]), "(hierarchical orthogonality)")
