"""Break one model evaluation into per-subset contributions.

The components of the orthocanonical decomposition are functions of the
inputs, so evaluating them at a single point splits G(x) into additive
pieces, one for each group of inputs.
"""

import numpy as np

from hoeffding import JointPmf, build_component_subspaces, decompose, evaluation_explanation, validate_pmf
from hoeffding.lattice import label

weights = np.array([
    [[0.05, 0.10], [0.08, 0.07], [0.06, 0.09]],
    [[0.10, 0.04], [0.07, 0.12], [0.11, 0.11]],
])
model = np.array([
    [[0.5, -1.0], [2.0, 0.0], [1.5, -0.5]],
    [[3.0, 1.0], [-2.0, 0.25], [0.75, 4.0]],
])
support = validate_pmf(JointPmf.from_array(weights))
dec = decompose(build_component_subspaces(support), support.restrict(model))

cell = (1, 2, 0)
parts = evaluation_explanation(dec, cell)
print(f"G{cell} = {model[cell]}")
for a, v in parts.items():
    print(f"  {label(a):<8} {v:+.6f}")
print(f"  {'sum':<8} {sum(parts.values()):+.6f}")
print("\nthe empty-set term is E[G(X)] =", float(np.sum(support.p * support.restrict(model))))
