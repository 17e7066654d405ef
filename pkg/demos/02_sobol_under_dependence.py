"""Variance attribution when inputs are correlated.

Three inputs with mild dependence drive a model with one strong pairwise
interaction. The structural and correlative contributions split V[G(X)]
exactly; the pure interaction effects replay the model on independent inputs
with the same marginals; the dependence effects measure how much each
component moved because of the correlation.
"""

import numpy as np

from hoeffding import JointPmf, variance_report
from hoeffding.lattice import label

rng = np.random.default_rng(11)
shape = (2, 3, 2)
marginals = [np.array([0.4, 0.6]), np.array([0.2, 0.5, 0.3]), np.array([0.55, 0.45])]
product = np.einsum("i,j,k->ijk", *marginals)
weights = product * np.exp(0.4 * rng.normal(size=shape))
pmf = JointPmf.from_array(weights / weights.sum(), names=["load", "speed", "mode"])

x1, x2, x3 = np.meshgrid(np.arange(2), np.arange(3), np.arange(2), indexing="ij")
model = 1.0 * x1 + 0.5 * x2 + 2.0 * x1 * x3 - 0.3 * x2 * x3

report = variance_report(pmf, model)
print(f"V[G(X)] = {report.model_variance:.6f}")
print(f"sum of structural = {report.sum_structural:.6f}, sum of correlative = {report.sum_correlative:.6f}")
print(f"identity gap = {report.variance_identity_gap:.1e}\n")
print(f"{'subset':<9}{'dim':>4}{'structural':>13}{'correlative':>13}{'pure':>11}{'dependence':>13}")
for r in report.rows[1:]:
    print(f"{label(r.subset):<9}{r.dim:>4}{r.structural:>13.6f}{r.correlative:>13.6f}"
          f"{r.pure_interaction:>11.6f}{r.dependence_effect:>13.2e}")

# Same model, same marginals, independent inputs: the correlative and dependence columns vanish.
independent = variance_report(JointPmf.from_array(product, names=["load", "speed", "mode"]), model)
print("\nunder independence, max |correlative| =",
      max(abs(r.correlative) for r in independent.rows),
      " max dependence =", max(r.dependence_effect for r in independent.rows))
