"""Laws the decomposition refuses, and one it handles despite a hole.

If one input copies another, their generated sigma-algebras share events
beyond the trivial ones and the decomposition is not unique. Near-copies pass
that test but push the Feshchenko matrix towards singularity. A missing cell
is fine as long as no input becomes a function of the others.
"""

import numpy as np

from hoeffding import (
    JointPmf,
    build_component_subspaces,
    check_admissibility,
    decompose,
    validate_pmf,
)
from hoeffding.errors import AssumptionError
from hoeffding.lattice import label


def describe(name, weights):
    support = validate_pmf(JointPmf.from_array(weights))
    rep = check_admissibility(support)
    a2 = "not evaluated" if rep.assumption2 is None else f"min eigenvalue {rep.assumption2.min_eigenvalue:.3e}"
    print(f"{name}: assumption 1 {'ok' if rep.assumption1.passed else 'violated'} "
          f"{[(label(a), label(b)) for a, b in rep.assumption1.violations]}, "
          f"strict nesting {'ok' if rep.strict_nesting.passed else 'fails'}, {a2}")
    return support


copied = describe("X2 = X1", [[0.5, 0.0], [0.0, 0.5]])
try:
    build_component_subspaces(copied)
except AssumptionError as exc:
    print("  refused:", type(exc).__name__)

eps = 1e-9
describe("X2 = X1 up to 1e-9", [[0.5 - eps, eps], [eps, 0.5 - eps]])

holed = describe("one empty cell", [[0.4, 0.0], [0.3, 0.3]])
bases = build_component_subspaces(holed)
print("  subspace dimensions:", {label(a): bases[a].dim for a in bases.subsets})
dec = decompose(bases, holed.restrict([[1.0, 99.0], [-2.0, 0.5]]))
print("  interaction component:", dec[3], "(three atoms leave no room for it)")
