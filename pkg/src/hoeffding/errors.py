"""Exception hierarchy.

Three families map onto the command-line exit codes: malformed input (2),
failed admissibility checks (3) and numerical breakdown (4).
"""


class HoeffdingError(Exception):
    exit_code = 1


class InputError(HoeffdingError, ValueError):
    exit_code = 2


class NegativeWeight(InputError):
    pass


class SumNotOne(InputError):
    pass


class DegenerateMarginal(InputError):
    pass


class InadmissibleRho(InputError):
    pass


class CellNotInSupport(InputError):
    pass


class NotProductForm(InputError):
    pass


class AssumptionError(HoeffdingError):
    exit_code = 3


class Assumption1NotVerified(AssumptionError):
    pass


class Assumption2Failed(AssumptionError):
    pass


class StrictNestingFailed(AssumptionError):
    pass


class NumericalError(HoeffdingError, ArithmeticError):
    exit_code = 4


class DimensionMismatch(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass


class DegenerateTilde(NumericalError):
    """The model is constant under the independent copy of the inputs."""
