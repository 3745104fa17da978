"""Numerical tools for position-dependent-mass quantum and classical oscillators.

The package discretises von Roos kinetic operators for any ordering of the
mass factors, applies the point canonical transformation
``q(x) = integral of sqrt(m)``, and checks that the symmetric ordering
``a = b = -1/4`` is the one for which the quantum Hamiltonian reduces to the
unit-mass oscillator in q, matching the classical picture.
"""

__version__ = "0.1.0"

from .classical import (
    PhaseState,
    Trajectory,
    classical_factorization_check,
    integrate,
    measure_period,
    qdot_conservation_check,
)
from .dual import Dual2
from .eigen import Spectrum, eigendecompose, residual_check
from .errors import (
    BoundaryError,
    ConstraintError,
    ConvergenceError,
    DomainError,
    DriftError,
    EscapeError,
    NoPeriodError,
    NumericalError,
    ParseError,
    PdmError,
    ValidationError,
)
from .grid import Grid
from .ladder import LadderPair, build_ladder, build_unit_mass_ladder, commutator_test, factorization_test
from .operator import (
    OrderingParams,
    TridiagonalOperator,
    apply_operator,
    build_von_roos,
    verify_pct_equivalence,
)
from .pct import PctMap, forward_map, inverse_map, map_wavefunction
from .potentials import (
    PotentialField,
    cruz_corrected_potential,
    effective_potential,
    oscillator_field,
    oscillator_potential,
    uniqueness_conditions,
    zero_field,
)
from .profiles import MassProfile, builtin, eval_mass, parse_profile, validate_profile
from .scan import ScanResult, ordering_scan, spectral_deviation
