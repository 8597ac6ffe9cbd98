"""qalg: exact operator algebra for qubit lattices.

Pauli strings with exact coefficients, second-quantized expressions for
parafermions (hard-core bosons), fermions and bosons, the string transform
between them, Lie-algebra closures with exact rank decisions, constant
excitation-number code subspaces, a battery of operator-identity checks,
and thermal occupation curves.
"""

__version__ = "0.1.0"

from .pauli import (
    OperatorSum,
    PauliTerm,
    Scalar,
    anticommutator,
    commutator,
    matrix_exponential,
    multiply,
    realize,
)
from .parafermion import (
    GeneratorIndex,
    SecondQuantizedExpr,
    SubalgebraVerdict,
    bilinear_su2,
    classify,
    enumerate_generators,
    number_operator,
    parity_operator,
    to_pauli,
)
from .jw import (
    TruncatedBosonSpace,
    boson_approx_commutator,
    compound_mapping_check,
    jw_fermion_to_pauli,
    string_operator,
    verify_car,
)
from .lie import (
    AlgebraVerdict,
    GeneratorSet,
    LieBasis,
    classify_algebra,
    close,
    close_on_subspace,
)
from .codes import (
    CodeSubspace,
    EncodedGate,
    build_code,
    encoded_cphase,
    encoded_generator,
    rate,
    synthesize_su_d,
)
from .thermal import ThermalParams, occupation
from .dsl import parse_expr, parse_script, print_expr
from .verifier import CHECKS, IdentityCheck, run_all

__all__ = [name for name in dir() if not name.startswith("_")]
