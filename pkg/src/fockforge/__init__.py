"""Full Fock space operators, standard subspaces and maximal temperatures."""

from ._kernels import BACKEND
from .fock import (
    FockOperator,
    FockVector,
    TruncatedFockSpace,
    commutator_defect,
    conformal_hamiltonian_gibbs,
    field_d,
    field_s,
    flip,
    left_creation,
    right_creation,
    second_quantize,
    vacuum_moment,
)
from .oneparticle import LowestWeightIrrep, MoebiusElement, cayley, inverse_cayley, rotation_spectrum
from .standard_subspace import RealSubspace, is_standard, symplectic_complement, tomita
from .thermo import beta_max, multiplicities, partition_closed, partition_truncated, schatten_norm

__version__ = "0.1.0"
