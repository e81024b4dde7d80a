"""Relations in the tautological ring of M_{g,1} from the sl2 action on the universal Jacobian."""

from .poly import (
    DEFAULT_PRIMES,
    PSI,
    GenusContext,
    InvalidIndexPair,
    SparsePolynomial,
    VariableId,
    X,
    bigrade,
    make_variable,
    monomial,
    polynomial,
)
from .rings import QQ, PrimeField, RingMismatch
from .enumeration import column_zero_basis, enumerate_Mon, enumerate_mon_sources, phi
from .linalg import EliminationState, cross_check, rank_of
from .pushforward import column0_to_kappa, mg_dimension, p_to_kappa, q_pushforward
from .relations import GenerationPlan, generate_codim, relation_for
from .reports import DimensionReport, dims_report, mg_report
from .sl2 import apply_E, apply_F, apply_F_power, apply_H, generalized_binomial, ef_power_rhs

__version__ = "0.1.0"
