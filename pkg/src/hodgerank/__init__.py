"""Least-squares ranking on graphs via Hodge decomposition of clique complexes."""

from .complex import (Complex2, Graph, boundary_1, boundary_2, build_clique_complex,
                      edge_cochain, euler_characteristic, laplacian_0, laplacian_1,
                      laplacian_2, read_edge_list, write_edge_list)
from .exceptions import (ConvergenceError, DecompositionQualityError, DimensionError,
                         HodgeRankError, NumericalBreakdown, StructuralInputError)
from .generators import (ProblemInstance, gen_barabasi_albert, gen_erdos_renyi, gen_instance,
                         gen_special, gen_watts_strogatz)
from .krylov import SolveOptions, SolveReport, cg, lsqr, minres, schur_solve
from .ranking import (METHODS, HodgeResult, consistency_check, decompose, solve_curl,
                      solve_ranking)
from .sparse import Permutation, SparseMat
from .spectral import (SpectralSummary, cg_iteration_bound, extreme_eigs, lambda_max_bound,
                       special_lambda_min)
from .topology import betti, density_sweep, harmonic_fraction, kahle_thresholds

__version__ = "0.1.0"
