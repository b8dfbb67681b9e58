"""Fidelity zeros and Lee-Yang finite-size scaling for quantum Ising models
under a complex transverse field."""

__version__ = "0.1.0"

from .analytic1d import (GroundState, ModeData, SectorSpectrum, bogoliubov_angle,
                         dispersion, fidelity_1d, ground_sector, real_gap,
                         sector_ground_energy, sector_momenta)
from .eigensolver import (EigenResult, SolverConfig, fidelity_numeric,
                          ground_by_sector, min_real_eigenpair)
from .errors import (DegenerateModeError, DimensionCapError, EmptyZeroSetError,
                     FidzeroError, FitError, ParityCommutationError, SolverError)
from .lattice import (SECTOR_EVEN, SECTOR_ODD, LatticeSpec, ModelParams,
                      SectorLabel, SparseOperator, build_hamiltonian,
                      parity_eigenvalue, sector_operator, sector_project)
from .scaling import (FitResult, ScalingSample, evaluate_model, fit_power_law,
                      fit_power_law_joint)
from .zerofinder import (AnalyticGapEvaluator, EDGapEvaluator, EdgeReport,
                         GapEvaluator, ZeroPoint, fidelity_edge,
                         find_zeros_on_circle, find_zeros_on_line,
                         refine_rightmost, scan_box, select_hL)
