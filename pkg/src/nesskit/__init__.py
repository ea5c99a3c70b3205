"""Correlation and entanglement measures for biased free fermions at an impurity.

Two independent pipelines for the steady-state measures between intervals
on opposite sides of a noninteracting impurity: exact spectral evaluation
of restricted Gaussian correlation matrices, and analytic leading-order
momentum integrals, plus the determinant and moment oracles tying them
together.
"""

from .asymptotics import (AsymptoticValue, BiasContext,
                          combined_entropy_asymptotic,
                          interval_entropy_asymptotic, mi_asymptotic,
                          mirror_entropy_asymptotic, negativity_asymptotic,
                          prmi_asymptotic, renyi_negativity_asymptotic,
                          rmi_asymptotic, zero_temperature_rmi_density)
from .core import (LatticeParams, ReservoirPair, ScatteringModel,
                   SubsystemPair, dispersion, fermi_dirac, fermi_momentum,
                   mirror_overlap_length, occupation_tilde, resonant_level,
                   tabulated_model)
from .correlation import (CorrelationMatrix, block_symbol_phi,
                          block_symbol_phi_gamma, build_restricted_matrix,
                          correlation_entry_exact, correlation_entry_longrange,
                          default_quadrature, mirror_symbol,
                          scattering_wavefunction)
from .measures import (MeasureSpec, MeasureValue, evaluate_measure,
                       fermionic_negativity, mutual_information,
                       negativity_transform, petz_renyi_mi, renyi_entropy,
                       renyi_mutual_information, renyi_negativity,
                       von_neumann_entropy)
from .oracles import (block_toeplitz_from_symbol, generalized_sw_check,
                      moment_decomposition_check, moment_trace,
                      single_interval_moment_asymptotic, szego_widom_density,
                      szego_widom_ladder, xn_yn_fuzz, xn_yn_identity)
from .quadrature import QuadratureSpec, adaptive_quad
from .sweep import RunConfig, SweepRow, emit_csv, run_sweep

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
