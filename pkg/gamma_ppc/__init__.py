"""gamma-ppc

Counting kernels, constructions and checks for inhomogeneous Poissonian pair correlations of
sequences mod 1: the statistic R₂(γ; s, N), exact overlap integrals of piecewise-constant
densities, the interleaved and doubled counterexample sequences, and a command line that runs
reproducible experiments and the exact invariant suite.
"""

# -*- coding: utf-8 -*-
from .counting import (ExactPairCounter, FloatPairCounter, PairCountResult, doubling_check, f_gamma_tail,
                       min_shifted_distance, r2_count, r2_count_exact, r2_count_fast, r2_count_naive,
                       r2_profile, thm4_decomposition)
from .density import (PiecewiseConstantDensity, density_overlap, expected_r2, theorem1_density,
                      theorem3_density)
from .distribution import EmpiricalDistribution, empirical_cdf, histogram_density, ks_density, ks_uniform
from .errors import ConfigValidationError, DensityError, PreconditionError
from .experiments import ExperimentConfig, ExperimentReport, cmd_r2, cmd_theorem, cmd_verify
from .sequences import (GeneratedSequence, SequenceSpec, dilated_sequence, sample_density,
                        thm3_grid_sets, thm3_interleaved, thm3_yz, thm4_doubled, van_der_corput)
from .torus import circle_distance, shifted_distance
from .__about__ import __short_version__, __description__, __release__

# report the public classes as gamma_ppc.X instead of their defining submodules
PairCountResult.__module__ = __name__
PiecewiseConstantDensity.__module__ = __name__
EmpiricalDistribution.__module__ = __name__
GeneratedSequence.__module__ = __name__
SequenceSpec.__module__ = __name__
ExperimentConfig.__module__ = __name__
ExperimentReport.__module__ = __name__

__all__ = [
    '__short_version__',
    '__description__',
    '__release__',
    'ConfigValidationError',
    'DensityError',
    'EmpiricalDistribution',
    'ExactPairCounter',
    'ExperimentConfig',
    'ExperimentReport',
    'FloatPairCounter',
    'GeneratedSequence',
    'PairCountResult',
    'PiecewiseConstantDensity',
    'PreconditionError',
    'SequenceSpec',
    'circle_distance',
    'cmd_r2',
    'cmd_theorem',
    'cmd_verify',
    'density_overlap',
    'dilated_sequence',
    'doubling_check',
    'empirical_cdf',
    'expected_r2',
    'f_gamma_tail',
    'histogram_density',
    'ks_density',
    'ks_uniform',
    'min_shifted_distance',
    'r2_count',
    'r2_count_exact',
    'r2_count_fast',
    'r2_count_naive',
    'r2_profile',
    'sample_density',
    'shifted_distance',
    'theorem1_density',
    'theorem3_density',
    'thm3_grid_sets',
    'thm3_interleaved',
    'thm3_yz',
    'thm4_decomposition',
    'thm4_doubled',
    'van_der_corput',
]
