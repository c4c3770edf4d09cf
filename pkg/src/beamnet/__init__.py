"""Coverage, spatial throughput and transmission capacity of directional
Poisson networks with antenna orientation error."""

from .capacity import (BeamwidthOptimum, OutageConstraint, ThroughputResult,
                       optimize_beamwidth, tc_beamwidth_maximizer, tc_gain,
                       tc_numeric, tc_omni, tc_sector_noside, throughput,
                       tp_gain, tp_numeric, tp_omni, tp_sector_noside,
                       transmission_capacity)
from .error_models import (DimpleError, OrientationErrorModel,
                           TruncatedExponentialError, TruncatedHalfNormalError,
                           UniformError, ZeroError, is_concave_cdf, make_error)
from .estimator import SuccessProbability
from .exceptions import (BeamnetError, BracketError, ConfigError, DomainError,
                         NoRoot, NonConcaveWarning, QuadratureNotConverged,
                         WrongPattern)
from .gains import (DiscreteGainLaw, GainMoments, interferer_moment,
                    sector_gain_laws, typical_gain_expectation)
from .link_analysis import (NetworkParams, SuccessCurve, kappa, success_general,
                            success_omni, success_sector, success_sector_noside)
from .patterns import (RadiationPattern, ideal_sector, make_pattern, omni,
                       solve_g1_3gpp, threegpp_sector, transition_sector)
from .simulate import SimConfig, SimEstimate, simulate_success

__version__ = "0.1.0"
