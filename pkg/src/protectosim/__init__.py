"""Protective measurement of a qubit coupled to a spin environment.

Two engines compute the qubit disturbance and the pointer distribution:

* :mod:`protectosim.exact` enumerates every branch of a finite spin bath;
* :mod:`protectosim.continuum` integrates over a Gaussian distribution of
  environment fields.

:mod:`protectosim.ensemble` samples noisy single-particle readouts and
:mod:`protectosim.planner` converts a Stern-Gerlach setup in SI units into
the dimensionless model.
"""

from .continuum import (
    GeneralQubitConfig,
    PointerMoments,
    SpectralDensity,
    general_qubit_map,
    p1_full,
    p1_weak,
    pointer_density,
    pointer_moments,
    spectral_density,
    zaxis_chi_expansion,
    zaxis_pointer_density,
    zaxis_pointer_mixture,
    zaxis_success_probability,
)
from .core import (
    EffectiveField,
    GaussianPointer,
    MeasurementGeometry,
    PointerMixture,
    disturbance_bound,
    effective_field,
    max_disturbance_bound,
    measurement_axis,
    pointer_shift,
    sin2_theta,
    wavepacket_overlap,
)
from .ensemble import EnsembleConfig, EnsembleReport, run_ensemble
from .exact import (
    Branch,
    BranchTable,
    DiscreteEnvironment,
    SpinDensity,
    branches,
    disturbance_probability,
    environment_eigenvalues,
    pointer_mixture,
    spin_density,
    uniform_superposition_amplitudes,
)
from .planner import ApparatusParams, PlanReport, plan

__version__ = "0.1.0"
