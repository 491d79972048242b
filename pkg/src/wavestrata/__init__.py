"""Structure-preserving spectral simulation of the weakly nonlinear wave equation.

Subpackages:

* :mod:`wavestrata.spectral` -- frequencies, grids, aliased convolution, norms;
* :mod:`wavestrata.integrator` -- the symplectic trigonometric integrator family;
* :mod:`wavestrata.resonance` -- interaction catalogue and step-size diagnostics;
* :mod:`wavestrata.mfe` -- modulated Fourier expansions and almost-invariants;
* :mod:`wavestrata.experiments` / :mod:`wavestrata.cli` -- scripted runs and CSV output.
"""

from .spectral import (
    EnergyProfile,
    RealityResidueWarning,
    WaveParams,
    WeightScheme,
    convolve,
    from_physical,
    make_params,
    mode_energies,
    sinc,
    to_physical,
    weighted_norm,
)
from .integrator import (
    BlowUpError,
    EnergyTrace,
    FilterPair,
    SpectralState,
    VelocitySingularError,
    builtin_filters,
    get_filter,
    make_single_mode_init,
    one_step,
    run,
    start_step,
    two_step,
    velocity,
)
from .resonance import (
    InteractionPair,
    MultiIndex,
    ResonanceReport,
    check_cfl,
    enumerate_setK,
    mu,
    nonres_margins,
    resonant_tau,
)
from .mfe import (
    AlmostInvariants,
    ConstructionError,
    ModulationTable,
    ResonantStepError,
    SlowPoly,
    almost_invariants,
    almost_invariants_alt,
    construct,
    defect,
    evaluate,
    evaluate_velocity,
    invariant_drift,
    m_weight,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
