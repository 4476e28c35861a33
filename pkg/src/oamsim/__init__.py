"""oamsim: OAM beam synthesis and analysis from antenna arrays.

Phasor convention everywhere: time dependence e^{+i omega t}, outgoing
propagation e^{-ikR}; all quantities SI.
"""

from .arrays import (ArrayElement, ArrayLayout, Excitation, Position3, SmartphoneSpec,
                     UcaSpec, build_smartphone_layout, build_uca, load_layout,
                     min_elements, save_layout, uca_azimuths)
from .channel import (CapacityReport, ChannelMatrix, LinkSpec, capacity,
                      channel_matrix, crosstalk_db, mode_channel)
from .errors import (AliasingError, ConfigError, DegenerateModeError, FitNotFoundError,
                     InvalidSpecError, OamSimError, SingularFieldError, SweepExhaustedError,
                     UndefinedPhaseError, UnsupportedModelError)
from .fields import (FieldMap, PlaneGrid, RingProbe, RingSamples, VectorFieldMap,
                     VectorRingSamples, compute_range, default_plane, default_ring,
                     extract_magnitude_map, extract_phase_map, peak_ring_radius, superpose)
from .modes import (MinElementsCriteria, ModeSpectrum, PurityReport, WindingResult,
                    find_min_elements_empirical, mode_decompose, orthogonality_integral,
                    purity, winding_number)
from .momentum import (ClosedSurface, FarSphereSpec, MomentumSample, angular_momentum_density,
                       maxwell_stress_avg, momentum_density, momentum_sample, oam_flux_ratio,
                       poynting_avg, sphere_surface, surface_force)
from .radiators import (DipoleFit, FiniteDipole, PointSource, RadiatorModel,
                        dipole_array_fields, dipole_far_pattern, eval_dipole_field,
                        eval_point_source, fit_dipole_length, point_source_array_field)
from .waves import C0, EPS0, ETA0, MU0, Wave, wrap_phase

__version__ = "0.1.0"
