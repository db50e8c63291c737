"""Entangled atom-photon wave packets of spontaneous emission.

Closed-form coordinate and momentum packets, width estimators, the Schmidt
number and the width-ratio parameter ``R``, in units with ``c = gamma = 1``.
"""

__version__ = "0.1.0"

from .core import Params, eta_at, make_params, packet_width_a, time_at_eta
from .coordinate import (default_grid, entangled_argument, gaussian_model_amplitude_1d,
                         joint_density_1d, joint_density_3d, sample_density,
                         sample_gaussian_amplitude)
from .entanglement import (EntanglementReport, gaussian_schmidt_report,
                           hidden_entanglement_scan, r_parameter, schmidt_number_svd,
                           uncertainty_products)
from .exceptions import (DegenerateGridError, DomainError, EmptySliceError, NonConvergenceError,
                         SingularityError)
from .grid import AmplitudeGrid, DensityGrid, Grid2D
from .momentum import (momentum_amplitude_gauss, momentum_amplitude_lorentz,
                       sample_momentum_density)
from .widths import (WidthReport, analytic_coord_widths, analytic_momentum_widths,
                     check_reciprocity, conditional_width, marginal_width, numeric_widths,
                     standardized_width)
