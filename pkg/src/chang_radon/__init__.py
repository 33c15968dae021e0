"""Weighted ray transforms and the Chang approximate inversion formula."""

from .errors import ConfigError, GeometryError, NoiseError, WeightDegenerate
from .exactness import ExactnessReport, check_exactness, make_odd_perturbed
from .geometry import (
    AngleSet,
    DetectorAxis,
    Grid2D,
    ProjectionGeometry,
    ScalarField,
    build_geometry,
    interpolate,
    line_point,
)
from .inversion import (
    backproject,
    chang_reconstruct,
    chang_reconstruct_sym,
    classical_fbp,
    hilbert_row,
    hilbert_row_direct,
    s_derivative_row,
)
from .metrics import Metrics, add_poisson_noise, compare
from .phantom import Ellipse, PhantomSpec, make_phantom
from .transforms import (
    Attenuated,
    ChangApprox,
    OddHarmonics,
    OddPerturbed,
    Sinogram,
    Symmetrized,
    Tabulated,
    Uniform,
    Weight,
    angular_mean,
    attenuated_weight,
    build_w_appr,
    divergent_beam,
    forward_project,
    symmetrize_sinogram,
    symmetrize_weight,
)

__version__ = "0.1.0"
