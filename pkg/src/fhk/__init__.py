"""Complex spherical harmonics on the unit sphere of C^q and the Funk-Hecke
formula for bizonal kernels."""

from .errors import (ConsistencyError, DegeneracyError, DomainError, EvaluationError,
                     FHKError, ParameterError, PreconditionError)
from .funk_hecke import (KernelSpec, apply_funk_hecke, ball_zonal_integral,
                         bizonal_sphere_integral, builtin_kernels, cylinder_orthogonality_check,
                         eigenvalue_cylinder, eigenvalue_disk, funk_hecke_residual,
                         predicted_funk_hecke, real_funk_hecke_eigenvalue)
from .harmonics import (HarmonicBasis, PolyZZbar, addition_formula_residual, harmonic_basis,
                        laplacian, solid_harmonic_basis)
from .quadrature import (QuadratureRule, ball_rule, circle_rule, cylinder_integral, cylinder_rule,
                         disk_rule_nu, frame_from_pole, integrate, sphere_rule)
from .special_poly import (ball_volume, disk_poly, gegenbauer_normalized, harmonic_dim,
                           jacobi_normalized, ortho_constant, sphere_area)
from .subsphere import SubsphereSpec, mean_value, subsphere_funk_hecke, subsphere_rule, upsilon

__version__ = "0.1.0"
