"""hp finite elements for the integral fractional Laplacian on (-1, 1).

Dense Galerkin assembly on geometrically graded meshes with degrees rising
linearly away from the endpoints; all singular pair integrals are reduced
to Gauss-Jacobi / Gauss-Legendre rules after removing the kernel
singularity analytically.  See the individual modules for the numerics:

* special      kernel constant, exact solution and energy for f = 1
* quadrature   Gauss-Legendre and Gauss-Jacobi rules on (0, 1)
* polynomials  Legendre, integrated-Legendre shapes, divided differences
* mesh         geometric meshes, basis bookkeeping, element pair classes
* assembly     the four singular-quadrature cases and blockwise assembly
* solver       dense Cholesky
* error        energy-error estimators and quadrature self-checks
* cli          experiment driver writing CSV
"""

from .assembly import (
    OpCounter,
    StiffnessMatrix,
    assemble_load,
    assemble_stiffness,
    q_adjacent,
    q_complement,
    q_identical,
    q_separated,
)
from .error import (
    ErrorReport,
    OracleError,
    elementwise_quadrature_error,
    error_method1,
    error_method2,
    error_method3,
    reference_pair_integral,
)
from .mesh import (
    COMPLEMENT,
    Bubble,
    Element,
    Hat,
    Mesh1D,
    PairClass,
    Space,
    build_space,
    element_map,
    geometric_mesh,
    mesh_from_nodes,
    pair_class,
    shape_regularity,
)
from .polynomials import (
    ShapeTable,
    integrated_legendre,
    legendre_values,
    shape_divided_differences,
    shape_table,
    shape_values,
)
from .quadrature import QuadratureRule, apply, apply_tensor, gauss_jacobi, gauss_legendre
from .solver import (
    DiscreteSolution,
    NotPositiveDefiniteError,
    cholesky_factor,
    cholesky_solve,
    energy,
)
from .special import exact_energy, exact_solution, gamma, kernel_constant

__version__ = "0.1.0"
