"""Geometry of the variety of real matrices of bounded rank.

Tangent and normal spaces of fixed-rank manifolds, tangent-cone membership
and projection, the orthographic retraction, and a randomized verification
harness.
"""

from .fixed_rank import (
    AdaptedFrame,
    SubspacePair,
    adapted_frame,
    contains_tensor_product,
    proj_normal,
    proj_tangent,
    tangent_dim,
)
from .linalg_core import (
    DEFAULT_TOL,
    SvdFactorization,
    TolerancePolicy,
    frobenius_inner,
    numerical_rank,
    orthogonal_complement,
    orthonormal_range_basis,
    svd,
    truncate_rank,
)
from .retraction import (
    BlockCoordinates,
    block_coordinates,
    direct_sum_rank_check,
    orthographic_retract,
    schur_complement,
)
from .tangent_cone import (
    ConeDecomposition,
    MembershipReport,
    decompose,
    membership,
    membership_grassmann,
    membership_kernel_frames,
    project_to_cone,
    sample_cone_element,
)

__version__ = "0.1.0"
