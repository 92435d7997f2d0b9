"""Certification of fat covectors for canonical invariant connections on
homogeneous principal bundles, with exact rational root-data arithmetic
and numeric curvature oracles."""

from .coupling import (
    BlockReport,
    HomogeneousBundleInstance,
    InvariantTwoForm,
    bundle_instance,
    ce_closedness,
    coupling_form,
    instance_form,
    nondegenerate_and_top_power,
    shifted_coupling,
    verify_block_structure,
)
from .curvature import (
    CurvatureTensor,
    Frame,
    berger_check,
    constant_curvature,
    pinching_estimate,
    random_frames,
    random_pinched,
    twistor_fatness,
    twistor_form,
)
from .duality import DualPair, compare_fat_sets, dualize, standard_involution
from .errors import (
    CriteriaDisagree,
    DegenerateRestriction,
    DimensionMismatch,
    FatBundleError,
    InvolutionInvalid,
    IsotropyMismatch,
    NotCompact,
    OddDimension,
    ScaleFailure,
    TorusMismatch,
)
from .fatness import (
    FatnessCertificate,
    canonical_curvature,
    certify,
    certify_torus,
    fat_by_centralizer,
    fat_by_oracle,
    fatness_gram,
    isotropy_algebra,
    sample_rational_vectors,
)
from .liealg import (
    Covector,
    LieAlgebra,
    SubalgebraEmbedding,
    block_torus,
    bracket,
    build_algebra,
    covector_to_vector,
    killing_form,
    killing_signature,
    matrix_algebra,
    maximal_torus,
    reductive_split,
    so,
    so_block_embedding,
    so_pq,
    su,
    u_block_embedding,
    u_in_so,
    vector_to_covector,
)
from .rootdata import (
    RootSystem,
    SubSystem,
    build_root_system,
    detect_subsystem,
    fat_by_roots,
    find_centralizing_vector,
    find_fat_shift,
    fundamental_coweights,
    root_system_for,
    subsystem_from_members,
    verify_shift,
)
from .verdicts import FAT, NOT_APPLICABLE, NOT_FAT, Verdict

__version__ = "0.1.0"
