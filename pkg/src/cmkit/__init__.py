"""Exact graded commutative algebra over GF(p) and Q.

Groebner bases, free resolutions, Ext/Tor, Cohen-Macaulay approximation,
matrix factorizations with the Knorrer construction, and an obstruction
calculus for lifting modules along ring extensions.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .errors import CmkitError, ValidationError, ComputationLimit, ParseError
from .field import Field
from .ring import GradedRing, Poly, RingMap, tensor_ring
from .freemod import FreeModule, ModuleMap, Vec
from .modules import (
    PresentedModule,
    PModMap,
    HomModule,
    module_hom,
    hom_space_degree,
    kernel_of_map,
)
from .resolution import (
    FreeResolution,
    BettiTable,
    resolve,
    certify_resolution,
    depth,
    is_mcm,
    koszul_complex,
    syzygy_module,
)
from .homalg import (
    ExtSpace,
    ExtClass,
    ext,
    tor,
    ext_contra,
    ext_cov,
    canonical_module,
    omega_dual,
    extension_from_class,
    yoneda_class_of_extension,
)
from .cmapprox import (
    ApproxTriple,
    HullTriple,
    mcm_approx_cm,
    fid_hull,
    fundamental_module,
    maximal_ideal_module,
)
from .mf import (
    MatrixFactorization,
    knorrer,
    eisenbud_resolution,
    hypersurface_quotient,
    mf_from_module,
    knorrer_approx,
    mf_stats,
)
from .deform import (
    ArtinAlgebra,
    SmallExtension,
    ExtensionSquare,
    RingExtension,
    FamilyModule,
    ObstructionClass,
    Lifting,
    LiftResult,
    ring_extension,
    coefficient_extension,
    regular_quotient_extension,
    trivial_family,
    family_from_matrix,
    base_change_family,
    base_change_lifting,
    base_change_ob,
    obstruction,
    lift_module,
    torsor_act,
    lifting_difference,
    four_term_ob,
    ob_regular_quotient,
    splits_pibar,
    tangent_sigma,
    omap_check,
    omap_difference_check,
    ext_vanishing_report,
    bruteforce_liftings,
    bruteforce_lifting_exists,
)
