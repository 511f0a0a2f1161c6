"""Cauchy transforms, free cumulants and free infinite divisibility tests.

The families covered are beta, beta prime, gamma, inverse gamma,
ultraspherical, Student-t and the Gaussian, plus a few reference laws
(semicircle, free Poisson, Cauchy, point masses) and their affine images.
"""
from .cumulants import (exact_moments, free_cumulants, hankel_det_sign,
                        hankel_fid_test, hankel_matrix, moments_from_cumulants,
                        nc_partition_cumulants, reversion_cumulants)
from .distributions import (Affine, Beta, BetaPrime, Cauchy, Distribution, Gamma,
                            Gaussian, InverseGamma, MarchenkoPastur, PointMass,
                            Semicircle, StudentT, Ultraspherical, affine, beta_a,
                            beta_prime_tilde, beta_tilde, dilate)
from .errors import FreeFidError
from .fid_analysis import (Anchor, classify_exponent, in_exponent_set, indicator_probe,
                           region_classifier, subordination_endpoint_test,
                           trace_real_level_curve, verify_condition)
from .hypergeom import hyp2f1
from .kernels import BACKEND
from .specstr import parse_spec
from .transforms import (G_cont, cauchy_G, cauchy_G_continued, cauchy_G_quad,
                         eta_transform, reciprocal_F, stieltjes_density, voiculescu_phi)
from .verdict import FidVerdict, Reason, Status

__version__ = "0.1.0"

__all__ = [
    "Affine", "Anchor", "BACKEND", "Beta", "BetaPrime", "Cauchy", "Distribution",
    "FidVerdict", "FreeFidError", "G_cont", "Gamma", "Gaussian", "InverseGamma",
    "MarchenkoPastur", "PointMass", "Reason", "Semicircle", "Status", "StudentT",
    "Ultraspherical", "affine", "beta_a", "beta_prime_tilde", "beta_tilde",
    "cauchy_G", "cauchy_G_continued", "cauchy_G_quad", "classify_exponent", "dilate",
    "eta_transform", "exact_moments", "free_cumulants", "hankel_det_sign",
    "hankel_fid_test", "hankel_matrix", "hyp2f1", "in_exponent_set",
    "indicator_probe", "moments_from_cumulants", "nc_partition_cumulants",
    "parse_spec", "reciprocal_F", "region_classifier", "reversion_cumulants",
    "stieltjes_density", "subordination_endpoint_test", "trace_real_level_curve",
    "verify_condition", "voiculescu_phi",
]
