from core.numerics.special_functions import (
    bessel_i0,
    bessel_i1,
    lambert_w0,
    lambert_w0_of_exp,
    scaled_bessel_i0,
    scaled_bessel_i1,
)
from core.numerics.gaussian_sampler import GaussianSpec, gaussian_sample
from core.numerics.seeding import derive_seed, rng_for

__all__ = [
    "GaussianSpec",
    "bessel_i0",
    "bessel_i1",
    "derive_seed",
    "gaussian_sample",
    "lambert_w0",
    "lambert_w0_of_exp",
    "rng_for",
    "scaled_bessel_i0",
    "scaled_bessel_i1",
]
