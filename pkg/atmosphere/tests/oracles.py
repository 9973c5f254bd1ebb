"""
High-precision transcriptions used as test oracles.

Written independently of the production code, directly from the channel
formulas, and evaluated with mpmath at 40 digits.
"""

import mpmath

mpmath.mp.dps = 40


def elliptic_transmittance(x0, y0, theta1, theta2, chi, beam_waist, aperture, eta_m):
    mp = mpmath
    a = mp.mpf(aperture)
    w1 = mp.sqrt(mp.mpf(beam_waist) ** 2 * mp.exp(theta1))
    w2 = mp.sqrt(mp.mpf(beam_waist) ** 2 * mp.exp(theta2))

    def log_term(xi):
        return mp.log(
            2 * (1 - mp.exp(-a ** 2 * xi ** 2 / 2))
            / (1 - mp.exp(-a ** 2 * xi ** 2) * mp.besseli(0, a ** 2 * xi ** 2))
        )

    def shape(xi):
        return (
            2 * a ** 2 * xi ** 2
            * mp.exp(-a ** 2 * xi ** 2) * mp.besseli(1, a ** 2 * xi ** 2)
            / (1 - mp.exp(-a ** 2 * xi ** 2) * mp.besseli(0, a ** 2 * xi ** 2))
            / log_term(xi)
        )

    def scale(xi):
        return log_term(xi) ** (-1 / shape(xi))

    argument = (
        4 * a ** 2 / (w1 * w2)
        * mp.exp(a ** 2 / w1 ** 2 * (1 + 2 * mp.cos(chi) ** 2))
        * mp.exp(a ** 2 / w2 ** 2 * (1 + 2 * mp.sin(chi) ** 2))
    )
    w_eff = mp.sqrt(4 * a ** 2 / mp.lambertw(argument).real)

    gap = 1 / w1 - 1 / w2
    eta0 = (
        1
        - mp.besseli(0, a ** 2 * (1 / w1 ** 2 - 1 / w2 ** 2))
        * mp.exp(-a ** 2 * (1 / w1 ** 2 + 1 / w2 ** 2))
        - 2 * (1 - mp.exp(-a ** 2 / 2 * gap ** 2))
        * mp.exp(-(((w1 + w2) ** 2 / abs(w1 ** 2 - w2 ** 2)) / scale(gap)) ** shape(gap))
    )

    r0 = mp.sqrt(mp.mpf(x0) ** 2 + mp.mpf(y0) ** 2)
    xi = 2 / w_eff
    eta = eta0 * mp.exp(-((r0 / a) / scale(xi)) ** shape(xi))
    return float(eta_m * eta)


def shape_and_scale(z):
    """(lambda, R) at a^2 xi^2 = z for a unit aperture."""
    mp = mpmath
    z = mp.mpf(z)
    deficit = 1 - mp.exp(-z) * mp.besseli(0, z)
    log_term = mp.log(2 * (1 - mp.exp(-z / 2)) / deficit)
    shape = 2 * z * mp.exp(-z) * mp.besseli(1, z) / deficit / log_term
    return float(shape), float(log_term ** (-1 / shape))


def lognormal_density(eta, mu, sigma, eta_m):
    mp = mpmath
    normalization = mp.ncdf((mp.log(eta_m) + mu) / sigma)
    return (
        mp.exp(-(mp.log(eta) + mu) ** 2 / (2 * sigma ** 2))
        / (eta * normalization * sigma * mp.sqrt(2 * mp.pi))
    )


def lognormal_integral(weight, mu, sigma, eta_m, lower=0):
    """Integral of weight(eta) * density over [lower, eta_m], in log space."""
    mp = mpmath
    mu, sigma, eta_m = mp.mpf(mu), mp.mpf(sigma), mp.mpf(eta_m)

    def integrand(y):
        eta = mp.exp(y)
        return weight(eta) * lognormal_density(eta, mu, sigma, eta_m) * eta

    start = -mp.inf if lower == 0 else mp.log(lower)
    points = [start, mp.log(eta_m)]
    if start < -mu < mp.log(eta_m):
        points.insert(1, -mu)
    return float(mp.quad(integrand, points))
