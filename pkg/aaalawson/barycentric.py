"""
Rational functions in barycentric form

    r(z) = sum_k alpha_k / (z - t_k)  /  sum_k beta_k / (z - t_k)

with n+1 distinct support points t_k.  In interpolatory mode alpha = f * beta
and r(t_k) = f_k; in alpha-beta mode alpha and beta are independent.
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg
from numpy.polynomial import polynomial as P

from aaalawson import array_util, numerics
from aaalawson.errors import (ConsistencyError, InputError, UndefinedWindingError,
        UnresolvedWindingError)

logger = logging.getLogger(__name__)

INTERPOLATORY = 'interpolatory'
ALPHA_BETA = 'alpha_beta'
MODES = (INTERPOLATORY, ALPHA_BETA)

# a computed pole this close (relative) to a support point with zero beta is
# treated as sitting exactly on it
CONFLUENT_TOL = 1e-12

# winding numbers need every sample error above this fraction of the maximum
WINDING_FLOOR = 1e-3


class PointAtInfinity:
    """
    The value of r at a pole.  A single instance, `INFINITY`, exists.
    """
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'INFINITY'

    def __abs__(self):
        return float('inf')


INFINITY = PointAtInfinity()


@dataclass(frozen=True, eq=False)
class BarycentricRational:
    support_points: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    mode: str = ALPHA_BETA
    # interpolation values f_k, interpolatory mode only
    values: np.ndarray = None

    def __post_init__(self):
        t = array_util.as_complex_vector(self.support_points, 'support_points')
        alpha = array_util.as_complex_vector(self.alpha, 'alpha')
        beta = array_util.as_complex_vector(self.beta, 'beta')
        if not (len(t) == len(alpha) == len(beta)) or len(t) == 0:
            raise InputError(
                f'support_points, alpha and beta must have equal nonzero length, '
                f'got {len(t)}, {len(alpha)}, {len(beta)}')
        if len(np.unique(t)) != len(t):
            raise InputError('support points must be pairwise distinct')
        if not np.any(beta != 0):
            raise InputError('at least one beta_k must be nonzero')
        if self.mode not in MODES:
            raise InputError(f'mode must be one of {MODES}, got {self.mode!r}')
        values = None
        if self.mode == INTERPOLATORY:
            if self.values is None:
                raise InputError('interpolatory mode needs the interpolation values')
            values = array_util.as_complex_vector(self.values, 'values')
            if len(values) != len(t):
                raise InputError(
                    f'{len(values)} interpolation values for {len(t)} support points')
        for arr in (t, alpha, beta, values):
            if arr is not None:
                arr.flags.writeable = False
        object.__setattr__(self, 'support_points', t)
        object.__setattr__(self, 'alpha', alpha)
        object.__setattr__(self, 'beta', beta)
        object.__setattr__(self, 'values', values)

    @classmethod
    def interpolatory(cls, support_points, values, weights):
        """
        r with r(t_k) = values[k], alpha = values * weights, beta = weights
        """
        values = array_util.as_complex_vector(values, 'values')
        weights = array_util.as_complex_vector(weights, 'weights')
        return cls(support_points, values * weights, weights, INTERPOLATORY, values)

    def __call__(self, z):
        """
        Values of r at z; entries at poles are 0, see `evaluate_array`
        """
        return evaluate_array(self, z).values

    @property
    def degree(self):
        return len(self.support_points) - 1

    @property
    def gamma(self):
        return np.concatenate((self.alpha, self.beta))

    def to_alpha_beta(self):
        if self.mode == ALPHA_BETA:
            return self
        return BarycentricRational(self.support_points, self.alpha, self.beta, ALPHA_BETA)

    def scaled(self, c):
        """
        Same function with alpha and beta both multiplied by c
        """
        if self.mode == INTERPOLATORY:
            return BarycentricRational(self.support_points, c * self.alpha,
                    c * self.beta, INTERPOLATORY, self.values)
        return BarycentricRational(self.support_points, c * self.alpha, c * self.beta)

    def to_dict(self):
        data = {
                'degree': self.degree,
                'support_points': array_util.to_pairs(self.support_points),
                'alpha': array_util.to_pairs(self.alpha),
                'beta': array_util.to_pairs(self.beta),
                'mode': self.mode
                }
        if self.values is not None:
            data['values'] = array_util.to_pairs(self.values)
        return data

    @classmethod
    def from_dict(cls, data):
        try:
            t = array_util.from_pairs(data['support_points'], 'support_points')
            alpha = array_util.from_pairs(data['alpha'], 'alpha')
            beta = array_util.from_pairs(data['beta'], 'beta')
            mode = data.get('mode', ALPHA_BETA)
        except KeyError as ex:
            raise InputError(f'BarycentricRational JSON is missing key {ex}')
        values = data.get('values')
        if values is not None:
            values = array_util.from_pairs(values, 'values')
        r = cls(t, alpha, beta, mode, values)
        if 'degree' in data and data['degree'] != r.degree:
            raise InputError(
                f'degree {data["degree"]} does not match {len(t)} support points')
        return r


class Evaluation(NamedTuple):
    values: np.ndarray
    # r has a pole here; the value slot holds 0
    at_infinity: np.ndarray
    # z = t_k with alpha_k = beta_k = 0, evaluated from the reduced sums
    degenerate: np.ndarray


class PoleReport(NamedTuple):
    poles: np.ndarray
    residues: np.ndarray
    zeros: np.ndarray
    # poles snapped onto a support point with beta_k = 0
    confluent: np.ndarray


def partial_fraction_sums(z, support_points, alpha, beta):
    """
    Numerator and denominator sums of the barycentric quotient at each z.
    Terms with z == t_k are left out of both sums; `hit[j, k]` marks them.
    """
    diff = z[:, None] - support_points[None, :]
    hit = diff == 0
    with np.errstate(divide='ignore', invalid='ignore'):
        cauchy = np.where(hit, 0, 1 / diff)
    num = (cauchy * alpha).sum(axis=1)
    den = (cauchy * beta).sum(axis=1)
    return num, den, hit


def evaluate_array(r, z):
    """
    Evaluate r at every point of `z`, which may be any shape.
    """
    z = np.asarray(z, dtype=np.complex128)
    shape = z.shape
    zf = z.ravel()
    num, den, hit = partial_fraction_sums(zf, r.support_points, r.alpha, r.beta)

    values = np.zeros(zf.shape, dtype=np.complex128)
    at_infinity = np.zeros(zf.shape, dtype=bool)
    degenerate = np.zeros(zf.shape, dtype=bool)

    special = hit.any(axis=1)
    ordinary = ~special
    with np.errstate(divide='ignore', invalid='ignore'):
        quotient = num / den
    good = ordinary & (den != 0)
    values[good] = quotient[good]
    at_infinity[ordinary & (den == 0)] = True

    for j in np.flatnonzero(special):
        k = int(np.argmax(hit[j]))
        a, b = r.alpha[k], r.beta[k]
        if b != 0:
            values[j] = r.values[k] if r.mode == INTERPOLATORY else a / b
        elif a != 0:
            at_infinity[j] = True
        else:
            degenerate[j] = True
            if den[j] != 0:
                values[j] = num[j] / den[j]
            else:
                at_infinity[j] = True

    if degenerate.any():
        logger.debug(f'{int(degenerate.sum())} evaluations at support points '
                f'with alpha_k = beta_k = 0')
    return Evaluation(values.reshape(shape), at_infinity.reshape(shape),
            degenerate.reshape(shape))


def evaluate(r, z):
    """
    r(z) for a single point z.  Returns INFINITY at a pole.
    """
    ev = evaluate_array(r, np.array([z], dtype=np.complex128))
    if ev.at_infinity[0]:
        return INFINITY
    return complex(ev.values[0])


def node_polynomial(support_points):
    """
    Ascending coefficients of the monic polynomial prod_k (z - t_k)
    """
    t = array_util.as_complex_vector(support_points, 'support_points')
    return P.polyfromroots(t).astype(np.complex128)


def _basis_matrix(t):
    # column k holds the ascending coefficients of prod_{j != k} (z - t_j)
    n1 = len(t)
    basis = np.zeros((n1, n1), dtype=np.complex128)
    for k in range(n1):
        basis[:, k] = P.polyfromroots(np.delete(t, k))
    return basis


def _trim(coeffs, name):
    c = array_util.as_complex_vector(coeffs, name)
    nz = np.flatnonzero(c)
    if len(nz) == 0:
        return c[:1] * 0
    return c[:nz[-1] + 1]


def from_quotient(p_coeffs, q_coeffs, support_points):
    """
    Barycentric coefficients of p/q on the given support points.
    Coefficients are in ascending order.  alpha and beta solve p = n*l and
    q = d*l where l is the node polynomial.
    """
    t = array_util.as_complex_vector(support_points, 'support_points')
    if len(np.unique(t)) != len(t):
        raise InputError('support points must be pairwise distinct')
    n = len(t) - 1
    p = _trim(p_coeffs, 'p_coeffs')
    q = _trim(q_coeffs, 'q_coeffs')
    if not np.any(q != 0):
        raise InputError('q must not be identically zero')
    if len(p) - 1 > n or len(q) - 1 > n:
        raise InputError(
            f'deg p = {len(p) - 1}, deg q = {len(q) - 1} exceed n = {n} '
            f'for {n + 1} support points')
    rhs = np.zeros((n + 1, 2), dtype=np.complex128)
    rhs[:len(p), 0] = p
    rhs[:len(q), 1] = q
    try:
        lu = scipy.linalg.lu_factor(_basis_matrix(t))
        sol = scipy.linalg.lu_solve(lu, rhs)
    except (np.linalg.LinAlgError, ValueError) as ex:
        raise ConsistencyError(f'from_quotient: singular basis system: {ex}')
    if not np.all(np.isfinite(sol)):
        raise ConsistencyError('from_quotient: singular basis system')
    return BarycentricRational(t, sol[:, 0], sol[:, 1], ALPHA_BETA)


def to_quotient(r):
    """
    Ascending coefficients (p, q) with r = p/q, p = n*l, q = d*l
    """
    basis = _basis_matrix(r.support_points)
    return basis @ r.alpha, basis @ r.beta


def _pencil_roots(t, coeffs):
    # roots of sum_k c_k prod_{j != k} (z - t_j) from the arrowhead pencil
    m = len(t) + 1
    A = np.zeros((m, m), dtype=np.complex128)
    A[0, 1:] = coeffs
    A[1:, 0] = 1
    A[1:, 1:] = np.diag(t)
    B = np.eye(m, dtype=np.complex128)
    B[0, 0] = 0
    eig = numerics.generalized_eigenvalues(A, B)
    if eig.infinite != 2:
        logger.debug(f'arrowhead pencil had {eig.infinite} infinite eigenvalues')
    return eig.finite


def poles(r):
    """
    Poles with residues, and zeros, of r.
    """
    t = r.support_points
    pol = _pencil_roots(t, r.beta)
    zer = _pencil_roots(t, r.alpha) if np.any(r.alpha != 0) else np.zeros(0, complex)

    scale = np.abs(r.beta).max()
    residues = np.zeros(len(pol), dtype=np.complex128)
    confluent = np.zeros(len(pol), dtype=bool)
    for i, p in enumerate(pol):
        dist = np.abs(p - t)
        k = int(np.argmin(dist))
        if (dist[k] <= CONFLUENT_TOL * max(1.0, abs(t[k])) and
                abs(r.beta[k]) <= CONFLUENT_TOL * scale):
            # r = (alpha_k + (z - t_k) N_k) / ((z - t_k) D_k) near t_k
            confluent[i] = True
            pol[i] = t[k]
            keep = np.arange(len(t)) != k
            d_reduced = np.sum(r.beta[keep] / (t[k] - t[keep]))
            residues[i] = r.alpha[k] / d_reduced if d_reduced != 0 else np.nan
            continue
        inv = 1 / (p - t)
        num = np.sum(r.alpha * inv)
        dprime = -np.sum(r.beta * inv ** 2)
        residues[i] = num / dprime
    return PoleReport(pol, residues, zer, confluent)


def max_error(r, samples):
    """
    Returns (max, argmax, errors) with errors = f - r(z) over the samples.
    argmax is the smallest index attaining the max; max is inf at a pole.
    """
    ev = evaluate_array(r, samples.points)
    errors = samples.values - ev.values
    errors[ev.at_infinity] = np.inf
    mags = np.abs(errors)
    argmax = int(np.argmax(mags))
    return float(mags[argmax]), argmax, errors


def winding_number(errors):
    """
    Winding number about 0 of the closed curve traced by `errors` in order.
    """
    e = np.asarray(errors, dtype=np.complex128)
    if len(e) < 2 or not np.all(np.isfinite(e)):
        raise UndefinedWindingError('winding number needs >= 2 finite error samples')
    mags = np.abs(e)
    floor = WINDING_FLOOR * mags.max()
    small = np.flatnonzero(mags <= floor)
    if len(small) > 0:
        raise UndefinedWindingError(
            f'{len(small)} error samples are within {WINDING_FLOOR} of zero relative '
            f'to the maximum, first at index {small[0]}')
    steps = np.angle(np.roll(e, -1) / e)
    jumps = np.flatnonzero(np.abs(steps) >= np.pi)
    if len(jumps) > 0:
        raise UnresolvedWindingError(
            f'phase jump of pi between samples {jumps[0]} and {(jumps[0] + 1) % len(e)}; '
            f'the curve is too coarsely sampled')
    return int(np.rint(steps.sum() / (2 * np.pi)))
