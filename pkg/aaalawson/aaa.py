import logging
from dataclasses import dataclass, field

import numpy as np

from aaalawson import array_util, barycentric, numerics
from aaalawson.errors import InputError, InsufficientSamplesError

logger = logging.getLogger(__name__)

# stop placing support points once max error <= EXACT_TOL * max|F|
EXACT_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class SampleSet:
    points: np.ndarray
    values: np.ndarray
    # point order traces a closed contour
    closed_curve: bool = False

    def __post_init__(self):
        z = array_util.as_complex_vector(self.points, 'points')
        f = array_util.as_complex_vector(self.values, 'values')
        if len(z) == 0 or len(z) != len(f):
            raise InputError(
                f'need M >= 1 points with one value each, got {len(z)} points '
                f'and {len(f)} values')
        if len(np.unique(z)) != len(z):
            uniq, counts = np.unique(z, return_counts=True)
            raise InputError(
                f'sample points must be distinct; duplicated: {uniq[counts > 1][:5].tolist()}')
        z.flags.writeable = False
        f.flags.writeable = False
        object.__setattr__(self, 'points', z)
        object.__setattr__(self, 'values', f)
        object.__setattr__(self, 'closed_curve', bool(self.closed_curve))

    @property
    def M(self):
        return len(self.points)

    @classmethod
    def from_function(cls, grid, f):
        """
        Sample f on the points of a domains.Grid
        """
        values = np.asarray(f(grid.points), dtype=np.complex128)
        if values.shape != grid.points.shape:
            values = np.broadcast_to(values, grid.points.shape)
        bad = np.flatnonzero(~np.isfinite(values))
        if len(bad) > 0:
            raise InputError(
                f'function is not finite at {len(bad)} grid points, first at '
                f'z = {grid.points[bad[0]]}')
        return cls(grid.points, values, grid.closed_curve)

    def to_dict(self):
        return {
                'points': array_util.to_pairs(self.points),
                'values': array_util.to_pairs(self.values),
                'closed_curve': self.closed_curve
                }

    @classmethod
    def from_dict(cls, data):
        try:
            points = array_util.from_pairs(data['points'], 'points')
            values = array_util.from_pairs(data['values'], 'values')
        except KeyError as ex:
            raise InputError(f'SampleSet JSON is missing key {ex}')
        return cls(points, values, data.get('closed_curve', False))


@dataclass
class AaaStep:
    support_index: int
    max_error: float


@dataclass
class AaaTrace:
    steps: list = field(default_factory=list)
    # all samples were matched before degree+1 support points were placed
    early_exact: bool = False

    @property
    def support_indices(self):
        return [s.support_index for s in self.steps]

    @property
    def errors(self):
        return [s.max_error for s in self.steps]


def loewner_matrix(samples, support_indices, support_values):
    """
    (M - m) x m matrix of divided differences (f_j - f_k) / (z_j - t_k) over the
    non-support rows j (in sample order) and the support columns k.
    """
    idx = np.asarray(support_indices, dtype=int)
    fj = array_util.as_complex_vector(support_values, 'support_values')
    if len(np.unique(idx)) != len(idx) or np.any((idx < 0) | (idx >= samples.M)):
        raise InputError(f'invalid support indices {idx.tolist()} for M = {samples.M}')
    if len(fj) != len(idx):
        raise InputError(f'{len(fj)} support values for {len(idx)} support indices')
    rows = np.ones(samples.M, dtype=bool)
    rows[idx] = False
    Z = samples.points[rows]
    F = samples.values[rows]
    t = samples.points[idx]
    return (F[:, None] - fj[None, :]) / (Z[:, None] - t[None, :])


def aaa_fit(samples, degree):
    """
    Place degree+1 support points greedily and return (r0, trace) with r0 the
    interpolatory AAA approximant.
    """
    n = int(degree)
    if n < 0:
        raise InputError(f'degree must be >= 0, got {degree}')
    M = samples.M
    if M < 2 * n + 2:
        raise InsufficientSamplesError(
            f'degree {n} needs at least {2 * n + 2} samples, got {M}')

    F = samples.values
    tol = EXACT_TOL * np.abs(F).max()
    # residual of the current approximant, the mean of F to begin with
    errors = F - F.mean()
    support = []
    trace = AaaTrace()
    r0 = None

    for m in range(n + 1):
        err = np.abs(errors)
        err[support] = -1.0
        j = int(np.argmax(err))
        support.append(j)

        fj = F[support]
        weights, _ = numerics.smallest_singular_vector(loewner_matrix(samples, support, fj))
        r0 = barycentric.BarycentricRational.interpolatory(samples.points[support], fj, weights)

        maxerr, _, errors = barycentric.max_error(r0, samples)
        trace.steps.append(AaaStep(j, maxerr))
        logger.info(f'AAA step {m}: support index {j}, max error {maxerr:.6e}')

        if maxerr <= tol and m < n:
            trace.early_exact = True
            logger.warning(
                f'AAA matched all {M} samples with {m + 1} support points; '
                f'the data is rational of degree < {n}')
            break

    return r0, trace
