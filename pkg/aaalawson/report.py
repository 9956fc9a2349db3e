import logging
import os
import time
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.spatial

from aaalawson import aaa, array_util, barycentric, catalog, domains, lawson, numerics, util
from aaalawson.aaa import SampleSet
from aaalawson.barycentric import BarycentricRational
from aaalawson.errors import (DimensionError, InputError, NumericalFailure,
        UndefinedWindingError, UnresolvedWindingError)
from aaalawson.logger import HistoryLogger

logger = logging.getLogger(__name__)

FAILURE_CLASSES = ('coarse_grid', 'near_machine_precision', 'degeneracy', 'nonanalytic',
        'real_domain', 'oscillation')
FORMATS = ('json', 'error_csv', 'history_csv', 'svg', 'html', 'samples_csv')

# the AAA fit is already at rounding level relative to max|F|
MACHINE_PRECISION_TOL = 1e-12
# second smallest singular value within this factor of the smallest
DEGENERACY_RATIO = 4.0
OSCILLATION_WINDOW = 6


@dataclass
class ApproxReport:
    name: str
    degree: int
    M: int
    aaa_max_error: float
    lawson_max_error: float
    reverted: bool
    approximant: BarycentricRational
    samples: SampleSet
    poles: np.ndarray
    residues: np.ndarray
    zeros: np.ndarray
    winding: int = None
    # reason the winding number is missing on a closed curve
    winding_note: str = None
    history: list = field(default_factory=list)
    aaa_support_indices: list = field(default_factory=list)
    aaa_errors: list = field(default_factory=list)
    early_exact: bool = False
    failure: str = None
    # max error of the same run one degree lower, when checked
    lower_degree_error: float = None
    nsteps: int = 0
    timings: dict = field(default_factory=dict)
    # [start, stop) of each domain piece
    slices: list = field(default_factory=list)

    def errors(self):
        _, _, errors = barycentric.max_error(self.approximant, self.samples)
        return errors

    def to_dict(self):
        return {
                'name': self.name,
                'degree': self.degree,
                'M': self.M,
                'aaa_max_error': self.aaa_max_error,
                'lawson_max_error': self.lawson_max_error,
                'reverted': self.reverted,
                'approximant': self.approximant.to_dict(),
                'samples': self.samples.to_dict(),
                'poles': array_util.to_pairs(self.poles),
                'residues': array_util.to_pairs(self.residues),
                'zeros': array_util.to_pairs(self.zeros),
                'winding': self.winding,
                'winding_note': self.winding_note,
                'history': list(self.history),
                'aaa_support_indices': list(self.aaa_support_indices),
                'aaa_errors': list(self.aaa_errors),
                'early_exact': self.early_exact,
                'failure': self.failure,
                'lower_degree_error': self.lower_degree_error,
                'nsteps': self.nsteps,
                'timings': dict(self.timings),
                'slices': [list(s) for s in self.slices],
                }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(
                    name=data['name'],
                    degree=int(data['degree']),
                    M=int(data['M']),
                    aaa_max_error=float(data['aaa_max_error']),
                    lawson_max_error=float(data['lawson_max_error']),
                    reverted=bool(data['reverted']),
                    approximant=BarycentricRational.from_dict(data['approximant']),
                    samples=SampleSet.from_dict(data['samples']),
                    poles=array_util.from_pairs(data['poles'], 'poles'),
                    residues=array_util.from_pairs(data['residues'], 'residues'),
                    zeros=array_util.from_pairs(data['zeros'], 'zeros'),
                    winding=data.get('winding'),
                    winding_note=data.get('winding_note'),
                    history=[float(h) for h in data.get('history', [])],
                    aaa_support_indices=list(data.get('aaa_support_indices', [])),
                    aaa_errors=[float(e) for e in data.get('aaa_errors', [])],
                    early_exact=bool(data.get('early_exact', False)),
                    failure=data.get('failure'),
                    lower_degree_error=_optional_float(data.get('lower_degree_error')),
                    nsteps=int(data.get('nsteps', 0)),
                    timings=dict(data.get('timings', {})),
                    slices=[tuple(s) for s in data.get('slices', [])],
                    )
        except KeyError as ex:
            raise InputError(f'ApproxReport JSON is missing key {ex}')


def _coarse_grid(points, poles):
    # some pole is nearer to a sample than that sample's nearest neighbor
    tree = scipy.spatial.cKDTree(np.column_stack((points.real, points.imag)))
    spacing, _ = tree.query(tree.data, k=2)
    dist, nearest = tree.query(np.column_stack((poles.real, poles.imag)))
    return bool(np.any(dist < spacing[nearest, 1]))


def _oscillates(history):
    h = np.asarray(history[-OSCILLATION_WINDOW:], dtype=np.float64)
    if len(h) < OSCILLATION_WINDOW or not np.all(np.isfinite(h)):
        return False
    d = np.diff(h)
    return bool(np.all(d[:-1] * d[1:] < 0))


def _degenerate(samples, r, state):
    if state.step == 0:
        return False
    idx = lawson.support_indices_of(samples, r.support_points)
    A = lawson.lawson_matrix(samples, r.support_points, idx, state.weights)
    s = numerics.singular_values(A)
    return bool(s[-2] < DEGENERACY_RATIO * s[-1])


def diagnose(samples, r, state, aaa_error, pole_report=None):
    """
    Classify a failed or reverted run; the first matching rule wins.
    """
    if aaa_error <= MACHINE_PRECISION_TOL * np.abs(samples.values).max():
        return 'near_machine_precision'
    if _oscillates(state.history):
        return 'oscillation'
    if _degenerate(samples, r, state):
        return 'degeneracy'
    pole_report = pole_report or barycentric.poles(r)
    if len(pole_report.poles) > 0 and samples.M > 1:
        if _coarse_grid(samples.points, pole_report.poles):
            return 'coarse_grid'
    if np.all(samples.points.imag == 0):
        return 'real_domain'
    return 'nonanalytic'


def _optional_float(x):
    return None if x is None else float(x)


def _lower_degree_error(samples, degree, config):
    r0, _ = aaa.aaa_fit(samples, degree - 1)
    r, _, _ = lawson.lawson_run(samples, r0, config)
    maxerr, _, _ = barycentric.max_error(r, samples)
    return maxerr


def run_samples(samples, degree, config=None, name='samples', slices=None,
        history_logger=None, check_degree=False):
    """
    Run AAA then Lawson on `samples` and assemble an ApproxReport.

    With check_degree, the run is repeated at degree - 1; a degree-n result
    that does not beat it is reported as failure 'degeneracy'.
    """
    config = config or lawson.LawsonConfig()
    timings = {}

    start = time.perf_counter()
    r0, trace = aaa.aaa_fit(samples, degree)
    timings['aaa'] = time.perf_counter() - start
    logger.info(f'{name}: AAA max error {trace.errors[-1]:.6e}')

    start = time.perf_counter()
    r, state, reverted = lawson.lawson_run(samples, r0, config, history_logger)
    timings['lawson'] = time.perf_counter() - start

    start = time.perf_counter()
    maxerr, _, errors = barycentric.max_error(r, samples)
    pole_report = barycentric.poles(r)
    timings['poles'] = time.perf_counter() - start
    aaa_err = trace.errors[-1]
    if reverted:
        maxerr = aaa_err
    logger.info(f'{name}: Lawson max error {maxerr:.6e} after {state.step} steps')

    winding, winding_note = None, None
    if samples.closed_curve:
        try:
            winding = barycentric.winding_number(errors)
        except (UndefinedWindingError, UnresolvedWindingError) as ex:
            winding_note = str(ex)
            logger.warning(f'{name}: winding number not available: {ex}')

    failure, lower_err = None, None
    if reverted or state.divergent_steps:
        failure = diagnose(samples, r, state, aaa_err, pole_report)
        logger.warning(f'{name}: run diagnosed as {failure}')
    elif check_degree and degree >= 1 and not trace.early_exact:
        start = time.perf_counter()
        lower_err = _lower_degree_error(samples, degree, config)
        timings['check_degree'] = time.perf_counter() - start
        if maxerr >= lower_err:
            failure = 'degeneracy'
            logger.warning(f'{name}: degree {degree} error {maxerr:.6e} does not improve on '
                    f'degree {degree - 1} error {lower_err:.6e}')

    if slices is None:
        slices = [slice(0, samples.M)]
    return ApproxReport(
            name=name, degree=r.degree, M=samples.M, aaa_max_error=aaa_err,
            lawson_max_error=maxerr, reverted=reverted, approximant=r, samples=samples,
            poles=pole_report.poles, residues=pole_report.residues, zeros=pole_report.zeros,
            winding=winding, winding_note=winding_note, history=list(state.history),
            aaa_support_indices=trace.support_indices, aaa_errors=trace.errors,
            early_exact=trace.early_exact, failure=failure, lower_degree_error=lower_err,
            nsteps=config.nsteps,
            timings=timings, slices=[(s.start, s.stop) for s in slices])


@dataclass
class Resolvent:
    """
    f(z) = c^T (zI - A)^-1 b, one dense solve per sample
    """
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __call__(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        eye = np.eye(len(self.A))
        out = np.empty(z.shape, dtype=np.complex128)
        with warnings.catch_warnings():
            warnings.simplefilter('error', scipy.linalg.LinAlgWarning)
            for j, zj in enumerate(z.ravel()):
                try:
                    x = scipy.linalg.solve(zj * eye - self.A, self.b)
                except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning) as ex:
                    raise NumericalFailure(
                        f'resolvent is singular at z = {zj} (sample {j}): {ex}')
                out.flat[j] = self.c @ x
        return out


def load_resolvent(matrix_path, vectors_path):
    """
    Read A (one row per line) and b, c (two rows) from comma-separated files
    """
    A = util.read_csv_rows(matrix_path)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f'{matrix_path}: matrix must be square, got shape {A.shape}')
    vectors = util.read_csv_rows(vectors_path)
    if vectors.shape != (2, len(A)):
        raise DimensionError(
            f'{vectors_path}: need two rows (b, c) of length {len(A)}, got shape {vectors.shape}')
    return Resolvent(A, vectors[0], vectors[1])


def _config(entry_nsteps, nsteps, exponent, weights, keep_best):
    return lawson.LawsonConfig(
            nsteps=entry_nsteps if nsteps is None else nsteps,
            update_exponent=exponent,
            initial_weights=weights,
            keep_best=keep_best)


def run_problem(name, degree=None, nsteps=None, exponent=1.0, seed=None,
        matrix=None, vectors=None, keep_best=True, history_logger=None, check_degree=False):
    entry = catalog.get(name)
    f = entry.f
    if entry.stub is not None:
        if entry.f.tag == 'resolvent' and matrix is not None and vectors is not None:
            f = load_resolvent(matrix, vectors)
        else:
            entry.check_runnable()
    spec = entry.spec if seed is None else entry.spec.with_seed(seed)
    grid = domains.build(spec)
    samples = SampleSet.from_function(grid, f)
    weights = None
    if entry.weight is not None:
        weights = np.abs(entry.weight(grid.points))
    config = _config(entry.nsteps, nsteps, exponent, weights, keep_best)
    degree = entry.degree if degree is None else degree
    return run_samples(samples, degree, config, name, grid.slices, history_logger, check_degree)


def run_file(path, degree, nsteps=None, exponent=1.0, keep_best=True, history_logger=None,
        check_degree=False):
    samples = util.read_samples(path)
    config = _config(lawson.LawsonConfig.nsteps, nsteps, exponent, None, keep_best)
    name = os.path.splitext(os.path.basename(str(path)))[0]
    return run_samples(samples, degree, config, name, None, history_logger, check_degree)


def _write_error_csv(path, report):
    fh = util.get_handle(path, 'w')
    try:
        fh.write('re_z,im_z,re_e,im_e,abs_e\n')
        for z, e in zip(report.samples.points, report.errors()):
            cols = (z.real, z.imag, e.real, e.imag, abs(e))
            fh.write(','.join(util.format_float(c) for c in cols) + '\n')
    finally:
        if not util.is_std_stream(fh):
            fh.close()


def _write_history_csv(path, report):
    hist = HistoryLogger(report.name)
    hist.init(path, buffer_max_elem=len(report.history) + 1)
    for step, err in enumerate(report.history, 1):
        hist.write(step, err)
    hist.shutdown()


def export(report, out_dir, formats=('json',)):
    """
    Write `report` in each of `formats` under out_dir.  Returns the paths.
    """
    from aaalawson import plot

    if isinstance(formats, str):
        formats = [f.strip() for f in formats.split(',') if f.strip()]
    unknown = [f for f in formats if f not in FORMATS]
    if unknown:
        raise InputError(f'Unknown export formats {unknown}, expected some of {FORMATS}')
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as ex:
        raise InputError(f'Could not create output directory {out_dir}: {ex}')

    stem = os.path.join(out_dir, report.name)
    paths = {}
    for fmt in formats:
        if fmt == 'json':
            path = f'{stem}.json'
            util.write_json(path, report.to_dict())
        elif fmt == 'error_csv':
            path = f'{stem}_errors.csv'
            _write_error_csv(path, report)
        elif fmt == 'history_csv':
            path = f'{stem}_history.csv'
            _write_history_csv(path, report)
        elif fmt == 'svg':
            path = f'{stem}.svg'
            with util.get_handle(path, 'w') as fh:
                fh.write(plot.render_svg(report))
        elif fmt == 'html':
            path = f'{stem}.html'
            with util.get_handle(path, 'w') as fh:
                fh.write(plot.render_html(report))
        else:
            path = f'{stem}_samples.csv'
            util.write_samples_csv(path, report.samples)
        paths[fmt] = path
        logger.info(f'wrote {path}')
    return paths
