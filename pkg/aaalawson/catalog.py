"""
Registry of test problems: a function descriptor, a DomainSpec and a degree,
with published reference numbers attached as expectations.

Each expectation carries a provenance tag:
    PAPER     a number printed in the published literature for this method
    DERIVED   computed from a printed quantity (inferred degree, pole count)
    CHOICE    not published; fixed here so the run is reproducible
"""
import difflib
import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy.special

from aaalawson import array_util, util
from aaalawson.domains import DomainSpec
from aaalawson.errors import CatalogStubError, InputError, UnknownProblemError

logger = logging.getLogger(__name__)

PAPER = 'PAPER'
DERIVED = 'DERIVED'
CHOICE = 'CHOICE'
PROVENANCE = (PAPER, DERIVED, CHOICE)


def _fermi_dirac(z, beta=10.0, mu=2.0):
    return 1 / (1 + np.exp(beta * (z - mu)))


FUNCTIONS = {
        'exp': lambda z, a=1.0: np.exp(a * z),
        'exp_square': lambda z, a=1.0: np.exp(a * z ** 2),
        'exp_inverse': lambda z, a=1.0, c=0.0: np.exp(a / (z - c)),
        'tan': lambda z, a=1.0: np.tan(a * z),
        'log': lambda z, c=0.0, s=1.0: np.log(c + s * z),
        'airy': lambda z, a=1.0: scipy.special.airy(a * z)[0],
        'sqrt_quartic': lambda z: np.sqrt(1 + z ** 4),
        'sqrt_annulus': lambda z: np.sqrt(1 - z ** -2),
        'z_sign_re': lambda z: z * np.sign(z.real),
        'sqrt_one_minus': lambda z: np.sqrt(1 - z),
        'abs': lambda z: np.abs(z),
        'fermi_dirac': _fermi_dirac,
        'sin': lambda z, a=1.0: np.sin(a * z),
        'abs_sin': lambda z: np.abs(z) * np.sin(z),
        'gauss': lambda z: np.exp(-z ** 2),
        }

# need data that is not bundled
EXTERNAL = ('resolvent', 'conformal_lshape')


@dataclass(frozen=True)
class FunctionSpec:
    tag: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tag not in FUNCTIONS and self.tag not in EXTERNAL:
            raise InputError(f'Unknown function tag `{self.tag}`')

    def __call__(self, z):
        if self.tag in EXTERNAL:
            raise CatalogStubError(f'function `{self.tag}` needs external data')
        z = np.asarray(z, dtype=np.complex128)
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            return np.asarray(FUNCTIONS[self.tag](z, **self.params), dtype=np.complex128)

    def describe(self):
        args = ', '.join(f'{k}={v}' for k, v in self.params.items())
        return f'{self.tag}({args})'

    def to_dict(self):
        return {'tag': self.tag, 'params': dict(self.params)}


@dataclass(frozen=True)
class Expectation:
    value: Any
    # acceptance interval for scalar values; None means exact
    lo: float = None
    hi: float = None
    provenance: str = PAPER
    note: str = ''

    def __post_init__(self):
        if self.provenance not in PROVENANCE:
            raise InputError(f'provenance must be one of {PROVENANCE}, got {self.provenance}')

    def contains(self, x):
        if self.lo is None and self.hi is None:
            return x == self.value
        return (self.lo is None or x >= self.lo) and (self.hi is None or x <= self.hi)

    def to_dict(self):
        value = self.value
        if isinstance(value, (list, tuple, np.ndarray)):
            value = [v if isinstance(v, str) else array_util.to_pairs([v])[0] for v in value]
        elif isinstance(value, complex):
            value = array_util.to_pairs([value])[0]
        data = {'value': value, 'provenance': self.provenance}
        if self.lo is not None:
            data['lo'] = self.lo
        if self.hi is not None:
            data['hi'] = self.hi
        if self.note:
            data['note'] = self.note
        return data


def _rel(value, rel_tol, provenance=PAPER, note=''):
    return Expectation(value, value * (1 - rel_tol), value * (1 + rel_tol), provenance, note)


def _digits(values, provenance=PAPER, note=''):
    # listed values are matched to their printed digits by the tests
    return Expectation(list(values), provenance=provenance, note=note)


@dataclass(frozen=True)
class ProblemEntry:
    name: str
    f: FunctionSpec
    spec: DomainSpec
    degree: int
    expected: dict = field(default_factory=dict)
    nsteps: int = 20
    # explanation of the missing external data; None for runnable entries
    stub: str = None
    # optional FunctionSpec of the error weights
    weight: FunctionSpec = None
    note: str = ''

    def check_runnable(self):
        if self.stub is not None:
            raise CatalogStubError(f'{self.name}: {self.stub}')

    def to_dict(self):
        data = {
                'name': self.name,
                'f': self.f.to_dict(),
                'spec': self.spec.to_dict(),
                'degree': self.degree,
                'nsteps': self.nsteps,
                'expected': {k: e.to_dict() for k, e in self.expected.items()},
                }
        if self.stub is not None:
            data['stub'] = self.stub
        if self.weight is not None:
            data['weight'] = self.weight.to_dict()
        if self.note:
            data['note'] = self.note
        return data


def _circle(npts, center=0.0, radius=1.0):
    return {'kind': 'circle', 'center': center, 'radius': radius, 'npts': npts}


def _segment(a, b, npts, law='equispaced', **kwargs):
    return dict(kind='segment', a=a, b=b, npts=npts, law=law, **kwargs)


def _arc(center, radius, theta0, theta1, npts, law='chebyshev', **kwargs):
    return dict(kind='arc', center=center, radius=radius, theta0=theta0, theta1=theta1,
            npts=npts, law=law, **kwargs)


def _logline(a, b, npts, **kwargs):
    return dict(kind='logline', a=a, b=b, npts=npts, **kwargs)


def _square_sides(npts):
    # counterclockwise from the lower left corner; each side drops its end
    corners = [[-1, -1], [1, -1], [1, 1], [-1, 1]]
    return [_segment(corners[i], corners[(i + 1) % 4], npts, 'chebyshev', endpoints='start')
            for i in range(4)]


def _quartic_arcs(npts):
    q = np.pi / 4
    return [_arc(0, 1, c - q, c + q, npts, 'tanh', strength=12)
            for c in (0, np.pi / 2, np.pi, 3 * np.pi / 2)]


def _improves(note=''):
    return Expectation(True, provenance=DERIVED,
            note=note or 'Lawson lowers the AAA error without reverting')


_RECTANGLE = {'lo': [-2, -1], 'hi': [2, 1]}

_ENTRIES = [
    ProblemEntry('expz_circle_n5', FunctionSpec('exp'), DomainSpec([_circle(500)]), 5,
        expected={
            'aaa_error': Expectation(3.83e-10, 1e-10, 8e-10),
            'lawson_error': Expectation(9.944364e-11, 9.944144081e-11, 1.01e-10),
            'lower_bound': Expectation(9.944144081e-11, note='CF lower bound sigma_6'),
            'winding': Expectation(11),
            }),
    ProblemEntry('expz_circle_n3', FunctionSpec('exp'), DomainSpec([_circle(500)]), 3,
        expected={'lawson_error': _rel(9.9318e-6, 1e-3)}),
    ProblemEntry('tan2pi_circle_n12', FunctionSpec('tan', {'a': 2 * np.pi}),
        DomainSpec([_circle(1000)]), 12,
        expected={
            'aaa_error': Expectation(3.16e-7, 3.16e-7 / 2, 3.16e-7 * 2),
            'lawson_error': _rel(7.08e-8, 0.05),
            'winding': Expectation(17),
            'inner_poles': _digits([0.25, -0.25, 0.75, -0.75],
                note='exact poles of tan(2 pi z), matched to 10 digits'),
            'outer_poles': _digits(['1.250011', '1.7638', '2.6420', '7.3844'],
                note='moduli of the +/- pole pairs, matched to the printed digits'),
            }),
    ProblemEntry('log_ellipse', FunctionSpec('log', {'c': 0.5, 's': -1.0}),
        DomainSpec([{'kind': 'ellipse', 'center': 0, 'half_width': 0.3,
            'half_height': 1.0, 'npts': 2000}]), 8,
        expected={'improvement': _improves()},
        note='degree not published, fixed at 8 to stay clear of rounding level'),
    ProblemEntry('airy_square', FunctionSpec('airy', {'a': 2.0}),
        DomainSpec(_square_sides(1000), closed=True), 10,
        expected={'winding': Expectation(21, note='degree 10 follows from winding 2n+1')}),
    ProblemEntry('quartic_sqrt_n16', FunctionSpec('sqrt_quartic'),
        DomainSpec(_quartic_arcs(1000), closed=True), 16,
        expected={
            'aaa_error': _rel(1.38e-1, 0.3),
            'lawson_error': _rel(6.49e-3, 0.1),
            'pole_radii': _digits(['1.00046', '1.0085', '1.075', '1.59'],
                note='moduli of the four poles near each branch point; the default 20 steps '
                'reproduce them to one unit in the last printed digit'),
            }),
    ProblemEntry('rand14_tanz_n6',
        FunctionSpec('tan'),
        DomainSpec([dict(kind='random', count=14, seed=5, **_RECTANGLE)]), 6,
        nsteps=500,
        expected={'equi_error_spread': Expectation(1e-5, None, 1e-5, CHOICE,
            'relative spread of |e| over all 14 samples; the rectangle and seed are a choice')}),
    ProblemEntry('rand100_tanz',
        FunctionSpec('tan'),
        DomainSpec([dict(kind='random', count=100, seed=2019, **_RECTANGLE)]), 6,
        nsteps=300,
        expected={'extreme_points': Expectation(20, 14, None, DERIVED,
            'the published run attains its max at 20 samples; on other random points '
            'at least 2n+2 = 14 are expected')}),
    ProblemEntry('exp_semicircle_arc', FunctionSpec('exp'),
        DomainSpec([_arc(0, 1, 0, np.pi, 500)]), 4,
        expected={'improvement': _improves()},
        note='degree not published, fixed at 4 to stay clear of rounding level'),
    ProblemEntry('s_curve_arc', FunctionSpec('log', {'c': 1.5}),
        DomainSpec([_arc(-0.5, 0.5, np.pi, 0, 500),
            _arc(0.5, 0.5, np.pi, 2 * np.pi, 500, endpoints='end')]), 6,
        expected={'improvement': _improves()},
        note='reconstruction: two tangent semicircles; function and degree are a choice'),
    ProblemEntry('essential_circle', FunctionSpec('exp_inverse', {'a': 4.0, 'c': 0.3}),
        DomainSpec([_circle(1000)]), 8,
        expected={
            'winding': Expectation(-17, provenance=DERIVED,
                note='reconstruction with exp(4/(z - 0.3))'),
            'poles_inside': Expectation(True, provenance=PAPER, note='all poles in the disk'),
            }),
    ProblemEntry('annulus_sqrt', FunctionSpec('sqrt_annulus'),
        DomainSpec([_circle(500, radius=2.0),
            _arc(0, 1, 0, np.pi, 500, 'tanh', strength=12),
            _arc(0, 1, np.pi, 2 * np.pi, 500, 'tanh', strength=12)]), 16,
        expected={'outer_inner_ratio': _rel(1 / 57.1, 0.2)}),
    ProblemEntry('twodisks_sign', FunctionSpec('z_sign_re'),
        DomainSpec([_circle(1000, center=-1.5), _circle(1000, center=1.5)]), 10,
        expected={'improvement': _improves()}),
    ProblemEntry('airy_interval', FunctionSpec('airy'),
        DomainSpec([_segment(-10, 10, 1000, 'chebyshev')]), 12,
        expected={'improvement': _improves()}),
    ProblemEntry('sqrt1mx_n10', FunctionSpec('sqrt_one_minus'),
        DomainSpec([_segment(-1, 1, 1000, 'tanh', strength=12)]), 10,
        expected={'pole_distances': _digits(['15.3', '2.1', '0.19', '3.7e-2', '6.4e-3',
            '9.5e-4', '1.1e-4', '1.0e-5', '5.9e-7', '1.4e-8'],
            note='the two outermost poles are weakly determined; distances are checked '
            'to within a factor of 10')}),
    ProblemEntry('newman_absx', FunctionSpec('abs'),
        DomainSpec([_segment(-1, 0, 500, 'tanh', strength=12),
            _segment(0, 1, 500, 'tanh', strength=12)]), 12,
        expected={
            'lawson_error': Expectation(1.23e-4, 1.07e-4 * 0.99, 1.23e-4 * 1.15),
            'pole_moduli': _digits(['0.00138', '0.0102', '0.0448', '0.155', '0.4780', '1.98']),
            'pole_real_ratio': Expectation(1e-2, None, 1e-2, DERIVED,
                'max |Re p| / |Im p|; the greedy support points break the x -> -x symmetry'),
            },
        note='degree 12 inferred from the 12 poles along the branch cut; '
        '500 points per half interval'),
    ProblemEntry('fermi_dirac', FunctionSpec('fermi_dirac', {'beta': 10.0, 'mu': 2.0}),
        DomainSpec([_segment(0, 10, 1000, 'chebyshev')]), 8,
        expected={'lawson_error': Expectation(9.09e-6, 8.77e-6 * 0.99, 9.09e-6 * 1.1,
            note='degree 8 inferred from the printed error')}),
    ProblemEntry('twoint_sin6x', FunctionSpec('sin', {'a': 6.0}),
        DomainSpec([_segment(-3, -1, 500, 'chebyshev'), _segment(1, 3, 500, 'chebyshev')]), 10,
        expected={'improvement': _improves()}),
    ProblemEntry('twoint_absxsinx', FunctionSpec('abs_sin'),
        DomainSpec([_segment(-3, -1, 500, 'chebyshev'), _segment(1, 3, 500, 'chebyshev')]), 10,
        expected={'improvement': _improves()}),
    ProblemEntry('cmv_expx', FunctionSpec('exp'),
        DomainSpec([_logline(-1e6, -1e-6, 2000)]), 8,
        expected={'improvement': _improves()}),
    ProblemEntry('gauss_realline', FunctionSpec('gauss'),
        DomainSpec([_segment(-1, 1, 100),
            _logline(1, 1e6, 500, endpoints='end'),
            _logline(-1, -1e6, 500, endpoints='end')]), 12,
        expected={
            'aaa_error': _rel(6.92e-6, 0.2),
            'lawson_error': _rel(1.04e-6, 0.1),
            },
        note='degree 12 inferred: exp(-x^2) is exp(-t) in t = x^2, at degree 6'),
    ProblemEntry('expz2_circle_n3', FunctionSpec('exp_square'), DomainSpec([_circle(500)]), 3,
        expected={'failure': Expectation('degeneracy', provenance=PAPER,
            note='the best approximation has degree 2; caught by check_degree')}),
    ProblemEntry('expz2_circle_n2', FunctionSpec('exp_square'), DomainSpec([_circle(500)]), 2,
        expected={'improvement': _improves('succeeds even without keep_best')}),
    ProblemEntry('sc_lshape', FunctionSpec('conformal_lshape'),
        DomainSpec([_circle(1000)]), 12,
        stub='needs a Schwarz-Christoffel conformal map of the L-shaped region, '
        'which is not bundled'),
    ProblemEntry('niconet_beam', FunctionSpec('resolvent'),
        DomainSpec([_logline(0.01j, 100j, 2000), _logline(-0.01j, -100j, 2000)]), 10,
        expected={
            'aaa_error': _rel(6.15, 0.05),
            'lawson_error': _rel(1.49, 0.05),
            },
        stub='needs the 348x348 clamped beam matrix; pass --matrix and --vectors '
        'to run it on a resolvent c^T (zI - A)^-1 b'),
    ]

REGISTRY = {e.name: e for e in _ENTRIES}


def names():
    return list(REGISTRY)


def get(name):
    try:
        return REGISTRY[name]
    except KeyError:
        close = difflib.get_close_matches(name, REGISTRY.keys(), n=1, cutoff=0.3)
        raise UnknownProblemError(name, close[0] if close else None)


def export(path):
    """
    Write every entry with its spec and expectations to a JSON file
    """
    data = {'problems': [e.to_dict() for e in _ENTRIES]}
    util.write_json(path, data)
    logger.info(f'wrote {len(_ENTRIES)} catalog entries to {path}')
