"""
Sample grids for discretized domains.

A DomainSpec is a list of pieces concatenated in declaration order.  Pieces
are plain dicts, the same form read from YAML/JSON files:

    {kind: circle,  center: [0, 0], radius: 1, npts: 500}
    {kind: ellipse, center: [0, 0], half_width: 0.3, half_height: 1, npts: 2000}
    {kind: arc,     center: [0, 0], radius: 1, theta0: 0, theta1: 3.14159,
                    npts: 500, law: chebyshev, endpoints: both}
    {kind: segment, a: [-1, 0], b: [1, 0], npts: 1000, law: tanh, strength: 12}
    {kind: logline, a: [1, 0], b: [1e6, 0], npts: 500}
    {kind: random,  count: 14, lo: [-2, -1], hi: [2, 1], seed: 7}
    {kind: raw,     points: [[0, 0], [1, 0]]}

Complex parameters are [re, im] pairs or plain reals.  `law` is one of
equispaced, chebyshev, tanh (with `strength`, default 12).  `endpoints`
(both|start|end|none) says which ends of an arc, segment or logline are kept;
dropped ends are replaced so that each piece still has `npts` points.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from aaalawson import util
from aaalawson.errors import BuildError, InputError

logger = logging.getLogger(__name__)

LAWS = ('equispaced', 'chebyshev', 'tanh')
ENDPOINTS = ('both', 'start', 'end', 'none')
DEFAULT_TANH_STRENGTH = 12.0
CLOSED_KINDS = ('circle', 'ellipse')


@dataclass
class Grid:
    points: np.ndarray
    closed_curve: bool = False
    # slice of `points` belonging to each piece
    slices: list = field(default_factory=list)


@dataclass
class DomainSpec:
    pieces: list
    # None: closed exactly when the spec is a single circle or ellipse
    closed: bool = None

    def __post_init__(self):
        if not self.pieces:
            raise InputError('DomainSpec needs at least one piece')
        self.pieces = [dict(p) for p in self.pieces]
        for i, piece in enumerate(self.pieces):
            _validate_piece(piece, i)

    @property
    def closed_curve(self):
        if self.closed is not None:
            return bool(self.closed)
        return len(self.pieces) == 1 and self.pieces[0]['kind'] in CLOSED_KINDS

    def to_dict(self):
        data = {'pieces': [_piece_to_json(p) for p in self.pieces]}
        if self.closed is not None:
            data['closed'] = self.closed
        return data

    @classmethod
    def from_dict(cls, data):
        if isinstance(data, list):
            return cls(data)
        try:
            return cls(data['pieces'], data.get('closed'))
        except (KeyError, TypeError):
            raise InputError('DomainSpec must be a list of pieces or {pieces: [...]}')

    def with_seed(self, seed):
        """
        Copy with every random piece reseeded
        """
        pieces = [dict(p, seed=seed) if p['kind'] == 'random' else p for p in self.pieces]
        return DomainSpec(pieces, self.closed)


def load_spec(path):
    return DomainSpec.from_dict(util.load_config(path))


def _cplx(value, name):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InputError(f'{name} = {value} is not a [re, im] pair')
        return complex(float(value[0]), float(value[1]))
    try:
        return complex(value)
    except (TypeError, ValueError):
        raise InputError(f'{name} = {value!r} is not a number')


def _piece_to_json(piece):
    out = {}
    for k, v in piece.items():
        if isinstance(v, complex):
            v = [v.real, v.imag]
        elif k == 'points':
            v = [[complex(z).real, complex(z).imag] if not isinstance(z, list) else z for z in v]
        out[k] = v
    return out


_REQUIRED = {
        'circle': ('center', 'radius', 'npts'),
        'ellipse': ('center', 'half_width', 'half_height', 'npts'),
        'arc': ('center', 'radius', 'theta0', 'theta1', 'npts'),
        'segment': ('a', 'b', 'npts'),
        'logline': ('a', 'b', 'npts'),
        'random': ('count', 'lo', 'hi'),
        'raw': ('points',),
        }


def _validate_piece(piece, i):
    kind = piece.get('kind')
    if kind not in _REQUIRED:
        raise InputError(f'piece {i}: unknown kind {kind!r}, expected one of {list(_REQUIRED)}')
    missing = [k for k in _REQUIRED[kind] if k not in piece]
    if missing:
        raise InputError(f'piece {i} ({kind}): missing {missing}')
    if 'npts' in piece and int(piece['npts']) < 2:
        raise InputError(f'piece {i} ({kind}): npts must be >= 2, got {piece["npts"]}')
    law = piece.get('law', 'equispaced')
    if law not in LAWS:
        raise InputError(f'piece {i} ({kind}): unknown law {law!r}, expected one of {LAWS}')
    if kind in ('circle', 'ellipse') and law != 'equispaced':
        raise InputError(f'piece {i} ({kind}): only the equispaced law applies to a '
                f'full closed curve; use arc pieces for clustering')
    if law == 'tanh' and not float(piece.get('strength', DEFAULT_TANH_STRENGTH)) > 0:
        raise InputError(f'piece {i} ({kind}): tanh strength must be > 0')
    if piece.get('endpoints', 'both') not in ENDPOINTS:
        raise InputError(f'piece {i} ({kind}): endpoints must be one of {ENDPOINTS}')
    for key in ('radius', 'half_width', 'half_height'):
        if key in piece and not float(piece[key]) > 0:
            raise InputError(f'piece {i} ({kind}): {key} must be > 0')


def _unit_parameters(npts, law, strength):
    """
    npts parameters in [-1, 1] distributed by `law`, increasing
    """
    k = np.arange(npts)
    if law == 'equispaced':
        return np.linspace(-1.0, 1.0, npts)
    if law == 'chebyshev':
        return -np.cos(np.pi * k / (npts - 1))
    return np.tanh(np.linspace(-strength, strength, npts))


def _spread(a, b, npts, law, strength, endpoints):
    """
    npts points from a to b: midpoint + halfspan * s for s from the law.
    Dropped endpoints are replaced by generating extra nodes.
    """
    drop_start = endpoints in ('end', 'none')
    drop_end = endpoints in ('start', 'none')
    total = npts + int(drop_start) + int(drop_end)
    if law == 'chebyshev':
        k = np.arange(total)
        s = (1 - np.cos(np.pi * k / (total - 1))) / 2
        pts = a + (b - a) * s
    else:
        s = _unit_parameters(total, law, strength)
        pts = (a + b) / 2 + (b - a) / 2 * s
    lo = int(drop_start)
    return pts[lo:lo + npts]


def _build_piece(piece):
    kind = piece['kind']
    law = piece.get('law', 'equispaced')
    strength = float(piece.get('strength', DEFAULT_TANH_STRENGTH))
    endpoints = piece.get('endpoints', 'both')

    if kind == 'circle':
        c = _cplx(piece['center'], 'center')
        N = int(piece['npts'])
        k = np.arange(1, N + 1)
        return c + float(piece['radius']) * np.exp(2j * np.pi * k / N)

    if kind == 'ellipse':
        c = _cplx(piece['center'], 'center')
        N = int(piece['npts'])
        theta = 2 * np.pi * np.arange(1, N + 1) / N
        return c + float(piece['half_width']) * np.cos(theta) \
                + 1j * float(piece['half_height']) * np.sin(theta)

    if kind == 'arc':
        c = _cplx(piece['center'], 'center')
        theta = _spread(float(piece['theta0']), float(piece['theta1']), int(piece['npts']),
                law, strength, endpoints)
        return c + float(piece['radius']) * np.exp(1j * theta)

    if kind == 'segment':
        a, b = _cplx(piece['a'], 'a'), _cplx(piece['b'], 'b')
        if a == b:
            raise InputError(f'segment endpoints coincide: {a}')
        return _spread(a, b, int(piece['npts']), law, strength, endpoints)

    if kind == 'logline':
        a, b = _cplx(piece['a'], 'a'), _cplx(piece['b'], 'b')
        if a == 0 or b == 0:
            raise InputError('logline endpoints must be nonzero')
        direction = a / abs(a)
        if abs(b / abs(b) - direction) > 1e-12:
            raise InputError(f'logline endpoints {a} and {b} are not on one ray from 0')
        npts = int(piece['npts'])
        drop_start = endpoints in ('end', 'none')
        drop_end = endpoints in ('start', 'none')
        total = npts + int(drop_start) + int(drop_end)
        mags = np.geomspace(abs(a), abs(b), total)
        lo = int(drop_start)
        return direction * mags[lo:lo + npts]

    if kind == 'random':
        return random_rectangle(int(piece['count']), _cplx(piece['lo'], 'lo'),
                _cplx(piece['hi'], 'hi'), int(piece.get('seed', 0)))

    return np.array([_cplx(z, 'points') for z in piece['points']], dtype=np.complex128)


def random_rectangle(count, corner_lo, corner_hi, seed):
    """
    `count` points uniform in the rectangle with opposite corners corner_lo and
    corner_hi, from numpy's PCG64 generator seeded with `seed`.
    """
    lo, hi = complex(corner_lo), complex(corner_hi)
    if count < 1:
        raise InputError(f'count must be >= 1, got {count}')
    if not (lo.real < hi.real and lo.imag < hi.imag):
        raise InputError(f'degenerate rectangle: lo = {lo}, hi = {hi}')
    rng = np.random.default_rng(seed)
    x = rng.uniform(lo.real, hi.real, count)
    y = rng.uniform(lo.imag, hi.imag, count)
    return x + 1j * y


def build(spec):
    """
    Concatenate the points of every piece.  Duplicate points are an error.
    """
    parts, slices, off = [], [], 0
    for piece in spec.pieces:
        pts = np.asarray(_build_piece(piece), dtype=np.complex128)
        parts.append(pts)
        slices.append(slice(off, off + len(pts)))
        off += len(pts)
    points = np.concatenate(parts)

    uniq, inverse, counts = np.unique(points, return_inverse=True, return_counts=True)
    if len(uniq) != len(points):
        dup = np.flatnonzero(counts[inverse] > 1)
        collisions = [(int(j), complex(points[j])) for j in dup]
        shown = ', '.join(f'#{j} {z}' for j, z in collisions[:6])
        raise BuildError(f'{len(collisions)} grid points coincide: {shown}', collisions)
    logger.debug(f'built {len(points)} points in {len(spec.pieces)} pieces')
    return Grid(points, spec.closed_curve, slices)
