import numpy as np

from aaalawson.errors import DimensionError, InputError


def as_complex_vector(data, name='data', allow_nonfinite=False):
    """
    Convert `data` to a 1-D complex128 array, checking that entries are finite
    """
    try:
        vec = np.asarray(data, dtype=np.complex128)
    except (TypeError, ValueError) as ex:
        raise InputError(
            f'Could not convert `{name}` to a complex vector: {ex}. '
            f'Got type({name}) = {type(data)}')
    if vec.ndim == 0:
        vec = vec[None]
    if vec.ndim != 1:
        raise DimensionError(f'`{name}` must be one-dimensional, got shape {vec.shape}')
    if not allow_nonfinite and not np.all(np.isfinite(vec)):
        bad = np.flatnonzero(~np.isfinite(vec))
        raise InputError(f'`{name}` has non-finite entries at indices {bad[:10].tolist()}')
    return vec


def as_complex_matrix(data, name='A'):
    try:
        mat = np.asarray(data, dtype=np.complex128)
    except (TypeError, ValueError) as ex:
        raise InputError(f'Could not convert `{name}` to a complex matrix: {ex}')
    if mat.ndim != 2:
        raise DimensionError(f'`{name}` must be two-dimensional, got shape {mat.shape}')
    if not np.all(np.isfinite(mat)):
        raise InputError(f'`{name}` has non-finite entries')
    return mat


def normalize_phase(v):
    """
    Rotate v by a unit complex factor so that its first largest-magnitude entry
    is real and positive.  A zero vector is returned unchanged.
    """
    v = np.asarray(v, dtype=np.complex128)
    k = int(np.argmax(np.abs(v)))
    pivot = v[k]
    if pivot == 0:
        return v.copy()
    out = v * (np.conj(pivot) / abs(pivot))
    out[k] = abs(pivot)
    return out


def to_pairs(data):
    """
    Complex sequence -> list of [re, im] Python floats, for JSON
    """
    vec = np.asarray(data, dtype=np.complex128).ravel()
    return [[float(z.real), float(z.imag)] for z in vec]


def from_pairs(pairs, name='data'):
    """
    Inverse of `to_pairs`.  Also accepts plain real numbers.
    """
    out = np.zeros(len(pairs), dtype=np.complex128)
    for i, item in enumerate(pairs):
        if isinstance(item, (int, float)):
            out[i] = item
            continue
        try:
            re, im = item
            out[i] = complex(float(re), float(im))
        except (TypeError, ValueError):
            raise InputError(
                f'`{name}`[{i}] = {item!r} is not a [re, im] pair')
    return out
