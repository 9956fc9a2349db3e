import math

import numpy as np
import pytest

from aaalawson import domains
from aaalawson.aaa import SampleSet


def jacobi_svd(A, sweeps=80, tol=1e-15):
    """
    One-sided Jacobi SVD of a complex matrix with at least as many rows as
    columns.  Returns (s, V) with s decreasing and A V = U diag(s).
    """
    U = np.array(A, dtype=np.complex128)
    n = U.shape[1]
    V = np.eye(n, dtype=np.complex128)
    for _ in range(sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                a = np.vdot(U[:, p], U[:, p]).real
                b = np.vdot(U[:, q], U[:, q]).real
                c = np.vdot(U[:, p], U[:, q])
                if a == 0 or b == 0 or abs(c) <= tol * math.sqrt(a * b):
                    continue
                off = max(off, abs(c) / math.sqrt(a * b))
                # make the inner product real before the real rotation
                phase = np.conj(c) / abs(c)
                U[:, q] *= phase
                V[:, q] *= phase
                zeta = (b - a) / (2 * abs(c))
                t = 1.0 if zeta == 0 else math.copysign(1.0, zeta) / (
                        abs(zeta) + math.sqrt(1 + zeta * zeta))
                cs = 1 / math.sqrt(1 + t * t)
                sn = cs * t
                up, uq = U[:, p].copy(), U[:, q].copy()
                U[:, p], U[:, q] = cs * up - sn * uq, sn * up + cs * uq
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p], V[:, q] = cs * vp - sn * vq, sn * vp + cs * vq
        if off < tol:
            break
    s = np.linalg.norm(U, axis=0)
    order = np.argsort(s)[::-1]
    return s[order], V[:, order]


def pencil_char_roots(A, B, radius=1.0, rel_trim=1e-10):
    """
    Roots of det(A - lambda B), with the determinant interpolated at roots of
    unity by FFT and the high-order zero coefficients trimmed
    """
    m = len(A)
    K = m + 1
    lam = radius * np.exp(2j * np.pi * np.arange(K) / K)
    d = np.array([np.linalg.det(A - x * B) for x in lam])
    coeffs = np.fft.fft(d) / K / radius ** np.arange(K)
    top = np.abs(coeffs).max()
    deg = max(np.flatnonzero(np.abs(coeffs) > rel_trim * top))
    return np.roots(coeffs[:deg + 1][::-1])


def barycentric_poly(t, c):
    """
    Descending coefficients of sum_k c_k prod_{j != k} (z - t_j)
    """
    out = np.zeros(1, dtype=np.complex128)
    for k in range(len(t)):
        out = np.polyadd(out, c[k] * np.poly(np.delete(t, k)))
    return out


def match_sorted(a, b):
    """
    Pair up the entries of two complex arrays greedily by distance and return
    the largest distance
    """
    a, b = list(np.asarray(a)), list(np.asarray(b))
    assert len(a) == len(b)
    worst = 0.0
    for x in a:
        j = int(np.argmin([abs(x - y) for y in b]))
        worst = max(worst, abs(x - b.pop(j)))
    return worst


def digits_match(value, printed, units=0.5):
    """
    `value` is within `units` of the last digit of the decimal string
    `printed`; the default 0.5 means it rounds to `printed`
    """
    p = float(printed)
    mantissa = printed.lower().split('e')[0].lstrip('-+').replace('.', '').lstrip('0')
    ndig = max(len(mantissa), 1)
    unit = 10 ** (math.floor(math.log10(abs(p))) - ndig + 1)
    return abs(value - p) <= units * unit * (1 + 1e-9)


@pytest.fixture
def rng():
    return np.random.default_rng(20191105)


def circle_samples(f, npts=500, radius=1.0):
    grid = domains.build(domains.DomainSpec(
        [{'kind': 'circle', 'center': 0, 'radius': radius, 'npts': npts}]))
    return SampleSet.from_function(grid, f)


def random_rational(rng, n, scale=1.0):
    """
    Random p, q of degree n (ascending coefficients) with q's roots kept off
    the unit disk
    """
    p = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    roots = 1.5 + rng.uniform(0, 1, n)
    roots = roots * np.exp(2j * np.pi * rng.uniform(0, 1, n))
    q = np.polynomial.polynomial.polyfromroots(roots) * scale
    return p, q
