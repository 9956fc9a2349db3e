import numpy as np
import pytest

from aaalawson import catalog, report
from conftest import digits_match

pytestmark = pytest.mark.slow

IMPROVES = [e.name for e in catalog.REGISTRY.values() if 'improvement' in e.expected]


def _run(name, **kwargs):
    rep = report.run_problem(name, **kwargs)
    expected = catalog.get(name).expected
    return rep, expected


def _sig_match(value, printed, digits=2):
    return digits_match(value, f'{float(printed):.{digits - 1}e}')


def test_expz_circle_n5():
    rep, expected = _run('expz_circle_n5')
    assert expected['aaa_error'].contains(rep.aaa_max_error)
    assert expected['lawson_error'].contains(rep.lawson_max_error)
    assert rep.lawson_max_error >= expected['lower_bound'].value
    assert rep.winding == 11


def test_expz_circle_n3():
    rep, expected = _run('expz_circle_n3')
    assert expected['lawson_error'].contains(rep.lawson_max_error)


def test_tan2pi_circle_n12():
    rep, expected = _run('tan2pi_circle_n12')
    assert expected['aaa_error'].contains(rep.aaa_max_error)
    assert expected['lawson_error'].contains(rep.lawson_max_error)
    assert rep.winding == 17

    inner = rep.poles[np.abs(rep.poles) < 1]
    assert len(inner) == 4
    for p in expected['inner_poles'].value:
        assert np.min(np.abs(inner - p)) <= 1e-10 * abs(p)
        assert np.min(np.abs(inner + p)) <= 1e-10 * abs(p)

    outer = np.sort(np.abs(rep.poles[np.abs(rep.poles) > 1]))
    assert len(outer) == 8
    for k, printed in enumerate(expected['outer_poles'].value):
        # each modulus belongs to a +/- pair
        assert digits_match(outer[2 * k], printed)
        assert digits_match(outer[2 * k + 1], printed)


def test_airy_square_winding():
    rep, expected = _run('airy_square')
    assert expected['winding'].contains(rep.winding)


def test_quartic_sqrt_n16():
    rep, expected = _run('quartic_sqrt_n16')
    assert rep.nsteps == 20
    assert expected['aaa_error'].contains(rep.aaa_max_error)
    assert expected['lawson_error'].contains(rep.lawson_max_error)
    branch = np.exp(1j * np.pi * np.array([0.25, 0.75, 1.25, 1.75]))
    owner = np.argmin(np.abs(rep.poles[:, None] - branch[None, :]), axis=1)
    for b in range(4):
        radii = np.sort(np.abs(rep.poles[owner == b]))
        assert len(radii) == 4
        for r, printed in zip(radii, expected['pole_radii'].value):
            assert digits_match(r, printed, units=1)


def test_essential_circle():
    rep, expected = _run('essential_circle')
    assert not rep.reverted
    assert expected['winding'].contains(rep.winding)
    assert len(rep.poles) == 8
    assert np.all(np.abs(rep.poles) < 1)


def test_newman_absx():
    rep, expected = _run('newman_absx')
    assert not rep.reverted
    assert expected['lawson_error'].contains(rep.lawson_max_error)
    p = rep.poles
    assert len(p) == 12
    assert expected['pole_real_ratio'].contains(np.max(np.abs(p.real) / np.abs(p.imag)))
    moduli = np.sort(np.abs(p))
    for k, printed in enumerate(expected['pole_moduli'].value):
        assert _sig_match(moduli[2 * k], printed)
        assert _sig_match(moduli[2 * k + 1], printed)


def test_fermi_dirac():
    rep, expected = _run('fermi_dirac')
    assert rep.degree == 8
    assert expected['lawson_error'].contains(rep.lawson_max_error)


def test_sqrt1mx_n10():
    rep, expected = _run('sqrt1mx_n10')
    assert not rep.reverted and rep.failure is None
    distances = np.sort(np.abs(1 - rep.poles))[::-1]
    printed = np.array([float(p) for p in expected['pole_distances'].value])
    assert len(distances) == len(printed)
    assert np.all(np.abs(np.log10(distances / printed)) < 1)
    # clustered exponentially toward the singularity
    assert distances[-1] < 1e-6


def test_gauss_realline():
    rep, expected = _run('gauss_realline')
    assert expected['aaa_error'].contains(rep.aaa_max_error)
    assert expected['lawson_error'].contains(rep.lawson_max_error)
    assert rep.failure is None


def test_rand14_equioscillation():
    rep, expected = _run('rand14_tanz_n6')
    assert rep.nsteps == 500
    mags = np.abs(rep.errors())
    assert mags.max() > 1e-13 * np.abs(rep.samples.values).max()
    spread = (mags.max() - mags.min()) / mags.max()
    assert expected['equi_error_spread'].contains(spread)


def test_rand100_extreme_points():
    rep, expected = _run('rand100_tanz')
    mags = np.abs(rep.errors())
    extreme = int(np.sum(mags >= (1 - 1e-2) * mags.max()))
    assert expected['extreme_points'].contains(extreme)


def test_annulus_ratio():
    rep, expected = _run('annulus_sqrt')
    mags = np.abs(rep.errors())
    (a, b), inner = rep.slices[0], rep.slices[1:]
    outer_max = mags[a:b].max()
    inner_max = max(mags[lo:hi].max() for lo, hi in inner)
    assert expected['outer_inner_ratio'].contains(outer_max / inner_max)


@pytest.mark.parametrize('name', IMPROVES)
def test_lawson_improves(name):
    rep, expected = _run(name)
    assert expected['improvement'].value
    assert not rep.reverted
    assert rep.lawson_max_error < rep.aaa_max_error
    # away from rounding level, where Lawson steps stop helping
    assert rep.aaa_max_error > 1e-11 * np.abs(rep.samples.values).max()


def test_degeneracy_guard():
    rep, expected = _run('expz2_circle_n3', check_degree=True)
    assert rep.failure == expected['failure'].value
    assert rep.lawson_max_error >= rep.lower_degree_error

    rep = report.run_problem('expz2_circle_n2', keep_best=False, check_degree=True)
    assert not rep.reverted and rep.failure is None
    assert rep.lawson_max_error < rep.aaa_max_error
    assert rep.lawson_max_error < rep.lower_degree_error
