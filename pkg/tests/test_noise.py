import numpy as np
import pytest

from phaseframe.noise import (NoiseChannel, PowerLawPSD, TabulatedPSD, WhitePSD, ZeroPSD,
                              elementary, sensitivity, su2_standard_channels,
                              su3_standard_channels)


def test_psd_shapes_and_support():
    w = np.array([-3.0, 0.0, 0.5, 2.0, 20.0])
    assert np.allclose(WhitePSD(2.0)(w), 2.0)
    assert np.allclose(ZeroPSD()(w), 0.0)
    pl = PowerLawPSD(1.0, 1.0, 0.1, 10.0)
    assert np.allclose(pl(w), [1/3, 0, 2.0, 0.5, 0])
    assert pl.support == 10.0
    tab = TabulatedPSD(np.array([0.0, 1.0, 2.0]), np.array([1.0, 0.5, 0.0]))
    assert np.allclose(tab(np.array([-0.5, 1.5, 3.0])), [0.75, 0.25, 0.0])
    assert WhitePSD(1.0).scaled(3.0)(w)[0] == 3.0


@pytest.mark.parametrize('factory', [lambda: WhitePSD(-1.0), lambda: PowerLawPSD(1, 1, 2, 1),
                                     lambda: TabulatedPSD(np.array([1.0, 0.5]), np.array([1.0, 1.0]))])
def test_psd_validation(factory):
    with pytest.raises(ValueError):
        factory()


def test_su2_physical_channels_are_exact_derivatives():
    ch = su2_standard_channels()
    Om, phi, De = 1.3, 0.7, 0.2
    h = lambda Om, phi, De: 0.5*np.array([Om*np.cos(phi), Om*np.sin(phi), De])
    eps = 1e-7
    h0 = h(Om, phi, De)
    fd = {'detuning': (h(Om, phi, De + eps) - h0)/eps,
          'phase': (h(Om, phi + eps, De) - h0)/eps,
          'amplitude': (h(Om*(1 + eps), phi, De) - h0)/eps}
    for name, want in fd.items():
        assert np.allclose(ch[name](h0), want, atol=1e-6)


def test_su2_printed_convention_halves_phase_and_amplitude():
    phys, prnt = su2_standard_channels(), su2_standard_channels('printed')
    assert np.allclose(prnt['phase'].M, phys['phase'].M/2)
    assert np.allclose(prnt['amplitude'].M, phys['amplitude'].M/2)
    assert np.allclose(prnt['detuning'].a, phys['detuning'].a)


def test_su3_physical_channels_are_exact_derivatives():
    from phaseframe.control import LambdaParams, lambda_schedule
    th, ph, Om = 0.8, 0.6, 1.4
    t = np.array([0.0])

    def h(Om=Om, th=th, ph=ph, d0=0.0, d1=0.0):
        return lambda_schedule(LambdaParams(Om, th, ph, d0, d1), 1.0)(t)[0]

    ch = su3_standard_channels(th, ph)
    h0, eps = h(), 1e-7
    fd = {'detuning0': (h(d0=eps) - h0)/eps, 'detuning1': (h(d1=eps) - h0)/eps,
          'amplitude': (h(Om=Om*(1 + eps)) - h0)/eps,
          'theta': (h(th=th + eps) - h0)/eps, 'phi': (h(ph=ph + eps) - h0)/eps}
    for name, want in fd.items():
        assert np.allclose(ch[name](h0), want, atol=1e-6), name


def test_su3_printed_convention():
    ch = su3_standard_channels(0.1, 0.2, 'printed')
    assert ch['detuning0'].a[2] == pytest.approx(np.pi)
    assert ch['detuning1'].a[2] == pytest.approx(-np.pi)
    assert ch['detuning0'].a[7] == pytest.approx(np.pi/np.sqrt(3))
    assert ch['amplitude'].M[6, 6] == 0.0


def test_channel_validation_and_dimension_mismatch():
    with pytest.raises(ValueError):
        NoiseChannel('x', np.zeros(3), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        NoiseChannel('x', np.array([np.nan, 0, 0]), np.zeros((3, 3)))
    ch = su2_standard_channels()['detuning']
    with pytest.raises(ValueError):
        sensitivity(ch, np.zeros(8))


def test_elementary_is_one_based():
    E = elementary(1, 3, 3)
    assert E[0, 2] == 1 and E.sum() == 1
