import logging
import math

import numpy as np
import pytest

from composite_frft import inversion
from composite_frft.exceptions import ConfigError, GridError
from composite_frft.inversion import (SCHEMES, DensitySamples, InversionGrid, Scheme, aligned_shift, compare_schemes,
                                      invert, invert_composite_nq, invert_composite_qn, invert_integral,
                                      invert_nonweighted, invert_weighted_qn)
from composite_frft.models import ModelPresetManager, vg_peak_density


class ConstantModel(object):
    def __init__(self, value):
        self.value = value

    def __call__(self, y):
        return np.full(np.shape(y), self.value, dtype=complex)


@pytest.fixture(scope='module')
def presets():
    return ModelPresetManager()


@pytest.fixture(scope='module')
def vg_star(presets):
    return presets['vg-star'].build()


@pytest.fixture(scope='module')
def gts_star(presets):
    return presets['gts-star'].build()


@pytest.fixture(scope='module')
def vg_star_reference(vg_star):
    grid = InversionGrid.build(2, 512, a=100.0, span=40.0)
    return grid, vg_star.density(grid.output_nodes())


class TestGrid:

    def test_nodes(self):
        grid = InversionGrid.build(2, 4, a=8.0, span=16.0, s=0.5)
        assert grid.M == 8
        assert grid.beta == 1.0
        assert grid.gamma == 2.0
        assert grid.span == 16.0
        assert grid.delta == pytest.approx(1.0 / math.pi)
        assert list(grid.input_nodes()) == [-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0]
        assert list(grid.input_nodes(8)) == [-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]
        assert list(grid.output_nodes()) == [-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0]

    @pytest.mark.parametrize('kwargs', [
        dict(Q=1, N=1),
        dict(Q=0, N=4),
        dict(Q=2, N=0),
        dict(Q=2, N=4, a=-1.0),
        dict(Q=2, N=4, span=0.0),
        dict(Q=2, N=4, s=1.0),
        dict(Q=2, N=4, s=-0.25),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(GridError):
            InversionGrid.build(**kwargs)

    def test_aligned_shift(self):
        grid = InversionGrid.build(2, 512, a=100.0, span=40.0)
        aligned = grid.aligned_to(0.11998901)
        assert 0.0 <= aligned.s < 1.0
        assert aligned.s == pytest.approx(aligned_shift(grid, 0.11998901))
        nodes = aligned.output_nodes()
        assert np.min(np.abs(nodes - 0.11998901)) < 1e-12

    def test_aligned_shift_on_a_node(self):
        grid = InversionGrid.build(2, 4, a=8.0, span=16.0)
        assert aligned_shift(grid, 2.0) == 0.0

    def test_aligned_shift_outside_window(self):
        with pytest.raises(GridError):
            aligned_shift(InversionGrid.build(2, 4, span=16.0), 100.0)


class TestSchemeRegistry:

    def test_every_scheme_is_registered(self):
        assert [entry.scheme for entry in SCHEMES.values()] == list(Scheme)
        assert all(entry.identifier == entry.scheme.value for entry in SCHEMES.values())

    def test_parse(self):
        assert Scheme.parse(' Weighted_QN ') is Scheme.WEIGHTED_QN
        assert Scheme.parse(Scheme.INTEGRAL) is Scheme.INTEGRAL
        with pytest.raises(ConfigError):
            Scheme.parse('simpson')

    def test_dispatch(self, vg_star):
        grid = InversionGrid.build(2, 16, a=20.0, span=10.0)
        samples = invert(vg_star, grid, 'composite_nq')
        assert isinstance(samples, DensitySamples)
        assert samples.scheme is Scheme.COMPOSITE_NQ
        assert samples.values.shape == (grid.M,)


class TestIdentities:

    @pytest.mark.parametrize('Q', [2, 5, 10])
    def test_factorizations_match_weighted_sum(self, vg_star, Q):
        grid = InversionGrid.build(Q, 500, a=100.0, span=40.0)
        weighted = invert_weighted_qn(vg_star, grid)
        qn = invert_composite_qn(vg_star, grid).values
        nq = invert_composite_nq(vg_star, grid).values
        peak = weighted.peak

        assert np.max(np.abs(qn - weighted.values)) <= 1e-10 * peak
        assert np.max(np.abs(nq - weighted.values)) <= 1e-10 * peak
        assert np.max(np.abs(qn - nq)) <= 1e-12 * peak

    @pytest.mark.parametrize('Q,N,s', [(2, 128, 0.0), (3, 64, 0.5), (4, 100, 0.25)])
    def test_weighted_sum_matches_direct_sum(self, vg_star, Q, N, s):
        grid = InversionGrid.build(Q, N, a=100.0, span=40.0, s=s)
        weighted = invert_weighted_qn(vg_star, grid)
        assert np.max(np.abs(weighted.values - invert_integral(vg_star, grid).values)) <= 1e-9 * weighted.peak

    @pytest.mark.parametrize('Q,N', [(3, 1), (1, 2), (6, 1)])
    def test_single_panel(self, vg_star, Q, N):
        grid = InversionGrid.build(Q, N, a=10.0, span=4.0)
        reference = invert_integral(vg_star, grid).values
        for scheme in (invert_weighted_qn, invert_composite_qn, invert_composite_nq):
            assert np.allclose(scheme(vg_star, grid).values, reference, rtol=0, atol=1e-12 * np.max(np.abs(reference)))

    def test_riemann_and_trapezoid_differ_by_endpoints(self, vg_star):
        grid = InversionGrid.build(1, 256, a=40.0, span=20.0, s=0.25)
        x = grid.output_nodes()
        y0, yM = -0.5 * grid.a, 0.5 * grid.a
        endpoints = 0.5 * grid.beta / (2.0 * math.pi) * (vg_star(yM) * np.exp(1j * yM * x)
                                                         - vg_star(y0) * np.exp(1j * y0 * x))
        difference = invert_weighted_qn(vg_star, grid).values - invert_nonweighted(vg_star, grid).values
        assert np.max(np.abs(difference - endpoints)) <= 1e-12 * np.max(np.abs(vg_star.density(0.12)))

    def test_batching_does_not_change_results(self, vg_star, monkeypatch):
        grid = InversionGrid.build(3, 40, a=50.0, span=20.0)
        integral = invert_integral(vg_star, grid).values
        nq = invert_composite_nq(vg_star, grid).values

        monkeypatch.setattr(inversion, 'BATCH_ELEMENTS', 256)
        peak = np.max(np.abs(integral))
        assert np.max(np.abs(invert_integral(vg_star, grid).values - integral)) <= 1e-13 * peak
        assert np.max(np.abs(invert_composite_nq(vg_star, grid).values - nq)) <= 1e-13 * peak


class TestSyntheticTransforms:

    @pytest.mark.parametrize('scheme', list(Scheme))
    def test_zero_transform(self, scheme):
        grid = InversionGrid.build(2, 16, a=10.0, span=20.0)
        samples = invert(ConstantModel(0.0), grid, scheme)
        assert not np.any(samples.values)
        assert samples.imag_ratio == 0.0

    @pytest.mark.parametrize('scheme', [Scheme.INTEGRAL, Scheme.WEIGHTED_QN, Scheme.COMPOSITE_QN, Scheme.COMPOSITE_NQ])
    def test_unit_transform_is_even_and_peaks_at_zero(self, scheme):
        grid = InversionGrid.build(2, 32, a=10.0, span=40.0)
        density = invert(ConstantModel(1.0), grid, scheme).density
        middle = grid.M // 2
        peak = grid.a / (2.0 * math.pi)

        assert int(np.argmax(density)) == middle
        assert density[middle] == pytest.approx(peak, rel=1e-12)
        assert np.allclose(density[middle + 1:], density[middle - 1:0:-1], rtol=0, atol=1e-12 * peak)


class TestVarianceGamma:

    def test_peak_of_narrow_model(self, vg_star):
        samples = invert_weighted_qn(vg_star, InversionGrid.build(2, 512, a=100.0, span=40.0))
        assert samples.value_near(vg_star.params.mu) == pytest.approx(2.5949, rel=1e-2)
        assert samples.mass() == pytest.approx(1.0, abs=1e-2)

    def test_peak_of_heavy_model(self, presets):
        model = presets['vg'].build()
        grid = InversionGrid.build(2, 8192, a=1600.0, span=40.0).aligned_to(model.params.mu)
        samples = invert_weighted_qn(model, grid)
        assert samples.value_near(model.params.mu) == pytest.approx(vg_peak_density(model.params), rel=1e-2)

    def test_density_is_real(self, vg_star):
        samples = invert_weighted_qn(vg_star, InversionGrid.build(2, 512, a=100.0, span=40.0))
        assert samples.imag_ratio <= 1e-8

    def test_riemann_sum_is_flagged(self, vg_star, caplog):
        with caplog.at_level(logging.WARNING, logger='composite_frft.inversion'):
            samples = invert_nonweighted(vg_star, InversionGrid.build(2, 512, a=100.0, span=40.0))
        assert samples.imag_ratio > 1e-8
        assert 'imaginary part' in caplog.text

    def test_weighted_scheme_is_at_least_as_accurate(self, vg_star, vg_star_reference):
        grid, reference = vg_star_reference
        report = compare_schemes(vg_star, grid, ['weighted_qn', 'nonweighted', 'integral'], reference=reference)
        errors = {label: error.max for label, error in report.true_errors.items()}

        assert errors['weighted_qn'] <= 1.01 * errors['nonweighted']
        assert abs(errors['weighted_qn'] - errors['integral']) <= 0.1 * errors['integral']


class TestTemperedStable:

    @pytest.mark.slow
    def test_schemes_agree_with_oracle(self, gts_star):
        grid = InversionGrid.build(2, 512, a=300.0, span=4.0)
        report = compare_schemes(gts_star, grid, ['weighted_qn', 'composite_qn', 'nonweighted', 'integral'],
                                 reference=False)
        for discrepancy in report.pairwise.values():
            assert discrepancy.max <= 1e-6

        mean, variance = gts_star.cumulants()
        for label in ('weighted_qn', 'nonweighted', 'integral'):
            samples = report.samples[label]
            for offset in (-2.0, 0.0, 2.0):
                k = samples.index_near(mean + offset * math.sqrt(variance))
                assert samples.density[k] == pytest.approx(gts_star.density(samples.nodes[k]), abs=1e-6)


class TestReport:

    def test_compare_with_closed_form(self, vg_star):
        grid = InversionGrid.build(2, 64, a=50.0, span=10.0)
        report = compare_schemes(vg_star, grid, ['weighted_qn', 'composite_qn'])

        assert report.schemes == ['weighted_qn', 'composite_qn']
        assert list(report.pairwise) == [('weighted_qn', 'composite_qn')]
        assert report.pairwise[('weighted_qn', 'composite_qn')].max <= 1e-10 * report.peak
        assert set(report.true_errors) == {'weighted_qn', 'composite_qn'}
        assert report.reference.shape == (grid.M,)

    def test_no_reference_without_closed_form(self, gts_star):
        grid = InversionGrid.build(2, 32, a=300.0, span=4.0)
        report = compare_schemes(gts_star, grid, ['weighted_qn', 'composite_nq'])
        assert report.reference is None
        assert report.true_errors == {}

    def test_reference_can_be_disabled(self, vg_star):
        grid = InversionGrid.build(2, 32, a=50.0, span=10.0)
        assert compare_schemes(vg_star, grid, ['weighted_qn', 'integral'], reference=False).reference is None

    def test_repeated_scheme(self, vg_star):
        grid = InversionGrid.build(2, 32, a=50.0, span=10.0)
        report = compare_schemes(vg_star, grid, ['weighted_qn', 'weighted_qn'], reference=None)
        assert report.schemes == ['weighted_qn', 'weighted_qn:2']
        assert report.pairwise[('weighted_qn', 'weighted_qn:2')].max == 0.0

    def test_needs_two_schemes(self, vg_star):
        with pytest.raises(ConfigError):
            compare_schemes(vg_star, InversionGrid.build(2, 32), ['weighted_qn'])
