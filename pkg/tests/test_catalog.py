import cmath
import math

import numpy as np
import pytest

from brennanlab.catalog import (
    DescriptorError,
    MapDomainError,
    cardioid_map,
    identity_map,
    koebe_map,
    make_pair,
    moebius_map,
    parse_descriptor,
    sector_map,
)

ALL_NAMES = ["identity", "moebius:0.3,0.2,1.1", "koebe",
             "sector:0.5", "sector:1.5", "sector:2", "cardioid"]


def interior_points(n=100, radius=0.9):
    """Quasi-random interior points on a golden-angle spiral."""
    pts = []
    for i in range(n):
        r = radius * math.sqrt((i + 0.5) / n)
        theta = 2.0 * math.pi * ((i * 0.6180339887498949) % 1.0)
        pts.append(r * cmath.exp(1j * theta))
    return pts


class TestDescriptors:
    def test_parse_and_label_round_trip(self):
        for text in ALL_NAMES + ["koebe*moebius:0.3,0,0.5"]:
            d = parse_descriptor(text)
            assert parse_descriptor(d.label()) == d

    def test_unknown_family(self):
        with pytest.raises(DescriptorError):
            parse_descriptor("annulus")

    def test_bad_parameters(self):
        with pytest.raises(DescriptorError):
            parse_descriptor("sector")
        with pytest.raises(DescriptorError):
            parse_descriptor("sector:2.5")
        with pytest.raises(DescriptorError):
            parse_descriptor("moebius:0.3,0.2")
        with pytest.raises(DescriptorError):
            parse_descriptor("moebius:1.5,0,0")
        with pytest.raises(DescriptorError):
            parse_descriptor("koebe:1")
        with pytest.raises(DescriptorError):
            parse_descriptor("koebe*sector:1.5")


class TestEvaluation:
    def test_koebe_at_origin(self):
        pair = koebe_map()
        assert complex(pair.eval_psi(0j)) == 0j
        assert complex(pair.eval_dpsi(0j)) == pytest.approx(1.0)

    def test_koebe_slit_tip_boundary_limit(self):
        # documentation case: the raw closed form sends w = -1 to the slit tip
        pair = koebe_map()
        assert complex(pair.psi(-1.0 + 0j)) == pytest.approx(-0.25)

    def test_identity_passthrough(self):
        pair = identity_map()
        w = 0.3 + 0.4j
        assert complex(pair.eval_psi(w)) == pytest.approx(w)

    def test_sector_two_derivative_at_origin(self):
        # d/dw ((1-w)/(1+w))^beta = -2 beta (1-w)^(beta-1) (1+w)^-(beta+1)
        pair = sector_map(2.0)
        assert complex(pair.eval_dpsi(0j)) == pytest.approx(-4.0)

    def test_cardioid_derivative(self):
        pair = cardioid_map()
        assert complex(pair.eval_dpsi(0.5 + 0j)) == pytest.approx(0.5)

    def test_domain_validation(self):
        pair = koebe_map()
        with pytest.raises(MapDomainError):
            pair.eval_psi(1.2 + 0j)
        with pytest.raises(MapDomainError):
            pair.eval_dpsi(1.0 + 0j)

    def test_image_lands_in_domain(self):
        for name in ALL_NAMES:
            pair = make_pair(name)
            for w in interior_points(40):
                assert pair.domain_contains(complex(pair.eval_psi(w)))

    def test_nonvanishing_derivative(self):
        for name in ALL_NAMES:
            pair = make_pair(name)
            mags = np.abs(pair.dpsi(np.array(interior_points(100))))
            assert np.all(mags > 0.0)


class TestDerivativeConsistency:
    @pytest.mark.parametrize("name", ALL_NAMES)
    def test_matches_finite_differences(self, name):
        pair = make_pair(name)
        h = 1e-5
        for w in interior_points(25, radius=0.8):
            fd = (pair.psi(w + h) - pair.psi(w - h)) / (2.0 * h)
            exact = complex(pair.dpsi(w))
            assert complex(fd) == pytest.approx(exact, rel=1e-6)

    @pytest.mark.parametrize("name", ALL_NAMES)
    def test_cauchy_riemann(self, name):
        pair = make_pair(name)
        h = 1e-5
        for w in interior_points(100, radius=0.8):
            fx = (pair.psi(w + h) - pair.psi(w - h)) / (2.0 * h)
            fy = (pair.psi(w + 1j * h) - pair.psi(w - 1j * h)) / (2.0 * h)
            # holomorphy: d/dy = i d/dx
            scale = max(abs(complex(fx)), 1e-12)
            assert abs(complex(fy) - 1j * complex(fx)) / scale < 1e-5


class TestInversion:
    @pytest.mark.parametrize("name", ALL_NAMES)
    def test_round_trip(self, name):
        pair = make_pair(name)
        for w in interior_points(60, radius=0.95):
            z = complex(pair.eval_psi(w))
            w_back = pair.invert(z)
            assert abs(w_back - w) < 1e-10

    def test_koebe_origin_with_seed(self):
        pair = koebe_map()
        assert abs(pair.invert(0j, seed=0.1)) < 1e-12

    def test_forward_then_invert(self):
        pair = koebe_map()
        z = complex(pair.eval_psi(0.5j))
        assert pair.invert(z, seed=0.4j) == pytest.approx(0.5j, abs=1e-10)

    def test_identity_inversion(self):
        pair = identity_map()
        z = 0.2 - 0.7j
        assert pair.invert(z) == pytest.approx(z, abs=1e-12)

    def test_outside_domain_rejected(self):
        pair = koebe_map()
        with pytest.raises(MapDomainError):
            pair.invert(-0.3 + 0j)  # on the slit
        sector = sector_map(1.0)
        with pytest.raises(MapDomainError):
            sector.invert(-1.0 + 0j)  # outside the half-plane

    def test_jacobian_chain_rule(self):
        # phi'(z) * psi'(phi(z)) = 1 wherever both are evaluated
        pair = cardioid_map()
        for w in interior_points(20, radius=0.8):
            z = complex(pair.eval_psi(w))
            w_back = pair.invert(z)
            h = 1e-6
            dphi = (pair.invert(z + h) - pair.invert(z - h)) / (2.0 * h)
            assert dphi * complex(pair.dpsi(w_back)) == pytest.approx(1.0, rel=1e-5)

    def test_vectorized_inversion(self):
        pair = koebe_map()
        w = np.array(interior_points(50, radius=0.9))
        z = pair.psi(w)
        w_back, ok = pair.invert_many(z, w * 0.9)
        assert np.all(ok)
        assert np.max(np.abs(w_back - w)) < 1e-10


class TestSingularExponents:
    """Declared local exponents against log-slope measurements of |psi'|.

    The two-point slope of log|psi'(w0(1-t))| in log t between successive
    t values converges to the exponent; a single-point ratio would carry a
    log(prefactor)/log(t) bias that decays too slowly to test against.
    """

    @pytest.mark.parametrize("name", ["koebe", "sector:0.5", "sector:1.5",
                                      "sector:2", "cardioid"])
    def test_log_slope_matches_declared_exponent(self, name):
        pair = make_pair(name)
        ts = [1e-2, 1e-3, 1e-4]
        for sp in pair.singular_points:
            mags = [abs(complex(pair.dpsi(sp.location * (1.0 - t)))) for t in ts]
            for (t1, m1), (t2, m2) in zip(zip(ts, mags), zip(ts[1:], mags[1:])):
                slope = (math.log(m2) - math.log(m1)) / (math.log(t2) - math.log(t1))
                assert slope == pytest.approx(sp.exponent, abs=0.05)

    def test_koebe_declared_data(self):
        pair = koebe_map()
        data = {sp.location: sp.exponent for sp in pair.singular_points}
        assert data == {1.0 + 0j: -3.0, -1.0 + 0j: 1.0}

    def test_sector_declared_data(self):
        pair = sector_map(1.5)
        data = {sp.location: sp.exponent for sp in pair.singular_points}
        assert data[1.0 + 0j] == pytest.approx(0.5)
        assert data[-1.0 + 0j] == pytest.approx(-2.5)


class TestMoebiusComposition:
    def test_trivial_twist_is_identity_behavior(self):
        pair = identity_map().compose_with_moebius(0j, 0.0)
        for w in interior_points(10):
            assert complex(pair.eval_psi(w)) == pytest.approx(w)

    def test_rotation_chain_rule(self):
        pair = koebe_map().compose_with_moebius(0j, math.pi)
        assert complex(pair.eval_dpsi(0j)) == pytest.approx(-1.0)

    def test_singular_points_transported(self):
        pair = koebe_map().compose_with_moebius(0j, math.pi)
        angles = sorted(pair.singular_angles)
        assert angles[0] == pytest.approx(0.0, abs=1e-12)
        assert angles[1] == pytest.approx(math.pi, abs=1e-12)
        # exponents ride along unchanged
        assert sorted(sp.exponent for sp in pair.singular_points) == [-3.0, 1.0]

    def test_twisted_map_still_conformal(self):
        pair = cardioid_map().compose_with_moebius(0.3 + 0.1j, 0.7)
        h = 1e-5
        for w in interior_points(20, radius=0.8):
            fd = (pair.psi(w + h) - pair.psi(w - h)) / (2.0 * h)
            assert complex(fd) == pytest.approx(complex(pair.dpsi(w)), rel=1e-6)

    def test_invalid_parameter(self):
        with pytest.raises(MapDomainError):
            koebe_map().compose_with_moebius(1.0 + 0j, 0.0)
        with pytest.raises(DescriptorError):
            moebius_map(2.0 + 0j)
