import math

import numpy as np
import pytest
import scipy.special as sps
from hypothesis import given, settings
from hypothesis import strategies as st

from heisenberg_xray.core import (
    HeisenbergPoint,
    ModeIndex,
    QuadratureSpec,
    RationalMomentum,
    basis_callable,
    gram_matrix,
)
from heisenberg_xray.xray import (
    PlanarAtom,
    SignalDecomposition,
    adjoint_quadrature,
    adjoint_spectral,
    constant_audit,
    diagonal_factor,
    forward_spectral,
    intertwining_residual,
    normal_spectral,
    partial_isometry,
    planar_multiplier,
    printed_coefficient,
    quadrature_coefficient,
    singular_coefficient,
    svd_factors,
    xray_quadrature,
)

PI = math.pi
ONE = RationalMomentum(1)
HALF = RationalMomentum(1, 2)
MOMENTA = [RationalMomentum.parse(r) for r in ("1", "2", "3", "1/2", "1/3", "2/3")]

# 2 pi e^{-1/2}; the oracle value of |c(1, 0)| at r = 1
C10 = 3.8109445294603597

modes = st.builds(ModeIndex, st.sampled_from([-3, -2, -1, 1, 2, 3]), st.integers(0, 5), st.integers(0, 3))
momenta = st.sampled_from(MOMENTA)


def closed_form(n, j, r):
    # 2 pi sqrt(ab) sqrt(j!/(j+m)!) (-1)^m m^{m/2} e^{-m/2} L_j^(m)(m), via scipy
    m = r.shift(n)
    if m is None:
        return 0.0
    ratio = math.exp(0.5 * (math.lgamma(j + 1) - math.lgamma(j + m + 1)))
    return r.period() * ratio * (-1) ** m * m ** (m / 2) * math.exp(-m / 2) * sps.eval_genlaguerre(j, m, m)


def random_signal(rng, count, n_max=2, j_max=3, k_max=2):
    out = {}
    while len(out) < count:
        n = int(rng.choice([v for v in range(-n_max, n_max + 1) if v]))
        mode = ModeIndex(n, int(rng.integers(0, j_max + 1)), int(rng.integers(0, k_max + 1)))
        out[mode] = complex(*rng.normal(size=2))
    return SignalDecomposition(modes=out)


class TestQuadrature:
    def test_constant(self):
        one = lambda z, t: np.ones(np.broadcast(z, t).shape)
        assert xray_quadrature(one, ONE, HeisenbergPoint(0.3j, 1.0)) == pytest.approx(2 * PI, abs=1e-12)
        assert xray_quadrature(one, HALF, HeisenbergPoint(0, 0)) == pytest.approx(2 * PI * math.sqrt(2), abs=1e-12)

    def test_delta_z_mode_vanishes(self):
        f = basis_callable(ModeIndex(1, 0, 0))
        for p in [HeisenbergPoint(0, 0), HeisenbergPoint(0.4 - 0.2j, 2.0), HeisenbergPoint(1.3, 0.1)]:
            assert abs(xray_quadrature(f, HALF, p)) < 1e-10

    def test_kernel_mode_vanishes(self):
        f = basis_callable(ModeIndex(2, 2, 0))
        for p in [HeisenbergPoint(0, 0), HeisenbergPoint(0.4 - 0.2j, 2.0), HeisenbergPoint(1.3, 0.1)]:
            assert abs(xray_quadrature(f, ONE, p)) < 1e-8

    def test_array_points(self):
        f = basis_callable(ModeIndex(1, 1, 0))
        z = np.array([0.2, 0.5j])
        t = np.array([0.0, 1.0])
        out = xray_quadrature(f, ONE, (z, t), 512)
        assert out.shape == (2,)
        assert out[1] == pytest.approx(xray_quadrature(f, ONE, HeisenbergPoint(0.5j, 1.0), 512))

    def test_rejects_few_nodes(self):
        with pytest.raises(ValueError):
            xray_quadrature(basis_callable(ModeIndex(1, 0, 0)), ONE, HeisenbergPoint(0, 0), 8)


class TestCoefficient:
    def test_examples(self):
        assert singular_coefficient(1, 0, ONE) == pytest.approx(-C10, abs=1e-13)
        assert singular_coefficient(1, 0, ONE) == pytest.approx(-2 * PI * math.exp(-0.5), abs=1e-13)
        assert singular_coefficient(1, 0, HALF) == 0
        assert singular_coefficient(2, 2, ONE) == 0

    def test_example_against_direct_quadrature(self):
        # coefficient read off by the 4096-node trapezoid of M_01^1 along gamma_1
        quad = quadrature_coefficient(1, 0, ONE)
        assert quad == pytest.approx(-C10, abs=1e-10)

    @given(modes, momenta)
    @settings(max_examples=150, deadline=None)
    def test_closed_form(self, mode, r):
        got = singular_coefficient(mode.n, mode.j, r)
        want = closed_form(mode.n, mode.j, r)
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))

    @pytest.mark.parametrize("n,j,r", [(1, 0, "1"), (2, 1, "1/2"), (-3, 2, "2/3"), (3, 4, "1/3"), (-1, 3, "2")])
    def test_against_quadrature(self, n, j, r):
        r = RationalMomentum.parse(r)
        assert abs(quadrature_coefficient(n, j, r, k=1) - singular_coefficient(n, j, r)) < 1e-9

    def test_even_in_n(self):
        for j in range(5):
            for r in MOMENTA:
                assert singular_coefficient(3, j, r) == singular_coefficient(-3, j, r)

    def test_printed_modulus_ratio(self):
        for m in range(1, 5):
            for j in range(4):
                c = singular_coefficient(m, j, ONE)
                if c != 0:
                    assert abs(printed_coefficient(m, j)) / abs(c) == pytest.approx(math.exp(-(PI - 1) * m / 2))


class TestSpectralOperators:
    def test_forward_examples(self):
        out = forward_spectral(SignalDecomposition(planar=(PlanarAtom((0, 0), 1),)), ONE)
        assert out.planar[0].amp == pytest.approx(2 * PI)
        out = forward_spectral(SignalDecomposition.unit(1, 0, 0), ONE)
        assert dict(out.modes) == pytest.approx({ModeIndex(1, 1, 0): -2 * PI * math.exp(-0.5)})
        assert out.momentum == ONE

    def test_adjoint_examples(self):
        out = adjoint_spectral(SignalDecomposition.unit(1, 1, 0), ONE)
        assert dict(out.modes) == pytest.approx({ModeIndex(1, 0, 0): np.conj(singular_coefficient(1, 0, ONE))})
        assert len(adjoint_spectral(SignalDecomposition.unit(1, 0, 0), ONE)) == 0

    def test_normal_examples(self):
        out = normal_spectral(SignalDecomposition.unit(1, 0, 0), ONE)
        assert out.modes[ModeIndex(1, 0, 0)] == pytest.approx(C10**2, abs=1e-11)
        assert out.modes[ModeIndex(1, 0, 0)] == pytest.approx(14.5233, abs=1e-4)
        assert len(normal_spectral(SignalDecomposition.unit(3, 1, 0), HALF)) == 0

    @given(modes, momenta)
    @settings(max_examples=150, deadline=None)
    def test_index_shift_structure(self, mode, r):
        out = forward_spectral(SignalDecomposition.unit(*mode), r)
        for target in out.modes:
            assert (target.n, target.k) == (mode.n, mode.k)
            assert target.j - mode.j == r.shift(mode.n)

    def test_coefficient_adjointness(self):
        rng = np.random.default_rng(4)
        for r in MOMENTA:
            for _ in range(10):
                x = random_signal(rng, 8, 3, 5, 2)
                y = random_signal(rng, 8, 3, 8, 2)
                lhs = forward_spectral(x, r).vdot(y)
                rhs = x.vdot(adjoint_spectral(y, r))
                assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    def test_normal_eigenvalues(self):
        for r in MOMENTA:
            for n in (-2, 1, 3):
                for j in range(4):
                    out = normal_spectral(SignalDecomposition.unit(n, j, 1), r)
                    s2 = abs(singular_coefficient(n, j, r)) ** 2
                    assert out.modes.get(ModeIndex(n, j, 1), 0) == pytest.approx(s2, rel=1e-13)

    def test_pointwise_matches_quadrature(self):
        rng = np.random.default_rng(9)
        rad = rng.uniform(0.5, 1.5, 6)
        z = rad * np.exp(1j * rng.uniform(0, 2 * PI, 6))
        t = rng.uniform(0, PI, 6)
        for r in (ONE, HALF, RationalMomentum(2, 3)):
            x = random_signal(rng, 4)
            got = forward_spectral(x, r).evaluate(z, t)
            want = xray_quadrature(x, r, (z, t), 2048)
            np.testing.assert_allclose(got, want, rtol=1e-8, atol=1e-10)

    def test_adjoint_matches_quadrature(self):
        rng = np.random.default_rng(10)
        z = np.array([0.7 + 0.3j, -0.4 + 0.9j, 1.1j])
        t = np.array([0.2, 1.4, 2.9])
        for r in (ONE, HALF):
            y = random_signal(rng, 4)
            got = adjoint_spectral(y, r).evaluate(z, t)
            want = adjoint_quadrature(y, r, (z, t), 2048)
            np.testing.assert_allclose(got, want, rtol=1e-8, atol=1e-10)


def test_adjointness_under_quadrature_inner_products():
    rng = np.random.default_rng(12)
    q = QuadratureSpec(t_nodes=16, angular_nodes=64, radial_nodes=80, radial_cutoff=9.0)
    for r in (ONE, HALF):
        f = random_signal(rng, 5)
        g = random_signal(rng, 5)
        If = lambda z, t: xray_quadrature(f, r, (z, t), 128)
        Ig = lambda z, t: adjoint_quadrature(g, r, (z, t), 128)
        lhs = gram_matrix([If], [g], q)[0, 0]
        rhs = gram_matrix([f], [Ig], q)[0, 0]
        assert abs(lhs - rhs) <= 1e-6
        # both agree with exact coefficient arithmetic
        assert abs(lhs - forward_spectral(f, r).vdot(g)) <= 1e-6


class TestPlanar:
    def test_multiplier(self):
        xi = (1.3, -0.4)
        r = RationalMomentum(2, 3)
        want = 2 * PI * math.sqrt(6) * sps.j0(math.sqrt(2 / 3) * math.hypot(*xi))
        assert planar_multiplier(xi, r) == pytest.approx(want, abs=1e-10)

    @pytest.mark.parametrize("r", ["1", "1/2", "3", "2/3"])
    def test_circle_average(self, r):
        r = RationalMomentum.parse(r)
        atom = PlanarAtom((0.9, 2.1), 0.5 - 0.25j)
        f = SignalDecomposition(planar=(atom,))
        theta = np.arange(1024) * (2 * PI / 1024)
        for z0 in (0.0, 0.4 - 1.2j):
            circle = z0 + r.sqrt_r * np.exp(1j * theta)
            mean = np.mean(atom.evaluate(circle))
            quad = xray_quadrature(f, r, HeisenbergPoint(z0, 0.7), 4096)
            assert abs(quad - r.period() * mean) < 1e-8
            spectral = forward_spectral(f, r).evaluate(z0, 0.7)
            assert abs(spectral - quad) < 1e-8


class TestSVD:
    def test_examples(self):
        sys = svd_factors(1, 0, ONE)
        assert sys.s == pytest.approx(C10, abs=1e-13)
        assert sys.phase == -1
        assert sys.target_j == 1
        sys = svd_factors(1, 0, HALF)
        assert (sys.s, sys.phase, sys.target_j) == (0, 1, None)

    @given(modes, momenta)
    @settings(max_examples=150, deadline=None)
    def test_invariants(self, mode, r):
        sys = svd_factors(mode.n, mode.j, r)
        assert sys.s >= 0
        assert abs(sys.phase) == pytest.approx(1.0, abs=1e-15)
        if not r.resolves(mode.n):
            assert sys.s == 0
        if sys.s > 0:
            assert isinstance(sys.target_j, int)

    def test_kernel_phase_is_one(self):
        assert svd_factors(2, 2, ONE).phase == 1

    def test_factorization(self):
        rng = np.random.default_rng(13)
        for r in MOMENTA:
            x = random_signal(rng, 10, 3, 5, 2)
            composed = partial_isometry(diagonal_factor(x, r), r)
            assert composed.max_abs_difference(forward_spectral(x, r).with_momentum(None)) < 1e-12

    def test_partial_isometry_preserves_norm(self):
        rng = np.random.default_rng(14)
        for r in MOMENTA:
            x = random_signal(rng, 10, 3, 5, 2)
            visible = SignalDecomposition(
                modes={m: a for m, a in x.modes.items() if svd_factors(m.n, m.j, r).s > 0}
            )
            assert partial_isometry(visible, r).norm() == visible.norm()

    def test_intertwining(self):
        for r in MOMENTA:
            for n in range(-4, 5):
                if n == 0:
                    continue
                for j in range(8):
                    assert intertwining_residual(ModeIndex(n, j, 0), r) == 0


def test_constant_audit_rows():
    rows = constant_audit(m_max=2, j_max=2, s_nodes=1024)
    assert [(row.m, row.j) for row in rows] == [(m, j) for m in (1, 2) for j in range(3)]
    for row in rows:
        assert abs(row.quadrature_modulus - row.oracle_modulus) < 1e-8
        if row.ratio is not None:
            assert row.ratio == pytest.approx(math.exp(-(PI - 1) * row.m / 2))
    assert rows[0].ratio == pytest.approx(0.34273547927, abs=1e-10)
