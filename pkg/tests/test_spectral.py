"""Spectral-basis tests: modes, projection, synthesis, norms, CSV."""

from __future__ import annotations

import math

import numpy as np
import pytest

from fracback import (
    DomainError,
    Mode,
    ModeSet,
    NumericalError,
    QuadConfig,
    SpectralField,
    eigenfunction_eval,
    hp_norm,
    integrate_2d,
    l2_error,
    l2_norm,
    project,
    read_csv,
    synthesize,
    synthesize_grid,
    write_csv,
)

MS2 = ModeSet(dimension=2, truncation=30)
MS1 = ModeSet(dimension=1, truncation=30)
CFG = QuadConfig()


def _field_with(modeset: ModeSet, mode_indices: tuple, value: float) -> SpectralField:
    coeffs = np.zeros(modeset.size)
    coeffs[modeset.index_of(Mode(mode_indices))] = value
    return SpectralField(modeset, coeffs)


class TestMode:
    def test_eigenvalues(self):
        assert Mode((1, 1)).eigenvalue == 2.0
        assert Mode((2, 3)).eigenvalue == 13.0
        assert Mode((4,)).eigenvalue == 16.0

    def test_invalid_indices(self):
        for bad in ((0, 1), (-2,), (1, 2, 3), ()):
            with pytest.raises(DomainError):
                Mode(bad)


class TestModeSet:
    def test_size_and_order(self):
        assert MS2.size == 900
        assert MS1.size == 30
        modes = MS2.modes
        assert modes[0].indices == (1, 1)
        assert modes[1].indices == (1, 2)
        assert modes[30].indices == (2, 1)
        assert modes[-1].indices == (30, 30)

    def test_no_duplicates(self):
        assert len({m.indices for m in MS2.modes}) == 900

    def test_index_of_round_trip(self):
        for k in (0, 17, 450, 899):
            assert MS2.index_of(MS2.modes[k]) == k

    def test_index_of_out_of_range(self):
        with pytest.raises(DomainError):
            MS2.index_of(Mode((31, 1)))
        with pytest.raises(DomainError):
            MS2.index_of(Mode((5,)))

    def test_invalid_construction(self):
        with pytest.raises(DomainError):
            ModeSet(dimension=3, truncation=4)
        with pytest.raises(DomainError):
            ModeSet(dimension=2, truncation=0)

    def test_eigenvalue_vector_matches_modes(self):
        ev = MS2.eigenvalues
        assert ev.shape == (900,)
        for k in (0, 100, 899):
            assert ev[k] == MS2.modes[k].eigenvalue


class TestEigenfunction:
    def test_center_values(self):
        c = math.pi / 2.0
        assert abs(eigenfunction_eval(Mode((1, 1)), (c, c)) - 2.0 / math.pi) <= 1e-15
        assert abs(eigenfunction_eval(Mode((2, 1)), (c, c))) <= 1e-15

    def test_boundary_zero(self):
        for pt in ((0.0, 1.0), (math.pi, 1.0), (1.0, 0.0), (1.0, math.pi)):
            assert eigenfunction_eval(Mode((3, 2)), pt) == 0.0

    def test_d1_normalization(self):
        v = eigenfunction_eval(Mode((1,)), (math.pi / 2.0,))
        assert abs(v - math.sqrt(2.0 / math.pi)) <= 1e-15

    def test_outside_domain_rejected(self):
        with pytest.raises(DomainError):
            eigenfunction_eval(Mode((1, 1)), (-0.1, 1.0))
        with pytest.raises(DomainError):
            eigenfunction_eval(Mode((1,)), (3.2,))


class TestSpectralField:
    def test_validates_length_and_finiteness(self):
        with pytest.raises(DomainError):
            SpectralField(MS2, np.zeros(3))
        bad = np.zeros(900)
        bad[5] = math.inf
        with pytest.raises(DomainError):
            SpectralField(MS2, bad)

    def test_coeffs_read_only(self):
        f = SpectralField(MS2, np.zeros(900))
        with pytest.raises(ValueError):
            f.coeffs[0] = 1.0

    def test_coeff_lookup(self):
        f = _field_with(MS2, (3, 7), 2.5)
        assert f.coeff(Mode((3, 7))) == 2.5
        assert f.coeff(Mode((7, 3))) == 0.0


class TestProjection:
    def test_product_sine(self):
        f = project(lambda x, y: math.sin(x) * math.sin(y), MS2, CFG)
        c11 = f.coeff(Mode((1, 1)))
        assert abs(c11 - math.pi / 2.0) <= 1e-10
        rest = f.coeffs.copy()
        rest[MS2.index_of(Mode((1, 1)))] = 0.0
        assert float(np.max(np.abs(rest))) <= 1e-10

    def test_constant(self):
        f = project(lambda x, y: 1.0, MS2, CFG)
        for m in (1, 2, 3, 14, 29, 30):
            for n in (1, 2, 9, 30):
                got = f.coeff(Mode((m, n)))
                if m % 2 == 1 and n % 2 == 1:
                    want = (2.0 / math.pi) * (2.0 / m) * (2.0 / n)
                else:
                    want = 0.0
                assert abs(got - want) <= 1e-10, (m, n)

    def test_zero(self):
        f = project(lambda x, y: 0.0, MS2, CFG)
        assert float(np.max(np.abs(f.coeffs))) == 0.0

    def test_d1_projection(self):
        f = project(lambda x: math.sin(2.0 * x), MS1, CFG)
        want = math.sqrt(math.pi / 2.0)
        assert abs(f.coeff(Mode((2,))) - want) <= 1e-10

    def test_nan_integrand_rejected(self):
        with pytest.raises(NumericalError):
            project(lambda x, y: math.nan, MS2, CFG)


class TestSynthesis:
    def test_single_term(self):
        f = _field_with(MS2, (1, 1), math.pi / 2.0)
        got = synthesize(f, (math.pi / 2.0, math.pi / 2.0))
        assert abs(got - 1.0) <= 1e-14

    def test_zero_field(self):
        f = SpectralField(MS2, np.zeros(900))
        assert synthesize(f, (1.0, 2.0)) == 0.0

    def test_round_trip_of_eigenfunction(self):
        f = project(lambda x, y: eigenfunction_eval(Mode((1, 1)), (x, y)), MS2, CFG)
        for pt in ((0.3, 2.2), (math.pi / 2, math.pi / 2), (2.9, 0.4)):
            want = eigenfunction_eval(Mode((1, 1)), pt)
            assert abs(synthesize(f, pt) - want) <= 1e-9

    def test_grid_matches_pointwise(self):
        f = _field_with(MS2, (2, 3), 1.25)
        xs = np.linspace(0.0, math.pi, 7)
        grid = synthesize_grid(f, xs, xs)
        assert grid.shape == (7, 7)
        for i in (0, 3, 6):
            for j in (1, 4):
                want = synthesize(f, (float(xs[i]), float(xs[j])))
                assert abs(grid[i, j] - want) <= 1e-14

    def test_outside_domain_rejected(self):
        f = SpectralField(MS2, np.zeros(900))
        with pytest.raises(DomainError):
            synthesize(f, (4.0, 1.0))


class TestNorms:
    def test_unit_coefficient(self):
        f = _field_with(MS2, (5, 6), 1.0)
        assert l2_norm(f) == 1.0

    def test_projected_sine_norm(self):
        f = project(lambda x, y: math.sin(x) * math.sin(y), MS2, CFG)
        assert abs(l2_norm(f) - math.pi / 2.0) <= 1e-10

    def test_error_identities(self):
        f = project(lambda x, y: math.sin(x) * math.sin(y), MS2, CFG)
        assert l2_error(f, f) == 0.0
        g = SpectralField(MS2, np.zeros(900))
        assert abs(l2_error(f, g) - l2_norm(f)) <= 1e-15

    def test_modeset_mismatch(self):
        f = SpectralField(MS2, np.zeros(900))
        g = SpectralField(ModeSet(dimension=2, truncation=10), np.zeros(100))
        with pytest.raises(DomainError):
            l2_error(f, g)

    def test_hp_examples(self):
        f = project(lambda x, y: math.sin(x) * math.sin(y), MS2, CFG)
        assert hp_norm(f, 0.0) == l2_norm(f)
        assert abs(hp_norm(f, 1.0) - math.pi) <= 1e-9
        z = SpectralField(MS2, np.zeros(900))
        assert hp_norm(z, 2.0) == 0.0

    def test_hp_monotone_in_p(self):
        rng = np.random.default_rng(7)
        f = SpectralField(MS2, rng.normal(size=900))
        values = [hp_norm(f, p) for p in (0.0, 0.25, 0.5, 1.0, 2.0)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_negative_p_rejected(self):
        f = SpectralField(MS2, np.zeros(900))
        with pytest.raises(DomainError):
            hp_norm(f, -0.5)


class TestOrthonormality:
    def test_refined_quadrature(self):
        # inner products of eigenfunctions for m,n <= 10 at N=16
        cfg = QuadConfig(subintervals=16)
        pairs = [((1, 1), (1, 1)), ((1, 2), (1, 2)), ((10, 10), (10, 10)),
                 ((1, 1), (2, 1)), ((3, 4), (4, 3)), ((10, 9), (9, 10))]
        for a, b in pairs:
            ma, mb = Mode(a), Mode(b)
            got = integrate_2d(
                lambda x, y: eigenfunction_eval(ma, (x, y))
                * eigenfunction_eval(mb, (x, y)),
                cfg=cfg,
            )
            want = 1.0 if a == b else 0.0
            assert abs(got - want) <= 1e-9, (a, b)

    def test_default_quadrature_error_recorded(self):
        # At the default N=4, high-mode inner products carry visible
        # quadrature error.  The value is recorded (sanity-banded), not
        # asserted accurate: it exposes the benchmark recipe's coarse rule.
        # (Note some modes, e.g. (10,10), are integrated exactly by node
        # symmetry; (7,7) is not.)
        m = Mode((7, 7))
        got = integrate_2d(
            lambda x, y: eigenfunction_eval(m, (x, y)) ** 2, cfg=QuadConfig()
        )
        assert math.isfinite(got)
        assert 0.0 < got < 2.0

    def test_bessel_inequality(self):
        for f in (
            lambda x, y: math.sin(x) * math.sin(y),
            lambda x, y: x * (math.pi - x) * y * (math.pi - y),
        ):
            pf = project(f, MS2, CFG)
            mass = integrate_2d(lambda x, y: f(x, y) ** 2, cfg=QuadConfig(subintervals=16))
            assert l2_norm(pf) ** 2 <= mass + 1e-8


class TestCsv:
    def test_round_trip_and_bytes(self, tmp_path):
        rng = np.random.default_rng(11)
        f = SpectralField(MS2, rng.normal(size=900))
        p1 = tmp_path / "f1.csv"
        p2 = tmp_path / "f2.csv"
        write_csv(f, p1)
        g = read_csv(p1)
        assert g.modeset == f.modeset
        assert np.array_equal(g.coeffs, f.coeffs)
        write_csv(g, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_header_and_format(self, tmp_path):
        f = _field_with(MS2, (1, 1), math.pi / 2.0)
        path = tmp_path / "f.csv"
        write_csv(f, path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "m,n,coeff"
        assert lines[1].startswith("1,1,1.5707963267948966")
        assert len(lines) == 901

    def test_d1_header(self, tmp_path):
        f = SpectralField(MS1, np.zeros(30))
        path = tmp_path / "f1d.csv"
        write_csv(f, path)
        assert path.read_text(encoding="utf-8").splitlines()[0] == "m,coeff"

    def test_read_rejects_malformed(self, tmp_path):
        path = tmp_path / "bad.csv"
        # two rows cannot be a complete M^2 block for any integer M
        path.write_text("m,n,coeff\n1,1,0.5\n1,2,0.3\n", encoding="utf-8")
        with pytest.raises(DomainError):
            read_csv(path)
