import numpy as np
import pytest

from nvdetect.core import EnsembleGeometry, sample_probe_sites
from nvdetect.errors import SingularityError
from nvdetect.geomfactors import (f_ent_closed, f_sep_closed,
                                  gamma_ent_continuum, gamma_ent_discrete,
                                  gamma_sep_continuum, gamma_sep_discrete,
                                  quadrature_ent_tilde, quadrature_sep_tilde)

ORIGIN = np.zeros((1, 3))


def test_sep_discrete_on_axis_is_zero():
    probes = np.array([[0.0, 0.0, 2.0]])
    assert gamma_sep_discrete(ORIGIN, probes).value == 0.0


def test_sep_discrete_diagonal_probe():
    probes = np.array([[1.0, 1.0, 1.0]])
    # A = B = -3/3^(5/2)  ->  A^2 + B^2 = 2/27
    assert gamma_sep_discrete(ORIGIN, probes).value == pytest.approx(2.0 / 27.0, rel=1e-14)


def test_sep_discrete_additive_in_nuclei():
    rng = np.random.default_rng(0)
    probes = rng.normal(size=(5, 3)) + np.array([0, 0, 3.0])
    single = gamma_sep_discrete(ORIGIN, probes).value
    stacked = gamma_sep_discrete(np.zeros((4, 3)), probes).value
    assert stacked == pytest.approx(4 * single, rel=1e-14)


def test_sep_discrete_coincident_pair_raises():
    with pytest.raises(SingularityError):
        gamma_sep_discrete(ORIGIN, np.zeros((1, 3)))


def test_ent_discrete_mirror_pair():
    probes = np.array([[1.0, 1.0, 1.0], [1.0, -1.0, 1.0]])
    # B components cancel by y-antisymmetry; (sum A)^2 = (2*3/3^(5/2))^2 = 4/27
    assert gamma_ent_discrete(ORIGIN, probes).value == pytest.approx(4.0 / 27.0, rel=1e-14)


def test_ent_discrete_axis_probes_zero():
    probes = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 2.0]])
    assert gamma_ent_discrete(ORIGIN, probes).value == 0.0


def test_ent_equals_sep_for_single_probe():
    rng = np.random.default_rng(1)
    probes = rng.normal(size=(1, 3)) + np.array([0, 0, 3.0])
    assert (gamma_ent_discrete(ORIGIN, probes).value
            == pytest.approx(gamma_sep_discrete(ORIGIN, probes).value, rel=1e-15))


# Closed forms vs the quadrature oracle ------------------------------------------

def test_f_sep_zero_height():
    for r in (0.3, 1.0, 5.0):
        assert f_sep_closed(r, 1.0) == pytest.approx(0.0, abs=1e-15)
        assert f_sep_closed(r, 1.0, "printed") == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("r,z", [(1.16, 1.29), (0.5, 2.0), (5.05, 4.96), (0.2, 1.05)])
def test_f_sep_corrected_matches_quadrature(r, z):
    quad = 8.0 / (3.0 * np.pi) * quadrature_sep_tilde(r, z)[0]
    assert f_sep_closed(r, z) == pytest.approx(quad, rel=1e-8)


def test_f_sep_frozen_values():
    assert f_sep_closed(1.16, 1.29) == pytest.approx(0.12689122301216654, rel=1e-12)
    assert f_sep_closed(0.5, 2.0) == pytest.approx(0.029856504302217797, rel=1e-10)


def test_f_sep_printed_disagrees_with_quadrature():
    # documented informational finding: the printed closed form is not the integral
    quad = 8.0 / (3.0 * np.pi) * quadrature_sep_tilde(1.16, 1.29)[0]
    printed = f_sep_closed(1.16, 1.29, "printed")
    assert abs(printed - quad) / quad > 0.5


def test_f_ent_corrected_zero_height():
    for r in (0.3, 1.0, 5.0):
        assert f_ent_closed(r, 1.0) == pytest.approx(0.0, abs=1e-15)


def test_f_ent_printed_fails_zero_height():
    printed = f_ent_closed(1.0, 1.0, "printed")
    assert printed == pytest.approx(9.655174080868961, rel=1e-12)
    assert printed == pytest.approx(9.67, rel=0.01)   # quoted approximate value
    assert printed > 1.0                               # does not vanish


@pytest.mark.parametrize("r,z", [(5.05, 4.96), (1.16, 1.29), (2.0, 3.0)])
def test_f_ent_corrected_matches_quadrature(r, z):
    (int_a, int_b), _ = quadrature_ent_tilde(r, z)
    assert f_ent_closed(r, z) == pytest.approx(int_a**2, rel=1e-8)
    assert abs(int_b) <= 1e-10


def test_f_ent_frozen_value():
    assert f_ent_closed(5.05, 4.96) == pytest.approx(5.387359160443826, rel=1e-12)


def test_quadrature_sep_zero_height():
    assert quadrature_sep_tilde(2.0, 1.0)[0] == 0.0


def test_domain_errors():
    with pytest.raises(ValueError):
        f_sep_closed(1.0, 0.5)
    with pytest.raises(ValueError):
        f_ent_closed(-1.0, 2.0)
    with pytest.raises(ValueError):
        f_sep_closed(1.0, 2.0, "bogus")


def test_grid_agreement_and_monotonicity():
    rs = np.linspace(0.2, 8.0, 5)
    zs = np.linspace(1.05, 8.0, 5)
    for r in rs:
        prev_sep, prev_ent = -np.inf, -np.inf
        for z in zs:
            quad = 8.0 / (3.0 * np.pi) * quadrature_sep_tilde(r, z)[0]
            sep = f_sep_closed(r, z)
            assert sep == pytest.approx(quad, rel=1e-8)
            (int_a, _), _ = quadrature_ent_tilde(r, z)
            ent = f_ent_closed(r, z)
            assert ent == pytest.approx(int_a**2, rel=1e-8)
            # both factors are nondecreasing in z for fixed r
            assert sep >= prev_sep - 1e-15
            assert ent >= prev_ent - 1e-15
            prev_sep, prev_ent = sep, ent


# Continuum limits -----------------------------------------------------------------

def test_continuum_linearity_and_zero_height():
    geom = EnsembleGeometry.from_dimensionless(5e-7, 1.16, 1.29, rho_nv=1.1e23)
    one = gamma_sep_continuum(1, geom).value
    two = gamma_sep_continuum(2, geom).value
    assert two == pytest.approx(2 * one, rel=1e-15)
    flat = EnsembleGeometry.from_dimensionless(5e-7, 1.16, 1.0, rho_nv=1.1e23)
    assert gamma_sep_continuum(1, flat).value == pytest.approx(0.0, abs=1e-15)
    assert gamma_ent_continuum(1, flat).value == pytest.approx(0.0, abs=1e-15)
    e_one = gamma_ent_continuum(1, geom).value
    e_two = gamma_ent_continuum(2, geom).value
    assert e_two == pytest.approx(2 * e_one, rel=1e-15)


def test_continuum_quadrature_variant_agrees():
    geom = EnsembleGeometry.from_dimensionless(5e-7, 1.16, 1.29, rho_nv=1.1e23)
    closed = gamma_sep_continuum(3, geom)
    quad = gamma_sep_continuum(3, geom, variant="quadrature")
    assert quad.value == pytest.approx(closed.value, rel=1e-9)
    assert quad.method == "quadrature"
    assert quad.est_error >= 0.0


def test_monte_carlo_matches_continuum_sep():
    geom = EnsembleGeometry.from_dimensionless(1.0, 1.16, 1.29, rho_nv=1.0)
    n = 100_000
    sites = sample_probe_sites(geom, n, seed=314)
    positions = np.array([s.position for s in sites])
    total = gamma_sep_discrete(ORIGIN, positions).value
    mc = total * geom.rho_nv * geom.volume / n
    continuum = gamma_sep_continuum(1, geom).value
    assert mc == pytest.approx(continuum, rel=0.01)


def test_monte_carlo_matches_continuum_ent():
    # the coherent integrand is heavy-tailed at the entangled optimum, so this
    # needs more samples than the separable check for a 1% window
    geom = EnsembleGeometry.from_dimensionless(1.0, 5.05, 4.96, rho_nv=1.0)
    n = 400_000
    sites = sample_probe_sites(geom, n, seed=2718)
    positions = np.array([s.position for s in sites])
    from nvdetect.core import dipole_components
    a, b, _ = dipole_components(-positions)
    scale = geom.rho_nv * geom.volume / n
    mc = (scale * a.sum()) ** 2 + (scale * b.sum()) ** 2
    continuum = gamma_ent_continuum(1, geom).value
    assert mc == pytest.approx(continuum, rel=0.01)
    # standard-error-scaled bound on the linear estimator
    mean_a = geom.volume * a.mean()
    stderr = geom.volume * a.std(ddof=1) / np.sqrt(n)
    exact_a = -np.sqrt(continuum)    # integrand is negative on the domain
    assert abs(mean_a - exact_a) <= 4.0 * stderr


def test_discrete_accepts_spin_sites():
    geom = EnsembleGeometry.from_dimensionless(1.0, 1.0, 1.5, rho_nv=1.0)
    sites = sample_probe_sites(geom, 10, seed=5)
    arr = np.array([s.position for s in sites])
    assert (gamma_sep_discrete(ORIGIN, sites).value
            == gamma_sep_discrete(ORIGIN, arr).value)
