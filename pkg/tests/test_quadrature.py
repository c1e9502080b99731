"""Unit tests for core/quadrature.py and core/boundary.py."""

import cmath
import math

import numpy as np
import pytest


def _laurent(coeff, power):
    """w + coeff / w^power."""
    from core.rational import Polynomial, RationalMap

    num = Polynomial((coeff,) + (0,) * power + (1,))
    den = Polynomial((0,) * power + (1,))
    return RationalMap(num, den)


@pytest.fixture(scope="module")
def quarter():
    from core.quadrature import build_domain

    return build_domain(_laurent(0.25, 2), name="quarter-cubed")


@pytest.fixture(scope="module")
def ellipse():
    from core.quadrature import build_domain

    return build_domain(_laurent(0.5, 1), name="ellipse")


# =========================
# Tests for core/boundary.py
# =========================

class TestBoundary:
    """Tests for boundary sampling and self-contacts."""

    def test_circle_sampling(self):
        """Samples are f(e^{2 pi i k / n})."""
        from core.boundary import sample_boundary

        f = _laurent(0.25, 2)
        z = sample_boundary(f, 8)

        assert z.shape == (8,)
        assert z[0] == pytest.approx(1.25)
        assert z[2] == pytest.approx(1j + 1 / (4 * (1j) ** 2))

    def test_figure_eight_crosses(self):
        """A lemniscate-like polyline has a proper self-crossing."""
        from core.boundary import segment_crossings, signed_gap

        t = 2 * np.pi * (np.arange(400) + 0.5) / 400
        z = np.sin(t) + 1j * np.sin(t) * np.cos(t)

        assert len(segment_crossings(z)) >= 1
        assert signed_gap(z, 10) < 0

    def test_circle_does_not_cross(self):
        """A round circle has no crossings and gap near its diameter scale."""
        from core.boundary import circle_points, segment_crossings, signed_gap

        z = circle_points(512)

        assert len(segment_crossings(z)) == 0
        assert signed_gap(z, 10) > 0

    def test_near_contacts(self):
        """Two parallel strands closer than the radius are reported."""
        from core.boundary import near_contacts

        x = np.linspace(-1, 1, 50)
        z = np.concatenate([x + 0.01j, x[::-1] - 0.01j])

        contacts = near_contacts(z, 0.05, 5)

        assert contacts
        assert contacts[0].distance == pytest.approx(0.02, abs=0.02)

    def test_rasterize_curve(self):
        """Only pixels the curve visits are marked."""
        from core.boundary import rasterize_curve

        z = np.array([0.1 + 0.9j, 0.9 + 0.1j])

        mask = rasterize_curve(z, 0.0, 1.0, 0.5, 0.5, 2, 2)

        assert mask[0, 0] and mask[1, 1]
        assert not mask[0, 1] and not mask[1, 0]


# =========================
# Construction
# =========================

class TestBuildDomain:
    """Tests for build_domain()."""

    def test_quarter_cubed_counts(self, quarter):
        """w + 1/(4w^2): d_f = 3, one node of weight 2 at infinity."""
        from core.rational import is_inf

        assert quarter.d_f == 3
        assert quarter.d_Omega == 2
        assert quarter.n_Omega == 1
        assert quarter.node_at_infinity
        assert is_inf(quarter.nodes[0].location)
        assert quarter.nodes[0].weight == 2
        assert quarter.crit_f.total == 2 * quarter.d_f - 2

    def test_certificate(self, quarter):
        """The certificate records a clean boundary."""
        cert = quarter.certificate

        assert cert.crossings == 0
        assert cert.injectivity_failures == 0
        assert cert.min_gap > 0
        assert cert.max_critical_modulus == pytest.approx(2 ** (-1 / 3), abs=1e-9)
        assert cert.critical_value_margin > 1e-6

    def test_critical_set(self, quarter):
        """crit(f) = {0, 2^(-1/3) omega^k}."""
        c = 2 ** (-1 / 3)
        expected = [0j] + [c * cmath.exp(2j * math.pi * k / 3) for k in range(3)]
        found = [r.location for r in quarter.crit_f.finite()]

        for e in expected:
            assert min(abs(f - e) for f in found) < 1e-10

    def test_critical_values_in_droplet(self, quarter):
        """Every nonzero critical value has all its preimages in the disk."""
        from core.quadrature import RegionTag, membership

        for r in quarter.crit_f.finite():
            if r.location == 0:
                continue
            m = membership(quarter, quarter.f(r.location))
            assert m.tag is RegionTag.DROPLET

    def test_pole_at_infinity_required(self):
        """A map bounded at infinity is not a uniformizer."""
        from core.errors import InvalidInput
        from core.quadrature import build_domain
        from core.rational import Polynomial, RationalMap

        with pytest.raises(InvalidInput):
            build_domain(RationalMap(Polynomial.of(1), Polynomial.of(0, 1)))

    def test_double_pole_at_infinity_rejected(self):
        """w^2 is not injective near infinity."""
        from core.errors import UnivalenceViolation
        from core.quadrature import build_domain
        from core.rational import RationalMap

        with pytest.raises(UnivalenceViolation):
            build_domain(RationalMap.polynomial(0, 0, 1))

    def test_exterior_critical_point_rejected(self):
        """w + 1/w^2 has critical points outside the unit disk."""
        from core.errors import UnivalenceViolation
        from core.quadrature import build_domain

        with pytest.raises(UnivalenceViolation):
            build_domain(_laurent(1.0, 2))

    def test_exterior_pole_rejected(self):
        """A finite pole outside the disk breaks univalence."""
        from core.errors import UnivalenceViolation
        from core.quadrature import build_domain
        from core.rational import Polynomial, RationalMap

        # w + 0.1/(w - 2)
        f = RationalMap(Polynomial.of(0.1, -2, 1), Polynomial.of(-2, 1))
        with pytest.raises(UnivalenceViolation):
            build_domain(f)

    def test_domain_from_spec(self, quarter):
        """A domain spec round-trips through JSON data."""
        from core.quadrature import domain_from_spec

        Q = domain_from_spec({"name": "q", "map": quarter.f.to_json(), "samples": 2048})

        assert Q.name == "q"
        assert Q.d_f == 3
        assert Q.certificate.samples == 2048

    @pytest.mark.parametrize(
        "data",
        [[], {"name": "x"}, {"map": {"numerator": [[1, 0]]}}],
    )
    def test_domain_from_spec_rejects(self, data):
        """Malformed specs raise InvalidInput."""
        from core.errors import InvalidInput
        from core.quadrature import domain_from_spec

        with pytest.raises(InvalidInput):
            domain_from_spec(data)

    def test_domain_from_spec_sample_floor(self, quarter):
        """Fewer than 64 boundary samples is refused."""
        from core.errors import InvalidInput
        from core.quadrature import domain_from_spec

        with pytest.raises(InvalidInput):
            domain_from_spec({"map": quarter.f.to_json(), "samples": 10})


# =========================
# Membership and sigma
# =========================

class TestSchwarzReflection:
    """Tests for membership() and schwarz_reflect()."""

    def test_membership_regions(self, quarter):
        """Far points are in Omega, the origin is in the droplet."""
        from core.quadrature import RegionTag, membership

        assert membership(quarter, 3 + 0j).tag is RegionTag.OMEGA
        assert membership(quarter, 0j).tag is RegionTag.DROPLET

    def test_membership_at_infinity(self, quarter):
        """Infinity belongs to Omega."""
        from core.quadrature import RegionTag, membership
        from core.rational import INF

        assert membership(quarter, INF).tag is RegionTag.OMEGA

    def test_boundary_is_fixed(self, quarter, ellipse):
        """sigma is the identity on the boundary."""
        from core.quadrature import RegionTag, membership, schwarz_reflect

        theta = 2 * np.pi * (np.arange(512) + 0.37) / 512
        for Q in (quarter, ellipse):
            worst = 0.0
            for t in theta:
                z = Q.f(cmath.exp(1j * t))
                assert membership(Q, z).tag is RegionTag.BOUNDARY
                worst = max(worst, abs(schwarz_reflect(Q, z) - z))
            assert worst < 1e-8

    def test_sigma_formula(self, quarter):
        """sigma(f(w)) = f(1/conj(w)) for exterior w."""
        from core.quadrature import schwarz_reflect

        w = 1.7 * cmath.exp(0.4j)
        z = quarter.f(w)

        assert schwarz_reflect(quarter, z) == pytest.approx(quarter.f(1 / w.conjugate()))

    def test_sigma_at_infinity(self, quarter, ellipse):
        """sigma(inf) = f(0): inf for a pole at 0, a finite point otherwise."""
        from core.rational import is_inf

        assert is_inf(quarter.sigma_at_inf())
        assert is_inf(ellipse.sigma_at_inf())

    def test_sigma_undefined_in_droplet(self, quarter):
        """sigma raises OutsideDomain on the droplet interior."""
        from core.errors import OutsideDomain
        from core.quadrature import schwarz_reflect

        with pytest.raises(OutsideDomain):
            schwarz_reflect(quarter, 0j)

    def test_ambiguous_band(self, quarter):
        """An exterior preimage together with a band preimage is ambiguous."""
        from core.errors import AmbiguousBand
        from core.quadrature import membership

        # a band of half-width 0.8 swallows both interior preimages of 3
        with pytest.raises(AmbiguousBand):
            membership(quarter, 3 + 0j, tol=0.8)

    def test_nodes_and_crit_sigma(self, quarter):
        """crit(sigma) lists the node at infinity with the pole's weight."""
        from core.quadrature import crit_sigma, nodes_of
        from core.rational import is_inf

        assert nodes_of(quarter) == quarter.nodes
        cs = crit_sigma(quarter)
        assert cs.total == 4
        assert sum(r.multiplicity for r in cs if is_inf(r.location)) == 1

    def test_sigma_fiber_counts(self, quarter):
        """sigma has d_f preimages over the droplet and d_f - 1 over Omega."""
        from core.quadrature import sigma_preimages

        rng = np.random.default_rng(0)
        for _ in range(50):
            z = complex(*rng.uniform(-0.3, 0.3, 2))
            assert sigma_preimages(quarter, z).total == 3
        for _ in range(50):
            r, t = rng.uniform(3, 6), rng.uniform(0, 2 * np.pi)
            assert sigma_preimages(quarter, r * cmath.exp(1j * t)).total == 2

    def test_conjugation_equivariance(self, quarter, ellipse):
        """Real coefficients give sigma(conj z) = conj sigma(z)."""
        from core.quadrature import schwarz_reflect

        rng = np.random.default_rng(5)
        for Q in (quarter, ellipse):
            for _ in range(20):
                r, t = rng.uniform(1.8, 4.0), rng.uniform(0, 2 * np.pi)
                z = r * cmath.exp(1j * t)
                assert schwarz_reflect(Q, z.conjugate()) == pytest.approx(
                    schwarz_reflect(Q, z).conjugate(), abs=1e-9
                )

    def test_degree_two_restriction(self, quarter):
        """Over sigma^{-1}(Omega), sigma is two-to-one from inside Omega."""
        from core.quadrature import RegionTag, membership, schwarz_reflect, sigma_preimages

        rng = np.random.default_rng(9)
        for _ in range(30):
            r, t = rng.uniform(3, 6), rng.uniform(0, 2 * np.pi)
            z = r * cmath.exp(1j * t)
            assert membership(quarter, schwarz_reflect(quarter, z)).tag is RegionTag.OMEGA

            fiber = sigma_preimages(quarter, z)
            assert fiber.total == 2
            for p in fiber:
                assert membership(quarter, p.location).tag is RegionTag.OMEGA
                assert schwarz_reflect(quarter, p.location) == pytest.approx(z, rel=1e-8)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
