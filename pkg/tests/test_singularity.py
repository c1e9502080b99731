"""Unit tests for core/singularity.py."""

import cmath
import math

import pytest


def _laurent(coeff, power):
    from core.rational import Polynomial, RationalMap

    return RationalMap(Polynomial((coeff,) + (0,) * power + (1,)), Polynomial((0,) * power + (1,)))


@pytest.fixture(scope="module")
def deltoid():
    from core.quadrature import build_domain

    return build_domain(_laurent(0.5, 2), name="half-cubed")


# =========================
# Weights and orders
# =========================

class TestDeltaWeight:
    """Tests for delta_weight()."""

    @pytest.mark.parametrize("n,delta", [(3, 0), (5, 1), (7, 1), (9, 2)])
    def test_cusp(self, n, delta):
        """Cusps weigh floor(n/4)."""
        from core.singularity import SingularityKind, delta_weight

        assert delta_weight(SingularityKind.CUSP, n) == delta

    @pytest.mark.parametrize("n,delta", [(1, 0), (3, 1), (5, 2)])
    def test_double_point(self, n, delta):
        """Double points weigh floor(n/2)."""
        from core.singularity import SingularityKind, delta_weight

        assert delta_weight(SingularityKind.DOUBLE_POINT, n) == delta

    @pytest.mark.parametrize("kind,n", [("cusp", 1), ("cusp", 4), ("double_point", 2), ("double_point", -1)])
    def test_invalid_orders(self, kind, n):
        """Even or too-small orders raise InvalidInput."""
        from core.errors import InvalidInput
        from core.singularity import delta_weight

        with pytest.raises(InvalidInput):
            delta_weight(kind, n)


class TestOrderFromSlope:
    """Tests for order_from_slope()."""

    def test_cusp_orders(self):
        """sigma^2 displacement ~ r^(n/2) at an (n,2)-cusp."""
        from core.singularity import SingularityKind, order_from_slope

        assert order_from_slope(SingularityKind.CUSP, 1.5, 0.01) == 3
        assert order_from_slope(SingularityKind.CUSP, 2.45, 0.01) == 5

    def test_double_point_orders(self):
        """sigma^2 displacement ~ r^(n+1) at a double point of order n."""
        from core.singularity import SingularityKind, order_from_slope

        assert order_from_slope(SingularityKind.DOUBLE_POINT, 2.05, 0.01) == 1
        assert order_from_slope(SingularityKind.DOUBLE_POINT, 3.9, 0.01) == 3

    def test_poor_rounding_is_unstable(self):
        """A slope far from every odd order raises FitUnstable."""
        from core.errors import FitUnstable
        from core.singularity import SingularityKind, order_from_slope

        with pytest.raises(FitUnstable) as info:
            order_from_slope(SingularityKind.CUSP, 1.8, 0.01)
        assert info.value.slope == pytest.approx(1.8)

    def test_noisy_fit_is_unstable(self):
        """A large regression residual raises FitUnstable."""
        from core.errors import FitUnstable
        from core.singularity import SingularityKind, order_from_slope

        with pytest.raises(FitUnstable):
            order_from_slope(SingularityKind.DOUBLE_POINT, 2.0, 0.5)
        with pytest.raises(FitUnstable):
            order_from_slope(SingularityKind.DOUBLE_POINT, float("nan"), 0.0)


class TestGermFits:
    """Tests for fit_germ_order() on explicit germs."""

    def test_simple_double_point_germ(self):
        """z + z^2 has order 1."""
        from core.singularity import fit_germ_order

        assert fit_germ_order(lambda z: z + z ** 2) == 1

    def test_higher_double_point_germ(self):
        """z + z^4 has order 3."""
        from core.singularity import fit_germ_order

        assert fit_germ_order(lambda z: z + z ** 4) == 3

    def test_cusp_germ(self):
        """z + z^(3/2) is a (3,2)-cusp germ."""
        from core.singularity import SingularityKind, fit_germ_order

        assert fit_germ_order(lambda z: z + z ** 1.5, SingularityKind.CUSP) == 3

    def test_shifted_germ(self):
        """The fixed point and ray direction are honored."""
        from core.singularity import fit_germ_order

        p, u = 2 + 1j, cmath.exp(0.3j)
        assert fit_germ_order(lambda z: z + (z - p) ** 2, p=p, direction=u) == 1

    def test_flat_germ_is_unstable(self):
        """The identity germ has no displacement to fit."""
        from core.errors import FitUnstable
        from core.singularity import fit_germ_order

        with pytest.raises(FitUnstable):
            fit_germ_order(lambda z: z)


# =========================
# Detection
# =========================

class TestCusps:
    """Tests for cusp detection and fits on the deltoid."""

    def test_three_cusps(self, deltoid):
        """w + 1/(2w^2) has cusps at 1.5 omega^k."""
        from core.singularity import SingularityKind, find_cusps

        cusps = find_cusps(deltoid)

        assert len(cusps) == 3
        assert all(c.kind is SingularityKind.CUSP for c in cusps)
        for k in range(3):
            target = 1.5 * cmath.exp(2j * math.pi * k / 3)
            assert min(abs(c.location - target) for c in cusps) < 1e-8
        for c in cusps:
            assert abs(abs(c.preimages[0]) - 1) < 1e-12

    def test_cusp_order_fit(self, deltoid):
        """Every deltoid cusp is of type (3,2) with slope near 1.5."""
        from core.singularity import classify_singularities

        sings = classify_singularities(deltoid)

        assert len(sings) == 3
        for s in sings:
            assert s.order_n == 3
            assert s.delta == 0
            assert s.fit.stable
            assert s.fit.slope == pytest.approx(1.5, abs=0.1)

    def test_smooth_boundary_has_none(self):
        """w + 1/(4w^2) has a smooth Jordan boundary."""
        from core.quadrature import build_domain
        from core.singularity import classify_singularities

        Q = build_domain(_laurent(0.25, 2), name="quarter-cubed")

        assert classify_singularities(Q) == []

    def test_to_json(self, deltoid):
        """Singularities serialize kind, location and fit."""
        from core.singularity import FitDiagnostics, find_cusps

        s = find_cusps(deltoid)[0].with_order(3, FitDiagnostics(1.5, 0.01))
        data = s.to_json()

        assert data["kind"] == "cusp"
        assert data["n"] == 3
        assert data["delta"] == 0
        assert data["fit_stable"] is True
        assert len(data["preimages"]) == 1


class TestDoublePoints:
    """Tests for double-point detection."""

    def test_transversal_crossing_rejected(self):
        """Past the pinch the two arcs cross transversally."""
        from dataclasses import replace

        from catalog.pinch import pinch_map
        from core.errors import UnivalenceViolation
        from core.quadrature import build_domain
        from core.singularity import find_double_points

        Q = build_domain(pinch_map(0.5, 0.2), name="pinch-below")
        crossed = replace(Q, f=pinch_map(0.5, 0.45))

        with pytest.raises(UnivalenceViolation):
            find_double_points(crossed, grid=4096)

    def test_none_before_the_pinch(self):
        """Well below the pinch parameter there is no contact."""
        from catalog.pinch import pinch_map
        from core.quadrature import build_domain
        from core.singularity import find_double_points

        Q = build_domain(pinch_map(0.5, 0.2), name="pinch-below")

        assert find_double_points(Q, grid=4096) == []


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
