"""Unit tests for core/dynamics.py."""

import numpy as np
import pytest

# sigma ~ conj(z)^2 / 4 near infinity: the basin of infinity starts near |z| = 4
VIEW_SIDE = 8.0


def _laurent(coeff, power):
    from core.rational import Polynomial, RationalMap

    return RationalMap(Polynomial((coeff,) + (0,) * power + (1,)), Polynomial((0,) * power + (1,)))


@pytest.fixture(scope="module")
def quarter():
    from core.quadrature import build_domain

    return build_domain(_laurent(0.25, 2), name="quarter-cubed")


@pytest.fixture(scope="module")
def quarter_raster(quarter):
    from core.dynamics import render
    from utils.helpers import Bounds

    return render(quarter, Bounds(0j, VIEW_SIDE, VIEW_SIDE), 128, max_iter=30)


# =========================
# Orbits
# =========================

class TestClassify:
    """Tests for single-orbit classification."""

    def test_droplet_point_escapes_at_rank_zero(self, quarter):
        """A droplet point has already escaped."""
        from core.dynamics import OutcomeKind, classify

        rec = classify(quarter, 0j)

        assert rec.outcome.kind is OutcomeKind.ESCAPED
        assert rec.rank == 0
        assert rec.escaped

    def test_tile_point_escapes_at_rank_one(self, quarter):
        """sigma of a point just outside the boundary lands in the droplet."""
        import cmath

        from core.dynamics import OutcomeKind, classify

        z = quarter.f(1.05 * cmath.exp(0.2j))
        rec = classify(quarter, z)

        assert rec.outcome.kind is OutcomeKind.ESCAPED
        assert rec.rank == 1
        assert len(rec.points) == 2

    def test_far_point_converges_to_infinity(self, quarter):
        """Infinity is superattracting for a double pole of f at 0."""
        from core.dynamics import OutcomeKind, classify, infinity_attracting
        from core.rational import is_inf

        assert infinity_attracting(quarter)
        rec = classify(quarter, 50 + 0j)

        assert rec.outcome.kind is OutcomeKind.CONVERGED_TO_CYCLE
        assert rec.outcome.period == 1
        assert is_inf(rec.outcome.representative)

    def test_infinity_start(self, quarter):
        """An orbit starting at infinity stays there."""
        from core.dynamics import OutcomeKind, classify
        from core.rational import INF

        rec = classify(quarter, INF)

        assert rec.outcome.kind is OutcomeKind.CONVERGED_TO_CYCLE
        assert rec.outcome.period == 1

    def test_budget_exhausted(self, quarter):
        """With a zero budget an Omega point is non-escaping."""
        from core.dynamics import OutcomeKind, classify

        rec = classify(quarter, 3 + 0j, max_iter=0)

        assert rec.outcome.kind is OutcomeKind.NON_ESCAPING
        assert rec.outcome.budget == 0

    def test_rank_drops_by_one(self, quarter):
        """rank(sigma(z)) = rank(z) - 1 for escaping points of positive rank."""
        from core.dynamics import classify

        rng = np.random.default_rng(3)
        seen = 0
        for _ in range(100):
            r, t = rng.uniform(1.02, 1.8), rng.uniform(0, 2 * np.pi)
            rec = classify(quarter, quarter.f(r * np.exp(1j * t)), 30)
            if not rec.escaped or rec.rank < 1:
                continue
            seen += 1
            assert classify(quarter, rec.points[1], 30).rank == rec.rank - 1
        assert seen > 50

    def test_outcome_json(self, quarter):
        """Outcomes serialize their kind and rank."""
        from core.dynamics import classify

        data = classify(quarter, 0j).to_json()

        assert data["outcome"] == {"kind": "EscapedAtRank", "rank": 0}
        assert data["steps"] == 0

    def test_critical_orbits(self, quarter):
        """Every sigma-critical point gets one orbit with its multiplicity."""
        from core.dynamics import OutcomeKind, critical_orbits

        orbits = critical_orbits(quarter, 50)

        assert sum(o.multiplicity for o in orbits) == 4
        escaped = sum(o.multiplicity for o in orbits if o.escaped)
        at_inf = sum(o.multiplicity for o in orbits if o.outcome.kind is OutcomeKind.CONVERGED_TO_CYCLE)
        assert escaped == 3
        assert at_inf == 1


class TestInfinityAttracting:
    """Tests for infinity_attracting()."""

    def test_simple_pole_small_residue(self):
        """w + a/w with |a| < 1 does not attract at infinity."""
        from core.dynamics import infinity_attracting
        from core.quadrature import build_domain

        Q = build_domain(_laurent(0.5, 1), name="ellipse")

        assert not infinity_attracting(Q)

    def test_no_pole_at_zero(self):
        """With f(0) finite, sigma(inf) is finite."""
        from catalog.pinch import pinch_map
        from core.dynamics import infinity_attracting
        from core.quadrature import build_domain

        Q = build_domain(pinch_map(0.5, 0.2), name="pinch-below")

        assert not infinity_attracting(Q)
        assert Q.sigma_at_inf() == 0


# =========================
# Vectorized classification and rasters
# =========================

class TestRender:
    """Tests for classify_points() and render()."""

    def test_vectorized_matches_scalar(self, quarter):
        """classify_points agrees with classify on escaping points."""
        import cmath

        from core.dynamics import DROPLET, classify, classify_points

        pts = np.array([0j, 0.3 + 0.2j, quarter.f(1.05 * cmath.exp(0.7j)), quarter.f(1.4 * cmath.exp(2.0j))])
        codes = classify_points(quarter, pts, max_iter=30)

        for z, code in zip(pts, codes):
            rec = classify(quarter, complex(z), 30)
            if rec.escaped:
                expected = DROPLET if rec.rank == 0 else rec.rank
                assert code == expected

    def test_raster_shape_and_codes(self, quarter_raster):
        """Cells are (ny, nx) and use only the documented codes."""
        from core.dynamics import BAND, DROPLET, FAILED, NONESCAPING

        c = quarter_raster.cells
        assert c.shape == (128, 128)
        assert set(np.unique(c[c < 1])) <= {DROPLET, BAND, NONESCAPING}
        assert not np.any(c == FAILED)
        counts = quarter_raster.counts()
        assert counts["droplet"] > 0 and counts["band"] > 0 and counts["escaping"] > 0
        assert sum(counts.values()) == 128 * 128

    def test_center_is_droplet_corner_is_not(self, quarter_raster):
        """The origin is in the droplet; the view corner is in Omega."""
        from core.dynamics import DROPLET

        assert quarter_raster.cells[64, 64] == DROPLET
        assert quarter_raster.cells[0, 0] != DROPLET

    def test_metadata(self, quarter_raster):
        """Metadata carries bounds, resolution and the palette."""
        meta = quarter_raster.metadata()

        assert meta["resolution"] == [128, 128]
        assert meta["max_iter"] == 30
        assert meta["failures"] == 0
        assert meta["palette"]["droplet"] == [235, 220, 170]
        assert meta["name"] == "quarter-cubed"

    def test_image_palette(self, quarter_raster):
        """The image is uint8 RGB with sand droplet pixels."""
        from core.dynamics import image_of

        img = image_of(quarter_raster)

        assert img.shape == (128, 128, 3)
        assert img.dtype == np.uint8
        assert tuple(img[64, 64]) == (235, 220, 170)

    def test_supersample_image(self, quarter):
        """Supersampling keeps the cell grid and averages the image."""
        from core.dynamics import render
        from utils.helpers import Bounds

        r = render(quarter, Bounds(0j, 4.0, 4.0), 32, max_iter=10, supersample=2)

        assert r.cells.shape == (32, 32)
        assert r.image.shape == (32, 32, 3)
        assert r.supersample == 2

    def test_bad_resolution(self, quarter):
        """Non-positive resolutions are refused."""
        from core.dynamics import render
        from utils.helpers import Bounds

        with pytest.raises(ValueError):
            render(quarter, Bounds(0j, 4.0, 4.0), 0)

    def test_single_cell(self, quarter):
        """A 1x1 render classifies its one cell."""
        from core.dynamics import BAND, DROPLET, render
        from utils.helpers import Bounds

        r = render(quarter, Bounds(0j, 0.1, 0.1), 1, max_iter=5)

        assert r.cells.shape == (1, 1)
        assert r.cells[0, 0] in (DROPLET, BAND)
        assert sum(r.counts().values()) == 1

    def test_three_fold_symmetry(self):
        """The half-cubed picture is invariant under rotation by 120 degrees."""
        from catalog import entry_domain
        from core.dynamics import classify_points

        Q = entry_domain("half-cubed")
        rng = np.random.default_rng(11)
        z = rng.uniform(-2, 2, 2000) + 1j * rng.uniform(-2, 2, 2000)
        omega = np.exp(2j * np.pi / 3)

        a = classify_points(Q, z, max_iter=20)
        b = classify_points(Q, omega * z, max_iter=20)

        # points within rounding of the boundary may land on either side
        assert np.mean(a == b) > 0.99

    def test_deterministic(self, quarter, quarter_raster):
        """Identical inputs give identical cells."""
        from core.dynamics import render
        from utils.helpers import Bounds

        again = render(quarter, Bounds(0j, VIEW_SIDE, VIEW_SIDE), 128, max_iter=30)

        assert np.array_equal(again.cells, quarter_raster.cells)


class TestTopology:
    """Tests for component counts and tile separation."""

    def test_one_droplet_component(self, quarter_raster):
        """The quarter-cubed droplet is connected."""
        from core.dynamics import count_escape_components

        comps = count_escape_components(quarter_raster)

        assert comps.closed_droplet == 1
        assert comps.droplet_interior == 1

    def test_basin_of_infinity_needs_wide_view(self, quarter, quarter_raster):
        """Non-escaping cells appear only once the view reaches |z| ~ 4."""
        from core.dynamics import count_escape_components, render
        from utils.helpers import Bounds

        narrow = render(quarter, Bounds(0j, 4.0, 4.0), 128, max_iter=30)

        assert count_escape_components(narrow).non_escaping == 0
        assert count_escape_components(quarter_raster).non_escaping >= 1

    def test_tile_separation_positive(self, quarter_raster):
        """sigma^{-1}(Omega) stays away from the closed droplet."""
        from core.dynamics import tile_separation

        assert tile_separation(quarter_raster) > 0

    def test_pinch_lobes_touch(self):
        """At the pinch the closed droplet is one piece, its interior two."""
        from catalog import entry_domain
        from core.dynamics import count_escape_components, render
        from theorems import view_bounds

        Q = entry_domain("pinch")
        comps = count_escape_components(render(Q, view_bounds(Q), 384, max_iter=1))

        assert comps.closed_droplet == 1
        assert comps.droplet_interior == 2

    def test_counts_json(self, quarter_raster):
        """Component counts serialize as plain integers."""
        from core.dynamics import count_escape_components

        data = count_escape_components(quarter_raster).to_json()

        assert set(data) == {"droplet_interior", "closed_droplet", "non_escaping"}


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
