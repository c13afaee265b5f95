import numpy as np
import pytest
import scipy.sparse.linalg

from l1color.affinity import FilterConfig, build_filter_matrix
from l1color.colorize import (
    ColorizeParams,
    ColorizeResult,
    ScribbleSet,
    assemble_l1_problem,
    colorize,
    evaluate,
    j1_objective,
    sample_scribbles,
    scribbles_from_json,
    scribbles_to_json,
)
from l1color.colorspace import YUVImage
from l1color.errors import CountTooLargeError, EmptyScribblesError

from conftest import LEFT_UV, RIGHT_UV, two_region_image


def region_masks(size=64):
    left = np.zeros((size, size), dtype=bool)
    left[:, : size // 2] = True
    return left, ~left


def center_of(mask, width):
    ys, xs = np.nonzero(mask)
    i = len(ys) // 2
    return int(ys[i] * width + xs[i])


class TestAssembly:
    def test_penalty_mode_shape(self):
        y = np.random.default_rng(0).random((5, 5))
        F = build_filter_matrix(y, FilterConfig())
        sites = [(3, 0.1), (17, -0.2)]
        p = assemble_l1_problem(F, sites, 100.0, 25, exact=False)
        n_pix, k = 25, 2
        assert p.shape == (n_pix + k, n_pix + 2 * (n_pix + k))

    def test_exact_mode_shape(self):
        y = np.random.default_rng(1).random((5, 5))
        F = build_filter_matrix(y, FilterConfig())
        sites = [(3, 0.1), (17, -0.2), (20, 0.0)]
        p = assemble_l1_problem(F, sites, 100.0, 25, exact=True)
        n_pix, k = 25, 3
        assert p.shape == (n_pix, (n_pix - k) + 2 * n_pix)

    def test_penalty_rhs_top_block_zero(self):
        y = np.random.default_rng(2).random((4, 6))
        F = build_filter_matrix(y, FilterConfig())
        p = assemble_l1_problem(F, [(5, 0.3)], 50.0, 24, exact=False)
        assert np.abs(p.b_eq[:24]).max() == 0.0
        assert p.b_eq[24] == pytest.approx(50.0 * 0.8)

    def test_empty_sites(self):
        y = np.zeros((2, 2))
        F = build_filter_matrix(y, FilterConfig())
        with pytest.raises(EmptyScribblesError):
            assemble_l1_problem(F, [], 10.0, 4)


class TestJ1Objective:
    def test_constant_consistent_plane_is_zero(self):
        y = np.full((6, 6), 0.5)
        F = build_filter_matrix(y, FilterConfig())
        u = np.full((6, 6), 0.2)
        assert j1_objective(F, u, [(7, 0.2)], 100.0) == pytest.approx(0.0, abs=1e-12)

    def test_single_pixel_perturbation_in_flat_region(self):
        # constant Y: uniform weights; an interior pixel p with interior
        # neighbors contributes |delta| on its own row and |delta|/8 on each
        # of the 8 neighbor rows -> exactly 2*|delta| total
        y = np.full((8, 8), 0.5)
        F = build_filter_matrix(y, FilterConfig())
        u = np.full((8, 8), 0.1)
        base = j1_objective(F, u, [(0, 0.1)], 100.0)
        delta = 0.05
        u2 = u.copy()
        u2[3, 3] += delta
        bumped = j1_objective(F, u2, [(0, 0.1)], 100.0)
        assert bumped - base == pytest.approx(2 * delta, abs=1e-12)
        assert bumped - base <= 2 * delta + 1e-12


class TestColorizeBasics:
    @pytest.mark.parametrize("method", ["l1", "l2"])
    def test_constant_y_single_scribble(self, method):
        y = np.full((8, 8), 0.5)
        scribbles = ScribbleSet([(27, 0.25, -0.15)], exact=True)
        res = colorize(y, scribbles, ColorizeParams(method=method))
        assert np.abs(res.u - 0.25).max() < 1e-6
        assert np.abs(res.v + 0.15).max() < 1e-6
        assert res.objective_u < 1e-5
        assert res.method == method

    @pytest.mark.parametrize("method", ["l1", "l2"])
    def test_two_region_one_scribble_each(self, method):
        # the correlation affinity zeroes out across a two-valued luminance
        # edge ((Y_r - mu)(Y_s - mu) = -var exactly), decoupling the regions;
        # the gaussian kind leaves ~0.1 cross weights and a smooth optimum
        img = two_region_image(32)
        left, right = region_masks(32)
        sites = [
            (center_of(left, 32), *LEFT_UV),
            (center_of(right, 32), *RIGHT_UV),
        ]
        params = ColorizeParams(
            method=method, filter=FilterConfig(weight_kind="correlation")
        )
        res = colorize(img.y, ScribbleSet(sites, exact=True), params)
        for mask, (u_ref, v_ref) in ((left, LEFT_UV), (right, RIGHT_UV)):
            assert np.abs(res.u[mask] - u_ref).mean() < 0.01
            assert np.abs(res.v[mask] - v_ref).mean() < 0.01

    @pytest.mark.parametrize("method", ["l1", "l2"])
    def test_two_region_scribble_left_only(self, method):
        img = two_region_image(16)
        left, right = region_masks(16)
        sites = [(center_of(left, 16), *LEFT_UV)]
        params = ColorizeParams(
            method=method, filter=FilterConfig(weight_kind="correlation")
        )
        res = colorize(img.y, ScribbleSet(sites, exact=True), params)
        assert np.abs(res.u[left] - LEFT_UV[0]).mean() < 0.01
        # the right region is under-constrained: record, don't assert
        print(f"under-constrained right-region mean u ({method}):", res.u[right].mean())

    def test_penalty_mode_pins_scribbles(self):
        y = np.full((6, 6), 0.5)
        scribbles = ScribbleSet([(14, 0.2, -0.1)], exact=False)
        res = colorize(y, scribbles, ColorizeParams(method="l1", lam=100.0))
        assert abs(res.u[2, 2] - 0.2) < 1e-4
        assert np.abs(res.u - 0.2).max() < 1e-3

    def test_empty_scribbles_rejected(self):
        with pytest.raises(EmptyScribblesError):
            ScribbleSet([], exact=True)

    def test_out_of_bounds_scribble(self):
        y = np.zeros((4, 4))
        s = ScribbleSet([(99, 0.0, 0.0)])
        with pytest.raises(IndexError):
            colorize(y, s, ColorizeParams())


class TestInvariants:
    @pytest.mark.parametrize("method", ["l1", "l2"])
    def test_constant_scribbles_give_constant_plane(self, method):
        rng = np.random.default_rng(3)
        y = rng.random((10, 10))
        sites = [(int(i), 0.17, -0.23) for i in rng.choice(100, 5, replace=False)]
        res = colorize(y, ScribbleSet(sites, exact=True), ColorizeParams(method=method))
        assert np.abs(res.u - 0.17).max() < 1e-6
        assert np.abs(res.v + 0.23).max() < 1e-6

    def test_objective_dominance(self):
        img = two_region_image(16)
        left, right = region_masks(16)
        sites = [
            (center_of(left, 16), *LEFT_UV),
            (center_of(right, 16), *RIGHT_UV),
        ]
        scribbles = ScribbleSet(sites, exact=True)
        res1 = colorize(img.y, scribbles, ColorizeParams(method="l1"))
        res2 = colorize(img.y, scribbles, ColorizeParams(method="l2"))
        assert res1.objective_u <= res2.objective_u + 1e-6
        assert res1.objective_v <= res2.objective_v + 1e-6

    @pytest.mark.parametrize("method", ["l1", "l2"])
    def test_horizontal_mirror_equivariance(self, method):
        rng = np.random.default_rng(4)
        h, w = 8, 10
        y = rng.random((h, w))
        idx = [5, 23, 61]
        sites = [(i, float(rng.uniform(-0.3, 0.3)), float(rng.uniform(-0.3, 0.3))) for i in idx]
        res = colorize(y, ScribbleSet(sites, exact=True), ColorizeParams(method=method))

        mirrored_sites = [
            ((i // w) * w + (w - 1 - i % w), u, v) for i, u, v in sites
        ]
        res_m = colorize(
            y[:, ::-1].copy(),
            ScribbleSet(mirrored_sites, exact=True),
            ColorizeParams(method=method),
        )
        assert np.abs(res_m.u[:, ::-1] - res.u).max() < 1e-5
        assert np.abs(res_m.v[:, ::-1] - res.v).max() < 1e-5

    def test_chroma_shift_behavior(self):
        rng = np.random.default_rng(5)
        y = rng.random((7, 7))
        base_sites = [(3, -0.1, 0.05), (30, 0.2, -0.1), (45, 0.0, 0.15)]
        c = 0.1
        shifted = [(i, u + c, v + c) for i, u, v in base_sites]
        p = ColorizeParams(method="l1")
        res = colorize(y, ScribbleSet(base_sites, exact=True), p)
        res_s = colorize(y, ScribbleSet(shifted, exact=True), p)
        assert np.abs(res_s.u - (res.u + c)).max() < 1e-5
        assert np.abs(res_s.v - (res.v + c)).max() < 1e-5

    def test_l2_matches_dense_direct_solve(self):
        rng = np.random.default_rng(6)
        y = rng.random((6, 6))
        sites = [(0, 0.3, -0.2), (35, -0.1, 0.1)]
        res = colorize(y, ScribbleSet(sites, exact=True), ColorizeParams(method="l2"))
        F = build_filter_matrix(y, FilterConfig()).toarray()
        s_idx = np.array([0, 35])
        free = np.setdiff1d(np.arange(36), s_idx)
        for plane, vals in ((res.u, [0.3, -0.1]), (res.v, [-0.2, 0.1])):
            Ff, Fs = F[:, free], F[:, s_idx]
            direct = np.linalg.solve(Ff.T @ Ff, -Ff.T @ (Fs @ np.array(vals)))
            assert np.abs(plane.ravel()[free] - direct).max() < 1e-8


class TestEvaluate:
    def _result(self, u, v):
        return ColorizeResult(u, v, 0.0, 0.0, "l1", 0.0, 0, 0)

    def test_identical_gives_infinite_psnr(self, two_region):
        res = self._result(two_region.u.copy(), two_region.v.copy())
        m = evaluate(res, two_region)
        assert m["mae_u"] == 0.0 and m["mae_v"] == 0.0
        assert m["psnr"] == float("inf")

    def test_constant_offset(self, two_region):
        res = self._result(np.clip(two_region.u + 0.1, -0.5, 0.5), two_region.v.copy())
        # keep the offset un-clipped for a clean expectation
        res = self._result(two_region.u + 0.0, two_region.v.copy())
        res.u = two_region.u + 0.1
        m = evaluate(res, two_region)
        assert m["mae_u"] == pytest.approx(0.1, abs=1e-12)

    def test_full_scribbles_high_psnr(self, two_region):
        scribbles = sample_scribbles(two_region, two_region.width * two_region.height, seed=1)
        res = colorize(two_region.y, scribbles, ColorizeParams(method="l1"))
        m = evaluate(res, two_region)
        assert m["psnr_u"] > 40.0
        assert m["psnr"] > 40.0


class TestSampleScribbles:
    def test_full_coverage_reproduces_reference(self, two_region):
        n = two_region.width * two_region.height
        s = sample_scribbles(two_region, n, seed=0)
        assert len(s.sites) == n
        res = colorize(two_region.y, s, ColorizeParams(method="l2"))
        assert np.abs(res.u - two_region.u).max() < 1e-12

    def test_determinism(self, two_region):
        a = sample_scribbles(two_region, 50, seed=123)
        b = sample_scribbles(two_region, 50, seed=123)
        assert a.sites == b.sites
        c = sample_scribbles(two_region, 50, seed=124)
        assert a.sites != c.sites

    def test_grid_spans_regions(self, two_region):
        left, right = region_masks(two_region.width)
        s = sample_scribbles(two_region, 2, pattern="grid")
        assert len(s.sites) == 2
        cols = [i % two_region.width for i, _, _ in s.sites]
        assert min(cols) < two_region.width // 2 <= max(cols)

    def test_count_too_large(self, two_region):
        with pytest.raises(CountTooLargeError):
            sample_scribbles(two_region, 64 * 64 + 1)

    def test_values_copied_from_original(self, two_region):
        s = sample_scribbles(two_region, 10, seed=7)
        for i, u, v in s.sites:
            assert u == two_region.u.ravel()[i]
            assert v == two_region.v.ravel()[i]


class TestScribbleJSON:
    def test_round_trip(self):
        s = ScribbleSet([(5, 0.25, -0.3), (12, 0.0, 0.5)], exact=False)
        text = scribbles_to_json(s, width=8)
        back = scribbles_from_json(text, width=8, height=3)
        assert back.exact is False
        assert back.sites == s.sites

    def test_schema_fields(self):
        import json

        s = ScribbleSet([(9, 0.1, 0.2)], exact=True)
        data = json.loads(scribbles_to_json(s, width=5))
        assert set(data) == {"exact", "sites"}
        assert set(data["sites"][0]) == {"x", "y", "u", "v"}
        assert data["sites"][0]["x"] == 4 and data["sites"][0]["y"] == 1

    def test_bounds_validation(self):
        with pytest.raises(IndexError):
            scribbles_from_json(
                {"exact": True, "sites": [{"x": 10, "y": 0, "u": 0, "v": 0}]},
                width=5,
                height=5,
            )

    def test_empty_sites_rejected(self):
        with pytest.raises(EmptyScribblesError):
            scribbles_from_json({"exact": True, "sites": []}, width=5, height=5)
