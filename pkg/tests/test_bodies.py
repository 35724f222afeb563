import json
import unittest

import numpy as np

from projsep.bodies import (
    Ball,
    CircularCone,
    Ellipsoid,
    GaussianProjection,
    contains,
    difference_cone,
    ellipsoid_from_dict,
    ellipsoid_to_dict,
    fit_enclosing_ellipsoid,
    inscribed_ball,
    make_ellipsoid,
    project_body,
    projection_from_dict,
    projection_to_dict,
    support,
)


def random_body(rng, n, k=None):
    k = n if k is None else k
    return make_ellipsoid(rng.standard_normal(n), rng.standard_normal((n, k)))


class TestMakeEllipsoid(unittest.TestCase):
    def test_unit_disk(self):
        body = make_ellipsoid([0.0, 0.0], np.eye(2))
        self.assertTrue(body.symmetric_psd)
        self.assertEqual(body.ambient_dim, 2)

    def test_diagonal_psd(self):
        self.assertTrue(make_ellipsoid([0.0, 0.0], np.diag([3.0, 1.0])).symmetric_psd)

    def test_nilpotent_shape_is_valid_but_not_psd(self):
        body = make_ellipsoid([0.0, 0.0], [[0.0, 1.0], [0.0, 0.0]])
        self.assertFalse(body.symmetric_psd)
        self.assertEqual(body.ambient_dim, 2)

    def test_negative_eigenvalue_not_psd(self):
        self.assertFalse(make_ellipsoid([0.0, 0.0], np.diag([1.0, -1.0])).symmetric_psd)

    def test_dimension_mismatch(self):
        with self.assertRaises(ValueError):
            make_ellipsoid([0.0, 0.0, 0.0], np.eye(2))

    def test_non_finite_entries(self):
        with self.assertRaises(ValueError):
            make_ellipsoid([0.0, np.nan], np.eye(2))
        with self.assertRaises(ValueError):
            make_ellipsoid([0.0, 0.0], [[1.0, 0.0], [0.0, np.inf]])

    def test_immutability(self):
        body = make_ellipsoid([1.0, 2.0], np.eye(2))
        with self.assertRaises(ValueError):
            body.center[0] = 5.0
        with self.assertRaises(ValueError):
            body.shape[0, 0] = 5.0


class TestSupport(unittest.TestCase):
    def test_ball_support(self):
        ball = Ball(np.array([1.0, -2.0, 0.5]), 2.5)
        u = np.array([0.0, 1.0, 0.0])
        value, argmax = support(ball, u)
        self.assertAlmostEqual(value, -2.0 + 2.5, places=12)
        np.testing.assert_allclose(argmax, [1.0, 0.5, 0.5])

    def test_axis_aligned(self):
        body = make_ellipsoid([0.0, 0.0], np.diag([3.0, 1.0]))
        value, argmax = support(body, [1.0, 0.0])
        self.assertAlmostEqual(value, 3.0, places=12)
        np.testing.assert_allclose(argmax, [3.0, 0.0])

    def test_brute_force_oracle(self):
        # value dominates <c + Bx, u> over 1e4 sampled ||x|| <= 1, and the
        # argmax attains it
        rng = np.random.default_rng(101)
        body = random_body(rng, 3)
        u = rng.standard_normal(3)
        value, argmax = support(body, u)
        x = rng.standard_normal((10_000, 3))
        x *= (rng.random(10_000) ** (1.0 / 3.0) / np.linalg.norm(x, axis=1))[:, None]
        sampled = (body.center + x @ body.shape.T) @ u
        self.assertGreaterEqual(value, sampled.max() - 1e-12)
        self.assertAlmostEqual(float(argmax @ u), value, places=9)
        self.assertTrue(contains(body, argmax, tol=1e-9))

    def test_zero_direction_rejected(self):
        with self.assertRaises(ValueError):
            support(make_ellipsoid([0.0], [[1.0]]), [0.0])

    def test_degenerate_direction_returns_boundary_point(self):
        # direction annihilates the shape: any boundary point qualifies
        body = make_ellipsoid([0.0, 0.0], [[0.0, 0.0], [0.0, 1.0]])
        value, argmax = support(body, [1.0, 0.0])
        self.assertAlmostEqual(value, 0.0, places=12)
        self.assertTrue(contains(body, argmax))

    def test_width_nonnegativity(self):
        # support(K, u) + support(K, -u) is the width of K along u
        rng = np.random.default_rng(7)
        for _ in range(50):
            body = random_body(rng, 4, k=rng.integers(1, 5))
            u = rng.standard_normal(4)
            width = support(body, u)[0] + support(body, -u)[0]
            self.assertGreaterEqual(width, -1e-12)


class TestProjectBody(unittest.TestCase):
    def test_identity(self):
        body = make_ellipsoid([1.0, 2.0], np.diag([3.0, 1.0]))
        image = project_body(np.eye(2), body)
        np.testing.assert_array_equal(image.center, body.center)
        np.testing.assert_array_equal(image.shape, body.shape)

    def test_zero_map(self):
        image = project_body(np.zeros((2, 2)), Ball(np.array([1.0, 1.0]), 2.0))
        np.testing.assert_array_equal(image.center, [0.0, 0.0])
        np.testing.assert_array_equal(image.shape, np.zeros((2, 2)))

    def test_row_vector_gives_interval(self):
        ball = Ball(np.array([1.0, 2.0, 3.0]), 0.5)
        e = np.array([[0.0, 1.0, 0.0]])
        image = project_body(e, ball)
        lo = support(image, [-1.0])[0]
        hi = support(image, [1.0])[0]
        self.assertAlmostEqual(-lo, 2.0 - 0.5, places=12)
        self.assertAlmostEqual(hi, 2.0 + 0.5, places=12)

    def test_pullback_of_support(self):
        # support(P K, u) == support(K, P^T u)
        rng = np.random.default_rng(12)
        body = random_body(rng, 5)
        matrix = rng.standard_normal((3, 5))
        image = project_body(matrix, body)
        for _ in range(20):
            u = rng.standard_normal(3)
            self.assertAlmostEqual(
                support(image, u)[0], support(body, matrix.T @ u)[0], places=9
            )

    def test_gaussian_projection_accepted(self):
        proj = GaussianProjection(2, 4, seed=3)
        body = Ball(np.zeros(4), 1.0)
        image = project_body(proj, body)
        np.testing.assert_allclose(image.shape, proj.entries)

    def test_dimension_mismatch(self):
        with self.assertRaises(ValueError):
            project_body(np.eye(3), Ball(np.zeros(2), 1.0))


class TestInscribedBall(unittest.TestCase):
    def test_diagonal(self):
        ball = inscribed_ball(make_ellipsoid([0.0, 0.0], np.diag([3.0, 1.0])))
        self.assertEqual(ball.radius, 1.0)

    def test_scaled_identity(self):
        ball = inscribed_ball(make_ellipsoid([1.0, 1.0, 1.0], 2.5 * np.eye(3)))
        self.assertEqual(ball.radius, 2.5)

    def test_singular_shape(self):
        ball = inscribed_ball(make_ellipsoid([0.0, 0.0], np.diag([1.0, 0.0])))
        self.assertEqual(ball.radius, 0.0)

    def test_rejects_non_psd(self):
        with self.assertRaises(ValueError):
            inscribed_ball(make_ellipsoid([0.0, 0.0], [[0.0, 1.0], [0.0, 0.0]]))

    def test_containment(self):
        rng = np.random.default_rng(42)
        basis, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        shape = basis @ np.diag([2.0, 1.5, 0.7]) @ basis.T
        body = make_ellipsoid(rng.standard_normal(3), shape)
        ball = inscribed_ball(body)
        points = rng.standard_normal((1000, 3))
        points /= np.linalg.norm(points, axis=1, keepdims=True)
        for p in ball.center + ball.radius * points:
            self.assertTrue(contains(body, p, tol=1e-9))


class TestDifferenceCone(unittest.TestCase):
    def test_lemma_angle(self):
        b1 = Ball(np.array([0.0, 0.0, 0.0]), 1.0)
        b2 = Ball(np.array([4.0, 0.0, 0.0]), 1.0)
        cone = difference_cone(b1, b2)
        self.assertAlmostEqual(cone.half_angle, np.pi / 6, places=12)
        np.testing.assert_allclose(cone.axis, [-1.0, 0.0, 0.0])

    def test_point_limit(self):
        cone = difference_cone(
            Ball(np.zeros(2), 1e-9), Ball(np.array([1.0, 0.0]), 1e-9)
        )
        self.assertLess(cone.half_angle, 1e-8)

    def test_tangent_balls_rejected(self):
        with self.assertRaises(ValueError):
            difference_cone(Ball(np.zeros(2), 1.0), Ball(np.array([2.0, 0.0]), 1.0))

    def test_rigid_motion_invariance(self):
        rng = np.random.default_rng(5)
        c1, c2 = rng.standard_normal(3), rng.standard_normal(3) + 5.0
        b1, b2 = Ball(c1, 0.8), Ball(c2, 0.6)
        base = difference_cone(b1, b2)
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        t = rng.standard_normal(3)
        moved = difference_cone(Ball(q @ c1 + t, 0.8), Ball(q @ c2 + t, 0.6))
        self.assertAlmostEqual(moved.half_angle, base.half_angle, places=12)
        np.testing.assert_allclose(moved.axis, q @ base.axis, atol=1e-12)


class TestFitEnclosingEllipsoid(unittest.TestCase):
    def test_standard_normal_cloud(self):
        rng = np.random.default_rng(99)
        samples = rng.standard_normal((100_000, 5))
        body = fit_enclosing_ellipsoid(samples, radius_scale=1.0)
        self.assertLess(np.linalg.norm(body.center), 0.05)
        self.assertLess(np.linalg.norm(body.shape - np.eye(5), 2), 0.05)
        self.assertTrue(body.symmetric_psd)

    def test_identical_samples(self):
        v = np.array([1.0, -2.0])
        body = fit_enclosing_ellipsoid(np.tile(v, (10, 1)))
        np.testing.assert_allclose(body.center, v)
        np.testing.assert_array_equal(body.shape, np.zeros((2, 2)))
        self.assertTrue(body.is_degenerate)

    def test_uniform_disk_moment(self):
        # per-coordinate second moment of the uniform unit ball is 1/(n+2)
        rng = np.random.default_rng(3)
        n = 2
        points = rng.standard_normal((100_000, n))
        points *= (rng.random(100_000) ** (1.0 / n) / np.linalg.norm(points, axis=1))[
            :, None
        ]
        body = fit_enclosing_ellipsoid(points, radius_scale=np.sqrt(n + 2))
        self.assertLess(np.linalg.norm(body.shape - np.eye(n), 2), 0.05)

    def test_default_scale_is_sqrt_n(self):
        rng = np.random.default_rng(17)
        samples = rng.standard_normal((2000, 3))
        scaled = fit_enclosing_ellipsoid(samples)
        explicit = fit_enclosing_ellipsoid(samples, radius_scale=np.sqrt(3))
        np.testing.assert_allclose(scaled.shape, explicit.shape)

    def test_rank_deficient_cloud_is_flat(self):
        rng = np.random.default_rng(8)
        planar = rng.standard_normal((500, 3))
        planar[:, 2] = 0.0
        body = fit_enclosing_ellipsoid(planar)
        self.assertTrue(body.is_degenerate)
        self.assertTrue(body.symmetric_psd)

    def test_too_few_samples(self):
        with self.assertRaises(ValueError):
            fit_enclosing_ellipsoid(np.zeros((1, 3)))


class TestGaussianProjection(unittest.TestCase):
    def test_deterministic(self):
        a = GaussianProjection(3, 5, seed=11)
        b = GaussianProjection(3, 5, seed=11)
        np.testing.assert_array_equal(a.entries, b.entries)

    def test_row_major_prefix(self):
        # rows are consumed in order from one stream, so a shorter map is a
        # prefix of a taller one with the same seed
        tall = GaussianProjection(4, 6, seed=2)
        short = GaussianProjection(2, 6, seed=2)
        np.testing.assert_array_equal(tall.entries[:2], short.entries)

    def test_rejects_expanding_map(self):
        with self.assertRaises(ValueError):
            GaussianProjection(5, 3, seed=0)


class TestSerialization(unittest.TestCase):
    def test_ellipsoid_round_trip(self):
        rng = np.random.default_rng(1)
        body = random_body(rng, 3)
        data = json.loads(json.dumps(ellipsoid_to_dict(body)))
        back = ellipsoid_from_dict(data)
        np.testing.assert_array_equal(back.center, body.center)
        np.testing.assert_array_equal(back.shape, body.shape)

    def test_ball_dict(self):
        back = ellipsoid_from_dict({"center": [1.0, 2.0], "radius": 0.5})
        np.testing.assert_array_equal(back.center, [1.0, 2.0])
        np.testing.assert_allclose(back.shape, 0.5 * np.eye(2))

    def test_projection_round_trip(self):
        proj = GaussianProjection(2, 7, seed=123)
        back = projection_from_dict(json.loads(json.dumps(projection_to_dict(proj))))
        self.assertEqual(back, proj)
        np.testing.assert_array_equal(back.entries, proj.entries)


class TestCone(unittest.TestCase):
    def test_axis_must_be_unit(self):
        with self.assertRaises(ValueError):
            CircularCone(np.array([1.0, 1.0]), 0.5)

    def test_angle_range(self):
        with self.assertRaises(ValueError):
            CircularCone(np.array([1.0, 0.0]), 2.0)


class TestContains(unittest.TestCase):
    def test_flat_body_membership(self):
        # segment from (-1, 0) to (1, 0)
        body = make_ellipsoid([0.0, 0.0], [[1.0], [0.0]])
        self.assertTrue(contains(body, [0.5, 0.0]))
        self.assertFalse(contains(body, [0.5, 0.1]))
        self.assertFalse(contains(body, [1.5, 0.0]))


if __name__ == "__main__":
    unittest.main()
