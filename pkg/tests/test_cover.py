import itertools
import math

import numpy as np
import pytest

from missingmass import (
    EpsNet,
    InvalidInputError,
    PointCloud,
    ProbVector,
    covering_bound_report,
    eps_missing_mass,
    exact_covering_number,
    expected_eps_missing_mass,
    expected_missing_mass,
    greedy_eps_net,
    mc_eps_missing_mass,
)


@pytest.fixture
def line3():
    return PointCloud([0.5, 0.25, 0.25], coords=[[0.0], [1.0], [2.0]])


def brute_min_cover(cloud, eps):
    """Oracle: try every subset of centers in increasing size order."""
    d = cloud.distances()
    for k in range(1, cloud.n + 1):
        for centers in itertools.combinations(range(cloud.n), k):
            if np.all(d[list(centers)].min(axis=0) <= eps):
                return k
    return cloud.n


def random_cloud(rng, n, dim, skewed=False):
    coords = rng.random((n, dim))
    if skewed:
        masses = rng.exponential(size=n)
        return PointCloud(masses, coords=coords, normalize=True)
    return PointCloud([1.0 / n] * n, coords=coords)


class TestPointCloud:
    def test_masses_validated(self):
        with pytest.raises(InvalidInputError):
            PointCloud([0.5, 0.6], coords=[[0.0], [1.0]])
        with pytest.raises(InvalidInputError):
            PointCloud([0.5, 0.5], coords=[[0.0]])

    def test_needs_exactly_one_geometry(self):
        with pytest.raises(InvalidInputError):
            PointCloud([1.0])
        with pytest.raises(InvalidInputError):
            PointCloud([1.0], coords=[[0.0]], matrix=[[0.0]])

    def test_euclidean_distances(self, line3):
        d = line3.distances()
        assert d[0, 2] == pytest.approx(2.0)
        assert d[0, 1] == pytest.approx(1.0)
        assert line3.diameter() == pytest.approx(2.0)

    def test_explicit_matrix_roundtrip(self):
        m = [[0.0, 1.0], [1.0, 0.0]]
        cloud = PointCloud([0.5, 0.5], matrix=m)
        assert cloud.metric == "matrix"
        again = PointCloud.from_json_obj(cloud.to_json_obj())
        assert np.allclose(again.distances(), m)

    def test_matrix_validation(self):
        with pytest.raises(InvalidInputError):
            PointCloud([0.5, 0.5], matrix=[[0.0, 1.0], [2.0, 0.0]])  # asymmetric
        with pytest.raises(InvalidInputError):
            PointCloud([0.5, 0.5], matrix=[[0.5, 1.0], [1.0, 0.0]])  # diagonal
        with pytest.raises(InvalidInputError):
            PointCloud([0.5, 0.5], matrix=[[0.0, -1.0], [-1.0, 0.0]])  # negative
        bad_triangle = [
            [0.0, 1.0, 3.0],
            [1.0, 0.0, 1.0],
            [3.0, 1.0, 0.0],
        ]
        with pytest.raises(InvalidInputError):
            PointCloud([1 / 3] * 3, matrix=bad_triangle, normalize=True)

    def test_csv_roundtrip(self, line3):
        text = "id,mass,x1\np0,0.5,0.0\np1,0.25,1.0\np2,0.25,2.0\n"
        cloud = PointCloud.from_csv_text(text)
        assert np.allclose(cloud.masses, line3.masses)
        assert np.allclose(cloud.distances(), line3.distances())


class TestGreedyNet:
    def test_covers(self, line3):
        net = greedy_eps_net(line3, 1.0)
        d = line3.distances()
        assert np.all(d[list(net.center_indices)].min(axis=0) <= 1.0)
        # optimal cover is a single center (the midpoint); greedy certifies 2
        assert brute_min_cover(line3, 1.0) == 1
        assert exact_covering_number(line3, 1.0) == 1
        assert net.size >= 1

    def test_huge_radius_single_center(self, line3):
        assert greedy_eps_net(line3, 2.5).size == 1

    def test_tiny_radius_all_points(self, line3):
        assert greedy_eps_net(line3, 0.5).size == 3

    def test_seeds_largest_mass(self, line3):
        assert greedy_eps_net(line3, 2.5).center_indices == (0,)

    def test_eps_validation(self, line3):
        with pytest.raises(InvalidInputError):
            greedy_eps_net(line3, 0.0)

    def test_size_monotone_in_eps(self, rng):
        cloud = random_cloud(rng, 60, 2)
        dists = cloud.distances()[np.triu_indices(60, k=1)]
        sizes = [
            greedy_eps_net(cloud, float(q)).size
            for q in np.quantile(dists, [0.9, 0.5, 0.25, 0.1])
        ]
        assert sizes == sorted(sizes)

    def test_covering_invariant_random(self, rng):
        for _ in range(5):
            cloud = random_cloud(rng, 40, 3, skewed=True)
            eps = float(np.quantile(cloud.distances(), 0.3))
            net = greedy_eps_net(cloud, max(eps, 1e-6))
            assert np.all(
                cloud.distances()[list(net.center_indices)].min(axis=0) <= net.eps
            )


class TestEpsMissingMass:
    def test_single_center_cases(self, line3):
        assert eps_missing_mass(line3, [0], 0.5) == 0.5
        assert eps_missing_mass(line3, [1], 1.0) == 0.0
        assert eps_missing_mass(line3, [2], 2.5) == 0.0

    def test_boundary_is_covered(self, line3):
        # closed balls: a point at distance exactly eps counts as covered
        assert eps_missing_mass(line3, [0], 1.0) == 0.25

    def test_validation(self, line3):
        with pytest.raises(InvalidInputError):
            eps_missing_mass(line3, [], 1.0)
        with pytest.raises(InvalidInputError):
            eps_missing_mass(line3, [7], 1.0)


class TestExpectedEpsMissingMass:
    def test_hand_computed_examples(self, line3):
        assert expected_eps_missing_mass(line3, 1, 1.0) == pytest.approx(0.25, abs=1e-15)
        assert expected_eps_missing_mass(line3, 1, 0.5) == pytest.approx(0.625, abs=1e-15)

    def test_huge_radius_vanishes(self, line3):
        for t in [1, 5, 50]:
            assert expected_eps_missing_mass(line3, t, 2.0) == 0.0

    def test_reduces_to_discrete_missing_mass(self, rng):
        # all pairwise distances above eps: balls are singletons
        cloud = PointCloud(
            [0.2, 0.3, 0.5], coords=[[0.0], [10.0], [20.0]]
        )
        d = ProbVector([0.2, 0.3, 0.5])
        for t in [1, 4, 9]:
            assert expected_eps_missing_mass(cloud, t, 0.5) == pytest.approx(
                expected_missing_mass(d, t), abs=1e-12
            )

    def test_monotone_in_t_and_eps(self, rng):
        cloud = random_cloud(rng, 50, 2, skewed=True)
        qs = np.quantile(cloud.distances()[np.triu_indices(50, k=1)], [0.2, 0.5, 0.8])
        for eps in qs:
            vals = [expected_eps_missing_mass(cloud, t, float(eps)) for t in (1, 5, 25)]
            assert vals == sorted(vals, reverse=True)
        for t in (1, 5, 25):
            vals = [expected_eps_missing_mass(cloud, t, float(eps)) for eps in qs]
            assert vals == sorted(vals, reverse=True)


class TestCoveringBound:
    def test_line_example(self, line3):
        report = covering_bound_report(line3, 1, 1.0)
        assert report["expected"] == pytest.approx(0.25)
        assert report["net_size"] == 1  # exact cover on a tiny cloud
        assert report["bound"] == pytest.approx(1 / math.e)
        assert report["ok"]

    def test_random_grid(self, rng):
        for _ in range(10):
            cloud = random_cloud(rng, int(rng.integers(5, 80)), int(rng.integers(1, 4)),
                                 skewed=bool(rng.integers(0, 2)))
            dists = cloud.distances()[np.triu_indices(cloud.n, k=1)]
            for q in (0.25, 0.5, 0.75):
                eps = float(np.quantile(dists, q))
                if eps <= 0:
                    continue
                for t in (1, 10, 100):
                    net = greedy_eps_net(cloud, eps)
                    value = expected_eps_missing_mass(cloud, t, eps)
                    assert value <= net.size / (math.e * t) + 1e-12


class TestExactCover:
    def test_matches_brute_force(self, rng):
        for _ in range(8):
            n = int(rng.integers(3, 9))
            cloud = random_cloud(rng, n, 2)
            eps = float(np.quantile(cloud.distances(), 0.4))
            if eps <= 0:
                continue
            assert exact_covering_number(cloud, eps) == brute_min_cover(cloud, eps)

    def test_never_exceeds_greedy(self, rng):
        for _ in range(5):
            cloud = random_cloud(rng, 15, 3)
            eps = float(np.quantile(cloud.distances(), 0.5))
            assert exact_covering_number(cloud, eps) <= greedy_eps_net(cloud, eps).size

    def test_size_limit(self, rng):
        cloud = random_cloud(rng, 25, 2)
        with pytest.raises(InvalidInputError):
            exact_covering_number(cloud, 0.5)


class TestMcEpsMissingMass:
    def test_line_example_contains_closed_form(self, line3):
        rep = mc_eps_missing_mass(line3, 1, 1.0, replicates=4000, seed=0)
        assert rep.bound == pytest.approx(0.25)
        assert abs(rep.estimate - 0.25) <= 3 * rep.std_error
        assert rep.violated is False

    def test_huge_radius_degenerate(self, line3):
        rep = mc_eps_missing_mass(line3, 2, 2.0, replicates=1000, seed=0)
        assert rep.estimate == 0.0
        assert rep.std_error == 0.0

    def test_single_point_cloud(self):
        cloud = PointCloud([1.0], coords=[[0.0]])
        rep = mc_eps_missing_mass(cloud, 3, 0.1, replicates=1000, seed=0)
        assert rep.estimate == 0.0

    def test_replicate_floor(self, line3):
        with pytest.raises(InvalidInputError):
            mc_eps_missing_mass(line3, 1, 1.0, replicates=10, seed=0)

    def test_deterministic(self, line3):
        a = mc_eps_missing_mass(line3, 2, 0.5, replicates=2000, seed=5)
        b = mc_eps_missing_mass(line3, 2, 0.5, replicates=2000, seed=5)
        assert a == b


class TestEpsNet:
    def test_json(self):
        net = EpsNet(0.5, (1, 4))
        assert net.to_json_obj() == {"eps": 0.5, "centers": [1, 4], "size": 2}
