import numpy as np
import pytest

from geocut.geometry import INDICATOR, PointCloud, RectDomain, sample_uniform
from geocut.graph import build_graph


def random_geometric_instance(rng, n_lo=5, n_hi=14, domain=RectDomain(1.0, 1.5)):
    """Small random geometric graph for oracle-style tests."""
    n = int(rng.integers(n_lo, n_hi + 1))
    cloud = sample_uniform(domain, n, int(rng.integers(0, 2**63)))
    eps = float(rng.uniform(0.25, 0.9))
    return build_graph(cloud, eps, INDICATOR)


def cloud_from_points(pts) -> PointCloud:
    pts = np.asarray(pts, dtype=float)
    pts.setflags(write=False)
    return PointCloud(points=pts, domain=None, seed=None)


def triangle_bridge_graph():
    """Two unit triangles joined by a single bridge edge (n = 6, 7 edges)."""
    pts = [[0, 0], [1, 0], [0.5, 0.8], [2, 0], [3, 0], [2.5, 0.8]]
    g = build_graph(cloud_from_points(pts), 1.05, INDICATOR)
    assert g.edge_count == 7
    return g


def three_bridged_triangles_graph():
    """Three unit triangles, inner corners mutually bridged (n = 9, 12 edges).

    With per-triangle classes each class has cut 2 and mass 1/3, so the
    three-way ratio objective is 18.
    """
    r = 1.0 / np.sqrt(3.0)
    pts = []
    for ang in (90.0, 210.0, 330.0):
        a = np.deg2rad(ang)
        inner = np.array([r * np.cos(a), r * np.sin(a)])
        u = inner / np.linalg.norm(inner)
        outers = []
        for rot in (30.0, -30.0):
            th = np.deg2rad(rot)
            rotm = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
            outers.append(inner + rotm @ u)
        pts += [inner, outers[0], outers[1]]
    g = build_graph(cloud_from_points(pts), 1.05, INDICATOR)
    assert g.edge_count == 12
    return g


@pytest.fixture
def rng():
    return np.random.default_rng(20_240_817)
