"""
Deterministic sample data: point clouds, random filtrations and a few
fixed triangulations whose cohomology is known.
"""
from itertools import combinations

import numpy as np

from .clouds import PointCloud
from .filtration import FilteredComplex, closure


# Point clouds

def circle_cloud(n, radius=1.0, center=(0.0, 0.0)):
    angles = 2 * np.pi * np.arange(n) / n
    points = np.column_stack([np.cos(angles), np.sin(angles)]) * radius + np.asarray(center)
    return PointCloud(points)


def torus_cloud(n_major, n_minor, major=2.0, minor=1.0):
    """Grid sample of the standard embedded torus in R^3."""
    u = 2 * np.pi * np.arange(n_major) / n_major
    v = 2 * np.pi * np.arange(n_minor) / n_minor
    uu, vv = np.meshgrid(u, v, indexing='ij')
    ring = major + minor * np.cos(vv)
    points = np.column_stack([
        (ring * np.cos(uu)).ravel(),
        (ring * np.sin(uu)).ravel(),
        (minor * np.sin(vv)).ravel(),
    ])
    return PointCloud(points)


def sphere_cloud(n, radius=1.0, center=(0.0, 0.0, 0.0)):
    """Fibonacci lattice on a 2-sphere."""
    k = np.arange(n) + 0.5
    polar = np.arccos(1 - 2 * k / n)
    azimuth = np.pi * (1 + 5 ** 0.5) * k
    points = np.column_stack([
        np.cos(azimuth) * np.sin(polar),
        np.sin(azimuth) * np.sin(polar),
        np.cos(polar),
    ]) * radius + np.asarray(center)
    return PointCloud(points)


def wedge_cloud(n_sphere, n_circle, radius=1.0):
    """A 2-sphere with two circles attached at its north pole."""
    sphere = sphere_cloud(n_sphere, radius).points
    pole = np.array([0.0, 0.0, radius])
    angles = 2 * np.pi * np.arange(1, n_circle) / n_circle
    first = np.column_stack([np.sin(angles), np.zeros_like(angles), 1 - np.cos(angles)]) * radius + pole
    second = np.column_stack([np.zeros_like(angles), np.sin(angles), 1 - np.cos(angles)]) * radius + pole
    return PointCloud(np.vstack([sphere, pole, first, second]))


def random_cloud(rng, n, dim):
    return PointCloud(rng.random((n, dim)))


def jitter(cloud, eta, rng):
    """Move every point by a random vector of norm at most eta."""
    directions = rng.normal(size=cloud.points.shape)
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    lengths = eta * rng.random((len(cloud), 1))
    return PointCloud(cloud.points + directions / norms * lengths, cloud.labels)


# Random filtrations

def random_filtered_complex(rng, max_simplices=40, n_vertices=6, max_dim=3):
    """
    Random simplicial complex, closed under faces, with monotone values
    drawn from a small grid so that several simplices share a stage.
    """
    simplices = set()
    attempts = 0
    while attempts < 4 * max_simplices:
        attempts += 1
        size = int(rng.integers(1, max_dim + 2))
        size = min(size, n_vertices)
        facet = tuple(sorted(rng.choice(n_vertices, size=size, replace=False).tolist()))
        grown = simplices | closure([facet])
        if len(grown) > max_simplices:
            continue
        simplices = grown
    if not simplices:
        simplices = {(0,)}
    values = {}
    for s in sorted(simplices, key=len):
        own = float(rng.integers(0, 6)) / 2
        faces = [values[f] for f in combinations(s, len(s) - 1)] if len(s) > 1 else []
        values[s] = max([own] + faces)
    return FilteredComplex.from_records(values.items(), dimension_cap=max_dim)


# Triangulations

def seven_vertex_torus():
    facets = []
    for i in range(7):
        facets.append((i, (i + 1) % 7, (i + 3) % 7))
        facets.append((i, (i + 2) % 7, (i + 3) % 7))
    return facets


def six_vertex_projective_plane():
    return [
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
        (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5),
    ]


def octahedron():
    """Boundary of the octahedron; antipodal pairs (0,1), (2,3), (4,5)."""
    return [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]


def tetrahedron_boundary():
    return list(combinations(range(4), 3))


def suspended_projective_plane():
    """Suspension of the six-vertex projective plane with cone points 6 and 7."""
    return [face + (apex,) for face in six_vertex_projective_plane() for apex in (6, 7)]


def filled_triangle():
    return [(0, 1, 2)]


def three_cycle():
    return [(0, 1), (1, 2), (0, 2)]


TRIANGULATIONS = {
    'torus': seven_vertex_torus,
    'projective-plane': six_vertex_projective_plane,
    'octahedron': octahedron,
    'tetrahedron-boundary': tetrahedron_boundary,
    'suspended-projective-plane': suspended_projective_plane,
    'filled-triangle': filled_triangle,
    'three-cycle': three_cycle,
}


def triangulation_complex(facets, value=0.0):
    """Single-stage filtration on the closure of the facets."""
    simplices = closure(facets)
    top = max(len(s) for s in simplices) - 1
    return FilteredComplex.from_records(((s, value) for s in simplices), dimension_cap=top)


def triangulation(name):
    return triangulation_complex(TRIANGULATIONS[name]())
