"""Sampled maps shared by the decomposition and degree code."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class SampledMap:
    """A map known only at finitely many domain samples.

    ``points`` has shape ``(N, d)`` (``d`` is 1 for interval domains) and
    ``values`` has shape ``(N, n)``.  ``edges`` lists index pairs of
    adjacent samples and is what continuity moduli are measured over.
    """

    points: np.ndarray
    values: np.ndarray
    edges: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        values = np.atleast_2d(np.asarray(self.values, dtype=float))
        if len(points) < 2:
            raise ValueError("a sampled map needs at least two samples")
        if len(points) != len(values):
            raise ValueError("points and values differ in length")
        if not np.all(np.isfinite(values)):
            raise ValueError("sampled values must be finite")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "values", values)
        if self.edges is None:
            object.__setattr__(self, "edges", _chain_edges(len(points)))
        else:
            object.__setattr__(self, "edges", np.asarray(self.edges, dtype=int).reshape(-1, 2))

    def __len__(self):
        return len(self.points)

    @property
    def dim(self):
        return self.values.shape[1]

    def with_values(self, values):
        return SampledMap(self.points, values, self.edges)

    def to_json(self):
        return {"samples": self.points.tolist(), "values": self.values.tolist(),
                "edges": self.edges.tolist()}

    @classmethod
    def from_json(cls, data):
        try:
            return cls(np.asarray(data["samples"], dtype=float), np.asarray(data["values"], dtype=float),
                       data.get("edges"))
        except KeyError as exc:
            raise ValueError(f"sampled map JSON needs field {exc.args[0]!r}") from None

    def max_jump(self, values=None):
        """Largest Euclidean change of ``values`` across an adjacency edge."""
        values = self.values if values is None else np.asarray(values)
        if len(self.edges) == 0:
            return 0.0
        a, b = self.edges[:, 0], self.edges[:, 1]
        return float(np.max(np.linalg.norm(values[a] - values[b], axis=-1)))


def _chain_edges(count):
    idx = np.arange(count - 1)
    return np.stack([idx, idx + 1], axis=1)


def interval_map(values, t=None):
    """Wrap path values sampled on ``[0, 1]`` as a :class:`SampledMap`."""
    values = np.asarray(values, dtype=float)
    if t is None:
        t = np.linspace(0.0, 1.0, len(values))
    return SampledMap(np.asarray(t, dtype=float), values)


@dataclass(frozen=True)
class SphereMapSamples:
    """A sampled self-map of a convex body's boundary.

    In the plane, ``domain`` is a cyclically ordered loop of boundary points
    and ``image`` holds their images.  In space, ``faces`` triangulates the
    domain sphere and ``image`` gives one image point per domain vertex.
    """

    domain: np.ndarray
    image: np.ndarray
    faces: Optional[np.ndarray] = None

    def __post_init__(self):
        domain = np.asarray(self.domain, dtype=float)
        image = np.asarray(self.image, dtype=float)
        if domain.shape != image.shape or domain.ndim != 2:
            raise ValueError("domain and image must both have shape (N, n)")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "image", image)
        if self.faces is not None:
            object.__setattr__(self, "faces", np.asarray(self.faces, dtype=int))

    @property
    def dim(self):
        return self.domain.shape[1]

    def to_json(self):
        if self.faces is None:
            return {"domain": self.domain.tolist(), "image": self.image.tolist()}
        return {"vertices": self.domain.tolist(), "faces": self.faces.tolist(),
                "image": self.image.tolist()}

    @classmethod
    def from_json(cls, data):
        if "image" not in data:
            raise ValueError("sphere map JSON needs field 'image'")
        if "faces" in data:
            if "vertices" not in data:
                raise ValueError("triangulated sphere map JSON needs field 'vertices'")
            return cls(data["vertices"], data["image"], data["faces"])
        if "domain" not in data:
            raise ValueError("sphere map JSON needs field 'domain'")
        return cls(data["domain"], data["image"])

    def max_angular_step(self):
        """Largest angle between consecutive (cyclic) images; planar only."""
        ang = np.arctan2(self.image[:, 1], self.image[:, 0])
        step = np.diff(np.append(ang, ang[0]))
        step = (step + np.pi) % (2 * np.pi) - np.pi
        return float(np.max(np.abs(step)))
