"""Core domain types shared by every other module.

All values here are immutable after construction and safe to share across
concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

SKETCH = "sketch"
PHOTO = "photo"
MODALITIES = (SKETCH, PHOTO)
SPLITS = ("train", "test")

# view_deg sentinel for samples whose viewpoint is not annotated.
UNKNOWN_VIEW: Optional[int] = None


class DimensionError(ValueError):
    """Vector / image dimensions do not match the expected shape."""


@dataclass(frozen=True)
class ItemRef:
    """Identity of one sample: instance, modality and view angle.

    instance_id is stable across all views and both modalities of the same
    object. view_deg is whole degrees in [0, 360) or None for unknown.
    """

    instance_id: int
    modality: str
    view_deg: Optional[int] = UNKNOWN_VIEW
    split: str = "train"

    def __post_init__(self):
        if self.instance_id < 0:
            raise ValueError(f"instance_id must be non-negative, got {self.instance_id}")
        if self.modality not in MODALITIES:
            raise ValueError(f"modality must be one of {MODALITIES}, got {self.modality!r}")
        if self.split not in SPLITS:
            raise ValueError(f"split must be one of {SPLITS}, got {self.split!r}")
        if self.view_deg is not None and not (0 <= self.view_deg < 360):
            raise ValueError(f"view_deg must lie in [0, 360), got {self.view_deg}")


@dataclass(frozen=True)
class ImageSample:
    """Rasterized H x W x 3 image in [0, 1] together with its identity."""

    ref: ItemRef
    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 3 or px.shape[2] != 3 or px.shape[0] != px.shape[1]:
            raise DimensionError(f"pixels must be square HxWx3, got shape {px.shape}")
        if px.min() < 0.0 or px.max() > 1.0:
            raise ValueError("pixel values must lie in [0, 1]")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def size(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class EmbeddingPair:
    """Disentangled features of one image: content vector and view vector."""

    content: np.ndarray
    view: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.content, dtype=np.float64).reshape(-1)
        v = np.asarray(self.view, dtype=np.float64).reshape(-1)
        if c.shape != v.shape:
            raise DimensionError(f"content and view lengths differ: {c.shape} vs {v.shape}")
        if not (np.isfinite(c).all() and np.isfinite(v).all()):
            raise ValueError("embedding entries must be finite")
        c.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "content", c)
        object.__setattr__(self, "view", v)

    @property
    def dim(self) -> int:
        return self.content.shape[0]


VIEW_AGNOSTIC = "view_agnostic"
VIEW_SPECIFIC = "view_specific"
RETRIEVAL_MODES = (VIEW_AGNOSTIC, VIEW_SPECIFIC)


@dataclass(frozen=True)
class GalleryIndex:
    """Immutable table of (ItemRef, EmbeddingPair) for gallery photos.

    Both feature matrices are kept so one index serves both retrieval modes.
    Entry order is the insertion order and doubles as the ranking tie-break.
    """

    refs: tuple
    content: np.ndarray  # (N, d) float32
    view: np.ndarray     # (N, d) float32

    def __post_init__(self):
        c = np.ascontiguousarray(self.content, dtype=np.float32)
        v = np.ascontiguousarray(self.view, dtype=np.float32)
        if c.ndim != 2 or c.shape != v.shape:
            raise DimensionError(f"feature matrices must be matching (N, d), got {c.shape} vs {v.shape}")
        if len(self.refs) != c.shape[0]:
            raise ValueError(f"{len(self.refs)} refs but {c.shape[0]} feature rows")
        for r in self.refs:
            if r.modality != PHOTO:
                raise ValueError(f"gallery entries must be photos, got {r}")
        c.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "refs", tuple(self.refs))
        object.__setattr__(self, "content", c)
        object.__setattr__(self, "view", v)

    def __len__(self) -> int:
        return len(self.refs)

    @property
    def dim(self) -> int:
        return self.content.shape[1]

    @property
    def entries(self):
        return [(r, EmbeddingPair(self.content[i], self.view[i])) for i, r in enumerate(self.refs)]


@dataclass(frozen=True)
class RankedResult:
    """One query's ordered gallery list under a declared retrieval mode."""

    query: ItemRef
    mode: str
    ranking: tuple = field(default_factory=tuple)  # of (ItemRef, distance)

    def __post_init__(self):
        if self.mode not in RETRIEVAL_MODES:
            raise ValueError(f"mode must be one of {RETRIEVAL_MODES}, got {self.mode!r}")
        rk = tuple(self.ranking)
        dists = [d for _, d in rk]
        if any(d < 0 for d in dists):
            raise ValueError("distances must be non-negative")
        if any(dists[i] > dists[i + 1] for i in range(len(dists) - 1)):
            raise ValueError("ranking must be sorted by distance ascending")
        object.__setattr__(self, "ranking", rk)

    def __len__(self) -> int:
        return len(self.ranking)


def l2_distance(a, b) -> float:
    """Euclidean distance ||a - b||_2 between two equal-length vectors."""
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise ValueError("inputs must be finite")
    return float(np.linalg.norm(a - b))
