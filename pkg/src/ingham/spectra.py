"""Frequency families, partitions and gap geometry."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np


class FamilyError(ValueError):
    """Invalid frequency family, partition or family document."""


def _pairwise_distances(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


@dataclass(frozen=True)
class FrequencyFamily:
    """A finite family of distinct frequency vectors in R^N.

    ``points`` has shape (K, N). Labels default to ``0..K-1``.
    """

    points: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise FamilyError("a family needs at least one point of dimension >= 1")
        if not np.all(np.isfinite(pts)):
            raise FamilyError("points must be finite")
        labels = tuple(self.labels) if len(self.labels) else tuple(range(pts.shape[0]))
        if len(labels) != pts.shape[0]:
            raise FamilyError(f"{len(labels)} labels for {pts.shape[0]} points")
        if len(set(labels)) != len(labels):
            raise FamilyError("labels must be unique")
        if pts.shape[0] > 1:
            d = _pairwise_distances(pts)
            np.fill_diagonal(d, np.inf)
            i, j = np.unravel_index(np.argmin(d), d.shape)
            if d[i, j] == 0.0:
                raise FamilyError(f"duplicate frequencies at labels {labels[i]!r} and {labels[j]!r}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def index(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise FamilyError(f"unknown label {label!r}") from None

    def scaled(self, s: float) -> "FrequencyFamily":
        return FrequencyFamily(self.points * s, self.labels)

    def subfamily(self, labels: Sequence) -> "FrequencyFamily":
        idx = [self.index(lab) for lab in labels]
        return FrequencyFamily(self.points[idx], tuple(labels))


@dataclass(frozen=True)
class PartitionedFamily:
    """A family together with a class index in ``1..m`` for each point."""

    family: FrequencyFamily
    classes: tuple

    def __post_init__(self):
        classes = tuple(int(c) for c in self.classes)
        if len(classes) != len(self.family):
            raise FamilyError(f"{len(classes)} class entries for {len(self.family)} points")
        m = max(classes)
        if min(classes) < 1 or set(classes) != set(range(1, m + 1)):
            raise FamilyError(f"class indices must cover 1..{m} with no empty class")
        object.__setattr__(self, "classes", classes)

    @property
    def m(self) -> int:
        return max(self.classes)

    def class_of(self, label) -> int:
        return self.classes[self.family.index(label)]

    def members(self, j: int) -> list:
        """Labels of class ``j`` in family order."""
        return [lab for lab, c in zip(self.family.labels, self.classes) if c == j]

    def scaled(self, s: float) -> "PartitionedFamily":
        return PartitionedFamily(self.family.scaled(s), self.classes)


@dataclass(frozen=True)
class GapGeometry:
    gamma: float
    class_gammas: tuple
    mu: float
    class_radii: tuple
    critical_radius: float
    dimension: int = 1
    m: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "m", len(self.class_gammas))


def minimal_gap(family: FrequencyFamily) -> float:
    """Smallest pairwise Euclidean distance; ``inf`` for a single point."""
    if len(family) == 1:
        return math.inf
    d = _pairwise_distances(family.points)
    np.fill_diagonal(d, np.inf)
    return float(d.min())


def class_gaps(pf: PartitionedFamily) -> list[float]:
    out = []
    for j in range(1, pf.m + 1):
        out.append(minimal_gap(pf.family.subfamily(pf.members(j))))
    return out


def geometry(pf: PartitionedFamily, mu: float) -> GapGeometry:
    if not mu > 0:
        raise ValueError("mu must be positive")
    gammas = class_gaps(pf)
    # singleton class: empty infimum, gamma_j = inf, R_j = 0
    radii = [0.0 if math.isinf(g) else 2.0 * math.sqrt(mu) / g for g in gammas]
    return GapGeometry(
        gamma=minimal_gap(pf.family),
        class_gammas=tuple(gammas),
        mu=mu,
        class_radii=tuple(radii),
        critical_radius=math.fsum(radii),
        dimension=pf.family.dimension,
    )


def _sorted_1d(family: FrequencyFamily) -> np.ndarray:
    if family.dimension != 1:
        raise FamilyError("one-dimensional family required")
    return np.sort(family.points[:, 0])


def one_d_mth_gap(family: FrequencyFamily, m: int) -> float:
    """min_k (w_{k+m} - w_k) / m over the sorted 1-D family."""
    w = _sorted_1d(family)
    if len(w) <= m:
        raise FamilyError("family too small for m-th gap")
    return float(np.min(w[m:] - w[:-m]) / m)


def residue_partition(family: FrequencyFamily, m: int) -> PartitionedFamily:
    """Assign the k-th smallest frequency (0-based) to class ``k mod m + 1``."""
    if family.dimension != 1:
        raise FamilyError("one-dimensional family required")
    if m < 1:
        raise FamilyError("m must be positive")
    if len(family) < m:
        raise FamilyError(f"{len(family)} points cannot fill {m} classes")
    order = np.argsort(family.points[:, 0], kind="stable")
    classes = [0] * len(family)
    for rank, i in enumerate(order):
        classes[i] = rank % m + 1
    return PartitionedFamily(family, tuple(classes))


def theorem_radius(family: FrequencyFamily, m: int) -> float:
    """R0 obtained from the general formula on the residue partition (1-D, mu = pi^2/4)."""
    pf = residue_partition(family, m)
    return geometry(pf, math.pi**2 / 4).critical_radius


def remark_radius(family: FrequencyFamily, m: int) -> float:
    """R0 = 2 pi / gamma'_m as written for the one-dimensional case."""
    return 2.0 * math.pi / one_d_mth_gap(family, m)


# -- JSON ingestion -----------------------------------------------------------


def family_from_dict(doc: dict[str, Any]) -> PartitionedFamily:
    if not isinstance(doc, dict):
        raise FamilyError("family document must be a JSON object")
    if "points" not in doc:
        raise FamilyError("family document: missing field 'points'")
    points = doc["points"]
    if not isinstance(points, list) or not points:
        raise FamilyError("family document: field 'points' must be a non-empty list")
    try:
        pts = np.array([p if isinstance(p, list) else [p] for p in points], dtype=float)
    except (TypeError, ValueError) as exc:
        raise FamilyError(f"family document: field 'points' is not numeric ({exc})") from None
    if pts.ndim != 2:
        raise FamilyError("family document: field 'points' rows have unequal length")
    dim = doc.get("dimension", pts.shape[1])
    if dim != pts.shape[1]:
        raise FamilyError(f"family document: field 'dimension' is {dim} but points have {pts.shape[1]} coordinates")
    labels = doc.get("labels") or ()
    fam = FrequencyFamily(pts, tuple(labels))
    classes = doc.get("classes")
    if classes is None:
        classes = (1,) * len(fam)
    return PartitionedFamily(fam, tuple(classes))


def load_family(path: str | Path) -> PartitionedFamily:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FamilyError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return family_from_dict(doc)


def family_to_dict(pf: PartitionedFamily) -> dict[str, Any]:
    return {
        "dimension": pf.family.dimension,
        "points": pf.family.points.tolist(),
        "labels": list(pf.family.labels),
        "classes": list(pf.classes),
    }
