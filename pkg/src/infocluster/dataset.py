"""Corpus handling: ingestion of externally segmented street views and a
procedural synthetic generator with known ground-truth factors.

Synthetic scenes are simple streetscapes (sky gradient, road band, one or
two textured building blocks). Three categorical factors can be tracked:

* ``perspective`` (4): which horizontal region holds the building block
  (left / right / center / bilateral),
* ``color_system`` (k >= 2): the building base hue,
* ``gray_scale`` (4): a brightness multiplier on the building.

Factors not listed in the spec are pinned to fixed defaults; every image
additionally gets continuous nuisance jitter (block geometry, window
texture phase, shading) plus uniform +-0.05 per-pixel noise, so no two
images are identical and clustering cannot succeed by exemplar lookup.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import colorsys
import numpy as np

from . import imageio
from .errors import EmptyCorpus, InvalidSpec, MissingSegmentation, SizeMismatch

log = logging.getLogger(__name__)

STAGES = ("O", "M", "I", "R")

# Cityscapes-convention class ids used by the synthetic generator; id 11
# ("building") is the suggested default for ingested corpora as well.
BUILDING_ID = 11
ROAD_ID = 7
SKY_ID = 23

PERSPECTIVES = ("left", "right", "center", "bilateral")
GRAY_LEVELS = (0.4, 0.6, 0.8, 1.0)

# pinned values used when a factor is not part of a SynthSpec
_DEFAULT_PERSPECTIVE = 2  # center
_DEFAULT_COLOR = (0, 4)  # hue index 0 out of 4
_DEFAULT_GRAY = 2  # multiplier 0.8

_FIXED_CARDINALITY = {"perspective": 4, "gray_scale": 4}


@dataclass(frozen=True)
class SegmentationMap:
    """Per-pixel integer class ids plus the set of ids counted as building."""

    labels: np.ndarray
    building_classes: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "building_classes", frozenset(self.building_classes))
        if self.labels.ndim != 2:
            raise ValueError("labels must be a 2-D class-id array")
        if self.labels.size and self.labels.min() < 0:
            raise ValueError("class ids must be nonnegative")
        if not self.building_classes:
            raise ValueError("building_classes must be nonempty")

    def building_mask(self) -> np.ndarray:
        return np.isin(self.labels, sorted(self.building_classes))


@dataclass
class ImageRecord:
    """One image, its optional segmentation, pipeline stage, and truth labels."""

    id: str
    pixels: np.ndarray  # H x W x 3 float32 in [0, 1]
    seg: SegmentationMap | None = None
    stage: str = "O"
    truth: dict[str, int] | None = None

    def __post_init__(self):
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise ValueError(f"{self.id}: pixels must be H x W x 3")
        if not np.isfinite(self.pixels).all():
            raise ValueError(f"{self.id}: pixels must be finite")
        if self.pixels.min() < 0.0 or self.pixels.max() > 1.0:
            raise ValueError(f"{self.id}: pixels must lie in [0, 1]")
        if self.stage not in STAGES:
            raise ValueError(f"{self.id}: unknown stage {self.stage!r}")
        if self.stage != "O" and self.seg is None:
            raise ValueError(f"{self.id}: stage {self.stage} requires a segmentation")
        if self.seg is not None and self.seg.labels.shape != self.pixels.shape[:2]:
            raise ValueError(f"{self.id}: segmentation shape differs from image")

    @property
    def size(self) -> tuple[int, int]:
        return self.pixels.shape[0], self.pixels.shape[1]


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for a synthetic corpus; the seed fully determines the output."""

    n_images: int
    factors: tuple[tuple[str, int], ...]
    image_size: tuple[int, int] = (32, 64)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((str(n), int(c)) for n, c in self.factors))
        object.__setattr__(self, "image_size", tuple(int(v) for v in self.image_size))
        if self.n_images < 1:
            raise InvalidSpec("n_images must be >= 1")
        if not self.factors:
            raise InvalidSpec("factor list must not be empty")
        names = [n for n, _ in self.factors]
        if len(set(names)) != len(names):
            raise InvalidSpec("duplicate factor names")
        for name, card in self.factors:
            if name not in ("perspective", "color_system", "gray_scale"):
                raise InvalidSpec(f"unknown factor {name!r}")
            if card < 2:
                raise InvalidSpec(f"factor {name!r} needs cardinality >= 2")
            fixed = _FIXED_CARDINALITY.get(name)
            if fixed is not None and card != fixed:
                raise InvalidSpec(f"factor {name!r} has fixed cardinality {fixed}")
        h, w = self.image_size
        if h < 8 or w < 8:
            raise InvalidSpec("image_size must be at least 8 x 8")


def _hue_rgb(index: int, cardinality: int) -> np.ndarray:
    h = index / cardinality
    return np.asarray(colorsys.hsv_to_rgb(h, 0.62, 1.0), dtype=np.float64)


def _perspective_regions(persp: int) -> list[tuple[float, float]]:
    if persp == 0:  # left
        return [(0.0, 0.46)]
    if persp == 1:  # right
        return [(0.54, 1.0)]
    if persp == 2:  # center
        return [(0.26, 0.74)]
    return [(0.0, 0.30), (0.70, 1.0)]  # bilateral


def _paint_building(
    pix: np.ndarray,
    lab: np.ndarray,
    rng: np.random.Generator,
    region: tuple[float, float],
    base_rgb: np.ndarray,
    horizon: int,
) -> None:
    h, w = lab.shape
    r0 = int(region[0] * w)
    r1 = max(r0 + 2, int(region[1] * w))
    rw = r1 - r0
    bw = max(2, int(rw * rng.uniform(0.72, 0.98)))
    x0 = r0 + int(rng.uniform(0.0, max(rw - bw, 0) + 0.999))
    top = int(h * rng.uniform(0.08, 0.40))

    shade = rng.uniform(0.90, 1.10)
    py = int(rng.choice([3, 4, 5]))
    px = int(rng.choice([3, 4, 5]))
    oy = int(rng.integers(0, py))
    ox = int(rng.integers(0, px))

    ys, xs = np.mgrid[top:horizon, x0 : min(x0 + bw, w)]
    body = np.clip(base_rgb * shade, 0.0, 1.0)
    block = np.broadcast_to(body, (*ys.shape, 3)).copy()
    windows = (((ys + oy) % py) < 2) & (((xs + ox) % px) < 2)
    block[windows] *= 0.45
    pix[top:horizon, x0 : min(x0 + bw, w)] = block
    lab[top:horizon, x0 : min(x0 + bw, w)] = BUILDING_ID


def _render_scene(
    rng: np.random.Generator,
    size: tuple[int, int],
    persp: int,
    color: tuple[int, int],
    gray: int,
) -> tuple[np.ndarray, np.ndarray]:
    h, w = size
    horizon = int(0.72 * h)
    pix = np.empty((h, w, 3), dtype=np.float64)
    lab = np.full((h, w), SKY_ID, dtype=np.int32)

    # sky gradient and road band
    t = (np.arange(horizon) / max(horizon - 1, 1))[:, None, None]
    pix[:horizon] = (1 - t) * np.array([0.55, 0.70, 0.92]) + t * np.array([0.78, 0.86, 0.97])
    g = (np.arange(h - horizon) / max(h - horizon - 1, 1))[:, None, None]
    pix[horizon:] = (1 - g) * 0.40 + g * 0.30
    lab[horizon:] = ROAD_ID

    base_rgb = _hue_rgb(*color) * GRAY_LEVELS[gray]
    for region in _perspective_regions(persp):
        _paint_building(pix, lab, rng, region, base_rgb, horizon)

    pix += rng.uniform(-0.05, 0.05, size=pix.shape)
    return np.clip(pix, 0.0, 1.0).astype(np.float32), lab


def _stratified_labels(rng: np.random.Generator, n: int, cardinality: int) -> np.ndarray:
    # exact equal counts whenever cardinality divides n, within 1 otherwise
    labels = np.arange(n, dtype=np.int64) % cardinality
    rng.shuffle(labels)
    return labels


def generate_synthetic(spec: SynthSpec) -> list[ImageRecord]:
    """Render a deterministic synthetic corpus with stratified factor labels."""
    rng = np.random.default_rng(spec.seed)
    n = spec.n_images
    listed = dict(spec.factors)
    assignments = {name: _stratified_labels(rng, n, card) for name, card in spec.factors}

    records = []
    for i in range(n):
        persp = int(assignments["perspective"][i]) if "perspective" in listed else _DEFAULT_PERSPECTIVE
        if "color_system" in listed:
            color = (int(assignments["color_system"][i]), listed["color_system"])
        else:
            color = _DEFAULT_COLOR
        gray = int(assignments["gray_scale"][i]) if "gray_scale" in listed else _DEFAULT_GRAY

        pixels, labels = _render_scene(rng, spec.image_size, persp, color, gray)
        truth = {name: int(assignments[name][i]) for name, _ in spec.factors}
        records.append(
            ImageRecord(
                id=f"synth-{i:05d}",
                pixels=pixels,
                seg=SegmentationMap(labels, frozenset({BUILDING_ID})),
                stage="O",
                truth=truth,
            )
        )
    return records


def ingest(
    dir_path: str | Path,
    seg_dir: str | Path,
    building_classes: set[int],
    image_size: tuple[int, int] | None = None,
) -> list[ImageRecord]:
    """Load image/segmentation PNG pairs as stage-O records.

    Records whose segmentation contains no building pixel are dropped (and
    counted in the log); an entirely empty result raises EmptyCorpus.
    """
    dir_path = Path(dir_path)
    seg_dir = Path(seg_dir)
    files = sorted(p for p in dir_path.iterdir() if p.suffix.lower() == ".png")
    if not files:
        raise EmptyCorpus(f"no PNG images under {dir_path}")

    records = []
    dropped = 0
    for img_path in files:
        seg_path = seg_dir / img_path.name
        if not seg_path.exists():
            raise MissingSegmentation(img_path.stem)
        pixels = imageio.load_png(img_path)
        labels = imageio.load_label_png(seg_path)
        if labels.shape != pixels.shape[:2]:
            raise SizeMismatch(
                f"{img_path.stem}: segmentation shape {labels.shape} does not match image"
            )
        if image_size is not None and pixels.shape[:2] != tuple(image_size):
            pixels = np.clip(imageio.bilinear_resize(pixels, *image_size), 0.0, 1.0)
            labels = imageio.nearest_resize(labels, *image_size)
        seg = SegmentationMap(labels, frozenset(building_classes))
        if not seg.building_mask().any():
            dropped += 1
            continue
        records.append(ImageRecord(id=img_path.stem, pixels=pixels, seg=seg, stage="O"))

    if dropped:
        log.info("ingest: dropped %d of %d images with zero building pixels", dropped, len(files))
    if not records:
        raise EmptyCorpus(f"all {len(files)} images under {dir_path} lack building pixels")
    return records


def save_corpus(records: list[ImageRecord], out_dir: str | Path) -> Path:
    """Write PNGs plus a manifest; returns the manifest path."""
    if not records:
        raise EmptyCorpus("cannot save an empty corpus")
    out_dir = Path(out_dir)
    building: set[int] = set()
    entries = []
    for rec in records:
        img_rel = f"images/{rec.id}.png"
        imageio.save_png(out_dir / img_rel, rec.pixels)
        seg_rel = None
        if rec.seg is not None:
            seg_rel = f"segs/{rec.id}.png"
            imageio.save_label_png(out_dir / seg_rel, rec.seg.labels)
            building |= set(rec.seg.building_classes)
        entries.append(
            {"id": rec.id, "image": img_rel, "seg": seg_rel, "stage": rec.stage, "truth": rec.truth}
        )
    manifest = {"building_classes": sorted(building), "records": entries}
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def load_corpus(manifest_path: str | Path) -> list[ImageRecord]:
    manifest_path = Path(manifest_path)
    data = json.loads(manifest_path.read_text())
    root = manifest_path.parent
    building = frozenset(int(c) for c in data.get("building_classes", []))
    records = []
    for entry in data["records"]:
        pixels = imageio.load_png(root / entry["image"])
        seg = None
        if entry.get("seg"):
            labels = imageio.load_label_png(root / entry["seg"])
            seg = SegmentationMap(labels, building)
        truth = entry.get("truth")
        records.append(
            ImageRecord(
                id=entry["id"],
                pixels=pixels,
                seg=seg,
                stage=entry.get("stage", "O"),
                truth={k: int(v) for k, v in truth.items()} if truth else None,
            )
        )
    if not records:
        raise EmptyCorpus(f"manifest {manifest_path} lists no records")
    return records
