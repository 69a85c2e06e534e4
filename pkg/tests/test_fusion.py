import numpy as np
import pytest

from headbox.fusion import FusionConfig, FusionStrategy, face_within_head, fuse
from headbox.geometry import BBox, Source

from helpers import coverage_mask, det, random_int_box


def head(x1, y1, x2, y2, conf=0.9):
    return det(x1, y1, x2, y2, conf, Source.HEAD)


def face(x1, y1, x2, y2, conf=0.8):
    return det(x1, y1, x2, y2, conf, Source.FACE)


def cfg(strategy, gamma=0.9):
    return FusionConfig(strategy=strategy, gamma=gamma)


class TestFaceWithinHead:
    def test_fully_inside(self):
        assert face_within_head(face(2, 2, 8, 8), head(0, 0, 10, 10), 0.9)

    def test_half_inside_fails_default_gamma(self):
        assert not face_within_head(face(-5, 0, 5, 10), head(0, 0, 10, 10), 0.9)

    def test_half_inside_passes_gamma_half(self):
        assert face_within_head(face(-5, 0, 5, 10), head(0, 0, 10, 10), 0.5)

    def test_zero_area_face_is_false(self, caplog):
        with caplog.at_level("WARNING"):
            assert not face_within_head(face(3, 3, 3, 3), head(0, 0, 10, 10), 0.5)
        assert "zero-area" in caplog.text


class TestStrategies:
    def setup_method(self):
        self.h = head(0, 0, 20, 20, conf=0.9)
        self.f = face(5, 5, 15, 15, conf=0.8)

    def test_by_confidence_keeps_stronger_head(self):
        out = fuse([self.h], [self.f], cfg(FusionStrategy.BY_CONFIDENCE))
        assert out == [self.h]

    def test_keep_face_drops_head(self):
        out = fuse([self.h], [self.f], cfg(FusionStrategy.KEEP_FACE))
        assert out == [self.f]

    def test_keep_both(self):
        out = fuse([self.h], [self.f], cfg(FusionStrategy.KEEP_BOTH))
        assert out == [self.h, self.f]

    def test_keep_head_keeps_distant_face(self):
        h2 = head(40, 0, 60, 20)
        lone = face(100, 100, 110, 110)
        out = fuse([self.h, h2], [lone], cfg(FusionStrategy.KEEP_HEAD))
        assert out == [self.h, h2, lone]

    def test_by_confidence_keeps_stronger_faces(self):
        weak_head = head(0, 0, 20, 20, conf=0.5)
        out = fuse([weak_head], [self.f], cfg(FusionStrategy.BY_CONFIDENCE))
        assert out == [self.f]

    def test_by_confidence_tie_keeps_head(self):
        h = head(0, 0, 20, 20, conf=0.8)
        out = fuse([h], [self.f], cfg(FusionStrategy.BY_CONFIDENCE))
        assert out == [h]

    def test_by_confidence_face_groups_with_highest_containment(self):
        # face sits fully in h1 but only partially in h2
        h1 = head(0, 0, 20, 20, conf=0.1)
        h2 = head(5, 5, 30, 30, conf=0.2)
        f = face(6, 6, 14, 14, conf=0.9)
        out = fuse([h1, h2], [f], cfg(FusionStrategy.BY_CONFIDENCE, gamma=0.5))
        # f grouped with h1 (containment 1.0 > partial); h1 loses, h2 keeps
        assert f in out and h2 in out and h1 not in out

    def test_by_confidence_containment_tie_breaks_to_first_head(self):
        h1 = head(0, 0, 20, 20, conf=0.1)
        h2 = head(0, 0, 20, 20, conf=0.95)
        f = face(5, 5, 15, 15, conf=0.9)
        out = fuse([h1, h2], [f], cfg(FusionStrategy.BY_CONFIDENCE))
        # tie on containment groups f with h1: h1 drops, f kept, h2 untouched
        assert sorted(map(_key, out)) == sorted(map(_key, [h2, f]))


def random_frame(rng, n_heads=4, n_faces=4):
    heads = [det(*_corners(b), float(rng.uniform(0.3, 1)), Source.HEAD)
             for b in (random_int_box(rng) for _ in range(int(rng.integers(0, n_heads + 1))))]
    faces = [det(*_corners(b), float(rng.uniform(0.3, 1)), Source.FACE)
             for b in (random_int_box(rng) for _ in range(int(rng.integers(0, n_faces + 1))))]
    return heads, faces


def _corners(b: BBox):
    return b.x_min, b.y_min, b.x_max, b.y_max


class TestInvariants:
    def test_subset_of_inputs_every_strategy(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            heads, faces = random_frame(rng)
            pool = heads + faces
            for strategy in FusionStrategy:
                out = fuse(heads, faces, cfg(strategy))
                assert all(d in pool for d in out)

    def test_keep_both_is_largest(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            heads, faces = random_frame(rng)
            n_both = len(fuse(heads, faces, cfg(FusionStrategy.KEEP_BOTH)))
            for strategy in (FusionStrategy.KEEP_HEAD, FusionStrategy.KEEP_FACE,
                             FusionStrategy.BY_CONFIDENCE):
                assert len(fuse(heads, faces, cfg(strategy))) <= n_both

    def test_coverage_preserved_at_gamma_one(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            heads, faces = random_frame(rng)
            both = fuse(heads, faces, cfg(FusionStrategy.KEEP_BOTH, gamma=1.0))
            kept = fuse(heads, faces, cfg(FusionStrategy.KEEP_HEAD, gamma=1.0))
            mask_both = coverage_mask([d.bbox for d in both])
            mask_kept = coverage_mask([d.bbox for d in kept])
            assert np.array_equal(mask_both, mask_kept)

    def test_by_confidence_matches_keep_head_when_heads_stronger(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            heads, faces = random_frame(rng)
            heads = [det(*_corners(d.bbox), 0.95, Source.HEAD) for d in heads]
            faces = [det(*_corners(d.bbox), 0.4, Source.FACE) for d in faces]
            by_conf = fuse(heads, faces, cfg(FusionStrategy.BY_CONFIDENCE))
            keep_head = fuse(heads, faces, cfg(FusionStrategy.KEEP_HEAD))
            assert sorted(map(_key, by_conf)) == sorted(map(_key, keep_head))

    def test_by_confidence_matches_keep_face_when_faces_stronger(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            heads, faces = random_frame(rng)
            heads = [det(*_corners(d.bbox), 0.3, Source.HEAD) for d in heads]
            faces = [det(*_corners(d.bbox), 0.96, Source.FACE) for d in faces]
            by_conf = fuse(heads, faces, cfg(FusionStrategy.BY_CONFIDENCE))
            keep_face = fuse(heads, faces, cfg(FusionStrategy.KEEP_FACE))
            assert sorted(map(_key, by_conf)) == sorted(map(_key, keep_face))


def _key(d):
    return (d.source.value, d.bbox.x_min, d.bbox.y_min, d.bbox.x_max, d.bbox.y_max,
            d.confidence)


def test_gamma_validation():
    with pytest.raises(ValueError):
        FusionConfig(gamma=0.0)
    with pytest.raises(ValueError):
        FusionConfig(gamma=1.2)
