import numpy as np
import pytest

from headbox.geometry import (
    BBox,
    Keypoint,
    Pose,
    center_distance,
    containment_ratio,
    intersect_area,
    iou,
)


def box(*coords):
    return BBox(*coords)


class TestBBox:
    def test_basic_properties(self):
        b = box(2, 3, 12, 8)
        assert b.width == 10
        assert b.height == 5
        assert b.area == 50
        assert b.max_dim == 10
        assert b.center == (7, 5.5)

    def test_degenerate_box_allowed(self):
        b = box(5, 5, 5, 5)
        assert b.area == 0

    def test_inverted_box_rejected(self):
        with pytest.raises(ValueError):
            box(10, 0, 0, 10)

    def test_from_center(self):
        b = BBox.from_center(10, 20, 4, 6)
        assert (b.x_min, b.y_min, b.x_max, b.y_max) == (8, 17, 12, 23)


class TestIntersectArea:
    def test_identity(self):
        assert intersect_area(box(0, 0, 10, 10), box(0, 0, 10, 10)) == 100

    def test_disjoint(self):
        assert intersect_area(box(0, 0, 10, 10), box(20, 20, 30, 30)) == 0

    def test_partial_overlap(self):
        # 5x5 corner overlap
        assert intersect_area(box(0, 0, 10, 10), box(5, 5, 15, 15)) == 25

    def test_commutative(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            xs, ys = np.sort(rng.uniform(0, 50, 2)), np.sort(rng.uniform(0, 50, 2))
            xs2, ys2 = np.sort(rng.uniform(0, 50, 2)), np.sort(rng.uniform(0, 50, 2))
            a = box(xs[0], ys[0], xs[1], ys[1])
            b = box(xs2[0], ys2[0], xs2[1], ys2[1])
            assert intersect_area(a, b) == intersect_area(b, a)
            assert intersect_area(a, b) <= min(a.area, b.area) + 1e-12


class TestIou:
    def test_equal_boxes(self):
        assert iou(box(0, 0, 10, 10), box(0, 0, 10, 10)) == 1.0

    def test_half_union(self):
        # intersection 100, union 200
        assert iou(box(0, 0, 10, 10), box(0, 0, 10, 20)) == 0.5

    def test_disjoint(self):
        assert iou(box(0, 0, 10, 10), box(20, 0, 30, 10)) == 0.0

    def test_both_degenerate(self):
        assert iou(box(1, 1, 1, 1), box(2, 2, 2, 2)) == 0.0

    def test_bounds_and_symmetry(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            xs, ys = np.sort(rng.uniform(0, 40, 2)), np.sort(rng.uniform(0, 40, 2))
            xs2, ys2 = np.sort(rng.uniform(0, 40, 2)), np.sort(rng.uniform(0, 40, 2))
            a = box(xs[0], ys[0], xs[1], ys[1])
            b = box(xs2[0], ys2[0], xs2[1], ys2[1])
            v = iou(a, b)
            assert 0.0 <= v <= 1.0
            assert v == iou(b, a)


class TestContainment:
    def test_fully_inside(self):
        assert containment_ratio(box(2, 2, 4, 4), box(0, 0, 10, 10)) == 1.0

    def test_half_inside(self):
        assert containment_ratio(box(0, 0, 10, 10), box(5, 0, 20, 10)) == 0.5

    def test_disjoint(self):
        assert containment_ratio(box(0, 0, 1, 1), box(5, 5, 6, 6)) == 0.0

    def test_self_containment(self):
        assert containment_ratio(box(3, 4, 9, 11), box(3, 4, 9, 11)) == 1.0

    def test_zero_area_inner_raises(self):
        with pytest.raises(ValueError):
            containment_ratio(box(1, 1, 1, 5), box(0, 0, 10, 10))


class TestCenterDistance:
    def test_same_center_different_sizes(self):
        assert center_distance(box(-1, -1, 1, 1), box(-5, -5, 5, 5)) == 0.0

    def test_three_four_five(self):
        a = BBox.from_center(0, 0, 2, 2)
        b = BBox.from_center(3, 4, 10, 1)
        assert center_distance(a, b) == 5.0

    def test_vertical(self):
        a = BBox.from_center(0, 0, 2, 2)
        b = BBox.from_center(0, 10, 2, 2)
        assert center_distance(a, b) == 10.0


def test_translation_invariance():
    rng = np.random.default_rng(2)
    for _ in range(100):
        xs, ys = np.sort(rng.uniform(0, 30, 2)), np.sort(rng.uniform(0, 30, 2))
        xs2, ys2 = np.sort(rng.uniform(0, 30, 2)), np.sort(rng.uniform(0, 30, 2))
        a = box(xs[0], ys[0], xs[1] + 1, ys[1] + 1)
        b = box(xs2[0], ys2[0], xs2[1] + 1, ys2[1] + 1)
        dx, dy = rng.uniform(-100, 100, 2)
        at, bt = a.translated(dx, dy), b.translated(dx, dy)
        assert intersect_area(a, b) == pytest.approx(intersect_area(at, bt), abs=1e-9)
        assert iou(a, b) == pytest.approx(iou(at, bt), abs=1e-12)
        assert containment_ratio(a, b) == pytest.approx(containment_ratio(at, bt), abs=1e-12)
        assert center_distance(a, b) == pytest.approx(center_distance(at, bt), abs=1e-9)


class TestPose:
    def test_shape_enforced(self):
        with pytest.raises(ValueError):
            Pose(np.zeros((16, 3)))

    def test_confidence_range_enforced(self):
        arr = np.zeros((17, 3))
        arr[0, 2] = 1.5
        with pytest.raises(ValueError):
            Pose(arr)

    def test_from_keypoints_rejects_duplicates(self):
        kps = [Keypoint(0, 1, 2, 0.5), Keypoint(0, 3, 4, 0.5)]
        with pytest.raises(ValueError):
            Pose.from_keypoints(kps)

    def test_present_threshold(self):
        arr = np.zeros((17, 3))
        arr[5] = (1, 1, 0.3)
        arr[6] = (2, 2, 0.1)
        pose = Pose(arr)
        assert pose.present((5, 6), 0.2) == [5]

    def test_keypoint_accessor(self):
        arr = np.zeros((17, 3))
        arr[3] = (7, 8, 0.4)
        kp = Pose(arr).keypoint(3)
        assert (kp.index, kp.x, kp.y, kp.confidence) == (3, 7, 8, 0.4)
