"""Infer head boxes from body skeletons, with and without facial keypoints.

Builds two stick figures by hand: one facing the camera (facial keypoints
available) and one walking away (shoulders and hips only), then draws the
skeletons and the inferred head boxes.

Run:  python3 demos/01_skeleton_to_head_box.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from headbox import HeadInferenceParams, Pose, infer_head

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)


def front_facing_pose():
    arr = np.zeros((17, 3))
    arr[0] = (50, 22, 0.95)   # nose
    arr[1] = (47, 20, 0.90)   # left eye
    arr[2] = (53, 20, 0.90)   # right eye
    arr[5] = (40, 40, 0.85)   # shoulders
    arr[6] = (60, 40, 0.85)
    arr[11] = (43, 80, 0.80)  # hips
    arr[12] = (57, 80, 0.80)
    return Pose(arr)


def back_facing_pose():
    arr = np.zeros((17, 3))
    arr[5] = (110, 42, 0.80)
    arr[6] = (130, 42, 0.80)
    arr[11] = (113, 82, 0.75)
    arr[12] = (127, 82, 0.75)
    return Pose(arr)


def draw(ax, pose, color):
    kps = pose.keypoints
    present = kps[:, 2] > 0
    ax.scatter(kps[present, 0], kps[present, 1], s=25, color=color)
    for a, b in [(5, 6), (11, 12), (5, 11), (6, 12)]:
        if present[a] and present[b]:
            ax.plot(kps[[a, b], 0], kps[[a, b], 1], color=color, lw=1.5)


def main():
    params = HeadInferenceParams()  # r_w=0.5, r_h=0.65, r_n=0.25 by default
    fig, ax = plt.subplots(figsize=(7, 5))
    for pose, color, label in [(front_facing_pose(), "tab:blue", "facial route"),
                               (back_facing_pose(), "tab:orange", "shoulder route")]:
        detection = infer_head(pose, params)
        print(f"{label}: box={detection.bbox}, confidence={detection.confidence:.3f}")
        draw(ax, pose, color)
        b = detection.bbox
        ax.add_patch(plt.Rectangle((b.x_min, b.y_min), b.width, b.height,
                                   fill=False, edgecolor=color, lw=2, label=label))
    ax.invert_yaxis()  # image coordinates: y grows downward
    ax.set_aspect("equal")
    ax.legend()
    ax.set_title("Head boxes inferred from skeletons")
    fig.savefig(OUT / "01_head_boxes.png", dpi=120)
    print(f"figure saved to {OUT / '01_head_boxes.png'}")


if __name__ == "__main__":
    main()
