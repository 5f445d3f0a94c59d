"""Command line entry point: nuscenes-export --root ... --split ... --out ..."""

from __future__ import annotations

import argparse
import sys

from .config import SPLITS, ExportConfig
from .export import export_split


def main(argv: list[str] | None = None, source=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nuscenes-export",
        description="Export nuScenes prediction-challenge scenes to a flat JSON split.",
    )
    parser.add_argument("--root", required=True, help="nuScenes dataset root (with the map expansion)")
    parser.add_argument("--split", required=True, choices=SPLITS)
    parser.add_argument("--out", required=True, help="output split path, e.g. train.json")
    parser.add_argument("--radius", type=float, default=10.0, help="lane search radius in meters")
    args = parser.parse_args(argv)

    config = ExportConfig(dataset_root=args.root, split=args.split, lane_radius_m=args.radius)
    try:
        summary = export_split(config, args.out, source=source)
    except RuntimeError as exc:  # missing devkit
        print(str(exc), file=sys.stderr)
        return 2

    print(f"wrote {summary['instances']} instances for split {summary['split']} to {args.out}")
    skipped = sum(summary["skipped"].values())
    if skipped:
        print(f"skipped {skipped} (short_future: {summary['skipped']['short_future']})")
    if summary["warnings"]["no_current_lane"]:
        print(f"{summary['warnings']['no_current_lane']} instances have no current lane")
    imputed = {k: v for k, v in summary["imputed"].items() if v}
    if imputed:
        print("imputed " + ", ".join(f"{field}: {count}" for field, count in sorted(imputed.items())))
    return 0


if __name__ == "__main__":
    sys.exit(main())
