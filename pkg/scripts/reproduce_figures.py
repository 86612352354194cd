#!/usr/bin/env python3
"""Regenerate every figure dataset (CSV) from the configs/ protocols.

Usage:
    python scripts/reproduce_figures.py [--outdir results] [--fast] [--render]

--fast shrinks the 2D grids (101x101 -> 31x31) for a quick smoke run.
--render additionally produces images, if the gauge-squeeze-render package
  (renderer/ directory) is installed.
"""

import argparse
import pathlib
import subprocess
import sys

HERE = pathlib.Path(__file__).resolve().parent
CONFIGS = HERE.parent / "configs"

SWEEPS = [
    "fig2a", "fig2b", "fig3", "figA1",
    "fig4a", "fig4b", "fig4c", "fig4d", "fig4e", "fig4f",
    "figA2a", "figA2b",
]
DYNAMICS = ["fig5_theta0", "fig5_pi2"]

FAST_OVERRIDES = ["--set", "axis1_count=31", "--set", "axis2_count=31"]

RENDER_JOBS = [
    # (kind, input stem, extra flags)
    ("heatmap", "fig2a", []),
    ("heatmap", "fig2b", []),
    ("heatmap", "fig3", []),
    ("lines", "figA1", []),
    ("lines", "fig4b", ["--db-limit"]),
    ("lines", "fig4d", ["--db-limit"]),
    ("lines", "fig5_pi2_series", ["--sql-line"]),
    ("lines", "fig5_theta0_series", ["--sql-line"]),
    ("wigner", "fig5_pi2_wigner", []),
    ("wigner", "fig5_theta0_wigner", []),
]


def run(cmd):
    print("+", " ".join(cmd))
    subprocess.run(cmd, check=True)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--fast", action="store_true")
    parser.add_argument("--render", action="store_true")
    args = parser.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    for name in SWEEPS:
        cmd = [
            sys.executable, "-m", "gauge_squeeze", "sweep",
            "--config", str(CONFIGS / f"{name}.cfg"),
            "--output", str(outdir / f"{name}.csv"),
        ]
        if args.fast:
            cmd += FAST_OVERRIDES if name in ("fig2a", "fig2b", "fig3", "figA2a", "figA2b") else []
        run(cmd)

    for name in DYNAMICS:
        run(
            [
                sys.executable, "-m", "gauge_squeeze", "dynamics",
                "--config", str(CONFIGS / f"{name}.cfg"),
                "--output", str(outdir / f"{name}_series.csv"),
                "--wigner-output", str(outdir / f"{name}_wigner.csv"),
            ]
            + (["--set", "samples=500"] if args.fast else [])
        )

    run(
        [
            sys.executable, "-m", "gauge_squeeze", "optimum",
            "--input", str(outdir / "fig2b.csv"),
            "--observable", "squeeze_db",
        ]
    )

    if args.render:
        for kind, stem, flags in RENDER_JOBS:
            run(
                [
                    "gauge-squeeze-render",
                    "--kind", kind,
                    "--input", str(outdir / f"{stem}.csv"),
                    "--output", str(outdir / f"{stem}.png"),
                ]
                + flags
            )


if __name__ == "__main__":
    main()
