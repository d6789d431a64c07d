#!/usr/bin/env python3
# Copyright 2026 The dsbe Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#                 http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Reference plots for dsbe outputs.

  plot_results.py run  OUT_DIR          radius / error traces and zonotope snapshots
  plot_results.py grid GRID_SUMMARY_CSV bar charts of the grid summary
"""

import argparse
import glob
import json
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402


def zonotope_polygon(center, generators):
    c = np.asarray(center, dtype=float)
    g = np.asarray(generators, dtype=float).reshape(len(c), -1)
    g = g[:, np.any(g != 0.0, axis=0)]
    if g.shape[1] == 0:
        return c[None, :]
    g = np.where(g[1] < 0, -g, g)
    g = g[:, np.argsort(np.arctan2(g[1], g[0]))]
    start = c - g.sum(axis=1)
    steps = np.concatenate([2 * g, -2 * g], axis=1).T
    return start + np.vstack([np.zeros(2), np.cumsum(steps, axis=0)[:-1]])


def plot_run(out_dir):
    rec = pd.read_csv(os.path.join(out_dir, "records.csv"))
    fig, axes = plt.subplots(1, 2, figsize=(11, 4))
    for node, df in rec.groupby("node"):
        axes[0].semilogy(df["step"], df["radius_m"], lw=0.8, label=f"node {node}")
        axes[1].semilogy(df["step"], df["center_err_m"], lw=0.8)
    axes[0].set(xlabel="step", ylabel="radius [m]")
    axes[1].set(xlabel="step", ylabel="center error [m]")
    axes[0].legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(os.path.join(out_dir, "traces.png"), dpi=150)

    snaps = sorted(glob.glob(os.path.join(out_dir, "snapshots", "step_*.json")))
    if snaps:
        snap = json.load(open(snaps[-1]))
        fig, ax = plt.subplots(figsize=(5, 5))
        for node in snap["nodes"]:
            poly = zonotope_polygon(node["center"], node["generators"])
            ax.fill(poly[:, 0], poly[:, 1], alpha=0.15)
            ax.plot(*np.vstack([poly, poly[:1]]).T, lw=0.8)
        ax.plot(*snap["true_state"], "k+", ms=10)
        ax.set(title=f"step {snap['step']}", xlabel="x1 [m]", ylabel="x2 [m]", aspect="equal")
        fig.tight_layout()
        fig.savefig(os.path.join(out_dir, "snapshot.png"), dpi=150)


def plot_grid(path):
    grid = pd.read_csv(path)
    metrics = ["radius_m", "center_err_m", "hausdorff_m"]
    fig, axes = plt.subplots(1, len(metrics), figsize=(14, 4))
    for ax, metric in zip(axes, metrics):
        df = grid[grid["metric"] == metric]
        for i, ((alg, diff), cell) in enumerate(df.groupby(["algorithm", "diffusion"])):
            x = np.arange(len(cell)) + 0.2 * i
            ax.bar(x, cell["mean"], width=0.2, yerr=cell["std"], capsize=2,
                   label=f"{alg} {'with' if diff else 'without'} diffusion")
            ax.set_xticks(np.arange(len(cell)) + 0.3, [f"k={k}" for k in cell["k_neighbors"]])
        ax.set(title=metric)
    axes[0].legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(os.path.splitext(path)[0] + ".png", dpi=150)


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("kind", choices=["run", "grid"])
    p.add_argument("path")
    args = p.parse_args()
    plot_run(args.path) if args.kind == "run" else plot_grid(args.path)


if __name__ == "__main__":
    main()
