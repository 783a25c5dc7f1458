#!/usr/bin/env python3
# Copyright 2026 The halk Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Converts public benchmark graphs into the edge-list / label-file format.

Cora (LINQS), CiteSeer (Planetoid split files) and BlogCatalog (ASU) are
taken from the data bundled inside the `pgl` wheel on PyPI, which is fetched
with `pip download` unless --wheel points at a local copy. The SNAP
ego-Facebook graph is not redistributed there; pass --facebook with a path to
facebook_combined.txt(.gz) to install it.

Output layout (under --out, default ./data):
  cora/cora.edges          cora/cora.labels
  citeseer/citeseer.edges  citeseer/citeseer.labels
  blogcatalog/blogcatalog.edges  blogcatalog/blogcatalog.labels
  facebook/facebook.edges
"""

import argparse
import collections
import glob
import gzip
import io
import pickle
import shutil
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

PGL_VERSION = "2.2.6"


def fetch_wheel(dest):
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "-q",
         "-d", str(dest), f"pgl=={PGL_VERSION}"],
        check=True)
    wheels = glob.glob(str(Path(dest) / "pgl-*.whl"))
    if not wheels:
        sys.exit("pip download did not produce a pgl wheel")
    return wheels[0]


def write_lines(path, lines):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for line in lines:
            f.write(line)
            f.write("\n")


def convert_cora(z, out):
    cites = z.read("pgl/data/cora/cora.cites").decode()
    content = z.read("pgl/data/cora/cora.content").decode()
    edges = []
    for line in cites.splitlines():
        tok = line.split()
        if len(tok) >= 2:
            edges.append(f"{tok[0]} {tok[1]}")
    labels = []
    for line in content.splitlines():
        tok = line.split()
        if tok:
            labels.append(f"{tok[0]} {tok[-1]}")
    write_lines(out / "cora" / "cora.edges", edges)
    write_lines(out / "cora" / "cora.labels", labels)
    return len(edges), len(labels)


def convert_citeseer(z, out):
    def load(name):
        return pickle.loads(z.read(f"pgl/data/citeseer/ind.citeseer.{name}"),
                            encoding="latin1")

    graph = load("graph")
    ally = load("ally")
    ty = load("ty")
    test_index = [int(x) for x in
                  z.read("pgl/data/citeseer/ind.citeseer.test.index")
                  .decode().split()]

    # Adjacency lists are stored in both directions; keep each record once
    # but leave self-loops in place so preprocessing sees the raw graph.
    edges = []
    seen = set()
    for u, nbrs in sorted(graph.items()):
        for v in nbrs:
            key = (min(u, v), max(u, v))
            if key in seen:
                continue
            seen.add(key)
            edges.append(f"{u} {v}")

    label_of = {}
    for i in range(ally.shape[0]):
        row = ally[i]
        if row.sum() > 0:
            label_of[i] = int(row.argmax())
    for row_idx, node in enumerate(test_index):
        row = ty[row_idx]
        if row.sum() > 0:
            label_of[node] = int(row.argmax())
    labels = [f"{n} c{c}" for n, c in sorted(label_of.items())]
    write_lines(out / "citeseer" / "citeseer.edges", edges)
    write_lines(out / "citeseer" / "citeseer.labels", labels)
    return len(edges), len(labels)


def convert_blogcatalog(z, out):
    edges_csv = z.read("pgl/data/BlogCatalog/edges.csv").decode()
    groups_csv = z.read("pgl/data/BlogCatalog/group-edges.csv").decode()
    edges = [line.replace(",", " ") for line in edges_csv.splitlines()
             if line.strip()]
    groups = collections.defaultdict(list)
    for line in groups_csv.splitlines():
        if not line.strip():
            continue
        node, group = line.split(",")
        groups[int(node)].append(group)
    labels = [f"{n} " + " ".join(gs) for n, gs in sorted(groups.items())]
    write_lines(out / "blogcatalog" / "blogcatalog.edges", edges)
    write_lines(out / "blogcatalog" / "blogcatalog.labels", labels)
    return len(edges), len(labels)


def install_facebook(src, out):
    src = Path(src)
    opener = gzip.open if src.suffix == ".gz" else open
    with opener(src, "rt", encoding="utf-8") as f:
        lines = [line.strip() for line in f if line.strip()]
    write_lines(out / "facebook" / "facebook.edges", lines)
    return len(lines)


def main():
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawTextHelpFormatter)
    ap.add_argument("--out", default="data")
    ap.add_argument("--wheel", help="local pgl wheel (skips pip download)")
    ap.add_argument("--facebook", help="path to facebook_combined.txt[.gz]")
    ap.add_argument("--skip-blogcatalog", action="store_true")
    args = ap.parse_args()

    out = Path(args.out)
    with tempfile.TemporaryDirectory() as tmp:
        wheel = args.wheel or fetch_wheel(tmp)
        with zipfile.ZipFile(wheel) as z:
            print("cora: edges=%d labels=%d" % convert_cora(z, out))
            print("citeseer: edges=%d labels=%d" % convert_citeseer(z, out))
            if not args.skip_blogcatalog:
                print("blogcatalog: edges=%d labels=%d"
                      % convert_blogcatalog(z, out))
    if args.facebook:
        print("facebook: edges=%d" % install_facebook(args.facebook, out))


if __name__ == "__main__":
    main()
