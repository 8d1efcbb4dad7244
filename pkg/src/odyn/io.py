"""CSV and JSON wire formats.

All files are UTF-8, comma separated, LF line endings, with a header row.
Floats are written with repr so a write/read round trip is exact. Rows are
emitted in a canonical sorted order, which makes outputs byte-stable.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import CsvFormatError
from .graphs import Hypergraph, NodeLabels, WeightedGraph

__all__ = [
    "read_graph_csv",
    "write_graph_csv",
    "read_hypergraph_csv",
    "write_hypergraph_csv",
    "read_labels_csv",
    "write_labels_csv",
    "read_state_csv",
    "write_state_csv",
    "write_trajectory_csv",
    "write_energy_csv",
    "write_json",
]

GRAPH_HEADER = ["src", "dst", "weight"]
HYPERGRAPH_HEADER = ["node", "hyperedge", "weight"]
LABELS_HEADER = ["node", "label"]
TRAJECTORY_HEADER = ["t", "node", "feature_index", "value"]


def _fmt(v):
    return repr(float(v))


def _read_rows(path, header, types):
    """Parse a CSV with an exact expected header; errors carry line numbers."""
    path = Path(path)
    rows = []
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            got = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: empty file, expected header {','.join(header)}", line=1)
        if [c.strip() for c in got] != header:
            raise CsvFormatError(
                f"{path}: line 1: expected header {','.join(header)!r}, got {','.join(got)!r}",
                line=1,
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise CsvFormatError(
                    f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}",
                    line=lineno,
                )
            try:
                rows.append(tuple(t(v) for t, v in zip(types, row)))
            except ValueError as exc:
                raise CsvFormatError(f"{path}: line {lineno}: {exc}", line=lineno) from exc
    return rows


def read_graph_csv(path, directed=False, node_count=None):
    """Load an edge list (header src,dst,weight) into a WeightedGraph.

    Undirected files list each edge once. node_count defaults to the largest
    index seen plus one.
    """
    rows = _read_rows(path, GRAPH_HEADER, (int, int, float))
    if node_count is None:
        node_count = 1 + max((max(s, d) for s, d, _ in rows), default=0)
    return WeightedGraph(node_count, rows, directed=directed)


def write_graph_csv(path, g):
    """Write a graph edge list; undirected edges appear once, canonically."""
    src, dst, w = g.undirected_pairs()
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(GRAPH_HEADER) + "\n")
        for s, d, v in zip(src.tolist(), dst.tolist(), w.tolist()):
            fh.write(f"{s},{d},{_fmt(v)}\n")


def read_hypergraph_csv(path, node_count=None, edge_count=None):
    """Load memberships (header node,hyperedge,weight) into a Hypergraph."""
    rows = _read_rows(path, HYPERGRAPH_HEADER, (int, int, float))
    if node_count is None:
        node_count = 1 + max((n for n, _, _ in rows), default=0)
    return Hypergraph(node_count, rows, edge_count=edge_count)


def write_hypergraph_csv(path, h):
    """Write hypergraph memberships sorted by (hyperedge, node)."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(HYPERGRAPH_HEADER) + "\n")
        for e in range(h.edge_count):
            for n in h.members(e).tolist():
                fh.write(f"{n},{e},{_fmt(h.membership_weight[n, e])}\n")


def read_labels_csv(path, node_count=None, class_count=None):
    """Load node labels (header node,label); missing nodes default to 0."""
    rows = _read_rows(path, LABELS_HEADER, (int, int))
    if node_count is None:
        node_count = 1 + max((n for n, _ in rows), default=0)
    labels = np.zeros(node_count, dtype=np.int64)
    for n, lab in rows:
        if not (0 <= n < node_count):
            raise CsvFormatError(f"{path}: node index {n} out of range")
        labels[n] = lab
    if class_count is None:
        class_count = int(labels.max()) + 1 if labels.size else 1
    return NodeLabels(labels, class_count)


def write_labels_csv(path, labels):
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(LABELS_HEADER) + "\n")
        for n, lab in enumerate(labels.labels.tolist()):
            fh.write(f"{n},{lab}\n")


def read_state_csv(path):
    """Load a plain numeric CSV matrix (one row per node, no header)."""
    path = Path(path)
    rows = []
    width = None
    with path.open("r", encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise CsvFormatError(
                    f"{path}: line {lineno}: expected {width} fields, got {len(row)}",
                    line=lineno,
                )
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise CsvFormatError(f"{path}: line {lineno}: {exc}", line=lineno) from exc
    if not rows:
        raise CsvFormatError(f"{path}: empty state matrix", line=1)
    return np.array(rows)


def write_state_csv(path, x):
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for row in x:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_trajectory_csv(path, traj):
    """Long-format trajectory: one row per (time, node, feature)."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(TRAJECTORY_HEADER) + "\n")
        for t, state in zip(traj.times.tolist(), traj.states):
            state = np.atleast_2d(np.asarray(state, dtype=np.float64).T).T
            for node in range(state.shape[0]):
                for j in range(state.shape[1]):
                    fh.write(f"{_fmt(t)},{node},{j},{_fmt(state[node, j])}\n")


def write_energy_csv(path, steps, energy, column="step"):
    """Two-column energy series; `column` names the abscissa header."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{column},energy\n")
        for s, e in zip(np.asarray(steps).tolist(), np.asarray(energy).tolist()):
            label = str(int(s)) if column == "step" else _fmt(s)
            fh.write(f"{label},{_fmt(e)}\n")


def write_json(path, obj):
    """Stable JSON: sorted keys, LF newline at end."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
