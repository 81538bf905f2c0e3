"""Build-directory artifacts: vertex table, DOT diagram, canonical JSON report."""

import csv
import json
import os

from .preorder import PreorderGraph, quotient_preorder
from .report import _plain


def write_vertices_csv(comp, path):
    """One row per vertex: id, kind, then the quantized coordinates."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "kind"] + list(comp.names))
        for v in comp.vertices:
            writer.writerow([v.id, v.kind] + [repr(c) for c in v.coords])


def transitive_reduction(graph: PreorderGraph) -> tuple:
    """Covering edges of a finite partial order, as (i, j) pairs.

    The input must be antisymmetric; condense a general preorder first.
    An edge i -> j survives iff nothing sits strictly between.
    """
    n = graph.n
    strict = [graph.rows[i] & ~(1 << i) for i in range(n)]
    pairs = []
    for i in range(n):
        reach = strict[i]
        redundant = 0
        m = reach
        while m:
            k = (m & -m).bit_length() - 1
            m &= m - 1
            redundant |= strict[k]
        cover = reach & ~redundant
        while cover:
            j = (cover & -cover).bit_length() - 1
            cover &= cover - 1
            pairs.append((i, j))
    return tuple(pairs)


def _condense(comp):
    qgraph, classes = quotient_preorder(comp.induced)
    remainder = set(comp.remainder_ids())
    nodes = []
    for ci, members in enumerate(classes.classes):
        tagged = ["r%d" % m if m in remainder else "v%d" % m
                  for m in members]
        if len(tagged) <= 3:
            label = "~".join(tagged)
        else:
            label = "%s~+%d" % (tagged[0], len(tagged) - 1)
        nodes.append((ci, label, any(m in remainder for m in members)))
    return qgraph, nodes


def write_preorder_dot(comp, path):
    """Hasse-style DOT of the induced order.

    Cycles are condensed into single nodes, edges are the transitive
    reduction (the full relation lives in report.json), and any node
    containing a remainder vertex is drawn filled with a double border.
    """
    qgraph, nodes = _condense(comp)
    edges = transitive_reduction(qgraph)
    lines = ["digraph induced_order {", "  rankdir=BT;",
             "  node [shape=ellipse];"]
    for ci, label, is_remainder in nodes:
        attrs = 'label="%s"' % label
        if is_remainder:
            attrs += ', shape=doublecircle, style=filled, fillcolor="#d0d0d0"'
        lines.append("  n%d [%s];" % (ci, attrs))
    for i, j in edges:
        lines.append("  n%d -> n%d;" % (i, j))
    lines.append("}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def report_payload(comp, report, config=None) -> dict:
    """Everything a reader (or a later `dominate` run) needs, as plain data.

    The induced relation is stored losslessly as one hex bitmask per row;
    row i has bit j set iff vertex i <= vertex j.
    """
    payload = {
        "space": comp.cloud.entry.name,
        "family": {
            "h": [f.name for f in comp.cloud.family.h],
            "c": [f.name for f in comp.cloud.family.c],
        },
        "parameters": {
            "eps_q": comp.eps_q,
            "eps_cauchy": comp.eps_cauchy,
        },
        "complete": comp.complete,
        "coordinates": list(comp.names),
        "counts": {
            "vertices": comp.n_vertices,
            "core": len(comp.core_ids()),
            "remainder": len(comp.remainder_ids()),
            "samples": comp.cloud.n_samples,
        },
        "remainder": {
            "ids": list(comp.remainder_ids()),
            "quantized": [[int(q) for q in comp.quant[v]]
                          for v in comp.remainder_ids()],
        },
        "end_info": _plain(list(comp.end_info)),
        "relation_rows_hex": [format(r, "x") for r in comp.induced.rows],
        "checks": report.to_dict(),
    }
    if config is not None:
        payload["config"] = _plain(dict(config))
    return payload


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_build(comp, report, outdir, config=None) -> dict:
    """Write vertices.csv, preorder.dot and report.json into outdir."""
    os.makedirs(outdir, exist_ok=True)
    paths = {
        "vertices": os.path.join(outdir, "vertices.csv"),
        "dot": os.path.join(outdir, "preorder.dot"),
        "report": os.path.join(outdir, "report.json"),
    }
    write_vertices_csv(comp, paths["vertices"])
    write_preorder_dot(comp, paths["dot"])
    with open(paths["report"], "w", encoding="utf-8") as fh:
        fh.write(canonical_json(report_payload(comp, report, config)))
    return paths
