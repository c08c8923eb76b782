"""Author-factor graph export in Pajek formats, plus a plain-text summary.

Vertices are the assigned authors (shape ``box``) followed by the factors
(shape ``ellipse``). An author's vertex value is its mention total; a
factor's is the sum over its members of mentions times absolute loading.
Edges join authors to every factor they load on at or above the display
threshold, weighted by the absolute loading clamped to 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from comention.errors import DataError
from comention.factors import FactorReport
from comention.mentions import ProfileSet
from comention.rotation import FactorSolution

# .vec values are printed with 4 decimals; keep every value visibly positive
VEC_FLOOR = 1e-4


@dataclass(frozen=True)
class AuthorNode:
    lemma: str
    mentions: int
    factor: int


@dataclass(frozen=True)
class FactorNode:
    factor: int
    weighted_size: float

    @property
    def label(self) -> str:
        return f"F{self.factor}"


@dataclass(frozen=True)
class Edge:
    author: str
    factor: int
    weight: float


@dataclass(frozen=True)
class GraphSpec:
    author_nodes: tuple[AuthorNode, ...]
    factor_nodes: tuple[FactorNode, ...]
    edges: tuple[Edge, ...]

    @property
    def vertex_count(self) -> int:
        return len(self.author_nodes) + len(self.factor_nodes)


def build_graph(
    sol: FactorSolution,
    report: FactorReport,
    profiles: ProfileSet,
    display_threshold: float = 0.3,
) -> GraphSpec:
    totals = profiles.totals()
    weights = np.minimum(np.abs(sol.pattern), 1.0)
    row_of = {label: i for i, label in enumerate(sol.labels)}

    authors, edges = [], []
    for lemma in sol.labels:
        if lemma not in report.assignment:
            continue
        i = row_of[lemma]
        own = [Edge(lemma, c + 1, float(weights[i, c]))
               for c in range(sol.k) if weights[i, c] >= display_threshold]
        if not own:
            continue
        authors.append(AuthorNode(lemma, totals[lemma], report.assignment[lemma]))
        edges.extend(own)

    factor_nodes = []
    for row in report.rows:
        c = row.factor - 1
        size = sum(totals[m] * abs(sol.pattern[row_of[m], c]) for m in row.members)
        factor_nodes.append(FactorNode(row.factor, float(size)))
    return GraphSpec(tuple(authors), tuple(factor_nodes), tuple(edges))


def _vector(g: GraphSpec) -> list[float]:
    raw = [float(a.mentions) for a in g.author_nodes] + [f.weighted_size for f in g.factor_nodes]
    top = max(raw)
    if top <= 0:
        return [1.0] * len(raw)
    return [max(v / top, VEC_FLOOR) for v in raw]


def pajek_lines(g: GraphSpec) -> dict[str, list[str]]:
    """Lines of the ``.net``, ``.clu`` and ``.vec`` files, keyed by suffix."""
    if not g.author_nodes:
        raise DataError("no displayable nodes: no author loads above the display threshold")
    n = g.vertex_count
    author_id = {a.lemma: i for i, a in enumerate(g.author_nodes, start=1)}
    factor_id = {f.factor: len(g.author_nodes) + i for i, f in enumerate(g.factor_nodes, start=1)}

    net = [f"*Vertices {n}"]
    net += [f'{author_id[a.lemma]} "{a.lemma}" box' for a in g.author_nodes]
    net += [f'{factor_id[f.factor]} "{f.label}" ellipse' for f in g.factor_nodes]
    net.append("*Edges")
    net += [f"{author_id[e.author]} {factor_id[e.factor]} {e.weight:.4f}" for e in g.edges]

    clu = [f"*Vertices {n}"]
    clu += [str(a.factor) for a in g.author_nodes]
    clu += [str(f.factor) for f in g.factor_nodes]

    vec = [f"*Vertices {n}"] + [f"{v:.4f}" for v in _vector(g)]
    return {".net": net, ".clu": clu, ".vec": vec}


def write_pajek(g: GraphSpec, out_prefix: str | Path) -> list[Path]:
    """Write ``<prefix>.net``, ``<prefix>.clu`` and ``<prefix>.vec``; return the paths."""
    out_prefix = Path(out_prefix)
    written = []
    for suffix, lines in pajek_lines(g).items():
        path = out_prefix.with_name(out_prefix.name + suffix)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        written.append(path)
    return written


def summary_text(report: FactorReport, g: GraphSpec) -> str:
    lines = ["Factor\tMax Loading\t# Members\tMembers"]
    for row in report.rows:
        lines.append(f"F{row.factor}\t{row.max_loading:.2f}\t{row.size}\t{', '.join(row.members)}")
    lines.append("")
    lines.append(f"unassigned authors: {len(report.unassigned)}")
    if report.unassigned:
        lines.append("  " + ", ".join(report.unassigned))
    lines.append(f"author nodes: {len(g.author_nodes)}")
    lines.append(f"factor nodes: {len(g.factor_nodes)}")
    lines.append(f"edges: {len(g.edges)}")
    if g.author_nodes:
        top = max(g.author_nodes, key=lambda a: a.mentions)
        lines.append(f"largest author node: {top.lemma} ({top.mentions} mentions)")
    return "\n".join(lines) + "\n"


def write_summary(report: FactorReport, g: GraphSpec, out: str | Path, header: str | None = None) -> Path:
    out = Path(out)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            fh.write(header + "\n")
        fh.write(summary_text(report, g))
    return out
