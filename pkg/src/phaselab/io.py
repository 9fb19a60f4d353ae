"""DIMACS CNF and plain edge-list readers/writers."""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .core import Formula, Graph


def _open_text(src):
    if isinstance(src, (str, Path)):
        return open(src, "r", encoding="ascii")
    return src


def parse_dimacs(text: str) -> Formula:
    n = None
    declared_m = None
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "c%":
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad problem line {line!r}")
            n, declared_m = int(parts[2]), int(parts[3])
            continue
        if n is None:
            raise ValueError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            v = int(tok)
            if v == 0:
                clauses.append(current)
                current = []
            else:
                current.append(v)
    if current:
        clauses.append(current)
    if n is None:
        raise ValueError("missing 'p cnf' header")
    if declared_m is not None and declared_m != len(clauses):
        raise ValueError(f"header declares {declared_m} clauses, found {len(clauses)}")
    return Formula.from_dimacs_lists(n, clauses)


def read_dimacs(src) -> Formula:
    fh = _open_text(src)
    try:
        return parse_dimacs(fh.read())
    finally:
        if fh is not src:
            fh.close()


def format_dimacs(F: Formula, comment: str | None = None) -> str:
    out = io.StringIO()
    if comment:
        for line in comment.splitlines():
            out.write(f"c {line}\n")
    out.write(f"p cnf {F.n} {F.m}\n")
    for clause in F.to_dimacs_lists():
        out.write(" ".join(map(str, clause)) + " 0\n")
    return out.getvalue()


def write_dimacs(F: Formula, dest, comment: str | None = None) -> None:
    text = format_dimacs(F, comment)
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="ascii")
    else:
        dest.write(text)


def parse_edgelist(text: str) -> Graph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or len(lines[0]) != 2:
        raise ValueError("edge list must start with an 'n m' header")
    n, m = int(lines[0][0]), int(lines[0][1])
    body = lines[1:]
    if len(body) != m:
        raise ValueError(f"header declares {m} edges, found {len(body)}")
    edges = np.array([[int(a), int(b)] for a, b in body], dtype=np.int64).reshape(-1, 2)
    return Graph(n, edges)


def read_edgelist(src) -> Graph:
    fh = _open_text(src)
    try:
        return parse_edgelist(fh.read())
    finally:
        if fh is not src:
            fh.close()


def format_edgelist(G: Graph) -> str:
    rows = [f"{G.n} {G.m}"] + [f"{u} {v}" for u, v in G.edges.tolist()]
    return "\n".join(rows) + "\n"


def write_edgelist(G: Graph, dest) -> None:
    text = format_edgelist(G)
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="ascii")
    else:
        dest.write(text)
