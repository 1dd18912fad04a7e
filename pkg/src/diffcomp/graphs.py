"""Directed graphs with loops, edge monomials, and the set transforms T and T_f.

Both transforms turn arbitrary graph sets into functional-graph sets without
lowering the Chow rank of the membership listing.  A graph on n vertices
becomes a function on N points (N = n^2 for T, n^2 + 2 for T_f): the point
n*i + j records, by mapping to 1 or 0, whether edge (i, j) is present.  The
original listing is recovered from the transformed one by fixing all the
"edge absent" variables to 1 and renaming the "edge present" ones — so any
Chow decomposition of the transformed listing restricts to one of the
original, which is the whole point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .cyclotomic import CycloRational
from .errors import FormatError
from .listings import FunctionTable
from .multipoly import Monomial, MultiPoly, matrix_index


@dataclass(frozen=True)
class Graph:
    """Directed graph as a 0/1 adjacency matrix; adj[i][j] = 1 means edge i -> j."""

    n: int
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        adj = tuple(tuple(int(x) for x in row) for row in self.adj)
        if len(adj) != self.n or any(len(row) != self.n for row in adj):
            raise ValueError(f"adjacency matrix must be {self.n}x{self.n}")
        if any(x not in (0, 1) for row in adj for x in row):
            raise ValueError("adjacency entries must be 0 or 1")
        object.__setattr__(self, "adj", adj)

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, tuple((0,) * n for _ in range(n)))

    @classmethod
    def totally_complete(cls, n: int) -> Graph:
        """All n^2 ordered-pair edges, loops included."""
        return cls(n, tuple((1,) * n for _ in range(n)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adj = [[0] * n for _ in range(n)]
        for i, j in edges:
            adj[i][j] = 1
        return cls(n, tuple(tuple(row) for row in adj))

    @classmethod
    def cycle(cls, n: int) -> Graph:
        """The directed n-cycle 0 -> 1 -> ... -> 0."""
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(self.n) if self.adj[i][j]]

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i][j])

    def to_text(self) -> str:
        lines = ["# diffcomp-graph 1", str(self.n)]
        for row in self.adj:
            lines.append(" ".join(map(str, row)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Graph:
        lines = [ln.strip() for ln in text.splitlines()
                 if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise FormatError("empty graph file")
        try:
            n = int(lines[0])
        except ValueError as exc:
            raise FormatError(f"bad graph header {lines[0]!r}") from exc
        if n < 0 or len(lines) != n + 1:
            raise FormatError(f"expected {n} adjacency rows")
        adj = []
        for line in lines[1:]:
            row = line.split()
            if len(row) != n or any(x not in ("0", "1") for x in row):
                raise FormatError(f"bad adjacency row {line!r}")
            adj.append(tuple(int(x) for x in row))
        return cls(n, tuple(adj))


def graph_of_function(f: FunctionTable) -> Graph:
    return Graph.from_edges(f.n, [(i, f(i)) for i in range(f.n)])


def monomial_edge_listing(g: Graph) -> MultiPoly:
    """prod over edges (i,j) of a_{i,j}; the empty graph gives the constant 1."""
    mono = Monomial.of_vars(matrix_index(g.n, i, j) for i, j in g.edges())
    return MultiPoly(g.n * g.n, {mono: CycloRational.one()})


def is_functional(g: Graph) -> bool:
    """Does every vertex have out-degree exactly one?"""
    return all(sum(row) == 1 for row in g.adj)


def function_of_graph(g: Graph) -> FunctionTable:
    if not is_functional(g):
        raise ValueError("graph is not functional")
    return FunctionTable(g.n, tuple(row.index(1) for row in g.adj))


# ---------------------------------------------------------------------------
# The transforms.  Outputs are FunctionTables: out-degree one is intrinsic.
# ---------------------------------------------------------------------------

def transform_T(g: Graph) -> FunctionTable:
    """Functional graph on n^2 points: point n*i+j maps to 1 iff (i,j) is an edge.

    Needs n >= 2: the marker points 0 and 1 must both exist, and a 1-vertex
    graph offers only one.  (T_f has no such limit — its two extra points
    carry the markers.)
    """
    n = g.n
    if n < 2:
        raise ValueError("transform T needs a graph on at least 2 vertices")
    images = tuple(
        1 if g.has_edge(i, j) else 0 for i in range(n) for j in range(n)
    )
    return FunctionTable(n * n, images)


def transform_Tf(g: Graph, f: FunctionTable) -> FunctionTable:
    """Functional graph on n^2 + 2 points; points 0 and 1 carry f: Z_2 -> Z_2."""
    if f.n != 2:
        raise ValueError("the seed function must act on Z_2")
    n = g.n
    images = (f(0), f(1)) + tuple(
        1 if g.has_edge(i, j) else 0 for i in range(n) for j in range(n)
    )
    return FunctionTable(n * n + 2, images)


@dataclass(frozen=True)
class TransformSetResult:
    functions: tuple[FunctionTable, ...]
    listing_before: MultiPoly
    listing_after: MultiPoly


def _membership_listing(graphs: Sequence[Graph]) -> MultiPoly:
    total = MultiPoly.zero(0)
    for g in graphs:
        total = total + monomial_edge_listing(g)
    return total


def transform_set(
    graphs: Iterable[Graph],
    mode: str = "T",
    f: FunctionTable | None = None,
) -> TransformSetResult:
    """Apply T (or T_f) elementwise and return both membership listings.

    The after-listing lives over N^2 matrix variables, N being the
    transformed point count; restricting it per recovery_restriction gives
    back the before-listing exactly.
    """
    gs = list(dict.fromkeys(graphs))  # dedupe, keep first-seen order
    if not gs:
        raise ValueError("empty graph set")
    sizes = {g.n for g in gs}
    if len(sizes) != 1:
        raise ValueError(f"graphs of mixed vertex counts {sorted(sizes)} in one set")
    if mode == "T":
        images = [transform_T(g) for g in gs]
    elif mode == "Tf":
        if f is None:
            raise ValueError("mode Tf needs the seed function f")
        images = [transform_Tf(g, f) for g in gs]
    else:
        raise ValueError(f"unknown transform mode {mode!r}")
    before = _membership_listing(gs)
    after = _membership_listing([graph_of_function(ft) for ft in images])
    return TransformSetResult(tuple(images), before, after)


def recovery_restriction(
    n: int, mode: str = "T", f: FunctionTable | None = None
) -> tuple[dict[int, int], dict[int, int], int]:
    """(fixings, relabelling, nvars) that pull the transformed listing back.

    Fix every "edge absent" variable a_{v,0} to 1 (and, for T_f, the two
    variables realizing f), then rename each "edge present" variable
    a_{offset+k,1} to the original flat edge index k.
    """
    if mode == "T":
        npoints, offset = n * n, 0
        fixings = {}
    elif mode == "Tf":
        if f is None:
            raise ValueError("mode Tf needs the seed function f")
        npoints, offset = n * n + 2, 2
        fixings = {
            matrix_index(npoints, 0, f(0)): 1,
            matrix_index(npoints, 1, f(1)): 1,
        }
    else:
        raise ValueError(f"unknown transform mode {mode!r}")
    for k in range(n * n):
        fixings[matrix_index(npoints, offset + k, 0)] = 1
    relabel = {
        matrix_index(npoints, offset + k, 1): k for k in range(n * n)
    }
    return fixings, relabel, n * n


def recovers_original(result: TransformSetResult, n: int, mode: str = "T",
                      f: FunctionTable | None = None) -> bool:
    fixings, relabel, nvars = recovery_restriction(n, mode, f)
    restricted = result.listing_after.restrict_and_relabel(fixings, relabel, nvars)
    return restricted == result.listing_before


# ---------------------------------------------------------------------------
# Graph-set files: blank-line-separated graph blocks.
# ---------------------------------------------------------------------------

def graph_set_to_text(graphs: Sequence[Graph]) -> str:
    blocks = []
    for g in graphs:
        body = [str(g.n)] + [" ".join(map(str, row)) for row in g.adj]
        blocks.append("\n".join(body))
    return "# diffcomp-graphset 1\n" + "\n\n".join(blocks) + "\n"


def graph_set_from_text(text: str) -> list[Graph]:
    lines = [ln for ln in text.splitlines() if not ln.lstrip().startswith("#")]
    blocks: list[list[str]] = [[]]
    for ln in lines:
        if ln.strip():
            blocks[-1].append(ln)
        elif blocks[-1]:
            blocks.append([])
    if blocks and not blocks[-1]:
        blocks.pop()
    if not blocks:
        raise FormatError("empty graph-set file")
    return [Graph.from_text("\n".join(b)) for b in blocks]
