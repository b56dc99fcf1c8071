"""Graph representation, generators, and small-regular-graph enumeration.

Vertices are always 0..n-1. The adjacency structure is immutable after
construction; neighborhoods are exposed both as sorted tuples and as
bitmasks (the mask form is what the verifier and solver run on).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, TextIO

from .bitset import bits_list, mask_from_iter


class GraphError(ValueError):
    """Bad construction input or malformed graph file."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    adj: tuple[tuple[int, ...], ...] = field(repr=False)
    open_mask: tuple[int, ...] = field(repr=False)
    closed_mask: tuple[int, ...] = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and (self.open_mask[u] >> v) & 1 == 1

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted(len(a) for a in self.adj))

    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a simple undirected graph; duplicate pairs collapse.

    Loops and out-of-range endpoints are rejected with the offending pair
    named in the error message.
    """
    if n < 0:
        raise GraphError(f"vertex count must be nonnegative, got {n}")
    seen: set[tuple[int, int]] = set()
    for u, v in edges:
        if u == v:
            raise GraphError(f"loop edge ({u},{v}) not allowed")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u},{v}) out of range for n={n}")
        seen.add((u, v) if u < v else (v, u))
    sorted_edges = tuple(sorted(seen))
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in sorted_edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    adj = tuple(tuple(sorted(a)) for a in nbrs)
    open_m = tuple(mask_from_iter(a) for a in adj)
    closed_m = tuple(om | (1 << v) for v, om in enumerate(open_m))
    return Graph(n=n, edges=sorted_edges, adj=adj, open_mask=open_m, closed_mask=closed_m)


def open_neighborhood(g: Graph, v: int) -> list[int]:
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range")
    return list(g.adj[v])


def closed_neighborhood(g: Graph, v: int) -> list[int]:
    """N[v] = N(v) with v itself, ascending."""
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range")
    return sorted(g.adj[v] + (v,))


def find_twins(g: Graph) -> list[tuple[int, int, str]]:
    """All unordered twin pairs, each labeled 'open' or 'closed'.

    A pair can be both (only when N[u] = N[v] = N(u) = N(v), impossible in
    a simple graph since u is in N[u] but never in N(u)); each pair gets
    at most one label here, closed checked first.
    """
    out: list[tuple[int, int, str]] = []
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if g.closed_mask[u] == g.closed_mask[v]:
                out.append((u, v, "closed"))
            elif g.open_mask[u] == g.open_mask[v]:
                out.append((u, v, "open"))
    return out


def triangle_count_edge(g: Graph, u: int, v: int) -> int:
    """Number of triangles through the edge uv, i.e. |N(u) ∩ N(v)|."""
    if not g.has_edge(u, v):
        raise GraphError(f"({u},{v}) is not an edge")
    return (g.open_mask[u] & g.open_mask[v]).bit_count()


# ---------------------------------------------------------------------------
# generators

TORUS_LATTICES = ("SQR", "TRI", "KNG", "HEX")


@dataclass(frozen=True)
class FamilySpec:
    """A named deterministic graph family with its parameters."""

    kind: str
    args: tuple = ()

    def __str__(self) -> str:
        return ":".join([self.kind] + [str(a) for a in self.args])


def parse_family(text: str) -> FamilySpec:
    """Parse 'path:5', 'torus:SQR:6:3', 'g77' into a FamilySpec."""
    parts = text.split(":")
    kind = parts[0].lower()
    raw = parts[1:]
    if kind == "torus":
        if len(raw) != 3:
            raise GraphError(f"torus spec needs lattice:w:h, got {text!r}")
        return FamilySpec("torus", (raw[0].upper(), int(raw[1]), int(raw[2])))
    try:
        args = tuple(int(a) for a in raw)
    except ValueError as exc:
        raise GraphError(f"bad family parameter in {text!r}") from exc
    return FamilySpec(kind, args)


def path_graph(k: int) -> Graph:
    if k < 1:
        raise GraphError("path needs k >= 1")
    return build_graph(k, [(i, i + 1) for i in range(k - 1)])


def cycle_graph(k: int) -> Graph:
    if k < 3:
        raise GraphError("cycle needs k >= 3")
    return build_graph(k, [(i, (i + 1) % k) for i in range(k)])


def complete_graph(k: int) -> Graph:
    if k < 1:
        raise GraphError("complete needs k >= 1")
    return build_graph(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def hypercube(d: int) -> Graph:
    if not 1 <= d <= 10:
        raise GraphError("hypercube supports 1 <= d <= 10")
    n = 1 << d
    edges = [(v, v ^ (1 << b)) for v in range(n) for b in range(d) if v < v ^ (1 << b)]
    return build_graph(n, edges)


def ladder(k: int) -> Graph:
    """P_k x P_2. Vertex (i, j) gets id 2*i + j."""
    if k < 1:
        raise GraphError("ladder needs k >= 1")
    edges = []
    for i in range(k):
        edges.append((2 * i, 2 * i + 1))
        if i + 1 < k:
            edges.append((2 * i, 2 * i + 2))
            edges.append((2 * i + 1, 2 * i + 3))
    return build_graph(2 * k, edges)


def prism(k: int) -> Graph:
    """C_k x P_2, the circular ladder; cubic for every k >= 3."""
    if k < 3:
        raise GraphError("prism needs k >= 3")
    edges = []
    for i in range(k):
        j = (i + 1) % k
        edges.append((2 * i, 2 * i + 1))
        edges.append((2 * i, 2 * j))
        edges.append((2 * i + 1, 2 * j + 1))
    return build_graph(2 * k, edges)


def g77() -> Graph:
    # 4-cycle 0-1-2-3 with pendants 4,5,6 hung on 0,1,2.
    return build_graph(7, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 5), (2, 6)])


def _torus_offsets(lattice: str, x: int, y: int) -> list[tuple[int, int]]:
    if lattice == "SQR":
        return [(1, 0), (-1, 0), (0, 1), (0, -1)]
    if lattice == "TRI":
        return [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)]
    if lattice == "KNG":
        return [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1)]
    if lattice == "HEX":
        # brick wall: the vertical edge above (x,y) exists only at even x+y
        out = [(1, 0), (-1, 0)]
        out.append((0, 1) if (x + y) % 2 == 0 else (0, -1))
        return out
    raise GraphError(f"unknown lattice {lattice!r}")


def torus(lattice: str, w: int, h: int) -> Graph:
    """Wraparound grid on w*h vertices; id of (x, y) is y*w + x.

    HEX additionally needs w and h even so the brick-wall parity is
    consistent across the wrap.
    """
    lattice = lattice.upper()
    if lattice not in TORUS_LATTICES:
        raise GraphError(f"unknown lattice {lattice!r}")
    if w < 3 or h < 3:
        raise GraphError("torus needs w, h >= 3")
    if lattice == "HEX" and (w % 2 or h % 2):
        raise GraphError("HEX torus needs even w and even h")
    edges = []
    for y in range(h):
        for x in range(w):
            u = y * w + x
            for dx, dy in _torus_offsets(lattice, x, y):
                v = ((y + dy) % h) * w + ((x + dx) % w)
                if u < v:
                    edges.append((u, v))
                elif u > v:
                    edges.append((v, u))
    return build_graph(w * h, edges)


_FAMILY_BUILDERS = {
    "path": path_graph,
    "cycle": cycle_graph,
    "complete": complete_graph,
    "hypercube": hypercube,
    "ladder": ladder,
    "prism": prism,
    "g77": g77,
    "torus": torus,
}


def generate(spec: FamilySpec) -> Graph:
    """Build the deterministic labeled graph named by spec."""
    builder = _FAMILY_BUILDERS.get(spec.kind)
    if builder is None:
        raise GraphError(f"unknown family {spec.kind!r}")
    try:
        return builder(*spec.args)
    except TypeError as exc:
        raise GraphError(f"bad parameters for {spec}: {exc}") from exc


def random_gnp(n: int, p: float, rng: random.Random) -> Graph:
    if n < 0 or not 0.0 <= p <= 1.0:
        raise GraphError("gnp needs n >= 0 and 0 <= p <= 1")
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return build_graph(n, edges)


def random_tree(n: int, rng: random.Random) -> Graph:
    """Uniform labeled tree via a random Pruefer sequence."""
    if n < 1:
        raise GraphError("tree needs n >= 1")
    if n == 1:
        return build_graph(1, [])
    if n == 2:
        return build_graph(2, [(0, 1)])
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    import heapq

    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return build_graph(n, edges)


# ---------------------------------------------------------------------------
# connected cubic graph enumeration

CUBIC_MIN_N = 4
CUBIC_MAX_N = 14


def enumerate_cubic(n: int, dedup: bool = True) -> Iterator[Graph]:
    """Yield every connected 3-regular graph on n vertices.

    The stream is produced by completing the smallest vertex that still
    misses neighbors; new neighbors are drawn from already-touched vertices
    with spare degree plus a block of fresh consecutive ids. Every
    connected cubic graph admits a discovery-order labeling of this form,
    so each isomorphism class appears at least once. With dedup=True
    (default) isomorphic repeats are filtered and each class appears
    exactly once; the stream is deterministic either way.
    """
    if n % 2 != 0:
        raise GraphError("cubic graphs need even n")
    if not CUBIC_MIN_N <= n <= CUBIC_MAX_N:
        raise GraphError(f"enumerate_cubic supports {CUBIC_MIN_N} <= n <= {CUBIC_MAX_N}")

    if dedup:
        import networkx as nx

        buckets: dict[str, list] = {}

        def fresh(g: Graph) -> bool:
            h = nx.Graph(list(g.edges))
            h.add_nodes_from(range(g.n))
            key = nx.weisfeiler_lehman_graph_hash(h, iterations=3)
            kept = buckets.setdefault(key, [])
            for other in kept:
                if nx.is_isomorphic(h, other):
                    return False
            kept.append(h)
            return True

        for g in _cubic_stream(n):
            if fresh(g):
                yield g
    else:
        yield from _cubic_stream(n)


def _cubic_stream(n: int) -> Iterator[Graph]:
    from itertools import combinations

    adj: list[set[int]] = [set() for _ in range(n)]
    edges: list[tuple[int, int]] = []

    def rec(used: int) -> Iterator[Graph]:
        v = -1
        for u in range(used):
            if len(adj[u]) < 3:
                v = u
                break
        if v == -1:
            if used == n:
                yield build_graph(n, edges)
            return
        need = 3 - len(adj[v])
        old = [u for u in range(v + 1, used) if len(adj[u]) < 3 and u not in adj[v]]
        max_fresh = min(need, n - used)
        for take_fresh in range(max_fresh, -1, -1):
            take_old = need - take_fresh
            if take_old > len(old):
                continue
            fresh_block = list(range(used, used + take_fresh))
            for chosen_old in combinations(old, take_old):
                picks = list(chosen_old) + fresh_block
                for u in picks:
                    adj[v].add(u)
                    adj[u].add(v)
                    edges.append((v, u))
                yield from rec(used + take_fresh)
                for u in picks:
                    adj[v].discard(u)
                    adj[u].discard(v)
                del edges[len(edges) - len(picks):]
        return

    # vertex 0 always starts with fresh neighbors 1,2,3
    yield from rec(1)


# ---------------------------------------------------------------------------
# file formats

def write_graph(g: Graph, fh: TextIO, comments: Sequence[str] = ()) -> None:
    """DIMACS-like text: 'p graph n m' header, 1-based 'e u v' lines."""
    for line in comments:
        fh.write(f"c {line}\n")
    fh.write(f"p graph {g.n} {g.m}\n")
    for u, v in g.edges:
        fh.write(f"e {u + 1} {v + 1}\n")


def read_graph(fh: TextIO) -> Graph:
    n = None
    declared_m = None
    edges: list[tuple[int, int]] = []
    for raw in fh:
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "graph":
                raise GraphError(f"bad header line {line!r}")
            n, declared_m = int(parts[2]), int(parts[3])
        elif parts[0] == "e":
            if n is None:
                raise GraphError("edge line before header")
            if len(parts) != 3:
                raise GraphError(f"bad edge line {line!r}")
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            edges.append((u, v))
        else:
            raise GraphError(f"unrecognized line {line!r}")
    if n is None:
        raise GraphError("missing 'p graph' header")
    g = build_graph(n, edges)
    if g.m != declared_m:
        raise GraphError(f"header declares m={declared_m} but file has {g.m} distinct edges")
    return g


def write_detectors(detectors: Iterable[int], fh: TextIO) -> None:
    """Detector-set text: 's k' then one 1-based 'd v' line per detector."""
    ds = sorted(set(detectors))
    fh.write(f"s {len(ds)}\n")
    for v in ds:
        fh.write(f"d {v + 1}\n")


def read_detectors(fh: TextIO) -> list[int]:
    declared = None
    out: list[int] = []
    for raw in fh:
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s" and len(parts) == 2:
            declared = int(parts[1])
        elif parts[0] == "d" and len(parts) == 2:
            out.append(int(parts[1]) - 1)
        else:
            raise GraphError(f"unrecognized line {line!r}")
    if declared is None:
        raise GraphError("missing 's' header")
    if len(out) != declared:
        raise GraphError(f"header declares {declared} detectors, file has {len(out)}")
    return out


def to_dot(g: Graph, detectors: Iterable[int] | None = None, name: str = "G") -> str:
    """Graphviz text; detector vertices come out filled."""
    det = set(detectors or ())
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for v in range(g.n):
        style = ' [style=filled, fillcolor=gray75]' if v in det else ""
        lines.append(f"  {v}{style};")
    for u, v in g.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
