"""Finite bounded-degree graphs with a distinguished basepoint.

Provides generators for the graph families used throughout the package
(box truncations of integer lattices, rooted regular trees, balls in free
group Cayley graphs, and the wedge of a lattice box with a tree), plus
ball queries, the exponential ball-count bound, and a plain-text file
format. All graphs are finite truncations of infinite spaces; a
``boundary_margin`` band near the truncation boundary is excluded from
geometric assertions via ``safe_radius``.
"""

from __future__ import annotations

import hashlib
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    ConfigError,
    DomainError,
    GraphInvariantError,
    PreconditionError,
    SizeCapError,
)

DEFAULT_VERTEX_CAP = 5_000_000


# ---------------------------------------------------------------------------
# Graph

class Graph:
    """Immutable undirected graph with dense 0-based vertex ids.

    Vertices are addressed by id, edges by their canonical ``(min, max)``
    pair; the dense edge index (position in the sorted edge list) is the
    stable address used by weight files.

    Instances are immutable after construction and safe for unrestricted
    concurrent reads.
    """

    def __init__(
        self,
        adjacency: Sequence[Sequence[int]],
        basepoint: int,
        kind_tag: str,
        truncation_radius: int,
        boundary_margin: int | None = None,
        named_rays: Mapping[str, tuple[int, ...]] | None = None,
        degree_bound: int | None = None,
    ):
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(nbrs)) for nbrs in adjacency
        )
        self.basepoint = int(basepoint)
        self.kind_tag = kind_tag
        self.truncation_radius = int(truncation_radius)
        if boundary_margin is None:
            boundary_margin = math.ceil(0.1 * self.truncation_radius)
        self.boundary_margin = int(boundary_margin)
        self.named_rays: dict[str, tuple[int, ...]] = dict(named_rays or {})
        max_deg = max((len(n) for n in self.adjacency), default=0)
        # the invariant requires degree_bound >= 2 even for degenerate graphs
        self.degree_bound = int(degree_bound) if degree_bound is not None else max(2, max_deg)
        self._validate(max_deg)
        self.edges: tuple[tuple[int, int], ...] = tuple(
            sorted((u, v) for u in range(self.vertex_count) for v in self.adjacency[u] if u < v)
        )
        self.edge_ids: dict[tuple[int, int], int] = {e: i for i, e in enumerate(self.edges)}
        self._adj_with_eids: list[list[tuple[int, int]]] | None = None
        self._text: str | None = None
        self._fingerprint: str | None = None

    # -- invariants ---------------------------------------------------------

    def _validate(self, max_deg: int) -> None:
        n = self.vertex_count
        if n == 0:
            raise GraphInvariantError("graph has no vertices")
        if not (0 <= self.basepoint < n):
            raise GraphInvariantError(f"basepoint {self.basepoint} out of range")
        if self.degree_bound < 2:
            raise GraphInvariantError("degree_bound must be >= 2")
        if max_deg > self.degree_bound:
            raise GraphInvariantError(
                f"vertex degree {max_deg} exceeds degree_bound {self.degree_bound}"
            )
        for u, nbrs in enumerate(self.adjacency):
            if len(set(nbrs)) != len(nbrs):
                raise GraphInvariantError(f"duplicate edges at vertex {u}")
            for v in nbrs:
                if v == u:
                    raise GraphInvariantError(f"self-loop at vertex {u}")
                if not (0 <= v < n):
                    raise GraphInvariantError(f"neighbor {v} of {u} out of range")
                if u not in self.adjacency[v]:
                    raise GraphInvariantError(f"asymmetric edge ({u}, {v})")
        # connectivity
        seen = bytearray(n)
        seen[self.basepoint] = 1
        queue = deque([self.basepoint])
        count = 1
        while queue:
            x = queue.popleft()
            for y in self.adjacency[x]:
                if not seen[y]:
                    seen[y] = 1
                    count += 1
                    queue.append(y)
        if count != n:
            raise GraphInvariantError("graph is not connected")

    # -- basic queries ------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def safe_radius(self) -> int:
        """Largest basepoint-centered radius unaffected by truncation."""
        return self.truncation_radius - self.boundary_margin

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edge_id(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self.edge_ids[key]
        except KeyError:
            raise GraphInvariantError(f"no edge ({u}, {v})") from None

    def adjacency_with_edge_ids(self) -> list[list[tuple[int, int]]]:
        """Per-vertex list of (neighbor, edge id), cached for the engines."""
        if self._adj_with_eids is None:
            self._adj_with_eids = [
                [(v, self.edge_ids[(u, v) if u < v else (v, u)]) for v in nbrs]
                for u, nbrs in enumerate(self.adjacency)
            ]
        return self._adj_with_eids

    # -- file format --------------------------------------------------------

    def text(self) -> str:
        """Canonical text form; see ``read_graph`` for the inverse."""
        if self._text is None:
            lines = [
                f"vertices {self.vertex_count} basepoint {self.basepoint} "
                f"degree_bound {self.degree_bound}"
            ]
            lines.extend(f"edge {u} {v}" for u, v in self.edges)
            self._text = "\n".join(lines) + "\n"
        return self._text

    def fingerprint(self) -> str:
        if self._fingerprint is None:
            self._fingerprint = hashlib.sha256(self.text().encode("ascii")).hexdigest()
        return self._fingerprint

    def __repr__(self) -> str:
        return (
            f"Graph({self.kind_tag}, n={self.vertex_count}, "
            f"q={self.degree_bound}, o={self.basepoint})"
        )


# ---------------------------------------------------------------------------
# Specs

@dataclass(frozen=True)
class GraphSpec:
    """Generator descriptor.

    kinds and parameters:
      lattice_box(dim, radius)        box [-radius, radius]^dim of the integer lattice
      regular_tree(arity, depth)      rooted tree, root has `arity` children,
                                      every internal vertex has degree `arity`
      free_group_ball(rank, radius)   reduced words of length <= radius
      wedge(dim, radius, arity, depth)  lattice box and regular tree glued at
                                      their basepoints (one shared vertex)
    """

    kind: str
    params: tuple[int, ...]

    _ARITY = {"lattice_box": 2, "regular_tree": 2, "free_group_ball": 2, "wedge": 4}

    def __post_init__(self):
        if self.kind not in self._ARITY:
            raise ConfigError(f"unknown graph kind {self.kind!r}")
        if len(self.params) != self._ARITY[self.kind]:
            raise ConfigError(f"{self.kind} takes {self._ARITY[self.kind]} parameters")
        if any(p <= 0 for p in self.params):
            raise ConfigError(f"{self.kind} parameters must be positive: {self.params}")
        if self.kind == "regular_tree" and self.params[0] < 2:
            raise ConfigError("regular_tree arity must be >= 2")
        if self.kind == "wedge" and self.params[2] < 2:
            raise ConfigError("wedge tree arity must be >= 2")

    @staticmethod
    def lattice_box(dim: int, radius: int) -> "GraphSpec":
        return GraphSpec("lattice_box", (dim, radius))

    @staticmethod
    def regular_tree(arity: int, depth: int) -> "GraphSpec":
        return GraphSpec("regular_tree", (arity, depth))

    @staticmethod
    def free_group_ball(rank: int, radius: int) -> "GraphSpec":
        return GraphSpec("free_group_ball", (rank, radius))

    @staticmethod
    def wedge(lattice: "GraphSpec", tree: "GraphSpec") -> "GraphSpec":
        if lattice.kind != "lattice_box" or tree.kind != "regular_tree":
            raise ConfigError("wedge glues a lattice_box and a regular_tree")
        return GraphSpec("wedge", lattice.params + tree.params)

    def spec_string(self) -> str:
        short = {"lattice_box": "lattice", "regular_tree": "tree",
                 "free_group_ball": "free", "wedge": "wedge"}[self.kind]
        return short + ":" + ",".join(str(p) for p in self.params)

    def vertex_count(self) -> int:
        """Closed-form vertex count, used for the size cap check."""
        if self.kind == "lattice_box":
            d, n = self.params
            return (2 * n + 1) ** d
        if self.kind == "regular_tree":
            a, depth = self.params
            return _tree_count(a, depth)
        if self.kind == "free_group_ball":
            r, rad = self.params
            return _tree_count(2 * r, rad)
        d, n, a, depth = self.params
        return (2 * n + 1) ** d + _tree_count(a, depth) - 1


def _tree_count(arity: int, depth: int) -> int:
    # root has `arity` children, deeper vertices arity-1 children
    total, level = 1, arity
    for _ in range(depth):
        total += level
        level *= arity - 1
    return total


def parse_graph_spec(text: str) -> GraphSpec:
    """Parse the CLI grammar: lattice:d,n  tree:a,d  free:r,n  wedge:d,n,a,t."""
    try:
        head, _, tail = text.partition(":")
        params = tuple(int(p) for p in tail.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad graph spec {text!r}") from exc
    kinds = {"lattice": "lattice_box", "tree": "regular_tree",
             "free": "free_group_ball", "wedge": "wedge"}
    if head not in kinds:
        raise ConfigError(f"unknown graph kind {head!r} in {text!r}")
    return GraphSpec(kinds[head], params)


# ---------------------------------------------------------------------------
# Generators

def build_graph(spec: GraphSpec, vertex_cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """Build the graph described by ``spec``.

    Deterministic: the same spec always yields identical adjacency arrays.
    The basepoint is the lattice origin / tree root / group identity /
    wedge point, ``degree_bound`` is the exact maximum degree, and
    ``boundary_margin`` is 10% of the truncation radius, rounded up.
    """
    predicted = spec.vertex_count()
    if predicted > vertex_cap:
        raise SizeCapError(
            f"{spec.kind}{spec.params} would create {predicted} vertices, "
            f"exceeding the cap of {vertex_cap}"
        )
    if spec.kind == "lattice_box":
        return _build_lattice(*spec.params)
    if spec.kind == "regular_tree":
        return _build_tree(*spec.params)
    if spec.kind == "free_group_ball":
        return _build_free_ball(*spec.params)
    return _build_wedge(*spec.params)


def lattice_vertex_id(dim: int, radius: int, coords: Sequence[int]) -> int:
    """Row-major id of a lattice point of lattice_box(dim, radius)."""
    side = 2 * radius + 1
    vid = 0
    for c in coords:
        if abs(c) > radius:
            raise DomainError(f"coordinate {c} outside [-{radius}, {radius}]")
        vid = vid * side + (c + radius)
    return vid


def lattice_coords(dim: int, radius: int, vid: int) -> tuple[int, ...]:
    side = 2 * radius + 1
    out = []
    for _ in range(dim):
        out.append(vid % side - radius)
        vid //= side
    return tuple(reversed(out))


def _build_lattice(dim: int, radius: int) -> Graph:
    side = 2 * radius + 1
    count = side**dim
    adjacency: list[list[int]] = [[] for _ in range(count)]
    strides = [side ** (dim - 1 - i) for i in range(dim)]
    for vid in range(count):
        coords = lattice_coords(dim, radius, vid)
        for axis in range(dim):
            if coords[axis] < radius:
                adjacency[vid].append(vid + strides[axis])
            if coords[axis] > -radius:
                adjacency[vid].append(vid - strides[axis])
    basepoint = lattice_vertex_id(dim, radius, (0,) * dim)
    rays: dict[str, tuple[int, ...]] = {}
    for axis in range(dim):
        plus = [lattice_vertex_id(dim, radius, tuple(r if i == axis else 0 for i in range(dim)))
                for r in range(radius + 1)]
        minus = [lattice_vertex_id(dim, radius, tuple(-r if i == axis else 0 for i in range(dim)))
                 for r in range(radius + 1)]
        rays[f"axis:+{axis}"] = tuple(plus)
        rays[f"axis:-{axis}"] = tuple(minus)
    if dim >= 2:
        diag = [(0, 0)]
        x = y = 0
        while x < radius or y < radius:
            if x <= y and x < radius:
                x += 1
            else:
                y += 1
            diag.append((x, y))
        rays["diag"] = tuple(
            lattice_vertex_id(dim, radius, (cx, cy) + (0,) * (dim - 2)) for cx, cy in diag
        )
    return Graph(adjacency, basepoint, f"lattice_box({dim},{radius})", radius, named_rays=rays)


def _build_tree(arity: int, depth: int) -> Graph:
    adjacency: list[list[int]] = [[]]
    level = [0]
    for level_idx in range(depth):
        nxt = []
        for parent in level:
            kids = arity if level_idx == 0 else arity - 1
            for _ in range(kids):
                child = len(adjacency)
                adjacency.append([parent])
                adjacency[parent].append(child)
                nxt.append(child)
        level = nxt
    rays: dict[str, tuple[int, ...]] = {}
    for i in range(arity):
        ray = [0]
        if depth >= 1:
            ray.append(adjacency[0][i])
            while True:
                kids = [v for v in adjacency[ray[-1]] if v != ray[-2]]
                if not kids:
                    break
                ray.append(min(kids))
        rays[f"branch:{i}"] = tuple(ray)
    return Graph(adjacency, 0, f"regular_tree({arity},{depth})", depth, named_rays=rays)


def _build_free_ball(rank: int, radius: int) -> Graph:
    # generators 0..2*rank-1; generator g and its inverse are paired by g ^ 1
    adjacency: list[list[int]] = [[]]
    word_of: list[tuple[int, ...]] = [()]
    frontier = [0]
    for _ in range(radius):
        nxt = []
        for vid in frontier:
            word = word_of[vid]
            for g in range(2 * rank):
                if word and word[-1] == g ^ 1:
                    continue
                child = len(adjacency)
                adjacency.append([vid])
                adjacency[vid].append(child)
                word_of.append(word + (g,))
                nxt.append(child)
        frontier = nxt
    rays: dict[str, tuple[int, ...]] = {}
    index = {w: i for i, w in enumerate(word_of)}
    for g in range(2 * rank):
        ray = [index[(g,) * k] for k in range(radius + 1)]
        rays[f"branch:{g}"] = tuple(ray)
    return Graph(adjacency, 0, f"free_group_ball({rank},{radius})", radius, named_rays=rays)


def _build_wedge(dim: int, radius: int, arity: int, depth: int) -> Graph:
    lattice = _build_lattice(dim, radius)
    tree = _build_tree(arity, depth)
    offset = lattice.vertex_count  # tree vertex t>0 becomes offset + t - 1
    remap = lambda t: lattice.basepoint if t == 0 else offset + t - 1
    adjacency = [list(nbrs) for nbrs in lattice.adjacency]
    adjacency.extend([] for _ in range(tree.vertex_count - 1))
    for t in range(tree.vertex_count):
        for s in tree.adjacency[t]:
            adjacency[remap(t)].append(remap(s))
    rays = {name: ray for name, ray in lattice.named_rays.items()}
    rays.update(
        (name, tuple(remap(t) for t in ray)) for name, ray in tree.named_rays.items()
    )
    return Graph(
        adjacency,
        lattice.basepoint,
        f"wedge(lattice_box({dim},{radius}),regular_tree({arity},{depth}))",
        min(radius, depth),
        named_rays=rays,
    )


def graph_from_edges(
    edges: Iterable[tuple[int, int]],
    basepoint: int = 0,
    kind_tag: str = "custom",
) -> Graph:
    """Build a graph from an explicit edge list (test and file plumbing)."""
    edges = list(edges)
    n = max(max(u, v) for u, v in edges) + 1 if edges else 1
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        if v not in adjacency[u]:
            adjacency[u].append(v)
            adjacency[v].append(u)
    g = Graph(adjacency, basepoint, kind_tag, truncation_radius=1)
    radius = _eccentricity(g, basepoint)
    return Graph(adjacency, basepoint, kind_tag, truncation_radius=max(radius, 1))


def _eccentricity(g: Graph, v: int) -> int:
    dist = [-1] * g.vertex_count
    dist[v] = 0
    queue = deque([v])
    far = 0
    while queue:
        x = queue.popleft()
        for y in g.adjacency[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                far = max(far, dist[y])
                queue.append(y)
    return far


# ---------------------------------------------------------------------------
# Balls and the ball-count bound

def ball(g: Graph, center: int, radius: int) -> set[int]:
    """Vertices at graph distance <= radius from ``center`` (base metric)."""
    if not (0 <= center < g.vertex_count):
        raise PreconditionError(f"invalid center {center}")
    if radius < 0:
        raise PreconditionError("radius must be >= 0")
    out = {center}
    frontier = [center]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for y in g.adjacency[x]:
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        if not nxt:
            break
        frontier = nxt
    return out


@dataclass(frozen=True)
class BallBoundReport:
    radius: int
    count: int
    bound: int
    holds: bool


def check_ball_bound(g: Graph, D: float, n: int) -> BallBoundReport:
    """Compare |B(o, floor(D*n))| against the degree bound (q+1)^(floor(D*n)+1).

    Precondition: the ball must stay inside the unclipped region
    (floor(D*n) <= safe_radius), else the count would be distorted by
    truncation.
    """
    radius = math.floor(D * n)
    if radius < 0:
        raise PreconditionError("D * n must be >= 0")
    if radius > g.safe_radius:
        raise PreconditionError(
            f"ball radius {radius} exceeds safe radius {g.safe_radius} "
            f"(truncation {g.truncation_radius} minus margin {g.boundary_margin})"
        )
    count = len(ball(g, g.basepoint, radius))
    bound = (g.degree_bound + 1) ** (radius + 1)
    return BallBoundReport(radius=radius, count=count, bound=bound, holds=count <= bound)


# ---------------------------------------------------------------------------
# Text format

def write_graph(g: Graph, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(g.text())


def read_graph(text_or_path: str, from_path: bool = True) -> Graph:
    """Parse the text format written by ``write_graph``; round-trips exactly."""
    if from_path:
        with open(text_or_path, "r", encoding="ascii") as fh:
            text = fh.read()
    else:
        text = text_or_path
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ConfigError("empty graph file")
    head = lines[0].split()
    if len(head) != 6 or head[0] != "vertices" or head[2] != "basepoint" or head[4] != "degree_bound":
        raise ConfigError(f"bad graph header: {lines[0]!r}")
    n, basepoint, q = int(head[1]), int(head[3]), int(head[5])
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3 or parts[0] != "edge":
            raise ConfigError(f"bad edge line: {ln!r}")
        u, v = int(parts[1]), int(parts[2])
        adjacency[u].append(v)
        adjacency[v].append(u)
    g = Graph(adjacency, basepoint, "file", truncation_radius=1, degree_bound=q)
    radius = _eccentricity(g, basepoint)
    return Graph(adjacency, basepoint, "file", truncation_radius=max(radius, 1), degree_bound=q)
