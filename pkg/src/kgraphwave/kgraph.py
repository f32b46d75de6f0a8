"""Finite higher-rank graphs (k-graphs) and their path arithmetic.

A k-graph is stored as its colored skeleton (vertices plus edges carrying a
color in 1..k) together with the factorization squares: for every composable
pair of edges of distinct colors, the unique color-swapped pair representing
the same length-two morphism.  Every path is kept in a canonical normal form,
the edge word with all color-1 edges first, then color-2, and so on; the
squares act as rewriting rules between equivalent words.

Degrees are plain tuples of non-negative ints of length k.  All structures
are immutable after construction and all enumeration orders are
deterministic: edge ids sort lexicographically, path lists sort by word.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from pathlib import Path as FilePath
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CompositionError,
    DegreeRangeError,
    ParseError,
    ValidationError,
)

Degree = tuple[int, ...]


def as_degree(value: Sequence[int], k: int) -> Degree:
    deg = tuple(int(x) for x in value)
    if len(deg) != k:
        raise DegreeRangeError(f"degree {deg} has length {len(deg)}, expected {k}")
    if any(x < 0 for x in deg):
        raise DegreeRangeError(f"degree {deg} has negative entries")
    return deg


def deg_add(p: Degree, q: Degree) -> Degree:
    return tuple(a + b for a, b in zip(p, q))


def deg_sub(p: Degree, q: Degree) -> Degree:
    return tuple(a - b for a, b in zip(p, q))


def deg_le(p: Degree, q: Degree) -> bool:
    return all(a <= b for a, b in zip(p, q))


def deg_join(p: Degree, q: Degree) -> Degree:
    return tuple(max(a, b) for a, b in zip(p, q))


def deg_scale(n: int, p: Degree) -> Degree:
    return tuple(n * a for a in p)


@dataclass(frozen=True)
class Edge:
    """A colored edge; ``source``/``range`` name vertices, color is 1-based."""

    id: str
    color: int
    source: str
    range: str


@dataclass(frozen=True)
class FactorizationSquare:
    """The two sides of one commuting square.

    ``left`` is the ascending side (color-i edge then color-j edge, i < j) in
    word order, ``right`` the equivalent descending side.  Word order puts the
    range end first: a word (e, f) denotes the morphism with range r(e) and
    source s(f), composable when s(e) = r(f).
    """

    color_pair: tuple[int, int]
    left: tuple[str, str]
    right: tuple[str, str]


class KGraph:
    """A finite k-graph: validated skeleton plus factorization squares."""

    def __init__(self, k: int, vertices: Sequence[str], edges: Iterable[Edge],
                 squares: Iterable[FactorizationSquare]):
        self.k = int(k)
        self.vertices = tuple(vertices)
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        edges = list(edges)
        if len({e.id for e in edges}) != len(edges):
            raise ValidationError("duplicate_id", "duplicate edge ids")
        self.edges = {e.id: e for e in edges}
        self.squares = tuple(squares)
        self._validate_skeleton()
        self._swap = self._build_swap()
        self._by_range_color = self._index_edges()
        self._check_square_coverage()
        if self.k >= 3:
            self._check_cube_condition()
        self._check_commutation()

    # -- construction-time validation -------------------------------------

    def _validate_skeleton(self):
        if self.k < 1:
            raise ValidationError("color_out_of_range", f"k must be >= 1, got {self.k}")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("duplicate_id", "duplicate vertex names")
        for e in self.edges.values():
            if not 1 <= e.color <= self.k:
                raise ValidationError(
                    "color_out_of_range", f"edge {e.id} has color {e.color}, k={self.k}")
            for v in (e.source, e.range):
                if v not in self.vertex_index:
                    raise ValidationError(
                        "dangling_reference", f"edge {e.id} references unknown vertex {v}")

    def _build_swap(self) -> dict[tuple[str, str], tuple[str, str]]:
        swap: dict[tuple[str, str], tuple[str, str]] = {}
        for sq in self.squares:
            for pair in (sq.left, sq.right):
                for eid in pair:
                    if eid not in self.edges:
                        raise ValidationError(
                            "dangling_reference", f"square references unknown edge {eid}")
            le, lf = (self.edges[i] for i in sq.left)
            rf, re = (self.edges[i] for i in sq.right)
            if not (le.color < lf.color and rf.color == lf.color and re.color == le.color):
                raise ValidationError(
                    "non_bijective_squares",
                    f"square {sq.left}/{sq.right} does not pair ascending with descending colors")
            if sq.color_pair != (le.color, lf.color):
                raise ValidationError(
                    "non_bijective_squares", f"square {sq.left} color pair mismatch")
            if le.source != lf.range or rf.source != re.range:
                raise ValidationError(
                    "non_bijective_squares",
                    f"square side {sq.left} or {sq.right} is not composable")
            if le.range != rf.range or lf.source != re.source:
                raise ValidationError(
                    "non_bijective_squares",
                    f"square {sq.left}/{sq.right} sides have different endpoints")
            for key, val in ((sq.left, sq.right), (sq.right, sq.left)):
                if key in swap:
                    raise ValidationError(
                        "non_bijective_squares", f"edge pair {key} appears in two squares")
                swap[key] = val
        return swap

    def _index_edges(self) -> dict[tuple[str, int], tuple[str, ...]]:
        index: dict[tuple[str, int], list[str]] = {}
        for eid in sorted(self.edges):
            e = self.edges[eid]
            index.setdefault((e.range, e.color), []).append(eid)
        return {key: tuple(ids) for key, ids in index.items()}

    def _check_square_coverage(self):
        for a in self.edges.values():
            for b in self.edges.values():
                if a.color == b.color or a.source != b.range:
                    continue
                if (a.id, b.id) not in self._swap:
                    raise ValidationError(
                        "missing_square", f"no square covers the composable pair ({a.id}, {b.id})")

    def _check_cube_condition(self):
        for x, y, z in product(self.edges.values(), repeat=3):
            if len({x.color, y.color, z.color}) != 3:
                continue
            if x.source != y.range or y.source != z.range:
                continue
            word = (x.id, y.id, z.id)
            if self._rewrite(word, leftmost=True) != self._rewrite(word, leftmost=False):
                raise ValidationError(
                    "cube_condition", f"tri-colored word {word} has order-dependent normal form")

    def _check_commutation(self):
        mats = vertex_matrices(self, check=False)
        for i in range(self.k):
            for j in range(i + 1, self.k):
                if not np.array_equal(mats[i] @ mats[j], mats[j] @ mats[i]):
                    raise ValidationError(
                        "non_bijective_squares",
                        f"vertex matrices for colors {i + 1} and {j + 1} do not commute")

    # -- lookups -----------------------------------------------------------

    def edge(self, eid: str) -> Edge:
        return self.edges[eid]

    def color(self, eid: str) -> int:
        return self.edges[eid].color

    def edges_into(self, vertex: str, color: int) -> tuple[str, ...]:
        """Edge ids with the given range and color, sorted by id."""
        return self._by_range_color.get((vertex, color), ())

    def zero_degree(self) -> Degree:
        return (0,) * self.k

    # -- word rewriting ----------------------------------------------------

    def _check_word(self, word: Sequence[str]):
        for eid in word:
            if eid not in self.edges:
                raise CompositionError(f"unknown edge id {eid!r}")
        for a, b in zip(word, word[1:]):
            if self.edges[a].source != self.edges[b].range:
                raise CompositionError(
                    f"edges {a} and {b} are not composable "
                    f"(source {self.edges[a].source} != range {self.edges[b].range})")

    def _rewrite(self, word: Sequence[str], leftmost: bool = True) -> tuple[str, ...]:
        """Sort a composable word into ascending-color order via square swaps."""
        w = list(word)
        while True:
            positions = range(len(w) - 1)
            if not leftmost:
                positions = reversed(positions)
            for i in positions:
                if self.edges[w[i]].color > self.edges[w[i + 1]].color:
                    w[i], w[i + 1] = self._swap[(w[i], w[i + 1])]
                    break
            else:
                return tuple(w)

    def _pull_prefix(self, word: Sequence[str], p: Degree) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """Split a composable word as prefix * suffix with the prefix of degree p.

        The prefix comes out in normal form; the suffix is left as rewritten.
        """
        rest = list(word)
        prefix = []
        for color in range(1, self.k + 1):
            for _ in range(p[color - 1]):
                i = next(j for j, eid in enumerate(rest) if self.edges[eid].color == color)
                while i > 0:
                    rest[i - 1], rest[i] = self._swap[(rest[i - 1], rest[i])]
                    i -= 1
                prefix.append(rest.pop(0))
        return tuple(prefix), tuple(rest)

    # -- serialization -----------------------------------------------------

    def to_document(self) -> dict:
        return {
            "k": self.k,
            "vertices": list(self.vertices),
            "edges": [
                {"id": e.id, "color": e.color, "source": e.source, "range": e.range}
                for e in (self.edges[i] for i in sorted(self.edges))
            ],
            "squares": [
                {"left": list(sq.left), "right": list(sq.right)}
                for sq in self.squares
            ],
        }


@dataclass(frozen=True)
class Path:
    """A morphism of a k-graph in canonical normal form.

    A degree-0 path is a vertex: empty word, range = source = the vertex.
    Instances compare by word (and graph identity) and sort by word with the
    range vertex as tie-break, so path lists are reproducible.
    """

    graph: KGraph
    word: tuple[str, ...]
    degree: Degree
    range: str
    source: str

    def __lt__(self, other: "Path") -> bool:
        return (self.word, self.range) < (other.word, other.range)

    def is_vertex(self) -> bool:
        return not self.word

    def __repr__(self):
        body = "".join(self.word) if self.word else f"@{self.range}"
        return f"Path({body})"


def _path_from_normal_word(graph: KGraph, word: tuple[str, ...]) -> Path:
    census = [0] * graph.k
    for eid in word:
        census[graph.color(eid) - 1] += 1
    return Path(graph, word, tuple(census),
                graph.edge(word[0]).range, graph.edge(word[-1]).source)


def vertex_path(graph: KGraph, vertex: str) -> Path:
    if vertex not in graph.vertex_index:
        raise CompositionError(f"unknown vertex {vertex!r}")
    return Path(graph, (), graph.zero_degree(), vertex, vertex)


def normal_form(graph: KGraph, word: Sequence[str]) -> Path:
    """Rewrite a composable edge word to its unique normal-form path."""
    if not word:
        raise CompositionError("empty word has no endpoints; use vertex_path")
    graph._check_word(word)
    return _path_from_normal_word(graph, graph._rewrite(word))


def compose(p: Path, q: Path) -> Path:
    """Concatenate two paths (p then q, with s(p) = r(q)) and renormalize."""
    if p.graph is not q.graph:
        raise CompositionError("paths live on different graphs")
    if p.source != q.range:
        raise CompositionError(
            f"cannot compose: source {p.source} != range {q.range}")
    if p.is_vertex():
        return q
    if q.is_vertex():
        return p
    return _path_from_normal_word(p.graph, p.graph._rewrite(p.word + q.word))


def segment(path: Path, p: Sequence[int], q: Sequence[int]) -> Path:
    """The unique middle factor beta with path = alpha * beta * gamma,
    d(alpha) = p and d(beta) = q - p."""
    graph = path.graph
    p = as_degree(p, graph.k)
    q = as_degree(q, graph.k)
    if not (deg_le(p, q) and deg_le(q, path.degree)):
        raise DegreeRangeError(
            f"need 0 <= {p} <= {q} <= {path.degree} componentwise")
    prefix, rest = graph._pull_prefix(path.word, p)
    seg, _ = graph._pull_prefix(rest, deg_sub(q, p))
    if not seg:
        vertex = graph.edge(prefix[-1]).source if prefix else path.range
        return vertex_path(graph, vertex)
    return _path_from_normal_word(graph, seg)


def enumerate_paths(graph: KGraph, degree: Sequence[int],
                    range: str | None = None, source: str | None = None) -> list[Path]:
    """All normal-form paths of the given degree, lexicographic by edge word.

    Degree-0 paths are the vertex paths, listed in graph vertex order.
    """
    deg = as_degree(degree, graph.k)
    if range is not None and range not in graph.vertex_index:
        raise CompositionError(f"unknown vertex {range!r}")
    if source is not None and source not in graph.vertex_index:
        raise CompositionError(f"unknown vertex {source!r}")
    if sum(deg) == 0:
        verts = [v for v in graph.vertices
                 if (range is None or v == range) and (source is None or v == source)]
        return [vertex_path(graph, v) for v in verts]

    colors: list[int] = []
    for c, count in enumerate(deg, start=1):
        colors.extend([c] * count)

    out: list[Path] = []

    def extend(word: list[str], pos: int):
        if pos == len(colors):
            if source is None or graph.edge(word[-1]).source == source:
                out.append(_path_from_normal_word(graph, tuple(word)))
            return
        color = colors[pos]
        if pos == 0:
            if range is not None:
                candidates = graph.edges_into(range, color)
            else:
                candidates = tuple(eid for eid in sorted(graph.edges)
                                   if graph.color(eid) == color)
        else:
            candidates = graph.edges_into(graph.edge(word[-1]).source, color)
        for eid in candidates:
            word.append(eid)
            extend(word, pos + 1)
            word.pop()

    extend([], 0)
    return out


def extensions(path: Path, degree: Sequence[int]) -> list[Path]:
    """All paths ``path * mu`` with d(mu) = degree, in lexicographic mu order."""
    return [compose(path, mu)
            for mu in enumerate_paths(path.graph, degree, range=path.source)]


def vertex_matrices(graph: KGraph, check: bool = True) -> list[np.ndarray]:
    """Per-color integer matrices A_i with A_i[v, w] = #(color-i edges w -> v).

    Row and column order follow the graph vertex order; entry (v, w) counts
    edges with range v and source w, so A_i x propagates mass from sources to
    ranges.  With ``check`` the pairwise commutation forced by the
    factorization property is asserted.
    """
    n = len(graph.vertices)
    mats = [np.zeros((n, n), dtype=np.int64) for _ in range(graph.k)]
    for e in graph.edges.values():
        mats[e.color - 1][graph.vertex_index[e.range], graph.vertex_index[e.source]] += 1
    if check:
        for i in range(graph.k):
            for j in range(i + 1, graph.k):
                assert np.array_equal(mats[i] @ mats[j], mats[j] @ mats[i])
    return mats


# -- document parsing ------------------------------------------------------

_TOP_FIELDS = {"k", "vertices", "edges", "squares"}
_EDGE_FIELDS = {"id", "color", "source", "range"}
_SQUARE_FIELDS = {"left", "right"}


def load_kgraph(document) -> KGraph:
    """Build and fully validate a KGraph from a document.

    Accepts a dict, a JSON string, or a filesystem path to a ``.kg`` file.
    Unknown fields are rejected at every level.
    """
    if isinstance(document, FilePath):
        document = document.read_text()
    if isinstance(document, str):
        stripped = document.lstrip()
        if not stripped.startswith("{"):
            document = FilePath(document).read_text()
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ParseError(f"expected a JSON object, got {type(document).__name__}")

    unknown = set(document) - _TOP_FIELDS
    if unknown:
        raise ParseError(f"unknown top-level fields: {sorted(unknown)}")
    missing = _TOP_FIELDS - set(document)
    if missing:
        raise ParseError(f"missing required fields: {sorted(missing)}")
    if not isinstance(document["k"], int):
        raise ParseError("field 'k' must be an integer")
    if not isinstance(document["vertices"], list) or not all(
            isinstance(v, str) for v in document["vertices"]):
        raise ParseError("field 'vertices' must be a list of names")

    edges = []
    for rec in document["edges"]:
        if not isinstance(rec, dict):
            raise ParseError("edge records must be objects")
        unknown = set(rec) - _EDGE_FIELDS
        if unknown:
            raise ParseError(f"unknown edge fields: {sorted(unknown)}")
        if set(rec) != _EDGE_FIELDS:
            raise ParseError(f"edge record missing fields: {sorted(_EDGE_FIELDS - set(rec))}")
        if not isinstance(rec["color"], int):
            raise ParseError(f"edge {rec.get('id')!r} color must be an integer")
        edges.append(Edge(str(rec["id"]), rec["color"], str(rec["source"]), str(rec["range"])))
    edge_color = {e.id: e.color for e in edges}

    squares = []
    for rec in document["squares"]:
        if not isinstance(rec, dict):
            raise ParseError("square records must be objects")
        unknown = set(rec) - _SQUARE_FIELDS
        if unknown:
            raise ParseError(f"unknown square fields: {sorted(unknown)}")
        if set(rec) != _SQUARE_FIELDS:
            raise ParseError("square record must have 'left' and 'right'")
        left, right = rec["left"], rec["right"]
        if not (isinstance(left, list) and isinstance(right, list)
                and len(left) == 2 and len(right) == 2):
            raise ParseError("square sides must be two-edge lists")
        for eid in (*left, *right):
            if eid not in edge_color:
                raise ValidationError("dangling_reference",
                                      f"square references unknown edge {eid}")
        pair = (edge_color[left[0]], edge_color[left[1]])
        squares.append(FactorizationSquare(pair, tuple(left), tuple(right)))

    return KGraph(document["k"], document["vertices"], edges, squares)


def load_kgraph_file(path) -> KGraph:
    return load_kgraph(FilePath(path))


def bouquet_graph(n: int) -> KGraph:
    """The 1-vertex 1-graph with loops 0..n-1: the full shift on n letters.

    Letter ids are zero-padded so lexicographic edge order agrees with
    numeric letter order for any alphabet size.
    """
    width = len(str(max(n - 1, 0)))
    edges = [Edge(f"{i:0{width}d}", 1, "v", "v") for i in range(n)]
    return KGraph(1, ["v"], edges, [])


def fixture_path(name: str) -> FilePath:
    """Path to one of the packaged example graphs (``lambda3``, ``ledrappier``,
    ``lambda1-sphere``, ``bouquet-2``, ``bouquet-3``)."""
    p = FilePath(__file__).parent / "data" / f"{name}.kg"
    if not p.exists():
        raise FileNotFoundError(f"no packaged fixture named {name!r}")
    return p
