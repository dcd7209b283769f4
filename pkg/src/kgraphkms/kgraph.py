"""Finite higher-rank graphs (k-graphs) without sources.

A k-graph is presented by its skeleton (a k-colored directed multigraph)
together with a complete set of commuting squares: for every composable
pair of differently colored edges f (color i) and g (color j), i < j,
exactly one square f*g = g2*f2 prescribes how the pair factors through
the opposite color order.  Paths are stored in a color-sorted normal
form, which the squares make well defined; for rank >= 3 an exhaustive
cube check certifies that the normal form is confluent.

Edges are oriented src -> dst with dst the *range* of the edge, so a
path "from w to v" has source w and range v, and the vertex matrices
count A_i(v, w) = #{color-i edges src=w, dst=v}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .digraph import reachable_sets, reverse_adj, tarjan_scc

Degree = tuple[int, ...]


# ---------------------------------------------------------------------------
# Degree arithmetic (componentwise partial order on N^k)
# ---------------------------------------------------------------------------

def deg_zero(k: int) -> Degree:
    return (0,) * k


def deg_unit(k: int, color: int) -> Degree:
    """Standard basis vector for a color in 1..k."""
    return tuple(1 if i == color - 1 else 0 for i in range(k))


def deg_leq(a: Degree, b: Degree) -> bool:
    return all(x <= y for x, y in zip(a, b))


def deg_join(a: Degree, b: Degree) -> Degree:
    return tuple(max(x, y) for x, y in zip(a, b))


def deg_meet(a: Degree, b: Degree) -> Degree:
    return tuple(min(x, y) for x, y in zip(a, b))


def deg_add(a: Degree, b: Degree) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


def deg_sub(a: Degree, b: Degree) -> Degree:
    """a - b; only meaningful when b <= a for degrees proper."""
    return tuple(x - y for x, y in zip(a, b))


def deg_total(a: Degree) -> int:
    return sum(a)


def deg_box(k: int, bound: int) -> list[Degree]:
    """All nonzero degrees n with n <= (bound, ..., bound), sorted."""
    out: list[Degree] = []

    def rec(prefix: tuple[int, ...]) -> None:
        if len(prefix) == k:
            if any(prefix):
                out.append(prefix)
            return
        for c in range(bound + 1):
            rec(prefix + (c,))

    rec(())
    out.sort()
    return out


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class KGraphError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(KGraphError):
    """Malformed graph document (syntax or schema)."""


class UnknownReference(GraphFormatError):
    """A vertex or edge id is referenced but never declared."""


class DuplicateId(GraphFormatError):
    """A vertex or edge id is declared twice."""


class ValidationError(KGraphError):
    """The parsed document does not present a valid k-graph."""


class MalformedSquare(ValidationError):
    """Square entries have inconsistent colors or endpoints."""


class MissingSquare(ValidationError):
    def __init__(self, f: str, g: str, orientation: str):
        self.pair = (f, g)
        super().__init__(
            f"no square covers the composable pair ({f}, {g}) [{orientation}]"
        )


class DuplicateSquare(ValidationError):
    def __init__(self, f: str, g: str):
        self.pair = (f, g)
        super().__init__(f"two squares cover the composable pair ({f}, {g})")


class CubeInconsistency(ValidationError):
    def __init__(self, triple: tuple[str, str, str]):
        self.triple = triple
        super().__init__(
            f"edge triple {triple} factors differently under the two square orders"
        )


class SourceVertex(ValidationError):
    def __init__(self, vertex: str, color: int):
        self.vertex = vertex
        self.color = color
        super().__init__(f"vertex {vertex!r} has no incoming color-{color} edge")


class NonCommutingMatrices(ValidationError):
    """Vertex matrices fail to commute; indicates a modeling bug."""


class NotComposable(KGraphError):
    def __init__(self, position: int, left: str, right: str):
        self.position = position
        super().__init__(
            f"edges at positions {position},{position + 1} do not compose "
            f"(source of {left!r} != range of {right!r})"
        )


class DegreeOutOfRange(KGraphError):
    pass


# ---------------------------------------------------------------------------
# Exact integer matrices (tuples of tuples; Python ints never wrap)
# ---------------------------------------------------------------------------

IntMatrix = tuple[tuple[int, ...], ...]


def mat_identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_add(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_pow(a: IntMatrix, e: int) -> IntMatrix:
    result = mat_identity(len(a))
    base = a
    while e > 0:
        if e & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    id: str
    color: int  # 1..k
    src: str  # source s(e)
    dst: str  # range  r(e)


@dataclass(frozen=True)
class Square:
    """f*g = g2*f2 with f, f2 of the lower color."""

    f: str
    g: str
    g2: str
    f2: str


@dataclass(frozen=True)
class KGraphSpec:
    """Parsed but unvalidated graph description."""

    rank: int
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    squares: tuple[Square, ...]


@dataclass(frozen=True)
class Path:
    """Composable edge word in color-sorted normal form.

    Degree-0 paths (vertex identities) carry an empty word; range and
    source are stored explicitly so identities stay first-class values.
    """

    graph: "KGraph" = field(compare=False, repr=False)
    edges: tuple[str, ...]
    range: str
    source: str
    degree: Degree

    def __len__(self) -> int:
        return len(self.edges)

    def is_identity(self) -> bool:
        return not self.edges

    def edge_objects(self) -> tuple[Edge, ...]:
        return tuple(self.graph.edge(e) for e in self.edges)

    def word(self) -> str:
        return ".".join(self.edges) if self.edges else f"@{self.range}"

    def __hash__(self) -> int:
        return hash((self.edges, self.range))


@dataclass(frozen=True)
class Component:
    """Strong-connectivity class of vertices, with cached closures.

    closure: vertices reachable from the component (range side);
    hereditary: vertices that reach the component.
    """

    index: int
    vertices: frozenset[str]
    trivial: bool
    closure: frozenset[str]
    hereditary: frozenset[str]

    def label(self) -> str:
        return "{" + ",".join(sorted(self.vertices)) + "}"


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def parse_kgraph(text: str) -> KGraphSpec:
    """Parse a JSON graph document into a resolved, unvalidated spec.

    Document schema: {"rank": k, "vertices": [id], "edges": [{"id",
    "color", "src", "dst"}], "squares": [{"f", "g", "g2", "f2"}]}.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise GraphFormatError("top-level value must be an object")

    for key in ("rank", "vertices", "edges"):
        if key not in doc:
            raise GraphFormatError(f"missing required field {key!r}")
    rank = doc["rank"]
    if not isinstance(rank, int) or rank < 1:
        raise GraphFormatError("rank must be a positive integer")

    vertices: list[str] = []
    seen_v: set[str] = set()
    for v in doc["vertices"]:
        if not isinstance(v, str) or not v:
            raise GraphFormatError(f"vertex id must be a nonempty string: {v!r}")
        if v in seen_v:
            raise DuplicateId(f"duplicate vertex id {v!r}")
        seen_v.add(v)
        vertices.append(v)
    if not vertices:
        raise GraphFormatError("graph needs at least one vertex")

    edges: list[Edge] = []
    seen_e: set[str] = set()
    for entry in doc["edges"]:
        if not isinstance(entry, dict):
            raise GraphFormatError(f"edge entry must be an object: {entry!r}")
        try:
            eid, color, src, dst = entry["id"], entry["color"], entry["src"], entry["dst"]
        except KeyError as exc:
            raise GraphFormatError(f"edge entry missing field {exc}") from exc
        if not isinstance(eid, str) or not eid:
            raise GraphFormatError(f"edge id must be a nonempty string: {eid!r}")
        if eid in seen_e or eid in seen_v:
            raise DuplicateId(f"duplicate id {eid!r}")
        if not isinstance(color, int) or not 1 <= color <= rank:
            raise GraphFormatError(f"edge {eid!r}: color must be in 1..{rank}")
        for v in (src, dst):
            if v not in seen_v:
                raise UnknownReference(f"edge {eid!r}: unknown vertex {v!r}")
        seen_e.add(eid)
        edges.append(Edge(eid, color, src, dst))

    squares: list[Square] = []
    for entry in doc.get("squares", []):
        if not isinstance(entry, dict):
            raise GraphFormatError(f"square entry must be an object: {entry!r}")
        try:
            ids = (entry["f"], entry["g"], entry["g2"], entry["f2"])
        except KeyError as exc:
            raise GraphFormatError(f"square entry missing field {exc}") from exc
        for e in ids:
            if e not in seen_e:
                raise UnknownReference(f"square references unknown edge {e!r}")
        squares.append(Square(*ids))

    return KGraphSpec(rank, tuple(vertices), tuple(edges), tuple(squares))


# ---------------------------------------------------------------------------
# The validated graph
# ---------------------------------------------------------------------------

class KGraph:
    """Validated finite k-graph without sources.

    Immutable after construction; all mutating state is private caches.
    Use :func:`validate` to build one.
    """

    def __init__(self, spec: KGraphSpec):
        self.rank = spec.rank
        self.vertices = spec.vertices
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._edges = {e.id: e for e in spec.edges}
        self._edge_order = tuple(e.id for e in spec.edges)
        self.squares = spec.squares

        # vLambda^{e_i} = color-i edges with range (dst) v
        self._in_by_color: dict[tuple[str, int], tuple[Edge, ...]] = {}
        self._out_by_color: dict[tuple[str, int], tuple[Edge, ...]] = {}
        for v in self.vertices:
            for i in range(1, self.rank + 1):
                self._in_by_color[(v, i)] = tuple(
                    e for e in spec.edges if e.dst == v and e.color == i
                )
                self._out_by_color[(v, i)] = tuple(
                    e for e in spec.edges if e.src == v and e.color == i
                )

        # square lookups keyed by edge-id pairs in word order
        self._fwd: dict[tuple[str, str], tuple[str, str]] = {}
        self._bwd: dict[tuple[str, str], tuple[str, str]] = {}

        self._matrices: list[IntMatrix] = []
        self._composite_cache: dict[Degree, IntMatrix] = {}
        self._components: Optional[tuple[Component, ...]] = None
        self._component_of: dict[str, int] = {}
        self._forward_sets: Optional[list[set[int]]] = None
        self._nontrivial_reach: Optional[list[set[int]]] = None
        self._enum_cache: dict[tuple, tuple[Path, ...]] = {}
        self._lmin_cache: dict[tuple, tuple[tuple[Path, Path], ...]] = {}

    # -- accessors ----------------------------------------------------

    def edge(self, eid: str) -> Edge:
        return self._edges[eid]

    def edge_ids(self) -> tuple[str, ...]:
        return self._edge_order

    def vertex_index(self, v: str) -> int:
        return self._vindex[v]

    def edges_into(self, v: str, color: int) -> tuple[Edge, ...]:
        """The set vLambda^{e_color}: edges with range v."""
        return self._in_by_color[(v, color)]

    def edges_out_of(self, v: str, color: int) -> tuple[Edge, ...]:
        return self._out_by_color[(v, color)]

    def vertex_matrix(self, color: int) -> IntMatrix:
        """A_color with A(v, w) = #{color edges from w to v}."""
        return self._matrices[color - 1]

    def composite_matrix(self, n: Degree) -> IntMatrix:
        """A^n = prod_i A_i^{n_i}; counts degree-n paths by (range, source)."""
        if len(n) != self.rank or any(c < 0 for c in n):
            raise DegreeOutOfRange(f"bad degree {n}")
        cached = self._composite_cache.get(n)
        if cached is None:
            cached = mat_identity(len(self.vertices))
            for i, power in enumerate(n):
                if power:
                    cached = mat_mul(cached, mat_pow(self._matrices[i], power))
            self._composite_cache[n] = cached
        return cached

    def count_paths(self, v: str, n: Degree, w: Optional[str] = None) -> int:
        a = self.composite_matrix(n)
        row = a[self._vindex[v]]
        if w is not None:
            return row[self._vindex[w]]
        return sum(row)

    # -- path construction --------------------------------------------

    def identity(self, v: str) -> Path:
        if v not in self._vindex:
            raise UnknownReference(f"unknown vertex {v!r}")
        return Path(self, (), v, v, deg_zero(self.rank))

    def _word_edges(self, word: Sequence[str | Edge]) -> list[Edge]:
        out = []
        for item in word:
            if isinstance(item, Edge):
                out.append(item)
            else:
                try:
                    out.append(self._edges[item])
                except KeyError:
                    raise UnknownReference(f"unknown edge {item!r}") from None
        return out

    def _check_word(self, edges: Sequence[Edge]) -> None:
        for i in range(len(edges) - 1):
            if edges[i].src != edges[i + 1].dst:
                raise NotComposable(i, edges[i].id, edges[i + 1].id)

    def _swap(self, left: Edge, right: Edge) -> tuple[Edge, Edge]:
        """Rewrite the adjacent word pair (left, right) through its square."""
        if left.color < right.color:
            pair = self._fwd.get((left.id, right.id))
        else:
            pair = self._bwd.get((left.id, right.id))
        if pair is None:
            raise MissingSquare(left.id, right.id, "swap")
        return self._edges[pair[0]], self._edges[pair[1]]

    def normal_form(self, word: Sequence[str | Edge], range_hint: Optional[str] = None) -> Path:
        """Color-sort a composable edge word into its unique normal form.

        Insertion sort over colors; each adjacent transposition is one
        square rewrite.  Empty words need range_hint for the vertex.
        """
        edges = self._word_edges(word)
        if not edges:
            if range_hint is None:
                raise GraphFormatError("empty word needs a vertex hint")
            return self.identity(range_hint)
        self._check_word(edges)
        edges = list(edges)
        for i in range(1, len(edges)):
            j = i
            while j > 0 and edges[j - 1].color > edges[j].color:
                edges[j - 1], edges[j] = self._swap(edges[j - 1], edges[j])
                j -= 1
        degree = [0] * self.rank
        for e in edges:
            degree[e.color - 1] += 1
        return Path(self, tuple(e.id for e in edges), edges[0].dst,
                    edges[-1].src, tuple(degree))

    def compose(self, p: Path, q: Path) -> Path:
        if p.source != q.range:
            raise NotComposable(len(p.edges) - 1, p.word(), q.word())
        if q.is_identity():
            return p
        if p.is_identity():
            return q
        return self.normal_form(p.edges + q.edges)

    def _split_first(self, edges: list[Edge], color: int) -> Edge:
        """Pop one color-`color` edge off the front of a sorted word.

        Mutates `edges` in place (remains sorted) and returns the edge.
        """
        pos = next(i for i, e in enumerate(edges) if e.color == color)
        for t in range(pos, 0, -1):
            edges[t - 1], edges[t] = self._swap(edges[t - 1], edges[t])
        return edges.pop(0)

    def segment(self, p: Path, a: Degree, b: Degree) -> Path:
        """The factor p(a, b): unique path with p = p(0,a) p(a,b) p(b, d(p))."""
        k = self.rank
        if len(a) != k or len(b) != k:
            raise DegreeOutOfRange("degree rank mismatch")
        if not (deg_leq(deg_zero(k), a) and deg_leq(a, b) and deg_leq(b, p.degree)):
            raise DegreeOutOfRange(f"need 0 <= {a} <= {b} <= {p.degree}")
        edges = [self._edges[e] for e in p.edges]
        cur_range = p.range
        for color in range(1, k + 1):
            for _ in range(a[color - 1]):
                cur_range = self._split_first(edges, color).src
        mid: list[Edge] = []
        for color in range(1, k + 1):
            for _ in range(b[color - 1] - a[color - 1]):
                e = self._split_first(edges, color)
                mid.append(e)
        if not mid:
            return self.identity(cur_range)
        return Path(self, tuple(e.id for e in mid), mid[0].dst, mid[-1].src,
                    deg_sub(b, a))

    def enumerate_paths(
        self,
        v: str,
        n: Degree,
        w: Optional[str] = None,
        within: Optional[frozenset[str]] = None,
    ) -> list[Path]:
        """All normal-form paths in vLambda^n (source w if given).

        `within` restricts every visited vertex to a subset; used for
        component-local path spaces.
        """
        if len(n) != self.rank or any(c < 0 for c in n):
            raise DegreeOutOfRange(f"bad degree {n}")
        if v not in self._vindex:
            raise UnknownReference(f"unknown vertex {v!r}")
        if within is not None and v not in within:
            return []
        key = (v, n, w, within)
        cached = self._enum_cache.get(key)
        if cached is not None:
            return list(cached)
        colors: list[int] = []
        for i, count in enumerate(n):
            colors.extend([i + 1] * count)
        results: list[Path] = []
        word: list[Edge] = []

        def rec(pos: int, cur: str) -> None:
            if pos == len(colors):
                if w is None or cur == w:
                    if word:
                        results.append(
                            Path(self, tuple(e.id for e in word), word[0].dst,
                                 word[-1].src, n)
                        )
                    else:
                        results.append(self.identity(v))
                return
            for e in self._in_by_color[(cur, colors[pos])]:
                if within is not None and e.src not in within:
                    continue
                word.append(e)
                rec(pos + 1, e.src)
                word.pop()

        rec(0, v)
        self._enum_cache[key] = tuple(results)
        return results

    def lambda_min(self, lam: Path, gam: Path) -> list[tuple[Path, Path]]:
        """Minimal common extensions: pairs (delta, nu) with lam*delta = gam*nu
        of degree d(lam) v d(gam).  Empty when the ranges differ."""
        if lam.range != gam.range:
            return []
        key = (lam.edges, lam.range, gam.edges, gam.range)
        cached = self._lmin_cache.get(key)
        if cached is not None:
            return list(cached)
        m = deg_join(lam.degree, gam.degree)
        out: list[tuple[Path, Path]] = []
        for delta in self.enumerate_paths(lam.source, deg_sub(m, lam.degree)):
            p = self.compose(lam, delta)
            if self.segment(p, deg_zero(self.rank), gam.degree) == gam:
                nu = self.segment(p, gam.degree, m)
                out.append((delta, nu))
        out.sort(key=lambda pair: (pair[0].edges, pair[1].edges))
        self._lmin_cache[key] = tuple(out)
        return out

    # -- components -----------------------------------------------------

    def _skeleton_adj(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.vertices]
        for e in self._edges.values():
            adj[self._vindex[e.src]].append(self._vindex[e.dst])
        return adj

    def forward_vertices(self, v: str) -> frozenset[str]:
        """Hereditary closure of {v}: every vertex a path from v can reach."""
        if self._forward_sets is None:
            self._forward_sets = reachable_sets(self._skeleton_adj(), reflexive=True)
        return frozenset(self.vertices[i] for i in self._forward_sets[self._vindex[v]])

    def nontrivial_reach(self) -> list[set[int]]:
        """reach[w] = vertex indices reachable from w by >= 1 edge."""
        if self._nontrivial_reach is None:
            self._nontrivial_reach = reachable_sets(self._skeleton_adj(), reflexive=False)
        return self._nontrivial_reach

    def components(self) -> tuple[Component, ...]:
        """Strong components ordered by smallest vertex position."""
        if self._components is not None:
            return self._components
        adj = self._skeleton_adj()
        sccs = tarjan_scc(adj)
        sccs.sort(key=lambda comp: comp[0])
        fwd = reachable_sets(adj, reflexive=True)
        rev = reachable_sets(reverse_adj(adj), reflexive=True)
        comps: list[Component] = []
        for idx, members in enumerate(sccs):
            verts = frozenset(self.vertices[i] for i in members)
            trivial = len(members) == 1 and not any(
                e.src == e.dst == self.vertices[members[0]] for e in self._edges.values()
            )
            closure: set[int] = set()
            hereditary: set[int] = set()
            for i in members:
                closure |= fwd[i]
                hereditary |= rev[i]
            comps.append(
                Component(
                    idx,
                    verts,
                    trivial,
                    frozenset(self.vertices[i] for i in closure),
                    frozenset(self.vertices[i] for i in hereditary),
                )
            )
        self._components = tuple(comps)
        for comp in comps:
            for v in comp.vertices:
                self._component_of[v] = comp.index
        return self._components

    def component_of(self, v: str) -> Component:
        self.components()
        return self._components[self._component_of[v]]  # type: ignore[index]

    def component_leq(self, c: Component, d: Component) -> bool:
        """c <= d iff some path runs from d to c (c lies in d's closure)."""
        return c.vertices <= d.closure


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate(spec: KGraphSpec) -> KGraph:
    """Certify all k-graph invariants and return the validated graph.

    Checks, in order: no sources, square shape, square completeness
    (both orientations bijective), cube consistency for rank >= 3, and
    commutation of the vertex matrices.
    """
    g = KGraph(spec)

    for v in spec.vertices:
        for color in range(1, spec.rank + 1):
            if not g.edges_into(v, color):
                raise SourceVertex(v, color)

    for sq in spec.squares:
        f, gg, g2, f2 = (g.edge(sq.f), g.edge(sq.g), g.edge(sq.g2), g.edge(sq.f2))
        if f.color != f2.color or gg.color != g2.color or f.color >= gg.color:
            raise MalformedSquare(
                f"square {sq} must pair a lower color with a higher color"
            )
        if f.src != gg.dst or g2.src != f2.dst:
            raise MalformedSquare(f"square {sq}: sides do not compose")
        if f.dst != g2.dst or gg.src != f2.src:
            raise MalformedSquare(f"square {sq}: the two factorizations disagree "
                                  "on range or source")
        if (sq.f, sq.g) in g._fwd:
            raise DuplicateSquare(sq.f, sq.g)
        if (sq.g2, sq.f2) in g._bwd:
            raise DuplicateSquare(sq.g2, sq.f2)
        g._fwd[(sq.f, sq.g)] = (sq.g2, sq.f2)
        g._bwd[(sq.g2, sq.f2)] = (sq.f, sq.g)

    edges = list(g._edges.values())
    for f in edges:
        for gg in edges:
            if f.color < gg.color and f.src == gg.dst:
                if (f.id, gg.id) not in g._fwd:
                    raise MissingSquare(f.id, gg.id, "ascending")
            if f.color > gg.color and f.src == gg.dst:
                if (f.id, gg.id) not in g._bwd:
                    raise MissingSquare(f.id, gg.id, "descending")

    if spec.rank >= 3:
        _check_cubes(g, edges)

    n = len(spec.vertices)
    for color in range(1, spec.rank + 1):
        rows = [[0] * n for _ in range(n)]
        for e in edges:
            if e.color == color:
                rows[g.vertex_index(e.dst)][g.vertex_index(e.src)] += 1
        g._matrices.append(tuple(tuple(r) for r in rows))
    for i in range(spec.rank):
        for j in range(i + 1, spec.rank):
            ab = mat_mul(g._matrices[i], g._matrices[j])
            ba = mat_mul(g._matrices[j], g._matrices[i])
            if ab != ba:
                raise NonCommutingMatrices(
                    f"A_{i + 1} A_{j + 1} != A_{j + 1} A_{i + 1}"
                )
    return g


def _sort_word(g: KGraph, word: list[Edge], leftmost: bool) -> list[Edge]:
    word = list(word)
    while True:
        descents = [
            t for t in range(len(word) - 1)
            if word[t].color > word[t + 1].color
        ]
        if not descents:
            return word
        t = descents[0] if leftmost else descents[-1]
        word[t], word[t + 1] = g._swap(word[t], word[t + 1])


def _check_cubes(g: KGraph, edges: list[Edge]) -> None:
    """Exhaustive local-confluence check over 3-colored edge triples.

    Adjacent square rewrites only overlap on windows of three edges
    with pairwise distinct colors, so these are the only critical
    pairs; each is sorted by the two extremal strategies.
    """
    for a in edges:
        for b in edges:
            if b.color == a.color or a.src != b.dst:
                continue
            for c in edges:
                if c.color in (a.color, b.color) or b.src != c.dst:
                    continue
                left = _sort_word(g, [a, b, c], leftmost=True)
                right = _sort_word(g, [a, b, c], leftmost=False)
                if [e.id for e in left] != [e.id for e in right]:
                    raise CubeInconsistency((a.id, b.id, c.id))


def load_kgraph(text: str) -> KGraph:
    return validate(parse_kgraph(text))


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def to_document(g: KGraph) -> dict:
    """Emit the graph in the same JSON-compatible document format."""
    return {
        "rank": g.rank,
        "vertices": list(g.vertices),
        "edges": [
            {"id": e.id, "color": e.color, "src": e.src, "dst": e.dst}
            for e in (g.edge(eid) for eid in g.edge_ids())
        ],
        "squares": [
            {"f": s.f, "g": s.g, "g2": s.g2, "f2": s.f2} for s in g.squares
        ],
    }


def to_dot(g: KGraph) -> str:
    """Skeleton digraph in DOT; the color attribute is the color index."""
    palette = ["black", "red", "blue", "green", "orange", "purple"]
    lines = ["digraph skeleton {"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for eid in g.edge_ids():
        e = g.edge(eid)
        col = palette[(e.color - 1) % len(palette)]
        lines.append(
            f'  "{e.src}" -> "{e.dst}" [label="{e.id}:c{e.color}", color={col}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
