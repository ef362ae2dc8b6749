"""Finite trees of elementary abelian p-groups.

A vertex with exponent ``m`` carries ``C_p^m`` (order ``p^m``); an edge with
exponent ``m_e`` carries ``C_p^{m_e}`` and must be a proper subgroup of both
endpoint groups.  Orders are handled through their exponents, and all
rational arithmetic uses :class:`fractions.Fraction`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import networkx as nx
from sympy import isprime

from .coset import Presentation
from .word import Word, commutator


class SearchOverflowError(RuntimeError):
    pass


@dataclass(frozen=True)
class GroupTree:
    p: int
    vertices: tuple[int, ...]                       # vertex exponents m_v >= 1
    edges: tuple[tuple[int, int, int], ...] = ()    # (u, v, m_e)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if not isprime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        k = len(self.vertices)
        if k == 0:
            raise ValueError("a tree needs at least one vertex")
        if any(m < 1 for m in self.vertices):
            raise ValueError("vertex exponents must be >= 1")
        if len(self.edges) != k - 1:
            raise ValueError(f"{k} vertices need {k - 1} edges, got {len(self.edges)}")
        for u, v, m in self.edges:
            if not (0 <= u < k and 0 <= v < k) or u == v:
                raise ValueError(f"bad edge {(u, v, m)}")
            if m < 0 or m >= self.vertices[u] or m >= self.vertices[v]:
                raise ValueError(f"edge group of edge {(u, v, m)} is not a proper subgroup "
                                 "of both vertex groups")
        if len(self.vertices) > 1 and not nx.is_tree(self.graph()):
            raise ValueError("edges do not form a tree")

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.vertices)))
        g.add_edges_from((u, v) for u, v, _ in self.edges)
        return g

    @property
    def k(self) -> int:
        return len(self.vertices)

    def vertex_orders(self) -> list[int]:
        return [self.p ** m for m in self.vertices]

    def edge_orders(self) -> list[int]:
        return [self.p ** m for _, _, m in self.edges]

    def is_free_product_of_cyclics(self) -> bool:
        return all(m == 1 for m in self.vertices) and all(m == 0 for *_, m in self.edges)

    def describe(self) -> str:
        vs = ", ".join(_group_name(self.p, m) for m in self.vertices)
        es = ", ".join(f"{u}-{v}:{_group_name(self.p, m)}" for u, v, m in self.edges)
        return f"vertices [{vs}] edges [{es}]"

    def to_dict(self) -> dict:
        return {"p": self.p, "vertices": list(self.vertices),
                "edges": [list(e) for e in self.edges]}


def _group_name(p: int, m: int) -> str:
    if m == 0:
        return "1"
    return f"C{p}" if m == 1 else f"C{p}^{m}"


def order_tree(t: GroupTree, root: int) -> tuple[list[int], list[tuple[int, int, int]]]:
    """Enumerate vertices and edges so the root comes last and each edge follows its far end.

    Vertex ``i`` (``i < k``) is the endpoint of edge ``i`` farther from the
    root.  Vertices are listed by decreasing distance, ties by number.
    """
    if not 0 <= root < t.k:
        raise ValueError(f"root {root} is not a vertex")
    adj: dict[int, list[tuple[int, tuple]]] = {v: [] for v in range(t.k)}
    for e in t.edges:
        u, v, _ = e
        adj[u].append((v, e))
        adj[v].append((u, e))
    dist = {root: 0}
    parent_edge = {}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y, e in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                parent_edge[y] = e
                queue.append(y)
    others = sorted((v for v in range(t.k) if v != root), key=lambda v: (-dist[v], v))
    return others + [root], [parent_edge[v] for v in others]


def ab_order(t: GroupTree) -> int:
    """Order of the abelianized fundamental group: vertex orders over edge orders."""
    num = 1
    for o in t.vertex_orders():
        num *= o
    den = 1
    for o in t.edge_orders():
        den *= o
    q, r = divmod(num, den)
    assert r == 0
    return q


@dataclass(frozen=True)
class ConstraintReport:
    product_lhs: int
    product_rhs: int
    euler_lhs: Fraction
    euler_rhs: Fraction

    @property
    def product_ok(self) -> bool:
        return self.product_lhs == self.product_rhs

    @property
    def euler_ok(self) -> bool:
        return self.euler_lhs == self.euler_rhs

    @property
    def satisfied(self) -> tuple[bool, bool]:
        return self.product_ok, self.euler_ok

    def to_dict(self) -> dict:
        return {"product": f"{self.product_lhs} = {self.product_rhs}" if self.product_ok
                else f"{self.product_lhs} != {self.product_rhs}",
                "product_lhs": self.product_lhs, "product_rhs": self.product_rhs,
                "euler_lhs": str(self.euler_lhs), "euler_rhs": str(self.euler_rhs),
                "satisfied": list(self.satisfied)}


def check_constraints(t: GroupTree, n: int, root: int | None = None) -> ConstraintReport:
    """Evaluate both tree equations for rank ``n`` exactly."""
    p = t.p
    if root is None:
        root = t.k - 1
    verts, edges = order_tree(t, root)
    product = Fraction(1)
    for v, e in zip(verts, edges):
        product *= Fraction(p ** t.vertices[v], p ** e[2])
    product *= p ** t.vertices[verts[-1]]
    assert product.denominator == 1
    euler = (sum(Fraction(1, o) for o in t.edge_orders())
             - sum(Fraction(1, o) for o in t.vertex_orders()))
    return ConstraintReport(int(product), p ** n, euler, Fraction(n - 1) - Fraction(n, p))


def tree_pi1_presentation(t: GroupTree) -> Presentation:
    """Fundamental group of the tree: vertex groups amalgamated along edge groups.

    Vertex ``i`` gets generators ``v{i}x1 .. v{i}x{m}``; the edge group of an
    edge is identified with the first ``m_e`` generators of each endpoint.
    """
    names = [[f"v{i}x{j + 1}" for j in range(m)] for i, m in enumerate(t.vertices)]
    alphabet = tuple(n for group in names for n in group)

    def g(name: str) -> Word:
        return Word.gen(alphabet, name)

    relators = []
    for group in names:
        relators += [g(x) ** t.p for x in group]
        relators += [commutator(g(x), g(y)) for x, y in combinations(group, 2)]
    for u, v, m in t.edges:
        relators += [g(names[u][j]) * ~g(names[v][j]) for j in range(m)]
    return Presentation(alphabet, tuple(relators))


# exhaustive search ------------------------------------------------------

def _rooted_code(adj, labels, root, parent) -> tuple:
    children = sorted((m_e, _rooted_code(adj, labels, c, root))
                      for c, m_e in adj[root] if c != parent)
    return (labels[root], tuple(children))


def canonical_form(t: GroupTree) -> tuple:
    """Isomorphism-invariant code: the least rooted code over all roots."""
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(t.k)}
    for u, v, m in t.edges:
        adj[u].append((v, m))
        adj[v].append((u, m))
    return min(_rooted_code(adj, t.vertices, r, None) for r in range(t.k))


def _from_code(p: int, code: tuple) -> GroupTree:
    vertices: list[int] = []
    edges: list[tuple[int, int, int]] = []
    _build(code, vertices, edges)
    return GroupTree(p, tuple(vertices), tuple(edges))


def _build(code: tuple, vertices: list, edges: list) -> None:
    def build(node, parent_id, m_e):
        label, children = node
        me = len(vertices)
        vertices.append(label)
        if parent_id is not None:
            edges.append((parent_id, me, m_e))
        for cm, child in children:
            build(child, me, cm)

    build(code, None, None)


def _blocks(t: GroupTree) -> list[GroupTree]:
    """Subtrees left after deleting the trivial edges."""
    g = nx.Graph()
    g.add_nodes_from(range(t.k))
    g.add_edges_from((u, v) for u, v, m in t.edges if m > 0)
    out = []
    for comp in sorted(nx.connected_components(g), key=min):
        comp = sorted(comp)
        pos = {v: i for i, v in enumerate(comp)}
        out.append(GroupTree(t.p, tuple(t.vertices[v] for v in comp),
                             tuple((pos[u], pos[v], m) for u, v, m in t.edges
                                   if m > 0 and u in pos and v in pos)))
    return out


def group_key(t: GroupTree) -> tuple:
    """Invariant of the fundamental group as a free product.

    Trivial edges only form free products, so the fundamental group is the
    free product of the blocks joined by nontrivial edges, whatever the
    shape of the trivial part.  The key is the sorted block codes.
    """
    return tuple(sorted(canonical_form(b) for b in _blocks(t)))


def _from_group_key(p: int, key: tuple) -> GroupTree:
    """Representative tree: the blocks in key order chained by trivial edges."""
    vertices: list[int] = []
    edges: list[tuple[int, int, int]] = []
    prev = None
    for code in key:
        first = len(vertices)
        _build(code, vertices, edges)
        if prev is not None:
            edges.append((prev, first, 0))
        prev = first
    return GroupTree(p, tuple(vertices), tuple(sorted(edges)))


@dataclass
class SearchResult:
    p: int
    n: int
    max_k: int
    max_exponent: int
    trees: list[GroupTree] = field(default_factory=list)
    labelings: int = 0           # labelled candidates examined
    product_candidates: int = 0  # candidates meeting the order equation
    divisibility_checks: int = 0
    nontrivial_divisibility: int = 0  # checks where some vertex exceeds C_p
    shapes: int = 0              # admissible trees up to tree isomorphism

    def corollary_holds(self) -> bool:
        """Admissible trees with at least n vertices are n copies of C_p."""
        return all(t.k == self.n and t.is_free_product_of_cyclics()
                   for t in self.trees if t.k >= self.n)


def _shapes(k: int):
    if k == 1:
        yield nx.empty_graph(1)
    elif k == 2:
        yield nx.path_graph(2)
    else:
        yield from nx.nonisomorphic_trees(k)


def _divisibility_check(p: int, vertices, edges) -> bool:
    """Consequence of the Euler equation when the largest vertex group exceeds C_p.

    Multiplying through by the largest vertex order forces the number of
    vertices of that order to be divisible by p.
    """
    top = max(vertices)
    if top > 1:
        count = sum(1 for m in vertices if m == top)
        assert count % p == 0, (vertices, edges)
    return top > 1


def search(p: int, n: int, max_k: int, max_exponent: int, cap: int = 5_000_000) -> SearchResult:
    """All trees satisfying both equations for ``C_p^{*n}``.

    Trees are identified when :func:`group_key` agrees, i.e. when they
    present the same free product of blocks; ``shapes`` counts them up to
    plain tree isomorphism instead.  Labellings are generated shape by shape with vertex exponents in
    ``[1, max_exponent]`` and proper edge exponents, pruned by the order
    equation (each vertex/edge pair contributes at least one factor of p).
    """
    if not isprime(p):
        raise ValueError(f"p = {p} is not prime")
    if n < 1 or max_k < 1 or max_exponent < 1:
        raise ValueError("n, max_k and max_exponent must be >= 1")
    result = SearchResult(p, n, max_k, max_exponent)
    target = Fraction(n - 1) - Fraction(n, p)
    found: dict[tuple, set] = {}

    for k in range(1, max_k + 1):
        for shape in _shapes(k):
            order = list(nx.bfs_tree(shape, 0)) if k > 1 else [0]
            parent = {0: None}
            if k > 1:
                parent.update({v: u for u, v in nx.bfs_edges(shape, 0)})
            _assign(p, n, max_exponent, order, parent, target, result, found, cap)

    result.trees = [_from_group_key(p, key) for key in sorted(found)]
    result.shapes = sum(len(v) for v in found.values())
    return result


def _assign(p, n, max_exp, order, parent, target, result, found, cap):
    k = len(order)
    vert = [0] * k
    edge_exp = [0] * k   # exponent of the edge to the parent

    def rec(i: int, total: int) -> None:
        remaining = k - i
        if i == k:
            result.labelings += 1
            if result.labelings > cap:
                raise SearchOverflowError(f"more than {cap} labelled trees examined")
            if total != n:
                return
            result.product_candidates += 1
            verts = tuple(vert)
            edges = tuple((parent[v], v, edge_exp[v]) for v in order[1:])
            euler = (sum(Fraction(1, p ** m) for *_, m in edges)
                     - sum(Fraction(1, p ** m) for m in verts))
            if euler != target:
                return
            if _divisibility_check(p, verts, edges):
                result.nontrivial_divisibility += 1
            result.divisibility_checks += 1
            t = GroupTree(p, verts, edges)
            found.setdefault(group_key(t), set()).add(canonical_form(t))
            return
        v = order[i]
        # every later vertex contributes at least one factor of p
        budget = n - total - (remaining - 1)
        if i == 0:
            for m in range(1, min(max_exp, budget) + 1):
                vert[v] = m
                rec(1, m)
            return
        up = vert[parent[v]]
        for m in range(1, max_exp + 1):
            vert[v] = m
            for me in range(max(0, m - budget), min(m, up)):
                edge_exp[v] = me
                rec(i + 1, total + m - me)

    rec(0, 0)


def enumerate_admissible(p: int, n: int, max_k: int, max_exponent: int,
                         cap: int = 5_000_000) -> list[GroupTree]:
    return search(p, n, max_k, max_exponent, cap).trees
