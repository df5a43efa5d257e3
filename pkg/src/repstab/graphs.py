"""Graphs of finite groups and approximate representations of their covers.

A graph is stored Serre-style: geometric edge k owns the oriented pair
(2k, 2k+1), with 2k running origin -> terminus as entered and 2k+1 the
opposite. The chosen orientation is the set of even oriented edges. The
fundamental group is presented on the vertex-group elements together with
one stable letter per geometric edge, modulo one stable-letter relator per
spanning-tree edge and one conjugation relator per (geometric edge,
nonidentity edge-group element).

An AlmostRep assigns an exact unitary representation to every vertex group
and an arbitrary unitary to every stable letter; its defect is the largest
normalized p-Schatten distance from a relator image to the identity.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .cones import VERTEX_SIDE, BoundaryMap, MultiplicityVector
from .errors import ValidationError
from .groups import FiniteGroup, GroupHom, group_hom
from .irreps import (UnitaryRep, conjugate_rep, multiplicities,
                     restriction_matrix, unitary_rep)
from .rng import as_generator, random_hermitian
from .schatten import rep_distance, schatten_norm_normalized

PERTURB_EDGES = "edges-only"
PERTURB_FULL = "edges-and-conjugate-vertices"


@dataclass(frozen=True, eq=False)
class SerreGraph:
    """Connected graph with explicit edge involution."""

    n_vertices: int
    endpoints: tuple[tuple[int, int], ...]  # (origin, terminus) per geometric edge

    @property
    def n_geometric_edges(self) -> int:
        return len(self.endpoints)

    @property
    def n_oriented_edges(self) -> int:
        return 2 * len(self.endpoints)

    def origin(self, e: int) -> int:
        o, t = self.endpoints[e // 2]
        return o if e % 2 == 0 else t

    def terminus(self, e: int) -> int:
        o, t = self.endpoints[e // 2]
        return t if e % 2 == 0 else o

    def opposite(self, e: int) -> int:
        return e ^ 1

    def orientation(self) -> tuple[int, ...]:
        """The chosen orientation: one representative per pair (the even one)."""
        return tuple(range(0, self.n_oriented_edges, 2))


def serre_graph(n_vertices: int, endpoints) -> SerreGraph:
    """Validated connected graph from (origin, terminus) pairs."""
    if n_vertices <= 0:
        raise ValidationError("graph needs at least one vertex")
    eps = tuple((int(o), int(t)) for o, t in endpoints)
    for o, t in eps:
        if not (0 <= o < n_vertices and 0 <= t < n_vertices):
            raise ValidationError(f"edge endpoint out of range: ({o}, {t})")
    seen = {0}
    queue = deque([0])
    adj: dict[int, set[int]] = {v: set() for v in range(n_vertices)}
    for o, t in eps:
        adj[o].add(t)
        adj[t].add(o)
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    if len(seen) != n_vertices:
        missing = sorted(set(range(n_vertices)) - seen)
        raise ValidationError(f"graph is not connected; unreachable vertices {missing}")
    return SerreGraph(n_vertices=n_vertices, endpoints=eps)


@dataclass(frozen=True)
class TreeStep:
    """One spanning-tree attachment: the child vertex and the oriented edge
    pointing from the child to its already-visited parent."""

    child: int
    parent: int
    edge_to_parent: int  # oriented: origin = child, terminus = parent


@dataclass(frozen=True)
class SpanningTree:
    root: int
    steps: tuple[TreeStep, ...]
    geometric_edges: frozenset[int]


def spanning_tree(graph: SerreGraph) -> SpanningTree:
    """Deterministic BFS tree from the least vertex, least edge index first."""
    out_edges: dict[int, list[int]] = {v: [] for v in range(graph.n_vertices)}
    for e in range(graph.n_oriented_edges):
        out_edges[graph.origin(e)].append(e)
    root = 0
    seen = {root}
    steps: list[TreeStep] = []
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in out_edges[v]:
            u = graph.terminus(e)
            if u not in seen:
                seen.add(u)
                steps.append(TreeStep(child=u, parent=v,
                                      edge_to_parent=graph.opposite(e)))
                queue.append(u)
    if len(seen) != graph.n_vertices:
        raise ValidationError("graph is not connected")
    return SpanningTree(root=root, steps=tuple(steps),
                        geometric_edges=frozenset(s.edge_to_parent // 2 for s in steps))


@dataclass(frozen=True, eq=False)
class GraphOfGroups:
    """Finite groups on vertices and edges with injective edge inclusions."""

    graph: SerreGraph
    vertex_groups: tuple[FiniteGroup, ...]
    edge_groups: tuple[FiniteGroup, ...]      # per geometric edge, shared by the pair
    injections: tuple[GroupHom, ...]          # per oriented edge e: G_e -> G_{terminus(e)}
    name: str = ""

    def injection(self, e: int) -> GroupHom:
        return self.injections[e]


def graph_of_groups(graph: SerreGraph, vertex_groups, edge_groups,
                    injection_maps, name: str = "") -> GraphOfGroups:
    """Assemble and validate a graph of groups.

    `injection_maps[e]` is the element map of the inclusion of the geometric
    edge group of e//2 into the vertex group at the terminus of oriented
    edge e; every inclusion is checked to be an injective homomorphism.
    """
    vgs = tuple(vertex_groups)
    egs = tuple(edge_groups)
    if len(vgs) != graph.n_vertices:
        raise ValidationError("one vertex group required per vertex")
    if len(egs) != graph.n_geometric_edges:
        raise ValidationError("one edge group required per geometric edge")
    if len(injection_maps) != graph.n_oriented_edges:
        raise ValidationError("one injection required per oriented edge")
    injections = []
    for e, mapping in enumerate(injection_maps):
        injections.append(group_hom(egs[e // 2], vgs[graph.terminus(e)], mapping,
                                    require_injective=True))
    return GraphOfGroups(graph=graph, vertex_groups=vgs, edge_groups=egs,
                         injections=tuple(injections), name=name)


# Relator words: tuples of tokens, evaluated left to right.
#   ("v", vertex, element)        vertex-group element
#   ("s", geometric_edge, +/-1)   stable letter or its inverse


def relators(gog: GraphOfGroups, tree: SpanningTree | None = None) -> tuple[tuple, ...]:
    """Defining relator words of the fundamental group presentation."""
    graph = gog.graph
    if tree is None:
        tree = spanning_tree(graph)
    words: list[tuple] = []
    for k in sorted(tree.geometric_edges):
        words.append((("s", k, 1),))
    for e in graph.orientation():
        k = e // 2
        ge = gog.edge_groups[k]
        i_fwd = gog.injection(e)                        # into terminus(e)
        i_rev = gog.injection(graph.opposite(e))        # into origin(e)
        t_v, o_v = graph.terminus(e), graph.origin(e)
        o_group = gog.vertex_groups[o_v]
        for g in range(ge.order):
            if g == ge.identity:
                continue
            words.append((
                ("s", k, -1),
                ("v", t_v, i_fwd(g)),
                ("s", k, 1),
                ("v", o_v, o_group.inverse(i_rev(g))),
            ))
    return tuple(words)


@dataclass(frozen=True, eq=False)
class AlmostRep:
    """Exact vertex representations plus one unitary per stable letter."""

    dim: int
    vertex_reps: tuple[UnitaryRep, ...]
    edge_unitaries: tuple[np.ndarray, ...]  # per geometric edge


def almost_rep(gog: GraphOfGroups, vertex_reps, edge_unitaries,
               check: bool = True, atol: float = 1e-10) -> AlmostRep:
    """Validated almost-representation container.

    Vertex representations must be exact unitary representations of the
    corresponding vertex groups (that they satisfy the vertex relations is
    what makes this a map from the free product); stable-letter matrices
    need only be unitary.
    """
    vreps = tuple(vertex_reps)
    edges = tuple(np.ascontiguousarray(u, dtype=complex) for u in edge_unitaries)
    if len(vreps) != gog.graph.n_vertices:
        raise ValidationError("one representation required per vertex")
    if len(edges) != gog.graph.n_geometric_edges:
        raise ValidationError("one unitary required per geometric edge")
    dim = vreps[0].dim if vreps else 0
    if dim <= 0:
        raise ValidationError("dimension must be positive")
    for v, rep in enumerate(vreps):
        if rep.group is not gog.vertex_groups[v]:
            raise ValidationError(f"vertex {v} representation has the wrong group")
        if rep.dim != dim:
            raise ValidationError("vertex representations must share one dimension")
    if check:
        eye = np.eye(dim)
        for v, rep in enumerate(vreps):
            unitary_rep(rep.group, rep.matrices, check=True, atol=atol)
        for k, u in enumerate(edges):
            if u.shape != (dim, dim):
                raise ValidationError(f"edge {k} unitary has shape {u.shape}, expected {(dim, dim)}")
            if np.abs(u @ u.conj().T - eye).max() > atol:
                raise ValidationError(f"edge {k} matrix is not unitary")
    for u in edges:
        u.setflags(write=False)
    return AlmostRep(dim=dim, vertex_reps=vreps, edge_unitaries=edges)


def evaluate_word(rho: AlmostRep, word: tuple) -> np.ndarray:
    """Matrix of a relator word under an almost-representation."""
    out = np.eye(rho.dim, dtype=complex)
    for token in word:
        kind, idx, arg = token
        if kind == "v":
            out = out @ rho.vertex_reps[idx].matrices[arg]
        elif kind == "s":
            u = rho.edge_unitaries[idx]
            out = out @ (u if arg == 1 else u.conj().T)
        else:
            raise ValidationError(f"unknown word token {token!r}")
    return out


def measure_defect(rho: AlmostRep, gog: GraphOfGroups, p: float,
                   tree: SpanningTree | None = None,
                   words: tuple[tuple, ...] | None = None) -> float:
    """Largest normalized p-Schatten distance from a relator image to I."""
    if words is None:
        words = relators(gog, tree)
    eye = np.eye(rho.dim)
    worst = 0.0
    for word in words:
        worst = max(worst, schatten_norm_normalized(evaluate_word(rho, word) - eye, p))
    return worst


def rep_multiplicities(rho: AlmostRep, vertex_tables) -> MultiplicityVector:
    """Per-vertex multiplicity blocks of the vertex representations."""
    blocks = tuple(tuple(int(x) for x in multiplicities(rep, table))
                   for rep, table in zip(rho.vertex_reps, vertex_tables))
    return MultiplicityVector(VERTEX_SIDE, blocks)


def generator_distance(rho1: AlmostRep, rho2: AlmostRep, p: float) -> float:
    """Max distance over the generating set: vertex elements and stable letters."""
    if rho1.dim != rho2.dim or len(rho1.vertex_reps) != len(rho2.vertex_reps):
        raise ValidationError("almost-representations are not comparable")
    worst = 0.0
    for r1, r2 in zip(rho1.vertex_reps, rho2.vertex_reps):
        worst = max(worst, rep_distance(r1, r2, p))
    for u1, u2 in zip(rho1.edge_unitaries, rho2.edge_unitaries):
        worst = max(worst, schatten_norm_normalized(u1 - u2, p))
    return worst


def _unit_frobenius_hermitian(dim: int, rng) -> np.ndarray:
    h = random_hermitian(dim, rng)
    scale = schatten_norm_normalized(h, 2.0)
    return h / scale


def _exp_i(h: np.ndarray, eps: float) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * eps * w)) @ v.conj().T


def perturb(rho: AlmostRep, gog: GraphOfGroups, eps: float, mode: str = PERTURB_EDGES,
            rng=None) -> AlmostRep:
    """Multiply stable-letter unitaries by exp(i*eps*H) with unit-HS Hermitian H.

    In mode "edges-and-conjugate-vertices" each vertex representation is
    additionally conjugated by an independent exp(i*eps*H_v), which keeps it
    an exact representation.
    """
    if eps < 0:
        raise ValidationError("perturbation size must be nonnegative")
    if mode not in (PERTURB_EDGES, PERTURB_FULL):
        raise ValidationError(f"unknown perturbation mode {mode!r}")
    rng = as_generator(rng)
    dim = rho.dim
    edges = []
    for u in rho.edge_unitaries:
        h = _unit_frobenius_hermitian(dim, rng)
        edges.append(_exp_i(h, eps) @ u)
    vreps = rho.vertex_reps
    if mode == PERTURB_FULL:
        vreps = tuple(conjugate_rep(rep, _exp_i(_unit_frobenius_hermitian(dim, rng), eps))
                      for rep in vreps)
    return almost_rep(gog, vreps, edges, check=False)


def boundary_map(gog: GraphOfGroups, vertex_tables, edge_tables) -> BoundaryMap:
    """Boundary map of a graph of groups in the given canonical tables."""
    graph = gog.graph
    vertex_tables = tuple(vertex_tables)
    edge_tables = tuple(edge_tables)
    termini, origins, t_maps, o_maps, e_dims = [], [], [], [], []
    for e in range(graph.n_oriented_edges):
        k = e // 2
        termini.append(graph.terminus(e))
        origins.append(graph.origin(e))
        t_maps.append(restriction_matrix(gog.injection(e), edge_tables[k],
                                         vertex_tables[graph.terminus(e)]))
        o_maps.append(restriction_matrix(gog.injection(graph.opposite(e)), edge_tables[k],
                                         vertex_tables[graph.origin(e)]))
        e_dims.append(tuple(int(d) for d in edge_tables[k].dims))
    v_dims = tuple(tuple(int(d) for d in t.dims) for t in vertex_tables)
    trivial = tuple(t.trivial_index for t in vertex_tables)
    return BoundaryMap(vertex_dims=v_dims, edge_dims=tuple(e_dims),
                       termini=tuple(termini), origins=tuple(origins),
                       terminus_maps=tuple(t_maps), origin_maps=tuple(o_maps),
                       trivial_indices=trivial)
