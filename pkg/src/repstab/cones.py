"""Integer multiplicity vectors over a graph of groups and their boundary map.

A vertex-space vector holds one integer block per vertex group, indexed by
that group's canonical irreducible order; an edge-space vector holds one
block per oriented edge (each geometric edge appears twice). The boundary
map compares the two edge-group restrictions of a vertex-space vector; its
kernel intersected with the nonnegative cone is exactly the set of vectors
realizable by genuine representations.

Norms are exact rationals (denominators are the vertex and edge counts), and
the projection onto the kernel cone is an exact integer program.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .errors import NumericalError, ValidationError

VERTEX_SIDE = "vertex"
EDGE_SIDE = "edge"


@dataclass(frozen=True)
class MultiplicityVector:
    """Integer blocks per vertex (or per oriented edge)."""

    side: str
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.side not in (VERTEX_SIDE, EDGE_SIDE):
            raise ValidationError(f"side must be '{VERTEX_SIDE}' or '{EDGE_SIDE}'")
        object.__setattr__(self, "blocks",
                           tuple(tuple(int(x) for x in b) for b in self.blocks))

    def _binary(self, other: "MultiplicityVector", op) -> "MultiplicityVector":
        if self.side != other.side or [len(b) for b in self.blocks] != [len(b) for b in other.blocks]:
            raise ValidationError("vectors live in different spaces")
        return MultiplicityVector(self.side, tuple(
            tuple(op(x, y) for x, y in zip(a, b))
            for a, b in zip(self.blocks, other.blocks)))

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def minimum(self, other):
        """Coordinatewise minimum (the common part of two vectors)."""
        return self._binary(other, min)

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for b in self.blocks for x in b)

    def is_zero(self) -> bool:
        return all(x == 0 for b in self.blocks for x in b)

    def flatten(self) -> tuple[int, ...]:
        return tuple(x for b in self.blocks for x in b)

    @staticmethod
    def from_flat(side: str, flat, block_lengths) -> "MultiplicityVector":
        flat = list(flat)
        blocks, off = [], 0
        for ln in block_lengths:
            blocks.append(tuple(flat[off:off + ln]))
            off += ln
        if off != len(flat):
            raise ValidationError("flat vector length does not match block layout")
        return MultiplicityVector(side, tuple(blocks))


def zero_vector(side: str, block_lengths) -> MultiplicityVector:
    return MultiplicityVector(side, tuple(tuple(0 for _ in range(ln)) for ln in block_lengths))


@dataclass(frozen=True, eq=False)
class BoundaryMap:
    """Integer boundary map from vertex space to edge space.

    For each oriented edge the block row is (+ restriction at the terminus,
    - restriction at the origin): applying the map to the multiplicity
    vector of a genuine representation gives zero on every oriented edge.
    """

    vertex_dims: tuple[tuple[int, ...], ...]       # irrep dims per vertex block
    edge_dims: tuple[tuple[int, ...], ...]         # irrep dims per oriented edge block
    termini: tuple[int, ...]                       # terminus vertex per oriented edge
    origins: tuple[int, ...]                       # origin vertex per oriented edge
    terminus_maps: tuple[np.ndarray, ...]          # restriction matrix into edge coords
    origin_maps: tuple[np.ndarray, ...]
    trivial_indices: tuple[int, ...]               # trivial-irrep coordinate per vertex

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_dims)

    @property
    def n_oriented_edges(self) -> int:
        return len(self.edge_dims)

    @property
    def vertex_block_lengths(self) -> tuple[int, ...]:
        return tuple(len(d) for d in self.vertex_dims)

    @property
    def edge_block_lengths(self) -> tuple[int, ...]:
        return tuple(len(d) for d in self.edge_dims)

    def _require(self, vec: MultiplicityVector, side: str):
        lengths = self.vertex_block_lengths if side == VERTEX_SIDE else self.edge_block_lengths
        if vec.side != side or tuple(len(b) for b in vec.blocks) != lengths:
            raise ValidationError(f"vector does not live in the {side} space of this map")

    def vertex_norm(self, vec: MultiplicityVector) -> Fraction:
        """Average over vertices of the dimension-weighted l1 block norms."""
        self._require(vec, VERTEX_SIDE)
        total = sum(abs(x) * d for dims, b in zip(self.vertex_dims, vec.blocks)
                    for d, x in zip(dims, b))
        return Fraction(total, self.n_vertices)

    def edge_norm(self, vec: MultiplicityVector) -> Fraction:
        """Average over all oriented edges of the weighted block norms."""
        self._require(vec, EDGE_SIDE)
        if self.n_oriented_edges == 0:
            return Fraction(0)
        total = sum(abs(x) * d for dims, b in zip(self.edge_dims, vec.blocks)
                    for d, x in zip(dims, b))
        return Fraction(total, self.n_oriented_edges)

    def apply(self, vec: MultiplicityVector) -> MultiplicityVector:
        """Exact integer image of a vertex-space vector in edge space."""
        self._require(vec, VERTEX_SIDE)
        blocks = []
        for e in range(self.n_oriented_edges):
            t_block = np.array(vec.blocks[self.termini[e]], dtype=object)
            o_block = np.array(vec.blocks[self.origins[e]], dtype=object)
            val = self.terminus_maps[e] @ t_block - self.origin_maps[e] @ o_block
            blocks.append(tuple(int(x) for x in val))
        return MultiplicityVector(EDGE_SIDE, tuple(blocks))

    @cached_property
    def matrix(self) -> np.ndarray:
        """Dense integer matrix (edge coordinates x vertex coordinates)."""
        v_len = self.vertex_block_lengths
        v_off = np.concatenate([[0], np.cumsum(v_len)])
        e_len = self.edge_block_lengths
        rows = int(sum(e_len))
        a = np.zeros((rows, int(v_off[-1])), dtype=np.int64)
        r = 0
        for e in range(self.n_oriented_edges):
            k = e_len[e]
            t, o = self.termini[e], self.origins[e]
            a[r:r + k, v_off[t]:v_off[t] + v_len[t]] += self.terminus_maps[e]
            a[r:r + k, v_off[o]:v_off[o] + v_len[o]] -= self.origin_maps[e]
            r += k
        return a

    @cached_property
    def vertex_weights(self) -> np.ndarray:
        """Flattened irrep dimensions, the l1 weights on vertex coordinates."""
        return np.array([d for dims in self.vertex_dims for d in dims], dtype=np.int64)

    def trivial_vector(self) -> MultiplicityVector:
        """One copy of the trivial irrep on every vertex; lies in the kernel."""
        blocks = []
        for v, dims in enumerate(self.vertex_dims):
            b = [0] * len(dims)
            b[self.trivial_indices[v]] = 1
            blocks.append(tuple(b))
        return MultiplicityVector(VERTEX_SIDE, tuple(blocks))


def _solve_milp(c, constraints, integrality, bounds, context: str):
    res = milp(c=c, constraints=constraints, integrality=integrality, bounds=bounds)
    if not res.success or res.x is None:
        raise NumericalError(f"integer program failed during {context}: {res.message}")
    return res


def _exact_distance(weights, lam_flat, x) -> int:
    return int(sum(int(w) * abs(int(a) - int(b)) for w, a, b in zip(weights, lam_flat, x)))


def project_to_kernel_cone(lam: MultiplicityVector, bmap: BoundaryMap) -> MultiplicityVector:
    """Nearest point of the kernel cone, in the vertex norm, not larger than lam.

    Solves min ||lam - mu||_V over integer mu >= 0 with boundary zero and
    ||mu||_V <= ||lam||_V, as a mixed-integer program (HiGHS branch and
    bound); ties are broken toward the lexicographically smallest optimum in
    canonical coordinate order. The returned point is re-verified in exact
    integer arithmetic. The zero vector is always feasible.
    """
    bmap._require(lam, VERTEX_SIDE)
    if not lam.is_nonnegative():
        raise ValidationError("projection input must lie in the nonnegative cone")
    if bmap.apply(lam).is_zero():
        return lam

    w = bmap.vertex_weights
    lam_flat = np.array(lam.flatten(), dtype=np.int64)
    n = lam_flat.size
    cap = int(w @ lam_flat)
    a_kernel = bmap.matrix
    ub = np.array([cap // int(wi) if wi > 0 else cap for wi in w], dtype=float)

    # variables: [mu (integer), s (continuous slack with s >= |lam - mu|)]
    zeros = np.zeros((a_kernel.shape[0], n))
    eye = np.eye(n)
    constraints = [
        LinearConstraint(np.hstack([a_kernel, zeros]), 0, 0),
        LinearConstraint(np.hstack([eye, -eye]), -np.inf, lam_flat),    # mu - s <= lam
        LinearConstraint(np.hstack([-eye, -eye]), -np.inf, -lam_flat),  # -mu - s <= -lam
        LinearConstraint(np.hstack([w, np.zeros(n)]), -np.inf, cap),
    ]
    integrality = np.concatenate([np.ones(n), np.zeros(n)])
    bounds = Bounds(lb=np.zeros(2 * n), ub=np.concatenate([ub, np.full(n, np.inf)]))

    c_dist = np.concatenate([np.zeros(n), w.astype(float)])
    res = _solve_milp(c_dist, constraints, integrality, bounds, "distance minimization")
    mu = np.round(res.x[:n]).astype(np.int64)
    best = _exact_distance(w, lam_flat, mu)
    if abs(best - res.fun) > 0.25:
        raise NumericalError(
            f"rounded solution has distance {best} but the solver reported {res.fun:.6f}")

    dist_cap = constraints + [LinearConstraint(c_dist, -np.inf, float(best))]
    base = cap + 2
    if n * np.log2(base) < 52:
        # single pass: positional objective is exact in doubles
        c_lex = np.concatenate([base ** np.arange(n - 1, -1, -1, dtype=float), np.zeros(n)])
        res = _solve_milp(c_lex, dist_cap, integrality, bounds, "lexicographic tie-break")
        cand = np.round(res.x[:n]).astype(np.int64)
    else:
        fixed: list[LinearConstraint] = []
        cand = mu.copy()
        for k in range(n):
            ck = np.zeros(2 * n)
            ck[k] = 1.0
            res = _solve_milp(ck, dist_cap + fixed, integrality, bounds,
                              f"lexicographic refinement at coordinate {k}")
            v = int(round(res.x[k]))
            ek = np.zeros(2 * n)
            ek[k] = 1.0
            fixed.append(LinearConstraint(ek, v, v))
            cand[k] = v
    if _exact_distance(w, lam_flat, cand) != best:
        raise NumericalError("tie-break stage drifted from the optimal distance")
    mu = cand

    out = MultiplicityVector.from_flat(VERTEX_SIDE, mu.tolist(), bmap.vertex_block_lengths)
    if not out.is_nonnegative():
        raise NumericalError("projection produced a negative coordinate")
    if not bmap.apply(out).is_zero():
        raise NumericalError("projection left the kernel; solver output failed exact verification")
    if bmap.vertex_norm(out) > bmap.vertex_norm(lam):
        raise NumericalError("projection violated the norm cap")
    return out


def pad_with_trivial(lam_kernel: MultiplicityVector, target: int,
                     bmap: BoundaryMap) -> MultiplicityVector:
    """Raise a kernel-cone vector to a target norm by adding trivial summands.

    Adds (target - current norm) copies of the trivial irreducible at every
    vertex; the trivial vector lies in the kernel, so the result does too,
    with vertex norm exactly `target`.
    """
    bmap._require(lam_kernel, VERTEX_SIDE)
    if not lam_kernel.is_nonnegative():
        raise ValidationError("padding input must lie in the nonnegative cone")
    if not bmap.apply(lam_kernel).is_zero():
        raise ValidationError("padding input must lie in the kernel")
    norm = bmap.vertex_norm(lam_kernel)
    if norm.denominator != 1:
        raise ValidationError("kernel vector has non-integer norm; blocks are inconsistent")
    deficit = int(target) - int(norm)
    if deficit < 0:
        raise ValidationError(f"target {target} is below the current norm {norm}")
    if deficit == 0:
        return lam_kernel
    triv = bmap.trivial_vector()
    scaled = MultiplicityVector(VERTEX_SIDE, tuple(
        tuple(x * deficit for x in b) for b in triv.blocks))
    return lam_kernel + scaled
