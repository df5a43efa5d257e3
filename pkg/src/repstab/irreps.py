"""Unitary representations of finite groups and their irreducible pieces.

Irreducible representations are computed numerically: a random Hermitian
matrix is averaged over the group action to produce a generic element of the
commutant, whose eigenspaces are irreducible invariant subspaces. Applied to
the regular representation this yields every irreducible, deduplicated by
character and put in a canonical order (ascending dimension, then descending
lexicographic character over the class order). The canonical order fixes the
coordinates of every multiplicity vector produced by the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MultiplicityError, NumericalError, ValidationError
from .groups import FiniteGroup, GroupHom
from .rng import as_generator, derived_generator, random_hermitian

UNITARY_ATOL = 1e-10      # construction-time exactness for reps
MULT_ATOL = 1e-6          # integrality tolerance for multiplicities
IRREDUCIBLE_ATOL = 1e-8   # |sum |chi|^2 / |G| - 1| for irreducibility
CLUSTER_GAP_RTOL = 1e-7   # relative eigenvalue gap for commutant clustering
CHARACTER_DECIMALS = 6    # rounding used to deduplicate and order characters


@dataclass(frozen=True, eq=False)
class UnitaryRep:
    """Exact unitary representation: one matrix per group element."""

    group: FiniteGroup
    matrices: np.ndarray  # (|G|, dim, dim) complex

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def character(self) -> np.ndarray:
        """Trace at one representative per conjugacy class."""
        reps = list(self.group.class_representatives)
        return np.trace(self.matrices[reps], axis1=1, axis2=2)

    def __repr__(self) -> str:
        return f"UnitaryRep({self.group!r}, dim={self.dim})"


def unitary_rep(group: FiniteGroup, matrices, check: bool = True,
                atol: float = UNITARY_ATOL) -> UnitaryRep:
    """Build a UnitaryRep, verifying unitarity and the homomorphism property."""
    mats = np.ascontiguousarray(matrices, dtype=complex)
    if mats.shape != (group.order, mats.shape[1], mats.shape[1]) or mats.shape[1] == 0:
        raise ValidationError(f"expected ({group.order}, d, d) matrices, got {mats.shape}")
    if not np.all(np.isfinite(mats.view(float))):
        raise ValidationError("matrices contain NaN or Inf")
    if check:
        d = mats.shape[1]
        eye = np.eye(d)
        uerr = np.abs(np.einsum("gij,gkj->gik", mats, mats.conj()) - eye).max()
        if uerr > atol:
            raise ValidationError(f"matrices not unitary: max deviation {uerr:.3e}")
        prod = np.matmul(mats[:, None], mats[None, :])
        herr = np.abs(prod - mats[group.mult]).max()
        if herr > atol:
            raise ValidationError(f"not a homomorphism: max deviation {herr:.3e}")
    mats.setflags(write=False)
    return UnitaryRep(group=group, matrices=mats)


def regular_representation(group: FiniteGroup) -> UnitaryRep:
    """Left-translation permutation representation of dimension |G|."""
    n = group.order
    mats = np.zeros((n, n, n), dtype=complex)
    g_idx = np.repeat(np.arange(n), n)
    h_idx = np.tile(np.arange(n), n)
    mats[g_idx, group.mult[g_idx, h_idx], h_idx] = 1.0
    return unitary_rep(group, mats, check=False)


def direct_sum(*reps: UnitaryRep) -> UnitaryRep:
    """Block-diagonal direct sum of representations of one group."""
    if not reps:
        raise ValidationError("need at least one representation")
    group = reps[0].group
    if any(r.group is not group for r in reps):
        raise ValidationError("direct sum requires a common group")
    n = group.order
    total = sum(r.dim for r in reps)
    mats = np.zeros((n, total, total), dtype=complex)
    off = 0
    for r in reps:
        mats[:, off:off + r.dim, off:off + r.dim] = r.matrices
        off += r.dim
    return unitary_rep(group, mats, check=False)


def conjugate_rep(rep: UnitaryRep, u: np.ndarray) -> UnitaryRep:
    """g -> u rho(g) u* for a fixed unitary u."""
    mats = np.matmul(np.matmul(u, rep.matrices), u.conj().T)
    return unitary_rep(rep.group, mats, check=False)


def pullback(hom: GroupHom, rep: UnitaryRep) -> UnitaryRep:
    """Representation of the source group: h -> rho(hom(h))."""
    if rep.group is not hom.target:
        raise ValidationError("representation group does not match hom target")
    return unitary_rep(hom.source, rep.matrices[hom.map], check=False)


def restrict_to_subspace(rep: UnitaryRep, basis: np.ndarray,
                         check: bool = False, atol: float = 1e-8) -> UnitaryRep:
    """Compress onto an invariant subspace given by orthonormal columns."""
    sub = np.einsum("ij,gjk,kl->gil", basis.conj().T, rep.matrices, basis)
    if check:
        err = np.abs(np.matmul(rep.matrices, basis) - np.matmul(basis, sub)).max()
        if err > atol:
            raise NumericalError(f"subspace is not invariant: deviation {err:.3e}")
    return unitary_rep(rep.group, sub, check=False)


@dataclass(frozen=True, eq=False)
class Irrep:
    """Explicit unitary irreducible representation with its character."""

    group: FiniteGroup
    dim: int
    matrices: np.ndarray
    character: np.ndarray  # one complex value per conjugacy class

    def as_rep(self) -> UnitaryRep:
        return UnitaryRep(group=self.group, matrices=self.matrices)


@dataclass(frozen=True, eq=False)
class IrrepTable:
    """Complete list of irreducibles of a group, in canonical order."""

    group: FiniteGroup
    irreps: tuple[Irrep, ...]

    @property
    def dims(self) -> np.ndarray:
        return np.array([p.dim for p in self.irreps])

    def __len__(self) -> int:
        return len(self.irreps)

    @property
    def trivial_index(self) -> int:
        for k, p in enumerate(self.irreps):
            if p.dim == 1 and np.allclose(p.character, 1.0, atol=1e-8):
                return k
        raise NumericalError("table has no trivial irreducible")

    def match_character(self, character: np.ndarray, atol: float = 1e-6) -> int:
        """Index of the irrep with this character, else NumericalError."""
        for k, p in enumerate(self.irreps):
            if np.abs(p.character - character).max() <= atol:
                return k
        raise NumericalError("character does not match any irreducible in the table")


@dataclass(frozen=True, eq=False)
class Component:
    """One irreducible invariant subspace of a decomposed representation."""

    basis: np.ndarray      # (dim, d) orthonormal columns
    character: np.ndarray  # per conjugacy class

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def _cluster_eigenvalues(w: np.ndarray, rtol: float) -> list[np.ndarray]:
    scale = max(float(np.abs(w).max()), 1.0)
    cuts = np.flatnonzero(np.diff(w) > rtol * scale)
    return np.split(np.arange(w.size), cuts + 1)


def irreducible_components(rep: UnitaryRep, rng=None, *,
                           gap_rtol: float = CLUSTER_GAP_RTOL,
                           retries: int = 3,
                           atol: float = IRREDUCIBLE_ATOL) -> list[Component]:
    """Split a representation into irreducible invariant subspaces.

    Averages a random Hermitian matrix over the group action; the eigenspaces
    of the result are generically irreducible invariant subspaces. Each
    candidate cluster is checked for invariance and irreducibility; on
    failure (eigenvalue collision across components) the seed is re-drawn,
    up to `retries` additional times.
    """
    rng = as_generator(rng)
    group, mats = rep.group, rep.matrices
    n = rep.dim
    sizes = group.class_sizes
    reps_idx = list(group.class_representatives)
    last_err = ""
    for attempt in range(retries + 1):
        h = random_hermitian(n, rng)
        avg = np.einsum("gij,jk,glk->il", mats, h, mats.conj()) / group.order
        w, q = np.linalg.eigh((avg + avg.conj().T) / 2.0)
        comps: list[Component] = []
        ok = True
        for idxs in _cluster_eigenvalues(w, gap_rtol):
            basis = q[:, idxs]
            sub = np.einsum("ij,gjk,kl->gil", basis.conj().T, mats, basis)
            inv_err = np.abs(np.matmul(mats, basis) - np.matmul(basis, sub)).max()
            if inv_err > 1e-8:
                ok, last_err = False, f"cluster not invariant (deviation {inv_err:.3e})"
                break
            chi = np.trace(sub[reps_idx], axis1=1, axis2=2)
            norm2 = float(np.sum(sizes * np.abs(chi) ** 2)) / group.order
            if abs(norm2 - 1.0) > atol:
                ok, last_err = False, f"cluster reducible (|chi|^2 = {norm2:.6f})"
                break
            comps.append(Component(basis=basis, character=chi))
        if ok:
            if sum(c.dim for c in comps) != n:
                raise NumericalError("component dimensions do not sum to the total")
            return comps
    raise NumericalError(
        f"eigenvalue clustering failed after {retries + 1} attempts: {last_err}")


def _character_key(character: np.ndarray) -> tuple:
    rounded = np.round(character, CHARACTER_DECIMALS) + 0.0  # kill -0.0
    return tuple(x for v in rounded for x in (float(v.real), float(v.imag)))


def irrep_table(group: FiniteGroup, seed=0) -> IrrepTable:
    """All irreducibles of a group, from its regular representation.

    The regular representation contains every irreducible, so decomposing it
    and deduplicating by character yields a complete table. Completeness is
    certified by sum(dim^2) == |G| and pairwise character orthonormality.
    """
    reg = regular_representation(group)
    comps = irreducible_components(reg, derived_generator(seed, 0) if isinstance(seed, int) else seed)
    by_char: dict[tuple, Component] = {}
    for comp in comps:
        by_char.setdefault(_character_key(comp.character), comp)

    entries = []
    for key, comp in by_char.items():
        sub = np.einsum("ij,gjk,kl->gil", comp.basis.conj().T, reg.matrices, comp.basis)
        rep = unitary_rep(group, sub, check=True)  # certifies unitary homomorphism
        entries.append(Irrep(group=group, dim=comp.dim, matrices=rep.matrices,
                             character=comp.character))
    entries.sort(key=lambda p: (p.dim, tuple(-x for x in _character_key(p.character))))

    dims2 = sum(p.dim ** 2 for p in entries)
    if dims2 != group.order:
        raise NumericalError(
            f"incomplete irreducible table: sum of dim^2 is {dims2}, expected {group.order}")
    sizes = group.class_sizes
    chars = np.array([p.character for p in entries])
    gram = (chars * sizes) @ chars.conj().T / group.order
    if np.abs(gram - np.eye(len(entries))).max() > 1e-8:
        raise NumericalError("characters are not orthonormal")
    return IrrepTable(group=group, irreps=tuple(entries))


def multiplicities(rep: UnitaryRep, table: IrrepTable,
                   atol: float = MULT_ATOL) -> np.ndarray:
    """Integer multiplicity of each irreducible in a representation.

    Computed as the class-weighted character inner product and rounded;
    raises MultiplicityError if any value is farther than `atol` from an
    integer (the input is then not an exact representation).
    """
    if rep.group is not table.group:
        raise ValidationError("representation and table belong to different groups")
    sizes = rep.group.class_sizes
    chi = rep.character()
    raw = np.array([np.sum(sizes * chi * p.character.conj()) for p in table.irreps]) / rep.group.order
    if np.abs(raw.imag).max() > atol or np.abs(raw.real - np.round(raw.real)).max() > atol:
        worst = np.abs(raw - np.round(raw.real)).max()
        raise MultiplicityError(
            f"multiplicities are not integers (max deviation {worst:.3e}); "
            "input is not an exact representation")
    out = np.round(raw.real).astype(int)
    if int(out @ table.dims) != rep.dim:
        raise MultiplicityError("multiplicities do not account for the full dimension")
    return out


def rep_from_multiplicities(table: IrrepTable, mults) -> UnitaryRep:
    """Block-diagonal representation with the given multiplicity vector."""
    mults = np.asarray(mults, dtype=int)
    if mults.shape != (len(table),) or mults.min() < 0:
        raise ValidationError("multiplicity vector must be nonnegative, one entry per irrep")
    blocks = []
    for p, m in zip(table.irreps, mults):
        blocks.extend([p.as_rep()] * int(m))
    if not blocks:
        raise ValidationError("total dimension must be positive")
    return direct_sum(*blocks)


def restriction_matrix(hom: GroupHom, table_source: IrrepTable,
                       table_target: IrrepTable) -> np.ndarray:
    """Integer matrix of restriction-along-hom on multiplicity vectors.

    Column j holds the multiplicities, in the source group, of the pullback
    of the target group's j-th irreducible. Applying the matrix to rho's
    multiplicity vector gives the multiplicity vector of the pullback of rho.
    """
    if table_source.group is not hom.source or table_target.group is not hom.target:
        raise ValidationError("tables do not match the homomorphism")
    cols = []
    for p in table_target.irreps:
        cols.append(multiplicities(pullback(hom, p.as_rep()), table_source))
    return np.stack(cols, axis=1)
