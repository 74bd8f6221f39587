"""Dense complex linear algebra over small labeled tensor-product spaces.

Registers are identified by name, never by position: every embedding of an
operator into the joint space goes through subsystem labels, which keeps
party bookkeeping honest when protocols attach ancillas or merge parties.
All values are immutable after construction and every operation is a pure
function.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log2, prod

import numpy as np

#: Global comparison tolerance.  Every amplitude occurring in the supported
#: state families is 0, +-1, +-1/2, +-1/sqrt2 or 1/sqrt3, so a single loose
#: cutoff is safe at the dimensions involved (<= a few thousand).
TOL = 1e-9

#: Looser cutoff used for rank decisions and orthogonality-preservation
#: checks, relative to unit-normalized vectors.
RANK_TOL = 1e-8


class LabelCollisionError(ValueError):
    """Raised when two subsystems with the same name meet in one space."""


@dataclass(frozen=True)
class Subsystem:
    """One labeled register: a name, a local dimension and an owning party."""

    name: str
    dim: int
    owner: str

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"subsystem {self.name!r} must have dim >= 1")


class CompositeSpace:
    """An ordered collection of uniquely named subsystems."""

    def __init__(self, subsystems):
        subs = tuple(subsystems)
        names = [s.name for s in subs]
        if len(set(names)) != len(names):
            raise LabelCollisionError(f"duplicate subsystem names in {names}")
        self.subsystems = subs
        self._index = {s.name: i for i, s in enumerate(subs)}
        self.dims = tuple(s.dim for s in subs)
        self.dim = prod(self.dims) if subs else 1

    def __repr__(self):
        inner = ", ".join(f"{s.name}:{s.dim}" for s in self.subsystems)
        return f"CompositeSpace({inner})"

    def __eq__(self, other):
        return isinstance(other, CompositeSpace) and self.subsystems == other.subsystems

    def __hash__(self):
        return hash(self.subsystems)

    @property
    def names(self):
        return tuple(s.name for s in self.subsystems)

    def axis(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no subsystem named {name!r} in {self}") from None

    def subsystem(self, name):
        return self.subsystems[self.axis(name)]

    def dim_of(self, names):
        return prod(self.subsystem(n).dim for n in names)

    def extended(self, extra):
        """New space with additional subsystems appended."""
        return CompositeSpace(self.subsystems + tuple(extra))

    def without(self, names):
        drop = set(names)
        return CompositeSpace(s for s in self.subsystems if s.name not in drop)

    def reowned(self, owner_map):
        """New space with owners remapped (used for party merges)."""
        return CompositeSpace(
            Subsystem(s.name, s.dim, owner_map.get(s.owner, s.owner))
            for s in self.subsystems
        )

    def owners(self):
        """Mapping party -> tuple of subsystem names it holds."""
        held: dict[str, list[str]] = {}
        for s in self.subsystems:
            held.setdefault(s.owner, []).append(s.name)
        return {p: tuple(ns) for p, ns in held.items()}

    def split_axes(self, front_names, amplitudes):
        """Reshape a flat vector to (dim(front), dim(rest)), front in given order."""
        tensor = np.asarray(amplitudes).reshape(self.dims if self.dims else (1,))
        front_axes = [self.axis(n) for n in front_names]
        rest_axes = [i for i in range(len(self.dims)) if i not in front_axes]
        moved = np.transpose(tensor, front_axes + rest_axes)
        d_front = prod(self.dims[a] for a in front_axes) if front_axes else 1
        return moved.reshape(d_front, -1)

    def unsplit_axes(self, front_names, matrix):
        """Inverse of :meth:`split_axes`: back to the flat amplitude vector."""
        front_axes = [self.axis(n) for n in front_names]
        rest_axes = [i for i in range(len(self.dims)) if i not in front_axes]
        shaped = matrix.reshape([self.dims[a] for a in front_axes + rest_axes])
        inverse = np.argsort(front_axes + rest_axes)
        return np.transpose(shaped, inverse).reshape(-1)


class Ket:
    """A pure state: flat complex amplitudes over a composite space."""

    def __init__(self, space, amplitudes):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (space.dim,):
            raise ValueError(f"amplitude length {amps.shape[0]} != space dim {space.dim}")
        amps = amps.copy()
        amps.setflags(write=False)
        self.space = space
        self.amplitudes = amps

    def __repr__(self):
        return f"Ket(dim={self.space.dim})"

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol=TOL):
        return abs(self.norm - 1.0) < tol

    def normalized(self):
        n = self.norm
        if n < TOL:
            raise ValueError("cannot normalize a (numerically) zero ket")
        return Ket(self.space, self.amplitudes / n)


def basis_ket(space, occupations):
    """Computational basis ket |i1 i2 ...> given per-subsystem indices."""
    if len(occupations) != len(space.subsystems):
        raise ValueError("one index per subsystem required")
    amps = np.zeros(space.dim, dtype=complex)
    flat = 0
    for idx, sub in zip(occupations, space.subsystems):
        if not 0 <= idx < sub.dim:
            raise ValueError(f"index {idx} out of range for {sub.name} (dim {sub.dim})")
        flat = flat * sub.dim + idx
    amps[flat] = 1.0
    return Ket(space, amps)


def single_ket(name, dim, amplitudes, owner=None):
    """Ket on a single fresh register."""
    space = CompositeSpace([Subsystem(name, dim, owner if owner is not None else name)])
    return Ket(space, amplitudes)


def tensor(factors):
    """Tensor product of kets on label-disjoint spaces, in the given order."""
    factors = list(factors)
    if not factors:
        raise ValueError("tensor of zero factors is not defined here")
    subs = []
    for f in factors:
        subs.extend(f.space.subsystems)
    space = CompositeSpace(subs)  # raises on label collision
    amps = factors[0].amplitudes
    for f in factors[1:]:
        amps = np.kron(amps, f.amplitudes)
    return Ket(space, amps)


def inner(a, b):
    """<a|b>, conjugate-linear in the first argument."""
    if a.space.dims != b.space.dims or a.space.names != b.space.names:
        raise ValueError("inner product requires identical spaces")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


class Operator:
    """A square complex matrix acting on a named subset of subsystems."""

    def __init__(self, names, matrix):
        mat = np.asarray(matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("operator matrix must be square")
        mat = mat.copy()
        mat.setflags(write=False)
        self.names = tuple(names)
        self.matrix = mat

    def is_hermitian(self, tol=TOL):
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) < tol)

    def is_projector(self, tol=TOL):
        if not self.is_hermitian(tol):
            return False
        return bool(np.max(np.abs(self.matrix @ self.matrix - self.matrix)) < tol)


def apply_effect(effect, state, tol=TOL):
    """Born rule for a projective effect embedded by label.

    Returns ``(probability, post_state)``; the post state is None when the
    probability is numerically zero.
    """
    if not effect.is_projector(max(tol, TOL)):
        raise ValueError("apply_effect is restricted to projective effects")
    d = state.space.dim_of(effect.names)
    if effect.matrix.shape[0] != d:
        raise ValueError("effect dimension does not match the named subsystems")
    mat = state.space.split_axes(effect.names, state.amplitudes)
    projected = effect.matrix @ mat
    prob = float(np.linalg.norm(projected) ** 2)
    if prob <= tol:
        return 0.0, None
    post = state.space.unsplit_axes(effect.names, projected) / np.sqrt(prob)
    return prob, Ket(state.space, post)


def schmidt_ebits(state, cut, tol=TOL):
    """Base-2 entanglement entropy of a normalized pure state across a cut.

    ``cut`` names the subsystems on one side; the other side is the rest.
    """
    if not state.is_normalized(1e-6):
        raise ValueError("schmidt_ebits expects a normalized state")
    names = set(cut)
    all_names = set(state.space.names)
    if not names or not names < all_names:
        raise ValueError("cut must be a proper nonempty subset of subsystem names")
    mat = state.space.split_axes(tuple(n for n in state.space.names if n in names),
                                 state.amplitudes)
    svals = np.linalg.svd(mat, compute_uv=False)
    probs = svals**2
    probs = probs[probs > tol]
    return float(-np.sum(probs * np.log2(probs)))


def pairwise_max_overlap(vectors):
    """Largest |<v_i|v_j>| over i != j for unit-normalized rows."""
    if len(vectors) < 2:
        return 0.0
    stack = np.array([v / np.linalg.norm(v) for v in vectors])
    gram = stack.conj() @ stack.T
    np.fill_diagonal(gram, 0.0)
    return float(np.max(np.abs(gram)))


def merge_cost_ebits(dim):
    """Entanglement cost of moving a register of the given dimension."""
    return log2(dim)
