"""Local (ir)reducibility of orthogonal product sets under OPMs.

A first measurement by a party group preserves orthogonality of a product
set iff every effect E satisfies ``<a_i|E|a_j> = 0`` for all state pairs
whose factors outside the group still overlap.  These are linear conditions
on Hermitian E, so the admissible effects form a real vector space that
always contains the identity; the group can eliminate states only if that
space is bigger than span{I}.  This module computes the space explicitly,
searches it for eliminating projective measurements, and classifies bases
by where elimination is possible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import RANK_TOL, TOL


def _party_index(basis):
    return {p: i for i, (p, _) in enumerate(basis.parties)}


def group_factorization(basis, group):
    """Per-state (group factor, rest factor) vectors for a party group.

    Factors multiply in party order, so two states' group factors live in
    the same tensor ordering.
    """
    idx = _party_index(basis)
    for p in group:
        if p not in idx:
            raise KeyError(f"unknown party {p!r}")
    group_pos = sorted(idx[p] for p in set(group))
    rest_pos = [i for i in range(len(basis.parties)) if i not in group_pos]
    pairs = []
    for st in basis.states:
        a = st.factors[group_pos[0]]
        for i in group_pos[1:]:
            a = np.kron(a, st.factors[i])
        if rest_pos:
            r = st.factors[rest_pos[0]]
            for i in rest_pos[1:]:
                r = np.kron(r, st.factors[i])
        else:
            r = np.ones(1, dtype=complex)
        pairs.append((a, r))
    return pairs


def constrained_pairs(basis, group, tol=TOL):
    """Indices (i, j) whose rest overlap forces ``<a_i|E|a_j> = 0``."""
    fac = group_factorization(basis, group)
    out = []
    for i in range(len(fac)):
        for j in range(i + 1, len(fac)):
            if abs(np.vdot(fac[i][1], fac[j][1])) > tol:
                out.append((i, j))
    return out, fac


def hermitian_basis(d):
    """Real basis of d x d Hermitian matrices (d^2 elements)."""
    mats = []
    for k in range(d):
        m = np.zeros((d, d), dtype=complex)
        m[k, k] = 1.0
        mats.append(m)
    for k in range(d):
        for l in range(k + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[k, l] = m[l, k] = 1.0
            mats.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[k, l] = -1.0j
            m[l, k] = 1.0j
            mats.append(m)
    return mats


@dataclass(frozen=True)
class HermitianSolutionSpace:
    """All Hermitian effects a party group may use in an orthogonality-preserving first measurement."""

    group: tuple
    local_dim: int
    basis_matrices: tuple
    constrained: tuple

    @property
    def dim(self):
        return len(self.basis_matrices)

    @property
    def nontrivial(self):
        return self.dim > 1

    def satisfies(self, matrix, tol=RANK_TOL):
        """Check the OPM constraints directly for one Hermitian matrix."""
        return all(abs(a_i.conj() @ matrix @ a_j) < tol for a_i, a_j in self.constrained)

    def contains_identity(self, tol=RANK_TOL):
        ident = np.eye(self.local_dim, dtype=complex)
        coeffs = [np.real(np.trace(b.conj().T @ ident)) / np.real(np.trace(b.conj().T @ b))
                  for b in self.basis_matrices]
        recon = sum(c * b for c, b in zip(coeffs, self.basis_matrices))
        # basis matrices are orthogonal (SVD rows), so this projection is exact
        return bool(np.max(np.abs(recon - ident)) < tol)


def opm_solution_space(basis, group, tol=TOL, rank_tol=RANK_TOL):
    """Solve the OPM constraint system for one party group.

    Returns an orthonormal (in Hilbert-Schmidt sense) basis of the real
    solution space, computed by SVD nullspace extraction over the real
    parametrization of Hermitian matrices.
    """
    group = tuple(group)
    pairs, fac = constrained_pairs(basis, group, tol)
    d = len(fac[0][0])
    hbasis = hermitian_basis(d)
    if pairs:
        rows = np.empty((2 * len(pairs), len(hbasis)))
        for r, (i, j) in enumerate(pairs):
            a_i, a_j = fac[i][0], fac[j][0]
            vals = np.array([a_i.conj() @ h @ a_j for h in hbasis])
            rows[2 * r] = vals.real
            rows[2 * r + 1] = vals.imag
        _, svals, vt = np.linalg.svd(rows)
        cut = rank_tol * (svals[0] if len(svals) else 1.0)
        rank = int(np.sum(svals > cut))
        null_rows = vt[rank:]
    else:
        null_rows = np.eye(len(hbasis))
    mats = []
    for row in null_rows:
        m = sum(c * h for c, h in zip(row, hbasis))
        mats.append(m)
    constrained = tuple((fac[i][0], fac[j][0]) for i, j in pairs)
    return HermitianSolutionSpace(
        group=group,
        local_dim=d,
        basis_matrices=tuple(mats),
        constrained=constrained,
    )


def is_locally_irreducible(basis, partition):
    """True iff every group of the partition only has trivial OPMs."""
    seen = []
    for g in partition:
        seen.extend(g)
    if sorted(seen) != sorted(p for p, _ in basis.parties):
        raise ValueError("partition must cover every party exactly once")
    return all(opm_solution_space(basis, g).dim == 1 for g in partition)


# ---------------------------------------------------------------------------
# eliminating measurements

@dataclass(frozen=True)
class EliminatingOpm:
    """A complete projective OPM for one group with an elimination witness."""

    group: tuple
    effects: tuple          # Hermitian projector matrices summing to identity
    eliminated: tuple       # per effect: labels annihilated by that outcome
    survivors: tuple        # per effect: labels with nonzero outcome weight

    def to_dict(self):
        return {
            "group": list(self.group),
            "n_effects": len(self.effects),
            "effects": [[[ [z.real, z.imag] for z in row] for row in e] for e in self.effects],
            "eliminated": [list(e) for e in self.eliminated],
            "survivors": [list(s) for s in self.survivors],
        }


def _eigen_projectors(h, tol=1e-7):
    evals, evecs = np.linalg.eigh(h)
    clusters = []
    for idx, ev in enumerate(evals):
        if clusters and abs(ev - clusters[-1][0][-1]) < tol * max(1.0, abs(evals[-1])):
            clusters[-1][0].append(ev)
            clusters[-1][1].append(idx)
        else:
            clusters.append(([ev], [idx]))
    projectors = []
    for _, idxs in clusters:
        v = evecs[:, idxs]
        projectors.append(v @ v.conj().T)
    return projectors


def _groupings(projectors):
    """Candidate complete measurements built from spectral projectors."""
    n = len(projectors)
    yield list(projectors)
    if n > 2:
        # binary coarse-grainings: subset vs complement
        for mask in range(1, 2 ** (n - 1)):
            included = [projectors[k] for k in range(n) if mask & (1 << k)]
            excluded = [projectors[k] for k in range(n) if not mask & (1 << k)]
            yield [sum(included), sum(excluded)]


def find_eliminating_opm(basis, group, seed=0):
    """Search the solution space for a complete projective eliminating OPM.

    Returns None when the space is trivial, and also when no eigenprojector
    grouping of any inspected solution both stays inside the space and
    eliminates a state; a nontrivial space does not by itself guarantee an
    eliminating projective measurement.
    """
    space = opm_solution_space(basis, group)
    if not space.nontrivial:
        return None
    fac = group_factorization(basis, group)
    labels = basis.labels
    d = space.local_dim

    rng = np.random.default_rng(seed)
    candidates = list(space.basis_matrices)
    for _ in range(20):
        coeff = rng.normal(size=space.dim)
        candidates.append(sum(c * b for c, b in zip(coeff, space.basis_matrices)))

    for h in candidates:
        h0 = h - (np.trace(h).real / d) * np.eye(d)
        if np.max(np.abs(h0)) < RANK_TOL:
            continue
        projectors = _eigen_projectors(h0)
        if len(projectors) < 2:
            continue
        for effects in _groupings(projectors):
            if not all(space.satisfies(e) for e in effects):
                continue
            total = sum(effects)
            if np.max(np.abs(total - np.eye(d))) > RANK_TOL:
                continue
            eliminated, survivors = [], []
            for e in effects:
                killed, alive = [], []
                for lbl, (a, _) in zip(labels, fac):
                    if np.linalg.norm(e @ a) < RANK_TOL:
                        killed.append(lbl)
                    else:
                        alive.append(lbl)
                eliminated.append(tuple(killed))
                survivors.append(tuple(alive))
            if any(eliminated):
                return EliminatingOpm(
                    group=tuple(group),
                    effects=tuple(effects),
                    eliminated=tuple(eliminated),
                    survivors=tuple(survivors),
                )
    return None


# ---------------------------------------------------------------------------
# classification

@dataclass(frozen=True)
class GnpbClassification:
    basis: str
    single_dims: dict       # party -> solution space dimension
    merged_dims: dict       # (party, party) -> solution space dimension
    verdict: str            # "TypeI" | "TypeIIa" | "TypeIIb"
    witness: EliminatingOpm | None

    @property
    def all_separated_reducible(self):
        return {p: d > 1 for p, d in self.single_dims.items()}

    @property
    def two_merged_reducible(self):
        return {g: d > 1 for g, d in self.merged_dims.items()}

    def to_dict(self):
        return {
            "basis": self.basis,
            "single_dims": {p: d for p, d in self.single_dims.items()},
            "merged_dims": {"+".join(g): d for g, d in self.merged_dims.items()},
            "verdict": self.verdict,
            "witness": self.witness.to_dict() if self.witness else None,
        }


def classify(basis):
    """Type of a tripartite basis by where OPM elimination is possible.

    TypeI: some single party already has a nontrivial OPM.  TypeIIa: only
    merged pairs do.  TypeIIb: not even merged pairs do.  The verdict covers
    the elimination hierarchy only; it does not by itself certify local
    indistinguishability.
    """
    parties = [p for p, _ in basis.parties]
    if len(parties) != 3:
        raise ValueError("classification is implemented for tripartite bases")
    single_dims = {p: opm_solution_space(basis, (p,)).dim for p in parties}
    merged_dims = {}
    for i in range(3):
        for j in range(i + 1, 3):
            g = (parties[i], parties[j])
            merged_dims[g] = opm_solution_space(basis, g).dim
    if any(d > 1 for d in single_dims.values()):
        verdict = "TypeI"
        witness_group = next((p,) for p in parties if single_dims[p] > 1)
    elif any(d > 1 for d in merged_dims.values()):
        verdict = "TypeIIa"
        witness_group = next(g for g in merged_dims if merged_dims[g] > 1)
    else:
        verdict = "TypeIIb"
        witness_group = None
    witness = find_eliminating_opm(basis, witness_group) if witness_group else None
    return GnpbClassification(
        basis=basis.name,
        single_dims=single_dims,
        merged_dims=merged_dims,
        verdict=verdict,
        witness=witness,
    )
