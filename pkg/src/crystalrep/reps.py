"""Numeric unitary representations of virtually free-abelian groups.

A representation is stored by its generator images: one complex n x n
matrix per lattice basis vector plus one per nontrivial point-group
element (the lift images; the identity lift is I). Verification checks
unitarity of every image and the finite relation checklist of the group,
which together guarantee the assignment extends to a homomorphism.

All randomized operations take explicit seeds and are deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .groups import Element, GroupDataError, IntermediateSubgroup, VAGroup


class ToleranceError(RuntimeError):
    """A numerical decision (rank, clustering, scalar test) was too close to call."""


@dataclass(frozen=True)
class ToleranceConfig:
    unitarity_tol: float = 1e-9
    relation_tol: float = 1e-9
    rank_tol: float = 1e-7          # relative threshold on singular values
    equality_tol: float = 1e-8

    def __post_init__(self):
        for name in ("unitarity_tol", "relation_tol", "rank_tol", "equality_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_TOL = ToleranceConfig()


def opnorm(M) -> float:
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def unitarity_residual(M) -> float:
    n = M.shape[0]
    return opnorm(M.conj().T @ M - np.eye(n))


def unitary_power(M, e: int):
    if e >= 0:
        return np.linalg.matrix_power(M, e)
    return np.linalg.matrix_power(M.conj().T, -e)


def polar_unitary(M):
    """Unitary factor of the polar decomposition (closest unitary)."""
    W, _, Vh = np.linalg.svd(M)
    return W @ Vh


def haar_unitary(n: int, rng) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


@dataclass
class VerifyReport:
    max_unitarity_residual: float
    max_relation_residual: float
    worst_relation: str
    passed: bool

    def __str__(self):
        state = "pass" if self.passed else "FAIL"
        return (f"{state}: unitarity {self.max_unitarity_residual:.3e}, "
                f"relations {self.max_relation_residual:.3e}"
                + (f" (worst: {self.worst_relation})" if self.worst_relation else ""))


class UnitaryRep:
    """Generator images of a unitary representation, verified on construction.

    lattice_images : list of rank-many (n, n) complex arrays
    lift_images    : dict q -> (n, n) array for nontrivial point-group q
    n = 0 is allowed (the empty representation).
    """

    def __init__(self, group: VAGroup, lattice_images, lift_images=None,
                 tol: ToleranceConfig = DEFAULT_TOL, check: bool = True):
        self.group = group
        self.tol = tol
        lattice_images = [np.asarray(m, dtype=complex) for m in lattice_images]
        if len(lattice_images) != group.rank:
            raise GroupDataError(
                f"need {group.rank} lattice images, got {len(lattice_images)}")
        if lattice_images:
            self.n = lattice_images[0].shape[0]
        else:
            self.n = 0 if lift_images is None or not lift_images else \
                np.asarray(next(iter(lift_images.values()))).shape[0]
        for m in lattice_images:
            if m.shape != (self.n, self.n):
                raise GroupDataError("lattice images must be square of equal size")
        self.lattice = lattice_images
        lifts = {}
        for q in range(1, group.Q.order):
            if lift_images is None or q not in lift_images:
                raise GroupDataError(f"missing lift image for point-group element {q}")
            m = np.asarray(lift_images[q], dtype=complex)
            if m.shape != (self.n, self.n):
                raise GroupDataError("lift images must match the representation dimension")
            lifts[q] = m
        self.lifts = lifts
        self.report = self.verify()
        if check and not self.report.passed:
            raise ToleranceError(f"representation does not verify: {self.report}")

    # -- basics ---------------------------------------------------------------

    def generator_images(self):
        return list(self.lattice) + [self.lifts[q] for q in sorted(self.lifts)]

    def image_of_symbol(self, sym):
        kind, idx = sym
        if kind == "A":
            return self.lattice[idx]
        return self.lifts[idx] if idx != 0 else np.eye(self.n, dtype=complex)

    def lattice_image(self, v) -> np.ndarray:
        out = np.eye(self.n, dtype=complex)
        for i, e in enumerate(v):
            if e:
                out = out @ unitary_power(self.lattice[i], int(e))
        return out

    def evaluate(self, x: Element) -> np.ndarray:
        """Image of a group element in normal form (v, q)."""
        if len(x.v) != self.group.rank:
            raise GroupDataError("element has wrong lattice rank")
        out = self.lattice_image(x.v)
        if x.q != 0:
            out = out @ self.lifts[x.q]
        return out

    def character(self, x: Element) -> complex:
        return complex(np.trace(self.evaluate(x)))

    def verify(self) -> VerifyReport:
        """Residual report; never raises."""
        max_unit = 0.0
        for m in self.generator_images():
            max_unit = max(max_unit, unitarity_residual(m))
        max_rel = 0.0
        worst = ""
        for rel in self.group.relation_checklist():
            prod = np.eye(self.n, dtype=complex)
            for sym, e in rel.word:
                prod = prod @ unitary_power(self.image_of_symbol(sym), e)
            r = opnorm(prod - np.eye(self.n))
            if r > max_rel:
                max_rel = r
                worst = rel.label
        passed = (max_unit <= self.tol.unitarity_tol
                  and max_rel <= self.tol.relation_tol)
        return VerifyReport(max_unit, max_rel, worst, passed)

    def conjugate(self, V) -> "UnitaryRep":
        V = np.asarray(V, dtype=complex)
        Vh = V.conj().T
        return UnitaryRep(self.group,
                          [V @ m @ Vh for m in self.lattice],
                          {q: V @ m @ Vh for q, m in self.lifts.items()},
                          tol=self.tol)

    def __repr__(self):
        return f"UnitaryRep(n={self.n}, Q order {self.group.Q.order}, {self.report})"


def require_verified(rho: UnitaryRep):
    if not rho.report.passed:
        raise ToleranceError(f"unverified representation rejected: {rho.report}")


def trivial_rep(group: VAGroup, n: int = 1, tol=DEFAULT_TOL) -> UnitaryRep:
    eye = np.eye(n, dtype=complex)
    return UnitaryRep(group, [eye.copy() for _ in range(group.rank)],
                      {q: eye.copy() for q in range(1, group.Q.order)}, tol=tol)


# ---------------------------------------------------------------------------
# Combinators
# ---------------------------------------------------------------------------

def combine(rho: UnitaryRep, psi: UnitaryRep, mode: str) -> UnitaryRep:
    """Direct sum or tensor product (lexicographic basis e_i (x) f_j)."""
    if rho.group is not psi.group:
        raise GroupDataError("representations live over different groups")
    if mode == "sum":
        def op(a, b):
            out = np.zeros((a.shape[0] + b.shape[0],) * 2, dtype=complex)
            out[:a.shape[0], :a.shape[0]] = a
            out[a.shape[0]:, a.shape[0]:] = b
            return out
    elif mode == "tensor":
        op = np.kron
    else:
        raise ValueError(f"unknown mode {mode!r}")
    lattice = [op(a, b) for a, b in zip(rho.lattice, psi.lattice)]
    lifts = {q: op(rho.lifts[q], psi.lifts[q]) for q in rho.lifts}
    return UnitaryRep(rho.group, lattice, lifts, tol=rho.tol)


def direct_sum_power(rho: UnitaryRep, m: int) -> UnitaryRep:
    out = rho
    for _ in range(m - 1):
        out = combine(out, rho, "sum")
    return out


def restrict(rho: UnitaryRep, sub: IntermediateSubgroup) -> UnitaryRep:
    """Restriction to an intermediate subgroup: same matrices, new group data."""
    if sub.parent is not rho.group:
        raise GroupDataError("subgroup does not belong to the representation's group")
    require_verified(rho)
    lifts = {}
    for i, q in enumerate(sub.q_elements):
        if i != 0:
            lifts[i] = rho.lifts[q]
    return UnitaryRep(sub.group, list(rho.lattice), lifts, tol=rho.tol)


def induced_matrix(sub: IntermediateSubgroup, rho_h: UnitaryRep, x: Element) -> np.ndarray:
    """Block matrix of the induced representation at a group element.

    Block (i, j) is rho_h(g_i^-1 x g_j) when that element lies in the
    subgroup and zero otherwise, over the fixed coset representative order;
    basis order is g_1 (x) e_1 .. e_n, g_2 (x) e_1 .. e_n, ...
    """
    G = sub.parent
    reps = G.coset_representatives(sub)
    n = rho_h.n
    m = len(reps)
    out = np.zeros((n * m, n * m), dtype=complex)
    for j, gj in enumerate(reps):
        y = G.multiply(x, gj)
        for i, gi in enumerate(reps):
            z = G.multiply(G.inverse(gi), y)
            if sub.contains(z):
                out[i * n:(i + 1) * n, j * n:(j + 1) * n] = rho_h.evaluate(sub.to_sub(z))
                break
    return out


def induce(sub: IntermediateSubgroup, rho_h: UnitaryRep) -> UnitaryRep:
    """Induction from an intermediate subgroup to the whole group."""
    if rho_h.group is not sub.group:
        raise GroupDataError("representation is not over the given subgroup")
    require_verified(rho_h)
    G = sub.parent
    lattice = []
    for i in range(G.rank):
        e = tuple(int(i == j) for j in range(G.rank))
        lattice.append(induced_matrix(sub, rho_h, G.element(e, 0)))
    lifts = {q: induced_matrix(sub, rho_h, G.element((0,) * G.rank, q))
             for q in range(1, G.Q.order)}
    return UnitaryRep(G, lattice, lifts, tol=rho_h.tol)


# ---------------------------------------------------------------------------
# Intertwiners, irreducibility, decomposition
# ---------------------------------------------------------------------------

@dataclass
class IntertwinerSpace:
    """Orthonormal basis of {X : X rho(g) = psi(g) X on all generators}."""

    dim: int
    basis: list          # list of (n_psi, n_rho) arrays, orthonormal as vectors
    singular_values: np.ndarray

    def random_element(self, rng) -> np.ndarray:
        coeffs = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
        return sum(c * b for c, b in zip(coeffs, self.basis))

    def invertible_element(self, rng, tries: int = 8):
        """A well-conditioned invertible element, or None if none is found."""
        for _ in range(tries):
            X = self.random_element(rng)
            s = np.linalg.svd(X, compute_uv=False)
            if s[-1] > 1e-6 * max(s[0], 1e-300):
                return X
        return None


def intertwiners(rho: UnitaryRep, psi: UnitaryRep,
                 tol: ToleranceConfig | None = None) -> IntertwinerSpace:
    """Null space of the stacked equations X rho(g) - psi(g) X = 0 over the
    generator set, with dimension decided by singular values."""
    if rho.group is not psi.group:
        raise GroupDataError("representations live over different groups")
    tol = tol or rho.tol
    n1, n2 = rho.n, psi.n
    gens_r = rho.generator_images()
    gens_p = psi.generator_images()
    if n1 == 0 or n2 == 0:
        return IntertwinerSpace(0, [], np.zeros(0))
    blocks = []
    for a, b in zip(gens_r, gens_p):
        # row-major vec: vec(X A) = (I (x) A^T) vec X, vec(B X) = (B (x) I) vec X
        blocks.append(np.kron(np.eye(n2), a.T) - np.kron(b, np.eye(n1)))
    M = np.vstack(blocks) if blocks else np.zeros((0, n1 * n2))
    _, s, Vh = np.linalg.svd(M)
    if s.size == 0 or s[0] < 1e-12:
        null_rank = n1 * n2
    else:
        null_rank = int(np.sum(s < tol.rank_tol * s[0]))
        null_rank += n1 * n2 - len(s)  # svd returns min(rows, cols) values
    # null space = trailing columns of V, i.e. conjugated trailing rows of Vh
    basis = [Vh[j].conj().reshape(n2, n1) for j in range(n1 * n2 - null_rank, n1 * n2)]
    return IntertwinerSpace(null_rank, basis, s)


def commutant(rho: UnitaryRep, tol=None) -> IntertwinerSpace:
    return intertwiners(rho, rho, tol=tol)


def is_irreducible(rho: UnitaryRep) -> bool:
    """Irreducible iff the commutant is one-dimensional."""
    require_verified(rho)
    if rho.n < 1:
        raise GroupDataError("irreducibility needs dimension >= 1")
    return commutant(rho).dim == 1


def _cluster_indices(values: np.ndarray, gap: float):
    """Group sorted real values into clusters split at gaps > `gap`.

    Returns (clusters, min_intergap): index groups and the smallest gap
    between consecutive clusters (inf if only one cluster).
    """
    order = np.argsort(values)
    sorted_vals = values[order]
    clusters = [[order[0]]]
    min_intergap = np.inf
    for prev, idx in zip(range(len(order) - 1), order[1:]):
        d = sorted_vals[prev + 1] - sorted_vals[prev]
        if d > gap:
            min_intergap = min(min_intergap, d)
            clusters.append([idx])
        else:
            clusters[-1].append(idx)
    return clusters, min_intergap


CLUSTER_GAP = 1e-6


def invariant_blocks(rho: UnitaryRep, seed: int = 0):
    """Split the carrier space along a random Hermitian commutant element.

    Returns a list of orthonormal bases (n x d arrays) of invariant
    subspaces, at least two of them when the representation is reducible.
    Genericity or clustering failures retry with the next seed, at most 5
    times, then raise ToleranceError.
    """
    comm = commutant(rho)
    if comm.dim == 1:
        return [np.eye(rho.n, dtype=complex)]
    last_problem = ""
    for attempt in range(5):
        rng = np.random.default_rng(seed + attempt)
        X = comm.random_element(rng)
        H = (X + X.conj().T) / 2
        if opnorm(H) < 1e-8:
            H = (X - X.conj().T) / 2j
        evals, evecs = np.linalg.eigh(H)
        clusters, intergap = _cluster_indices(evals, CLUSTER_GAP)
        if len(clusters) < 2:
            last_problem = "commutant probe collapsed to a single eigenvalue cluster"
            continue
        if intergap < 10 * CLUSTER_GAP:
            last_problem = (f"eigenvalue clustering ambiguous: "
                            f"inter-cluster gap {intergap:.2e}")
            continue
        return [np.linalg.qr(evecs[:, sorted(c)])[0] for c in clusters]
    raise ToleranceError(f"decomposition failed after 5 seeds: {last_problem}")


def subrepresentation(rho: UnitaryRep, basis: np.ndarray) -> UnitaryRep:
    """Compress rho to an invariant subspace given by an orthonormal basis."""
    Bh = basis.conj().T
    lattice = [polar_unitary(Bh @ m @ basis) for m in rho.lattice]
    lifts = {q: polar_unitary(Bh @ m @ basis) for q, m in rho.lifts.items()}
    return UnitaryRep(rho.group, lattice, lifts, tol=rho.tol)


def decompose(rho: UnitaryRep, seed: int = 0):
    """Full decomposition into irreducibles with multiplicities.

    Returns a list of (irreducible UnitaryRep, multiplicity) with dimensions
    times multiplicities summing to n. Deterministic for a fixed seed.
    """
    require_verified(rho)
    if rho.n == 0:
        return []
    factors = []

    def split(r):
        blocks = invariant_blocks(r, seed=seed)
        if len(blocks) == 1:
            factors.append(r)
            return
        for b in blocks:
            split(subrepresentation(r, b))

    split(rho)
    grouped = []
    for f in factors:
        for entry in grouped:
            if entry[0].n == f.n and equivalent_irreducible(entry[0], f):
                entry[1] += 1
                break
        else:
            grouped.append([f, 1])
    assert sum(f.n * m for f, m in grouped) == rho.n
    return [(f, m) for f, m in grouped]


def equivalent_irreducible(rho: UnitaryRep, psi: UnitaryRep) -> bool:
    """Equivalence test for two irreducibles: a nonzero intertwiner space
    whose generator is invertible (by Schur it is then unitary up to scale)."""
    if rho.n != psi.n:
        return False
    space = intertwiners(rho, psi)
    if space.dim == 0:
        return False
    X = space.basis[0]
    s = np.linalg.svd(X, compute_uv=False)
    return s[-1] > 1e-6 * s[0]


def equivalent(rho: UnitaryRep, psi: UnitaryRep, seed: int = 0) -> bool:
    """Unitary equivalence via matched irreducible factors.

    Works for reducibles too: decompositions must pair up factor-by-factor
    with equal multiplicities. Character comparison on a word ball is not
    used; factor matching is finite and decisive.
    """
    require_verified(rho)
    require_verified(psi)
    if rho.group is not psi.group:
        raise GroupDataError("representations live over different groups")
    if rho.n != psi.n:
        raise GroupDataError("equivalence test requires equal dimensions")
    if rho.n == 0:
        return True
    dec_r = decompose(rho, seed=seed)
    dec_p = [[f, m] for f, m in decompose(psi, seed=seed)]
    for f, m in dec_r:
        for entry in dec_p:
            if entry[1] and entry[0].n == f.n and equivalent_irreducible(f, entry[0]):
                if entry[1] != m:
                    return False
                entry[1] = 0
                break
        else:
            return False
    return all(entry[1] == 0 for entry in dec_p)


def unitarize_intertwiner(rho: UnitaryRep, psi: UnitaryRep, P) -> np.ndarray:
    """Unitary factor of the polar decomposition of an intertwiner.

    For irreducibles the Hermitian factor is scalar, so the output still
    intertwines: U rho U^-1 = psi within tolerance.
    """
    P = np.asarray(P, dtype=complex)
    s = np.linalg.svd(P, compute_uv=False)
    if s.size == 0 or s[0] == 0 or s[-1] < 1e-10 * s[0]:
        raise ValueError("singular intertwiner rejected")
    return polar_unitary(P)


# ---------------------------------------------------------------------------
# JSON exchange format
# ---------------------------------------------------------------------------

def matrix_to_json(M) -> list:
    """Complex matrix as rows of [re, im] pairs (full double precision)."""
    M = np.asarray(M, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in M]


def matrix_from_json(data) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data],
                    dtype=complex) if data else np.zeros((0, 0), dtype=complex)


def rep_to_json(rho: UnitaryRep) -> dict:
    return {
        "group_ref": rho.group.to_definition(),
        "n": rho.n,
        "lattice_images": [matrix_to_json(m) for m in rho.lattice],
        "lift_images": {str(q): matrix_to_json(m) for q, m in sorted(rho.lifts.items())},
    }


def rep_from_json(data: dict, group: VAGroup | None = None,
                  tol=DEFAULT_TOL, check=True) -> UnitaryRep:
    from .groups import parse_group_definition
    if group is None:
        group = parse_group_definition(data["group_ref"])
    lattice = [matrix_from_json(m) for m in data["lattice_images"]]
    lifts = {int(q): matrix_from_json(m) for q, m in data["lift_images"].items()}
    return UnitaryRep(group, lattice, lifts, tol=tol, check=check)


def rep_dumps(rho: UnitaryRep) -> str:
    return json.dumps(rep_to_json(rho), sort_keys=True)
