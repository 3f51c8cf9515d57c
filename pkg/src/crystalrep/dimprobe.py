"""Tangent-space probes of representation varieties.

The relation checklist is linearized at a representation in right-logarithmic
coordinates: perturbing each generator image by rho(g) exp(t X_g) with X_g
skew-Hermitian, a relation word w = h_1 .. h_s (= identity at rho) gives the
linear constraint

    sum_j  +- Ad(rho(prefix_j)) X_(g_j) = 0,

with the prefix including position j for positive letters and excluding it
for inverse letters. The null space of the stacked constraints is the
cocycle space; subtracting the coboundary dimension (computed over the same
generator set, so any presentation dependence cancels) gives a local moduli
dimension that is compared against the lattice rank.

Rank decisions are integer decisions on singular values: a value falling
within a decade of the threshold is reported as ambiguous rather than
silently rounded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import GroupDataError
from .reps import (
    DEFAULT_TOL,
    ToleranceError,
    UnitaryRep,
    commutant,
    is_irreducible,
    require_verified,
)


def skew_hermitian_basis(n: int):
    """Real basis of the skew-Hermitian n x n matrices (dimension n^2)."""
    basis = []
    for i in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[i, i] = 1j
        basis.append(E)
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n), dtype=complex)
            E[i, j] = 1
            E[j, i] = -1
            basis.append(E)
            F = np.zeros((n, n), dtype=complex)
            F[i, j] = 1j
            F[j, i] = 1j
            basis.append(F)
    return basis


def skew_coords(X, basis) -> np.ndarray:
    """Real coordinates of a skew-Hermitian matrix in the standard basis."""
    n = X.shape[0]
    out = np.empty(len(basis))
    for idx, B in enumerate(basis):
        # the basis is orthogonal with norm^2 = 1 (diagonal) or 2 (offdiag)
        out[idx] = np.real(np.vdot(B, X)) / np.real(np.vdot(B, B))
    return out


def skew_from_coords(v, basis):
    return sum(c * B for c, B in zip(v, basis))


def _expand_word(word):
    letters = []
    for sym, e in word:
        step = 1 if e > 0 else -1
        letters.extend([(sym, step)] * abs(e))
    return letters


def _ad_matrix(U, basis):
    """Real matrix of X -> U X U^H on skew-Hermitian coordinates."""
    cols = [skew_coords(U @ B @ U.conj().T, basis) for B in basis]
    return np.column_stack(cols)


@dataclass
class CocycleSpace:
    dim: int
    variables: list                 # generator symbols, fixed order
    basis: np.ndarray               # rows: orthonormal null vectors
    singular_values: np.ndarray
    threshold: float
    ambiguous: bool                 # a singular value within a decade of the threshold

    def project_residual(self, coords: np.ndarray) -> float:
        """Distance from the given tangent coordinates to the space."""
        if self.basis.size == 0:
            return float(np.linalg.norm(coords))
        proj = self.basis.T @ (self.basis @ coords)
        return float(np.linalg.norm(coords - proj))


def cocycle_space(rho: UnitaryRep, tol=None) -> CocycleSpace:
    """Null space of the linearized relation checklist at rho."""
    require_verified(rho)
    tol = tol or rho.tol
    n = rho.n
    G = rho.group
    variables = G.generator_symbols()
    var_index = {v: i for i, v in enumerate(variables)}
    basis = skew_hermitian_basis(n)
    nsq = len(basis)
    rows = []
    for rel in G.relation_checklist():
        letters = _expand_word(rel.word)
        block = [np.zeros((nsq, nsq)) for _ in variables]
        prefix = np.eye(n, dtype=complex)
        for sym, step in letters:
            g = rho.image_of_symbol(sym)
            if step == 1:
                prefix = prefix @ g
                block[var_index[sym]] += _ad_matrix(prefix, basis)
            else:
                block[var_index[sym]] -= _ad_matrix(prefix, basis)
                prefix = prefix @ g.conj().T
        rows.append(np.hstack(block))
    M = np.vstack(rows) if rows else np.zeros((0, nsq * len(variables)))
    ncols = nsq * len(variables)
    if M.shape[0] == 0:
        return CocycleSpace(ncols, variables, np.eye(ncols), np.zeros(0), 0.0, False)
    _, s, Vh = np.linalg.svd(M)  # Vh has ncols rows (full_matrices)
    smax = s[0] if s.size else 0.0
    if smax < 1e-12:
        null_rank = ncols
        thresh = 0.0
        ambiguous = False
    else:
        thresh = tol.rank_tol * smax
        null_rank = int(np.sum(s < thresh)) + (ncols - len(s))
        ambiguous = bool(np.any((s > thresh / 10) & (s < thresh * 10)))
    null_basis = Vh[ncols - null_rank:].conj() if null_rank else np.zeros((0, ncols))
    return CocycleSpace(null_rank, variables, np.real(null_basis), s, thresh, ambiguous)


def cocycle_space_dim(rho: UnitaryRep, tol=None) -> int:
    space = cocycle_space(rho, tol=tol)
    if space.ambiguous:
        raise ToleranceError(
            "rank decision ambiguous: singular value within a decade of threshold")
    return space.dim


def coboundary_directions(rho: UnitaryRep):
    """Tangent coordinates of the conjugation orbit: for each skew-Hermitian
    Y, the direction X_g = Ad(rho(g)^-1) Y - Y over the generator set."""
    basis = skew_hermitian_basis(rho.n)
    variables = rho.group.generator_symbols()
    out = []
    for Y in basis:
        coords = []
        for sym in variables:
            g = rho.image_of_symbol(sym)
            X = g.conj().T @ Y @ g - Y
            coords.append(skew_coords(X, basis))
        out.append(np.hstack(coords))
    return np.array(out)


@dataclass
class LocalDimReport:
    z1_dim: int
    orbit_dim: int
    local_moduli_dim: int
    bound: int
    passed: bool

    def to_json(self):
        return {"z1_dim": self.z1_dim, "orbit_dim": self.orbit_dim,
                "local_moduli_dim": self.local_moduli_dim,
                "bound": self.bound, "pass": self.passed}


def local_moduli_dim(rho: UnitaryRep, tol=None) -> LocalDimReport:
    """Cocycle dimension minus orbit dimension, against the lattice rank.

    Only defined at irreducibles, where the skew-Hermitian commutant is the
    imaginary scalars and the conjugation orbit has dimension n^2 - 1.
    """
    require_verified(rho)
    if not is_irreducible(rho):
        raise GroupDataError("local moduli dimension expects an irreducible input")
    z1 = cocycle_space_dim(rho, tol=tol)
    comm_dim = commutant(rho, tol=tol).dim
    orbit_dim = rho.n ** 2 - comm_dim
    local = z1 - orbit_dim
    bound = rho.group.rank
    if local < 0:
        raise ToleranceError(f"negative local dimension {local}; rank decision broken")
    return LocalDimReport(z1, orbit_dim, local, bound, local <= bound)


# ---------------------------------------------------------------------------
# Finite-difference validation of the linearization
# ---------------------------------------------------------------------------

def curve_tangent_coords(rho: UnitaryRep, curve, h: float):
    """Central-difference tangent of a representation curve at t = 0, in
    right-logarithmic skew-Hermitian coordinates."""
    plus = curve(h)
    minus = curve(-h)
    basis = skew_hermitian_basis(rho.n)
    coords = []
    for sym in rho.group.generator_symbols():
        g0 = rho.image_of_symbol(sym)
        D = (plus.image_of_symbol(sym) - minus.image_of_symbol(sym)) / (2 * h)
        X = g0.conj().T @ D
        X = (X - X.conj().T) / 2  # drop the O(h^2) non-skew part
        coords.append(skew_coords(X, basis))
    return np.hstack(coords)


def finite_difference_crosscheck(rho: UnitaryRep, curve, h: float = 1e-5,
                                 richardson: bool = True):
    """Compare a curve's numerical derivative against the cocycle space.

    curve(t) must be a representation for every sampled t with curve(0) at
    rho. Returns a dict with the projection residual, the pass threshold
    10 h^2 scale, and an in_space flag; with richardson=True the residual is
    recomputed at h/2 as a truncation-order sanity check.
    """
    require_verified(rho)
    space = cocycle_space(rho)
    x = curve_tangent_coords(rho, curve, h)
    scale = max(1.0, float(np.linalg.norm(x)))
    residual = space.project_residual(x)
    threshold = 10 * h ** 2 * scale
    out = {"residual": residual, "threshold": threshold,
           "in_space": residual < threshold, "scale": scale}
    if richardson:
        x2 = curve_tangent_coords(rho, curve, h / 2)
        out["residual_half_step"] = space.project_residual(x2)
    return out
