"""The character torus Hom(A, S^1) of the translation lattice.

A character is a vector of angles in [0, 1) (fractions of a full turn): the
value on the i-th lattice basis vector is exp(2 pi i angles_i). Angles are
floats by default, with an exact-rational mode (fractions.Fraction) for
strata that are defined by equalities, e.g. the fixed points of the
point-group action where floating-point comparison would be meaningless.

The point group acts by precomposition with the inverse lattice action:
(q . chi)(a) = chi(phi(q)^-1 a), i.e. angles map by transpose(phi(q)^-1).
The action convention is validated by the action axiom in the test suite
rather than matched against any external convention.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactla import int_inverse, transpose
from .groups import GroupDataError, VAGroup
from .reps import (
    DEFAULT_TOL,
    ToleranceError,
    UnitaryRep,
    induce,
    require_verified,
)

ORBIT_TOL = 1e-10  # orbit deduplication in float mode


def _reduce(x):
    return x % 1


class TorusChar:
    """A character of the lattice, as a tuple of angles in [0, 1)."""

    def __init__(self, angles):
        vals = []
        for a in angles:
            if isinstance(a, Fraction) or isinstance(a, int):
                vals.append(Fraction(a) % 1)
            else:
                vals.append(float(a) % 1.0)
        self.angles = tuple(vals)

    @property
    def rank(self):
        return len(self.angles)

    @property
    def exact(self):
        return all(isinstance(a, Fraction) for a in self.angles)

    def value(self, v) -> complex:
        """Character value on a lattice vector."""
        phase = sum(float(a) * int(x) for a, x in zip(self.angles, v))
        return cmath.exp(2j * cmath.pi * phase)

    def as_floats(self):
        return tuple(float(a) for a in self.angles)

    def __eq__(self, other):
        return isinstance(other, TorusChar) and self.angles == other.angles

    def __hash__(self):
        return hash(self.angles)

    def __repr__(self):
        return f"TorusChar({self.angles})"

    def to_json(self):
        return [str(a) if isinstance(a, Fraction) else a for a in self.angles]


def char_from_strings(parts) -> TorusChar:
    """Parse angle entries: 'p/q' becomes exact, decimals become floats."""
    vals = []
    for p in parts:
        p = p.strip()
        if "/" in p:
            vals.append(Fraction(p))
        elif "." in p or "e" in p or "E" in p:
            vals.append(float(p))
        else:
            vals.append(Fraction(int(p)))
    return TorusChar(vals)


def angle_distance(a, b) -> float:
    d = abs(float(a) - float(b)) % 1.0
    return min(d, 1.0 - d)


def chars_close(c1: TorusChar, c2: TorusChar, tol=ORBIT_TOL) -> bool:
    if c1.exact and c2.exact:
        return c1.angles == c2.angles
    return all(angle_distance(a, b) <= tol for a, b in zip(c1.angles, c2.angles))


def act(G: VAGroup, q: int, chi: TorusChar) -> TorusChar:
    """The point-group action on characters: angles by transpose(phi(q)^-1)."""
    if not (0 <= q < G.Q.order):
        raise GroupDataError(f"point-group index {q} out of range")
    if chi.rank != G.rank:
        raise GroupDataError("character rank mismatch")
    M = transpose(int_inverse(G.action[q])) if G.rank else []
    new = [sum(M[i][j] * chi.angles[j] for j in range(G.rank)) for i in range(G.rank)]
    return TorusChar(new)


@dataclass
class CharOrbit:
    base: TorusChar
    points: list
    stabilizer: tuple  # point-group indices fixing the base character
    free: bool


def orbit(G: VAGroup, chi: TorusChar) -> CharOrbit:
    points = []
    stab = []
    for q in range(G.Q.order):
        moved = act(G, q, chi)
        if chars_close(moved, chi):
            stab.append(q)
        if not any(chars_close(moved, p) for p in points):
            points.append(moved)
    orb = CharOrbit(chi, points, tuple(stab), free=(len(stab) == 1))
    if len(points) * len(stab) != G.Q.order:
        raise ToleranceError("orbit/stabilizer counting inconsistent "
                             "(points too close to distinguish)")
    return orb


def is_free_orbit(G: VAGroup, chi: TorusChar) -> bool:
    return orbit(G, chi).free


# ---------------------------------------------------------------------------
# Spectra of restrictions to the lattice
# ---------------------------------------------------------------------------

def _split_unitary_blocks(mats, basis, tol):
    """Recursively refine an invariant subspace against commuting unitaries.

    mats: full-size commuting unitary matrices; basis: orthonormal columns.
    Returns a list of (angles tuple, orthonormal basis) joint eigenspaces.
    """
    if not mats:
        return [((), basis)]
    M = basis.conj().T @ mats[0] @ basis
    evals, evecs = np.linalg.eig(M)
    angles = np.angle(evals) / (2 * np.pi) % 1.0
    order = np.argsort(angles)
    out = []
    used = np.zeros(len(angles), dtype=bool)
    for idx in order:
        if used[idx]:
            continue
        cluster = [j for j in range(len(angles))
                   if not used[j] and angle_distance(angles[j], angles[idx]) < 1e-8]
        for j in cluster:
            used[j] = True
        vecs, _ = np.linalg.qr(evecs[:, cluster])
        sub_basis = basis @ vecs
        theta = float(np.median([angles[j] for j in cluster]))
        for rest_angles, rest_basis in _split_unitary_blocks(mats[1:], sub_basis, tol):
            out.append(((theta,) + rest_angles, rest_basis))
    return out


def restrict_to_A_spectrum(rho: UnitaryRep, tol=None):
    """Simultaneous diagonalization of the commuting lattice images.

    Returns a deterministically ordered list of
    (TorusChar, multiplicity, orthonormal basis of the isotypic subspace);
    multiplicities sum to n, and the reassembled block-diagonal matrices
    match every lattice image within tolerance.
    """
    require_verified(rho)
    tol = tol or rho.tol
    if rho.n == 0:
        return []
    pieces = _split_unitary_blocks(list(rho.lattice), np.eye(rho.n, dtype=complex), tol)
    # merge pieces whose characters coincide (clustering across branches)
    merged = []
    for angles, basis in pieces:
        chi = TorusChar(angles)
        for entry in merged:
            if chars_close(entry[0], chi, tol=1e-8):
                entry[1].append(basis)
                break
        else:
            merged.append([chi, [basis]])
    out = []
    for chi, bases in merged:
        B = np.hstack(bases)
        B, _ = np.linalg.qr(B)
        out.append((chi, B.shape[1], B))
    out.sort(key=lambda t: t[0].as_floats())
    # consistency: reconstruction must match the restriction to the lattice
    for i, m in enumerate(rho.lattice):
        approx = sum(chi.value([int(i == j) for j in range(rho.group.rank)]) * (B @ B.conj().T)
                     for chi, _, B in out)
        if np.linalg.norm(approx - m, 2) > 1e3 * max(tol.relation_tol, 1e-9):
            raise ToleranceError("lattice spectrum clustering failed to reconstruct "
                                 f"lattice image {i}")
    return out


def char_rep(sub_lattice, chi: TorusChar, tol=DEFAULT_TOL) -> UnitaryRep:
    """A character as a 1-dimensional representation of the lattice subgroup."""
    G = sub_lattice.group
    if G.Q.order != 1:
        raise GroupDataError("char_rep expects the lattice subgroup")
    mats = [np.array([[chi.value([int(i == j) for j in range(G.rank)])]])
            for i in range(G.rank)]
    return UnitaryRep(G, mats, {}, tol=tol)


def induced_char_rep(G: VAGroup, chi: TorusChar, tol=DEFAULT_TOL) -> UnitaryRep:
    """Induction of a lattice character, as explicit monomial matrices.

    Fast path that agrees entrywise with induce() from the lattice subgroup
    (same coset frame): block (i, j) at a group element x is the scalar
    chi(lattice part of g_i^-1 x g_j) when that element is in the lattice.
    """
    if chi.rank != G.rank:
        raise GroupDataError("character rank mismatch")
    reps = G.coset_representatives()
    m = len(reps)

    def image(x):
        out = np.zeros((m, m), dtype=complex)
        for j, gj in enumerate(reps):
            y = G.multiply(x, gj)
            for i, gi in enumerate(reps):
                z = G.multiply(G.inverse(gi), y)
                if z.q == 0:
                    out[i, j] = chi.value(z.v)
                    break
        return out

    lattice = [image(G.element(tuple(int(i == j) for j in range(G.rank)), 0))
               for i in range(G.rank)]
    lifts = {q: image(G.element((0,) * G.rank, q)) for q in range(1, G.Q.order)}
    return UnitaryRep(G, lattice, lifts, tol=tol)
