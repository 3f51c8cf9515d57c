"""Scalar-on-lattice representations and their projective descent.

When the restriction of a representation to the translation lattice is a
single character lambda times the identity, the lift images alone define a
projective representation of the finite point group Q: the lifts multiply
by U_q U_r = lambda(c(q, r)) U_(qr), with no further scalar defect. The
descent records the lift table, the central character, and the measured
unit-scalar cocycle relative to the lattice-corrected product (identically 1
for a representation that verifies; stored and checked rather than assumed).

Also here: enumeration of the 1-dimensional characters of Q, the character
twist action on scalar-on-lattice representations, sigma-regular class
counting, and brute-force cohomology testing for root-of-unity cocycles.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groups import FiniteGroupTable, GroupDataError, VAGroup
from .reps import (
    DEFAULT_TOL,
    ToleranceError,
    UnitaryRep,
    is_irreducible,
    opnorm,
    require_verified,
)
from .torus import TorusChar


class UnitaryCocycle:
    """A circle-valued 2-cocycle on a finite group as a q x q table.

    Normalized (sigma(1, .) = sigma(., 1) = 1); the cocycle identity
    sigma(q,r) sigma(qr,s) = sigma(r,s) sigma(q,rs) is checked on build.
    """

    def __init__(self, Q: FiniteGroupTable, table, tol: float = 1e-9):
        self.Q = Q
        self.table = np.asarray(table, dtype=complex)
        q = Q.order
        if self.table.shape != (q, q):
            raise GroupDataError("cocycle table must be q x q")
        if np.max(np.abs(np.abs(self.table) - 1)) > tol:
            raise GroupDataError("cocycle values must be unit scalars")
        if np.max(np.abs(self.table[0, :] - 1)) > tol or \
           np.max(np.abs(self.table[:, 0] - 1)) > tol:
            raise GroupDataError("cocycle is not normalized")
        for a in range(q):
            for b in range(q):
                for c in range(q):
                    lhs = self.table[a, b] * self.table[Q.mul(a, b), c]
                    rhs = self.table[b, c] * self.table[a, Q.mul(b, c)]
                    if abs(lhs - rhs) > 10 * tol:
                        raise GroupDataError("cocycle identity fails")

    def __call__(self, q, r):
        return self.table[q, r]

    def exponent_table(self, root_order: int, tol: float = 1e-8):
        """Integer exponents e with sigma(q,r) = exp(2 pi i e / N), or raise
        if any value is off the mu_N grid."""
        q = self.Q.order
        out = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(q):
                ang = (cmath.phase(self.table[a, b]) / (2 * cmath.pi)) % 1.0
                e = round(ang * root_order)
                if abs(ang * root_order - e) > root_order * tol:
                    raise GroupDataError(
                        f"cocycle value at ({a},{b}) is not a {root_order}-th root of unity")
                out[a][b] = e % root_order
        return out


def trivial_cocycle(Q: FiniteGroupTable) -> UnitaryCocycle:
    return UnitaryCocycle(Q, np.ones((Q.order, Q.order), dtype=complex))


def cocycle_of_projective_images(Q: FiniteGroupTable, images) -> UnitaryCocycle:
    """Measure sigma(q,r) = scalar of images[q] images[r] images[qr]^-1.

    The images must be unitary and projectively multiplicative; used to build
    reference cocycles (e.g. the sign table of the Pauli projective plane)."""
    q = Q.order
    table = np.ones((q, q), dtype=complex)
    for a in range(q):
        for b in range(q):
            M = images[a] @ images[b] @ images[Q.mul(a, b)].conj().T
            s = np.trace(M) / M.shape[0]
            if opnorm(M - s * np.eye(M.shape[0])) > 1e-8:
                raise GroupDataError("images are not projectively multiplicative")
            table[a, b] = s / abs(s)
    return UnitaryCocycle(Q, table)


# ---------------------------------------------------------------------------
# Scalar-on-lattice representations
# ---------------------------------------------------------------------------

def is_scalar_on_A(rho: UnitaryRep):
    """Whether every lattice image is a scalar; returns (flag, central char).

    The scalar character is read off the diagonal; the test is against
    equality_tol entrywise in operator norm.
    """
    require_verified(rho)
    if rho.n == 0:
        return True, TorusChar([0.0] * rho.group.rank)
    angles = []
    for m in rho.lattice:
        lam = np.trace(m) / rho.n
        if opnorm(m - lam * np.eye(rho.n)) > rho.tol.equality_tol:
            return False, None
        angles.append((cmath.phase(lam) / (2 * cmath.pi)) % 1.0)
    return True, TorusChar(angles)


@dataclass
class ProjectiveDescent:
    """Descent data of a scalar-on-lattice representation.

    lift[q] is the image of the coset representative (0, q); the stored
    cocycle is the measured unit scalar sigma(q, r) with
    lift(q) lift(r) = sigma(q, r) * lambda(c(q, r)) * lift(qr),
    i.e. the defect relative to the lattice-corrected product.
    """

    source: UnitaryRep
    central_char: TorusChar
    lift: dict
    cocycle: UnitaryCocycle


def descend(rho: UnitaryRep) -> ProjectiveDescent:
    """Descend a scalar-on-lattice representation to projective data."""
    flag, lam = is_scalar_on_A(rho)
    if not flag:
        raise GroupDataError("representation is not scalar on the lattice")
    G = rho.group
    n = rho.n
    lift = {0: np.eye(n, dtype=complex)}
    for q in range(1, G.Q.order):
        lift[q] = rho.lifts[q]
    table = np.ones((G.Q.order, G.Q.order), dtype=complex)
    for a in range(G.Q.order):
        for b in range(G.Q.order):
            corrected = lam.value(G.cocycle[a][b]) * lift[G.Q.mul(a, b)]
            M = lift[a] @ lift[b] @ corrected.conj().T
            s = np.trace(M) / n
            if opnorm(M - s * np.eye(n)) > 1e3 * rho.tol.relation_tol:
                raise ToleranceError(
                    f"lift product at ({a},{b}) is not scalar against the "
                    "lattice-corrected product")
            table[a, b] = s / abs(s)
    return ProjectiveDescent(rho, lam, lift, UnitaryCocycle(G.Q, table))


def irreducible_as_projective(d: ProjectiveDescent) -> bool:
    """The descent is irreducible exactly when its source is: every matrix of
    the source is a scalar multiple of a lift, so invariant subspaces agree."""
    return is_irreducible(d.source)


def descent_classes_equal(d1: ProjectiveDescent, d2: ProjectiveDescent,
                          tol: float = 1e-8) -> bool:
    """Equality of descents as maps to the projective unitary group,
    tested as equality-up-to-scalar of the lift tables."""
    if d1.source.n != d2.source.n:
        return False
    for q in d1.lift:
        A, B = d1.lift[q], d2.lift[q]
        s = np.trace(B.conj().T @ A) / d1.source.n
        if abs(abs(s) - 1) > 1e-6 or opnorm(A - s * B) > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# Characters of Q and the twist action
# ---------------------------------------------------------------------------

def q_characters(Q: FiniteGroupTable):
    """All 1-dimensional characters of a finite group, from its table.

    Exact enumeration: values are assigned on a greedy generating set as
    roots of unity of the generator orders and propagated through the
    Cayley graph; inconsistent assignments are discarded. Returns a
    deterministically ordered list of dicts q -> complex value, together
    with exact angle dicts q -> Fraction.
    """
    gens = []
    closure = {0}
    for g in range(Q.order):
        if g not in closure:
            gens.append(g)
            closure = set(Q.closure(set(gens)))
    choices = [[Fraction(j, Q.element_order(g)) for j in range(Q.element_order(g))]
               for g in gens]
    out = []
    for combo in itertools.product(*choices):
        angle = {0: Fraction(0)}
        ok = True
        frontier = [0]
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, a in zip(gens, combo):
                    y = Q.mul(x, g)
                    val = (angle[x] + a) % 1
                    if y in angle:
                        if angle[y] != val:
                            ok = False
                            break
                    else:
                        angle[y] = val
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if ok and len(angle) == Q.order:
            out.append(angle)
    out.sort(key=lambda ang: tuple(ang[q] for q in range(Q.order)))
    return [({q: cmath.exp(2j * cmath.pi * float(a)) for q, a in ang.items()}, ang)
            for ang in out]


def twist(chi_q, rho: UnitaryRep) -> UnitaryRep:
    """Scale each lift image by a character of Q; lattice images unchanged.

    chi_q: dict q -> unit complex value (a 1-dimensional character of Q).
    The restriction to the lattice and the descent class are unchanged.
    """
    require_verified(rho)
    lifts = {q: chi_q[q] * m for q, m in rho.lifts.items()}
    return UnitaryRep(rho.group, list(rho.lattice), lifts, tol=rho.tol)


# ---------------------------------------------------------------------------
# sigma-regular classes and cohomology of cocycles
# ---------------------------------------------------------------------------

def sigma_regular_count(Q: FiniteGroupTable, sigma: UnitaryCocycle,
                        tol: float = 1e-8) -> int:
    """Number of sigma-regular conjugacy classes of Q.

    An element g is sigma-regular when sigma(g, h) = sigma(h, g) for every h
    in its centralizer; regularity is constant on conjugacy classes, which is
    re-checked here (a mixed class is a tolerance error, not a guess). The
    count equals the number of irreducible sigma-projective representation
    classes.
    """
    count = 0
    for cls in Q.conjugacy_classes():
        flags = []
        for g in cls:
            flags.append(all(abs(sigma(g, h) - sigma(h, g)) <= tol
                             for h in Q.centralizer(g)))
        if len(set(flags)) != 1:
            raise ToleranceError(f"sigma-regularity not constant on class {cls}")
        if flags[0]:
            count += 1
    return count


def cohomologous(sigma: UnitaryCocycle, sigma2: UnitaryCocycle, root_order: int,
                 tol: float = 1e-8):
    """Brute-force cohomology test for cocycles valued in N-th roots of unity.

    Returns (flag, b) where b : Q -> mu_N exponents with
    sigma2 = sigma * coboundary(b), or (False, None). Exhaustive over
    normalized b (b(1) = 1), which is exact on the exponent grid; sized for
    |Q| <= 8 and N <= 8.
    """
    if sigma.Q is not sigma2.Q and sigma.Q.mult != sigma2.Q.mult:
        raise GroupDataError("cocycles live on different groups")
    Q = sigma.Q
    N = int(root_order)
    e1 = sigma.exponent_table(N, tol)
    e2 = sigma2.exponent_table(N, tol)
    q = Q.order
    for combo in itertools.product(range(N), repeat=q - 1):
        b = (0,) + combo
        if all((e1[x][y] + b[x] + b[y] - b[Q.mul(x, y)] - e2[x][y]) % N == 0
               for x in range(q) for y in range(q)):
            return True, list(b)
    return False, None
