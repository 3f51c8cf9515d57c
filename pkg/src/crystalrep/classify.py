"""The induced-or-scalar dichotomy for irreducible representations.

Every irreducible unitary representation of a finite extension of a lattice
either restricts to a single character times the identity on the lattice
(and descends to a projective representation of the point group), or is
equivalent to a representation induced from the proper intermediate subgroup
stabilizing one isotypic component of its lattice restriction. classify()
executes that alternative and verifies its claim before returning.

Also here: the explicit 2-dimensional representation family over the
inversion extensions, the 1-dimensional component count, and seeded random
sampling of the representation variety used by the dimension-bound check.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .groups import GroupDataError, VAGroup, make_gamma_k
from .projective import ProjectiveDescent, descend
from .reps import (
    DEFAULT_TOL,
    ToleranceError,
    UnitaryRep,
    decompose,
    equivalent,
    haar_unitary,
    induce,
    is_irreducible,
    opnorm,
    polar_unitary,
    require_verified,
)
from .torus import TorusChar, act, chars_close, orbit, restrict_to_A_spectrum


@dataclass
class Classification:
    """Outcome of the dichotomy: tag is 'induced' or 'scalar'.

    induced: subgroup (IntermediateSubgroup), rho_h (representation of it),
    and induced_rep, the verification witness equivalent to the input.
    scalar: the projective descent of the input.
    """

    tag: str
    subgroup: object = None
    rho_h: UnitaryRep = None
    induced_rep: UnitaryRep = None
    descent: ProjectiveDescent = None

    def to_json(self):
        from .reps import rep_to_json
        if self.tag == "scalar":
            return {"tag": "scalar",
                    "central_char": self.descent.central_char.to_json()}
        return {"tag": "induced",
                "subgroup_q_elements": list(self.subgroup.q_elements),
                "rho_h": rep_to_json(self.rho_h)}


def classify(rho: UnitaryRep, seed: int = 0) -> Classification:
    """Run the dichotomy on an irreducible representation.

    The lattice spectrum either has a single character (scalar case) or
    several; in the latter case the first character in deterministic order
    is taken, its stabilizer preimage is the inducing subgroup, and the
    compression of rho to the isotypic subspace is the induced-from data.
    The claimed equivalence is verified, never assumed.
    """
    require_verified(rho)
    if not is_irreducible(rho):
        raise GroupDataError("classify expects an irreducible representation")
    G = rho.group
    spectrum = restrict_to_A_spectrum(rho)
    if len(spectrum) == 1:
        return Classification(tag="scalar", descent=descend(rho))

    chi, mult, basis = spectrum[0]  # deterministic order: sorted by angles
    stab = tuple(q for q in range(G.Q.order) if chars_close(act(G, q, chi), chi))
    sub = G.intermediate_subgroup(G.Q.closure(stab))
    if len(sub.q_elements) != len(stab):
        raise ToleranceError("character stabilizer failed to close as a subgroup")
    Bh = basis.conj().T
    lattice = [polar_unitary(Bh @ m @ basis) for m in rho.lattice]
    lifts = {}
    for i, q in enumerate(sub.q_elements):
        if i == 0:
            continue
        compressed = Bh @ rho.lifts[q] @ basis
        # the lift of a stabilizer element preserves the isotypic subspace
        if opnorm(rho.lifts[q] @ basis - basis @ compressed) > 1e3 * rho.tol.relation_tol:
            raise ToleranceError("stabilizer lift does not preserve the isotypic subspace")
        lifts[i] = polar_unitary(compressed)
    rho_h = UnitaryRep(sub.group, lattice, lifts, tol=rho.tol)
    witness = induce(sub, rho_h)
    if not equivalent(rho, witness, seed=seed):
        raise ToleranceError("induced classification failed its equivalence check")
    return Classification(tag="induced", subgroup=sub, rho_h=rho_h,
                          induced_rep=witness)


# ---------------------------------------------------------------------------
# The explicit family over the inversion extensions
# ---------------------------------------------------------------------------

def family_rep_gamma_k(k: int, zs, alpha, group: VAGroup | None = None,
                       tol=DEFAULT_TOL) -> UnitaryRep:
    """The 2-dimensional family over make_gamma_k(k).

    t_i acts by diag(z_i, z_i^-1), the squared lift generator by alpha I,
    and the lift by [[0, alpha], [1, 0]]. Induced from the lattice character
    with angles (arg z_1, .., arg z_k, arg alpha)/2pi; irreducible exactly
    when some z_i is not +-1.
    """
    zs = [complex(z) for z in zs]
    alpha = complex(alpha)
    if len(zs) != k:
        raise GroupDataError(f"need {k} unit scalars, got {len(zs)}")
    for x in zs + [alpha]:
        if abs(abs(x) - 1) > 1e-9:
            raise GroupDataError(f"non-unit parameter {x}")
    G = group if group is not None else make_gamma_k(k)
    lattice = [np.diag([z, 1 / z]).astype(complex) for z in zs]
    lattice.append(alpha * np.eye(2, dtype=complex))
    lift = np.array([[0, alpha], [1, 0]], dtype=complex)
    return UnitaryRep(G, lattice, {1: lift}, tol=tol)


def enumerate_one_dim(G: VAGroup):
    """Torus rank and component count of the 1-dimensional representations,
    read off the abelianization: rank = free rank, components = product of
    torsion orders."""
    ab = G.abelianization()
    comps = 1
    for t in ab.torsion:
        comps *= t
    return ab.free_rank, comps


# ---------------------------------------------------------------------------
# Random points of the representation variety
# ---------------------------------------------------------------------------

def _orbit_closed_characters(G: VAGroup, n: int, rng):
    """A multiset of lattice characters of total size n, closed under the
    point-group action (so that a compatible set of lifts exists)."""
    chars = []
    while len(chars) < n:
        room = n - len(chars)
        chi = TorusChar(rng.random(G.rank))
        pts = orbit(G, chi).points
        if len(pts) <= room:
            chars.extend(pts)
        else:
            # fill the remainder with a fixed character (zero is always fixed)
            chars.extend([TorusChar([0.0] * G.rank)] * room)
    return chars


def random_representation(G: VAGroup, n: int, seed: int,
                          tol=DEFAULT_TOL, max_sweeps: int = 500):
    """Seeded random point of Hom(G, U(n)) by alternating projection.

    The lattice images are fixed as a random frame conjugating an
    orbit-closed character multiset; random unitaries for the lifts are then
    alternately projected onto the linear twisted-intertwining constraints
    and unitarized, with the multiplication relations enforced by averaging
    sweeps, until the relation checklist residual passes tolerance.

    Returns (rep_or_None, converged, residual); non-convergence is a
    reported outcome, not an error.
    """
    rng = np.random.default_rng(seed)
    if n == 0:
        return UnitaryRep(G, [np.zeros((0, 0))] * G.rank,
                          {q: np.zeros((0, 0)) for q in range(1, G.Q.order)},
                          tol=tol), True, 0.0
    chars = _orbit_closed_characters(G, n, rng)
    W = haar_unitary(n, rng)
    lattice = []
    for i in range(G.rank):
        e = [int(i == j) for j in range(G.rank)]
        D = np.diag([chi.value(e) for chi in chars])
        lattice.append(W @ D @ W.conj().T)

    # linear space of candidates for each lift: X A_i = A^(phi(q) e_i) X
    from .reps import intertwiners
    spaces = {}
    lattice_group = G.lattice_subgroup().group
    abelian = UnitaryRep(lattice_group, lattice, {}, tol=tol)
    for q in range(1, G.Q.order):
        twisted = []
        for i in range(G.rank):
            v = [int(i == j) for j in range(G.rank)]
            w = np.array(G.action[q]) @ np.array(v)
            twisted.append(abelian.lattice_image([int(x) for x in w]))
        tw_rep = UnitaryRep(lattice_group, twisted, {}, tol=tol, check=False)
        spaces[q] = intertwiners(abelian, tw_rep, tol=tol)
        if spaces[q].dim == 0:
            return None, False, float("inf")

    def project(q, M):
        coeffs = [np.vdot(b, M) for b in spaces[q].basis]
        return sum(c * b for c, b in zip(coeffs, spaces[q].basis))

    lifts = {}
    for q in range(1, G.Q.order):
        X = project(q, haar_unitary(n, rng))
        s = np.linalg.svd(X, compute_uv=False)
        if s[-1] < 1e-8:
            X = X + 0.1 * project(q, haar_unitary(n, rng))
            s = np.linalg.svd(X, compute_uv=False)
            if s[-1] < 1e-8:
                return None, False, float("inf")
        lifts[q] = polar_unitary(X)

    def residual():
        rep = UnitaryRep(G, lattice, lifts, tol=tol, check=False)
        return rep, rep.report.max_relation_residual

    lam = {(q, r): abelian.lattice_image(G.cocycle[q][r])
           for q in range(G.Q.order) for r in range(G.Q.order)}
    rep, res = residual()
    for _ in range(max_sweeps):
        if res <= tol.relation_tol:
            break
        for q in range(1, G.Q.order):
            for r in range(1, G.Q.order):
                qr = G.Q.mul(q, r)
                if qr == 0:
                    # U_q U_r = A^c: correct U_q toward A^c U_r^-1
                    target = lam[(q, r)] @ lifts[r].conj().T
                    lifts[q] = polar_unitary(project(q, (lifts[q] + target) / 2))
                else:
                    target = lam[(q, r)].conj().T @ lifts[q] @ lifts[r]
                    lifts[qr] = polar_unitary(project(qr, (lifts[qr] + target) / 2))
        rep, res = residual()
    converged = res <= tol.relation_tol and rep.report.max_unitarity_residual <= tol.unitarity_tol
    return (rep if converged else None), converged, res


def max_irr_dim_check(G: VAGroup, sample_count: int, seed: int,
                      dims=None, tol=DEFAULT_TOL):
    """Decompose seeded random representations and record the irreducible
    factor dimensions against the lattice-index bound.

    Samples mix alternating-projection points of the variety with induced
    lattice characters; projection non-convergence is counted in the report,
    not fatal. The report's `pass` flag demands every factor dimension stay
    at or below the index of the lattice.
    """
    bound = G.Q.order  # index of the translation lattice
    rng = np.random.default_rng(seed)
    dims = dims or [1, bound, bound + 1, 2 * bound]
    histogram = {}
    nonconverged = 0
    used = 0
    attempt = 0
    from .torus import induced_char_rep
    while used < sample_count and attempt < 20 * sample_count:
        attempt += 1
        kind = attempt % 3
        if kind == 0:
            chi = TorusChar(rng.random(G.rank))
            rep = induced_char_rep(G, chi, tol=tol)
        else:
            n = int(rng.choice(dims))
            rep, ok, _ = random_representation(G, n, seed=seed + 1000 * attempt, tol=tol)
            if not ok:
                nonconverged += 1
                continue
        used += 1
        for f, m in decompose(rep, seed=seed + attempt):
            histogram[f.n] = histogram.get(f.n, 0) + m
    max_dim = max(histogram) if histogram else 0
    return {
        "bound": bound,
        "samples": used,
        "nonconverged": nonconverged,
        "dimension_histogram": dict(sorted(histogram.items())),
        "max_factor_dim": max_dim,
        "pass": max_dim <= bound and used >= sample_count,
    }
