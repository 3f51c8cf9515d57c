"""Virtually free-abelian groups presented as extension data.

A group here is an extension  1 -> Z^k -> G -> Q -> 1  of a finite point
group Q by a lattice, stored as:

  * the multiplication table of Q (index 0 is the identity),
  * the conjugation action of Q on the lattice (one integer k x k matrix
    per element of Q), and
  * a normalized lattice-valued 2-cocycle c : Q x Q -> Z^k recording how
    the chosen lifts of Q multiply.

Every element has the normal form (v, q) with v in Z^k and q an index into
Q, multiplying by

    (v, q) * (w, r) = (v + phi(q) w + c(q, r), q r).

Groups are never handled through generic finite presentations; the normal
form makes all arithmetic exact and total.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import exactla
from .exactla import AbelianInvariants, cokernel_invariants, int_inverse, matvec


class GroupDataError(ValueError):
    """Raised when extension data fails validation."""


class FiniteGroupTable:
    """A finite group as a multiplication table on indices 0..order-1.

    Index 0 must be a two-sided identity; associativity and invertibility are
    checked on construction (the groups in scope have order <= 24, so the
    cubic check is cheap).
    """

    def __init__(self, mult):
        q = len(mult)
        if any(len(row) != q for row in mult):
            raise GroupDataError("multiplication table is not square")
        self.order = q
        self.mult = [list(map(int, row)) for row in mult]
        for i in range(q):
            if self.mult[0][i] != i or self.mult[i][0] != i:
                raise GroupDataError("index 0 is not a two-sided identity")
        for row in self.mult:
            if sorted(row) != list(range(q)):
                raise GroupDataError("multiplication table rows must be permutations")
        for a in range(q):
            for b in range(q):
                for c in range(q):
                    if self.mult[self.mult[a][b]][c] != self.mult[a][self.mult[b][c]]:
                        raise GroupDataError("multiplication table is not associative")
        self.inv = [0] * q
        for a in range(q):
            for b in range(q):
                if self.mult[a][b] == 0:
                    self.inv[a] = b
                    break
            else:
                raise GroupDataError(f"element {a} has no inverse")

    def mul(self, a, b):
        return self.mult[a][b]

    def conjugate(self, g, h):
        """g h g^-1."""
        return self.mult[self.mult[g][h]][self.inv[g]]

    def element_order(self, g):
        n, x = 1, g
        while x != 0:
            x = self.mult[x][g]
            n += 1
        return n

    def centralizer(self, g):
        return [h for h in range(self.order) if self.mult[g][h] == self.mult[h][g]]

    def conjugacy_classes(self):
        seen = set()
        classes = []
        for g in range(self.order):
            if g in seen:
                continue
            cls = sorted({self.conjugate(h, g) for h in range(self.order)})
            seen.update(cls)
            classes.append(cls)
        return classes

    def closure(self, gens):
        """Subgroup generated by the given element indices."""
        elems = {0}
        frontier = set(gens) | {0}
        while frontier:
            new = set()
            for a in frontier:
                for b in list(elems) + list(frontier):
                    new.add(self.mult[a][b])
                    new.add(self.mult[b][a])
            elems |= frontier
            new -= elems
            frontier = new
        return tuple(sorted(elems))

    def subgroups(self):
        """All subgroups, as sorted tuples of element indices.

        Built by repeatedly extending known subgroups by one generator;
        every subgroup is reachable this way.
        """
        found = {(0,)}
        frontier = {(0,)}
        while frontier:
            new = set()
            for sub in frontier:
                for g in range(self.order):
                    if g not in sub:
                        ext = self.closure(set(sub) | {g})
                        if ext not in found:
                            new.add(ext)
            found |= new
            frontier = new
        return sorted(found, key=lambda s: (len(s), s))


def cyclic_table(n):
    return FiniteGroupTable([[(i + j) % n for j in range(n)] for i in range(n)])


@dataclass(frozen=True)
class Element:
    """Normal form (v, q): lattice part v in Z^k, point-group index q."""

    v: tuple
    q: int

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))


class VAGroup:
    """A virtually-Z^k group from extension data; immutable after validation."""

    def __init__(self, rank, point_group, action, cocycle, name=None):
        self.rank = int(rank)
        if self.rank < 0:
            raise GroupDataError("negative lattice rank")
        self.Q = point_group if isinstance(point_group, FiniteGroupTable) \
            else FiniteGroupTable(point_group)
        q = self.Q.order
        self.action = [[list(map(int, row)) for row in m] for m in action]
        if len(self.action) != q:
            raise GroupDataError("need one action matrix per point-group element")
        for m in self.action:
            r, c = exactla.shape(m) if m else (0, 0)
            if (r, c) != (self.rank, self.rank):
                raise GroupDataError("action matrices must be rank x rank")
            if self.rank and exactla.int_det(m) not in (1, -1):
                raise GroupDataError("action matrices must be invertible over Z")
        if self.action and self.action[0] != exactla.identity(self.rank):
            raise GroupDataError("identity must act trivially")
        for a in range(q):
            for b in range(q):
                lhs = exactla.matmul(self.action[a], self.action[b])
                if lhs != self.action[self.Q.mul(a, b)]:
                    raise GroupDataError("action is not a homomorphism")
        self._action_inv_t = [exactla.transpose(int_inverse(m)) if self.rank else []
                              for m in self.action]

        # cocycle: full q x q table of lattice vectors, normalized
        self.cocycle = [[tuple(int(x) for x in cocycle[a][b]) for b in range(q)]
                        for a in range(q)]
        for a in range(q):
            if any(self.cocycle[0][a]) or any(self.cocycle[a][0]):
                raise GroupDataError("cocycle is not normalized: c(1,.)=c(.,1)=0")
            for b in range(q):
                if len(self.cocycle[a][b]) != self.rank:
                    raise GroupDataError("cocycle vectors must have lattice rank")
        for a in range(q):
            for b in range(q):
                for c in range(q):
                    # phi(a) c(b,c) + c(a, bc) == c(a,b) + c(ab, c)
                    lhs = [x + y for x, y in zip(
                        matvec(self.action[a], list(self.cocycle[b][c])),
                        self.cocycle[a][self.Q.mul(b, c)])]
                    rhs = [x + y for x, y in zip(
                        self.cocycle[a][b], self.cocycle[self.Q.mul(a, b)][c])]
                    if lhs != rhs:
                        raise GroupDataError("cocycle identity fails")

        self.action_faithful = all(
            self.action[a] != exactla.identity(self.rank)
            for a in range(1, q))
        self.name = name

    # -- elementary arithmetic ------------------------------------------------

    def identity(self):
        return Element((0,) * self.rank, 0)

    def element(self, v, q=0):
        v = tuple(int(x) for x in v)
        if len(v) != self.rank:
            raise GroupDataError(f"lattice part has length {len(v)}, rank is {self.rank}")
        if not (0 <= q < self.Q.order):
            raise GroupDataError(f"point-group index {q} out of range")
        return Element(v, q)

    def multiply(self, a: Element, b: Element) -> Element:
        if len(a.v) != self.rank or len(b.v) != self.rank:
            raise GroupDataError("element lattice dimension mismatch")
        w = matvec(self.action[a.q], list(b.v))
        c = self.cocycle[a.q][b.q]
        return Element(tuple(x + y + z for x, y, z in zip(a.v, w, c)),
                       self.Q.mul(a.q, b.q))

    def inverse(self, a: Element) -> Element:
        if len(a.v) != self.rank:
            raise GroupDataError("element lattice dimension mismatch")
        qi = self.Q.inv[a.q]
        # solve (v,q)(w,qi) = (0,0):  v + phi(q) w + c(q, qi) = 0
        rhs = [-(x + y) for x, y in zip(a.v, self.cocycle[a.q][qi])]
        w = matvec(int_inverse(self.action[a.q]), rhs) if self.rank else []
        return Element(tuple(w), qi)

    def power(self, a: Element, n: int) -> Element:
        out = self.identity()
        x = a if n >= 0 else self.inverse(a)
        for _ in range(abs(n)):
            out = self.multiply(out, x)
        return out

    # -- subgroups between the lattice and the whole group --------------------

    def intermediate_subgroup(self, q_elements):
        """The preimage of a subgroup of Q, as its own VAGroup plus index maps."""
        elems = tuple(sorted(q_elements))
        if 0 not in elems:
            raise GroupDataError("subgroup must contain the identity")
        pos = {g: i for i, g in enumerate(elems)}
        for a in elems:
            for b in elems:
                if self.Q.mul(a, b) not in pos:
                    raise GroupDataError(f"{q_elements} is not closed under multiplication")
        mult = [[pos[self.Q.mul(a, b)] for b in elems] for a in elems]
        action = [self.action[g] for g in elems]
        cocycle = [[self.cocycle[a][b] for b in elems] for a in elems]
        sub = VAGroup(self.rank, mult, action, cocycle)
        return IntermediateSubgroup(self, sub, elems)

    def intermediate_subgroups(self):
        return [self.intermediate_subgroup(s) for s in self.Q.subgroups()]

    def lattice_subgroup(self):
        return self.intermediate_subgroup((0,))

    def coset_representatives(self, H=None):
        """One element (0, q) per left coset of the subgroup, ordered by q.

        With H omitted this is relative to the lattice: one representative per
        point-group element, in index order. The fixed order makes induced
        matrices bit-reproducible.
        """
        members = set(H.q_elements) if H is not None else {0}
        reps = []
        seen = set()
        for q in range(self.Q.order):
            if q in seen:
                continue
            reps.append(Element((0,) * self.rank, q))
            seen.update(self.Q.mul(q, h) for h in members)
        return reps

    # -- relations -------------------------------------------------------------

    def relation_checklist(self):
        """The finite list of relation words that pins down a homomorphism.

        Generator symbols are ('A', i) for the lattice basis and ('U', q) for
        the lift of point-group element q (q != 0; the identity lift is I).
        Each relation is a word, a list of (symbol, exponent) letters, that
        must evaluate to the identity:

          (i)   [A_i, A_j] = 1                      for i < j
          (ii)  U_q A_i U_q^-1 = A^(phi(q) e_i)     for q != 0
          (iii) U_q U_r = A^(c(q,r)) U_(qr)         for q, r != 0

        An assignment of unitaries satisfying every item extends uniquely to
        a homomorphism out of the group.
        """
        rels = []
        k = self.rank
        for i in range(k):
            for j in range(i + 1, k):
                rels.append(Relation(
                    "commutator", f"[A{i + 1},A{j + 1}]",
                    [(("A", i), 1), (("A", j), 1), (("A", i), -1), (("A", j), -1)]))
        for q in range(1, self.Q.order):
            for i in range(k):
                v = matvec(self.action[q], [int(i == j) for j in range(k)])
                word = [(("U", q), 1), (("A", i), 1), (("U", q), -1)]
                word += [(("A", j), -v[j]) for j in range(k) if v[j]]
                rels.append(Relation("action", f"U{q} A{i + 1} U{q}^-1 A^-phi", word))
        for q in range(1, self.Q.order):
            for r in range(1, self.Q.order):
                qr = self.Q.mul(q, r)
                c = self.cocycle[q][r]
                word = [(("U", q), 1), (("U", r), 1)]
                if qr != 0:
                    word.append((("U", qr), -1))
                word += [(("A", j), -c[j]) for j in range(k) if c[j]]
                rels.append(Relation("cocycle", f"U{q} U{r} = A^c U{qr}", word))
        return rels

    def generator_symbols(self):
        return [("A", i) for i in range(self.rank)] + \
               [("U", q) for q in range(1, self.Q.order)]

    def abelianization(self) -> AbelianInvariants:
        """Invariants of the abelianized group.

        The relation checklist is abelianized into exponent-sum columns over
        the generators {lattice basis} + {one generator per nontrivial
        point-group element}; relations (iii) make the redundant lift
        generators explicit, so the cokernel is the abelianization.
        """
        gens = self.generator_symbols()
        index = {g: i for i, g in enumerate(gens)}
        cols = []
        for rel in self.relation_checklist():
            col = [0] * len(gens)
            for sym, e in rel.word:
                col[index[sym]] += e
            cols.append(col)
        M = exactla.columns_matrix(cols, nrows=len(gens))
        return cokernel_invariants(M, len(gens))

    # -- serialization -----------------------------------------------------------

    def to_definition(self):
        """Group-definition dict; see parse_group_definition for the grammar."""
        sparse = []
        for a in range(self.Q.order):
            for b in range(self.Q.order):
                if any(self.cocycle[a][b]):
                    sparse.append([a, b, list(self.cocycle[a][b])])
        return {
            "rank": self.rank,
            "q_order": self.Q.order,
            "mult_table": [x for row in self.Q.mult for x in row],
            "action": [m for m in self.action],
            "cocycle": sparse,
        }


@dataclass
class Relation:
    kind: str
    label: str
    word: list  # [(symbol, exponent), ...], symbol = ('A', i) or ('U', q)


class IntermediateSubgroup:
    """A subgroup between the lattice and the whole group.

    Carries the subgroup's own extension data plus the element maps between
    parent (v, q) coordinates and subgroup coordinates.
    """

    def __init__(self, parent, group, q_elements):
        self.parent = parent
        self.group = group
        self.q_elements = q_elements
        self._pos = {g: i for i, g in enumerate(q_elements)}
        self.index = parent.Q.order // len(q_elements)

    def contains(self, x: Element) -> bool:
        return x.q in self._pos

    def to_sub(self, x: Element) -> Element:
        if x.q not in self._pos:
            raise GroupDataError("element is not in the subgroup")
        return Element(x.v, self._pos[x.q])

    def from_sub(self, x: Element) -> Element:
        return Element(x.v, self.q_elements[x.q])

    def is_whole_group(self):
        return len(self.q_elements) == self.parent.Q.order

    def is_lattice(self):
        return len(self.q_elements) == 1


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def make_gamma_k(k: int) -> VAGroup:
    """The rank-k inversion family: Z^k x| Z with the extra generator a
    acting on Z^k by negation.

    Since a^2 acts trivially, the translation lattice is generated by
    t_1..t_k and a^2, so the extension data has lattice rank k+1, point
    group C2 = {1, g}, g acting by diag(-1,..,-1, 1), and cocycle
    c(g,g) = e_{k+1} (the lift of g squares to the lattice generator a^2).

    k = 1 is the Klein bottle group.
    """
    if k < 1:
        raise GroupDataError("k must be >= 1")
    rank = k + 1
    eye = exactla.identity(rank)
    T = [[(-1 if i == j and i < k else (1 if i == j else 0)) for j in range(rank)]
         for i in range(rank)]
    zero = (0,) * rank
    e_last = tuple(0 if i < k else 1 for i in range(rank))
    cocycle = [[zero, zero], [zero, e_last]]
    return VAGroup(rank, cyclic_table(2), [eye, T], cocycle, name=f"gamma_{k}")


def make_semidirect(point_group, action_gens_full) -> VAGroup:
    """Split extension Z^k x| Q with the given action table (zero cocycle)."""
    q = point_group.order if isinstance(point_group, FiniteGroupTable) else len(point_group)
    rank = len(action_gens_full[0])
    zero = (0,) * rank
    cocycle = [[zero] * q for _ in range(q)]
    return VAGroup(rank, point_group, action_gens_full, cocycle)


def make_free_abelian(k: int) -> VAGroup:
    """Z^k as a degenerate extension (trivial point group)."""
    zero = (0,) * k
    return VAGroup(k, [[0]], [exactla.identity(k)], [[zero]], name=f"Z^{k}")


def make_z2_rot_c4() -> VAGroup:
    """Z^2 x| C4 with the generator acting by a quarter turn."""
    R = [[0, -1], [1, 0]]
    mats = [exactla.identity(2), R]
    for _ in range(2):
        mats.append(exactla.matmul(mats[-1], R))
    return make_semidirect(cyclic_table(4), mats)


# ---------------------------------------------------------------------------
# Text exchange format
# ---------------------------------------------------------------------------

def parse_group_definition(data: dict) -> VAGroup:
    """Build a group from a definition dict.

    Keys (all required except cocycle):
      rank        lattice rank k, a nonnegative integer
      q_order     order of the point group
      mult_table  row-major list of q_order^2 element indices, identity = 0
      action      list of q_order k x k integer matrices (nested lists)
      cocycle     sparse list of [q, r, vector] triples; omitted pairs are 0
    """
    try:
        rank = int(data["rank"])
        q = int(data["q_order"])
        flat = [int(x) for x in data["mult_table"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupDataError(f"bad group definition: {exc}") from exc
    if len(flat) != q * q:
        raise GroupDataError(f"mult_table must have q_order^2 = {q * q} entries")
    mult = [flat[i * q:(i + 1) * q] for i in range(q)]
    action = data.get("action")
    if action is None or len(action) != q:
        raise GroupDataError("action must list one matrix per point-group element")
    zero = (0,) * rank
    cocycle = [[zero] * q for _ in range(q)]
    for entry in data.get("cocycle", []):
        try:
            a, b, vec = entry
        except (TypeError, ValueError) as exc:
            raise GroupDataError("cocycle entries must be [q, r, vector] triples") from exc
        if not (0 <= a < q and 0 <= b < q):
            raise GroupDataError("cocycle indices out of range")
        cocycle[a][b] = tuple(int(x) for x in vec)
    return VAGroup(rank, mult, action, cocycle)


def word_ball(G: VAGroup, radius: int):
    """All elements expressible as products of at most `radius` standard
    generators or inverses (lattice basis and point-group lifts)."""
    gens = []
    for i in range(G.rank):
        e = tuple(int(i == j) for j in range(G.rank))
        gens.append(G.element(e, 0))
    for q in range(1, G.Q.order):
        gens.append(G.element((0,) * G.rank, q))
    gens = gens + [G.inverse(g) for g in gens]
    ball = {G.identity()}
    frontier = {G.identity()}
    for _ in range(radius):
        nxt = set()
        for x in frontier:
            for g in gens:
                y = G.multiply(x, g)
                if y not in ball:
                    nxt.add(y)
        ball |= nxt
        frontier = nxt
    return sorted(ball, key=lambda e: (e.q, e.v))
