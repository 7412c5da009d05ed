"""The double Burnside ring of S3: bisets, tensor products, structure constants.

Conventions, fixed once and used everywhere:

  * G = S3 acts on {0,1,2}; a = (1,2) and b = (1,2,3) in 1-based cycle notation.
  * An (S3,S3)-biset is a left (S3xS3)-set via (h,g)x = h.x.g^-1, so a left
    (S3xS3)-set Y becomes a biset through h.y.g := (h, g^-1)y.
  * The basis of the ring is the 22 transitive bisets (S3xS3)/U, one per
    conjugacy class of subgroups U <= S3xS3, in the fixed order of
    BASIS_LABELS, with point sets the left cosets xU under translation.
  * The product [M][N] = [M (x)_G N]: orbits of the middle action
    g.(m,n) = (m g^-1, g n), carrying (h,g)[m,n] = [(h,1)m, (1,g)n].
  * The identity element is the class of the regular biset S3, which is
    (S3xS3)/Delta(S3), index IDENTITY_INDEX in the basis.

The structure constants are computed twice: once by brute-force orbit
enumeration of actual tensor products (the oracle), and once by the
double-coset formula

  [(GxG)/U] . [(GxG)/V]
      = sum over p2(U)\\G/p1(V), g a representative, of
        [(GxG)/(U * (g,1)-conjugate of V)]

where U * W = {(a,c) : exists b with (a,b) in U and (b,c) in W}.  The two
tables must agree cell for cell; construction fails otherwise.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .linalg import format_fraction, is_p_integral, parse_fraction
from .perms import Perm, PermGroup

__all__ = [
    "S3",
    "S3_A",
    "S3_B",
    "PAIRS",
    "BASIS_LABELS",
    "IDENTITY_INDEX",
    "RINGS",
    "TableMismatch",
    "subgroup_reps",
    "subgroup_rep",
    "biset_sizes",
    "transitive_biset",
    "tensor",
    "decompose",
    "classify_subgroup",
    "oracle_table",
    "mackey_table",
    "structure_table",
    "left_mult_matrices",
    "multiply_vectors",
    "BurnsideElement",
    "k1",
    "k2",
]

S3_ID = Perm.identity(3)
S3_A = Perm((1, 0, 2))
S3_B = Perm((1, 2, 0))
S3 = PermGroup(3, [S3_A, S3_B])

PAIR_ID = (S3_ID, S3_ID)
PAIRS = tuple(itertools.product(S3.elements, S3.elements))


def pair_mul(p, q):
    return (p[0] * q[0], p[1] * q[1])


def pair_inv(p):
    return (p[0].inverse(), p[1].inverse())


def pair_conj(g, u):
    return (g[0] * u[0] * g[0].inverse(), g[1] * u[1] * g[1].inverse())


def _close_pairs(gens):
    elems = {PAIR_ID}
    frontier = [PAIR_ID]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = pair_mul(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


# Basis order and the generators of one representative subgroup per class.
# 1 denotes the identity of S3; entries are (left, right) components.
_E, _A, _B = S3_ID, S3_A, S3_B
_SUBGROUP_SPECS = (
    ("H_{0,0}", ()),
    ("H_{1,0}", ((_A, _E),)),
    ("H_{0,1}", ((_E, _A),)),
    ("H^D_1", ((_A, _A),)),
    ("H_{4,0}", ((_B, _E),)),
    ("H_{0,4}", ((_E, _B),)),
    ("H^D_4", ((_B, _B),)),
    ("H_{1,1}", ((_A, _E), (_E, _A))),
    ("H_{5,0}", ((_A, _E), (_B, _E))),
    ("H_{0,5}", ((_E, _A), (_E, _B))),
    ("H_6", ((_A, _A), (_E, _B))),
    ("H_{4,1}", ((_B, _E), (_E, _A))),
    ("H_{1,4}", ((_A, _E), (_E, _B))),
    ("H_7", ((_A, _A), (_B, _E))),
    ("H^D_5", ((_A, _A), (_B, _B))),
    ("H_{4,4}", ((_B, _E), (_E, _B))),
    ("H_{1,5}", ((_A, _E), (_E, _A), (_E, _B))),
    ("H_{5,1}", ((_A, _E), (_B, _E), (_E, _A))),
    ("H_{4,5}", ((_B, _E), (_E, _A), (_E, _B))),
    ("H_{5,4}", ((_A, _E), (_B, _E), (_E, _B))),
    ("H_8", ((_A, _A), (_B, _E), (_E, _B))),
    ("H_{5,5}", ((_A, _E), (_E, _A), (_B, _E), (_E, _B))),
)

BASIS_LABELS = tuple(label for label, _ in _SUBGROUP_SPECS)
SUBGROUP_GENERATORS = tuple(gens for _, gens in _SUBGROUP_SPECS)
IDENTITY_INDEX = BASIS_LABELS.index("H^D_5")
RINGS = ("Q", "Z", "Z2", "Z3", "F2", "F3")


class TableMismatch(Exception):
    """The two structure-constant routes disagree; message names the cell."""


@lru_cache(maxsize=1)
def subgroup_reps():
    return tuple(_close_pairs(gens) for gens in SUBGROUP_GENERATORS)


def subgroup_rep(i):
    return subgroup_reps()[i]


@lru_cache(maxsize=1)
def biset_sizes():
    return tuple(36 // len(U) for U in subgroup_reps())


class Biset:
    """A finite left (S3xS3)-set: `size` points, `action[pair]` an index list."""

    __slots__ = ("size", "action")

    def __init__(self, size, action):
        self.size = size
        self.action = action


def transitive_biset(U):
    """The coset biset (S3xS3)/U for a subgroup U given as a frozenset of pairs."""
    index_of = {}
    reps = []
    for x in PAIRS:
        if x in index_of:
            continue
        idx = len(reps)
        reps.append(x)
        for u in U:
            index_of[pair_mul(x, u)] = idx
    action = {}
    for g in PAIRS:
        action[g] = [index_of[pair_mul(g, r)] for r in reps]
    return Biset(len(reps), action)


def tensor(M, N):
    """M (x)_G N with the induced outer action; see the module docstring."""
    nm, nn = M.size, N.size
    orbit_of = [-1] * (nm * nn)
    orbit_reps = []
    mid = [(M.action[(S3_ID, g)], N.action[(g, S3_ID)]) for g in (S3_A, S3_B)]
    for start in range(nm * nn):
        if orbit_of[start] >= 0:
            continue
        oid = len(orbit_reps)
        orbit_reps.append(start)
        orbit_of[start] = oid
        stack = [start]
        while stack:
            pt = stack.pop()
            i, j = divmod(pt, nn)
            for ma, na in mid:
                q = ma[i] * nn + na[j]
                if orbit_of[q] < 0:
                    orbit_of[q] = oid
                    stack.append(q)
    action = {}
    for h, g in PAIRS:
        am = M.action[(h, S3_ID)]
        an = N.action[(S3_ID, g)]
        row = []
        for rep in orbit_reps:
            i, j = divmod(rep, nn)
            row.append(orbit_of[am[i] * nn + an[j]])
        action[(h, g)] = row
    return Biset(len(orbit_reps), action)


@lru_cache(maxsize=4096)
def _classify_frozen(stab):
    reps = subgroup_reps()
    for k, rep in enumerate(reps):
        if len(rep) != len(stab):
            continue
        if stab == rep:
            return k
        for g in PAIRS:
            if frozenset(pair_conj(g, u) for u in stab) == rep:
                return k
    raise ValueError("stabilizer matches no representative class")


def classify_subgroup(sub):
    """Index of the basis class the subgroup (iterable of pairs) belongs to."""
    return _classify_frozen(frozenset(sub))


_OUTER_GENS = ((_A, _E), (_B, _E), (_E, _A), (_E, _B))


def decompose(X):
    """Multiplicities of the 22 transitive classes inside the biset X."""
    counts = [0] * len(BASIS_LABELS)
    seen = [False] * X.size
    gen_rows = [X.action[g] for g in _OUTER_GENS]
    for start in range(X.size):
        if seen[start]:
            continue
        seen[start] = True
        stack = [start]
        while stack:
            pt = stack.pop()
            for row in gen_rows:
                q = row[pt]
                if not seen[q]:
                    seen[q] = True
                    stack.append(q)
        stab = frozenset(g for g in PAIRS if X.action[g][start] == start)
        counts[classify_subgroup(stab)] += 1
    return counts


@lru_cache(maxsize=1)
def _basis_bisets():
    return tuple(transitive_biset(U) for U in subgroup_reps())


@lru_cache(maxsize=1)
def oracle_table():
    """c[i][j][k] by enumerating orbits of actual tensor products."""
    bisets = _basis_bisets()
    return tuple(
        tuple(tuple(decompose(tensor(bi, bj))) for bj in bisets) for bi in bisets
    )


def _star(U, W):
    """Composite {(a,c) : exists b, (a,b) in U, (b,c) in W} of subgroups of S3xS3."""
    by_mid = {}
    for b, c in W:
        by_mid.setdefault(b, []).append(c)
    comp = set()
    for a, b in U:
        for c in by_mid.get(b, ()):
            comp.add((a, c))
    return frozenset(comp)


@lru_cache(maxsize=1)
def mackey_table():
    """c[i][j][k] by the double-coset formula, no biset is ever materialized."""
    reps = subgroup_reps()
    n = len(reps)
    table = []
    for i in range(n):
        U = reps[i]
        p2U = frozenset(u2 for _, u2 in U)
        row = []
        for j in range(n):
            V = reps[j]
            p1V = frozenset(v1 for v1, _ in V)
            counts = [0] * n
            for g in S3.double_cosets(p2U, p1V):
                gi = g.inverse()
                Vg = frozenset((g * v1 * gi, v2) for v1, v2 in V)
                counts[classify_subgroup(_star(U, Vg))] += 1
            row.append(tuple(counts))
        table.append(tuple(row))
    return tuple(table)


@lru_cache(maxsize=1)
def structure_table():
    """The verified structure constants; raises TableMismatch on disagreement."""
    fast = mackey_table()
    slow = oracle_table()
    for i in range(len(fast)):
        for j in range(len(fast)):
            if fast[i][j] != slow[i][j]:
                raise TableMismatch(
                    "cell (%s, %s): double-coset %r != orbit enumeration %r"
                    % (BASIS_LABELS[i], BASIS_LABELS[j], fast[i][j], slow[i][j])
                )
    return fast


@lru_cache(maxsize=1)
def left_mult_matrices():
    """L[i][k][j] = c[i][j][k]: matrix of left multiplication by basis i."""
    c = structure_table()
    n = len(c)
    return tuple(
        tuple(tuple(c[i][j][k] for j in range(n)) for k in range(n)) for i in range(n)
    )


def multiply_vectors(xs, ys):
    """Coefficient vector of the product of two coefficient vectors."""
    c = structure_table()
    n = len(c)
    out = [0] * n
    for i, xi in enumerate(xs):
        if xi == 0:
            continue
        ci = c[i]
        for j, yj in enumerate(ys):
            if yj == 0:
                continue
            f = xi * yj
            row = ci[j]
            for k in range(n):
                if row[k]:
                    out[k] += f * row[k]
    return out


def k1(U):
    """{a : (a,1) in U}, returned as a frozenset of S3 elements."""
    return frozenset(a for a, b in U if b == S3_ID)


def k2(U):
    return frozenset(b for a, b in U if a == S3_ID)


def _validate_coeff(ring, x):
    x = Fraction(x)
    if ring == "Q":
        return x
    if ring == "Z":
        if x.denominator != 1:
            raise ValueError("coefficient %s is not an integer" % x)
        return x
    if ring in ("Z2", "Z3"):
        p = 2 if ring == "Z2" else 3
        if not is_p_integral(x, p):
            raise ValueError("coefficient %s has denominator divisible by %d" % (x, p))
        return x
    if ring in ("F2", "F3"):
        p = 2 if ring == "F2" else 3
        if x.denominator != 1:
            raise ValueError("coefficient %s is not an integer residue" % x)
        return Fraction(x.numerator % p)
    raise ValueError("unknown ring %r" % (ring,))


class BurnsideElement:
    """An element of the double Burnside ring over one of the rings in RINGS.

    Coefficients are kept as Fractions in the fixed basis order; for F2/F3
    they are canonical residues 0..p-1.
    """

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        if ring not in RINGS:
            raise ValueError("unknown ring %r" % (ring,))
        coeffs = tuple(_validate_coeff(ring, x) for x in coeffs)
        if len(coeffs) != len(BASIS_LABELS):
            raise ValueError("expected %d coefficients" % len(BASIS_LABELS))
        self.ring = ring
        self.coeffs = coeffs

    @classmethod
    def zero(cls, ring="Q"):
        return cls(ring, [0] * len(BASIS_LABELS))

    @classmethod
    def one(cls, ring="Q"):
        coeffs = [0] * len(BASIS_LABELS)
        coeffs[IDENTITY_INDEX] = 1
        return cls(ring, coeffs)

    @classmethod
    def basis(cls, i, ring="Q"):
        coeffs = [0] * len(BASIS_LABELS)
        coeffs[i] = 1
        return cls(ring, coeffs)

    @classmethod
    def from_dict(cls, ring, mapping):
        coeffs = [0] * len(BASIS_LABELS)
        for label, val in mapping.items():
            coeffs[_basis_index(label)] = Fraction(val)
        return cls(ring, coeffs)

    def to_dict(self):
        return {
            BASIS_LABELS[i]: self.coeffs[i]
            for i in range(len(BASIS_LABELS))
            if self.coeffs[i] != 0
        }

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise ValueError("ring mismatch: %s vs %s" % (self.ring, other.ring))

    def __add__(self, other):
        self._check_ring(other)
        return BurnsideElement(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check_ring(other)
        return BurnsideElement(self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return BurnsideElement(self.ring, [-a for a in self.coeffs])

    def scale(self, r):
        return BurnsideElement(self.ring, [Fraction(r) * a for a in self.coeffs])

    def __mul__(self, other):
        self._check_ring(other)
        return BurnsideElement(self.ring, multiply_vectors(self.coeffs, other.coeffs))

    def __eq__(self, other):
        return (
            isinstance(other, BurnsideElement)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def is_zero(self):
        return all(a == 0 for a in self.coeffs)

    def __repr__(self):
        return "BurnsideElement(%s, %s)" % (self.ring, format_element(self))


def _basis_index(label):
    label = label.strip().replace("Δ", "D")
    try:
        return BASIS_LABELS.index(label)
    except ValueError:
        raise ValueError("unknown basis label %r" % (label,)) from None


def _split_terms(text):
    """Split on commas that sit outside label braces."""
    chunks, depth, cur = [], 0, []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            chunks.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    chunks.append("".join(cur))
    return chunks


def parse_element(text, ring="Q"):
    """Parse "H_{0,0}:-1/2,H_{1,0}:1" into a BurnsideElement."""
    coeffs = [Fraction(0)] * len(BASIS_LABELS)
    text = text.strip()
    if text in ("0", ""):
        return BurnsideElement(ring, coeffs)
    for chunk in _split_terms(text):
        if not chunk.strip():
            continue
        if ":" not in chunk:
            raise ValueError("bad term %r, expected label:coefficient" % (chunk,))
        label, val = chunk.rsplit(":", 1)
        coeffs[_basis_index(label)] += parse_fraction(val)
    return BurnsideElement(ring, coeffs)


def format_element(elem):
    parts = [
        "%s:%s" % (BASIS_LABELS[i], format_fraction(c))
        for i, c in enumerate(elem.coeffs)
        if c != 0
    ]
    return ",".join(parts) if parts else "0"
