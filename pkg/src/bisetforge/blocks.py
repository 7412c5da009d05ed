"""The 22-dimensional block matrix model and its bridge to the biset basis.

An element is a block matrix

    [ s      t  ]      s: 3x3,  t: 3x1   (slots s11..s33, t1..t3)
    [    u   v  ]      u, v, y, w: scalars
    [      w    ]      x: 1x3            (slots x1..x3)
    [ x  y   z  ]      z = z1 + z2*eta + z3*xi, eta^2 = eta*xi = xi^2 = 0

with only the blocks shown nonzero.  Multiplication composes blocks like
matrix multiplication except that the (row 1, col 1), (2,2) products of the
off-diagonal legs vanish identically, and the two leg compositions landing in
the corner produce nilpotents:

    x-leg then t-leg:  (x . t') eta
    y-leg then v-leg:  (y v') (xi - 12 eta)

The coordinate order used for vectors throughout is COORD_NAMES.  The linear
isomorphism onto the rational double Burnside ring sends each coordinate slot
to one member of the 22-element orthogonal-decomposition basis (gamma); its
inverse is an exact 22x22 matrix inversion.
"""

from __future__ import annotations

from fractions import Fraction

from . import fixtures
from .bisets import BASIS_LABELS, BurnsideElement
from .linalg import SingularMatrixError, is_p_integral, mat_inverse, mat_vec, parse_fraction

__all__ = [
    "COORD_NAMES",
    "COORD_INDEX",
    "DualPair",
    "BlockElement",
    "slot_basis",
    "PEIRCE_LABELS",
    "SLOT_TO_PEIRCE",
    "PeirceBasis",
]

COORD_NAMES = (
    "s11", "s21", "s31", "s12", "s22", "s32", "s13", "s23", "s33",
    "x1", "x2", "x3", "u", "y", "w", "t1", "t2", "t3", "v",
    "z1", "z2", "z3",
)
COORD_INDEX = {name: i for i, name in enumerate(COORD_NAMES)}

_F0 = Fraction(0)
_F1 = Fraction(1)


class DualPair:
    """a + b*eta + c*xi in the quotient where eta^2 = eta*xi = xi^2 = 0."""

    __slots__ = ("a", "b", "c")

    def __init__(self, a=0, b=0, c=0):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.c = Fraction(c)

    def __add__(self, other):
        return DualPair(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other):
        return DualPair(self.a - other.a, self.b - other.b, self.c - other.c)

    def __neg__(self):
        return DualPair(-self.a, -self.b, -self.c)

    def __mul__(self, other):
        if isinstance(other, DualPair):
            return DualPair(
                self.a * other.a,
                self.a * other.b + self.b * other.a,
                self.a * other.c + self.c * other.a,
            )
        return DualPair(self.a * other, self.b * other, self.c * other)

    __rmul__ = __mul__

    def inverse(self):
        if self.a == 0:
            raise ZeroDivisionError("constant term is zero, not a unit")
        ai = _F1 / self.a
        return DualPair(ai, -ai * ai * self.b, -ai * ai * self.c)

    def __eq__(self, other):
        return (
            isinstance(other, DualPair)
            and (self.a, self.b, self.c) == (other.a, other.b, other.c)
        )

    def __hash__(self):
        return hash((self.a, self.b, self.c))

    def __repr__(self):
        return "DualPair(%s, %s, %s)" % (self.a, self.b, self.c)


def _vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vneg(u):
    return tuple(-a for a in u)


def _vscale(r, u):
    return tuple(r * a for a in u)


class BlockElement:
    """One element of the block algebra; all entries exact Fractions."""

    __slots__ = ("s", "t", "u", "v", "w", "x", "y", "z")

    def __init__(self, s=None, t=(0, 0, 0), u=0, v=0, w=0, x=(0, 0, 0), y=0, z=None):
        if s is None:
            s = ((0, 0, 0), (0, 0, 0), (0, 0, 0))
        self.s = tuple(tuple(Fraction(a) for a in row) for row in s)
        self.t = tuple(Fraction(a) for a in t)
        self.u = Fraction(u)
        self.v = Fraction(v)
        self.w = Fraction(w)
        self.x = tuple(Fraction(a) for a in x)
        self.y = Fraction(y)
        self.z = z if isinstance(z, DualPair) else DualPair(z or 0)

    @classmethod
    def identity(cls):
        return cls(s=((1, 0, 0), (0, 1, 0), (0, 0, 1)), u=1, w=1, z=DualPair(1))

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def from_vector(cls, vec):
        vec = [Fraction(a) for a in vec]
        if len(vec) != 22:
            raise ValueError("expected 22 coordinates")
        s = tuple(tuple(vec[3 * j + i] for j in range(3)) for i in range(3))
        return cls(
            s=s,
            x=(vec[9], vec[10], vec[11]),
            u=vec[12],
            y=vec[13],
            w=vec[14],
            t=(vec[15], vec[16], vec[17]),
            v=vec[18],
            z=DualPair(vec[19], vec[20], vec[21]),
        )

    @classmethod
    def from_coords(cls, mapping):
        vec = [_F0] * 22
        for name, val in mapping.items():
            vec[COORD_INDEX[name]] = Fraction(val)
        return cls.from_vector(vec)

    def to_vector(self):
        out = []
        for j in range(3):
            for i in range(3):
                out.append(self.s[i][j])
        out.extend(self.x)
        out.extend((self.u, self.y, self.w))
        out.extend(self.t)
        out.append(self.v)
        out.extend((self.z.a, self.z.b, self.z.c))
        return out

    def coord(self, name):
        return self.to_vector()[COORD_INDEX[name]]

    def __add__(self, other):
        return BlockElement(
            s=tuple(_vadd(r1, r2) for r1, r2 in zip(self.s, other.s)),
            t=_vadd(self.t, other.t),
            u=self.u + other.u,
            v=self.v + other.v,
            w=self.w + other.w,
            x=_vadd(self.x, other.x),
            y=self.y + other.y,
            z=self.z + other.z,
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return BlockElement(
            s=tuple(_vneg(r) for r in self.s),
            t=_vneg(self.t),
            u=-self.u,
            v=-self.v,
            w=-self.w,
            x=_vneg(self.x),
            y=-self.y,
            z=-self.z,
        )

    def scale(self, r):
        r = Fraction(r)
        return BlockElement(
            s=tuple(_vscale(r, row) for row in self.s),
            t=_vscale(r, self.t),
            u=r * self.u,
            v=r * self.v,
            w=r * self.w,
            x=_vscale(r, self.x),
            y=r * self.y,
            z=self.z * r,
        )

    def __mul__(self, other):
        a, b = self, other
        s = tuple(
            tuple(sum(a.s[i][k] * b.s[k][j] for k in range(3)) for j in range(3))
            for i in range(3)
        )
        t = tuple(
            sum(a.s[i][k] * b.t[k] for k in range(3)) + a.t[i] * b.z.a for i in range(3)
        )
        x = tuple(
            sum(a.x[k] * b.s[k][j] for k in range(3)) + a.z.a * b.x[j] for j in range(3)
        )
        xt = sum(a.x[k] * b.t[k] for k in range(3))
        yv = a.y * b.v
        z = DualPair(
            a.z.a * b.z.a,
            a.z.a * b.z.b + a.z.b * b.z.a + xt - 12 * yv,
            a.z.a * b.z.c + a.z.c * b.z.a + yv,
        )
        return BlockElement(
            s=s,
            t=t,
            u=a.u * b.u,
            v=a.u * b.v + a.v * b.z.a,
            w=a.w * b.w,
            x=x,
            y=a.y * b.u + a.z.a * b.y,
            z=z,
        )

    def inverse(self):
        cols = [(self * e).to_vector() for e in slot_basis()]
        L = [[cols[j][i] for j in range(22)] for i in range(22)]
        try:
            Li = mat_inverse(L)
        except SingularMatrixError:
            raise SingularMatrixError("block element is not a unit") from None
        inv = BlockElement.from_vector(mat_vec(Li, BlockElement.identity().to_vector()))
        assert (self * inv) == BlockElement.identity()
        assert (inv * self) == BlockElement.identity()
        return inv

    def is_integral(self):
        return all(Fraction(c).denominator == 1 for c in self.to_vector())

    def is_p_integral(self, p):
        return all(is_p_integral(c, p) for c in self.to_vector())

    def is_zero(self):
        return all(c == 0 for c in self.to_vector())

    def __eq__(self, other):
        return isinstance(other, BlockElement) and self.to_vector() == other.to_vector()

    def __hash__(self):
        return hash(tuple(self.to_vector()))

    def __repr__(self):
        parts = [
            "%s=%s" % (name, c)
            for name, c in zip(COORD_NAMES, self.to_vector())
            if c != 0
        ]
        return "BlockElement(%s)" % ", ".join(parts) if parts else "BlockElement(0)"


_SLOT_CACHE = None


def slot_basis():
    """The 22 coordinate unit blocks, in COORD_NAMES order."""
    global _SLOT_CACHE
    if _SLOT_CACHE is None:
        _SLOT_CACHE = tuple(
            BlockElement.from_vector([int(i == k) for i in range(22)]) for k in range(22)
        )
    return _SLOT_CACHE


# The 22 members of the idempotent-decomposition basis, in multiplication
# table order, and the coordinate slot each one corresponds to under gamma.
PEIRCE_LABELS = (
    "e", "b_{e,g}", "b_{e,h}",
    "b_{g,e}", "g", "b_{g,h}",
    "b_{h,e}", "b_{h,g}", "h",
    "b_{e,eps4}", "b_{g,eps4}", "b_{h,eps4}",
    "eps2", "b_{eps2,eps4}", "eps3",
    "b_{eps4,e}", "b_{eps4,g}", "b_{eps4,h}", "b_{eps4,eps2}",
    "eps4", "b'_{eps4,eps4}", "b''_{eps4,eps4}",
)
IDEMPOTENT_LABELS = ("e", "g", "h", "eps2", "eps3", "eps4")

# slot k of COORD_NAMES maps to PEIRCE_LABELS[SLOT_TO_PEIRCE[k]] under gamma
SLOT_TO_PEIRCE = (0, 3, 6, 1, 4, 7, 2, 5, 8, 15, 16, 17, 12, 18, 14, 9, 10, 11, 13, 19, 20, 21)


def _coeff_map_to_vector(mapping):
    vec = [_F0] * len(BASIS_LABELS)
    for label, val in mapping.items():
        vec[BASIS_LABELS.index(label)] = parse_fraction(val)
    return tuple(vec)


class PeirceBasis:
    """The fixture-backed 22-element basis adapted to the idempotents.

    vectors[i] is the coefficient tuple of PEIRCE_LABELS[i] over the
    transitive-biset basis; table[i][j] is the product as a dict
    {peirce label: integer coefficient}.
    """

    def __init__(self, vectors, table):
        self.vectors = tuple(tuple(Fraction(c) for c in v) for v in vectors)
        self.table = table
        self._gamma_inv = None

    @classmethod
    def load(cls, fixture_dir=None):
        data = fixtures.load_peirce(fixture_dir)
        vecs = []
        for label in PEIRCE_LABELS:
            if label in data["idempotents"]:
                src = data["idempotents"][label]
                if data["basis22"]["vectors"][label] != src:
                    raise ValueError("idempotent %s disagrees with basis22 copy" % label)
            vecs.append(_coeff_map_to_vector(data["basis22"]["vectors"][label]))
        if list(data["basis22"]["order"]) != list(PEIRCE_LABELS):
            raise ValueError("fixture basis order differs from PEIRCE_LABELS")
        table = [
            [
                {lab: int(c) for lab, c in cell.items()}
                for cell in row
            ]
            for row in data["table"]
        ]
        return cls(vecs, table)

    def element(self, i, ring="Q"):
        return BurnsideElement(ring, self.vectors[i])

    def element_by_label(self, label, ring="Q"):
        return self.element(PEIRCE_LABELS.index(label), ring)

    def table_entry_vector(self, i, j):
        """The table's claim for product (i, j), over the transitive basis."""
        total = [_F0] * len(BASIS_LABELS)
        for lab, c in self.table[i][j].items():
            vec = self.vectors[PEIRCE_LABELS.index(lab)]
            total = [a + c * b for a, b in zip(total, vec)]
        return tuple(total)

    def gamma_matrix(self):
        """22x22 matrix whose column k is the image of coordinate slot k."""
        return [
            [self.vectors[SLOT_TO_PEIRCE[k]][row] for k in range(22)]
            for row in range(len(BASIS_LABELS))
        ]

    def gamma(self, block):
        """Image of a block element in the rational double Burnside ring."""
        coords = block.to_vector()
        total = [_F0] * len(BASIS_LABELS)
        for k, c in enumerate(coords):
            if c == 0:
                continue
            vec = self.vectors[SLOT_TO_PEIRCE[k]]
            total = [a + c * b for a, b in zip(total, vec)]
        return BurnsideElement("Q", total)

    def gamma_inv(self, elem):
        if self._gamma_inv is None:
            self._gamma_inv = mat_inverse(self.gamma_matrix())
        coords = mat_vec(self._gamma_inv, list(elem.coeffs))
        return BlockElement.from_vector(coords)
