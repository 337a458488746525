"""Small finite fields, their vector spaces and subspace lattices.

Supported fields: GF(2), GF(3), GF(5), GF(4), GF(8), GF(9).  An element
of GF(p^k) is an integer 0 <= x < p^k encoding the coefficients of its
polynomial-basis representation in base p (constant coefficient least
significant).  The reducing polynomials are fixed so that encodings are
reproducible: GF(4): x^2+x+1, GF(8): x^3+x+1, GF(9): x^2+1.

Vectors over a field are coordinate tuples; the point index of a vector
in a d-dimensional space is sum(v[i] * q**i), coordinate 0 least
significant.  This indexing is the single bridge between linear algebra
and the bitmask topologies.

Subspaces are kept in reduced row-echelon form, the unique canonical
basis, so equality is structural.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .errors import SingularMatrix, SizeExceeded

#: (p, k) -> reducing polynomial coefficients, constant term first.
MODULI = {
    (2, 1): (1, 1),          # x + 1 (unused for k = 1 beyond bookkeeping)
    (3, 1): (1, 1),
    (5, 1): (1, 1),
    (2, 2): (1, 1, 1),       # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),    # x^3 + x + 1
    (3, 2): (1, 0, 1),       # x^2 + 1
}

GAMMA_L_ENUM_CAP = 10 ** 6


class FiniteField:
    """Arithmetic of GF(p^k) on integer-encoded elements, table driven."""

    __slots__ = ("p", "k", "q", "modulus", "_add", "_mul", "_inv", "_frob")

    def __init__(self, p: int, k: int):
        if (p, k) not in MODULI:
            raise ValueError(f"unsupported field GF({p}^{k}); supported: {sorted(MODULI)}")
        self.p = p
        self.k = k
        self.q = q = p ** k
        self.modulus = MODULI[(p, k)]
        add = [[self._poly_add(x, y) for y in range(q)] for x in range(q)]
        mul = [[self._poly_mul(x, y) for y in range(q)] for x in range(q)]
        self._add = add
        self._mul = mul
        inv = [0] * q
        for x in range(1, q):
            inv[x] = next(y for y in range(1, q) if mul[x][y] == 1)
        self._inv = inv
        # Frobenius powers x -> x**(p**e) for e = 0..k-1
        self._frob = []
        for e in range(k):
            pe = p ** e
            self._frob.append(tuple(self.pow(x, pe) for x in range(q)))

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(x % self.p)
            x //= self.p
        return out

    def _undigits(self, ds: Sequence[int]) -> int:
        out = 0
        for c in reversed(ds):
            out = out * self.p + c
        return out

    def _poly_add(self, x: int, y: int) -> int:
        dx, dy = self._digits(x), self._digits(y)
        return self._undigits([(a + b) % self.p for a, b in zip(dx, dy)])

    def _poly_mul(self, x: int, y: int) -> int:
        p, k = self.p, self.k
        dx, dy = self._digits(x), self._digits(y)
        prod = [0] * (2 * k - 1)
        for i, a in enumerate(dx):
            if a:
                for j, b in enumerate(dy):
                    prod[i + j] = (prod[i + j] + a * b) % p
        mod = self.modulus
        for i in range(len(prod) - 1, k - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(k):
                    # x^i = x^(i-k) * (x^k), and x^k = -(low part of modulus)
                    prod[i - k + j] = (prod[i - k + j] - c * mod[j]) % p
        return self._undigits(prod[:k])

    def add(self, x: int, y: int) -> int:
        return self._add[x][y]

    def sub(self, x: int, y: int) -> int:
        return self._add[x][self.neg(y)]

    def neg(self, x: int) -> int:
        return self._undigits([(-c) % self.p for c in self._digits(x)])

    def mul(self, x: int, y: int) -> int:
        return self._mul[x][y]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self._inv[x]

    def pow(self, x: int, e: int) -> int:
        out = 1
        base = x
        while e:
            if e & 1:
                out = self._mul[out][base]
            base = self._mul[base][base]
            e >>= 1
        return out

    def elements(self) -> range:
        return range(self.q)

    def automorphisms(self) -> list["FieldAut"]:
        return [FieldAut(self, e) for e in range(self.k)]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self) -> int:
        return hash((self.p, self.k))

    def __repr__(self) -> str:
        return f"GF({self.q})" if self.k > 1 else f"GF({self.p})"


@lru_cache(maxsize=None)
def GF(p: int, k: int = 1) -> FiniteField:
    """Shared field instance for the supported (p, k)."""
    return FiniteField(p, k)


class FieldAut:
    """A field automorphism x -> x**(p**e); they all have this form."""

    __slots__ = ("field", "e")

    def __init__(self, field: FiniteField, e: int):
        self.field = field
        self.e = e % field.k

    def apply(self, x: int) -> int:
        return self.field._frob[self.e][x]

    def compose(self, other: "FieldAut") -> "FieldAut":
        return FieldAut(self.field, self.e + other.e)

    def inverse(self) -> "FieldAut":
        return FieldAut(self.field, -self.e % self.field.k)

    def is_identity(self) -> bool:
        return self.e == 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldAut)
            and self.field == other.field
            and self.e == other.e
        )

    def __hash__(self) -> int:
        return hash((self.field, self.e))

    def __repr__(self) -> str:
        return f"FieldAut({self.field!r}, e={self.e})"


class VectorSpace:
    """The finite set F^d with its canonical point indexing."""

    __slots__ = ("field", "dim", "size")

    def __init__(self, field: FiniteField, dim: int):
        if dim < 1:
            raise ValueError("dimension must be at least 1")
        self.field = field
        self.dim = dim
        self.size = field.q ** dim

    def index_of(self, vec: Sequence[int]) -> int:
        q = self.field.q
        out = 0
        for c in reversed(vec):
            out = out * q + c
        return out

    def vec_of(self, index: int) -> tuple[int, ...]:
        q = self.field.q
        out = []
        for _ in range(self.dim):
            out.append(index % q)
            index //= q
        return tuple(out)

    def vectors(self) -> Iterator[tuple[int, ...]]:
        return (self.vec_of(i) for i in range(self.size))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.dim

    def basis(self) -> list[tuple[int, ...]]:
        return [tuple(1 if j == i else 0 for j in range(self.dim)) for i in range(self.dim)]

    def add(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        f = self.field
        return tuple(f.add(a, b) for a, b in zip(u, v))

    def sub(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        f = self.field
        return tuple(f.sub(a, b) for a, b in zip(u, v))

    def neg(self, u: Sequence[int]) -> tuple[int, ...]:
        f = self.field
        return tuple(f.neg(a) for a in u)

    def scalar(self, alpha: int, u: Sequence[int]) -> tuple[int, ...]:
        f = self.field
        return tuple(f.mul(alpha, a) for a in u)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, VectorSpace)
            and self.field == other.field
            and self.dim == other.dim
        )

    def __hash__(self) -> int:
        return hash((self.field, self.dim))

    def __repr__(self) -> str:
        return f"VectorSpace({self.field!r}, dim={self.dim})"


@lru_cache(maxsize=None)
def space(p: int, k: int, dim: int) -> VectorSpace:
    return VectorSpace(GF(p, k), dim)


# -- echelon linear algebra ----------------------------------------------------

def rref(field: FiniteField, rows: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Reduced row-echelon form over the field; zero rows dropped."""
    mat = [list(r) for r in rows]
    if not mat:
        return ()
    width = len(mat[0])
    pivot_row = 0
    for col in range(width):
        src = next((r for r in range(pivot_row, len(mat)) if mat[r][col] != 0), None)
        if src is None:
            continue
        mat[pivot_row], mat[src] = mat[src], mat[pivot_row]
        inv = field.inv(mat[pivot_row][col])
        mat[pivot_row] = [field.mul(inv, c) for c in mat[pivot_row]]
        for r in range(len(mat)):
            if r != pivot_row and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [
                    field.sub(a, field.mul(factor, b))
                    for a, b in zip(mat[r], mat[pivot_row])
                ]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    return tuple(tuple(r) for r in mat[:pivot_row] if any(r))


class Subspace:
    """A subspace of F^d in reduced row-echelon basis form."""

    __slots__ = ("space", "rows", "dim")

    def __init__(self, space: VectorSpace, rows: tuple[tuple[int, ...], ...]):
        self.space = space
        self.rows = rows
        self.dim = len(rows)

    def contains(self, vec: Sequence[int]) -> bool:
        f = self.space.field
        v = list(vec)
        for row in self.rows:
            lead = next(i for i, c in enumerate(row) if c)
            if v[lead]:
                factor = v[lead]
                v = [f.sub(a, f.mul(factor, b)) for a, b in zip(v, row)]
        return not any(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def vectors(self) -> Iterator[tuple[int, ...]]:
        """All q**dim member vectors, in coefficient-counting order."""
        f = self.space.field
        if not self.rows:
            yield self.space.zero()
            return
        for coeffs in product(f.elements(), repeat=self.dim):
            v = self.space.zero()
            for c, row in zip(coeffs, self.rows):
                v = self.space.add(v, self.space.scalar(c, row))
            yield v

    def point_mask(self) -> int:
        """Bitmask of member point indices in the ambient space."""
        m = 0
        for v in self.vectors():
            m |= 1 << self.space.index_of(v)
        return m

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and self.space == other.space
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.space, self.rows))

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_subspace(self)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, rows={self.rows})"

    def to_json_dict(self) -> dict:
        return {"dim": self.dim, "basis": [list(r) for r in self.rows]}


def span(space: VectorSpace, vectors: Iterable[Sequence[int]]) -> Subspace:
    return Subspace(space, rref(space.field, vectors))


def zero_subspace(space: VectorSpace) -> Subspace:
    return Subspace(space, ())


def full_subspace(space: VectorSpace) -> Subspace:
    return span(space, space.basis())


def subspace_sum(s1: Subspace, s2: Subspace) -> Subspace:
    return span(s1.space, s1.rows + s2.rows)


def subspace_intersection(s1: Subspace, s2: Subspace) -> Subspace:
    """Meet of two subspaces, via the kernel of the stacked basis.

    A kernel vector (c, c') of the stacked matrix [B1; B2] (as rows)
    transposed gives c.B1 = -c'.B2, a member of the intersection.
    """
    sp = s1.space
    f = sp.field
    r1, r2 = len(s1.rows), len(s2.rows)
    if r1 == 0 or r2 == 0:
        return zero_subspace(sp)
    stacked = list(s1.rows) + list(s2.rows)
    kern = _kernel(f, stacked)
    members = []
    for kv in kern:
        v = sp.zero()
        for c, row in zip(kv[:r1], s1.rows):
            v = sp.add(v, sp.scalar(c, row))
        members.append(v)
    return span(sp, members)


def _kernel(field: FiniteField, rows: list) -> list[tuple[int, ...]]:
    """Basis of {c : sum c_i * rows_i = 0}, i.e. the left null space."""
    m = len(rows)
    width = len(rows[0])
    # transpose: columns of the stacked matrix are the original rows
    cols = [[rows[r][c] for r in range(m)] for c in range(width)]
    reduced = rref(field, cols)
    # free coordinates of the reduced column space give kernel generators
    pivots = []
    for row in reduced:
        pivots.append(next(i for i, c in enumerate(row) if c))
    free = [i for i in range(m) if i not in pivots]
    out = []
    for fr in free:
        v = [0] * m
        v[fr] = 1
        for prow, pcol in zip(reduced, pivots):
            v[pcol] = field.neg(prow[fr])
        out.append(tuple(v))
    return out


@lru_cache(maxsize=None)
def enumerate_subspaces(space: VectorSpace) -> tuple[Subspace, ...]:
    """Every subspace once, graded by dimension, echelon-canonical.

    Enumerates reduced echelon matrices directly: choose pivot columns in
    lexicographic order, then fill the free entries in counting order.
    A free entry of row i sits in a non-pivot column right of pivot i, or
    in a pivot column of a later row -- those are forced to zero, so the
    free positions are the non-pivot columns right of each row's pivot.
    """
    f = space.field
    d = space.dim
    out: list[Subspace] = [zero_subspace(space)]
    for r in range(1, d + 1):
        for pivots in combinations(range(d), r):
            free_pos = [
                (i, c)
                for i in range(r)
                for c in range(pivots[i] + 1, d)
                if c not in pivots
            ]
            for values in product(f.elements(), repeat=len(free_pos)):
                rows = [[0] * d for _ in range(r)]
                for i, pc in enumerate(pivots):
                    rows[i][pc] = 1
                for (i, c), val in zip(free_pos, values):
                    rows[i][c] = val
                out.append(Subspace(space, tuple(tuple(row) for row in rows)))
    return tuple(out)


def gaussian_binomial(n: int, r: int, q: int) -> int:
    num = den = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


# -- semilinear maps -----------------------------------------------------------

def _mat_mul_vec(field: FiniteField, matrix, vec):
    return tuple(
        _dot(field, row, vec) for row in matrix
    )


def _dot(field: FiniteField, row, vec) -> int:
    acc = 0
    for a, b in zip(row, vec):
        acc = field.add(acc, field.mul(a, b))
    return acc


def _mat_mul(field: FiniteField, A, B):
    n = len(A)
    return tuple(
        tuple(_dot(field, A[i], [B[r][j] for r in range(n)]) for j in range(n))
        for i in range(n)
    )


def _mat_inv(field: FiniteField, matrix):
    n = len(matrix)
    aug = [list(matrix[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    reduced = rref(field, aug)
    if len(reduced) < n or any(reduced[i][i] != 1 for i in range(n)):
        raise SingularMatrix(f"matrix {matrix} is singular")
    for i in range(n):
        if any(reduced[i][j] != (1 if j == i else 0) for j in range(n)):
            raise SingularMatrix(f"matrix {matrix} is singular")
    return tuple(tuple(reduced[i][n:]) for i in range(n))


def _aut_mat(aut: FieldAut, matrix):
    return tuple(tuple(aut.apply(c) for c in row) for row in matrix)


class SemilinearMap:
    """An invertible map twisting scalars by a field automorphism.

    apply(x) = matrix . psi(x), with psi applied coordinatewise; then
    apply(alpha * x) = psi(alpha) * apply(x) and apply is additive.
    """

    __slots__ = ("space", "aut", "matrix", "_inv_matrix")

    def __init__(self, space: VectorSpace, aut: FieldAut, matrix):
        matrix = tuple(tuple(row) for row in matrix)
        if len(matrix) != space.dim or any(len(r) != space.dim for r in matrix):
            raise ValueError("matrix shape does not match the space dimension")
        self.space = space
        self.aut = aut
        self.matrix = matrix
        self._inv_matrix = _mat_inv(space.field, matrix)  # raises SingularMatrix

    @classmethod
    def identity(cls, space: VectorSpace) -> "SemilinearMap":
        eye = tuple(
            tuple(1 if j == i else 0 for j in range(space.dim)) for i in range(space.dim)
        )
        return cls(space, FieldAut(space.field, 0), eye)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        twisted = tuple(self.aut.apply(c) for c in vec)
        return _mat_mul_vec(self.space.field, self.matrix, twisted)

    def compose(self, other: "SemilinearMap") -> "SemilinearMap":
        """self after other; the matrix picks up self's twist of other's matrix."""
        f = self.space.field
        m = _mat_mul(f, self.matrix, _aut_mat(self.aut, other.matrix))
        return SemilinearMap(self.space, self.aut.compose(other.aut), m)

    def invert(self) -> "SemilinearMap":
        inv_aut = self.aut.inverse()
        return SemilinearMap(self.space, inv_aut, _aut_mat(inv_aut, self._inv_matrix))

    def apply_subspace(self, s: Subspace) -> Subspace:
        return span(self.space, [self.apply(r) for r in s.rows])

    def point_permutation(self) -> tuple[int, ...]:
        sp = self.space
        return tuple(sp.index_of(self.apply(sp.vec_of(i))) for i in range(sp.size))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SemilinearMap)
            and self.space == other.space
            and self.aut == other.aut
            and self.matrix == other.matrix
        )

    def __hash__(self) -> int:
        return hash((self.space, self.aut, self.matrix))

    def __repr__(self) -> str:
        return f"SemilinearMap(aut_e={self.aut.e}, matrix={self.matrix})"


class AffineSemilinearMap:
    """A semilinear map followed by a translation: x -> linear(x) + shift."""

    __slots__ = ("linear", "shift")

    def __init__(self, linear: SemilinearMap, shift: Sequence[int]):
        self.linear = linear
        self.shift = tuple(shift)

    @classmethod
    def identity(cls, space: VectorSpace) -> "AffineSemilinearMap":
        return cls(SemilinearMap.identity(space), space.zero())

    @classmethod
    def translation(cls, space: VectorSpace, shift: Sequence[int]) -> "AffineSemilinearMap":
        return cls(SemilinearMap.identity(space), shift)

    @property
    def space(self) -> VectorSpace:
        return self.linear.space

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        return self.space.add(self.linear.apply(vec), self.shift)

    def compose(self, other: "AffineSemilinearMap") -> "AffineSemilinearMap":
        lin = self.linear.compose(other.linear)
        shift = self.space.add(self.linear.apply(other.shift), self.shift)
        return AffineSemilinearMap(lin, shift)

    def invert(self) -> "AffineSemilinearMap":
        lin_inv = self.linear.invert()
        return AffineSemilinearMap(lin_inv, self.space.neg(lin_inv.apply(self.shift)))

    def point_permutation(self) -> tuple[int, ...]:
        sp = self.space
        return tuple(sp.index_of(self.apply(sp.vec_of(i))) for i in range(sp.size))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AffineSemilinearMap)
            and self.linear == other.linear
            and self.shift == other.shift
        )

    def __hash__(self) -> int:
        return hash((self.linear, self.shift))

    def __repr__(self) -> str:
        return f"AffineSemilinearMap(linear={self.linear!r}, shift={self.shift})"


# -- the semilinear group ------------------------------------------------------

def group_order_gl(space: VectorSpace) -> int:
    q, d = space.field.q, space.dim
    order = 1
    for i in range(d):
        order *= q ** d - q ** i
    return order


def group_order_gammaL(space: VectorSpace) -> int:
    """Order of the full semilinear group: |GL| times the automorphism count."""
    return space.field.k * group_order_gl(space)


def enumerate_gl_matrices(space: VectorSpace) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All invertible matrices, rows chosen independent, lexicographic order."""
    sp = space
    f = sp.field
    d = sp.dim

    def rec(rows: list[tuple[int, ...]]):
        if len(rows) == d:
            yield tuple(rows)
            return
        partial = span(sp, rows) if rows else zero_subspace(sp)
        for idx in range(sp.size):
            v = sp.vec_of(idx)
            if not partial.contains(v):
                rows.append(v)
                yield from rec(rows)
                rows.pop()

    return rec([])


def enumerate_gammaL(space: VectorSpace) -> Iterator[SemilinearMap]:
    """Every (matrix, automorphism) pair once; matrix-major order."""
    if group_order_gammaL(space) > GAMMA_L_ENUM_CAP:
        raise SizeExceeded(
            f"semilinear group of order {group_order_gammaL(space)} exceeds the enumeration cap"
        )
    auts = space.field.automorphisms()
    for matrix in enumerate_gl_matrices(space):
        for aut in auts:
            yield SemilinearMap(space, aut, matrix)


def random_gl_matrix(space: VectorSpace, rng) -> tuple[tuple[int, ...], ...]:
    """Uniform invertible matrix by rejection sampling."""
    d = space.dim
    q = space.field.q
    while True:
        matrix = tuple(
            tuple(rng.randrange(q) for _ in range(d)) for _ in range(d)
        )
        if len(rref(space.field, matrix)) == d:
            return matrix
