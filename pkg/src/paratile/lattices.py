"""Rational lattices: kernels, projections, short vectors, covolumes.

A lattice is the integer span of the columns of a rational basis matrix.
Everything here is exact; enumeration uses a fraction-free style Fincke-Pohst
recursion over an exact LDL split of the Gram matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .linalg import (
    IntMatrix,
    QMatrix,
    as_qmatrix,
    clear_denominators,
    det_q,
    hnf_basis_columns,
    integer_kernel_basis,
    inverse,
    rank_over_rationals,
    rref,
)
from .radicals import SqrtSum


class EnumerationCap(Exception):
    """Raised when short-vector enumeration exceeds its node budget."""


@dataclass(frozen=True)
class Lattice:
    """Integer span of the basis columns; basis has full column rank."""

    ambient_dim: int
    basis: QMatrix  # ambient_dim x rank, columns are basis vectors

    def __post_init__(self):
        if self.basis.nrows != self.ambient_dim:
            raise ValueError("basis rows must match ambient dimension")
        if self.rank and rank_over_rationals(self.basis) != self.rank:
            raise ValueError("basis columns are dependent")

    @staticmethod
    def standard(n: int) -> "Lattice":
        return Lattice(n, QMatrix.identity(n))

    @staticmethod
    def from_columns(cols: Sequence[Sequence]) -> "Lattice":
        basis = QMatrix.from_rows(cols).t()
        return Lattice(basis.nrows, basis)

    @property
    def rank(self) -> int:
        return self.basis.ncols

    def is_integer(self) -> bool:
        return self.basis.is_integer()

    def gram(self) -> QMatrix:
        return self.basis.t() @ self.basis

    def covolume(self) -> SqrtSum:
        """Volume of a fundamental cell inside the lattice's span."""
        if self.rank == 0:
            return SqrtSum.from_rational(1)
        return SqrtSum.sqrt(det_q(self.gram()))

    def vector(self, coords: Sequence[int]) -> Tuple[Fraction, ...]:
        return self.basis.mul_vec(coords)

    def contains(self, v: Sequence) -> bool:
        coords = coordinates_in_lattice(self, v)
        return coords is not None


def coordinates_in_lattice(lat: Lattice, v: Sequence) -> Optional[Tuple[int, ...]]:
    """Integer coordinates of v in the basis, or None if v is not a member."""
    v = [Fraction(x) for x in v]
    if len(v) != lat.ambient_dim:
        raise ValueError("dimension mismatch")
    aug = QMatrix.from_rows(
        [list(lat.basis.entries[i]) + [v[i]] for i in range(lat.ambient_dim)])
    red, pivots = rref(aug)
    r = lat.rank
    if r in pivots:
        return None  # v outside the span
    sol = [Fraction(0)] * r
    for row_idx, p in enumerate(pivots):
        sol[p] = red.entries[row_idx][r]
    # rows of the reduced system past the pivots must be consistent (they are,
    # since the last column was not a pivot), so only integrality remains
    if any(c.denominator != 1 for c in sol):
        return None
    if lat.basis.mul_vec(sol) != tuple(v):
        return None
    return tuple(int(c) for c in sol)


def lattices_equal(a: Lattice, b: Lattice) -> bool:
    """Exact equality as subsets of the ambient space."""
    if a.ambient_dim != b.ambient_dim or a.rank != b.rank:
        return False
    na, da = clear_denominators(a.basis)
    nb, db = clear_denominators(b.basis)
    d = da * db // math.gcd(da, db)
    ma = na.scale(d // da)
    mb = nb.scale(d // db)
    return hnf_basis_columns(ma).entries == hnf_basis_columns(mb).entries


def intersect_with_kernel(lat: Lattice, b) -> Lattice:
    """Sublattice of vectors annihilated by the matrix b."""
    bm = as_qmatrix(b) @ lat.basis
    bi, _ = clear_denominators(bm)  # row scaling keeps the kernel
    k = integer_kernel_basis(bi)
    if k.ncols == 0:
        return Lattice(lat.ambient_dim,
                       QMatrix(tuple(() for _ in range(lat.ambient_dim))))
    return Lattice(lat.ambient_dim, lat.basis @ k)


def project_onto_rowspan(lat: Lattice, b) -> Lattice:
    """Orthogonal projection of the lattice onto the row span of b.

    The projection is computed through the injective map v -> R v (R an
    integer row basis of the span): the image of the lattice there is a
    subgroup of (1/d) Z^m, hence discrete, and pulling its Hermite basis back
    through the pseudoinverse gives a genuine lattice basis of the projection.
    """
    r_int, _ = clear_denominators(as_qmatrix(b))
    if rank_over_rationals(r_int) != r_int.nrows:
        raise ValueError("rows must be independent")
    image = r_int.to_q() @ lat.basis
    im_int, d = clear_denominators(image)
    w = hnf_basis_columns(im_int)  # columns generate d * (R L) as a group
    if w.ncols == 0:
        return Lattice(lat.ambient_dim,
                       QMatrix(tuple(() for _ in range(lat.ambient_dim))))
    rrt = r_int.to_q() @ r_int.t().to_q()
    pull = r_int.t().to_q() @ inverse(rrt)  # v -> point of the span with Rv = v
    return Lattice(lat.ambient_dim, (pull @ w.to_q()).scale(Fraction(1, d)))


def apply_matrix(t, lat: Lattice) -> Lattice:
    """Image lattice under an injective-on-the-span linear map."""
    tq = as_qmatrix(t)
    new_basis = tq @ lat.basis
    if rank_over_rationals(new_basis) != lat.rank:
        raise ValueError("map collapses the lattice")
    return Lattice(tq.nrows, new_basis)


# --- short vector enumeration -------------------------------------------------

def ldl_split(g: QMatrix) -> Tuple[List[Fraction], List[List[Fraction]]]:
    """G = U^T diag(d) U with U unit upper triangular; requires G pos. def."""
    n = g.nrows
    a = [[Fraction(g.entries[i][j]) for j in range(n)] for i in range(n)]
    d: List[Fraction] = [Fraction(0)] * n
    u = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for i in range(n):
        acc = a[i][i] - sum(d[k] * u[k][i] * u[k][i] for k in range(i))
        if acc <= 0:
            raise ValueError("Gram matrix is not positive definite")
        d[i] = acc
        for j in range(i + 1, n):
            s = a[i][j] - sum(d[k] * u[k][i] * u[k][j] for k in range(i))
            u[i][j] = s / acc
    return d, u


def _range_for(dcoef: Fraction, shift: Fraction, budget: Fraction
               ) -> Tuple[int, int]:
    """Integer x with dcoef*(x+shift)^2 <= budget; empty when lo > hi.

    With shift = a/b the test reads (b x + a)^2 <= (budget/dcoef) b^2, and
    an integer square is at most a real number iff it is at most its floor,
    so one integer sqrt settles the whole range.
    """
    if budget < 0:
        return 1, 0
    s = budget / dcoef
    a, b = shift.numerator, shift.denominator
    r = math.isqrt(int(s * b * b))
    lo = -((r + a) // b)
    hi = (r - a) // b
    return lo, hi


def enumerate_short_vectors(g: QMatrix, bound: Fraction,
                            center: Optional[Sequence[Fraction]] = None,
                            skip_zero: bool = False,
                            node_cap: int = 10 ** 7
                            ) -> List[Tuple[Tuple[int, ...], Fraction]]:
    """All integer coordinate vectors x with (x-c)^T G (x-c) <= bound.

    Results are (coords, squared length) pairs sorted by squared length then
    coordinates.  Raises EnumerationCap if the search tree exceeds node_cap.
    """
    n = g.nrows
    bound = Fraction(bound)
    if n == 0:
        return [] if skip_zero else [((), Fraction(0))]
    c = [Fraction(x) for x in center] if center is not None \
        else [Fraction(0)] * n
    d, u = ldl_split(g)
    x = [0] * n
    out: List[Tuple[Tuple[int, ...], Fraction]] = []
    nodes = 0

    def rec(i: int, budget: Fraction):
        nonlocal nodes
        if i < 0:
            vec = tuple(x)
            if skip_zero and center is None and not any(vec):
                return
            out.append((vec, bound - budget))
            return
        z = sum(u[i][j] * (x[j] - c[j]) for j in range(i + 1, n)) - c[i]
        lo, hi = _range_for(d[i], z, budget)
        for xi in range(lo, hi + 1):
            nodes += 1
            if nodes > node_cap:
                raise EnumerationCap(f"more than {node_cap} nodes")
            x[i] = xi
            rec(i - 1, budget - d[i] * (xi + z) ** 2)
        x[i] = 0

    rec(n - 1, bound)
    out.sort(key=lambda t: (t[1], t[0]))
    return out


def shortest_vector_sq(lat: Lattice, node_cap: int = 10 ** 7
                       ) -> Optional[Fraction]:
    """Squared length of a shortest nonzero lattice vector, exactly."""
    if lat.rank == 0:
        return None
    g = lat.gram()
    start = min(g.entries[i][i] for i in range(g.nrows))
    found = enumerate_short_vectors(g, start, skip_zero=True,
                                    node_cap=node_cap)
    # the shortest basis vector realizes the starting bound, so found is
    # nonempty
    return found[0][1]


def all_vectors_longer_than(lat: Lattice, threshold: Fraction,
                            node_cap: int = 10 ** 7) -> bool:
    """Certify that every nonzero lattice vector has squared length > threshold."""
    if lat.rank == 0:
        return True
    sv = shortest_vector_sq(lat, node_cap=node_cap)
    return sv > threshold
