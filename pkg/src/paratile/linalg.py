"""Exact linear algebra over Z, Q and GF(2) with certified operator norms.

Matrices are immutable tuples of rows.  Integer work (Hermite forms, kernels,
determinants) never leaves Z; rational elimination uses Fraction arithmetic.
Operator norm upper bounds are certificates: exact rationals provably at or
above the true spectral norm, never floating-point estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .intervals import iroot_floor, sqrt_upper
from .radicals import SqrtSum

Rat = Union[int, Fraction]


# --- matrix containers -------------------------------------------------------

@dataclass(frozen=True)
class IntMatrix:
    entries: Tuple[Tuple[int, ...], ...]

    @staticmethod
    def from_rows(rows: Iterable[Iterable[int]]) -> "IntMatrix":
        ent = tuple(tuple(int(x) for x in row) for row in rows)
        if ent and any(len(r) != len(ent[0]) for r in ent):
            raise ValueError("ragged rows")
        for row in ent:
            for x in row:
                if not isinstance(x, int):
                    raise TypeError("integer entries required")
        return IntMatrix(ent)

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n))
                               for i in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> Tuple[int, ...]:
        return self.entries[i]

    def col(self, j: int) -> Tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> List[Tuple[int, ...]]:
        return [self.col(j) for j in range(self.ncols)]

    def t(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries)) if self.entries else ())

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            return IntMatrix(_matmul(self.entries, other.entries))
        if isinstance(other, QMatrix):
            return QMatrix(_matmul(self.entries, other.entries)).normalized()
        raise TypeError(type(other))

    def to_q(self) -> "QMatrix":
        return QMatrix(tuple(tuple(Fraction(x) for x in row)
                             for row in self.entries))

    def mul_vec(self, v: Sequence[Rat]) -> tuple:
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(c * x for x in row) for row in self.entries))


@dataclass(frozen=True)
class QMatrix:
    entries: Tuple[Tuple[Fraction, ...], ...]

    @staticmethod
    def from_rows(rows: Iterable[Iterable[Rat]]) -> "QMatrix":
        ent = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if ent and any(len(r) != len(ent[0]) for r in ent):
            raise ValueError("ragged rows")
        return QMatrix(ent)

    @staticmethod
    def identity(n: int) -> "QMatrix":
        return IntMatrix.identity(n).to_q()

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self.entries[i]

    def col(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> List[Tuple[Fraction, ...]]:
        return [self.col(j) for j in range(self.ncols)]

    def t(self) -> "QMatrix":
        return QMatrix(tuple(zip(*self.entries)) if self.entries else ())

    def __matmul__(self, other):
        if isinstance(other, (IntMatrix, QMatrix)):
            return QMatrix(_matmul(self.entries, other.entries)).normalized()
        raise TypeError(type(other))

    def normalized(self) -> "QMatrix":
        return QMatrix(tuple(tuple(Fraction(x) for x in row)
                             for row in self.entries))

    def mul_vec(self, v: Sequence[Rat]) -> tuple:
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def is_integer(self) -> bool:
        return all(x.denominator == 1 for row in self.entries for x in row)

    def to_int(self) -> IntMatrix:
        if not self.is_integer():
            raise ValueError("non-integer entries")
        return IntMatrix(tuple(tuple(int(x) for x in row) for row in self.entries))

    def scale(self, c: Rat) -> "QMatrix":
        c = Fraction(c)
        return QMatrix(tuple(tuple(c * x for x in row) for row in self.entries))


def _matmul(a, b):
    if a and b and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch {len(a[0])} vs {len(b)}")
    bt = tuple(zip(*b)) if b else ()
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt)
                 for row in a)


def as_qmatrix(m: Union[IntMatrix, QMatrix]) -> QMatrix:
    return m.to_q() if isinstance(m, IntMatrix) else m


def clear_denominators(m: QMatrix) -> Tuple[IntMatrix, int]:
    """(N, d) with m = N/d, d the lcm of all entry denominators."""
    d = 1
    for row in m.entries:
        for x in row:
            d = d * x.denominator // math.gcd(d, x.denominator)
    n = IntMatrix(tuple(tuple(int(x * d) for x in row) for row in m.entries))
    return n, d


# --- ranks and elimination ---------------------------------------------------

def rank_int_rows(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of an integer row list, by integer cross-elimination."""
    work = [list(r) for r in rows if any(r)]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    col = 0
    while rank < len(work) and col < ncols:
        piv = next((i for i in range(rank, len(work)) if work[i][col]), None)
        if piv is None:
            col += 1
            continue
        work[rank], work[piv] = work[piv], work[rank]
        pr = work[rank]
        a = pr[col]
        for i in range(rank + 1, len(work)):
            b = work[i][col]
            if b:
                row = [a * x - b * y for x, y in zip(work[i], pr)]
                g = 0
                for x in row:
                    g = math.gcd(g, x)
                work[i] = [x // g for x in row] if g > 1 else row
        rank += 1
        col += 1
    return rank


def _int_rows_of(m: Union[IntMatrix, QMatrix]) -> List[List[int]]:
    if isinstance(m, IntMatrix):
        return [list(r) for r in m.entries]
    out = []
    for row in m.entries:
        d = 1
        for x in row:
            d = d * x.denominator // math.gcd(d, x.denominator)
        out.append([int(x * d) for x in row])
    return out


def rank_over_rationals(m: Union[IntMatrix, QMatrix]) -> int:
    return rank_int_rows(_int_rows_of(m))


def rank_over_gf2(m: IntMatrix) -> int:
    masks = []
    for row in m.entries:
        bits = 0
        for j, x in enumerate(row):
            if x & 1:
                bits |= 1 << j
        masks.append(bits)
    return gf2_rank(masks)


def gf2_rank(masks: Iterable[int]) -> int:
    pivots: List[int] = []
    for v in masks:
        for p in pivots:
            low = p & -p
            if v & low:
                v ^= p
        if v:
            pivots.append(v)
    return len(pivots)


def columns_independent(m: Union[IntMatrix, QMatrix], cols: Sequence[int],
                        field: str = "Q") -> bool:
    """Whether the selected columns are linearly independent over Q or GF(2)."""
    if len(set(cols)) != len(cols):
        raise ValueError("repeated column index")
    sub_rows = [[row[j] for j in cols] for row in m.entries]
    if field == "Q":
        return rank_int_rows(_int_rows_of(QMatrix.from_rows(sub_rows))) == len(cols)
    if field == "GF2":
        if isinstance(m, QMatrix):
            raise ValueError("GF(2) check needs integer entries")
        sub = IntMatrix.from_rows(sub_rows)
        return rank_over_gf2(sub) == len(cols)
    raise ValueError(f"unknown field {field!r}")


def rref(m: QMatrix) -> Tuple[QMatrix, Tuple[int, ...]]:
    """Reduced row echelon form with pivot column indices."""
    work = [list(row) for row in m.entries]
    nrows, ncols = len(work), (len(work[0]) if work else 0)
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if work[i][col] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = 1 / work[r][col]
        work[r] = [x * inv for x in work[r]]
        for i in range(nrows):
            if i != r and work[i][col] != 0:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return QMatrix.from_rows(work), tuple(pivots)


def solve_unique(a: QMatrix, b: Sequence[Rat]) -> Tuple[Fraction, ...]:
    """Solve a square nonsingular system exactly."""
    n = a.nrows
    if a.ncols != n or len(b) != n:
        raise ValueError("need a square system")
    aug = QMatrix.from_rows(
        [list(a.entries[i]) + [Fraction(b[i])] for i in range(n)])
    red, piv = rref(aug)
    if piv != tuple(range(n)):
        raise ValueError("singular system")
    return tuple(red.entries[i][n] for i in range(n))


def inverse(a: QMatrix) -> QMatrix:
    n = a.nrows
    if a.ncols != n:
        raise ValueError("not square")
    aug = QMatrix.from_rows(
        [list(a.entries[i]) + [Fraction(1 if j == i else 0) for j in range(n)]
         for i in range(n)])
    red, piv = rref(aug)
    if piv != tuple(range(n)):
        raise ValueError("singular matrix")
    return QMatrix.from_rows([row[n:] for row in red.entries])


def nullspace(a: QMatrix) -> List[Tuple[Fraction, ...]]:
    """Basis of the rational kernel, one vector per free column."""
    red, pivots = rref(a)
    n = a.ncols
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red.entries[r][f]
        basis.append(tuple(v))
    return basis


def det_int(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    if any(len(r) != n for r in a):
        raise ValueError("not square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det_q(m: QMatrix) -> Fraction:
    n, d = clear_denominators(m)
    return Fraction(det_int(n.entries), d ** m.nrows)


# --- Hermite forms, kernels, lattice bases -----------------------------------

def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def hnf_rows(mat: Sequence[Sequence[int]],
             transform: bool = False):
    """Row-style Hermite normal form.

    Returns (H, U, pivot_cols) with U unimodular and U @ mat = H when
    ``transform`` is set, else (H, None, pivot_cols).  H is canonical: pivots
    positive, entries above each pivot reduced into [0, pivot), zero rows last.
    """
    H = [list(r) for r in mat]
    m = len(H)
    n = len(H[0]) if m else 0
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if transform else None
    r = 0
    pivot_cols: List[int] = []
    for col in range(n):
        piv = next((i for i in range(r, m) if H[i][col]), None)
        if piv is None:
            continue
        H[r], H[piv] = H[piv], H[r]
        if U is not None:
            U[r], U[piv] = U[piv], U[r]
        for i in range(r + 1, m):
            if H[i][col] == 0:
                continue
            a, b = H[r][col], H[i][col]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            # [[x, y], [-q, p]] has determinant 1
            H[r], H[i] = ([x * u + y * v for u, v in zip(H[r], H[i])],
                          [-q * u + p * v for u, v in zip(H[r], H[i])])
            if U is not None:
                U[r], U[i] = ([x * u + y * v for u, v in zip(U[r], U[i])],
                              [-q * u + p * v for u, v in zip(U[r], U[i])])
        if H[r][col] < 0:
            H[r] = [-x for x in H[r]]
            if U is not None:
                U[r] = [-x for x in U[r]]
        p = H[r][col]
        for i in range(r):
            q = H[i][col] // p
            if q:
                H[i] = [u - q * v for u, v in zip(H[i], H[r])]
                if U is not None:
                    U[i] = [u - q * v for u, v in zip(U[i], U[r])]
        pivot_cols.append(col)
        r += 1
        if r == m:
            break
    return H, U, tuple(pivot_cols)


def integer_kernel_basis(b: IntMatrix) -> IntMatrix:
    """Basis (as columns) of {x in Z^n : b @ x = 0}.

    Unimodular row reduction of b-transpose; the transform rows that map to
    zero rows of the Hermite form span the kernel over Z.
    """
    bt = b.t()
    H, U, _ = hnf_rows(bt.entries, transform=True)
    kernel_rows = [U[i] for i in range(len(H)) if not any(H[i])]
    if not kernel_rows:
        return IntMatrix(tuple(() for _ in range(b.ncols)))
    return IntMatrix.from_rows(kernel_rows).t()


def hnf_basis_columns(generators: IntMatrix) -> IntMatrix:
    """Canonical lattice basis (columns) of the group the columns generate."""
    rows = generators.t().entries
    H, _, _ = hnf_rows(rows)
    keep = [r for r in H if any(r)]
    return IntMatrix.from_rows(keep).t() if keep else \
        IntMatrix(tuple(() for _ in range(generators.nrows)))


# --- operator norm certificates ----------------------------------------------

@dataclass(frozen=True)
class NormCertificate:
    """Certified upper bound on a spectral norm: true norm <= sqrt(usq)."""

    usq: Fraction          # exact rational bound on the squared norm
    method: str            # row-col-product | rayleigh-interval | derived-completion

    def value_upper(self, bits: int = 64) -> Fraction:
        return sqrt_upper(self.usq, bits)

    def as_sqrtsum(self) -> SqrtSum:
        return SqrtSum.sqrt(self.usq)


def _abs_row_sums(entries) -> list:
    return [sum(abs(x) for x in row) for row in entries]


def _root_upper(x: Fraction, k: int) -> Fraction:
    """Smallest convenient rational at or above x**(1/k)."""
    if x < 0:
        raise ValueError
    if k == 1:
        return x
    p, q = x.numerator, x.denominator
    rp, rq = iroot_floor(p, k), iroot_floor(q, k)
    if rp ** k == p and rq ** k == q:
        return Fraction(rp, rq)
    bits = 32
    n = p * q ** (k - 1)
    t = iroot_floor(n << (k * bits), k)
    return Fraction(t + 1, q << bits)


def operator_norm_upper(m: Union[IntMatrix, QMatrix],
                        refine_steps: int = 0) -> NormCertificate:
    """Certified upper bound on the spectral norm of m.

    The base certificate is sqrt(max abs row sum * max abs col sum).  With
    ``refine_steps`` = j > 0 the bound is tightened through Gram powering:
    lambda_max(G)**(2**j) <= max-row-sum(G**(2**j)) for G = m^T m, all in
    exact arithmetic, and the best of all available bounds is kept.
    """
    entries = m.entries
    if not entries or not entries[0]:
        return NormCertificate(Fraction(0), "row-col-product")
    maxrow = max(_abs_row_sums(entries))
    maxcol = max(_abs_row_sums(tuple(zip(*entries))))
    best = Fraction(maxrow) * Fraction(maxcol)
    method = "row-col-product"
    if refine_steps > 0:
        q = as_qmatrix(m)
        power = q.t() @ q
        k = 1
        for step in range(refine_steps):
            if step:
                power = power @ power
                k *= 2
            mrs = Fraction(max(_abs_row_sums(power.entries)))
            cand = _root_upper(mrs, k)
            if cand < best:
                best = cand
                method = "rayleigh-interval"
    return NormCertificate(best, method)


def rayleigh_lower_sq(m: Union[IntMatrix, QMatrix], iters: int = 8) -> Fraction:
    """Certified lower bound on the squared spectral norm via power iteration."""
    q = as_qmatrix(m)
    if q.nrows == 0 or q.ncols == 0:
        return Fraction(0)
    g = q.t() @ q
    x = [Fraction(1) for _ in range(g.nrows)]
    best = Fraction(0)
    for _ in range(iters):
        mx = q.mul_vec(x)
        nx = sum(v * v for v in x)
        if nx == 0:
            break
        best = max(best, sum(v * v for v in mx) / nx)
        x = list(g.mul_vec(x))
        # rescale to keep numbers manageable
        mags = [abs(v) for v in x if v]
        if mags:
            s = max(mags)
            x = [v / s for v in x]
    return best


# --- rank completion ---------------------------------------------------------

@dataclass(frozen=True)
class CompletionResult:
    matrix: IntMatrix              # full-rank m x n
    kept_rows: Tuple[int, ...]     # indices of input rows that survive
    col_order: Tuple[int, ...]     # identity; recorded for auditability
    certificate: NormCertificate
    added_units: Tuple[int, ...]   # coordinates of the appended unit rows


def complete_to_full_rank(a: IntMatrix,
                          base_cert: Optional[NormCertificate] = None
                          ) -> CompletionResult:
    """Replace a possibly rank-deficient m x n matrix by a full-rank one.

    Keeps a maximal independent set of rows of ``a`` and appends standard
    basis rows at coordinates outside the pivot columns.  The kernel of the
    result sits inside the kernel of ``a``, so any support-size guarantee on
    kernel vectors survives, and the squared-norm certificate grows by at
    most 1 (the appended rows contribute a rank-one Gram summand each).
    """
    m, n = a.shape
    if m > n:
        raise ValueError("more rows than columns")
    # maximal independent row set, tracking original indices
    indep: List[int] = []
    work: List[List[Fraction]] = []
    for i in range(m):
        row = [Fraction(x) for x in a.entries[i]]
        for wrow in work:
            lead = next((j for j, v in enumerate(wrow) if v != 0), None)
            if lead is not None and row[lead] != 0:
                f = row[lead] / wrow[lead]
                row = [x - f * y for x, y in zip(row, wrow)]
        if any(row):
            work.append(row)
            indep.append(i)
    r = len(indep)
    if r == m:
        cert_a = base_cert or operator_norm_upper(a)
        return CompletionResult(a, tuple(range(m)), tuple(range(n)), cert_a, ())
    frame = QMatrix.from_rows([a.entries[i] for i in indep])
    _, pivot_cols = rref(frame)
    free_cols = [j for j in range(n) if j not in pivot_cols]
    added = tuple(free_cols[: m - r])
    if len(added) < m - r:
        raise ValueError("cannot complete: not enough free coordinates")
    rows = [list(a.entries[i]) for i in indep]
    for j in added:
        rows.append([1 if k == j else 0 for k in range(n)])
    b = IntMatrix.from_rows(rows)
    cert_a = base_cert or operator_norm_upper(a)
    derived = cert_a.usq + 1
    own = operator_norm_upper(b)
    cert = NormCertificate(derived, "derived-completion") if derived <= own.usq else own
    return CompletionResult(b, tuple(indep), tuple(range(n)), cert, added)


def _fdot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum(x * y for x, y in zip(u, v))


def lll_reduce(basis: QMatrix, delta: Fraction = Fraction(3, 4)) -> QMatrix:
    """Column basis reduction, exact rational arithmetic throughout.

    Same column lattice, far less eccentric basis; keeps downstream point
    enumerations from drowning in a skew slab.  The Gram-Schmidt data is
    recomputed from scratch after each update: quadratic waste, irrelevant
    at the ranks this package enumerates.
    """
    k = basis.ncols
    if k <= 1:
        return basis
    cols = [[basis.entries[i][j] for i in range(basis.nrows)]
            for j in range(k)]

    def gso():
        mu = [[Fraction(0)] * k for _ in range(k)]
        star: List[List[Fraction]] = []
        bs: List[Fraction] = []
        for i in range(k):
            v = list(cols[i])
            for j in range(i):
                mu[i][j] = _fdot(cols[i], star[j]) / bs[j]
                v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
            star.append(v)
            bs.append(_fdot(v, v))
            if bs[i] == 0:
                raise ValueError("columns are dependent")
        return mu, bs

    mu, bs = gso()
    i = 1
    while i < k:
        # subtracting q b_j perturbs mu[i][j'] for j' < j, so refresh each time
        for j in range(i - 1, -1, -1):
            q = round(mu[i][j])
            if q:
                cols[i] = [x - q * y for x, y in zip(cols[i], cols[j])]
                mu, bs = gso()
        if bs[i] >= (delta - mu[i][i - 1] ** 2) * bs[i - 1]:
            i += 1
        else:
            cols[i], cols[i - 1] = cols[i - 1], cols[i]
            mu, bs = gso()
            i = max(i - 1, 1)
    return QMatrix.from_rows([[cols[j][r] for j in range(k)]
                              for r in range(basis.nrows)])
