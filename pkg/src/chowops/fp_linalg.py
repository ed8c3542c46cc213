"""Exact linear algebra over the prime field F_p.

Matrices are 2-D numpy int64 arrays with entries reduced to 0..p-1; all
arithmetic is integer-exact (no floating point anywhere).  Every function
here is pure: inputs are never mutated and results are deterministic, so
concurrent read-only use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import BACKEND, rref_inplace

__all__ = [
    "BACKEND",
    "check_prime",
    "binom_mod_p",
    "multinomial_mod_p",
    "as_fp_matrix",
    "zeros",
    "identity",
    "rref",
    "rank",
    "kernel_basis",
    "kernel_matrix",
    "image_contains",
    "solve",
    "residual_map",
    "quotient_data",
    "matmul",
    "GradedMap",
]


def check_prime(p: int) -> int:
    """Validate a session prime; raised errors name the offending value."""
    if not isinstance(p, (int, np.integer)) or p < 2:
        raise ValueError(f"prime must be an integer >= 2, got {p!r}")
    n = int(p)
    d = 2
    while d * d <= n:
        if n % d == 0:
            raise ValueError(f"{n} is not prime")
        d += 1
    return n


def binom_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas's theorem; 0 when k > n or k < 0."""
    if k < 0 or k > n:
        return 0
    result = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        num = den = 1
        for t in range(ki):
            num = num * (ni - t) % p
            den = den * (t + 1) % p
        result = result * num * pow(den, -1, p) % p
        n //= p
        k //= p
    return result


def multinomial_mod_p(parts: tuple[int, ...], p: int) -> int:
    """(sum parts)! / prod(parts!) mod p, as a product of Lucas binomials."""
    total = 0
    result = 1
    for a in parts:
        total += a
        result = result * binom_mod_p(total, a, p) % p
        if result == 0:
            return 0
    return result


def as_fp_matrix(entries, p: int) -> np.ndarray:
    """Coerce to a canonical int64 matrix with entries in 0..p-1."""
    m = np.array(entries, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1) if m.size else m.reshape(0, 0)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    return np.ascontiguousarray(m % p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def rref(m, p: int):
    """Reduced row echelon form.  Returns (R, pivot_columns); m is not mutated."""
    a = as_fp_matrix(m, p)
    if a.size == 0:
        return a, []
    pivots = rref_inplace(a, p)
    return a, list(pivots)


def rank(m, p: int) -> int:
    return len(rref(m, p)[1])


def kernel_matrix(m, p: int) -> np.ndarray:
    """Right kernel as a (cols x dim) matrix, echelonized, deterministic order.

    Free columns are taken in ascending order; each basis vector has a 1 in
    its free coordinate and zeros in the other free coordinates.
    """
    a = as_fp_matrix(m, p)
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return identity(cols)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, c in enumerate(free):
        basis[c, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-int(r[i, c])) % p
    return basis


def kernel_basis(m, p: int) -> list[np.ndarray]:
    k = kernel_matrix(m, p)
    return [k[:, j].copy() for j in range(k.shape[1])]


def solve(m, v, p: int):
    """One solution x of m @ x = v, or None if v is outside the column span."""
    a = as_fp_matrix(m, p)
    b = np.asarray(v, dtype=np.int64) % p
    if b.shape != (a.shape[0],):
        raise ValueError(f"dimension mismatch: matrix {a.shape}, vector {b.shape}")
    aug = np.hstack([a, b.reshape(-1, 1)])
    r, pivots = rref(aug, p)
    if a.shape[1] in pivots:
        return None
    x = np.zeros(a.shape[1], dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = r[i, -1]
    return x


def image_contains(m, v, p: int) -> bool:
    """True iff v lies in the column span of m."""
    return solve(m, v, p) is not None


def residual_map(basis, ambient_dim: int, p: int) -> np.ndarray:
    """Matrix Q with ker Q = column span of `basis` (shape ambient x k).

    Q has one row per non-pivot coordinate of the span; Q @ v gives the
    canonical residual of v modulo the subspace, so v is in the span iff
    Q @ v = 0.  Used for quotient coordinates and normal forms.
    """
    b = as_fp_matrix(basis, p)
    if b.shape[0] != ambient_dim:
        if b.size == 0:
            b = np.zeros((ambient_dim, 0), dtype=np.int64)
        else:
            raise ValueError(
                f"basis rows {b.shape[0]} != ambient dimension {ambient_dim}")
    r, pivots = rref(b.T, p)
    free = [c for c in range(ambient_dim) if c not in set(pivots)]
    q = np.zeros((len(free), ambient_dim), dtype=np.int64)
    for i, c in enumerate(free):
        q[i, c] = 1
        for row, pc in enumerate(pivots):
            # row `row` of r is the echelon vector with leading 1 at pc;
            # reducing v against it changes the free coordinate c by -v[pc]*r[row, c]
            q[i, pc] = (-int(r[row, c])) % p
    return q


def quotient_data(rows, ambient: int, p: int):
    """From spanning rows of a subspace of F_p^ambient, return (nf, free):
    `free` lists the non-pivot coordinates (ascending) and `nf` maps ambient
    coordinates onto canonical quotient coordinates indexed by `free`, with
    the subspace as its kernel."""
    if not len(rows):
        return identity(ambient), list(range(ambient))
    r, pivots = rref(np.array(rows, dtype=np.int64), p)
    pivot_set = set(pivots)
    free = [c for c in range(ambient) if c not in pivot_set]
    nf = np.zeros((len(free), ambient), dtype=np.int64)
    for i, c in enumerate(free):
        nf[i, c] = 1
        for row, pc in enumerate(pivots):
            nf[i, pc] = (-int(r[row, c])) % p
    return nf, free


def matmul(a, b, p: int) -> np.ndarray:
    """Exact product mod p.  Guards against int64 overflow for large p."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[-1]
    if inner and (p - 1) ** 2 > (2**62) // inner:
        raise ValueError(f"prime {p} too large for exact int64 matmul")
    return (a @ b) % p


@dataclass(frozen=True)
class GradedMap:
    """Degreewise family of F_p matrices between graded objects.

    `mats[d]` sends degree-d coordinates of the source to degree-d
    coordinates of the target; absent degrees are zero maps.
    """

    p: int
    mats: dict[int, np.ndarray] = field(default_factory=dict)
    source_dims: dict[int, int] = field(default_factory=dict)
    target_dims: dict[int, int] = field(default_factory=dict)

    def mat(self, d: int) -> np.ndarray:
        m = self.mats.get(d)
        if m is None:
            return zeros(self.target_dims.get(d, 0), self.source_dims.get(d, 0))
        return m

    def rank(self, d: int) -> int:
        return rank(self.mat(d), self.p)

    def injective_in(self, d: int) -> bool:
        return self.rank(d) == self.source_dims.get(d, 0)

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self after other (degrees taken from other's source)."""
        mats = {}
        for d in sorted(set(self.mats) | set(other.mats) | set(other.source_dims)):
            mats[d] = matmul(self.mat(d), other.mat(d), self.p)
        return GradedMap(self.p, mats, dict(other.source_dims), dict(self.target_dims))
