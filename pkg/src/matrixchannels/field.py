"""GF(q) arithmetic and dense matrices over GF(q).

Elements are plain integers in ``[0, q)``.  For an extension field GF(p^k)
the integer packs the coefficients of the residue polynomial in base p
(least significant digit = constant term), so ``0`` and ``1`` are the
additive and multiplicative identities in every field.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels as K

MAX_ORDER = 1 << 16

# Conway polynomials, coefficients from the constant term up (monic, so the
# leading 1 is included).  Verified irreducible and primitive on load.
CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1),
    (2, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 12): (1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1),
    (2, 13): (1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 14): (1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (2, 15): (1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 16): (1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 2): (3, 6, 1),
    (11, 2): (2, 7, 1),
    (13, 2): (2, 12, 1),
}


class DimensionError(ValueError):
    pass


class FieldMismatchError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"field order must be >= 2, got {q}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, k


# -- polynomials over GF(p), coefficient lists from the constant term up ------

def _poly_mod(a: list[int], b: Sequence[int], p: int) -> list[int]:
    a = list(a)
    inv_lead = pow(b[-1], p - 2, p)
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _monic_polys(p: int, deg: int):
    for idx in range(p**deg):
        coeffs = []
        for _ in range(deg):
            coeffs.append(idx % p)
            idx //= p
        yield coeffs + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1 or poly[-1] % p == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(list(poly), f, p):
                return False
    return True


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = [d for d in range(2, p) if (p - 1) % d == 0 and _is_prime(d)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    raise AssertionError("unreachable")


def _powers_of_x(modulus: Sequence[int], p: int, k: int, q: int) -> np.ndarray | None:
    """Successive powers of x mod ``modulus`` packed as integers, or None
    if x is not primitive."""
    exp = np.empty(q - 1, dtype=np.int64)
    if p == 2:
        red = sum(c << i for i, c in enumerate(modulus[:k]))
        top = 1 << k
        v = 1
        for i in range(q - 1):
            if v == 1 and i > 0:
                return None
            exp[i] = v
            v <<= 1
            if v & top:
                v ^= top | red
        return exp if v == 1 else None
    digits = [1] + [0] * (k - 1)
    weights = [p**i for i in range(k)]
    for i in range(q - 1):
        v = sum(d * w for d, w in zip(digits, weights))
        if v == 1 and i > 0:
            return None
        exp[i] = v
        lead = digits[-1]
        digits = [0] + digits[:-1]
        if lead:
            digits = [(d - lead * c) % p for d, c in zip(digits, modulus[:k])]
    return exp if digits == [1] + [0] * (k - 1) else None


def _find_primitive_modulus(p: int, k: int) -> tuple[int, ...]:
    q = p**k
    for f in _monic_polys(p, k):
        if f[0] != 0 and is_irreducible(f, p) and _powers_of_x(f, p, k, q) is not None:
            return tuple(f)
    raise AssertionError("no primitive polynomial found")


class GF:
    """The finite field with q = p^k elements.

    Use :func:`gf` to obtain instances; construction builds the log/antilog
    tables, which is done once per order.
    """

    def __init__(self, q: int, modulus: Sequence[int] | None = None):
        p, k = _prime_power(q)
        if q > MAX_ORDER:
            raise ValueError(f"q = {q} exceeds the supported maximum {MAX_ORDER}")
        self.p, self.k, self.q = p, k, q
        if k == 1:
            self.modulus = None
            self.mode = K.PRIME
            g = _primitive_root(p)
            exp = np.empty(q - 1, dtype=np.int64)
            v = 1
            for i in range(q - 1):
                exp[i] = v
                v = v * g % p
        else:
            if modulus is None:
                modulus = CONWAY.get((p, k)) or _find_primitive_modulus(p, k)
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree k")
            if not is_irreducible(modulus, p):
                raise ValueError(f"modulus {modulus} is reducible over GF({p})")
            exp = _powers_of_x(modulus, p, k, q)
            if exp is None:
                raise ValueError(f"x is not primitive modulo {modulus}")
            self.modulus = modulus
            self.mode = K.CHAR2 if p == 2 else K.ODD_EXT
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        self._exp = np.concatenate([exp, exp])
        self._log = log
        inv = np.zeros(q, dtype=np.int64)
        inv[exp] = exp[(-np.arange(q - 1)) % (q - 1)]
        self._inv = inv
        for arr in (self._exp, self._log, self._inv):
            arr.flags.writeable = False
        self._args = (self.mode, self.p, self.k)
        self._tables = (self._exp, self._log, self._inv)

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and (self.q, self.modulus) == (other.q, other.modulus)

    def __hash__(self) -> int:
        return hash((self.q, self.modulus))

    def _check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of {self}")
        return a

    def add(self, a: int, b: int) -> int:
        return int(K.gf_add(self._check(a), self._check(b), *self._args))

    def neg(self, a: int) -> int:
        return int(K.gf_neg(self._check(a), *self._args))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        a, b = self._check(a), self._check(b)
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if self._check(a) == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        return int(self._inv[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def add_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.mode == K.PRIME:
            return (a + b) % self.p
        if self.mode == K.CHAR2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.k):
            out += ((a // scale % self.p + b // scale % self.p) % self.p) * scale
            scale *= self.p
        return out

    def mul_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)


@lru_cache(maxsize=None)
def gf(q: int) -> GF:
    """Shared field instance for order ``q`` (Conway modulus when k > 1)."""
    return GF(q)


def field_arith(field: GF, a: int, b: int | None, op: str) -> int:
    """Apply ``op`` in {add, sub, mul, div, inv, neg}; unary ops ignore ``b``."""
    if op in ("inv", "neg"):
        return getattr(field, op)(a)
    if op not in ("add", "sub", "mul", "div"):
        raise ValueError(f"unknown field op {op!r}")
    return getattr(field, op)(a, b)


# -- matrices ----------------------------------------------------------------

def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class FieldMatrix:
    """Immutable n x m matrix over ``field``; ``data`` is a read-only int64 array."""

    field: GF
    data: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.data)
        if a.ndim != 2:
            raise DimensionError(f"matrix data must be 2-D, got shape {a.shape}")
        if a.size and (a.min() < 0 or a.max() >= self.field.q):
            raise ValueError(f"entries out of range for {self.field}")
        if a.dtype != np.int64 or a.flags.writeable or not a.flags.c_contiguous:
            a = _frozen(a.copy())
        object.__setattr__(self, "data", a)

    @classmethod
    def _wrap(cls, field: GF, a: np.ndarray) -> FieldMatrix:
        # trusted fast path for kernel outputs
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "data", _frozen(a))
        return obj

    @classmethod
    def from_rows(cls, field: GF | int, rows) -> FieldMatrix:
        field = gf(field) if isinstance(field, int) else field
        a = np.array(rows, dtype=np.int64)
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        return cls(field, a)

    @classmethod
    def zeros(cls, field: GF, n: int, m: int) -> FieldMatrix:
        return cls._wrap(field, np.zeros((n, m), dtype=np.int64))

    @classmethod
    def identity(cls, field: GF, n: int) -> FieldMatrix:
        return cls._wrap(field, np.eye(n, dtype=np.int64))

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __getitem__(self, key) -> FieldMatrix:
        if not (isinstance(key, tuple) and len(key) == 2 and all(isinstance(s, slice) for s in key)):
            raise TypeError("FieldMatrix supports 2-D slicing only; use .data for entries")
        return FieldMatrix._wrap(self.field, self.data[key].copy())

    def _same_field(self, other: FieldMatrix):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        return None

    def __add__(self, other: FieldMatrix) -> FieldMatrix:
        if self._same_field(other) is NotImplemented:
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return FieldMatrix._wrap(self.field, K.add_mat(self.data, other.data, *self.field._args))

    def __neg__(self) -> FieldMatrix:
        return FieldMatrix._wrap(self.field, K.neg_mat(self.data, *self.field._args))

    def __sub__(self, other: FieldMatrix) -> FieldMatrix:
        return self + (-other)

    def __matmul__(self, other: FieldMatrix) -> FieldMatrix:
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash((self.field, self.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"FieldMatrix({self.field}, {self.data.tolist()})"

    def scale(self, c: int) -> FieldMatrix:
        return FieldMatrix._wrap(self.field, self.field.mul_array(self.data, c))

    def transpose(self) -> FieldMatrix:
        return FieldMatrix._wrap(self.field, self.data.T.copy())

    def is_zero(self) -> bool:
        return not self.data.any()

    def to_text(self) -> str:
        return format_matrix(self)


def hstack(*blocks: FieldMatrix) -> FieldMatrix:
    return FieldMatrix._wrap(blocks[0].field, np.hstack([b.data for b in blocks]))


def vstack(*blocks: FieldMatrix) -> FieldMatrix:
    return FieldMatrix._wrap(blocks[0].field, np.vstack([b.data for b in blocks]))


def mat_mul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    f = a.field
    return FieldMatrix._wrap(f, K.matmul(a.data, b.data, *f._args, f._exp, f._log))


class RREF(NamedTuple):
    R: FieldMatrix
    rank: int
    pivots: tuple[int, ...]
    T: FieldMatrix


def rref(M: FieldMatrix) -> RREF:
    """Reduced row echelon form with the row transform: ``R == T @ M``.

    Pivots are taken column by column from the first nonzero row at or below
    the current one, so the result (including T) is deterministic.
    """
    n, m = M.shape
    f = M.field
    work = np.hstack([M.data, np.eye(n, dtype=np.int64)])
    r, piv = K.rref_inplace(work, m, *f._args, *f._tables)
    return RREF(
        FieldMatrix._wrap(f, work[:, :m].copy()),
        int(r),
        tuple(int(c) for c in piv),
        FieldMatrix._wrap(f, work[:, m:].copy()),
    )


def rref_array(field: GF, a: np.ndarray) -> tuple[np.ndarray, int, np.ndarray]:
    """Array-level RRE form without the transform (decoder hot path)."""
    work = np.array(a, dtype=np.int64)
    r, piv = K.rref_inplace(work, work.shape[1], *field._args, *field._tables)
    return work, int(r), piv


def rank(M: FieldMatrix) -> int:
    if M.data.size == 0:
        return 0
    f = M.field
    return int(K.rank_of(M.data, *f._args, *f._tables))


def rank_array(field: GF, a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(K.rank_of(np.asarray(a, dtype=np.int64), *field._args, *field._tables))


def mat_inverse(M: FieldMatrix) -> FieldMatrix:
    n, m = M.shape
    if n != m:
        raise DimensionError(f"cannot invert non-square {M.shape} matrix")
    res = rref(M)
    if res.rank < n:
        raise SingularMatrixError(f"matrix has rank {res.rank} < {n}")
    return res.T


# -- text fixture format -----------------------------------------------------

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def format_matrix(M: FieldMatrix) -> str:
    """``q n m`` header then one line per row.  Rows are digit strings for
    q <= 36 and space-separated decimal indices otherwise."""
    q = M.field.q
    lines = [f"{q} {M.rows} {M.cols}"]
    for row in M.data:
        if q <= 36:
            lines.append("".join(_DIGITS[int(x)] for x in row))
        else:
            lines.append(" ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> FieldMatrix:
    lines = [ln.strip() for ln in text.strip().splitlines()]
    try:
        q, n, m = (int(x) for x in lines[0].split())
    except (IndexError, ValueError):
        raise ValueError("matrix header must be 'q n m'") from None
    body = lines[1 : 1 + n]
    if len(body) != n:
        raise DimensionError(f"expected {n} rows, found {len(body)}")
    rows = []
    for ln in body:
        if q <= 36:
            row = [_DIGITS.index(c) for c in ln.lower()]
        else:
            row = [int(x) for x in ln.split()]
        if len(row) != m:
            raise DimensionError(f"expected {m} entries per row, found {len(row)}")
        rows.append(row)
    return FieldMatrix(gf(q), np.array(rows, dtype=np.int64).reshape(n, m))
