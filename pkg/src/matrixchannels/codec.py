"""One-shot error-trapping codes and their Gauss-Jordan decoders.

Three layouts, all for an n x m channel input over GF(q):

* ``amc-trap``  -- v zero rows and v zero columns around an (n-v) x (m-v)
  data block.  For the coherent channel Y = X + W.
* ``ammc-trap`` -- the same zero trap plus an (n-v) identity pilot, data
  block (n-v) x (m-n).  For Y = A(X + W).
* ``mmc-pilot`` -- X = [I_n U], the usual random network coding header.

Decoders look at Y only.  A decoder either returns the data block or
declares a failure; in fixed-rank mode a returned block is always correct.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from . import _kernels as K
from .field import GF, FieldMatrix, rank_array
from .params import ChannelParams
from .sampling import as_field


class Scheme(str, Enum):
    AMC_TRAP = "amc-trap"
    AMMC_TRAP = "ammc-trap"
    MMC_PILOT = "mmc-pilot"


@dataclass(frozen=True)
class CodeConfig:
    params: ChannelParams
    v: int
    scheme: Scheme

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        n, m, t = self.params.n, self.params.m, self.params.t
        if self.scheme is Scheme.MMC_PILOT:
            if n > m:
                raise ValueError(f"pilot header needs n <= m, got n={n}, m={m}")
            return
        if not t <= self.v <= n:
            raise ValueError(f"trap size must satisfy t <= v <= n, got t={t}, v={self.v}, n={n}")
        if self.scheme is Scheme.AMC_TRAP and self.v > m:
            raise ValueError(f"trap size v={self.v} exceeds m={m}")
        if self.scheme is Scheme.AMMC_TRAP and n > m:
            raise ValueError(f"AMMC trap code needs n <= m, got n={n}, m={m}")

    @property
    def field(self) -> GF:
        return as_field(self.params.q)

    @property
    def data_shape(self) -> tuple[int, int]:
        n, m, v = self.params.n, self.params.m, self.v
        if self.scheme is Scheme.AMC_TRAP:
            return n - v, m - v
        if self.scheme is Scheme.AMMC_TRAP:
            return n - v, m - n
        return n, m - n

    @property
    def rate(self) -> int:
        """Data symbols per codeword (q-ary units per channel use)."""
        a, b = self.data_shape
        return a * b


def suggest_trap_size(params: ChannelParams, regime: str = "large-q", epsilon: float = 0.1) -> int:
    """v = t when q grows; v = ceil((tau + eps) n) when m grows."""
    if regime == "large-q":
        return params.t
    if regime == "large-m":
        tau = params.t / params.n if params.n else 0.0
        # round first so that e.g. (0.2 + 0.1) * 10 does not ceil to 4
        return min(params.n, max(params.t, math.ceil(round((tau + epsilon) * params.n, 9))))
    raise ValueError(f"unknown regime {regime!r}")


@dataclass(frozen=True)
class DecodeResult:
    success: bool
    U: Optional[FieldMatrix]
    trap_rank: Optional[int]  # observed rank of the trapped error
    expected_rank: Optional[int]
    reason: str = ""

    @property
    def outcome(self) -> str:
        return "success" if self.success else "failure"


def _fail(trap_rank, expected, reason) -> DecodeResult:
    return DecodeResult(False, None, trap_rank, expected, reason)


def failure_probability_bound(q: int, t: int, v: int) -> float:
    """Union bound 2t / q^{1+v-t} on the trapping failure probability."""
    if v < t:
        raise ValueError(f"trap size v={v} smaller than t={t}")
    return min(1.0, 2 * t / q ** (1 + v - t))


def encode(config: CodeConfig, U: FieldMatrix) -> FieldMatrix:
    field = config.field
    if U.field != field:
        raise ValueError(f"data over {U.field}, code over {field}")
    if U.shape != config.data_shape:
        raise ValueError(f"data block must be {config.data_shape}, got {U.shape}")
    n, m, v = config.params.n, config.params.m, config.v
    X = np.zeros((n, m), dtype=np.int64)
    if config.scheme is Scheme.AMC_TRAP:
        X[v:, v:] = U.data
    elif config.scheme is Scheme.AMMC_TRAP:
        X[v:, v:n] = np.eye(n - v, dtype=np.int64)
        X[v:, n:] = U.data
    else:
        X[:, :n] = np.eye(n, dtype=np.int64)
        X[:, n:] = U.data
    return FieldMatrix._wrap(field, X)


def _rref_with_transform(field: GF, a: np.ndarray):
    n, m = a.shape
    work = np.hstack([a, np.eye(n, dtype=np.int64)])
    r, piv = K.rref_inplace(work, m, *field._args, *field._tables)
    return work[:, :m], int(r), piv, work[:, m:]


def _matmul(field: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return K.matmul(np.ascontiguousarray(a), np.ascontiguousarray(b), *field._args, field._exp, field._log)


def _sub(field: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return K.add_mat(np.ascontiguousarray(a), K.neg_mat(np.ascontiguousarray(b), *field._args), *field._args)


def _check_shape(config: CodeConfig, Y: FieldMatrix) -> None:
    if Y.shape != (config.params.n, config.params.m):
        raise ValueError(f"received matrix must be {(config.params.n, config.params.m)}, got {Y.shape}")
    if Y.field != config.field:
        raise ValueError(f"received matrix over {Y.field}, code over {config.field}")


def _decode_amc(config: CodeConfig, Y: FieldMatrix, variable: bool) -> DecodeResult:
    field = config.field
    t, v = config.params.t, config.v
    y = Y.data
    Y11, Y12, Y21, Y22 = y[:v, :v], y[:v, v:], y[v:, :v], y[v:, v:]
    R1, r, piv, T1 = _rref_with_transform(field, Y11)
    if variable:
        if r > t:
            return _fail(r, t, "trap rank exceeds error budget")
        # necessary condition: trap rows and trap columns carry no extra rank
        if rank_array(field, y[:v, :]) != r or rank_array(field, y[:, :v]) != r:
            return _fail(r, r, "trap blocks inconsistent with corner rank")
    elif r != t:
        return _fail(r, t, "error not trapped")
    # express the rows of Y21 in the row space of Y11: Y21 = Tbar Y11
    C = Y21[:, piv]
    if r and _sub(field, Y21, _matmul(field, C, R1[:r])).any():
        return _fail(r, t, "left block outside trap row space")
    if r:
        Tbar = _matmul(field, C, T1[:r])
        U = _sub(field, Y22, _matmul(field, Tbar, Y12))
    else:
        U = Y22.copy()
    return DecodeResult(True, FieldMatrix._wrap(field, U), r, t if not variable else r)


def _decode_ammc(config: CodeConfig, Y: FieldMatrix, variable: bool) -> DecodeResult:
    field = config.field
    n, t, v = config.params.n, config.params.t, config.v
    R = Y.data.copy()
    rk, piv = K.rref_inplace(R, R.shape[1], *field._args, *field._tables)
    piv = list(piv)
    r = sum(1 for c in piv if c < v)
    # template: r trap pivots, then the identity pilot on columns v..n-1,
    # then nothing (rows below are zero)
    if piv[r : r + n - v] != list(range(v, n)) or rk != r + n - v:
        return _fail(r, t, "RRE(Y) does not match the trap template")
    if variable:
        if r > t:
            return _fail(r, t, "trap rank exceeds error budget")
    elif r != t:
        return _fail(r, t, "error not trapped")
    U = R[r : r + n - v, n:].copy()
    return DecodeResult(True, FieldMatrix._wrap(field, U), r, t if not variable else r)


def _decode_pilot(config: CodeConfig, Y: FieldMatrix) -> DecodeResult:
    field = config.field
    n = config.params.n
    R = Y.data.copy()
    rk, piv = K.rref_inplace(R, R.shape[1], *field._args, *field._tables)
    if list(piv[:n]) != list(range(n)):
        return _fail(None, None, "singular header")
    return DecodeResult(True, FieldMatrix._wrap(field, R[:, n:].copy()), None, None)


def decode_amc(config: CodeConfig, Y: FieldMatrix) -> DecodeResult:
    """Success iff the top-left v x v corner has rank exactly t."""
    _check_shape(config, Y)
    return _decode_amc(config, Y, variable=False)


def decode_ammc(config: CodeConfig, Y: FieldMatrix) -> DecodeResult:
    """Gauss-Jordan on Y, then match RRE(Y) against [[Z1 0 Z3],[0 I U],[0 0 0]]
    with exactly t trap pivots."""
    _check_shape(config, Y)
    return _decode_ammc(config, Y, variable=False)


def decode_mmc_pilot(config: CodeConfig, Y: FieldMatrix) -> DecodeResult:
    _check_shape(config, Y)
    return _decode_pilot(config, Y)


def decode(config: CodeConfig, Y: FieldMatrix) -> DecodeResult:
    if config.scheme is Scheme.AMC_TRAP:
        return decode_amc(config, Y)
    if config.scheme is Scheme.AMMC_TRAP:
        return decode_ammc(config, Y)
    return decode_mmc_pilot(config, Y)


def decode_variable_rank(config: CodeConfig, Y: FieldMatrix) -> DecodeResult:
    """Decoding when the error rank R is only known to be <= t.

    The observed trap rank r stands in for R.  A result may therefore be
    wrong when r < R (an undetected error); only the caller, holding the
    transmitted data, can tell.
    """
    _check_shape(config, Y)
    if config.scheme is Scheme.AMC_TRAP:
        return _decode_amc(config, Y, variable=True)
    if config.scheme is Scheme.AMMC_TRAP:
        return _decode_ammc(config, Y, variable=True)
    return _decode_pilot(config, Y)


def classify(result: DecodeResult, sent: FieldMatrix) -> str:
    """success / failure / undetected, given the data block actually sent."""
    if not result.success:
        return "failure"
    return "success" if result.U == sent else "undetected"
