"""Executable channel laws: MMC, AMC, AMMC and the general Y = AX + DZ.

``transmit`` returns the output together with the realized hidden state.
The hidden state exists for test oracles and outcome classification only;
nothing in :mod:`matrixchannels.codec` reads it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .field import FieldMatrix, mat_inverse, mat_mul
from .params import ChannelParams, Variant
from .sampling import (
    as_field,
    sample_full_rank,
    sample_nonsingular,
    sample_rank,
    sample_rank_t,
    validate_pmf,
)

# hooks receive (rng, params) / (rng, rank, params)
ASampler = Callable[[np.random.Generator, ChannelParams], FieldMatrix]
ZSampler = Callable[[np.random.Generator, int, ChannelParams], FieldMatrix]
ADSampler = Callable[[np.random.Generator, int, ChannelParams], "tuple[FieldMatrix, FieldMatrix]"]


@dataclass(frozen=True)
class ChannelVariant:
    """Which channel law to run and how its random components are drawn.

    ``rank_pmf`` switches the error rank from fixed ``t`` to a random R with
    the given distribution over {0..t}.  ``constant_A`` / ``a_sampler``
    replace the uniform nonsingular transfer matrix; ``z_sampler`` replaces
    the uniform full-rank error-packet matrix; ``ad_sampler`` draws a
    dependent (A, D) pair for the general law.
    """

    kind: Variant
    rank_pmf: Optional[tuple[float, ...]] = None
    constant_A: Optional[FieldMatrix] = None
    a_sampler: Optional[ASampler] = None
    z_sampler: Optional[ZSampler] = None
    ad_sampler: Optional[ADSampler] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Variant(self.kind))
        if self.rank_pmf is not None:
            object.__setattr__(self, "rank_pmf", tuple(float(x) for x in validate_pmf(self.rank_pmf)))
        if self.constant_A is not None and self.a_sampler is not None:
            raise ValueError("give either constant_A or a_sampler, not both")
        if self.kind is Variant.MMC and (self.rank_pmf or self.z_sampler or self.ad_sampler):
            raise ValueError("the MMC has no error component")
        if self.kind is Variant.AMC and (self.constant_A is not None or self.a_sampler or self.ad_sampler):
            raise ValueError("the AMC has A = I; transfer-matrix options do not apply")
        if self.ad_sampler is not None and self.kind is not Variant.GENERAL:
            raise ValueError("ad_sampler only applies to the general channel")

    @property
    def variable_rank(self) -> bool:
        return self.rank_pmf is not None

    def validate(self, params: ChannelParams) -> None:
        t = params.t
        if self.kind is not Variant.MMC and t > min(params.n, params.m):
            raise ValueError(f"t={t} exceeds min(n, m) for {params}")
        if self.rank_pmf is not None and len(self.rank_pmf) - 1 > t:
            raise ValueError(f"rank pmf support exceeds t={t}")
        if self.constant_A is not None and self.constant_A.shape != (params.n, params.n):
            raise ValueError("constant_A must be n x n")


@dataclass(frozen=True)
class TransmitRecord:
    X: FieldMatrix
    Y: FieldMatrix
    rank: int  # realized error rank R
    A: Optional[FieldMatrix] = None
    W: Optional[FieldMatrix] = None
    B: Optional[FieldMatrix] = None
    Z: Optional[FieldMatrix] = None
    D: Optional[FieldMatrix] = None

    def error_matrix(self) -> FieldMatrix:
        """W with Y = A (X + W); for the general law this is A^{-1} D Z."""
        if self.W is not None:
            return self.W
        if self.D is not None:
            return mat_mul(mat_inverse(self.A), mat_mul(self.D, self.Z))
        return FieldMatrix.zeros(self.X.field, *self.X.shape)


def _draw_A(variant: ChannelVariant, params: ChannelParams, rng, field) -> FieldMatrix:
    if variant.constant_A is not None:
        return variant.constant_A
    if variant.a_sampler is not None:
        return variant.a_sampler(rng, params)
    return sample_nonsingular(rng, params.n, field)


def _draw_rank(variant, params, rng) -> int:
    if variant.rank_pmf is None:
        return params.t
    return sample_rank(rng, variant.rank_pmf, params.n, params.m)


def _draw_error(variant, params, rng, field, r):
    """W = B Z with B uniform on T_{n x r}; Z uniform on T_{r x m} unless hooked."""
    if variant.z_sampler is None:
        W, (B, Z) = sample_rank_t(rng, params.n, params.m, r, field)
        return W, B, Z
    B = sample_full_rank(rng, params.n, r, field)
    Z = variant.z_sampler(rng, r, params)
    return mat_mul(B, Z), B, Z


def transmit(
    variant: ChannelVariant | Variant | str,
    params: ChannelParams,
    X: FieldMatrix,
    rng: np.random.Generator,
) -> TransmitRecord:
    if not isinstance(variant, ChannelVariant):
        variant = ChannelVariant(Variant(variant))
    field = as_field(params.q)
    if X.field != field:
        raise ValueError(f"input over {X.field}, channel over {field}")
    if X.shape != (params.n, params.m):
        raise ValueError(f"input shape {X.shape} != ({params.n}, {params.m})")
    variant.validate(params)

    kind = variant.kind
    if kind is Variant.MMC:
        A = _draw_A(variant, params, rng, field)
        return TransmitRecord(X, mat_mul(A, X), 0, A=A)

    r = _draw_rank(variant, params, rng)
    if kind is Variant.AMC:
        W, B, Z = _draw_error(variant, params, rng, field, r)
        return TransmitRecord(X, X + W, r, W=W, B=B, Z=Z)
    if kind is Variant.AMMC:
        A = _draw_A(variant, params, rng, field)
        W, B, Z = _draw_error(variant, params, rng, field, r)
        return TransmitRecord(X, mat_mul(A, X + W), r, A=A, W=W, B=B, Z=Z)

    # general law Y = A X + D Z
    if variant.ad_sampler is not None:
        A, D = variant.ad_sampler(rng, r, params)
    else:
        A = _draw_A(variant, params, rng, field)
        D = sample_full_rank(rng, params.n, r, field)
    if variant.z_sampler is not None:
        Z = variant.z_sampler(rng, r, params)
    else:
        Z = sample_full_rank(rng, r, params.m, field)
    Y = mat_mul(A, X) + mat_mul(D, Z)
    return TransmitRecord(X, Y, r, A=A, Z=Z, D=D)


def replay(record: TransmitRecord, kind: Variant | str) -> FieldMatrix:
    """Recompute Y from the hidden state alone."""
    kind = Variant(kind)
    X = record.X
    if kind is Variant.MMC:
        return mat_mul(record.A, X)
    if kind is Variant.AMC:
        return X + record.W
    if kind is Variant.AMMC:
        return mat_mul(record.A, X + record.W)
    return mat_mul(record.A, X) + mat_mul(record.D, record.Z)


def source_randomize_left(X: FieldMatrix, rng: np.random.Generator) -> tuple[FieldMatrix, FieldMatrix]:
    """X = T X' with T uniform nonsingular; returns (X, T)."""
    T = sample_nonsingular(rng, X.rows, X.field)
    return mat_mul(T, X), T


def source_randomize_right(X: FieldMatrix, rng: np.random.Generator) -> tuple[FieldMatrix, FieldMatrix]:
    """X = X' T with T uniform m x m nonsingular; returns (X, T)."""
    T = sample_nonsingular(rng, X.cols, X.field)
    return mat_mul(X, T), T


def destination_derandomize(Y: FieldMatrix, T: FieldMatrix) -> FieldMatrix:
    return mat_mul(Y, mat_inverse(T))


def point_mass(t: int) -> tuple[float, ...]:
    return tuple(1.0 if i == t else 0.0 for i in range(t + 1))


def uniform_pmf(t: int) -> tuple[float, ...]:
    return tuple([1.0 / (t + 1)] * (t + 1))
