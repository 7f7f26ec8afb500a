"""Building blocks: integer presentations of one-dimensional NCCW algebras.

An interval block is A(F1, F2, phi0, phi1) with F1 = M_{k_1} + ... + M_{k_p},
F2 = M_n, and the two boundary maps recorded by their K0 multiplicity rows
alpha and beta.  A finite-dimensional block is just F1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Optional

from .errors import (
    BadParameter,
    MalformedDocument,
    NonpositiveSize,
    UnitalityViolation,
    WrongKind,
    ZeroColumn,
)

INTERVAL = "interval"
FINITE_DIM = "finite_dim"


def dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class Block:
    kind: str
    k: tuple
    n: Optional[int] = None
    alpha: Optional[tuple] = None
    beta: Optional[tuple] = None

    @property
    def p(self) -> int:
        return len(self.k)

    @property
    def is_interval(self) -> bool:
        return self.kind == INTERVAL

    @property
    def diff(self) -> Optional[tuple]:
        """alpha - beta, or None for a finite-dimensional block."""
        if not self.is_interval:
            return None
        return tuple(a - b for a, b in zip(self.alpha, self.beta))

    @property
    def unit(self) -> tuple:
        return self.k

    def require_interval(self, what: str = "operation") -> None:
        if not self.is_interval:
            raise WrongKind(f"{what} needs an interval block, got a finite-dimensional one")

    def __str__(self) -> str:
        if self.is_interval:
            return f"Block(k={list(self.k)}, n={self.n}, alpha={list(self.alpha)}, beta={list(self.beta)})"
        return f"FiniteDim(k={list(self.k)})"


@dataclass(frozen=True)
class Algebra:
    blocks: tuple

    def __post_init__(self):
        if not self.blocks:
            raise MalformedDocument("an algebra needs at least one block")


@dataclass(frozen=True)
class BlockFlags:
    is_finite_dim: bool
    is_in_C_O: bool


def _int_tuple(values, name: str) -> tuple:
    try:
        out = tuple(int(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise MalformedDocument(f"{name} must be a list of integers") from exc
    return out


def make_interval_block(k, n, alpha, beta) -> Block:
    k = _int_tuple(k, "k")
    alpha = _int_tuple(alpha, "alpha")
    beta = _int_tuple(beta, "beta")
    n = int(n)
    p = len(k)
    if p == 0:
        raise NonpositiveSize("p must be positive")
    if len(alpha) != p or len(beta) != p:
        raise MalformedDocument("alpha and beta must have length p", p=p)
    if n <= 0 or any(x <= 0 for x in k):
        raise NonpositiveSize("n and every k_j must be positive")
    if any(x < 0 for x in alpha + beta):
        raise NonpositiveSize("alpha and beta entries must be nonnegative")
    if dot(alpha, k) != n or dot(beta, k) != n:
        raise UnitalityViolation(
            f"alpha.k = {dot(alpha, k)}, beta.k = {dot(beta, k)}, n = {n}",
            alpha_k=dot(alpha, k), beta_k=dot(beta, k), n=n,
        )
    for j in range(p):
        if alpha[j] == 0 and beta[j] == 0:
            raise ZeroColumn(f"summand {j + 1} maps to neither endpoint", index=j + 1)
    return Block(INTERVAL, k, n, alpha, beta)


def make_finite_dim_block(k) -> Block:
    k = _int_tuple(k, "k")
    if not k or any(x <= 0 for x in k):
        raise NonpositiveSize("a finite-dimensional block needs positive sizes")
    return Block(FINITE_DIM, k)


def validate_block(raw: dict) -> Block:
    """Build a Block from a plain description, checking every invariant."""
    if not isinstance(raw, dict):
        raise MalformedDocument("block description must be a mapping")
    kind = raw.get("kind", INTERVAL)
    try:
        if kind == INTERVAL:
            return make_interval_block(raw["k"], raw["n"], raw["alpha"], raw["beta"])
        if kind == FINITE_DIM:
            return make_finite_dim_block(raw["k"])
    except KeyError as exc:
        raise MalformedDocument(f"block description lacks field {exc}") from exc
    raise MalformedDocument(f"unknown block kind {kind!r}")


def validate_algebra(raw: dict) -> Algebra:
    try:
        blocks = raw["blocks"]
    except (KeyError, TypeError) as exc:
        raise MalformedDocument("algebra needs a 'blocks' list") from exc
    return Algebra(tuple(validate_block(b) for b in blocks))


def canonical_circle() -> Block:
    return Block(INTERVAL, (1,), 1, (1,), (1,))


def _dimension_drop(w: int) -> Block:
    # Generator sources may have w = 1 (then this is C_0(0,1) with a unit).
    return make_interval_block((1, 1), w, (w, 0), (0, w))


def canonical_dimension_drop(q: int) -> Block:
    if q < 2:
        raise BadParameter("dimension-drop size must be at least 2", q=q)
    return _dimension_drop(q)


def point_block() -> Block:
    return make_finite_dim_block((1,))


def n_constant(A: Block) -> int:
    A.require_interval("n_constant")
    ratios = [
        Fraction(a + b, abs(a - b)) for a, b in zip(A.alpha, A.beta) if a != b
    ]
    top = max(ratios) if ratios else 0
    return ceil(top) + 1


def classify(A: Block) -> BlockFlags:
    if not A.is_interval:
        return BlockFlags(True, False)
    in_co = all(a == 0 or b == 0 for a, b in zip(A.alpha, A.beta))
    return BlockFlags(False, in_co)
