"""Explicit one-chart groupoid for one-parameter Stokes data near a pole.

An arrow is a pair ``(z, u)`` with source ``z`` and target
``exp(u z^m) z`` where ``m = n (k - 1)`` for pole order ``k`` and Kummer
level ``n``.  Composition and inverses follow from requiring targets to
chain, which forces the factor ``m`` in the composition exponent.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MismatchError, ValidationError

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class GlpArrow:
    z: complex
    u: complex
    k: int = 2
    n: int = 1

    def __post_init__(self):
        if self.k < 2:
            raise ValidationError(f"pole order k must be >= 2, got {self.k}")
        if self.n < 1:
            raise ValidationError(f"level n must be >= 1, got {self.n}")
        if self.z == 0:
            raise DomainError("base point z must be nonzero")

    @property
    def exponent(self) -> int:
        return self.n * (self.k - 1)

    @property
    def source(self) -> complex:
        return self.z


def target(a: GlpArrow) -> complex:
    return cmath.exp(a.u * a.z ** a.exponent) * a.z


def unit(z: complex, k: int = 2, n: int = 1) -> GlpArrow:
    return GlpArrow(complex(z), 0j, k, n)


def _rel_gap(x: complex, y: complex) -> float:
    return abs(x - y) / max(abs(x), abs(y), 1e-300)


def compose(a2: GlpArrow, a1: GlpArrow, *, tol: float = DEFAULT_TOL,
            factor: int | None = None) -> GlpArrow:
    """The arrow ``a2 after a1``; requires ``a2.z`` to match ``target(a1)``.

    ``factor`` overrides the multiplier in the composition exponent.  Only
    the default ``n (k - 1)`` makes targets chain for ``n > 1``; passing
    ``k - 1`` reproduces the other convention for comparison.
    """
    if (a1.k, a1.n) != (a2.k, a2.n):
        raise ValidationError("arrows belong to different charts")
    gap = _rel_gap(a2.z, target(a1))
    if gap > tol:
        raise MismatchError(gap, tol)
    c = a1.exponent if factor is None else factor
    if a2.u == 0:
        return a1
    u = a2.u * cmath.exp(c * a1.u * a1.z ** a1.exponent) + a1.u
    return GlpArrow(a1.z, u, a1.k, a1.n)


def inverse(a: GlpArrow) -> GlpArrow:
    """Arrow from ``target(a)`` back to ``a.z``."""
    w = target(a)
    return GlpArrow(w, -a.u * cmath.exp(-a.exponent * a.u * a.z ** a.exponent), a.k, a.n)


def _random_arrow(rng: np.random.Generator, z: complex, k: int, n: int) -> GlpArrow:
    r, phase = rng.uniform(0.0, 1.0), rng.uniform(0.0, 2 * np.pi)
    return GlpArrow(z, complex(r * np.cos(phase), r * np.sin(phase)), k, n)


def _random_base(rng: np.random.Generator) -> complex:
    r, phase = rng.uniform(0.1, 0.9), rng.uniform(0.0, 2 * np.pi)
    return complex(r * np.cos(phase), r * np.sin(phase))


def _random_triple(rng: np.random.Generator, k: int, n: int):
    # Rejection keeps every base point inside the sampling annulus; without it
    # targets drift outward and exp(u z^m) overflows at larger m.
    while True:
        a1 = _random_arrow(rng, _random_base(rng), k, n)
        z2 = target(a1)
        if not 0.1 <= abs(z2) <= 0.9:
            continue
        a2 = _random_arrow(rng, z2, k, n)
        z3 = target(a2)
        if 0.1 <= abs(z3) <= 0.9:
            return a1, a2, _random_arrow(rng, z3, k, n)


def check_axioms(k: int, n: int, *, trials: int = 1000, tol: float = DEFAULT_TOL,
                 seed: int = 0, factor: int | None = None) -> dict:
    """Random-trial check of associativity, inverses and units.

    Each trial draws a composable triple whose three base points have
    ``|z|`` in [0.1, 0.9] and whose parameters have ``|u| <= 1``.
    Errors are relative with the scale floored at 1, so tiny parameters
    are compared absolutely.
    """
    rng = np.random.default_rng(seed)
    max_assoc = max_round = max_target = 0.0
    units_exact = True
    for _ in range(trials):
        a1, a2, a3 = _random_triple(rng, k, n)
        try:
            left = compose(compose(a3, a2, tol=tol, factor=factor), a1, tol=tol, factor=factor)
            right = compose(a3, compose(a2, a1, tol=tol, factor=factor), tol=tol, factor=factor)
        except MismatchError as exc:
            max_assoc = max(max_assoc, exc.gap)
            continue
        max_assoc = max(max_assoc, _err(left.u, right.u))
        max_target = max(max_target, _rel_gap(target(left), target(a3)))
        back = compose(inverse(a1), a1, tol=tol, factor=factor)
        fwd = compose(a1, inverse(a1), tol=tol, factor=factor)
        max_round = max(max_round, abs(back.u), abs(fwd.u))
        e1, e2 = unit(a1.z, k, n), unit(target(a1), k, n)
        r1, r2 = compose(a1, e1, tol=tol), compose(e2, a1, tol=tol)
        units_exact &= r1.z == a1.z and r2.z == a1.z and r1.u == a1.u and r2.u == a1.u
    ok = max_assoc <= tol and max_round <= tol and max_target <= tol and units_exact
    return {
        "k": k,
        "n": n,
        "trials": trials,
        "seed": seed,
        "tol": tol,
        "max_assoc_err": max_assoc,
        "max_roundtrip_err": max_round,
        "max_target_err": max_target,
        "units_exact": bool(units_exact),
        "pass": bool(ok),
    }


def _err(x: complex, y: complex) -> float:
    scale = max(abs(x), abs(y))
    return abs(x - y) / scale if scale > 1.0 else abs(x - y)
