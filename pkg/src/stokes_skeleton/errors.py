"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class StokesError(Exception):
    """Base class for all package errors."""


class ValidationError(StokesError, ValueError):
    """A structure failed its construction-time audit."""


class CompositionError(StokesError, ValueError):
    """Two arrows (or letters of a word) are not composable."""


class InvalidAssignmentError(StokesError, ValueError):
    """A generator assignment is inconsistent with endpoints or domains."""


class IncompleteError(StokesError, ValueError):
    """Required data (edge labels, automorphisms, ...) is missing."""


class CapExceededError(StokesError):
    """An exhaustive search would exceed the configured state bound."""

    def __init__(self, what: str, cap: int):
        super().__init__(f"{what}: search exceeded cap of {cap} states")
        self.what = what
        self.cap = cap


class HomomorphismError(StokesError, ValueError):
    """A map of groups fails to be a homomorphism."""

    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


class FixedCellError(StokesError, ValueError):
    """A group action fixes some cell, so the orbit complex is not a free quotient."""

    def __init__(self, cells: list):
        super().__init__(f"action is not free; cells with nontrivial stabiliser: {cells}")
        self.cells = cells


class UnsupportedRankError(StokesError, ValueError):
    """A builder was asked for a torus of rank it does not handle."""


class DomainError(StokesError, ValueError):
    """A numeric chart was evaluated outside its domain (z = 0)."""


class MismatchError(StokesError, ValueError):
    """Two arrows of the local chart are not composable within tolerance."""

    def __init__(self, gap: float, tol: float):
        super().__init__(f"arrows not composable: |z2 - t(z1,u1)| = {gap:.3e} exceeds tolerance {tol:.1e}")
        self.gap = gap
        self.tol = tol


class ParseError(StokesError, ValueError):
    """An input document is not valid JSON; carries the location of the fault."""

    def __init__(self, path: str, line: int, column: int, message: str):
        super().__init__(f"{path}:{line}:{column}: {message}")
        self.path = path
        self.line = line
        self.column = column
