"""Small immutable value types shared across the library.

Component fields hold floats or equal-shaped numpy arrays; every function
that consumes these states is written elementwise, so a single dataclass
instance can carry a whole time series.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PhaseState:
    """Point (or series of points) in the commutative frame.

    Q1, Q2 are positions, P1, P2 the conjugate momenta.  ``t`` is an
    optional time tag and is not used in any algebra.
    """

    Q1: object
    Q2: object
    P1: object
    P2: object
    t: object = None


@dataclass(frozen=True)
class InitialConditions:
    """Initial data (x, y, pi_x, pi_y) for the commutative-frame flow."""

    x: float
    y: float
    pi_x: float
    pi_y: float


@dataclass(frozen=True)
class NCState:
    """Point in the noncommutative frame: positions q1, q2, momenta p1, p2."""

    q1: object
    q2: object
    p1: object
    p2: object


@dataclass(frozen=True)
class PhasePoint:
    """Evaluation point for phase-space distributions (no time tag)."""

    Q1: object
    Q2: object
    P1: object
    P2: object
