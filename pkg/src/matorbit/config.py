"""Shared tolerance configuration."""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used throughout the library.

    eps_residual   acceptance threshold for matrix-equation residuals
                   (always applied relative to a problem-dependent scale)
    eps_disc       discriminant / borderline classification threshold
    cluster_radius root-clustering and descriptor-matching radius
    eps_rank       relative singular-value cutoff for numerical rank
    eps_singular   relative determinant threshold for invertibility
    """

    eps_residual: float = 1e-9
    eps_disc: float = 1e-9
    cluster_radius: float = 1e-6
    eps_rank: float = 1e-6
    eps_singular: float = 1e-12

    def __post_init__(self) -> None:
        for f in fields(self):
            if not getattr(self, f.name) > 0.0:
                raise ValueError(f"{f.name} must be strictly positive")


DEFAULT_TOL = Tolerances()
