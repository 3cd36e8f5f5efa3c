"""Rectangular phase-space grids and serializable Wigner fields.

Conventions: alpha = (q + i p) / sqrt(2); integrals over the plane are taken
in (q, p) with composite Simpson weights, which is why sample counts are odd.
Data files are CSV triplets (q, p, w) at 17 significant digits with a JSON
metadata header alongside; re-serializing the same field is byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = ["PhaseGrid", "WignerField", "simpson_weights"]


def simpson_weights(n_nodes: int, spacing: float) -> np.ndarray:
    """Composite Simpson weights for ``n_nodes`` equally spaced samples (odd)."""
    if n_nodes < 3 or n_nodes % 2 == 0:
        raise ValueError("Simpson rule needs an odd number of nodes >= 3")
    w = np.ones(n_nodes)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (spacing / 3.0)


@dataclass(frozen=True)
class PhaseGrid:
    """Rectangular sampling window with Simpson-compatible node counts."""

    q_min: float
    q_max: float
    p_min: float
    p_max: float
    nq: int
    np: int

    def __post_init__(self):
        if self.nq < 3 or self.np < 3 or self.nq % 2 == 0 or self.np % 2 == 0:
            raise ValueError("nq and np must be odd and >= 3")
        if self.q_max <= self.q_min or self.p_max <= self.p_min:
            raise ValueError("window must have positive extent")

    @classmethod
    def symmetric(cls, half_width: float, nq: int = 101, np: int = 101) -> "PhaseGrid":
        """Square window centered on the origin."""
        return cls(-half_width, half_width, -half_width, half_width, nq, np)

    @property
    def q_values(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.nq)

    @property
    def p_values(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.np)

    def alpha_mesh(self) -> np.ndarray:
        """Complex samples alpha = (q + i p)/sqrt(2), shape (nq, np)."""
        q, p = np.meshgrid(self.q_values, self.p_values, indexing="ij")
        return (q + 1j * p) / math.sqrt(2.0)

    def integrate(self, samples: np.ndarray) -> float:
        """Simpson integral of a sample matrix over dq dp."""
        wq = simpson_weights(self.nq, (self.q_max - self.q_min) / (self.nq - 1))
        wp = simpson_weights(self.np, (self.p_max - self.p_min) / (self.np - 1))
        return float(wq @ samples @ wp)

    def as_dict(self) -> dict:
        return {
            "q_min": self.q_min,
            "q_max": self.q_max,
            "p_min": self.p_min,
            "p_max": self.p_max,
            "nq": self.nq,
            "np": self.np,
        }


@dataclass
class WignerField:
    """Real-valued quasi-probability samples on a :class:`PhaseGrid`."""

    grid: PhaseGrid
    samples: np.ndarray
    max_imag_residue: float = 0.0
    parameters: dict = field(default_factory=dict)

    def integral(self) -> float:
        """Simpson integral over the stored window (close to 1 if wide enough)."""
        return self.grid.integrate(self.samples)

    def min_value(self) -> float:
        return float(self.samples.min())

    def header(self, version: str = "") -> dict:
        """JSON-ready metadata: grid, parameters, residue diagnostics."""
        return {
            "grid": self.grid.as_dict(),
            "parameters": dict(sorted(self.parameters.items())),
            "diagnostics": {
                "max_imag_residue": self.max_imag_residue,
                "window_integral": self.integral(),
                "min_value": self.min_value(),
            },
            "version": version,
        }

    def to_csv(self, path) -> None:
        """Write (q, p, w) rows at 17 significant digits, q-major order."""
        qs = self.grid.q_values
        ps = self.grid.p_values
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("q,p,w\n")
            for i, q in enumerate(qs):
                for j, p in enumerate(ps):
                    fh.write(f"{q:.17g},{p:.17g},{self.samples[i, j]:.17g}\n")

    def write(self, csv_path, json_path: Optional[str] = None, version: str = "") -> None:
        """Emit the CSV data file plus the JSON metadata header."""
        self.to_csv(csv_path)
        if json_path is not None:
            with open(json_path, "w", encoding="utf-8") as fh:
                json.dump(self.header(version), fh, indent=2, sort_keys=True)
                fh.write("\n")
