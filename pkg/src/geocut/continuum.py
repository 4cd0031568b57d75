"""Analytic continuum cuts on rectangles at constant density.

For a rectangle with uniform density rho = 1/volume, an axis-aligned line cut
has numerator (segment length) * rho^2 and a balance computed from area
fractions. These closed forms provide the ground truth against which discrete
cuts are measured.
"""

from __future__ import annotations

from dataclasses import dataclass

from .functionals import ObjectiveKind
from .geometry import Kernel, RectDomain, surface_tension

__all__ = [
    "ContinuumCut",
    "continuum_objective",
    "optimal_axis_cut",
    "rescaled_limit_target",
]


@dataclass(frozen=True)
class ContinuumCut:
    """Axis-aligned line cut; the set A is the super-level side of the line."""

    domain: RectDomain
    orientation: str  # "horizontal" (A = {y > position}) | "vertical" (A = {x > position})
    position: float
    cut_value: float  # segment length * rho^2
    balance: float
    objective: float
    degenerate: bool = False  # square domain: orientation chosen by tie-break

    def mass_fraction(self) -> float:
        """nu(A), the density mass of the super-level side."""
        if self.orientation == "horizontal":
            return (self.domain.height - self.position) / self.domain.height
        return (self.domain.width - self.position) / self.domain.width


def _line_cut(domain: RectDomain, orientation: str, position: float,
              kind: ObjectiveKind, degenerate: bool = False) -> ContinuumCut:
    rho = domain.rho()
    if orientation == "horizontal":
        if not (0.0 < position < domain.height):
            raise ValueError(f"horizontal cut at y = {position} lies outside (0, {domain.height})")
        length = domain.width
        nu = (domain.height - position) / domain.height
    elif orientation == "vertical":
        if not (0.0 < position < domain.width):
            raise ValueError(f"vertical cut at x = {position} lies outside (0, {domain.width})")
        length = domain.height
        nu = (domain.width - position) / domain.width
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    cut = length * rho**2
    if kind.variant == "ratio":
        bal = 2.0 * nu * (1.0 - nu)
    elif kind.variant == "cheeger":
        bal = min(nu, 1.0 - nu)
    else:
        raise ValueError("continuum line cuts are two-way; use a two-way objective")
    return ContinuumCut(domain=domain, orientation=orientation, position=position,
                        cut_value=cut, balance=bal, objective=cut / bal,
                        degenerate=degenerate)


def continuum_objective(domain: RectDomain, orientation: str, position: float,
                        kind: ObjectiveKind) -> ContinuumCut:
    """Evaluate an axis-aligned line cut strictly inside the rectangle."""
    return _line_cut(domain, orientation, position, kind)


def optimal_axis_cut(domain: RectDomain, kind: ObjectiveKind) -> ContinuumCut:
    """Best cut among axis-aligned lines.

    Both balance terms are maximized at the mid-line, where the numerator does
    not depend on position, so the optimum is the mid-line across the longer
    extent. Square domains tie; the horizontal orientation is chosen and the
    result flagged degenerate.
    """
    horizontal = _line_cut(domain, "horizontal", domain.height / 2.0, kind)
    vertical = _line_cut(domain, "vertical", domain.width / 2.0, kind)
    if horizontal.objective < vertical.objective:
        return horizontal
    if vertical.objective < horizontal.objective:
        return vertical
    return _line_cut(domain, "horizontal", domain.height / 2.0, kind, degenerate=True)


def rescaled_limit_target(domain: RectDomain, kernel: Kernel, kind: ObjectiveKind,
                          d: int = 2) -> float:
    """Limit value sigma_eta * C for the rescaled discrete optimum.

    C is the optimal axis-cut objective. The discrete quantity converging here
    is the graph-total-variation energy of the normalized optimal indicator,
    i.e. 2 * objective / (n^2 eps^(d+1)); see the experiments module.
    """
    return surface_tension(kernel, d) * optimal_axis_cut(domain, kind).objective
