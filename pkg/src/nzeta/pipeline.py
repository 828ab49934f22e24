"""One call from (f, g, p, chi) to polyhedra, fan, explicit formula and pole report."""

from __future__ import annotations

from dataclasses import dataclass

from . import residue
from .cyclotomic import Character
from .fan import SimplicialFan, normal_subdivision
from .newton import DiagonalData, NewtonPolyhedron, combined_polyhedron, diagonal_data, newton_polyhedron
from .oracle import DecayModel
from .poles import PoleReport, TSets, real_pole_analysis, t_sets
from .poly import MultiPoly, admit
from .zeta import Band, RationalZeta, explicit_formula_rational, holomorphy_band


@dataclass
class Geometry:
    f: MultiPoly
    g: MultiPoly
    gf: NewtonPolyhedron
    gg: NewtonPolyhedron
    gfg: NewtonPolyhedron
    fan: SimplicialFan
    diagonal: DiagonalData
    tsets: TSets


def geometry(f: MultiPoly, g: MultiPoly, p: int) -> Geometry:
    admit(f, p, "f")
    admit(g, p, "g")
    if f.n != g.n:
        raise ValueError("f and g live in different dimensions")
    gf, gg = newton_polyhedron(f), newton_polyhedron(g)
    gfg = combined_polyhedron(gf, gg)
    fan = normal_subdivision(gfg)
    return Geometry(f, g, gf, gg, gfg, fan, diagonal_data(gfg, gf, gg), t_sets(gf, gg, gfg))


def nondegeneracy(geo: Geometry, p: int, max_evals: int | None = None) -> residue.NondegeneracyVerdict:
    return residue.check_nondegenerate(geo.f, geo.g, geo.fan, p, max_evals)


@dataclass
class Analysis:
    geometry: Geometry
    chi: Character
    zeta: RationalZeta
    band: Band
    poles: PoleReport

    def decay_model(self) -> DecayModel:
        """Tail-majorant data for the oracle; infinite band ends are clipped to +-1."""
        lower = -1 if self.band.lower is None else self.band.lower
        upper = 1 if self.band.upper is None else self.band.upper
        geo = self.geometry
        return DecayModel.build(geo.f, geo.g, geo.gfg.normals, (max(lower, -1), min(upper, 1)))


def analyze(
    f: MultiPoly,
    g: MultiPoly,
    p: int,
    chi: Character | None = None,
    *,
    allow_degenerate: bool = False,
    max_evals: int | None = None,
    seed: int = 0,
) -> Analysis:
    chi = chi or Character(p)
    geo = geometry(f, g, p)
    rz = explicit_formula_rational(f, g, chi, p, allow_degenerate=allow_degenerate, max_evals=max_evals, seed=seed)
    report = real_pole_analysis(geo.gf, geo.gg, geo.gfg, geo.fan, rz)
    return Analysis(geo, chi, rz, holomorphy_band(geo.tsets, chi), report)
