"""Command-line front end: nzeta <subcommand> --f ... --g ... --p ...

Exit status: 0 success, 1 input error (or oracle disagreement), 2 degenerate
input, 3 evaluation budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cyclotomic import Character, CharacterError, to_json_number
from .errors import DEFAULT_MAX_EVALS, BudgetExceeded, DegenerateError
from .fan import barycenter, fundamental_points
from .oracle import truncated_zeta
from .pipeline import Analysis, Geometry, analyze, geometry, nondegeneracy
from .poly import AdmissionError, ParseError, default_names, face_function, parse_poly

SUBCOMMANDS = ("polyhedron", "fan", "nondeg", "zeta", "poles", "verify", "all")
SCHEMA_VERSION = 1

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE, EXIT_BUDGET = 0, 1, 2, 3


class InputError(ValueError):
    """Bad user input; the message names the module that rejected it."""


@dataclass
class AnalysisConfig:
    command: str
    f_text: str
    g_text: str
    vars: list[str]
    p: int
    char: str
    fmt: str
    depth: int
    s_samples: list[complex] | None
    max_evals: int
    seed: int
    allow_degenerate: bool


_NUMBER = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TERM = re.compile(rf"([+-]?)({_NUMBER})?([ij]?)")


def parse_complex(text: str) -> complex:
    """'0.2', '-0.1', '0.5i+0.1', '0.3-2j' -> complex."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty number")
    pos, total = 0, 0j
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and not m.group(3)):
            raise ValueError(f"cannot read {text!r} as a complex number")
        sign = -1 if m.group(1) == "-" else 1
        mag = float(m.group(2)) if m.group(2) is not None else 1.0
        total += sign * mag * (1j if m.group(3) else 1)
        pos = m.end()
    return total


def parse_samples(text: str) -> list[complex]:
    return [parse_complex(part) for part in text.split(",") if part.strip()]


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is our degeneracy code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"error: cli: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nzeta", description="Explicit local zeta functions of f/g over Q_p.")
    parser.add_argument("command", choices=SUBCOMMANDS)
    parser.add_argument("--f", required=True, help="numerator polynomial, e.g. 'x^2-y'")
    parser.add_argument("--g", required=True, help="denominator polynomial")
    parser.add_argument("--vars", default=None, help="comma-separated variable names (default x,y or x,y,z)")
    parser.add_argument("--p", type=int, required=True, help="prime")
    parser.add_argument("--char", default="trivial", help="'trivial' or 'mult:e=<int>,M=<int>,k=<int>'")
    parser.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    parser.add_argument("--depth", type=int, default=4, help="oracle depth m (verify)")
    parser.add_argument("--s-samples", default=None, help="comma-separated s values for verify")
    parser.add_argument("--max-evals", type=int, default=None, help="evaluation budget (env NZETA_MAX_EVALS)")
    parser.add_argument("--seed", type=int, default=0, help="seed for the canonical-form spot checks")
    parser.add_argument("--allow-degenerate", action="store_true", help="compute the formula even if degenerate")
    return parser


def _guess_vars(f_text: str, g_text: str) -> list[str]:
    names = set(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", f_text + " " + g_text))
    for n in (2, 3):
        if names <= set(default_names(n)):
            return default_names(n)
    raise InputError("poly: cannot infer variables; pass --vars")


def make_config(args: argparse.Namespace, environ=os.environ) -> AnalysisConfig:
    if args.max_evals is not None:
        budget = args.max_evals
    elif environ.get("NZETA_MAX_EVALS"):
        try:
            budget = int(environ["NZETA_MAX_EVALS"])
        except ValueError:
            raise InputError("cli: NZETA_MAX_EVALS is not an integer") from None
    else:
        budget = DEFAULT_MAX_EVALS
    if budget <= 0:
        raise InputError("cli: the evaluation budget must be positive")
    names = [v.strip() for v in args.vars.split(",")] if args.vars else _guess_vars(args.f, args.g)
    if len(names) < 2:
        raise InputError("poly: at least two variables are required")
    samples = None
    if args.s_samples is not None:
        try:
            samples = parse_samples(args.s_samples)
        except ValueError as exc:
            raise InputError(f"cli: {exc}") from None
    if args.depth < 1:
        raise InputError("oracle: depth must be positive")
    return AnalysisConfig(
        args.command, args.f, args.g, names, args.p, args.char, args.fmt, args.depth, samples, budget, args.seed, args.allow_degenerate
    )


# -- report sections -------------------------------------------------------------------


def _frac(x) -> str | None:
    return None if x is None else str(Fraction(x))


def polyhedron_section(geo: Geometry) -> dict:
    diag = geo.diagonal.to_json()
    diag["corollary"] = [
        {
            "normal": list(w),
            "d_g_zero": dg0,
            "diagonal_on_face_f": on_f,
            "d_f_zero": df0,
            "diagonal_on_face_g": on_g,
        }
        for w, dg0, on_f, df0, on_g in geo.diagonal.corollary
    ]
    return {"f": geo.gf.to_json(), "g": geo.gg.to_json(), "fg": geo.gfg.to_json(), "diagonal": diag}


def fan_section(geo: Geometry, names: Sequence[str]) -> dict:
    cones = []
    for cone in geo.fan.all_cones():
        k = barycenter(cone, geo.f.n)
        pts = fundamental_points(cone).points if not cone.is_zero() else ()
        cones.append(
            {
                "id": cone.id,
                "generators": [list(w) for w in cone.generators],
                "barycenter": list(k),
                "fundamental_points": [list(t) for t in pts],
                "face_f": face_function(geo.f, k).to_str(names),
                "face_g": face_function(geo.g, k).to_str(names),
            }
        )
    return {"cones": cones}


def zeta_section(an: Analysis, names: Sequence[str]) -> dict:
    out = an.zeta.to_json(names)
    out["band"] = an.band.to_json()
    out["spot_checks"] = [{"t": str(t), "value": to_json_number(v)} for t, v in an.zeta.spot_checks]
    return out


def default_samples(an: Analysis) -> list[complex]:
    lower = -1 if an.band.lower is None else max(an.band.lower, -1)
    upper = 1 if an.band.upper is None else min(an.band.upper, 1)
    return [0j, complex(float(upper) / 2), complex(float(lower) / 2)]


def verify_section(an: Analysis, cfg: AnalysisConfig) -> dict:
    samples = cfg.s_samples if cfg.s_samples is not None else default_samples(an)
    for s in samples:
        if not an.band.contains(Fraction(s.real)) or abs(s.real) >= 1 and an.chi.is_trivial:
            raise InputError(f"oracle: Re(s)={s.real} is not inside the holomorphy band")
    model = an.decay_model()
    geo = an.geometry
    table, values = truncated_zeta(geo.f, geo.g, cfg.p, cfg.depth, an.chi, samples, model, cfg.max_evals)
    rows = []
    agree = True
    for v in values:
        exact = an.zeta.evaluate(v.s)
        diff = abs(v.value - exact)
        ok = diff <= v.bound
        agree &= ok
        rows.append(
            {
                "s": [v.s.real, v.s.imag],
                "truncated": [v.value.real, v.value.imag],
                "formula": [exact.real, exact.imag],
                "difference": diff,
                "tail_bound": v.bound,
                "within_bound": ok,
            }
        )
    return {"depth": cfg.depth, "unresolved_measure": str(table.unresolved), "samples": rows, "agree": agree}


def build_report(cfg: AnalysisConfig) -> tuple[dict, int]:
    try:
        f = parse_poly(cfg.f_text, cfg.vars)
        g = parse_poly(cfg.g_text, cfg.vars)
    except ParseError as exc:
        raise InputError(f"poly: {exc}") from None
    except ValueError as exc:
        raise InputError(f"poly: {exc}") from None
    try:
        chi = Character.parse(cfg.char, cfg.p)
    except CharacterError as exc:
        raise InputError(f"residue: {exc}") from None
    try:
        geo = geometry(f, g, cfg.p)
    except AdmissionError as exc:
        raise InputError(f"poly: {exc}") from None
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "command": cfg.command,
        "input": {
            "f": f.to_str(cfg.vars),
            "g": g.to_str(cfg.vars),
            "vars": list(cfg.vars),
            "p": cfg.p,
            "character": chi.spec(),
            "seed": cfg.seed,
        },
    }
    cmd = cfg.command
    if cmd in ("polyhedron", "all"):
        report["polyhedron"] = polyhedron_section(geo)
    if cmd in ("fan", "all"):
        report["fan"] = fan_section(geo, cfg.vars)
    verdict = None
    if cmd in ("nondeg", "zeta", "poles", "verify", "all"):
        verdict = nondegeneracy(geo, cfg.p, cfg.max_evals)
        report["nondegeneracy"] = verdict.to_json()
        if verdict.witness is not None:
            cone_id, labels, point = verdict.witness
            report["nondegeneracy"]["witness"]["generators"] = [list(w) for w in geo.fan.cone(cone_id).generators]
    if cmd == "nondeg":
        return report, EXIT_OK if verdict.nondegenerate else EXIT_DEGENERATE
    if verdict is not None and not verdict.nondegenerate and not cfg.allow_degenerate:
        return report, EXIT_DEGENERATE
    status = EXIT_OK
    if cmd in ("zeta", "poles", "verify", "all"):
        an = analyze(f, g, cfg.p, chi, allow_degenerate=cfg.allow_degenerate, max_evals=cfg.max_evals, seed=cfg.seed)
        if cmd in ("zeta", "all"):
            report["zeta"] = zeta_section(an, cfg.vars)
        if cmd in ("poles", "all"):
            report["poles"] = an.poles.to_json()
        if cmd in ("verify", "all"):
            report["verify"] = verify_section(an, cfg)
            if not report["verify"]["agree"]:
                status = EXIT_INPUT
    return report, status


# -- rendering -------------------------------------------------------------------------


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def render_text(report: dict) -> str:
    lines = []
    inp = report["input"]
    lines.append(f"f = {inp['f']}    g = {inp['g']}    p = {inp['p']}    character = {inp['character']}")
    if "polyhedron" in report:
        sec = report["polyhedron"]
        for key in ("f", "g", "fg"):
            facets = ", ".join(f"{_vec(fc['normal'])}:{fc['offset']}" for fc in sec[key]["facets"])
            lines.append(f"Gamma({key}) vertices {' '.join(_vec(v) for v in sec[key]['vertices'])}; facets {facets}")
        d = sec["diagonal"]
        lines.append(f"t0 = {d['t0']}; D(t0) = {' '.join(_vec(w) for w in d['D_t0'])}")
        lines.append(f"  D-(t0) = {' '.join(_vec(w) for w in d['D_minus']) or '-'}; D+(t0) = {' '.join(_vec(w) for w in d['D_plus']) or '-'}")
    if "fan" in report:
        lines.append("cones:")
        for c in report["fan"]["cones"]:
            gens = " ".join(_vec(w) for w in c["generators"]) or "{0}"
            pts = " ".join(_vec(t) for t in c["fundamental_points"])
            lines.append(f"  [{c['id']}] {gens}  faces: {c['face_f']} | {c['face_g']}  points: {pts or '-'}")
    if "nondegeneracy" in report:
        nd = report["nondegeneracy"]
        if nd["nondegenerate"]:
            lines.append("non-degenerate: yes")
        else:
            w = nd["witness"]
            lines.append(
                f"non-degenerate: no (cone {w['cone']} {' '.join(_vec(v) for v in w['generators']) or '{0}'}, "
                f"pattern {{{','.join(w['pattern'])}}}, point {_vec(w['point'])})"
            )
    if "zeta" in report:
        z = report["zeta"]
        can = z["canonical"]
        lines.append(f"holomorphy band: {z['band']['lower']} < Re(s) < {z['band']['upper']}")
        for c in z["cones"]:
            L = c["L"]
            lines.append(
                f"  cone {c['cone']}: nu={L['nu']} N_f={L['N_f']} N_g={L['N_g']} N_fg={L['N_fg']}; "
                f"S num {c['S']['numerator']} den {c['S']['denominator']}"
            )
        lines.append(f"Z = t^{can['t_power']} * N(t)/D(t)")
        lines.append(f"  N: {can['numerator']}")
        lines.append(f"  D: {can['denominator']}")
        facs = ", ".join(f"(1 - q^-{a} t^{b})^{m}" for a, b, m in can["denominator_factors"])
        lines.append(f"  denominator factors: {facs or 'none'}")
    if "poles" in report:
        P = report["poles"]
        ts = P["t_sets"]
        lines.append(f"alpha = {ts['alpha']}  beta = {ts['beta']}")
        for c in P["candidates"]:
            lines.append(
                f"  candidate {c['real_part']}: expected order {c.get('expected_order')} "
                f"range {c.get('expected_order_range')} [{c.get('justification')}]"
            )
        for a in P["actual_real_poles"]:
            flag = " (conservative)" if a["conservative"] else ""
            lines.append(f"  actual pole at Re(s) = {a['real_part']}, order {a['order']}{flag}")
        for key in ("largest_negative", "smallest_positive"):
            v = P[key]
            lines.append(
                f"{key.replace('_', ' ')}: {v['real_part']} order {v['order']} [{v['justification']}]; "
                f"actual {v['actual']['real_part']} order {v['actual']['order']}"
            )
        for d in P["diagonal_theorems"]:
            if d["applies"]:
                lines.append(
                    f"{d['justification']}: pole {d['pole']} expected order {d['expected_order']}, "
                    f"guaranteed {d['guaranteed']}, actual order {d['actual_order']}"
                )
            else:
                lines.append(f"{d['justification']}: does not apply")
        npr = P["non_pole_remark"]
        if npr["applies"]:
            lines.append(f"non-pole-remark: excludes {', '.join(npr['excluded']) or 'nothing'}")
        cl = P["classification"]
        lines.append(f"classification: {cl['justification']} (negative: {cl['negative_side']}; positive: {cl['positive_side']})")
        lines.append(f"bound propositions hold: {P['bounds_hold']}")
    if "verify" in report:
        v = report["verify"]
        lines.append(f"oracle depth {v['depth']}, unresolved measure {v['unresolved_measure']}")
        for r in v["samples"]:
            s = complex(*r["s"])
            lines.append(
                f"  s={s}: |truncated - formula| = {r['difference']:.3e} <= {r['tail_bound']:.3e}: {r['within_bound']}"
            )
    return "\n".join(lines) + "\n"


def emit_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    return render_text(report)


def run(cfg: AnalysisConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    if cfg.command in ("zeta", "poles", "verify", "all"):
        print("warning: f and g are assumed to be coprime (not checked)", file=err)
    if cfg.allow_degenerate:
        print("warning: --allow-degenerate: results for degenerate inputs are not covered by the formula", file=err)
    try:
        report, status = build_report(cfg)
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"error: budget: {exc}", file=err)
        return EXIT_BUDGET
    except DegenerateError as exc:
        print(f"error: zeta: {exc}", file=err)
        return EXIT_DEGENERATE
    out.write(emit_report(report, cfg.fmt))
    if status == EXIT_DEGENERATE:
        print("error: residue: f/g is degenerate with respect to its Newton polyhedron", file=err)
    elif status == EXIT_INPUT:
        print("error: oracle: truncated integral and formula disagree beyond the tail bound", file=err)
    return status


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
