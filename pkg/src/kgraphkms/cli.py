"""Command-line surface: validate graphs, classify KMS state families,
run verification suites, decompose vectors, evaluate states.

Every command emits a single self-describing report (schema 1), either
as JSON or as text; reports are deterministic given inputs and seed.
Exit codes: 0 success, 1 domain failure, 2 I/O or usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import re
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import algebra, harmonic, pathspace, spectral
from .harmonic import Dynamics
from .kgraph import (
    Degree,
    KGraph,
    KGraphError,
    ValidationError,
    load_kgraph,
    to_document,
    to_dot,
)

SCHEMA = 1


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Argument parsing helpers
# ---------------------------------------------------------------------------

def parse_r(text: str, rank: int) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",")]
    try:
        r = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"cannot parse r vector {text!r}") from exc
    if len(r) != rank:
        raise UsageError(f"r has {len(r)} entries but the graph has rank {rank}")
    return r


_LN_RE = re.compile(r"^ln\(\s*([0-9]+(?:/[0-9]+)?)\s*\)$")


def parse_beta(text: str) -> tuple[float, Optional[Fraction]]:
    """Either a float or an exact 'ln(q)' literal with rational q."""
    m = _LN_RE.match(text.strip())
    if m:
        base = Fraction(m.group(1))
        if base <= 0:
            raise UsageError("ln() literal needs a positive rational")
        return math.log(base), base
    try:
        return float(text), None
    except ValueError as exc:
        raise UsageError(f"cannot parse beta {text!r}") from exc


def make_dynamics(r: Sequence[float], beta_text: str) -> Dynamics:
    beta, base = parse_beta(beta_text)
    if base is not None:
        return Dynamics.from_log_base(r, base)
    return Dynamics(tuple(float(x) for x in r), beta)


def parse_degree(text: str, rank: int) -> Degree:
    parts = [p.strip() for p in text.split(",")]
    try:
        n = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"cannot parse degree {text!r}") from exc
    if len(n) != rank:
        raise UsageError(f"degree has {len(n)} entries, rank is {rank}")
    return n


def parse_phases(text: str) -> tuple:
    out = []
    for p in text.split(","):
        p = p.strip()
        if not p:
            continue
        if "/" in p:
            out.append(Fraction(p))
        else:
            try:
                out.append(Fraction(p))
            except ValueError:
                out.append(float(p))
    return tuple(out)


def parse_word(g: KGraph, text: str):
    """Edge-id word 'e1.e2.e3' or identity '@v'."""
    text = text.strip()
    if text.startswith("@"):
        return g.identity(text[1:])
    ids = [p for p in text.split(".") if p]
    if not ids:
        raise UsageError("empty word (use @v for an identity path)")
    return g.normal_form(ids)


def load_graph_file(path: str) -> KGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return load_kgraph(fh.read())


def load_vector_file(path: str, g: KGraph) -> tuple[float, ...]:
    """Vertex:value pairs, either a JSON object or one 'v value' line
    per vertex."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    values: dict[str, float] = {}
    stripped = text.lstrip()
    if stripped.startswith("{"):
        obj = json.loads(text)
        for v, x in obj.items():
            values[v] = float(x)
    else:
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if ":" in line:
                v, x = line.split(":", 1)
            else:
                v, x = line.split(None, 1)
            values[v.strip()] = float(x)
    out = []
    for v in g.vertices:
        if v not in values:
            raise UsageError(f"vector file misses vertex {v!r}")
        out.append(values[v])
    return tuple(out)


# ---------------------------------------------------------------------------
# Report plumbing
# ---------------------------------------------------------------------------

def emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        _emit_text(report)


def _emit_text(report: dict, indent: int = 0) -> None:
    pad = "  " * indent
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            print(f"{pad}{key}:")
            _emit_text(value, indent + 1)
        elif isinstance(value, list):
            print(f"{pad}{key}:")
            for item in value:
                if isinstance(item, dict):
                    print(f"{pad}  -")
                    _emit_text(item, indent + 2)
                else:
                    print(f"{pad}  - {item}")
        else:
            print(f"{pad}{key}: {value}")


def base_report(command: str, args: argparse.Namespace) -> dict:
    inputs = {"graph": args.graph}
    for name in ("r", "beta", "beta_scan", "seed"):
        if getattr(args, name, None) is not None:
            inputs[name] = getattr(args, name)
    return {"schema": SCHEMA, "command": command, "inputs": inputs}


def per_obj(per: pathspace.PeriodicityGroup) -> dict:
    return {
        "basis": [list(row) for row in per.basis],
        "rank": per.rank,
        "certification": {
            "box": list(per.box),
            "p_max": per.p_max,
            "held": len(per.held),
            "refuted": len(per.refuted),
            "unknown": len(per.unknown),
        },
    }


def component_obj(g: KGraph, info: harmonic.HarmonicComponentInfo) -> dict:
    obj = {
        "vertices": sorted(info.component.vertices),
        "trivial": info.component.trivial,
        "spectrum": [float(x) for x in info.spectrum],
        "positive": info.positive,
        "harmonic": info.harmonic,
    }
    if info.indeterminate:
        obj["indeterminate"] = True
    if info.blocking:
        obj["blocking"] = [
            {"vertices": sorted(d.vertices), "spectrum_gap": list(gap)}
            for d, gap in info.blocking
        ]
    if info.x is not None:
        obj["x"] = {v: float(info.x[g.vertex_index(v)]) for v in g.vertices}
    return obj


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_validate(args: argparse.Namespace) -> int:
    report = base_report("validate", args)
    try:
        g = load_graph_file(args.graph)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KGraphError as exc:
        report["results"] = {"valid": False, "errors": [str(exc)]}
        emit(report, args.format)
        return 1
    report["results"] = {
        "valid": True,
        "rank": g.rank,
        "vertices": len(g.vertices),
        "edges": len(g.edge_ids()),
        "squares": len(g.squares),
        "components": len(g.components()),
    }
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(g))
        report["results"]["dot"] = args.dot
    emit(report, args.format)
    return 0


def cmd_kms(args: argparse.Namespace) -> int:
    report = base_report("kms", args)
    try:
        g = load_graph_file(args.graph)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KGraphError as exc:
        report["results"] = {"valid": False, "errors": [str(exc)]}
        emit(report, args.format)
        return 1
    dyn = make_dynamics(parse_r(args.r, g.rank), args.beta)
    box = (args.per_box,) * g.rank if args.per_box else None
    entries = []
    for info in harmonic.harmonic_components_for(g, dyn, args.eps_match,
                                                 args.eps_cmp):
        per = pathspace.periodicity_group(g, info.component, box,
                                          args.per_depth, args.budget)
        obj = component_obj(g, info)
        obj["per"] = per_obj(per)
        obj["torus_dimension"] = per.rank
        entries.append(obj)
    report["results"] = {
        "state_families": entries,
        "count": len(entries),
        "note": "no KMS states at this (r, beta)" if not entries else
                "each family is a torus of the stated dimension",
    }
    emit(report, args.format)
    return 0


def cmd_phase(args: argparse.Namespace) -> int:
    report = base_report("phase", args)
    try:
        g = load_graph_file(args.graph)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KGraphError as exc:
        report["results"] = {"valid": False, "errors": [str(exc)]}
        emit(report, args.format)
        return 1
    r = parse_r(args.r, g.rank)
    lo, hi = None, None
    if args.beta_scan:
        try:
            lo_s, hi_s = args.beta_scan.split(":")
            lo, hi = float(lo_s), float(hi_s)
        except ValueError as exc:
            raise UsageError(f"bad scan range {args.beta_scan!r}") from exc
        if not lo < hi:
            raise UsageError("scan range needs lo < hi")
    temps = harmonic.admissible_temperatures(g, r, args.eps_match, args.eps_cmp)
    entries = []
    for t in temps:
        if t.all_beta:
            entries.append(
                {
                    "component": sorted(t.component.vertices),
                    "all_beta": True,
                    "spectrum": [float(x) for x in t.spectrum],
                }
            )
        else:
            if lo is not None and not (lo <= t.beta <= hi):
                continue
            entries.append(
                {
                    "component": sorted(t.component.vertices),
                    "beta": t.beta,
                    "spectrum": [float(x) for x in t.spectrum],
                }
            )
    report["results"] = {"admissible": entries, "count": len(entries)}
    emit(report, args.format)
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    report = base_report("decompose", args)
    try:
        g = load_graph_file(args.graph)
        values = load_vector_file(args.vector, g)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KGraphError as exc:
        report["results"] = {"valid": False, "errors": [str(exc)]}
        emit(report, args.format)
        return 1
    dyn = make_dynamics(parse_r(args.r, g.rank), args.beta)
    hv = harmonic.HarmonicVector(g, dyn, values)
    try:
        dec = harmonic.decompose(hv, eps_cmp=args.eps_cmp)
    except harmonic.ResidualTooLarge as exc:
        check = harmonic.verify_harmonic(g, values, dyn)
        report["results"] = {
            "error": str(exc),
            "harmonic_check": {
                "ok": check.ok,
                "one_norm_error": check.one_norm_error,
                "max_residual": check.max_residual,
            },
        }
        emit(report, args.format)
        return 1
    report["results"] = {
        "parts": [
            {"component": sorted(c.vertices), "weight": t} for c, t in dec.parts
        ],
        "residual": dec.residual,
        "weight_sum": dec.weight_sum,
    }
    emit(report, args.format)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    report = base_report("eval", args)
    try:
        g = load_graph_file(args.graph)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KGraphError as exc:
        report["results"] = {"valid": False, "errors": [str(exc)]}
        emit(report, args.format)
        return 1
    dyn = make_dynamics(parse_r(args.r, g.rank), args.beta)
    try:
        lam = parse_word(g, args.lam)
        gam = parse_word(g, args.gam) if args.gam else lam
        a = algebra.spanning(g, lam, gam)
    except (KGraphError, ValueError) as exc:
        report["results"] = {"error": str(exc)}
        emit(report, args.format)
        return 1
    if args.state == "gauge":
        infos = harmonic.harmonic_components_for(g, dyn, args.eps_match,
                                                 args.eps_cmp)
        if not infos:
            report["results"] = {"error": "no KMS states at this (r, beta)"}
            emit(report, args.format)
            return 1
        info = _pick_component(infos, args.component)
        hv = harmonic.HarmonicVector(
            g, dyn, tuple(float(x) for x in info.x)
        )
        value = algebra.evaluate(algebra.gauge_state(hv), a)
        report["results"] = _value_obj(value)
        report["results"]["state"] = {
            "kind": "gauge-invariant",
            "component": sorted(info.component.vertices),
        }
    else:
        infos = harmonic.harmonic_components_for(g, dyn, args.eps_match,
                                                 args.eps_cmp)
        if not infos:
            report["results"] = {"error": "no KMS states at this (r, beta)"}
            emit(report, args.format)
            return 1
        info = _pick_component(infos, args.component)
        box = (args.per_box,) * g.rank if args.per_box else None
        state = algebra.twisted_state(
            g, dyn, info.component,
            parse_phases(args.xi) if args.xi else (),
            depth=args.cyl_depth, box=box, p_max=args.per_depth,
            budget=args.budget,
        )
        import warnings as _warnings

        with _warnings.catch_warnings(record=True) as caught:
            _warnings.simplefilter("always")
            value = algebra.evaluate(state, a)
        report["results"] = _value_obj(value)
        report["results"]["state"] = {
            "kind": "twisted",
            "component": sorted(info.component.vertices),
            "xi": [str(p) for p in state.xi.phases],
            "per": per_obj(state.per),
        }
        notes = [str(w.message) for w in caught
                 if issubclass(w.category, algebra.UncertifiedPeriodicity)]
        if notes:
            report["results"]["warnings"] = notes
    emit(report, args.format)
    return 0


def _pick_component(infos, selector: Optional[str]):
    if selector is None:
        return infos[0]
    for info in infos:
        if selector in info.component.vertices:
            return info
    raise UsageError(f"no matching component contains vertex {selector!r}")


def _value_obj(value) -> dict:
    if isinstance(value, algebra.ComplexBox):
        obj = {
            "interval": {
                "re": [value.re_lo, value.re_hi],
                "im": [value.im_lo, value.im_hi],
            }
        }
        if value.is_point(1e-12):
            mid = value.midpoint()
            obj["value"] = {"re": mid.real, "im": mid.imag}
        if value.notes:
            obj["notes"] = list(value.notes)
        return obj
    z = complex(value)
    return {"value": {"re": z.real, "im": z.imag}, "exact": not isinstance(
        value, (float, complex))}


# ---------------------------------------------------------------------------
# Verify
# ---------------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace) -> int:
    report = base_report("verify", args)
    try:
        g = load_graph_file(args.graph)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KGraphError as exc:
        report["results"] = {"valid": False, "errors": [str(exc)]}
        emit(report, args.format)
        return 1
    dyn = make_dynamics(parse_r(args.r, g.rank), args.beta)
    rng = random.Random(args.seed)
    suites = [s.strip() for s in args.suites.split(",") if s.strip()]
    cap = parse_degree(args.cap, g.rank)
    depth = parse_degree(args.cyl_depth, g.rank)
    infos = harmonic.harmonic_components_for(g, dyn, args.eps_match,
                                             args.eps_cmp)
    results: dict[str, dict] = {}
    all_ok = True

    def vector_for(info) -> tuple[float, ...]:
        values = [float(x) for x in info.x]
        if args.perturb_psi:
            values[0] += args.perturb_psi
            total = sum(values)
            values = [x / total for x in values]
        return tuple(values)

    if "kms" in suites:
        worst = 0.0
        checked = 0
        for info in infos:
            hv = harmonic.HarmonicVector(g, dyn, vector_for(info))
            state = algebra.gauge_state(hv)
            family = algebra.spanning_family(g, cap)
            elements = [algebra.spanning(g, s.lam, s.gam) for s in family]
            pairs = [(a, b) for a in elements for b in elements]
            extra = _random_pairs(g, rng, args.random_pairs, cap)
            rep = algebra.verify_kms(state, pairs + extra, dyn, tol=args.tol_kms)
            worst = max(worst, rep.max_violation)
            checked += rep.checked
        ok = bool(infos) and worst <= args.tol_kms
        results["kms"] = {"ok": ok, "max_violation": worst, "checked": checked,
                          "states": len(infos)}
        all_ok = all_ok and ok

    if "consistency" in suites:
        worst = 0.0
        ok = bool(infos)
        count = 0
        for info in infos:
            hv = harmonic.HarmonicVector(g, dyn, vector_for(info))
            rep = pathspace.check_consistency(
                pathspace.CylinderMeasure(hv), depth, tol=args.tol_cyl
            )
            worst = max(worst, rep.max_error, rep.total_mass_error)
            count += rep.checked
            ok = ok and rep.ok
        results["consistency"] = {"ok": ok, "max_error": worst, "checked": count}
        all_ok = all_ok and ok

    if "quasi" in suites:
        worst = 0.0
        ok = bool(infos)
        count = 0
        for info in infos:
            hv = harmonic.HarmonicVector(g, dyn, vector_for(info))
            measure = pathspace.CylinderMeasure(hv)
            pairs = _random_source_pairs(g, rng, 50, cap)
            rep = pathspace.check_quasi_invariance(measure, pairs,
                                                   tol=args.tol_cyl)
            worst = max(worst, rep.max_relative_error)
            count += rep.checked
            ok = ok and rep.ok
        results["quasi"] = {"ok": ok, "max_relative_error": worst,
                            "checked": count}
        all_ok = all_ok and ok

    if "finde" in suites:
        f1 = spectral.default_well_chosen(g)
        f2 = f1.extended([(len(g.vertices) + 1,) * g.rank])
        worst = 0.0
        ok = True
        for info in infos:
            rep = harmonic.f_independence_check(g, info.component, f1, f2,
                                                tol=args.tol_finde)
            worst = max(worst, rep.max_diff)
            ok = ok and rep.passed
        results["finde"] = {"ok": ok, "max_diff": worst, "states": len(infos)}
        all_ok = all_ok and ok

    if "symmetry" in suites:
        ok = True
        checked = 0
        worst = 0.0
        for info in infos:
            per = pathspace.periodicity_group(g, info.component)
            if per.rank == 0:
                continue
            grid = [Fraction(i, 4) for i in range(4)]
            etas = []
            for i in range(min(g.rank, 2)):
                for q in grid[1:]:
                    eta = [Fraction(0)] * g.rank
                    eta[i] = q
                    etas.append(tuple(eta))
            for eta in etas:
                rep = algebra.verify_symmetry(
                    g, dyn, info.component, (), eta, per=per,
                    depth=depth[0] if depth else 2,
                )
                checked += rep.checked
                worst = max(worst, rep.equivariance_max_err)
                ok = ok and rep.ok
        results["symmetry"] = {"ok": ok, "checked": checked,
                               "max_equivariance_error": worst}
        all_ok = all_ok and ok

    if "per" in suites:
        ok = True
        details = []
        for info in infos:
            per = pathspace.periodicity_group(g, info.component)
            closure_ok = _per_subgroup_check(g, info.component, per)
            details.append(
                {
                    "component": sorted(info.component.vertices),
                    "per": per_obj(per),
                    "closure_ok": closure_ok,
                }
            )
            ok = ok and closure_ok
        results["per"] = {"ok": ok, "groups": details}
        all_ok = all_ok and ok

    passed = sum(1 for r in results.values() if r["ok"])
    report["results"] = results
    report["passed"] = passed
    report["failed"] = len(results) - passed
    report["ok"] = all_ok
    emit(report, args.format)
    return 0 if all_ok else 1


def _per_subgroup_check(g, c, per: pathspace.PeriodicityGroup) -> bool:
    """Re-test sums and negations of basis generators."""
    from .kgraph import deg_join

    vectors = list(per.basis)
    combos = []
    for i, u in enumerate(vectors):
        combos.append(tuple(-x for x in u))
        combos.append(tuple(2 * x for x in u))
        for v in vectors[i + 1:]:
            combos.append(tuple(x + y for x, y in zip(u, v)))
    for gvec in combos:
        if any(abs(x) > b for x, b in zip(gvec, per.box)):
            continue
        m = tuple(max(x, 0) for x in gvec)
        n = tuple(max(-x, 0) for x in gvec)
        p_max = len(c.vertices) + max(deg_join(m, n))
        rel = pathspace.shift_relation_holds(g, c, m, n, p_max)
        if rel.status == "refuted":
            return False
    return True


def _random_pairs(g, rng: random.Random, count: int, cap: Degree):
    """Seeded random spanning-element pairs at one degree above the cap."""
    out = []
    bigger = tuple(c + 1 for c in cap)
    family = algebra.spanning_family(g, bigger)
    if not family:
        return out
    for _ in range(count):
        s1 = family[rng.randrange(len(family))]
        s2 = family[rng.randrange(len(family))]
        out.append(
            (algebra.spanning(g, s1.lam, s1.gam),
             algebra.spanning(g, s2.lam, s2.gam))
        )
    return out


def _random_source_pairs(g, rng: random.Random, count: int, cap: Degree):
    from .pathspace import _degrees_upto

    paths = []
    for n in _degrees_upto(cap):
        for v in g.vertices:
            paths.extend(g.enumerate_paths(v, n))
    by_source: dict[str, list] = {}
    for p in paths:
        by_source.setdefault(p.source, []).append(p)
    pools = [ps for ps in by_source.values() if len(ps) >= 1]
    out = []
    for _ in range(count):
        pool = pools[rng.randrange(len(pools))]
        lam = pool[rng.randrange(len(pool))]
        gam = pool[rng.randrange(len(pool))]
        out.append((lam, gam))
    return out


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgraphkms",
        description="KMS-state analysis for finite higher-rank graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_dynamics=True):
        p.add_argument("--graph", required=True, help="graph document (JSON)")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--eps-cmp", dest="eps_cmp", type=float, default=1e-9,
                       help="comparison tolerance for spectral inequalities")
        p.add_argument("--eps-match", dest="eps_match", type=float,
                       default=1e-9, help="matching tolerance for beta*r")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=200_000,
                       help="path enumeration budget")
        p.add_argument("--per-box", dest="per_box", type=int, default=None,
                       help="periodicity search box bound per coordinate")
        p.add_argument("--per-depth", dest="per_depth", type=int, default=None,
                       help="periodicity certification depth")
        if needs_dynamics:
            p.add_argument("--r", required=True,
                           help="comma-separated dynamics vector")
            p.add_argument("--beta", required=True,
                           help="inverse temperature; floats or ln(q)")

    p = sub.add_parser("validate", help="parse and certify a graph document")
    common(p, needs_dynamics=False)
    p.add_argument("--dot", default=None, help="write a DOT rendering here")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("kms", help="list the KMS state families at (r, beta)")
    common(p)
    p.set_defaults(func=cmd_kms)

    p = sub.add_parser("phase", help="solve the admissible betas per component")
    common(p, needs_dynamics=False)
    p.add_argument("--r", required=True)
    p.add_argument("--beta-scan", dest="beta_scan", default=None,
                   help="lo:hi range filter")
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("verify", help="run verification suites")
    common(p)
    p.add_argument("--suites",
                   default="kms,consistency,quasi,finde,symmetry,per")
    p.add_argument("--cap", default=None,
                   help="degree cap for spanning families (default 2,2,..)")
    p.add_argument("--cyl-depth", dest="cyl_depth", default=None,
                   help="consistency check depth (default 2,2,..)")
    p.add_argument("--perturb-psi", dest="perturb_psi", type=float,
                   default=0.0, help="inject a harmonic-vector perturbation "
                   "(negative control)")
    p.add_argument("--random-pairs", dest="random_pairs", type=int, default=10)
    p.add_argument("--tol-kms", dest="tol_kms", type=float, default=1e-9)
    p.add_argument("--tol-cyl", dest="tol_cyl", type=float, default=1e-10)
    p.add_argument("--tol-finde", dest="tol_finde", type=float, default=1e-8)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decompose", help="decompose a harmonic vector")
    common(p)
    p.add_argument("--vector", required=True, help="vertex:value file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("eval", help="evaluate a state on t_lam t_gam*")
    common(p)
    p.add_argument("--lam", required=True, help="edge word e1.e2 or @v")
    p.add_argument("--gam", default=None, help="defaults to lam")
    p.add_argument("--state", choices=("gauge", "twisted"), default="gauge")
    p.add_argument("--component", default=None,
                   help="pick the family containing this vertex")
    p.add_argument("--xi", default=None,
                   help="character phases against the Per basis, e.g. 1/2,0")
    p.add_argument("--cyl-depth", dest="cyl_depth", type=int, default=2)
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "cap", None) is None and args.command == "verify":
        args.cap = None  # resolved after the graph loads
    try:
        if args.command == "verify":
            # defaults that depend on the graph's rank
            with open(args.graph, "r", encoding="utf-8") as fh:
                from .kgraph import parse_kgraph

                rank = parse_kgraph(fh.read()).rank
            if args.cap is None:
                args.cap = ",".join(["2"] * rank)
            if args.cyl_depth is None:
                args.cyl_depth = ",".join(["2"] * rank)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
