"""Command-line front end.

Every command reads one JSON document (a path, inline JSON, ``-`` for stdin
or ``fixture:NAME``) and writes one JSON document tagged with the schema
version.  Rationals are rendered as ``"num/den"`` strings.

Exit codes: 0 success, 1 invalid input, 2 computation failure, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import fixtures
from .affine import AffineConfig, SigmaAction, cartan_decomposition, sigma_fixed_waff
from .depth import (
    GroupVertexDatum, InducedParameterDepths, TorusDatum, char_param_std_depth,
    check_phi_bound, depth_transfer_group, depth_transfer_torus, ell_bound_group,
    ell_bound_torus, param_depth_induced, root_bound_check,
)
from .errors import ComputationError, ResourceLimitError, ValidationError
from .plcalc import PLFunction, as_fraction, evaluate
from .ramification import (
    RamificationProfile, herbrand_phi, herbrand_psi, is_tame, lower_jumps, normalized_phi,
    tower_phi, upper_jumps,
)
from .rootdata import (
    GaloisAction, RootDatum, coinvariants, elliptic_data, fixed_subgroup, image_rank,
    induced_endomorphism, is_elliptic,
)

SCHEMA = "depthcalc/v1"
COMMANDS = ("herbrand", "depth-torus", "phi-group", "ell-bound", "coinvariants",
            "sigma-fixed", "cartan", "hecke", "finite-hecke", "selftest")


# ---------------------------------------------------------------- rendering

def render(obj):
    """Make ``obj`` JSON-safe with exact rationals as strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, float)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, PLFunction):
        return render_pl(obj)
    if isinstance(obj, dict):
        return {str(k): render(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [render(x) for x in obj]
    if hasattr(obj, "to_json"):
        return render(obj.to_json())
    raise TypeError(f"cannot render {type(obj).__name__}")


def render_pl(f: PLFunction) -> dict:
    f = f.canonical()
    return {"breakpoints": [[str(x), str(y)] for x, y in f.breakpoints],
            "final_slope": str(f.final_slope)}


def _table(doc: dict, indent: str = "") -> str:
    lines = []
    for k in sorted(doc):
        v = doc[k]
        if isinstance(v, dict) and v and len(json.dumps(v)) > 70:
            lines.append(f"{indent}{k}:")
            lines.append(_table(v, indent + "  "))
        else:
            text = v if isinstance(v, str) else json.dumps(v, sort_keys=True)
            lines.append(f"{indent}{k}: {text}")
    return "\n".join(lines)


# ---------------------------------------------------------------- input

def load_input(arg: str | None):
    if arg is None:
        raise ValidationError("this command needs --input")
    if arg.startswith("fixture:"):
        return fixtures.get(arg[len("fixture:"):])
    text = sys.stdin.read() if arg == "-" else None
    if text is None:
        stripped = arg.lstrip()
        if stripped.startswith(("{", "[", '"')):
            text = arg
        else:
            try:
                text = Path(arg).read_text()
            except OSError as exc:
                raise ValidationError(f"cannot read {arg}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"input is not valid JSON: {exc}") from None


def _resolve(value):
    """Nested ``"fixture:NAME"`` strings are expanded in place."""
    if isinstance(value, str) and value.startswith("fixture:"):
        return fixtures.get(value[len("fixture:"):])
    return value


def _require(data: dict, key: str):
    if not isinstance(data, dict) or key not in data:
        raise ValidationError(f"input needs '{key}'")
    return _resolve(data[key])


def _unwrap_torus(data):
    data = _resolve(data)
    while isinstance(data, dict) and "torus" in data:
        data = _resolve(data["torus"])
    return data


def _torus(data) -> TorusDatum:
    return TorusDatum.from_json(_unwrap_torus(data))


def _vertex(data) -> GroupVertexDatum:
    data = _resolve(data)
    if not isinstance(data, dict) or "tori" not in data:
        raise ValidationError("vertex datum JSON needs 'tori'")
    return GroupVertexDatum.from_json({
        "tori": [_unwrap_torus(t) for t in data["tori"]],
        "root_fields": [_resolve(a) for a in data.get("root_fields", [])],
    })


def _root_datum_and_action(data: dict):
    rd = RootDatum.from_json(_require(data, "root_datum"))
    act = GaloisAction.from_json(data, rd.rank)
    act.check_against(rd)
    return rd, act


# ---------------------------------------------------------------- commands

def cmd_herbrand(data, args) -> dict:
    data = _resolve(data)
    if isinstance(data, dict) and "bottom" in data:
        bottom = RamificationProfile.from_json(_resolve(data["bottom"]))
        top = RamificationProfile.from_json(_resolve(data["top"]))
        comp = tower_phi(herbrand_phi(bottom), herbrand_phi(top))
        out = {"tower_phi": comp}
        if "composite" in data:
            direct = herbrand_phi(RamificationProfile.from_json(_resolve(data["composite"])))
            out["composite_phi"] = direct
            out["tower_law_holds"] = comp == direct
        return out
    if isinstance(data, dict) and "towers" in data:
        return {"towers": [cmd_herbrand(t, args) for t in data["towers"]]}
    prof = RamificationProfile.from_json(data.get("profile", data) if isinstance(data, dict) else data)
    out = {
        "profile": prof.to_json(),
        "tame": is_tame(prof),
        "phi": herbrand_phi(prof),
        "psi": herbrand_psi(prof),
        "normalized_phi": normalized_phi(prof),
        "normalized_is_identity": normalized_phi(prof) == PLFunction.identity(),
        "lower_jumps": [[u, n] for u, n in lower_jumps(prof)],
        "upper_jumps": [[s, n] for s, n in upper_jumps(prof).jumps],
    }
    if isinstance(data, dict) and "t" in data:
        ts = data["t"] if isinstance(data["t"], list) else [data["t"]]
        out["values"] = {str(as_fraction(t)): {"phi": evaluate(herbrand_phi(prof), t),
                                               "normalized_phi": evaluate(normalized_phi(prof), t)}
                         for t in ts}
    return out


def cmd_depth_torus(data, args) -> dict:
    T = _torus(data)
    r = as_fraction(_require(data, "r"))
    if len(T.generators) != 1:
        raise ValidationError("depth-torus needs an induced torus (a single generator)")
    R = T.generators[0][0]
    active = data.get("active", [True] * len(R.components))
    if len(active) != len(R.components):
        raise ValidationError("'active' needs one flag per torus factor")
    std = [char_param_std_depth(E, r) if on else Fraction(0) for E, on in zip(R.components, active)]
    dep = param_depth_induced(R, InducedParameterDepths(tuple(std)))
    dep_std = max(std)
    phi = depth_transfer_torus(T)
    phi_T = evaluate(phi, dep)
    return {
        "r": r, "dep": dep, "dep_std": dep_std, "phi_T": phi_T,
        "strict": phi_T > dep_std,
        "phi_bound_holds": check_phi_bound(T, dep, dep_std),
        "std_depths": std,
        "transfer_function": phi,
        "ell_bound": ell_bound_torus(T, dep),
    }


def cmd_phi_group(data, args) -> dict:
    V = _vertex(_require(data, "vertex"))
    phi = depth_transfer_group(V)
    out = {"transfer_function": phi}
    if "r" in data:
        r = as_fraction(data["r"])
        ell = ell_bound_group(V, r)
        out.update({"r": r, "phi_G": evaluate(phi, r), "ell_bound": ell,
                    "root_bounds": [root_bound_check(a, r, ell) for a in V.root_fields]})
    return out


def cmd_ell_bound(data, args) -> dict:
    r = as_fraction(_require(data, "r"))
    if "vertex" in data:
        V = _vertex(data["vertex"])
        return {"r": r, "ell": ell_bound_group(V, r), "phi": evaluate(depth_transfer_group(V), r)}
    T = _torus(data)
    return {"r": r, "ell": ell_bound_torus(T, r), "phi": evaluate(depth_transfer_torus(T), r)}


def cmd_coinvariants(data, args) -> dict:
    if "root_datum" in data:
        rd, act = _root_datum_and_action(data)
        n = rd.rank
    else:
        n = int(_require(data, "rank"))
        act = GaloisAction.from_json(data, n)
        rd = None
    gens = [list(map(list, g)) for g in act.inertia_gens]
    A = coinvariants(n, gens)
    F = fixed_subgroup(A, induced_endomorphism(A, act.frobenius))
    out = {
        "coinvariants": {"group": A.describe(), **A.to_json()},
        "fixed": {"group": F.describe(), **F.to_json()},
        "image_rank": image_rank(n, gens),
        "rank_accounting": A.free_rank + image_rank(n, gens) == n,
    }
    if rd is not None:
        E = elliptic_data(rd, act)
        out["elliptic"] = is_elliptic(rd, act)
        out["elliptic_fixed_group"] = E.describe()
    return out


def cmd_sigma_fixed(data, args) -> dict:
    rd, act = _root_datum_and_action(data)
    if act.inertia_gens:
        raise ValidationError("sigma-fixed works over the maximal unramified extension; "
                              "inertia must act trivially")
    cfg = AffineConfig(rd)
    rep = sigma_fixed_waff(cfg, SigmaAction(cfg, act.frobenius), args.radius)
    return {
        "radius": rep.radius,
        "elliptic": rep.elliptic,
        "stable_positive_system": rep.stable_positive_system,
        "hypotheses_hold": rep.hypotheses_hold,
        "only_identity": rep.only_identity,
        "warnings": rep.warnings,
        "count": len(rep.elements),
        "elements": [{"translation": list(a.translation),
                      "finite": [list(r) for r in cfg.weyl[a.finite]],
                      "length": cfg.length(a)} for a in rep.elements],
    }


def cmd_cartan(data, args) -> dict:
    rd, act = _root_datum_and_action(data)
    rep = cartan_decomposition(rd, act, args.radius)
    orbit = lambda o: {"representative": list(o.representative), "in_ball": o.size,  # noqa: E731
                       "orbit_size": o.orbit_size}
    return {
        "radius": args.radius,
        "fixed_group": {"group": rep.fixed_group.describe(), **rep.fixed_group.to_json()},
        "weyl_commuting": rep.weyl_fixed,
        "orbits": [orbit(o) for o in rep.orbits],
        "split_orbits": [orbit(o) for o in rep.split_orbits],
    }


def cmd_hecke(data, args) -> dict:
    from . import hecke as hk

    alg = hk.algebra_from_json(data)
    out = {
        "algebra": alg.describe(),
        "quadratic": hk.check_quadratic(alg).to_json(),
        "braid": hk.check_braid(alg).to_json(),
        "omega_automorphism": hk.check_omega_automorphism(alg).to_json(),
        "associativity": hk.check_associativity(alg, trials=30, seed=args.seed),
    }
    if "products" in data:
        out["products"] = [
            {"left": list(a), "right": list(b), "product": (alg.T(a) * alg.T(b)).to_json()}
            for a, b in data["products"]]
    if "match" in data:
        other = hk.algebra_from_json(_resolve(data["match"]))
        out["match"] = hk.match_presentations(alg, other).to_json()
    if "oracle" in data:
        oracle_cfg = _resolve(data["oracle"])
        table, _ = _finite_table(oracle_cfg, args)
        basis = [tuple(b) for b in oracle_cfg.get("basis", [])]
        out["oracle"] = hk.compare_with_finite_oracle(alg, table.constants, basis).to_json()
    if "induction" in data:
        d1, d2 = (list(data["induction"]) + [None])[:2]
        out["q_from_induction"] = hk.q_from_induction(int(d1), None if d2 is None else int(d2))
    return out


def _finite_table(data, args):
    from . import finitemodels as fm

    ring = fm.TruncRing(data.get("ring", "zmod"), int(_require(data, "p")), int(_require(data, "ell")))
    cap = args.cap if args.cap is not None else fm.ORDER_CAP
    ring_cap = args.ring_cap if args.ring_cap is not None else fm.RING_CAP
    G = fm.build_group(ring, data.get("group", "SL2"), cap=cap, ring_cap=ring_cap)
    sub = data.get("subgroup", "iwahori")
    if sub == "iwahori":
        K = fm.iwahori_subgroup(G)
    elif sub == "congruence":
        K = fm.congruence_subgroup(G, int(data.get("level", 1)))
    elif sub == "whole":
        K = frozenset(range(len(G)))
    elif sub == "trivial":
        K = frozenset({G.identity})
    else:
        raise ValidationError(f"unknown subgroup {sub!r}")
    return fm.hecke_structure_constants(G, K), (G, K, ring)


def cmd_finite_hecke(data, args) -> dict:
    from . import finitemodels as fm

    table, (G, K, ring) = _finite_table(data, args)
    sizes = table.cosets.sizes
    n = table.dim
    mass = all(sum(table.constants[i][j][k] * sizes[k] for k in range(n))
               == Fraction(sizes[i] * sizes[j], len(K)) for i in range(n) for j in range(n))
    out = {
        "ring": ring.label(), "group": G.gtype, "group_order": len(G), "subgroup_order": len(K),
        "representatives": [list(G.elements[r]) for r in table.cosets.representatives],
        "table": table.to_json(),
        "mass_conservation": mass,
    }
    if "transfer" in data:
        how = data["transfer"]
        if how == "frobenius":
            rmap = fm.ring_automorphism_frobenius(ring)
        elif isinstance(how, dict) and "t" in how:
            rmap = fm.ring_automorphism_substitution(ring, int(how["t"]))
        else:
            raise ValidationError("transfer must be 'frobenius' or {'t': image}")
        iso = fm.iso_from_ring_map(G, G, rmap)
        K2 = frozenset(iso[k] for k in K)
        out["transfer"] = fm.transfer_check(G, K, G, K2, iso).to_json()
    if "idempotent" in data:
        m, r = int(data["idempotent"]["m"]), int(data["idempotent"]["r"])
        Km, Kr = fm.congruence_subgroup(G, m), fm.congruence_subgroup(G, r)
        out["idempotent"] = fm.idempotent_transfer_check(G, Km, Kr, G, Km, Kr, list(range(len(G))))
    return out


def cmd_selftest(data, args) -> dict:
    from .acceptance import run_all

    only = None
    if isinstance(data, dict) and "criteria" in data:
        only = set(int(k) for k in data["criteria"])
    results = run_all(seed=args.seed, only=only)
    passed = sum(r.ok for r in results)
    return {"passed": passed, "total": len(results),
            "results": [r.to_json() for r in results],
            "lines": [r.line() for r in results], "_failed": passed != len(results)}


HANDLERS = {
    "herbrand": cmd_herbrand, "depth-torus": cmd_depth_torus, "phi-group": cmd_phi_group,
    "ell-bound": cmd_ell_bound, "coinvariants": cmd_coinvariants,
    "sigma-fixed": cmd_sigma_fixed, "cartan": cmd_cartan, "hecke": cmd_hecke,
    "finite-hecke": cmd_finite_hecke, "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="depthcalc", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", "-i", help="path, inline JSON, '-' or fixture:NAME")
    parser.add_argument("--output", "-o", help="write here instead of stdout")
    parser.add_argument("--format", choices=("json", "table"), default="json")
    parser.add_argument("--radius", type=int, default=3)
    parser.add_argument("--cap", type=int, default=None, help="group order cap (finite models)")
    parser.add_argument("--ring-cap", type=int, default=None, help="ring size cap (finite models)")
    parser.add_argument("--seed", type=int, default=0)
    return parser


def _error(kind: str, exc: Exception, code: int) -> int:
    doc = {"schema": SCHEMA, "error": {"type": kind, "message": str(exc)}}
    print(json.dumps(doc, sort_keys=True), file=sys.stderr)
    return code


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        data = {} if args.command == "selftest" and args.input is None else load_input(args.input)
        result = HANDLERS[args.command](data, args)
    except ResourceLimitError as exc:
        return _error("resource", exc, 3)
    except ComputationError as exc:
        return _error("computation", exc, 2)
    except (ValidationError, KeyError, TypeError, ValueError) as exc:
        return _error("validation", exc, 1)
    except ArithmeticError as exc:
        return _error("computation", exc, 2)
    failed = isinstance(result, dict) and result.pop("_failed", False)
    doc = {"schema": SCHEMA, "command": args.command, **render(result)}
    if args.format == "json":
        text = json.dumps(doc, sort_keys=True, indent=2)
    elif args.command == "selftest":
        text = "\n".join(doc["lines"] + [f"{doc['passed']}/{doc['total']} criteria passed"])
    else:
        text = _table(doc)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return 2 if failed else 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
