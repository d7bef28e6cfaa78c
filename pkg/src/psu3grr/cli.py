"""Command-line driver: run the pipeline stages and emit JSON certificates.

Stages and their dependencies:

    search      parameter search for (b, a)
    construct   build X, Y, Z and check orders          (needs search)
    order       exact group order on isotropic points   (needs construct)
    irreducible invariant-subspace and commutant tests  (needs construct)
    aut         automorphism-triviality sweep           (needs order)
    graph       explicit Cayley graph (gated by size)   (needs order)

The GRR verdict is GRR_CONFIRMED only when search, construct, order,
irreducible and aut all ran and passed; running a subset yields verdict
INCOMPLETE.  Certificates are deterministic: byte-identical across runs
except for the generated_at timestamp, which is excluded from the
certificate hash.

Exit codes: 0 success, 2 refusal (q out of scope), 3 stage failure,
4 internal inconsistency (fast path and oracle disagree impossibly).

The environment variable GRR_SEED is accepted and ignored: no randomness
affects any result; the variable exists for harness compatibility only.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import sys
from dataclasses import dataclass

from . import __version__
from .autcheck import aut_group_trivial
from .cayley import build_graph, edge_list_sha256, export_graph
from .construct import (ConstructionError, NoValidParams, UnsupportedQ,
                        build_triple, count_valid_b, search_params)
from .gf import field
from .grouporder import (IsotropicAction, commutant_dimension,
                         dihedral_image_order, expected_group_order,
                         group_order, invariant_subspace_test)
from .mat3 import matrix_order, projective_order

EXIT_OK = 0
EXIT_REFUSED = 2
EXIT_STAGE_FAILED = 3
EXIT_INCONSISTENT = 4

STAGE_DEPS = {
    "search": (),
    "construct": ("search",),
    "order": ("construct",),
    "irreducible": ("construct",),
    "aut": ("order",),
    "graph": ("order",),
}
VERDICT_STAGES = ("search", "construct", "order", "irreducible", "aut")
STAGE_RUN_ORDER = ("search", "construct", "order", "irreducible", "aut", "graph")

# order certification above this permutation degree needs an explicit flag
ORDER_DEGREE_GATE = 5000


class InternalInconsistency(RuntimeError):
    """Fast path and oracle disagreed in the impossible direction."""

    def __init__(self, message, fragment=None):
        super().__init__(message)
        self.fragment = fragment


class StageFailure(RuntimeError):
    """A certification check failed; carries the stage's diagnostics."""

    def __init__(self, message, fragment=None):
        super().__init__(message)
        self.fragment = fragment


@dataclass
class RunConfig:
    p: int
    f: int
    stages: tuple[str, ...] = VERDICT_STAGES
    jobs: int = 1
    allow_large_order: bool = False
    allow_large_graph: bool = False


def _close_stages(requested) -> tuple[str, ...]:
    wanted = set()
    def visit(s):
        if s not in STAGE_DEPS:
            raise ValueError(f"unknown stage: {s}")
        if s in wanted:
            return
        for dep in STAGE_DEPS[s]:
            visit(dep)
        wanted.add(s)
    for s in requested:
        visit(s)
    return tuple(s for s in STAGE_RUN_ORDER if s in wanted)


def stable_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def certificate_hash(cert: dict) -> str:
    """SHA-256 over the certificate minus volatile fields."""
    stripped = {k: v for k, v in cert.items()
                if k not in ("generated_at", "certificate_hash")}
    blob = json.dumps(stripped, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------------------
# stages
# ---------------------------------------------------------------------------

def _stage_search(state) -> dict:
    cp = search_params(state["field"])
    state["params"] = cp
    return {
        "status": "pass",
        "parity": cp.parity,
        "b": cp.b.to_str(),
        "a": cp.a.to_str(),
        "exponent_set": list(cp.exponent_set),
        "census": cp.a_census,
        "b_census": count_valid_b(state["field"], cp.parity),
    }


def _stage_construct(state) -> dict:
    cp = state["params"]
    t = build_triple(cp)
    state["triple"] = t
    fld = cp.field
    q = fld.q
    rotation = t.Y * t.Z if cp.parity == "odd" else t.Z * t.Y
    rot_order = projective_order(rotation)
    rot_expected = q - 1 if cp.parity == "odd" else q + 1
    inv_orders = [matrix_order(m) for m in t.matrices]
    proj_orders = [projective_order(m) for m in t.matrices]
    out = {
        "status": "pass",
        "X": t.X.to_str(),
        "Y": t.Y.to_str(),
        "Z": t.Z.to_str(),
        "matrix_orders": inv_orders,
        "projective_orders": proj_orders,
        "rotation": "yz" if cp.parity == "odd" else "zy",
        "rotation_order": rot_order,
        "rotation_order_expected": rot_expected,
    }
    if inv_orders != [2, 2, 2] or proj_orders != [2, 2, 2]:
        out["status"] = "fail"
        raise StageFailure("generators are not involutions", out)
    if rot_order != rot_expected:
        out["status"] = "fail"
        raise StageFailure(
            f"rotation order {rot_order}, expected {rot_expected}", out)
    return out


def _stage_order(state, cfg: RunConfig) -> dict:
    t = state["triple"]
    fld = t.field
    degree = fld.q ** 3 + 1
    if degree > ORDER_DEGREE_GATE and not cfg.allow_large_order:
        raise RuntimeError(
            f"permutation degree {degree} exceeds the default gate "
            f"{ORDER_DEGREE_GATE}; rerun with --allow-large-order")
    action = IsotropicAction(fld)
    cert = group_order(t, action)
    expected = expected_group_order(fld.q)
    dihedral = dihedral_image_order(t, action)
    dihedral_expected = (2 * (fld.q - 1) if state["params"].parity == "odd"
                         else 2 * (fld.q + 1))
    state["order_cert"] = cert
    out = cert.as_dict(expected)
    out.update({
        "status": "pass" if cert.order == expected else "fail",
        "dihedral_order": dihedral,
        "dihedral_order_expected": dihedral_expected,
    })
    if cert.order != expected:
        out["status"] = "fail"
        raise StageFailure(
            f"group order {cert.order} != |PSU3({fld.q})| = {expected}", out)
    if dihedral != dihedral_expected:
        out["status"] = "fail"
        raise StageFailure(
            f"dihedral image order {dihedral} != {dihedral_expected}", out)
    return out


def _stage_irreducible(state) -> dict:
    t = state["triple"]
    no_invariant = invariant_subspace_test(t)
    comm = commutant_dimension(t)
    out = {
        "status": "pass" if (no_invariant and comm == 1) else "fail",
        "invariant_subspace_test": no_invariant,
        "commutant_dimension": comm,
    }
    if out["status"] != "pass":
        raise StageFailure("irreducibility certification failed", out)
    return out


def _stage_aut(state) -> dict:
    t = state["triple"]
    cert = aut_group_trivial(t, state["order_cert"])
    out = {
        "status": "pass" if cert.verdict == "trivial" else "fail",
        "verdict": cert.verdict,
        "queries": cert.queries,
        "fast_path_holds": cert.fast_path_holds,
        "fast_path": [
            {"condition": e.condition, "twist": e.twist,
             "relevant": e.relevant, "holds": e.holds}
            for e in cert.fast_path
        ],
        "oracle_path": [
            {"perm": list(e.perm), "twist": e.twist,
             "scalars": list(e.scalars), "conjugator_found": e.conjugator_found}
            for e in cert.oracle_path
        ],
    }
    if cert.witness is not None:
        out["witness"] = cert.witness.to_str()
        out["witness_query"] = {
            "perm": list(cert.witness_query.perm),
            "twist": cert.witness_query.twist,
            "scalars": list(cert.witness_query.scalars),
        }
    if cert.fast_path_holds and cert.verdict == "nontrivial":
        raise InternalInconsistency(
            "all fast-path obstructions hold yet the oracle found a "
            "conjugator; one of the two certifiers is wrong", out)
    if cert.verdict != "trivial":
        raise StageFailure(
            "connection-set automorphism group is nontrivial", out)
    return out


def _stage_graph(state, cfg: RunConfig) -> dict:
    t = state["triple"]
    expected = expected_group_order(t.field.q)
    g = build_graph(t, expected, allow_large=cfg.allow_large_graph)
    state["graph"] = g
    return {
        "status": "pass",
        "vertices": g.vertex_count,
        "edges": len(g.edges),
        "edge_list_sha256": edge_list_sha256(g),
    }


def run_certify(cfg: RunConfig) -> tuple[dict, int]:
    """Run the requested stages; returns (certificate dict, exit code)."""
    cert: dict = {
        "tool": "psu3grr",
        "version": __version__,
        "schema": "psu3grr-certificate/1",
        "p": cfg.p,
        "f": cfg.f,
        "generated_at": datetime.datetime.now(datetime.timezone.utc)
                        .isoformat(timespec="seconds"),
        "stages": {},
        "stages_run": [],
    }
    exit_code = EXIT_OK
    try:
        fld = field(cfg.p, cfg.f)
        cert["q"] = fld.q
        cert["field"] = fld.params_str()
        state = {"field": fld}
        stages = _close_stages(cfg.stages)
        for stage in stages:
            try:
                if stage == "search":
                    frag = _stage_search(state)
                elif stage == "construct":
                    frag = _stage_construct(state)
                elif stage == "order":
                    frag = _stage_order(state, cfg)
                elif stage == "irreducible":
                    frag = _stage_irreducible(state)
                elif stage == "aut":
                    frag = _stage_aut(state)
                else:
                    frag = _stage_graph(state, cfg)
            except (StageFailure, InternalInconsistency) as exc:
                if exc.fragment is not None:
                    cert["stages"][stage] = exc.fragment
                    cert["stages_run"].append(stage)
                cert["failed_stage"] = stage
                raise
            cert["stages"][stage] = frag
            cert["stages_run"].append(stage)
        if all(s in cert["stages"] and cert["stages"][s]["status"] == "pass"
               for s in VERDICT_STAGES):
            cert["verdict"] = "GRR_CONFIRMED"
        else:
            cert["verdict"] = "INCOMPLETE"
    except UnsupportedQ as exc:
        cert["verdict"] = "REFUSED"
        cert["reason"] = "UnsupportedQ"
        cert["detail"] = str(exc)
        exit_code = EXIT_REFUSED
    except InternalInconsistency as exc:
        cert["verdict"] = "INTERNAL_INCONSISTENCY"
        cert["detail"] = str(exc)
        exit_code = EXIT_INCONSISTENT
    except (NoValidParams, ConstructionError, RuntimeError) as exc:
        cert["verdict"] = "FAILED"
        cert["detail"] = str(exc)
        exit_code = EXIT_STAGE_FAILED
    cert["certificate_hash"] = certificate_hash(cert)
    return cert, exit_code


# ---------------------------------------------------------------------------
# negative control: PSU3(3) has no generating involution triple
# ---------------------------------------------------------------------------

def run_negative_control_q3() -> dict:
    """Certify that no triple of involutions generates PSU3(3).

    PSU3(3) = SU3(3) (trivial center) is realised as permutations of its 28
    isotropic points; the group is enumerated from its unitriangular
    subgroups, involutions are classified up to conjugacy, and every triple
    (x0, y, z) with x0 a class representative is closed under multiplication
    to get the exact subgroup order.  Fixing x0 per class is harmless:
    conjugating a triple conjugates the subgroup it generates.
    """
    fld = field(3, 1)
    action = IsotropicAction(fld)
    degree = action.degree
    expected = expected_group_order(3)

    # unitriangular subgroups (upper and lower) generate SU3(3)
    from .mat3 import Mat3, is_special_unitary
    one, zero = fld.one, fld.zero
    gens = []
    for s in fld.elements():
        for t in fld.elements():
            upper = Mat3(fld, (one, s, t, zero, one, -(s.frobenius(fld.f)),
                               zero, zero, one))
            if is_special_unitary(upper):
                gens.append(upper)
                gens.append(upper.transpose())
    perm_gens = [tuple(int(x) for x in action.permutation(m)) for m in gens]
    identity = tuple(range(degree))

    def compose(a, b):
        return tuple(b[x] for x in a)

    elements = {identity}
    frontier = [identity]
    while frontier:
        g = frontier.pop()
        for s in perm_gens:
            h = compose(g, s)
            if h not in elements:
                elements.add(h)
                frontier.append(h)
    if len(elements) != expected:
        raise RuntimeError(
            f"enumeration of PSU3(3) found {len(elements)} elements, "
            f"expected {expected}")

    involutions = sorted(g for g in elements
                         if g != identity and compose(g, g) == identity)

    def invert(g):
        out = [0] * degree
        for i, x in enumerate(g):
            out[x] = i
        return tuple(out)

    inv_gens = [invert(g) for g in perm_gens]
    unclassified = set(involutions)
    class_reps = []
    class_sizes = []
    while unclassified:
        rep = min(unclassified)
        orbit = {rep}
        frontier = [rep]
        while frontier:
            t = frontier.pop()
            for g, gi in zip(perm_gens, inv_gens):
                c = compose(compose(gi, t), g)
                if c not in orbit:
                    orbit.add(c)
                    frontier.append(c)
        class_reps.append(rep)
        class_sizes.append(len(orbit))
        unclassified -= orbit

    max_proper = 0
    generating = 0
    triples = 0
    for rep in class_reps:
        for yi in range(len(involutions)):
            y = involutions[yi]
            for zi in range(yi, len(involutions)):
                z = involutions[zi]
                triples += 1
                sub = {identity, rep, y, z}
                frontier = list(sub)
                size_ok = True
                while frontier:
                    g = frontier.pop()
                    for s in (rep, y, z):
                        h = compose(g, s)
                        if h not in sub:
                            sub.add(h)
                            frontier.append(h)
                order = len(sub)
                if order == expected:
                    generating += 1
                elif order > max_proper:
                    max_proper = order
    return {
        "tool": "psu3grr",
        "version": __version__,
        "schema": "psu3grr-negative-control-q3/1",
        "group_order": expected,
        "degree": degree,
        "involution_count": len(involutions),
        "involution_class_count": len(class_reps),
        "involution_class_sizes": class_sizes,
        "triples_tested": triples,
        "generating_triples_found": generating,
        "max_proper_subgroup_order": max_proper,
        "verdict": ("NO_GENERATING_INVOLUTION_TRIPLE" if generating == 0
                    else "GENERATING_TRIPLE_FOUND"),
    }


# ---------------------------------------------------------------------------
# argument parsing and entry point
# ---------------------------------------------------------------------------

def _emit(doc: dict, out_path: str | None):
    text = stable_json(doc)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_pf(sub):
    sub.add_argument("--p", type=int, required=True, help="characteristic (prime)")
    sub.add_argument("--f", type=int, required=True, help="exponent, q = p^f")
    sub.add_argument("--out", help="write JSON here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psu3grr",
        description="Construct cubic connection sets of PSU3(q) and certify "
                    "the Cayley graph is a GRR by exact computation.",
        epilog="GRR_SEED is accepted in the environment and ignored: every "
               "result is deterministic.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search-params", help="find (b, a) and the census")
    _add_pf(s)

    s = sub.add_parser("construct", help="build and check the triple X, Y, Z")
    _add_pf(s)

    s = sub.add_parser("certify", help="run pipeline stages, emit certificate")
    _add_pf(s)
    s.add_argument("--stage", action="append", default=None,
                   metavar="STAGE", help="stage to run (repeatable; "
                   "dependencies are added automatically); default: all "
                   "verdict stages")
    s.add_argument("--jobs", type=int, default=1,
                   help="worker cap (execution is single-threaded; values "
                   "above 1 are accepted and capped)")
    s.add_argument("--allow-large-order", action="store_true",
                   help="certify group order above the degree gate")
    s.add_argument("--allow-large-graph", action="store_true",
                   help="build graphs beyond |PSU3(5)| vertices")

    s = sub.add_parser("export-graph", help="write the Cayley graph to a file")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--f", type=int, required=True)
    s.add_argument("--out", required=True, help="output path")
    s.add_argument("--format", choices=("edge-list", "adjacency"),
                   default="edge-list")
    s.add_argument("--allow-large-graph", action="store_true")

    s = sub.add_parser("negative-control-q3",
                       help="verify no involution triple generates PSU3(3)")
    s.add_argument("--out", help="write JSON here instead of stdout")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "search-params":
            fld = field(args.p, args.f)
            cp = search_params(fld)
            _emit({
                "p": args.p, "f": args.f, "q": fld.q,
                "field": fld.params_str(),
                "parity": cp.parity,
                "b": cp.b.to_str(),
                "a": cp.a.to_str(),
                "exponent_set": list(cp.exponent_set),
                "census": cp.a_census,
                "b_census": count_valid_b(fld, cp.parity),
            }, args.out)
            return EXIT_OK

        if args.command == "construct":
            fld = field(args.p, args.f)
            cp = search_params(fld)
            t = build_triple(cp)
            _emit({
                "p": args.p, "f": args.f, "q": fld.q,
                "field": fld.params_str(),
                "parity": cp.parity,
                "b": cp.b.to_str(),
                "a": cp.a.to_str(),
                "X": t.X.to_str(),
                "Y": t.Y.to_str(),
                "Z": t.Z.to_str(),
            }, args.out)
            return EXIT_OK

        if args.command == "certify":
            if args.jobs < 1:
                raise ValueError("--jobs must be at least 1")
            stages = tuple(args.stage) if args.stage else VERDICT_STAGES
            cfg = RunConfig(args.p, args.f, stages=stages, jobs=args.jobs,
                            allow_large_order=args.allow_large_order,
                            allow_large_graph=args.allow_large_graph)
            cert, code = run_certify(cfg)
            _emit(cert, args.out)
            return code

        if args.command == "export-graph":
            fld = field(args.p, args.f)
            cp = search_params(fld)
            t = build_triple(cp)
            cert = group_order(t)
            expected = expected_group_order(fld.q)
            if cert.order != expected:
                sys.stderr.write("generation certificate failed\n")
                return EXIT_STAGE_FAILED
            g = build_graph(t, expected, allow_large=args.allow_large_graph)
            with open(args.out, "wb") as fh:
                fh.write(export_graph(g, args.format))
            sys.stdout.write(stable_json({
                "written": args.out,
                "format": args.format,
                "vertices": g.vertex_count,
                "edges": len(g.edges),
                "edge_list_sha256": edge_list_sha256(g),
            }))
            return EXIT_OK

        if args.command == "negative-control-q3":
            _emit(run_negative_control_q3(), args.out)
            return EXIT_OK
    except UnsupportedQ as exc:
        _emit({"verdict": "REFUSED", "reason": "UnsupportedQ",
               "detail": str(exc)}, getattr(args, "out", None))
        return EXIT_REFUSED
    except (NoValidParams, ConstructionError, RuntimeError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_STAGE_FAILED
    raise AssertionError("unhandled command")


if __name__ == "__main__":
    sys.exit(main())
