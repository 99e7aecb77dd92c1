"""Command-line front end: ``threshold-lab <command> [options]``.

Reports go to stdout as JSON (full precision) or CSV (6 significant digits).
Errors are printed to stderr as JSON and exit with status 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from . import __version__
from .bounds import DEFAULT_GRID, bell_bound, bell_eps_bound, conditional_report, pp_bound
from .errors import ThresholdLabError, TrivialFamilyError
from .family import ENUMERATION_CAP, SetFamily, family_from_json, up_closure
from .forge import WeightedGraphSpec, network_poset, paper_example, target_upper_set
from .measure import conditional, mu_family, p_critical
from .montecarlo import estimate_conditional, estimate_family
from .poset import FinitePoset, PosetEmbedding, PosetUpperSet, extension_pipeline, principal_downset_embedding
from .repro import CLAIM_TOL, paper_repro
from .threshold import q_threshold

SCHEMA = "threshold-lab/1"


@dataclass
class RunConfig:
    command: str
    tol: float = 1e-12
    grid: int = DEFAULT_GRID
    K: float = 48.0
    eps: Optional[float] = None
    seed: int = 0
    format: str = "json"

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise ThresholdLabError("--tol must be positive")
        if self.grid < 100:
            raise ThresholdLabError("--grid must be at least 100")
        if not self.K > 0:
            raise ThresholdLabError("--K must be positive")
        if self.eps is not None and not 0.0 < self.eps < 1.0:
            raise ThresholdLabError("--eps must lie in (0, 1)")
        if self.format not in ("json", "csv"):
            raise ThresholdLabError("--format must be json or csv")


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ThresholdLabError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise ThresholdLabError(f"malformed JSON in {path}: {exc}") from None


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow([f"{v:.6g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _flat_rows(result: dict) -> list[list]:
    rows: list[list] = [["key", "value"]]
    for key in sorted(result):
        value = result[key]
        if isinstance(value, (int, float, str, bool)) or value is None:
            rows.append([key, value])
        else:
            rows.append([key, json.dumps(value, sort_keys=True)])
    return rows


def cmd_family(args, cfg: RunConfig) -> tuple[dict, str]:
    family = family_from_json(_load_json(args.input))
    upper = up_closure(family)
    if upper.is_trivial:
        raise TrivialFamilyError("trivial upper set")
    q, cover = q_threshold(upper, tol=cfg.tol)
    result = {
        "ground": list(upper.ground.labels),
        "minimal": upper.minimal.to_label_lists(),
        "p_c": p_critical(upper, tol=cfg.tol),
        "q": q,
        "certificate": cover.to_json(q),
        "ell0": upper.ell0,
        "ell": upper.ell,
        "bell_bound": bell_bound(q, upper.ell0),
        "pp_bound": pp_bound(q, upper.ell, cfg.K),
    }
    eps_values = list(args.eps_values or []) + ([cfg.eps] if cfg.eps is not None else [])
    if eps_values:
        result["bell_eps_bound"] = {f"{e:g}": bell_eps_bound(q, upper.ell0, e) for e in eps_values}
    return result, _csv(_flat_rows(result))


def _conditional_families(args) -> tuple[SetFamily, SetFamily]:
    if args.example:
        ex = paper_example(args.b_variant)
        return (ex.A if args.example == "A" else ex.Aprime), ex.B
    if not (args.A and args.B):
        raise ThresholdLabError("give --A and --B family files, or --example A|Aprime")
    return family_from_json(_load_json(args.A)), family_from_json(_load_json(args.B))


def cmd_conditional(args, cfg: RunConfig) -> tuple[dict, str]:
    A, B = _conditional_families(args)
    report = conditional_report(A, B, cfg.K, cfg.eps, cfg.grid, tol=cfg.tol)
    return report.to_json(), report.samples_csv()


def _example_poset(b_variant: str):
    ex = paper_example(b_variant)
    labels = ["{" + ",".join(s) + "}" for s in ex.B.to_label_lists()]
    masks = ex.B.masks
    leq = [[a & b == a for b in masks] for a in masks]
    P = FinitePoset(tuple(labels), leq)
    f = PosetEmbedding(P, ex.X, masks)
    upper = [lab for lab, m in zip(labels, masks) if m in ex.Aprime]
    return P, f, PosetUpperSet(P, frozenset(upper))


def cmd_poset(args, cfg: RunConfig) -> tuple[dict, str]:
    if args.example:
        P, f, U = _example_poset(args.b_variant)
    else:
        if args.network:
            P, f = network_poset(WeightedGraphSpec.from_json(_load_json(args.network)))
        elif args.poset:
            P = FinitePoset.from_json(_load_json(args.poset))
            if args.embedding:
                f = PosetEmbedding.from_json(P, _load_json(args.embedding))
            else:
                f = principal_downset_embedding(P)
        else:
            raise ThresholdLabError("give --poset, --network or --example")
        if args.targets:
            U = target_upper_set(P, args.targets)
        elif args.upper:
            obj = _load_json(args.upper)
            members = obj["members"] if isinstance(obj, dict) else obj
            U = PosetUpperSet(P, frozenset(members))
        else:
            U = PosetUpperSet(P, frozenset(P.elements))
    report = extension_pipeline(P, U, f, cfg.K, cfg.eps, cfg.grid, tol=cfg.tol)
    return report.to_json(), report.samples_csv()


def cmd_paper_repro(args, cfg: RunConfig) -> tuple[dict, str]:
    result = paper_repro(args.b_variant, cfg.grid, cfg.tol, args.claim_tol)
    rows: list[list] = [["claim", "claimed", "computed", "abs_diff", "passed"]]
    for c in result["claims"]:
        rows.append([c["name"], c["claimed"], c["computed"], c["abs_diff"], "pass" if c["passed"] else "FAIL"])
    return result, _csv(rows)


def cmd_mc(args, cfg: RunConfig) -> tuple[dict, str]:
    F = family_from_json(_load_json(args.family))
    target = up_closure(F) if args.upper else F
    if args.given:
        B = family_from_json(_load_json(args.given))
        est = estimate_conditional(target, B, args.p, args.samples, cfg.seed, args.confidence)
    else:
        B = None
        est = estimate_family(target, args.p, args.samples, cfg.seed, args.confidence)
    result = est.to_json()
    result["p"] = args.p
    if F.ground.n <= ENUMERATION_CAP:
        exact_a = target.family if args.upper else target
        result["exact"] = conditional(exact_a, B, args.p) if B is not None else mu_family(target, args.p)
        result["exact_within_ci"] = est.covers(result["exact"])
    return result, _csv(_flat_rows(result))


COMMANDS = {
    "family": cmd_family,
    "conditional": cmd_conditional,
    "poset": cmd_poset,
    "paper-repro": cmd_paper_repro,
    "mc": cmd_mc,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-12, help="bisection tolerance")
    common.add_argument("--grid", type=int, default=DEFAULT_GRID, help="scan resolution for g")
    common.add_argument("--K", type=float, default=48.0, help="Park-Pham constant")
    common.add_argument("--eps", type=float, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--b-variant", choices=("formula", "diagram"), default="formula")

    parser = argparse.ArgumentParser(prog="threshold-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", parents=[common], help="p_c, q, cover certificate and bounds")
    p.add_argument("input", help="family JSON; its up-closure is analysed")
    p.add_argument("--eps-values", type=float, nargs="*", help="extra eps values for the eps bound")

    p = sub.add_parser("conditional", parents=[common], help="floor and admissible intervals for A in B")
    p.add_argument("--A")
    p.add_argument("--B")
    p.add_argument("--example", choices=("A", "Aprime"), help="use the built-in worked example")

    p = sub.add_parser("poset", parents=[common], help="extension pipeline for an upper set of a poset")
    p.add_argument("--poset", help="poset JSON")
    p.add_argument("--embedding", help="embedding JSON (default: principal downsets)")
    p.add_argument("--network", help="weighted-graph JSON; builds the subnetwork poset")
    p.add_argument("--upper", help="JSON list of upper-set members (default: whole poset)")
    p.add_argument("--targets", nargs="*", help="generate the upper set from these elements")
    p.add_argument("--example", action="store_true", help="worked example: B as a poset, U = A'")

    p = sub.add_parser("paper-repro", parents=[common], help="recompute the published numbers")
    p.add_argument("--claim-tol", type=float, default=CLAIM_TOL)

    p = sub.add_parser("mc", parents=[common], help="Monte Carlo estimate with confidence interval")
    p.add_argument("--family", required=True)
    p.add_argument("--upper", action="store_true", help="estimate the up-closure of the family")
    p.add_argument("--given", help="condition on this family (rejection sampling)")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--confidence", type=float, default=0.99)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.tol, args.grid, args.K, args.eps, args.seed, args.format)
        result, csv_text = COMMANDS[args.command](args, cfg)
    except ThresholdLabError as exc:
        err = {"schema": SCHEMA, "command": args.command, "error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return 2
    if cfg.format == "csv":
        sys.stdout.write(csv_text)
    else:
        config = {k: v for k, v in asdict(cfg).items() if k != "command"}
        doc = {"schema": SCHEMA, "command": args.command, "config": config, "result": result}
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    if args.command == "paper-repro" and not result["all_passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
