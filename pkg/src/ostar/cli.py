"""Batch front-end: validate job configs, run the pipeline, emit reports.

Config and report are JSON; character tables and orbit reports are also
exportable as CSV.  Reports are byte-identical across repeated runs and
across worker counts.  Exit codes: 0 ok, 2 config invalid, 3 budget
refused, 4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .characters import character_table, export_chartable_csv, element_label
from .cyclotomic import cyclo_json
from .decide import (
    INCONCLUSIVE,
    brute_force_verify,
    decide_pipeline,
)
from .errors import BudgetError, ConfigError, ConsistencyError
from .groups import (
    AbelianGroup,
    ActionHom,
    Automorphism,
    PermRep,
    SUBGROUP_CAP,
    WreathSpec,
    build_semidirect,
    build_wreath,
    dihedral,
    group_pq,
    regular_rep,
    z_group,
)
from .symclass import (
    DEFAULT_INDEX_BUDGET,
    dim_symmetry_class,
    export_orbits_csv,
    orbit_scan,
)

__all__ = ["JobConfig", "parse_config", "build_job", "run_job", "main"]

REPORT_SCHEMA = "ostar-report/1"
TASKS = ("chartable", "orbits", "dims", "decide", "verify")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_CONSISTENCY = 4


@dataclass
class JobConfig:
    group_kind: str          # "explicit" | "wreath" | "family"
    group_payload: dict
    rep_spec: object         # "natural" | "regular" | {"explicit": {...}}
    n: int | None
    m: int | None
    tasks: tuple
    index_budget: int
    subgroup_bound: int
    output: dict
    echo: dict               # normalized config for the report


def _expect(cond, path, message):
    if not cond:
        raise ConfigError(f"{path}: {message}")


def _int_list(value, path):
    _expect(isinstance(value, list) and value, path, "expected a nonempty list of integers")
    for i, v in enumerate(value):
        _expect(isinstance(v, int) and not isinstance(v, bool) and v >= 1,
                f"{path}[{i}]", f"expected a positive integer, got {v!r}")
    return list(value)


def _pos_int(value, path):
    _expect(isinstance(value, int) and not isinstance(value, bool) and value >= 1,
            path, f"expected a positive integer, got {value!r}")
    return value


def _perm_1based(value, path, degree):
    _expect(isinstance(value, list), path, "expected a permutation as a list")
    _expect(sorted(value) == list(range(1, degree + 1)), path,
            f"expected a permutation of 1..{degree}")
    return tuple(v - 1 for v in value)


def parse_config(text: str) -> JobConfig:
    """Strict parse: unknown keys rejected, every structural error reported
    with a path into the document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    _expect(isinstance(doc, dict), "$", "expected a JSON object")

    forms = [k for k in ("family", "wreath") if k in doc]
    if "A" in doc or "H" in doc or "phi" in doc:
        forms.append("explicit")
    _expect(len(forms) == 1, "$",
            "expected exactly one group form: {A,H,phi} or wreath or family")
    kind = forms[0]

    if kind == "explicit":
        allowed = {"A", "H", "phi"}
    else:
        allowed = {kind}
    allowed |= {"rep", "n", "m", "tasks", "budgets", "output"}
    for k in doc:
        _expect(k in allowed, f"$.{k}", "unknown key")

    if kind == "explicit":
        _expect("A" in doc and "H" in doc and "phi" in doc, "$",
                "explicit group spec needs all of A, H, phi")
        a_factors = _int_list(doc["A"], "$.A")
        h_factors = _int_list(doc["H"], "$.H")
        phi = doc["phi"]
        _expect(isinstance(phi, list), "$.phi", "expected a list")
        _expect(len(phi) == len(h_factors), "$.phi",
                f"expected {len(h_factors)} rows (one per generator of H), got {len(phi)}")
        for j, row in enumerate(phi):
            _expect(isinstance(row, list), f"$.phi[{j}]", "expected a list")
            _expect(len(row) == len(a_factors), f"$.phi[{j}]",
                    f"expected {len(a_factors)} generator image(s) for A, got {len(row)}")
            for i, img in enumerate(row):
                _expect(isinstance(img, list) and len(img) == len(a_factors),
                        f"$.phi[{j}][{i}]",
                        f"expected {len(a_factors)} coordinates")
                for t, x in enumerate(img):
                    _expect(isinstance(x, int) and not isinstance(x, bool),
                            f"$.phi[{j}][{i}][{t}]", "expected an integer")
        payload = {"A": a_factors, "H": h_factors, "phi": phi}
    elif kind == "wreath":
        w = doc["wreath"]
        _expect(isinstance(w, dict), "$.wreath", "expected an object")
        for k in w:
            _expect(k in {"A", "H", "omega", "action"}, f"$.wreath.{k}", "unknown key")
        _expect("A" in w and "H" in w and "omega" in w and "action" in w,
                "$.wreath", "needs A, H, omega, action")
        a_factors = _int_list(w["A"], "$.wreath.A")
        h_factors = _int_list(w["H"], "$.wreath.H")
        omega = _pos_int(w["omega"], "$.wreath.omega")
        action = w["action"]
        if action != "regular":
            _expect(isinstance(action, list), "$.wreath.action",
                    'expected "regular" or a list of permutations of 1..omega')
            _expect(len(action) == len(h_factors), "$.wreath.action",
                    f"expected {len(h_factors)} permutations (one per generator of H)")
            action = [
                list(p + 1 for p in _perm_1based(sig, f"$.wreath.action[{j}]", omega))
                for j, sig in enumerate(action)
            ]
        payload = {"A": a_factors, "H": h_factors, "omega": omega, "action": action}
    else:
        fam = doc["family"]
        _expect(isinstance(fam, dict) and len(fam) == 1, "$.family",
                "expected exactly one of dihedral | pq | z_group")
        name = next(iter(fam))
        params = fam[name]
        _expect(isinstance(params, dict), f"$.family.{name}", "expected an object")
        wanted = {"dihedral": {"s"}, "pq": {"p", "q", "r"}, "z_group": {"s", "t", "r"}}
        _expect(name in wanted, f"$.family.{name}", "unknown family")
        _expect(set(params) == wanted[name], f"$.family.{name}",
                f"expected exactly the keys {sorted(wanted[name])}")
        for k, v in params.items():
            _pos_int(v, f"$.family.{name}.{k}")
        payload = {name: dict(params)}

    rep_spec = doc.get("rep", "natural" if kind in ("wreath", "family") else "regular")
    if isinstance(rep_spec, str):
        _expect(rep_spec in ("natural", "regular"), "$.rep",
                'expected "natural", "regular" or {"explicit": ...}')
    else:
        _expect(isinstance(rep_spec, dict) and set(rep_spec) == {"explicit"},
                "$.rep", 'expected "natural", "regular" or {"explicit": ...}')
        ex = rep_spec["explicit"]
        _expect(isinstance(ex, dict) and set(ex) == {"degree", "A", "H"},
                "$.rep.explicit", "expected the keys degree, A, H")
        _pos_int(ex["degree"], "$.rep.explicit.degree")

    n = doc.get("n")
    if n is not None:
        n = _pos_int(n, "$.n")
    m = doc.get("m")
    if m is not None:
        m = _pos_int(m, "$.m")

    tasks = doc.get("tasks", [])
    _expect(isinstance(tasks, list), "$.tasks", "expected a list")
    for i, t in enumerate(tasks):
        _expect(t in TASKS, f"$.tasks[{i}]",
                f"unknown task {t!r}; expected one of {list(TASKS)}")
    tasks = tuple(t for t in TASKS if t in tasks)

    budgets = doc.get("budgets", {})
    _expect(isinstance(budgets, dict), "$.budgets", "expected an object")
    for k in budgets:
        _expect(k in {"index_budget", "subgroup_bound"}, f"$.budgets.{k}", "unknown key")
    index_budget = budgets.get("index_budget", DEFAULT_INDEX_BUDGET)
    subgroup_bound = budgets.get("subgroup_bound", SUBGROUP_CAP)
    _pos_int(index_budget, "$.budgets.index_budget")
    _pos_int(subgroup_bound, "$.budgets.subgroup_bound")

    output = doc.get("output", {})
    _expect(isinstance(output, dict), "$.output", "expected an object")
    for k in output:
        _expect(k in {"path", "format"}, f"$.output.{k}", "unknown key")
    if "format" in output:
        _expect(output["format"] in ("json", "csv"), "$.output.format",
                'expected "json" or "csv"')

    echo = {
        "group": {kind: payload} if kind != "explicit" else payload,
        "rep": rep_spec,
        "n": n,
        "m": m,
        "tasks": list(tasks),
        "budgets": {"index_budget": index_budget, "subgroup_bound": subgroup_bound},
    }
    return JobConfig(kind, payload, rep_spec, n, m, tasks,
                     index_budget, subgroup_bound, dict(output), echo)


def build_job(cfg: JobConfig):
    """Construct the group and its representation; semantic failures (bad
    automorphisms, wrong congruences) surface as config errors."""
    try:
        if cfg.group_kind == "explicit":
            A = AbelianGroup(cfg.group_payload["A"])
            H = AbelianGroup(cfg.group_payload["H"])
            images = tuple(
                Automorphism(A, tuple(tuple(img) for img in row))
                for row in cfg.group_payload["phi"]
            )
            phi = ActionHom(H, A, images)
            G = build_semidirect(A, H, phi)
        elif cfg.group_kind == "wreath":
            A = AbelianGroup(cfg.group_payload["A"])
            H = AbelianGroup(cfg.group_payload["H"])
            if cfg.group_payload["action"] == "regular":
                if cfg.group_payload["omega"] != H.order:
                    raise ConfigError(
                        "$.wreath.omega: the regular action needs omega = |H| "
                        f"= {H.order}, got {cfg.group_payload['omega']}"
                    )
                spec = WreathSpec.regular(A, H)
            else:
                spec = WreathSpec(
                    A, H, cfg.group_payload["omega"],
                    tuple(tuple(x - 1 for x in sig)
                          for sig in cfg.group_payload["action"]),
                )
            G = build_wreath(spec)
        else:
            (name, params), = cfg.group_payload.items()
            if name == "dihedral":
                G = dihedral(params["s"])
            elif name == "pq":
                G = group_pq(params["p"], params["q"], params["r"])
            else:
                G = z_group(params["s"], params["t"], params["r"])

        if cfg.rep_spec == "natural":
            if G.natural_rep is None:
                raise ConfigError(
                    '$.rep: this group has no bundled natural representation; '
                    'use "regular" or an explicit one'
                )
            rep = G.natural_rep
        elif cfg.rep_spec == "regular":
            rep = regular_rep(G)
        else:
            ex = cfg.rep_spec["explicit"]
            degree = ex["degree"]
            a_images = [
                _perm_1based(p, f"$.rep.explicit.A[{i}]", degree)
                for i, p in enumerate(ex["A"])
            ]
            h_images = [
                _perm_1based(p, f"$.rep.explicit.H[{i}]", degree)
                for i, p in enumerate(ex["H"])
            ]
            rep = PermRep(G, a_images, h_images, kind="explicit")
    except ConfigError:
        raise
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.m is not None and cfg.m < rep.degree:
        raise ConfigError(
            f"$.m: m = {cfg.m} is below the representation degree {rep.degree}"
        )
    return G, rep


def _verdict_agreement(decided, verified):
    if decided is None:
        return None
    if INCONCLUSIVE in (decided.status, verified.status):
        return None
    return decided.status == verified.status


def run_job(cfg: JobConfig, threads: int = 1) -> dict:
    """Execute the requested tasks in dependency order and return the
    report; deterministic for identical configs regardless of threads."""
    G, rep = build_job(cfg)
    report = {
        "schema": REPORT_SCHEMA,
        "config": cfg.echo,
        "group": {
            "order": G.order,
            "A_factors": list(G.A.factors),
            "H_factors": list(G.H.factors),
            "origin": G.origin,
            "abelian": G.is_abelian(),
        },
        "rep": {
            "kind": rep.kind,
            "degree": rep.degree,
            "faithful": rep.is_faithful(),
        },
        "tasks": {},
    }
    if not cfg.tasks:
        return report

    table = character_table(G)
    if not table.report.ok:
        raise ConsistencyError(
            "character table failed validation: "
            + "; ".join(table.report.failures)
        )
    report["table_validation"] = dict(table.report.checks)
    report["characters"] = [
        {
            "index": i,
            "degree": chi.degree,
            "orbit_rep_exponents": list(chi.orbit.rep.exponents),
            "u_exponents": list(chi.u.exponents),
            "linear": chi.is_linear(),
        }
        for i, chi in enumerate(table.chars)
    ]

    needs_n = [t for t in cfg.tasks if t != "chartable"]
    if needs_n and cfg.n is None:
        raise ConfigError(f"$.n: required by tasks {needs_n}")
    m_eff = cfg.m if cfg.m is not None else rep.degree
    rep_eff = rep.extended(m_eff) if m_eff > rep.degree else rep
    n = cfg.n

    decisions = {}

    for task in cfg.tasks:
        if task == "chartable":
            classes = G.conjugacy_classes()
            report["tasks"]["chartable"] = {
                "classes": [
                    {
                        "rep": [list(cls[0][0]), list(cls[0][1])],
                        "label": element_label(cls[0]),
                        "size": len(cls),
                    }
                    for cls in classes
                ],
                "values": [
                    [cyclo_json(chi.value(cls[0])) for cls in classes]
                    for chi in table.chars
                ],
            }
        elif task == "orbits":
            per_char = []
            for i, chi in enumerate(table.chars):
                records = orbit_scan(G, rep_eff, chi, m_eff, n,
                                     index_budget=cfg.index_budget)
                per_char.append({
                    "char_index": i,
                    "records": [
                        {
                            "rep": list(r.rep),
                            "orbit_size": r.orbit_size,
                            "stabilizer_order": len(r.stabilizer),
                            "s_alpha": r.s_alpha,
                            "in_delta_bar": r.in_delta_bar,
                        }
                        for r in records
                    ],
                })
            report["tasks"]["orbits"] = {"per_character": per_char}
        elif task == "dims":
            per_char = []
            for i, chi in enumerate(table.chars):
                d = dim_symmetry_class(G, rep_eff, chi, n)
                records = orbit_scan(G, rep_eff, chi, m_eff, n,
                                     index_budget=cfg.index_budget)
                total = sum(r.s_alpha for r in records if r.in_delta_bar)
                if total != d:
                    raise ConsistencyError(
                        f"dimension {d} of character {i} disagrees with the "
                        f"orbital sum {total}"
                    )
                per_char.append({"char_index": i, "dim": d,
                                 "sum_s_alpha": total, "consistent": True})
            report["tasks"]["dims"] = {"per_character": per_char}
        elif task == "decide":
            per_char = []
            for i, chi in enumerate(table.chars):
                v = decide_pipeline(G, rep_eff, chi, n,
                                    index_budget=cfg.index_budget,
                                    subgroup_bound=cfg.subgroup_bound)
                decisions[i] = v
                per_char.append({"char_index": i, "verdict": v.to_json()})
            report["tasks"]["decide"] = {"per_character": per_char}
        elif task == "verify":
            per_char = []
            for i, chi in enumerate(table.chars):
                v = brute_force_verify(G, rep_eff, chi, n,
                                       index_budget=cfg.index_budget,
                                       threads=threads)
                agrees = _verdict_agreement(decisions.get(i), v)
                if agrees is False:
                    raise ConsistencyError(
                        f"brute-force verdict {v.status} for character {i} "
                        f"contradicts the decided {decisions[i].status}"
                    )
                per_char.append({
                    "char_index": i,
                    "verdict": v.to_json(),
                    "agrees_with_decide": agrees,
                })
            report["tasks"]["verify"] = {"per_character": per_char}
    return report


def report_bytes(report: dict) -> bytes:
    return (json.dumps(report, sort_keys=True, indent=2) + "\n").encode()


def _write_csv_outputs(cfg, out_path: Path) -> list:
    """Derive CSV table files next to the JSON report."""
    G, rep = build_job(cfg)
    table = character_table(G)
    written = []
    base = out_path.with_suffix("") if out_path.suffix == ".json" else out_path
    if "chartable" in cfg.tasks:
        p = base.with_name(base.name + ".chartable.csv")
        with open(p, "w", newline="") as fh:
            export_chartable_csv(G, table.chars, fh)
        written.append(p)
    if "orbits" in cfg.tasks:
        m_eff = cfg.m if cfg.m is not None else rep.degree
        rep_eff = rep.extended(m_eff) if m_eff > rep.degree else rep
        for i, chi in enumerate(table.chars):
            records = orbit_scan(G, rep_eff, chi, m_eff, cfg.n,
                                 index_budget=cfg.index_budget)
            p = base.with_name(base.name + f".orbits.chi{i}.csv")
            with open(p, "w", newline="") as fh:
                export_orbits_csv(records, fh)
            written.append(p)
    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ostar",
        description="Exact o*-basis decisions for symmetry classes of tensors "
                    "over semidirect and wreath products of finite abelian groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, about in (
        ("validate", "parse and validate a config (no computation)"),
        ("run", "run the tasks requested in the config"),
        ("chartable", "compute and validate the character table"),
        ("decide", "run the o*-basis deciders for every character"),
    ):
        sp = sub.add_parser(name, help=about)
        sp.add_argument("config", help="path to a JSON job config")
        if name != "validate":
            sp.add_argument("--out", help="report path (stdout when omitted)")
            sp.add_argument("--format", choices=("json", "csv"),
                            help="report format; csv adds table files next to "
                                 "the JSON report")
            sp.add_argument("--budget", type=int,
                            help="override the index budget")
            sp.add_argument("--threads", type=int, default=1,
                            help="worker threads for per-orbit searches")
            sp.add_argument("--verify", action="store_true",
                            help="append an independent brute-force pass")
    args = parser.parse_args(argv)

    try:
        cfg = parse_config(Path(args.config).read_text())
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "validate":
            build_job(cfg)
            print("ok")
            return EXIT_OK

        if args.command == "chartable":
            cfg.tasks = ("chartable",)
        elif args.command == "decide":
            cfg.tasks = ("decide",)
        if getattr(args, "verify", False) and "verify" not in cfg.tasks:
            cfg.tasks = tuple(cfg.tasks) + ("verify",)
        cfg.echo["tasks"] = list(cfg.tasks)
        if args.budget is not None:
            cfg.index_budget = args.budget
            cfg.echo["budgets"]["index_budget"] = args.budget

        out = args.out or cfg.output.get("path")
        fmt = args.format or cfg.output.get("format", "json")
        if fmt == "csv" and not out:
            raise ConfigError("csv output requires --out (or output.path)")

        report = run_job(cfg, threads=max(1, args.threads))
        payload = report_bytes(report)
        if out:
            Path(out).write_bytes(payload)
        else:
            sys.stdout.write(payload.decode())
        if fmt == "csv":
            for p in _write_csv_outputs(cfg, Path(out)):
                print(f"wrote {p}", file=sys.stderr)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetError as exc:
        print(f"budget refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
