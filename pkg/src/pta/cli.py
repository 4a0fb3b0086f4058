"""Command-line surface: validate, simulate, fcm-run, serve, export.

Exit codes: 0 success, 1 validation problems, 2 runtime errors. Bare
scenario names resolve against $PTA_SCENARIO_DIR, then the packaged data
directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import yaml

from .errors import PtaError
from .scenario import builtin_scenario_path, load_scenario, validate_scenario
from .session import render_records
from .simulate import fcm_experiment, load_policy, simulate

SCENARIO_DIR_ENV = "PTA_SCENARIO_DIR"

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RUNTIME = 2


def resolve_scenario_path(ref: str) -> str:
    if os.path.exists(ref):
        return ref
    env_dir = os.environ.get(SCENARIO_DIR_ENV)
    if env_dir:
        candidate = os.path.join(env_dir, f"{ref}.yaml")
        if os.path.exists(candidate):
            return candidate
    builtin = builtin_scenario_path(ref)
    if os.path.exists(builtin):
        return builtin
    raise FileNotFoundError(f"cannot resolve scenario {ref!r}")


def cmd_validate(args) -> int:
    path = resolve_scenario_path(args.scenario)
    findings = validate_scenario(path)
    for finding in findings:
        print(finding)
    errors = [f for f in findings if f.level == "error"]
    if errors:
        print(f"{len(errors)} error(s), {len(findings) - len(errors)} warning(s)")
        return EXIT_INVALID
    print(f"ok: {path} ({len(findings)} warning(s))")
    return EXIT_OK


def cmd_simulate(args) -> int:
    scenario = load_scenario(resolve_scenario_path(args.scenario))
    policy = load_policy(args.policy)
    result = simulate(scenario, policy, seed=args.seed, max_ticks=args.max_ticks)
    log_text = result.export_log("jsonl")
    metrics_doc = result.metrics.to_doc()
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "session.jsonl"), "w", encoding="utf-8") as fh:
            fh.write(log_text)
        with open(os.path.join(args.out, "metrics.json"), "w", encoding="utf-8") as fh:
            json.dump(metrics_doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {args.out}/session.jsonl and {args.out}/metrics.json")
    print(json.dumps(metrics_doc, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_fcm_run(args) -> int:
    scenario = load_scenario(resolve_scenario_path(args.scenario))
    with open(args.sets, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    if isinstance(doc, dict):
        labels = [str(k) for k in doc]
        sets = [list(v or []) for v in doc.values()]
    else:
        labels = None
        sets = [list(v or []) for v in (doc or [])]
    table = fcm_experiment(scenario, sets, labels=labels)
    print(table.render(fmt=args.format), end="")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import build_app

    scenario_path = resolve_scenario_path(args.scenario)
    scenario = load_scenario(scenario_path)
    name = os.path.splitext(os.path.basename(scenario_path))[0]
    app = build_app({name: scenario}, data_dir=args.data_dir)
    print(f"serving scenario {name!r} on {args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def cmd_export(args) -> int:
    path = os.path.join(args.session_dir, "session.jsonl")
    if not os.path.exists(path):
        raise FileNotFoundError(f"{path} not found")
    with open(path, "r", encoding="utf-8") as fh:
        records = [json.loads(line) for line in fh if line.strip()]
    print(render_records(records, args.format), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pta",
        description="Teachable-agent runtime: validate scenarios, run "
                    "simulations and serve interactive sessions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a scenario document")
    p.add_argument("scenario")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("simulate", help="run a scripted learner session")
    p.add_argument("scenario")
    p.add_argument("--policy", default="diligent",
                   help="built-in policy name or path to a policy file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-ticks", type=int, default=100)
    p.add_argument("--out", default=None, help="directory for session.jsonl + metrics.json")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("fcm-run", help="evaluate the persuasion map over event sets")
    p.add_argument("scenario")
    p.add_argument("--sets", required=True,
                   help="YAML file: list of event-name lists, or label->list mapping")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(fn=cmd_fcm_run)

    p = sub.add_parser("serve", help="serve the interactive session API")
    p.add_argument("scenario")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data-dir", default=None,
                   help="directory for per-session persistence files")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("export", help="re-render a stored session log")
    p.add_argument("session_dir")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.set_defaults(fn=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except PtaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
