"""Command-line client for the budget service.

Commands run against an in-process application instance by default, so no
server is required; pass ``--server URL`` to talk to a deployment instead.
Exit codes: 0 success, 1 validation or request failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx

_FLOAT_FORMAT = ".12g"

# config-file keys mirror flag names; values are cast per this table
_OPTION_TYPES = {
    "p": float,
    "d": float,
    "dim": int,
    "gates": int,
    "qec_gates": int,
    "level": int,
    "seed": int,
    "max_level": int,
    "trials": int,
    "pairs": int,
    "povms": int,
    "backend": str,
    "target_epsilon": float,
    "parameter": str,
    "start": float,
    "stop": float,
    "steps": int,
}

_DEFAULTS = {
    "p": 0.03,
    "d": 0.5,
    "dim": 2,
    "gates": 1,
    "qec_gates": 0,
    "level": 1,
    "seed": 0,
    "max_level": 3,
    "trials": 100_000,
    "pairs": 100,
    "povms": 10,
    "backend": "pauli_frame",
    "steps": 25,
}

_FLAG_NAMES = {
    "qec_gates": "--qec-gates",
    "max_level": "--max-level",
    "target_epsilon": "--target-eps",
    "start": "--from",
    "stop": "--to",
}


def _flag_for(field: str) -> str:
    return _FLAG_NAMES.get(field, "--" + field.replace("_", "-"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdptune",
        description="Privacy budgets for depolarized circuits with selective error correction.",
    )
    parser.add_argument("--server", default=None, help="base URL of a running service; default runs in-process")
    parser.add_argument("--config", default=None, help="key = value defaults file; flags override it")
    commands = parser.add_subparsers(dest="command", required=True)

    budget = commands.add_parser("budget", help="budget of one noise scenario")
    budget.add_argument("--p", type=float, help="per-gate depolarizing rate (default 0.03)")
    budget.add_argument("--d", type=float, help="trace-distance bound (default 0.5)")
    budget.add_argument("--dim", type=int, help="system dimension (default 2)")
    budget.add_argument("--gates", type=int, help="total gates n (default 1)")
    budget.add_argument("--qec-gates", type=int, help="corrected gates m (default 0)")
    budget.add_argument("--level", type=int, help="concatenation level (default 1)")
    budget.add_argument("--csv", default=None, help="also write the report as CSV to this path")

    sweep = commands.add_parser("sweep", help="sweep one parameter, emit CSV")
    sweep.add_argument("--parameter", choices=["p", "d", "m", "level", "n"], help="swept parameter")
    sweep.add_argument("--from", dest="start", type=float, help="sweep range start")
    sweep.add_argument("--to", dest="stop", type=float, help="sweep range stop")
    sweep.add_argument("--steps", type=int, help="grid size (default 25)")
    sweep.add_argument("--p", type=float)
    sweep.add_argument("--d", type=float)
    sweep.add_argument("--dim", type=int)
    sweep.add_argument("--gates", type=int)
    sweep.add_argument("--qec-gates", type=int)
    sweep.add_argument("--level", type=int)
    sweep.add_argument("--out", default=None, help="output CSV path (default: stdout)")

    commands.add_parser("threshold", help="break-even error rate of the correction step")

    plan = commands.add_parser("plan", help="cheapest correction plan meeting a target budget")
    plan.add_argument("--target-eps", dest="target_epsilon", type=float, required=True)
    plan.add_argument("--gates", type=int)
    plan.add_argument("--p", type=float)
    plan.add_argument("--d", type=float)
    plan.add_argument("--dim", type=int)
    plan.add_argument("--max-level", type=int, help="deepest level to consider (default 3)")

    validate = commands.add_parser("validate", help="run a validation suite")
    validate.add_argument("suite", choices=["syndromes", "montecarlo", "dp"])
    validate.add_argument("--seed", type=int)
    validate.add_argument("--p", type=float)
    validate.add_argument("--trials", type=int)
    validate.add_argument("--backend", choices=["pauli_frame", "circuit"])
    validate.add_argument("--level", type=int)
    validate.add_argument("--d", type=float)
    validate.add_argument("--dim", type=int)
    validate.add_argument("--pairs", type=int)
    validate.add_argument("--povms", type=int)

    return parser


def _load_config(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_number}: expected 'key = value', got {raw.strip()!r}")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


class _Settings:
    """Flag > config file > built-in default, per option."""

    def __init__(self, args: argparse.Namespace, config: dict):
        self.args = args
        self.config = config

    def get(self, field: str):
        value = getattr(self.args, field, None)
        if value is not None:
            return value
        if field in self.config:
            caster = _OPTION_TYPES[field]
            try:
                return caster(self.config[field])
            except ValueError:
                raise ValueError(
                    f"config value for {field!r} is not a valid {caster.__name__}: "
                    f"{self.config[field]!r}"
                )
        return _DEFAULTS.get(field)


def _make_client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        # the in-process test client is an implementation detail; its
        # dependency chatter is not the user's problem
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _print_error(response) -> int:
    try:
        detail = response.json().get("detail")
    except Exception:
        detail = response.text
    if response.status_code == 422:
        if isinstance(detail, list):
            for item in detail:
                loc = [part for part in item.get("loc", []) if part != "body"]
                flag = _flag_for(str(loc[-1])) if loc else "request"
                print(f"invalid {flag}: {item.get('msg', 'invalid value')}", file=sys.stderr)
        else:
            print(f"invalid request: {detail}", file=sys.stderr)
        return 2
    print(f"error: {detail}", file=sys.stderr)
    return 1


def _fmt(value: float) -> str:
    return format(value, _FLOAT_FORMAT)


def _budget_csv(payload: dict) -> str:
    columns = ("epsilon", "effective_p", "p", "d", "dim", "scenario_n", "scenario_m", "scenario_level")
    scenario = payload["scenario"]
    row = {
        "epsilon": _fmt(payload["epsilon"]),
        "effective_p": _fmt(payload["effective_p"]),
        "p": _fmt(scenario["p"]),
        "d": _fmt(payload["d"]),
        "dim": str(payload["dim"]),
        "scenario_n": str(scenario["n"]),
        "scenario_m": str(scenario["m"]),
        "scenario_level": str(scenario["level"]),
    }
    return (
        f"# schema=qdptune-budget-v1 columns={','.join(columns)}\n"
        + ",".join(columns)
        + "\n"
        + ",".join(row[c] for c in columns)
        + "\n"
    )


def _cmd_budget(client, settings: _Settings) -> int:
    body = {
        "p": settings.get("p"),
        "d": settings.get("d"),
        "dim": settings.get("dim"),
        "gates": settings.get("gates"),
        "qec_gates": settings.get("qec_gates"),
        "level": settings.get("level"),
    }
    response = client.post("/budget", json=body)
    if response.status_code != 200:
        return _print_error(response)
    payload = response.json()
    scenario = payload["scenario"]
    print(f"effective_p = {_fmt(payload['effective_p'])}")
    print(f"epsilon = {_fmt(payload['epsilon'])}")
    print(
        f"scenario: n={scenario['n']} m={scenario['m']} level={scenario['level']} "
        f"p={_fmt(scenario['p'])} d={_fmt(payload['d'])} dim={payload['dim']}"
    )
    csv_path = getattr(settings.args, "csv", None)
    if csv_path:
        try:
            with open(csv_path, "w", encoding="utf-8", newline="") as handle:
                handle.write(_budget_csv(payload))
        except OSError as exc:
            print(f"cannot write {csv_path}: {exc.strerror or exc}", file=sys.stderr)
            return 1
        print(f"wrote {csv_path}")
    return 0


def _cmd_sweep(client, settings: _Settings) -> int:
    for field in ("parameter", "start", "stop"):
        if settings.get(field) is None:
            print(f"missing required option {_flag_for(field)}", file=sys.stderr)
            return 2
    body = {
        "parameter": settings.get("parameter"),
        "start": settings.get("start"),
        "stop": settings.get("stop"),
        "steps": settings.get("steps"),
        "p": settings.get("p"),
        "d": settings.get("d"),
        "dim": settings.get("dim"),
        "gates": settings.get("gates"),
        "qec_gates": settings.get("qec_gates"),
        "level": settings.get("level"),
    }
    response = client.post("/sweep", json=body)
    if response.status_code != 200:
        return _print_error(response)
    out_path = getattr(settings.args, "out", None)
    if out_path:
        try:
            with open(out_path, "wb") as handle:
                handle.write(response.content)
        except OSError as exc:
            print(f"cannot write {out_path}: {exc.strerror or exc}", file=sys.stderr)
            return 1
        rows = response.text.count("\n") - 2
        print(f"wrote {rows} rows to {out_path}")
    else:
        sys.stdout.write(response.text)
    return 0


def _cmd_threshold(client) -> int:
    response = client.get("/threshold")
    if response.status_code != 200:
        return _print_error(response)
    payload = response.json()
    print(f"threshold p* = {payload['threshold']:.6f}")
    print(payload["note"])
    return 0


def _cmd_plan(client, settings: _Settings) -> int:
    body = {
        "target_epsilon": settings.get("target_epsilon"),
        "gates": settings.get("gates"),
        "p": settings.get("p"),
        "d": settings.get("d"),
        "dim": settings.get("dim"),
        "max_level": settings.get("max_level"),
    }
    response = client.post("/plan", json=body)
    if response.status_code != 200:
        return _print_error(response)
    payload = response.json()
    print(f"plan: correct m={payload['m']} of n={payload['scenario']['n']} gates at level {payload['level']}")
    print(f"achieved epsilon = {_fmt(payload['achieved_epsilon'])} (target {_fmt(payload['target_epsilon'])})")
    print(f"attainable: {'yes' if payload['attainable'] else 'no'}")
    if payload.get("warning"):
        print(f"warning: {payload['warning']}")
    print(json.dumps(payload, sort_keys=True))
    return 0


def _cmd_validate(client, settings: _Settings, suite: str) -> int:
    if suite == "syndromes":
        response = client.post("/validate/syndromes", json={"seed": settings.get("seed")})
        if response.status_code != 200:
            return _print_error(response)
        payload = response.json()
        ok = sum(1 for c in payload["cases"] if c["classical_ok"] and c["circuit_ok"])
        print(f"syndrome suite: {len(payload['cases'])} cases, {ok} ok")
        if not payload["passed"]:
            for case in payload["cases"]:
                if not (case["classical_ok"] and case["circuit_ok"]):
                    print(f"mismatch: {case['letter']} on qubit {case['qubit']}")
            print("FAIL")
            return 1
        print("PASS")
        return 0
    if suite == "montecarlo":
        body = {
            "p": settings.get("p"),
            "trials": settings.get("trials"),
            "seed": settings.get("seed"),
            "backend": settings.get("backend"),
            "level": settings.get("level"),
        }
        response = client.post("/validate/montecarlo", json=body)
        if response.status_code != 200:
            return _print_error(response)
        payload = response.json()
        report = payload["report"]
        print(
            f"montecarlo: backend={report['backend']} level={report['level']} "
            f"trials={report['trials']} failures={report['failures']} "
            f"residual_failures={report['residual_failures']}"
        )
        print(
            f"estimated = {_fmt(report['estimated_error'])} analytic = {_fmt(report['analytic_error'])} "
            f"z = {_fmt(report['z_score'])}"
        )
        if not payload["passed"]:
            print("FAIL (|z| >= 3)")
            return 1
        print("PASS (|z| < 3)")
        return 0
    body = {
        "p": settings.get("p"),
        "d": settings.get("d"),
        "dim": settings.get("dim"),
        "pairs": settings.get("pairs"),
        "povms": settings.get("povms"),
        "seed": settings.get("seed"),
    }
    response = client.post("/validate/dp", json=body)
    if response.status_code != 200:
        return _print_error(response)
    payload = response.json()
    print(
        f"dp check: max log ratio = {_fmt(payload['max_log_ratio'])} "
        f"bound = {_fmt(payload['bound_epsilon'])} "
        f"(pairs={payload['num_pairs']} povms={payload['num_povms']} skipped={payload['skipped']})"
    )
    if not payload["passed"]:
        print("FAIL (bound exceeded)")
        return 1
    print("PASS (bound holds)")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {}
    if args.config:
        try:
            config = _load_config(args.config)
        except (OSError, ValueError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
    unknown = set(config) - set(_OPTION_TYPES)
    if unknown:
        print(f"config error: unknown keys {sorted(unknown)}", file=sys.stderr)
        return 2
    settings = _Settings(args, config)
    client = _make_client(args.server)
    try:
        if args.command == "budget":
            return _cmd_budget(client, settings)
        if args.command == "sweep":
            return _cmd_sweep(client, settings)
        if args.command == "threshold":
            return _cmd_threshold(client)
        if args.command == "plan":
            return _cmd_plan(client, settings)
        if args.command == "validate":
            return _cmd_validate(client, settings, args.suite)
        parser.error(f"unknown command {args.command!r}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except httpx.HTTPError as exc:
        print(f"request failed: {exc}", file=sys.stderr)
        return 1
    finally:
        client.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
