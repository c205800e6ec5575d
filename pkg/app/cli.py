# Path from repo root: app/cli.py
"""
Command line entry point.

    advtrain train            --m --d --n --tau --rho --eps --K --seed --adversary --engine --out [--eta --T]
    advtrain bench-hsr        --d --m-list --active-frac --trials --seed --out
    advtrain bench-iteration  bench-hsr flags plus --n --workers
    advtrain verify           --suite --profile --seed --out
    advtrain gen-data         --n --d --eps-sep --rho --label-mode --seed --out

Every command also takes --config PATH (plain key=value lines; explicit flags win) and
--verbose. Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from app.core.config import get_settings
from app.core.errors import EXIT_OK, EXIT_RUNTIME, AdvTrainError, exit_code_for
from app.core.logging_ import setup_logging
from app.services.registry import run_task
from app.services.verify.suites import suite_names


log = logging.getLogger("cli")

# subcommand -> (service, task)
COMMANDS: dict[str, tuple[str, str]] = {
    "train": ("train", "train"),
    "bench-hsr": ("bench", "bench_hsr"),
    "bench-iteration": ("bench", "bench_iteration"),
    "verify": ("verify", "verify"),
    "gen-data": ("dataset", "generate"),
}
_NOT_PAYLOAD = {"command", "config", "verbose"}
_TRUE = {"1", "true", "yes", "on", ""}
_FALSE = {"0", "false", "no", "off"}


class UsageError(Exception):
    """Bad --config file contents."""


# ---------------------------
# Parser
# ---------------------------
def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH", help="key=value file; explicit flags override it")
    p.add_argument("--verbose", "-v", action="store_true", help="debug logging and a settings header on stderr")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    S = argparse.SUPPRESS
    parser = argparse.ArgumentParser(prog="advtrain", description="Sublinear adversarial training engine")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    t = sub.add_parser("train", parents=[common], help="run the training loop and write the metrics CSV")
    t.add_argument("--m", type=int, default=S, help="width")
    t.add_argument("--d", type=int, default=S, help="input dimension")
    t.add_argument("--n", type=int, default=S, help="training points")
    t.add_argument("--tau", type=float, default=S, help="activation threshold")
    t.add_argument("--rho", type=float, default=S, help="adversary l2 budget")
    t.add_argument("--eps", type=float, default=S, help="target accuracy in (0, 1)")
    t.add_argument("--K", type=float, default=S, help="radius scale")
    t.add_argument("--seed", type=int, default=S)
    t.add_argument("--adversary", choices=["null", "random", "pgd"], default=S)
    t.add_argument("--engine", choices=["hsr", "dense"], default=S)
    t.add_argument("--eta", type=float, default=S, help="learning-rate override")
    t.add_argument("--T", type=int, default=S, help="iteration-count override")
    t.add_argument("--pgd-steps", type=int, default=S)
    t.add_argument("--pgd-step-size", type=float, default=S)
    t.add_argument("--projection-rounds", type=int, default=S)
    t.add_argument("--eps-sep", type=float, default=S, help="separation of the generated dataset")
    t.add_argument("--label-mode", choices=["sign", "smooth"], default=S)
    t.add_argument("--dataset", metavar="PATH", default=S, help="dataset CSV instead of generating one")
    t.add_argument("--workers", type=int, default=S, help="threads for the attack/query phase")
    t.add_argument("--log-every", type=int, default=S)
    t.add_argument("--no-adversary-index", dest="adversary_uses_index", action="store_false", default=S,
                   help="adversary computes active sets by brute force")
    t.add_argument("--no-diagnostics", dest="track_diagnostics", action="store_false", default=S)
    t.add_argument("--out", metavar="PATH", default=S, help="metrics CSV (stdout when omitted)")

    for name, helptext in (
        ("bench-hsr", "index query cost vs m"),
        ("bench-iteration", "per-iteration training cost vs m, hsr vs dense"),
    ):
        b = sub.add_parser(name, parents=[common], help=helptext)
        b.add_argument("--d", type=int, default=S)
        b.add_argument("--m-list", type=_int_list, default=S, help="comma-separated widths")
        b.add_argument("--active-frac", type=float, default=S)
        b.add_argument("--trials", type=int, default=S)
        b.add_argument("--warmup", type=int, default=S)
        b.add_argument("--seed", type=int, default=S)
        b.add_argument("--out", metavar="PATH", default=S)
        if name == "bench-iteration":
            b.add_argument("--n", type=int, default=S)
            b.add_argument("--eps-sep", type=float, default=S)
            b.add_argument("--workers", type=int, default=S)

    v = sub.add_parser("verify", parents=[common], help="run acceptance suites")
    v.add_argument("--suite", choices=suite_names(), default=S)
    v.add_argument("--profile", choices=["quick", "full"], default=S)
    v.add_argument("--seed", type=int, default=S)
    v.add_argument("--out", metavar="PATH", default=S)

    g = sub.add_parser("gen-data", parents=[common], help="write a separable dataset CSV")
    g.add_argument("--n", type=int, default=S)
    g.add_argument("--d", type=int, default=S)
    g.add_argument("--eps-sep", type=float, default=S)
    g.add_argument("--rho", type=float, default=S)
    g.add_argument("--label-mode", choices=["sign", "smooth"], default=S)
    g.add_argument("--seed", type=int, default=S)
    g.add_argument("--budget", type=int, default=S, help="rejection-sampling draw budget")
    g.add_argument("--out", metavar="PATH", default=S)
    return parser


# ---------------------------
# --config
# ---------------------------
def _subparser(parser: argparse.ArgumentParser, command: str) -> argparse.ArgumentParser:
    for action in parser._subparsers._group_actions:  # noqa: SLF001
        if isinstance(action, argparse._SubParsersAction) and command in action.choices:  # noqa: SLF001
            return action.choices[command]
    raise UsageError(f"unknown command {command!r}")


def config_tokens(path: str | Path, sub: argparse.ArgumentParser) -> list[str]:
    """Turn key=value lines into flag tokens for `sub`. Unknown keys are usage errors."""
    options = {opt: a for a in sub._actions for opt in a.option_strings}  # noqa: SLF001
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e}") from None
    tokens: list[str] = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        action = options.get(flag)
        if action is None:
            # flags keep their case (--K, --T) but accept no other spelling
            action = options.get("--" + key)
            flag = "--" + key
        if action is None or flag in ("--config", "--help"):
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        if action.nargs == 0:
            if value.lower() in _TRUE:
                tokens.append(flag)
            elif value.lower() not in _FALSE:
                raise UsageError(f"{path}:{lineno}: {key} takes true/false, got {value!r}")
        else:
            tokens += [flag, value]
    return tokens


def parse(argv: Sequence[str]) -> argparse.Namespace:
    """Parse argv with --config contents spliced in before the explicit flags."""
    parser = build_parser()
    argv = list(argv)
    if argv and argv[0] in COMMANDS:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv[1:])
        if known.config:
            try:
                extra = config_tokens(known.config, _subparser(parser, argv[0]))
            except UsageError as e:
                parser.error(str(e))
            argv = [argv[0], *extra, *argv[1:]]
    return parser.parse_args(argv)


# ---------------------------
# Output
# ---------------------------
def _emit_csv(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()


def _report(command: str, result: dict[str, Any], payload: dict[str, Any]) -> int:
    out = payload.get("out")
    if command == "train":
        _emit_csv(result["metrics_csv"], out)
        print(
            f"T={result['T']} eta={result['eta']:.17g} weights_sha256={result['weights_sha256']}",
            file=sys.stderr,
        )
        return EXIT_OK
    if command in ("bench-hsr", "bench-iteration"):
        _emit_csv(result["csv"], out)
        print(f"loglog_slope={result['slope']:.6g}", file=sys.stderr)
        return EXIT_OK
    if command == "verify":
        _emit_csv(result["csv"], out)
        if not result["passed"]:
            print("failed: " + ", ".join(result["failed"]), file=sys.stderr)
            return EXIT_RUNTIME
        return EXIT_OK
    _emit_csv(result["csv"], out)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = parse(sys.argv[1:] if argv is None else argv)
    settings = get_settings()
    if args.verbose:
        settings = settings.model_copy(update={"LOG_LEVEL": "debug", "LOG_LEVEL_TRAINER": "debug"})
    setup_logging(settings, stream=sys.stderr)
    if args.verbose:
        print(json.dumps(settings.summary(), indent=2), file=sys.stderr)

    payload = {k: v for k, v in vars(args).items() if k not in _NOT_PAYLOAD}
    service, task = COMMANDS[args.command]
    try:
        result = run_task(service, task, payload)
    except AdvTrainError as e:
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)
    except Exception as e:
        log.debug("unhandled error", exc_info=True)
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return exit_code_for(e)
    return _report(args.command, result, payload)


if __name__ == "__main__":
    sys.exit(main())
