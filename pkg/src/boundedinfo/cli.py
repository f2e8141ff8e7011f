"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 budget exhausted
(infinite complexity or undefined information).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import experiments, machine, quantum
from .bits import from_hex
from .info import Channel, FiniteProbability, load_json, prob_info, transform
from .machine import INFINITE, BudgetError, MachineBudget

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    """Parameters of one invocation; round-trips through JSON."""

    command: str
    params: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({"command": self.command, "params": self.params}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        obj = json.loads(text)
        return cls(obj["command"], dict(obj.get("params", {})))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json() + "\n")

    @classmethod
    def load(cls, path, command: str) -> "RunConfig":
        with open(path) as fh:
            obj = json.load(fh)
        if "params" in obj:
            return cls(obj.get("command", command), dict(obj["params"]))
        return cls(command, dict(obj))


# per-command defaults; values from --config and then the command line override these
DEFAULTS = {
    "enumerate": {"aux": "", "budget": None},
    "k": {"aux": "", "budget": None, "prob": False},
    "info-strings": {"aux": "", "budget": None},
    "info-probs": {"aux": "", "budget": None, "channel": None},
    "measure": {},
    "haar-check": {"n": "1,2", "samples": 100_000, "seed": 0},
    "exp-noinfo": {"n": "1,2,3", "samples": 10_000, "seed": 0, "povm": "basis", "budget": None},
    "exp-conservation": {"trials": 1000, "support_size": 3, "seed": 0, "budget": None},
    "validate-povm": {},
}

REQUIRED = {
    "k": ("string",),
    "info-strings": ("x", "y"),
    "info-probs": ("p", "q"),
    "measure": ("povm", "state"),
    "validate-povm": ("file",),
}

BUDGET_DEFAULTS = {
    "exp-noinfo": experiments.NOINFO_BUDGET,
    "exp-conservation": experiments.CONSERVATION_BUDGET,
}


def _parse_string(value: str, fmt: str | None) -> str:
    if fmt == "bits":
        if any(c not in "01" for c in value):
            raise ValueError(f"{value!r} is not a 0/1 literal")
        return value
    if fmt == "hex":
        return from_hex(value)
    if all(c in "01" for c in value):
        raise ValueError(f"{value!r} could be hex or a 0/1 literal; pass --bits or --hex")
    return from_hex(value)


def _budget(cmd: str, value) -> MachineBudget:
    base = BUDGET_DEFAULTS.get(cmd, machine.DEFAULT_BUDGET)
    if value is None:
        return base
    if isinstance(value, dict):
        return base.replace(**value)
    return MachineBudget.parse(str(value), base)


def _ints(value) -> list[int]:
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    return [int(v) for v in str(value).split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="boundedinfo", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, strings=False, budget=False, seed=False, out=False, workers=False):
        sp.add_argument("--config", help="JSON file of parameters; command-line flags win")
        if strings:
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--bits", dest="fmt", action="store_const", const="bits",
                           help="strings are 0/1 literals")
            g.add_argument("--hex", dest="fmt", action="store_const", const="hex",
                           help="strings are marker-bit hex (default)")
            sp.add_argument("--aux", default=None, help="auxiliary tape contents")
        if budget:
            sp.add_argument("--budget", default=None, help="e.g. L=18,T=10000,M=64")
        if seed:
            sp.add_argument("--seed", type=int, default=None)
        if out:
            sp.add_argument("--out", default=None, help="output path")
        if workers:
            sp.add_argument("--workers", type=int, default=None,
                            help="worker threads (default: all cores); results do not depend on it")

    sp = sub.add_parser("enumerate", help="dump the halting-program table")
    common(sp, strings=True, budget=True, out=True)

    sp = sub.add_parser("k", help="bounded complexity of a string")
    common(sp, strings=True, budget=True)
    sp.add_argument("--string")
    sp.add_argument("--prob", action="store_const", const=True, default=None,
                    help="also print the algorithmic probability")

    sp = sub.add_parser("info-strings", help="information i(x:y) between two strings")
    common(sp, strings=True, budget=True)
    sp.add_argument("--x")
    sp.add_argument("--y")

    sp = sub.add_parser("info-probs", help="information between two probability files")
    common(sp, strings=True, budget=True)
    sp.add_argument("--p", help="probability JSON")
    sp.add_argument("--q", help="probability JSON")
    sp.add_argument("--channel", default=None, help="channel JSON; also report i(fp:q)")

    sp = sub.add_parser("measure", help="Born-rule outcome probabilities")
    common(sp, out=True)
    sp.add_argument("--povm", help="POVM file (.json or canonical binary)")
    sp.add_argument("--state", help="state JSON")

    sp = sub.add_parser("haar-check", help="first and second moments of Haar states")
    common(sp, seed=True, workers=True)
    sp.add_argument("--n", default=None, help="comma-separated qubit counts")
    sp.add_argument("--samples", type=int, default=None)

    sp = sub.add_parser("exp-noinfo", help="self-information of measured Haar states")
    common(sp, budget=True, seed=True, out=True, workers=True)
    sp.add_argument("--n", default=None, help="comma-separated qubit counts")
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--povm", default=None, help="'basis', 'random:<outcomes>' or a POVM file")

    sp = sub.add_parser("exp-conservation", help="information slack under random channels")
    common(sp, budget=True, seed=True, out=True, workers=True)
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--support-size", type=int, default=None)

    sp = sub.add_parser("validate-povm", help="check a POVM file")
    common(sp)
    sp.add_argument("--file")
    return p


def _settings(args) -> dict:
    cmd = args.command
    merged = dict(DEFAULTS[cmd])
    if args.config:
        merged.update(RunConfig.load(args.config, cmd).params)
    for k, v in vars(args).items():
        if k in ("command", "config", "verbose") or v is None:
            continue
        merged[k] = v
    return merged


def _write(text: str, out) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _povm_spec(value, n_values):
    if value in (None, "basis"):
        return "basis"
    if isinstance(value, dict):
        return value
    if str(value).startswith("random:"):
        return {"random": {"outcomes": int(str(value).split(":", 1)[1])}}
    return quantum.load_povm(value)


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _run(args)
    except UsageError as err:
        parser.print_usage(sys.stderr)
        print(f"boundedinfo {args.command}: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except quantum.PovmValidationError as err:
        print(f"invalid POVM: {err}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetError as err:
        print(f"budget exhausted: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, KeyError, OSError) as err:
        print(f"invalid input: {err}", file=sys.stderr)
        return EXIT_INVALID


def _run(args) -> int:
    cmd = args.command
    s = _settings(args)
    missing = [k for k in REQUIRED.get(cmd, ()) if s.get(k) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + k for k in missing))
    fmt = s.get("fmt")
    if cmd in ("enumerate", "k", "info-strings", "info-probs"):
        budget = _budget(cmd, s["budget"])
        aux = _parse_string(s["aux"], fmt) if s["aux"] else ""

    if cmd == "enumerate":
        records = machine.enumerate_programs(aux, budget)
        _write("".join(r.dump_line() + "\n" for r in records), s.get("out"))
        return EXIT_OK

    if cmd == "k":
        x = _parse_string(s["string"], fmt)
        k = machine.complexity(x, aux, budget)
        if k == INFINITE:
            print("Infinite")
            return EXIT_BUDGET
        print(k)
        if s.get("prob"):
            m: Fraction = machine.algorithmic_probability(x, aux, budget)
            print(m)
        return EXIT_OK

    if cmd == "info-strings":
        x, y = _parse_string(s["x"], fmt), _parse_string(s["y"], fmt)
        print(machine.string_info(x, y, aux, budget))
        return EXIT_OK

    if cmd == "info-probs":
        table = machine.complexity_table(aux, budget)
        p = FiniteProbability.from_json(load_json(s["p"]))
        q = FiniteProbability.from_json(load_json(s["q"]))
        result = {"info": prob_info(p, q, table)}
        if s.get("channel"):
            fp = transform(Channel.from_json(load_json(s["channel"])), p)
            result["info_fp"] = prob_info(fp, q, table)
            result["slack"] = result["info_fp"] - result["info"]
        print(json.dumps(result))
        return EXIT_OK

    if cmd == "measure":
        povm = quantum.load_povm(s["povm"])
        state = quantum.PureState.from_json(load_json(s["state"]))
        _write(json.dumps(quantum.measure(povm, state).to_json()) + "\n", s.get("out"))
        return EXIT_OK

    if cmd == "haar-check":
        rows = []
        for n in _ints(s["n"]):
            d = 2 ** n
            first = quantum.first_moment_estimate(n, s["samples"], [s["seed"], n, 1], s.get("workers"))
            second = quantum.second_moment_estimate(n, s["samples"], [s["seed"], n, 2], s.get("workers"))
            sym = quantum.symmetric_projector(n)
            anti = np.eye(d * d) - sym
            rows.append({
                "n": n, "samples": s["samples"],
                "first_moment_max_err": float(np.abs(first - np.eye(d) / d).max()),
                "second_moment_max_err": float(np.abs(second - quantum.haar_second_moment(n)).max()),
                "antisymmetric_max": float(np.abs(anti @ second @ anti).max()),
            })
        print(json.dumps(rows, indent=2))
        return EXIT_OK

    if cmd == "exp-noinfo":
        n_values = _ints(s["n"])
        report = experiments.run_noinfo(_povm_spec(s["povm"], n_values), n_values, s["samples"],
                                        _budget(cmd, s["budget"]), s["seed"], s.get("workers"))
        return _finish(report, s.get("out"))

    if cmd == "exp-conservation":
        report = experiments.run_conservation(s["trials"], s["support_size"], _budget(cmd, s["budget"]),
                                              s["seed"], workers=s.get("workers"))
        return _finish(report, s.get("out"))

    if cmd == "validate-povm":
        povm = quantum.load_povm(s["file"])
        print(f"valid POVM: {povm.outcomes} outcomes on {povm.n} qubit(s)")
        return EXIT_OK

    raise UsageError(f"unhandled command {cmd}")


def _finish(report, out) -> int:
    if out:
        experiments.emit_report(report, out)
    else:
        sys.stdout.write(report.to_json())
    return EXIT_OK


def main(argv=None) -> int:
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
