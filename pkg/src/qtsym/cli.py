"""Command-line front end.

Subcommands: expand (evaluate an operator expression and print it in a
chosen basis), verify (run identity checks and stream JSON-line reports),
enumerate (labelled-path statistics as CSV), cache (inspect, clear, or
prewarm the disk cache), bench (coarse per-module timings).

Configuration comes from an optional key=value file plus flags; flags win.
Exit codes: 0 success or all checks passed, 1 usage or expression error,
2 computation error, 3 verification failure.  Apart from bench timings and
the verify summary on stderr, output is deterministic for a fixed
configuration and seed; report timings are therefore kept off stdout.
"""

import argparse
import json
import sys
import time
from pathlib import Path

from . import cache as cachemod
from . import dsl
from .config import configured, get_config
from .errors import CheckFailure, ExprTypeError, ParseError, QtsymError
from .partitions import compositions_of, partitions_of
from .verify import run_check, run_suite, summary_table

_CONFIG_KEYS = ("max_degree", "mode", "cache_dir", "threads", "seed", "disk_cache")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as exit code 1, not 2."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise _UsageError(f"not a boolean: {text!r}")


def _load_config_file(path: str) -> dict:
    """key=value per line; '#' starts a comment; unknown keys are errors."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read config file: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise _UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_KEYS:
            raise _UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        out[key] = value
    return out


def _settings(ns) -> dict:
    """Merge config file and flags into update_config keyword arguments."""
    merged = {}
    if ns.config:
        raw = _load_config_file(ns.config)
        for key, value in raw.items():
            try:
                if key in ("max_degree", "threads", "seed"):
                    merged[key] = int(value)
                elif key == "disk_cache":
                    merged[key] = _parse_bool(value)
                elif key == "cache_dir":
                    merged[key] = Path(value).expanduser()
                else:
                    merged[key] = value
            except ValueError as exc:
                raise _UsageError(f"config key {key}: {exc}") from exc
    for key in ("max_degree", "mode", "threads", "seed"):
        value = getattr(ns, key)
        if value is not None:
            merged[key] = value
    if ns.cache_dir is not None:
        merged["cache_dir"] = Path(ns.cache_dir).expanduser()
    return merged


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="key=value settings file")
    common.add_argument("--max-degree", dest="max_degree", type=int, default=None)
    common.add_argument("--mode", choices=("exact", "evaluated"), default=None)
    common.add_argument("--cache-dir", dest="cache_dir", default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument(
        "--json", action="store_true", help="machine-readable output"
    )

    parser = _Parser(prog="qtsym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p_expand = sub.add_parser(
        "expand", parents=[common], help="evaluate an operator expression"
    )
    p_expand.add_argument("expression")
    p_expand.add_argument(
        "--basis", choices=("e", "h", "p", "s", "m"), default="s"
    )

    p_verify = sub.add_parser(
        "verify", parents=[common], help="run identity checks"
    )
    p_verify.add_argument(
        "--suite", choices=("quick", "full", "extended"), default=None
    )
    p_verify.add_argument("--check", metavar="ID", default=None)
    p_verify.add_argument(
        "--params", metavar="JSON", default="{}", help="parameters for --check"
    )

    p_enum = sub.add_parser(
        "enumerate", parents=[common], help="stream path statistics as CSV"
    )
    p_enum.add_argument("-n", type=int, required=True, help="path size")
    p_enum.add_argument("-k", type=int, default=0, help="decorated rises")
    p_enum.add_argument(
        "--labels", type=int, default=None, help="label bound (default n)"
    )
    p_enum.add_argument(
        "--unlabelled", action="store_true", help="suppress labels"
    )
    p_enum.add_argument(
        "--dcomp", metavar="A,B,...", default=None,
        help="restrict to one diagonal composition",
    )

    p_cache = sub.add_parser(
        "cache", parents=[common], help="manage the disk cache"
    )
    p_cache.add_argument("action", choices=("list", "clear", "prewarm"))
    p_cache.add_argument(
        "--size", type=int, default=4, help="prewarm degree bound"
    )

    sub.add_parser("bench", parents=[common], help="coarse per-module timings")
    return parser


# ---------------------------------------------------------------------------
# subcommands


def _cmd_expand(ns) -> int:
    result = dsl.evaluate(dsl.parse(ns.expression))
    if ns.json:
        print(json.dumps(result.to_json(ns.basis), sort_keys=True))
    else:
        print(result.str_in(ns.basis))
    return 0


def _tuplize(value):
    if isinstance(value, list):
        return tuple(_tuplize(v) for v in value)
    if isinstance(value, dict):
        return {k: _tuplize(v) for k, v in value.items()}
    return value


def _cmd_verify(ns) -> int:
    if ns.check is not None and ns.suite is not None:
        raise _UsageError("qtsym verify: --suite and --check are exclusive")
    if ns.check is not None:
        try:
            params = _tuplize(json.loads(ns.params))
        except json.JSONDecodeError as exc:
            raise _UsageError(f"qtsym verify: bad --params JSON: {exc}") from exc
        if not isinstance(params, dict):
            raise _UsageError("qtsym verify: --params must be a JSON object")
        reports = [run_check(ns.check, params)]
    else:
        reports = run_suite(ns.suite or "quick")
    for rep in reports:
        line = {k: v for k, v in rep.to_json().items() if k != "elapsed"}
        print(json.dumps(line, sort_keys=True))
    if not ns.json:
        print(summary_table(reports), file=sys.stderr)
    return 0 if all(r.status == "pass" for r in reports) else 3


def _enum_stream(ns):
    from .paths import enumerate_paths

    if ns.n < 1:
        raise _UsageError("qtsym enumerate: -n must be positive")
    dcomp = None
    if ns.dcomp is not None:
        try:
            dcomp = tuple(int(p) for p in ns.dcomp.split(","))
        except ValueError as exc:
            raise _UsageError(f"qtsym enumerate: bad --dcomp: {exc}") from exc
    label_max = 0 if ns.unlabelled else (ns.n if ns.labels is None else ns.labels)
    return enumerate_paths(ns.n, ns.k, label_max=label_max, dcomp_filter=dcomp)


def _cmd_enumerate(ns) -> int:
    stream = _enum_stream(ns)
    if not ns.json:
        from .paths import write_csv

        write_csv(sys.stdout, stream)
        return 0
    for p in stream:
        labelled = p.labels is not None
        print(
            json.dumps(
                {
                    "areaWord": list(p.path.area_word),
                    "dr": sorted(p.dr),
                    "w": list(p.labels) if labelled else None,
                    "dinv": p.dinv() if labelled else None,
                    "area": p.area(),
                    "dcomp": list(p.dcomp()),
                },
                sort_keys=True,
            )
        )
    return 0


def _cmd_cache(ns) -> int:
    if ns.action == "list":
        entries = cachemod.list_entries()
        if ns.json:
            print(
                json.dumps(
                    [
                        {"section": s, "name": n, "bytes": b}
                        for s, n, b in entries
                    ],
                    sort_keys=True,
                )
            )
        else:
            for section, name, size in entries:
                print(f"{section}\t{name}\t{size}")
            print(f"{len(entries)} entries", file=sys.stderr)
        return 0
    if ns.action == "clear":
        count = cachemod.clear_disk()
        print(json.dumps({"removed": count}) if ns.json else f"removed {count}")
        return 0
    # prewarm: the Macdonald basis up to the requested degree, and the
    # path-algebra star operators for every (composition, decoration) load
    # of total size within it
    from .macdonald import htilde
    from .pathalg import m_star

    size = ns.size
    if size < 1 or size > get_config().max_degree:
        raise _UsageError(
            "qtsym cache: --size must be between 1 and the degree bound"
        )
    warmed = 0
    for n in range(1, size + 1):
        for mu in partitions_of(n):
            htilde(mu)
            warmed += 1
    for total in range(1, size + 1):
        for k in range(total):
            for alpha in compositions_of(total - k):
                m_star(alpha, k)
                warmed += 1
    print(json.dumps({"warmed": warmed}) if ns.json else f"warmed {warmed}")
    return 0


def _cmd_bench(ns) -> int:
    from . import macdonald, pathalg, paths
    from .qt import Q, RAT_ONE, QtRat
    from .symfunc import Alphabet, e_, s_

    big = QtRat.parse("q^9 + 3*q^5*t^3 - 2*t^7 + 1")

    def _qt_job():
        for i in range(1, 120):
            step = big + QtRat.from_int(i)
            (step * step) / step  # noqa: B018 -- exercise mul + normalized div

    jobs = (
        ("qt", "rational arithmetic", _qt_job),
        ("symfunc", "pleth + hall at degree 6", lambda: (
            e_(6).pleth(Alphabet.x(RAT_ONE - Q)),
            s_((3, 2, 1)).hall(s_((3, 2, 1))),
        )),
        ("macdonald", "nabla e4", lambda: macdonald.nabla(e_(4))),
        ("paths", "gen_fn(5,1)", lambda: paths.gen_fn(5, 1)),
        ("pathalg", "m_star((2,1),1)", lambda: pathalg.m_star((2, 1), 1)),
        ("verify", "thm_2_1 n=4", lambda: run_check(
            "thm_2_1", {"n": 4, "k": 1}
        )),
    )
    rows = []
    for module, label, fn in jobs:
        start = time.perf_counter()
        fn()
        rows.append((module, label, time.perf_counter() - start))
    if ns.json:
        print(
            json.dumps(
                [
                    {"module": m, "op": o, "seconds": round(s, 4)}
                    for m, o, s in rows
                ]
            )
        )
    else:
        for module, label, secs in rows:
            print(f"{module:<10} {label:<24} {secs:>8.3f}s")
    return 0


_COMMANDS = {
    "expand": _cmd_expand,
    "verify": _cmd_verify,
    "enumerate": _cmd_enumerate,
    "cache": _cmd_cache,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        settings = _settings(ns)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        with configured(**settings):
            return _COMMANDS[ns.command](ns)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, ExprTypeError, CheckFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except QtsymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # bad settings (negative degree, unknown mode) surface here
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
