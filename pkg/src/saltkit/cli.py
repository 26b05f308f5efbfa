"""saltkit command line: ingest, salt, decompile, eval, dataset.

Exit codes: 0 success, 1 some items failed (reported on stderr), 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from . import dataset as ds
from .cfg import build_cfg
from .config import ConfigError, load_config, with_overrides
from .evaluate import EmptyInput, NoAssertions, SandboxFailure, aggregate, load_cases, run_cases
from .ingest import IngestError, dump_module_json, load_module
from .llm import ChatClient
from .loops import detect_loops
from .pipeline import CCompiler, Clients, CompilerNotFound, Status, run_many, write_transcripts
from .salt import PromptTooLong, render_prompt, salt_of, serialize_salt

OK, ITEM_FAILURES, CONFIG_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read_input(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write_output(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _report(failures: Sequence[str]) -> int:
    for f in failures:
        print(f"saltkit: {f}", file=sys.stderr)
    return ITEM_FAILURES if failures else OK


# Subcommands -----------------------------------------------------------------


def cmd_ingest(args, cfg) -> int:
    functions, data = load_module(_read_input(args.input))
    _write_output(dump_module_json(functions, data), args.out)
    return OK


def _salt_one(fn, data, budget, templates):
    g = build_cfg(fn)
    text = serialize_salt(salt_of(fn, data))
    failure = None
    if budget is not None:
        try:
            render_prompt(text, budget, template_dir=templates)
        except PromptTooLong as exc:
            failure = f"{fn.name}: {exc}"
    return fn, g, text, failure


def cmd_salt(args, cfg) -> int:
    functions, data = load_module(_read_input(args.input))
    if args.function:
        functions = [f for f in functions if f.name == args.function]
        if not functions:
            raise UsageError(f"no function named {args.function!r}")
    templates = None if cfg.templates is None else str(cfg.templates)
    with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
        results = list(pool.map(lambda f: _salt_one(f, data, cfg.token_budget, templates), functions))
    if args.emit_cfg_dot:
        Path(args.emit_cfg_dot).write_text("".join(g.to_dot() for _, g, _, _ in results))
    if args.emit_loops_json:
        forests = {fn.name: json.loads(detect_loops(g).to_json()) for fn, g, _, _ in results}
        Path(args.emit_loops_json).write_text(json.dumps(forests, indent=2, sort_keys=True) + "\n")
    failures = [r[3] for r in results if r[3]]
    if args.json:
        out = json.dumps([{"name": fn.name, "salt": text} for fn, _, text, _ in results], indent=2) + "\n"
    else:
        out = "\n\n".join(text for _, _, text, _ in results) + "\n"
    _write_output(out, args.out)
    return _report(failures)


def _salt_items(path: Optional[str], text: str) -> list[tuple[str, str]]:
    """SALT inputs: a single SALT text, or JSONL lines carrying ``salt`` (and ``id``)."""
    if text.lstrip().startswith("{"):
        items = []
        for n, line in enumerate(text.splitlines(), start=1):
            if line.strip():
                obj = json.loads(line)
                fid = str(obj.get("id", n))
                if "level" in obj:
                    fid = f"{fid}@{obj['level']}"
                items.append((fid, obj["salt"]))
        return items
    stem = Path(path).stem if path and path != "-" else "f"
    return [(stem, text.rstrip("\n"))]


def _clients(cfg) -> Clients:
    cache: dict = {}

    def client(role):
        ep = cfg.endpoint(role)
        if ep not in cache:
            cache[ep] = ChatClient(ep)
        return cache[ep]

    return Clients(client("decompiler"), client("cef"), client("bef"), client("symbols"))


def cmd_decompile(args, cfg) -> int:
    items = _salt_items(args.input, _read_input(args.input))
    try:
        compiler = CCompiler(cfg.compiler, scratch=None if cfg.scratch is None else str(cfg.scratch))
    except CompilerNotFound as exc:
        raise ConfigError(f"compiler not found: {exc}") from None
    clients = _clients(cfg)
    templates = None if cfg.templates is None else str(cfg.templates)
    records = run_many(items, clients, compiler, jobs=cfg.jobs, template_dir=templates)
    transcript = args.transcript or (f"{args.out}.transcript.json" if args.out else "decompile.transcript.json")
    write_transcripts(records, transcript)
    if args.json:
        out = json.dumps([{k: v for k, v in r.to_json().items() if k != "transcript"} for r in records], indent=2) + "\n"
    elif len(records) == 1:
        out = (records[0].candidate or "") + "\n"
    else:
        out = "".join(f"/* {r.function_id} */\n{r.candidate or ''}\n\n" for r in records)
    _write_output(out, args.out)
    failures = [
        f"{r.function_id}: {r.reason or 'does not compile'}"
        for r in records
        if r.status == Status.FAILED or not r.compiles
    ]
    return _report(failures)


def cmd_eval(args, cfg) -> int:
    source = args.cases or args.input
    if source is None:
        raise UsageError("eval needs --cases DIR or --in FILE")
    try:
        cases = load_cases(source)
    except (OSError, KeyError, json.JSONDecodeError, NoAssertions, ValueError) as exc:
        raise UsageError(f"cannot load cases from {source}: {exc}") from None
    if args.opt_level:
        cases = [c for c in cases if c.level in args.opt_level]
    scratch = None if cfg.scratch is None else str(cfg.scratch)
    try:
        results = run_cases(cases, compiler=cfg.compiler, jobs=cfg.jobs, scratch=scratch)
        report = aggregate(results)
    except SandboxFailure as exc:
        raise ConfigError(str(exc)) from None
    except EmptyInput as exc:
        raise UsageError(str(exc)) from None
    _write_output(report.to_json() if args.json else report.table(), args.out)
    return OK


def cmd_dataset(args, cfg) -> int:
    if args.out is None:
        raise UsageError("dataset needs --out FILE")
    opts = dict(cfg.dataset)
    levels = tuple(args.opt_level or opts.get("levels", ds.LEVELS))
    try:
        recipe = ds.BuildRecipe(
            compiler=opts.get("compiler", cfg.compiler),
            compiler_version=opts.get("compiler_version"),
            levels=levels,
            flags=tuple(opts.get("flags", ("-shared", "-fPIC"))),
            strip=opts.get("strip", True),
            formatter=tuple(opts["formatter"]) if opts.get("formatter") else None,
            renamer=tuple(opts["renamer"]) if opts.get("renamer") else None,
        )
        policy = ds.FilterPolicy(
            seed=args.seed if args.seed is not None else opts.get("seed", 0),
            retention=opts.get("retention", 0.20),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"dataset settings: {exc}") from None
    corpus = ds.load_corpus(args.input) if args.input else None
    if not corpus:
        raise UsageError("dataset needs --in with a corpus directory or JSONL file")
    try:
        result = ds.build_pairs(corpus, recipe, policy, budget=cfg.token_budget, jobs=cfg.jobs)
    except ds.ToolVersionMismatch as exc:
        raise ConfigError(str(exc)) from None
    ds.write_pairs(result, args.out, args.manifest or f"{args.out}.manifest.json")
    if args.json:
        print(json.dumps(result.manifest(), indent=2, sort_keys=True))
    return _report([f"{f.id}@{f.level}: {f.kind}: {f.detail.splitlines()[0] if f.detail else ''}" for f in result.failures])


# Parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--in", dest="input", help="input file ('-' for stdin)")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--jobs", type=int, help="worker pool size")
    common.add_argument("--token-budget", type=int, help="prompt size limit in estimated tokens")

    p = argparse.ArgumentParser(prog="saltkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    sp = sub.add_parser("ingest", parents=[common], help="listing to canonical JSON")
    sp.set_defaults(run=cmd_ingest)

    sp = sub.add_parser("salt", parents=[common], help="function to SALT text")
    sp.add_argument("--function", help="only this function")
    sp.add_argument("--emit-cfg-dot", metavar="PATH", help="also write the CFG as Graphviz dot")
    sp.add_argument("--emit-loops-json", metavar="PATH", help="also write the loop forest as JSON")
    sp.set_defaults(run=cmd_salt)

    sp = sub.add_parser("decompile", parents=[common], help="SALT to repaired C via the model endpoints")
    sp.add_argument("--transcript", metavar="PATH", help="where to write the prompt/response transcript")
    sp.set_defaults(run=cmd_decompile)

    sp = sub.add_parser("eval", parents=[common], help="run test scaffolds against decompiled code")
    sp.add_argument("--cases", help="directory of case JSON files or a JSONL file")
    sp.add_argument("--opt-level", action="append", choices=ds.LEVELS, help="restrict to these levels")
    sp.set_defaults(run=cmd_eval)

    sp = sub.add_parser("dataset", parents=[common], help="corpus to SALT/source training pairs")
    sp.add_argument("--opt-level", action="append", choices=ds.LEVELS, help="build only these levels")
    sp.add_argument("--manifest", metavar="PATH", help="failure/filter manifest (default OUT.manifest.json)")
    sp.add_argument("--seed", type=int, help="sampling seed for loop-free functions")
    sp.set_defaults(run=cmd_dataset)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not args.command:
        parser.print_help(sys.stderr)
        return CONFIG_ERROR
    try:
        cfg = with_overrides(load_config(args.config), jobs=args.jobs, token_budget=args.token_budget)
        return args.run(args, cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"saltkit: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    except ConfigError as exc:
        print(f"saltkit: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    except IngestError as exc:
        print(f"saltkit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return ITEM_FAILURES


if __name__ == "__main__":
    sys.exit(main())
