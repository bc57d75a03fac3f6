"""Command-line front end.

Exit codes: 0 success, 1 domain error (axioms fail, preconditions unmet,
certificate failure), 2 unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from . import codec
from .codec import ParseError
from .errors import CertificateFailure, GultraError
from .extend import GaugeChain, crosscheck_embed, extensor_phi
from .generate import random_extension_instance, random_ultrametric
from .retract import DEFAULT_BOUND, compute_retraction, find_one_lipschitz_retraction
from .space import ULTRAMETRIC, MetricTable, ud_distance, validate

OK, DOMAIN, INPUT = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple = ()
    seed: int = 0
    tau: str = "2"
    chain: str | None = None
    bound: int = DEFAULT_BOUND
    out: str | None = None
    points: int = 5
    depth: int = 3
    count: int = 200


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return codec.loads(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _read_table(path: str) -> MetricTable:
    return codec.decode_space_file(_read_json(path))


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ParseError(f"cannot write {out}: {exc.strerror}") from None


def _require_ultrametric(t: MetricTable):
    if t.flavor != ULTRAMETRIC:
        raise GultraError("input must be declared an ultrametric")
    report = validate(t)
    if report:
        raise GultraError(f"not an ultrametric: {report[0]}")


def _parse_chain(spec, dom) -> list | str | None:
    if spec is None or spec == "auto":
        return spec
    if isinstance(spec, str):
        parts = [p for p in spec.split(",") if p.strip()]
        if dom.kind != "rational":
            raise ParseError("--chain on the command line takes rational values; give other domains in the request")
        return [codec.decode_rational(p) for p in parts]
    if not isinstance(spec, list):
        raise ParseError("chain must be a list of values or \"auto\"")
    return [codec.decode_value(v, dom) for v in spec]


# -- commands -------------------------------------------------------------------


def cmd_validate(cfg: RunConfig) -> int:
    t = _read_table(cfg.inputs[0])
    found = validate(t)
    report = {
        "flavor": t.flavor,
        "valid": not found,
        "violations": [{"axiom": v.axiom, "witness": [t.space.points[i] for i in v.witness], "detail": v.detail} for v in found],
    }
    _emit(codec.dumps(report), cfg.out)
    return OK if not found else DOMAIN


def cmd_retract(cfg: RunConfig) -> int:
    t = _read_table(cfg.inputs[0])
    _require_ultrametric(t)
    r = compute_retraction(t, codec.decode_rational(cfg.tau))
    _emit(codec.dumps(codec.encode_retraction(r)), cfg.out)
    return OK


def cmd_retract_exact(cfg: RunConfig) -> int:
    t = _read_table(cfg.inputs[0])
    _require_ultrametric(t)
    r = find_one_lipschitz_retraction(t, cfg.bound)
    if r is None:
        raise GultraError("no 1-Lipschitz retraction exists")
    _emit(codec.dumps(codec.encode_retraction(r)), cfg.out)
    return OK


def cmd_extend(cfg: RunConfig) -> int:
    req = _read_json(cfg.inputs[0])
    if not isinstance(req, dict):
        raise ParseError("an extension request is a JSON object")
    for key in ("space", "h", "d_on_A"):
        if key not in req:
            raise ParseError(f"extension request has no {key!r}")
    dom = codec.decode_domain(req.get("domain"))
    space = codec.decode_space(req["space"])
    h = codec.decode_table(req["h"], space, dom, ULTRAMETRIC)
    flavor = req.get("flavor", ULTRAMETRIC)
    if flavor not in ("metric", ULTRAMETRIC):
        raise ParseError(f"unknown flavor {flavor!r}")
    d = codec.decode_table(req["d_on_A"], space.restrict(space.subset), dom, flavor)
    report = validate(d)
    if report:
        raise GultraError(f"d is not a {flavor}: {report[0]}")

    spec = req.get("retraction", {})
    if cfg.tau is not None or "map" not in spec:
        tau = cfg.tau if cfg.tau is not None else spec.get("tau", "2")
        _require_ultrametric(h)
        r = compute_retraction(h, codec.decode_rational(tau))
    else:
        r = codec.decode_retraction(spec, space)

    chain = _parse_chain(cfg.chain if cfg.chain is not None else req.get("chain", "auto"), dom)
    if chain == "auto":
        if dom.kind != "rational":
            raise GultraError("an automatic chain needs rational values")
        chain = GaugeChain.auto(d, h)
    else:
        chain = GaugeChain(tuple(chain))
    rep = extensor_phi(d, h, r, chain)
    _emit(codec.dumps(codec.encode_report(rep)), cfg.out)
    return OK


def cmd_ud(cfg: RunConfig) -> int:
    d, e = (_read_table(p) for p in cfg.inputs[:2])
    _require_ultrametric(d)
    _require_ultrametric(e)
    value = codec.encode_value(ud_distance(d, e))
    text = value if isinstance(value, str) else json.dumps(value)
    _emit(text + "\n", cfg.out)
    return OK


def cmd_gen(cfg: RunConfig) -> int:
    if cfg.points < 1 or cfg.depth < 1:
        raise GultraError("--points and --depth must be positive")
    rng = random.Random(cfg.seed)
    t = random_ultrametric(rng, cfg.points, depth=cfg.depth)
    _emit(codec.dumps(codec.encode_space_file(t)), cfg.out)
    return OK


def cmd_crosscheck(cfg: RunConfig) -> int:
    rng = random.Random(cfg.seed)
    equal, failures = 0, []
    for i in range(cfg.count):
        d, h, r, chain = random_extension_instance(rng)
        res = crosscheck_embed(d, h, r, chain)
        if res.equal:
            equal += 1
        else:
            failures.append((i, res.witness))
    lines = [f"{equal}/{cfg.count} equal"]
    lines += [f"instance {i}: differs at {w}" for i, w in failures]
    _emit("\n".join(lines) + "\n", cfg.out)
    return OK if equal == cfg.count else DOMAIN


COMMANDS = {
    "validate": cmd_validate,
    "retract": cmd_retract,
    "extend": cmd_extend,
    "ud": cmd_ud,
    "gen": cmd_gen,
    "crosscheck": cmd_crosscheck,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gultra", description="Group-valued metrics, retractions and extensions.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--out", help="write output here instead of stdout")
        return sp

    sp = add("validate", "check the declared axioms of a space file")
    sp.add_argument("file")
    sp = add("retract", "tau^2-Lipschitz retraction onto the subset")
    sp.add_argument("file")
    sp.add_argument("--tau", default="2")
    sp.add_argument("--exact", action="store_true", help="search for a 1-Lipschitz retraction instead")
    sp.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="point cap for --exact")
    sp = add("extend", "extend d from A to X")
    sp.add_argument("file")
    sp.add_argument("--tau", default=None, help="override the request's retraction")
    sp.add_argument("--chain", default=None, help="v1,v2,... or auto")
    sp = add("ud", "UD distance between two ultrametrics")
    sp.add_argument("files", nargs=2)
    sp = add("gen", "random hierarchical ultrametric")
    sp.add_argument("--points", type=int, default=5)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("crosscheck", "compare the rational and Hahn-field extensions")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=200)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    inputs = tuple(getattr(ns, "files", None) or ([ns.file] if getattr(ns, "file", None) else []))
    kw = {k: getattr(ns, k) for k in ("seed", "tau", "chain", "bound", "out", "points", "depth", "count") if hasattr(ns, k)}
    if "seed" in kw and kw["seed"] < 0:
        raise ParseError("--seed must be non-negative")
    return RunConfig(ns.command, inputs, **kw)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        if cfg.command == "retract" and ns.exact:
            return cmd_retract_exact(cfg)
        return COMMANDS[cfg.command](cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT
    except (GultraError, CertificateFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN


if __name__ == "__main__":
    sys.exit(main())
