"""``projcoh`` command line: exact, machine-readable reports.

Exit codes: 0 success, 1 usage error, 2 a checked identity failed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Any

from .exactalg import fmt_rational, parse_rational

SCHEMA_VERSION = "1"

CONVENTIONS = {
    "rationals": "exact strings 'n' or 'n/d'",
    "embedding": "h* = -h^i d_i, A* = -A^i_j x^j d_i, alpha* = alpha(x) x^i d_i",
    "lie_derivative": "L_X P = X.P - (d_j X^i) xi_i D_xi_j P + delta div(X) P",
    "operators": "normal ordered x^a xi^b dx^d Dxi^g, |g| = source xi-degree",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 by default; usage errors are 1 here
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _rat(text: str) -> Fraction:
    return parse_rational(text)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise ValueError("must be positive")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise ValueError("must be non-negative")
    return v


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=_positive, default=1)
    p.add_argument("--format", choices=("json", "tsv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="projcoh", description="Exact sl(m+1) cohomology and quantization reports.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("betti", help="cohomology dimensions of a coefficient module")
    _add_common(p)
    p.add_argument("--module", choices=("field", "densities", "operators"), default="operators")
    p.add_argument("--lambda", dest="lam", type=_rat)
    p.add_argument("--mu", type=_rat)
    p.add_argument("--delta", type=_rat)
    p.add_argument("--p", type=_nonneg, default=0)
    p.add_argument("--q", type=_nonneg, default=0)
    p.add_argument("--order-cap", type=_nonneg, default=3)
    p.add_argument("--max-degree", type=_nonneg, default=3)
    p.add_argument("--xdeg", type=_nonneg, default=4)
    p.add_argument("--oracle", action="store_true", help="brute-force bounded full complex (m = 1)")
    p.add_argument("--representatives", action="store_true")
    p.add_argument("--allow-high-degree", action="store_true",
                   help="permit cochain degree > 3 when m >= 2 (slow)")

    p = sub.add_parser("split", help="does the order-k symbol sequence split")
    _add_common(p)
    p.add_argument("--lambda", dest="lam", type=_rat, required=True)
    p.add_argument("--mu", type=_rat, required=True)
    p.add_argument("--k", type=_positive, required=True)

    p = sub.add_parser("quantize", help="equivariant quantization coefficients up to order k")
    _add_common(p)
    p.add_argument("--lambda", dest="lam", type=_rat, required=True)
    p.add_argument("--mu", type=_rat, required=True)
    p.add_argument("--k", type=_nonneg, required=True)

    p = sub.add_parser("casimir", help="Casimir scalar on S_delta^p")
    _add_common(p)
    p.add_argument("--p", type=_nonneg, default=0)
    p.add_argument("--delta", type=_rat)
    p.add_argument("--lambda", dest="lam", type=_rat, help="alias for --delta")

    p = sub.add_parser("cocycles", help="cocycle and coboundary verdicts for tau_n and gamma_n")
    _add_common(p)
    p.add_argument("--p", type=_nonneg, required=True)
    p.add_argument("--q", type=_nonneg, required=True)
    p.add_argument("--delta", type=_rat, required=True)
    p.add_argument("--order-cap", type=_nonneg)

    p = sub.add_parser("homs", help="basis of equivariant operators S_delta^p -> S_delta^q")
    _add_common(p)
    p.add_argument("--p", type=_nonneg, required=True)
    p.add_argument("--q", type=_nonneg, required=True)
    p.add_argument("--delta", type=_rat, required=True)
    p.add_argument("--order-cap", type=_nonneg, default=3)
    p.add_argument("--xdeg", type=_nonneg, default=3)

    p = sub.add_parser("critical-table", help="critical weights")
    _add_common(p)
    p.add_argument("--n", type=_positive, default=3)
    return parser


# ---------------------------------------------------------------------------
# commands; each returns (result dict, list of violated identities)


def cmd_betti(a) -> tuple[dict, list]:
    from .cohomology import FieldModule, OperatorModule, betti, betti_oracle

    if a.module == "field":
        delta = a.delta if a.delta is not None else a.lam
        if delta is None:
            raise UsageError("--module field needs --delta (or --lambda)")
        module = FieldModule(a.m, delta, a.p)
    elif a.module == "densities":
        if a.lam is None or a.mu is None:
            raise UsageError("--module densities needs --lambda and --mu")
        module = OperatorModule.densities(a.m, a.lam, a.mu, a.order_cap)
    else:
        if a.delta is None:
            raise UsageError("--module operators needs --delta")
        module = OperatorModule.symbols(a.m, a.delta, a.p, a.q, a.order_cap)
    if a.m >= 2 and a.max_degree > 3 and not a.allow_high_degree:
        raise UsageError("cochain degree > 3 at m >= 2 needs --allow-high-degree")
    if a.oracle:
        if a.m != 1:
            raise UsageError("--oracle is only available for m = 1")
        rep = betti_oracle(module, a.max_degree, a.xdeg)
    else:
        rep = betti(module, a.max_degree, representatives=a.representatives)
    violations = [] if rep.dd_zero else [{"identity": "d o d = 0", "witness": rep.module}]
    return rep.to_json(), violations


def cmd_split(a) -> tuple[dict, list]:
    from .namedmaps import split_decision

    rep = split_decision(a.m, a.lam, a.mu, a.k)
    out = rep.to_json()
    bad = [] if rep.consistent else [{"identity": "split predicate = solver feasibility", "witness": out}]
    return out, bad


def cmd_quantize(a) -> tuple[dict, list]:
    from .namedmaps import quantization_map, split_critical_deltas, verify_quantization

    delta = a.mu - a.lam
    resonant = {d for k in range(1, a.k + 1) for d in split_critical_deltas(a.m, k)}
    guaranteed = delta not in resonant
    levels = quantization_map(a.m, a.lam, a.mu, a.k)
    rows, bad = [], []
    for lv in levels:
        row: dict[str, Any] = {"k": lv.k, "exists": lv.exists}
        if lv.exists:
            row["coefficients"] = [fmt_rational(c) for c in lv.coefficients]
            row["kernel_dim"] = lv.kernel_dim
            row["equivariant"] = verify_quantization(a.m, a.lam, a.mu, lv.k, lv.coefficients)
            row["ratio_signs"] = lv.ratio_signs()
            if not row["equivariant"]:
                bad.append({"identity": "quantization equivariance", "witness": {"k": lv.k}})
            if guaranteed and lv.kernel_dim:
                bad.append({"identity": "uniqueness of the quantization", "witness": {"k": lv.k}})
        elif guaranteed:
            bad.append({"identity": "existence of the quantization", "witness": {"k": lv.k}})
        if lv.expected is not None:
            row["expected"] = [fmt_rational(c) for c in lv.expected]
        rows.append(row)
    out = {"m": a.m, "lambda": fmt_rational(a.lam), "mu": fmt_rational(a.mu), "delta": fmt_rational(delta),
           "existence_guaranteed": guaranteed, "levels": rows}
    return out, bad


def cmd_casimir(a) -> tuple[dict, list]:
    from .denstensor import SpaceCtx
    from .namedmaps import casimir, casimir_formula

    delta = a.delta if a.delta is not None else a.lam
    if delta is None:
        raise UsageError("casimir needs --delta")
    _, c = casimir(SpaceCtx(a.m, delta, a.p))
    f = casimir_formula(a.m, a.p, delta)
    out = {"m": a.m, "p": a.p, "delta": fmt_rational(delta), "c": None if c is None else fmt_rational(c),
           "formula": fmt_rational(f), "scalar": c is not None, "formula_match": c == f}
    bad = [] if c == f else [{"identity": "Casimir scalar formula", "witness": out}]
    return out, bad


def cmd_cocycles(a) -> tuple[dict, list]:
    from .cohomology import Cochain, OperatorModule, class_rank, sl_algebra
    from .denstensor import SpaceCtx
    from .namedmaps import cocycle_check, gamma_cochain, tau_cochain, v_n

    if a.p < a.q:
        raise UsageError("cocycles needs p >= q")
    n = a.p - a.q
    src = SpaceCtx(a.m, a.delta, a.p)
    cap = max(n, a.order_cap if a.order_cap is not None else n)
    module = OperatorModule(src, SpaceCtx(a.m, a.delta, a.q), cap)
    alg = sl_algebra(a.m)
    v = v_n(a.m, a.delta, a.p, n) if n else Fraction(0)
    out: dict[str, Any] = {"m": a.m, "p": a.p, "q": a.q, "n": n, "delta": fmt_rational(a.delta),
                           "v": fmt_rational(v), "order_cap": cap}
    bad = []

    def verdict(name, fn):
        ok = cocycle_check(fn, a.m)
        entry: dict[str, Any] = {"cocycle": ok}
        if ok:
            c = Cochain(1, alg, module, {(i,): fn(i).terms for i in range(alg.dim)})
            entry["coboundary"] = class_rank([c]) == 0
        out[name] = entry
        return entry

    t = verdict("tau", tau_cochain(n, src))
    if t["cocycle"] != (n == 0 or v == 0):
        bad.append({"identity": "tau_n is a cocycle exactly when v_n = 0", "witness": {"v": fmt_rational(v)}})
    if n >= 1:
        g = verdict("gamma", gamma_cochain(n, src))
        if not g["cocycle"]:
            bad.append({"identity": "gamma_n is a cocycle", "witness": {}})
        elif g["coboundary"] != (v != 0):
            bad.append({"identity": "gamma_n is a coboundary exactly when v_n != 0",
                        "witness": {"v": fmt_rational(v)}})
        if t["cocycle"] and g["cocycle"]:
            cs = [Cochain(1, alg, module, {(i,): fn(i).terms for i in range(alg.dim)})
                  for fn in (tau_cochain(n, src), gamma_cochain(n, src))]
            out["class_rank"] = class_rank(cs)
    return out, bad


def cmd_homs(a) -> tuple[dict, list]:
    from .denstensor import SpaceCtx
    from .namedmaps import critical_delta, equivariant_homs

    src, tgt = SpaceCtx(a.m, a.delta, a.p), SpaceCtx(a.m, a.delta, a.q)
    homs = equivariant_homs(src, tgt, a.order_cap, a.xdeg)
    out = {"m": a.m, "p": a.p, "q": a.q, "delta": fmt_rational(a.delta), "order_cap": a.order_cap,
           "xdeg": a.xdeg, "dimension": len(homs), "basis": [h.to_text() for h in homs]}
    if a.p < a.q:
        expected = 0
    elif a.p == a.q:
        expected = 1
    else:
        expected = int(a.delta == critical_delta(a.m, a.p, a.q) and a.p - a.q <= a.order_cap)
    out["expected_dimension"] = expected
    bad = [] if expected == len(homs) else [{"identity": "classification of equivariant operators",
                                              "witness": {"dimension": len(homs)}}]
    return out, bad


def cmd_critical_table(a) -> tuple[dict, list]:
    from .namedmaps import critical_table

    return critical_table(a.m, a.n), []


COMMANDS = {
    "betti": cmd_betti,
    "split": cmd_split,
    "quantize": cmd_quantize,
    "casimir": cmd_casimir,
    "cocycles": cmd_cocycles,
    "homs": cmd_homs,
    "critical-table": cmd_critical_table,
}


# ---------------------------------------------------------------------------
# output


def load_schema(command: str) -> dict:
    """The published JSON schema for a command's report."""
    from importlib import resources

    text = resources.files("projcoh").joinpath("schemas", f"{command}.schema.json").read_text()
    return json.loads(text)


def _flatten(prefix: str, obj, out: list) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, list):
        if not obj:
            out.append((prefix, "[]"))
        for i, v in enumerate(obj):
            _flatten(f"{prefix}.{i}", v, out)
    else:
        out.append((prefix, json.dumps(obj) if not isinstance(obj, str) else obj))


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    rows: list = []
    _flatten("", doc, rows)
    return "".join(f"{k}\t{v}\n" for k, v in rows)


_NEGATIVE = re.compile(r"^-\d+(/\d+)?$")


def _attach_negatives(argv: list[str]) -> list[str]:
    """Rewrite `--lambda -1/2` as `--lambda=-1/2`; argparse reads `-1/2` as an option."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and "=" not in tok and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv: list[str] | None = None) -> tuple[int, str]:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    a = parser.parse_args(_attach_negatives(argv))
    try:
        result, violations = COMMANDS[a.command](a)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"projcoh: error: {exc}\n")
        return 1, ""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": a.command,
        "conventions": CONVENTIONS,
        "result": result,
        "violations": violations,
    }
    return (2 if violations else 0), render(doc, a.format)


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
