"""Command-line surface: tables, estimates, decisions, campaigns, oracles.

Subcommands::

    fdlat table     --id t51 [--format text|csv|json]
    fdlat estimate  --fn flat --r 3 --n 300 [...]
    fdlat gmin      --r 3 --k 30000
    fdlat verify    --campaign separation [--jobs 4] [...]
    fdlat oracle    --check lemma --r 4 [...]

All value-bearing output goes to stdout (text tables, CSV, or JSON
lines); progress and timing go to stderr, so stdout is byte-identical
across reruns and worker counts.  Exit status: 0 success, 1 verification
violation, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

from . import campaigns as campaigns_mod
from . import minsearch, oracle
from .bigcomb import ConstraintViolation, FactorialTable, factorial_list
from .estimates import (
    G3_CERTIFIED_MAX,
    f_lower_full,
    f_lower_general,
    f_lower_max,
    EstimateParams,
    flat_lower,
    g2,
    g3_doublestar,
    g3_star,
    g_upper,
)
from .gmin import corollary_upper, default_pair, gmin_power

__all__ = [
    "ScientificString",
    "format_scientific",
    "format_ratio",
    "parse_natural",
    "TableSpec",
    "TABLES",
    "table_rows",
    "emit_table",
    "gmin_query",
    "main",
]

FACT_CACHE_ENV = "FDLAT_FACT_CACHE"
FACT_CACHE_FILENAME = "factorials.bin"


# --- exact scientific display ---------------------------------------------------


@dataclass(frozen=True)
class ScientificString:
    """A correctly rounded base-10 scientific representation.

    ``mantissa`` carries a fixed number of significant digits with a
    decimal point after the first, e.g. mantissa "1.489176541614",
    exponent 1798.  Rounding is half away from zero on exact integer
    arithmetic, so the displayed digits are always the true rounded
    digits, never float artifacts.
    """

    mantissa: str
    exponent: int

    def __str__(self) -> str:
        return f"{self.mantissa}e{self.exponent}"

    @property
    def sig(self) -> int:
        return len(self.mantissa.replace(".", ""))

    @classmethod
    def parse(cls, s: str) -> "ScientificString":
        mant, exp = s.split("e")
        return cls(mantissa=mant, exponent=int(exp))

    def plain(self) -> str:
        """Positional rendering when the exponent is small, e.g. 1.003367003."""
        digits = self.mantissa.replace(".", "")
        e = self.exponent
        if 0 <= e < len(digits):
            whole = digits[: e + 1]
            frac = digits[e + 1 :]
            return whole + ("." + frac if frac else "")
        if -4 < e < 0:
            return "0." + "0" * (-e - 1) + digits
        return str(self)

    def bounds(self) -> tuple[int, int]:
        """Integer bounds [lo, hi] within one unit in the last digit."""
        digits = int(self.mantissa.replace(".", ""))
        scale = self.exponent - (self.sig - 1)
        if scale >= 0:
            return (digits - 1) * 10**scale, (digits + 1) * 10**scale
        q = 10**-scale
        return (digits - 1) // q, (digits + 1) // q + 1


def format_ratio(num: int, den: int, sig: int) -> ScientificString:
    """num/den rounded half away from zero to `sig` significant digits."""
    if num < 0 or den <= 0:
        raise ConstraintViolation("format_ratio needs num >= 0, den > 0")
    if sig < 1:
        raise ConstraintViolation(f"need sig >= 1, got {sig}")
    if num == 0:
        return ScientificString(mantissa="0", exponent=0)
    # exponent e with 10^e <= num/den < 10^(e+1)
    e = len(str(num)) - len(str(den))
    if num * 10 ** max(0, -e) < den * 10 ** max(0, e):
        e -= 1
    # mantissa digits of num/den * 10^(sig-1-e), rounded half away
    shift = sig - 1 - e
    scaled = num * 10 ** max(0, shift), den * 10 ** max(0, -shift)
    q, rem = divmod(scaled[0], scaled[1])
    if 2 * rem >= scaled[1]:
        q += 1
    if q == 10**sig:  # rounding carried into a new digit
        q //= 10
        e += 1
    digits = str(q)
    mantissa = digits[0] if sig == 1 else f"{digits[0]}.{digits[1:]}"
    return ScientificString(mantissa=mantissa, exponent=e)


def format_scientific(x: int, sig: int) -> ScientificString:
    """Exact decimal rounding of a nonnegative integer."""
    return format_ratio(x, 1, sig)


def parse_natural(s: str) -> int:
    """Parse an exact nonnegative integer, plain or in e-notation.

    Accepted forms: "30000", "1e88", "1.489e1798" (the mantissa digits
    shifted by the exponent must land on an integer), with optional "_"
    group separators.
    """
    text = s.strip().lower().replace("_", "")
    if "e" in text:
        mant, _, exp_part = text.partition("e")
        exponent = int(exp_part)
    else:
        mant, exponent = text, 0
    if "." in mant:
        whole, _, frac = mant.partition(".")
        digits = whole + frac
        exponent -= len(frac)
    else:
        digits = mant
    if not digits.isdigit():
        raise ConstraintViolation(f"not a nonnegative integer: {s!r}")
    value = int(digits)
    if exponent < 0:
        q, rem = divmod(value, 10**-exponent)
        if rem:
            raise ConstraintViolation(f"{s!r} is not an exact integer")
        return q
    return value * 10**exponent


# --- tables ---------------------------------------------------------------------


@dataclass(frozen=True)
class TableSpec:
    table_id: str
    r: int
    n_lo: int
    n_hi: int
    columns: tuple[str, ...]  # canonical column names, in order
    sci_digits: int | None = None  # None: exact integer cells
    ratio_digits: int | None = None


TABLES = {
    "t51": TableSpec("t51", 3, 3, 20, ("flat", "g_doublestar", "g_upper")),
    "t52": TableSpec("t52", 4, 4, 21, ("flat", "g_upper")),
    "t53": TableSpec("t53", 5, 5, 22, ("flat", "g_upper")),
    "t54": TableSpec("t54", 3, 298, 300, ("flat", "g_doublestar"), sci_digits=7, ratio_digits=10),
    "t55": TableSpec("t55", 20, 5999, 6000, ("flat", "g_upper"), sci_digits=13),
}

_COLUMN_FNS = {
    "flat": lambda r, n: flat_lower(r, n),
    "g_star": lambda r, n: g3_star(n),
    "g_doublestar": lambda r, n: g3_doublestar(n),
    "g_upper": lambda r, n: g_upper(r, n),
}


def table_rows(spec: TableSpec) -> list[dict]:
    """Row dicts for one table id; exact ints plus any display columns."""
    rows = []
    for n in range(spec.n_lo, spec.n_hi + 1):
        row: dict = {"n": n}
        for col in spec.columns:
            row[col] = _COLUMN_FNS[col](spec.r, n)
        if spec.ratio_digits is not None:
            num_col, den_col = spec.columns[1], spec.columns[0]
            row["ratio"] = str(
                format_ratio(row[num_col], row[den_col], spec.ratio_digits)
            )
        if spec.sci_digits is not None:
            for col in spec.columns:
                row[f"{col}_sci"] = str(format_scientific(row[col], spec.sci_digits))
        rows.append(row)
    return rows


def _table_headers(spec: TableSpec) -> list[str]:
    headers = ["n", *spec.columns]
    if spec.ratio_digits is not None:
        headers.append("ratio")
    if spec.sci_digits is not None:
        headers.extend(f"{col}_sci" for col in spec.columns)
    return headers


def emit_table(spec: TableSpec, fmt: str = "text", out=None) -> None:
    """Render one table to `out` (stdout by default) as text, csv, or json."""
    out = out or sys.stdout
    rows = table_rows(spec)
    headers = _table_headers(spec)
    if fmt == "json":
        for row in rows:
            rec = {"table": spec.table_id, "r": spec.r}
            for h in headers:
                value = row[h]
                # exact big integers travel as strings in JSON
                if isinstance(value, int) and h != "n" and spec.sci_digits is not None:
                    value = str(value)
                rec[h] = value
            out.write(json.dumps(rec) + "\n")
        return
    if fmt == "csv":
        out.write(",".join(headers) + "\n")
        for row in rows:
            out.write(",".join(str(row[h]) for h in headers) + "\n")
        return
    if fmt == "text":
        cells = [[str(row[h]) for h in headers] for row in rows]
        widths = [
            max(len(headers[i]), max((len(line[i]) for line in cells), default=0))
            for i in range(len(headers))
        ]
        out.write(f"table {spec.table_id} (r={spec.r})\n")
        out.write("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip() + "\n")
        for line in cells:
            out.write("  ".join(c.rjust(w) for c, w in zip(line, widths)).rstrip() + "\n")
        return
    raise ConstraintViolation(f"unknown table format {fmt!r}")


# --- decisions --------------------------------------------------------------------


def gmin_query(r: int, k_text: str) -> dict:
    """Decide the minimum generating size for the k-th power; JSON-ready record."""
    k = parse_natural(k_text)
    result = gmin_power(r, k, default_pair(r))
    return {
        "check": "gmin",
        "r": r,
        "k": str(k),
        "outcome": result.outcome_dict(),
        "witnesses": [str(w) for w in result.witnesses],
    }


# --- factorial cache --------------------------------------------------------------


def _cache_path() -> str | None:
    directory = os.environ.get(FACT_CACHE_ENV)
    if not directory:
        return None
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, FACT_CACHE_FILENAME)


def _load_fact_cache() -> int:
    path = _cache_path()
    if not path or not os.path.exists(path):
        return 0
    try:
        table = FactorialTable.load(path)
    except ValueError as exc:
        print(f"fdlat: ignoring bad factorial cache: {exc}", file=sys.stderr)
        return 0
    table.adopt()
    return table.n_max


def _save_fact_cache(loaded_n_max: int) -> None:
    path = _cache_path()
    if not path:
        return
    current = len(factorial_list(0)) - 1
    if current > loaded_n_max:
        FactorialTable.build(current).save(path)


# --- argument parsing ---------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdlat",
        description=(
            "Exact lower/upper estimates for pairwise-unrelated copies of "
            "full segment posets in subset lattices, and accuracy-1/2 "
            "decisions for minimum generating sizes of direct powers of "
            "free distributive lattices."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_table = sub.add_parser("table", help="reproduce a computational table")
    p_table.add_argument("--id", required=True, choices=sorted(TABLES))
    p_table.add_argument("--format", default="text", choices=("text", "csv", "json"))

    p_est = sub.add_parser("estimate", help="evaluate one estimate function")
    p_est.add_argument(
        "--fn",
        default="flat",
        choices=("flat", "full", "general", "max", "g", "g2", "g3-star", "g3-doublestar"),
    )
    p_est.add_argument("--r", type=int)
    p_est.add_argument("--n", type=int, required=True)
    p_est.add_argument("--p", type=int, default=0)
    p_est.add_argument("--a", type=int, default=None)
    p_est.add_argument("--b", type=int, default=None)
    p_est.add_argument("--sig", type=int, default=13, help="digits for the sci rendering")
    p_est.add_argument(
        "--extend-beyond-300",
        action="store_true",
        help=f"allow g3-star past n={G3_CERTIFIED_MAX} by rerunning the minimum search",
    )

    p_gmin = sub.add_parser("gmin", help="decide Gmin of the k-th direct power")
    p_gmin.add_argument("--r", type=int, required=True)
    p_gmin.add_argument(
        "--k",
        required=True,
        help='exact integer; e-notation allowed, e.g. "1.489e1798" = 1489*10^1795',
    )
    p_gmin.add_argument(
        "--upper-bound-any",
        action="store_true",
        help="also print the n that generates the k-th power of EVERY "
        "r-generated distributive lattice",
    )

    p_verify = sub.add_parser("verify", help="run a verification campaign")
    p_verify.add_argument("--campaign", required=True, choices=sorted(campaigns_mod.CAMPAIGNS))
    p_verify.add_argument("--r-min", type=int, default=None)
    p_verify.add_argument("--r-max", type=int, default=None)
    p_verify.add_argument("--n-max", type=int, default=None)
    p_verify.add_argument("--jobs", type=int, default=1)
    p_verify.add_argument(
        "--extend-beyond-300",
        action="store_true",
        help="let min_location run past n=300 (reported, not certified)",
    )

    p_oracle = sub.add_parser("oracle", help="run one desk-scale oracle check")
    p_oracle.add_argument(
        "--check",
        required=True,
        choices=("lemma", "fd-size", "sp", "family", "gset", "min-generating"),
    )
    p_oracle.add_argument("--r", type=int, default=3)
    p_oracle.add_argument("--n", type=int, default=None)
    p_oracle.add_argument("--a", type=int, default=0)
    p_oracle.add_argument("--b", type=int, default=None)
    p_oracle.add_argument("--p", type=int, default=0)
    p_oracle.add_argument("--poset", default="crown", choices=("crown", "singleton"))
    p_oracle.add_argument("--power", type=int, default=1)
    p_oracle.add_argument("--closure-budget", type=int, default=10**8)
    p_oracle.add_argument(
        "--subsets-cap",
        type=int,
        default=5 * 10**6,
        help="raise to opt in to heavy searches such as the 324-element square",
    )
    return parser


def _cmd_table(args) -> int:
    emit_table(TABLES[args.id], args.format)
    return 0


def _cmd_estimate(args) -> int:
    fn = args.fn
    n = args.n
    if fn == "g2":
        value = g2(n)
        label = {"fn": fn, "n": n}
    elif fn == "g3-star":
        value = g3_star(n, extend=args.extend_beyond_300)
        label = {"fn": fn, "n": n}
    elif fn == "g3-doublestar":
        value = g3_doublestar(n)
        label = {"fn": fn, "n": n}
    else:
        if args.r is None:
            print("fdlat: --r is required for this function", file=sys.stderr)
            return 2
        r = args.r
        if fn == "flat":
            value = flat_lower(r, n)
            label = {"fn": fn, "r": r, "n": n}
        elif fn == "full":
            value = f_lower_full(args.p, r, n)
            label = {"fn": fn, "p": args.p, "r": r, "n": n}
        elif fn == "general":
            a = 0 if args.a is None else args.a
            b = r if args.b is None else args.b
            value = f_lower_general(EstimateParams(r=r, a=a, b=b, p=args.p, n=n))
            label = {"fn": fn, "r": r, "a": a, "b": b, "p": args.p, "n": n}
        elif fn == "max":
            a = 0 if args.a is None else args.a
            b = r if args.b is None else args.b
            value = f_lower_max(r, a, b, n)
            label = {"fn": fn, "r": r, "a": a, "b": b, "n": n}
        else:  # "g"
            value = g_upper(r, n)
            label = {"fn": fn, "r": r, "n": n}
    label["value"] = str(value)
    if value > 0:
        label["sci"] = str(format_scientific(value, args.sig))
    print(json.dumps(label))
    return 0


def _cmd_gmin(args) -> int:
    record = gmin_query(args.r, args.k)
    print(json.dumps(record))
    if args.upper_bound_any:
        bound = corollary_upper(args.r, parse_natural(args.k))
        print(
            json.dumps(
                {"check": "corollary_upper", "r": args.r, "k": record["k"], "n": bound}
            )
        )
    outcome = record["outcome"]
    if "exact" in outcome:
        print(f"Gmin = {outcome['exact']}", file=sys.stderr)
    else:
        lo, hi = outcome["ambiguous"]
        print(f"Gmin is {lo} or {hi} (undecided by the estimate pair)", file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    config: dict = {"jobs": args.jobs}
    name = args.campaign
    if name in ("separation", "best_p", "flat_vs_max"):
        if args.r_min is not None:
            config["r_min"] = args.r_min
        if args.r_max is not None:
            config["r_max"] = args.r_max
        if args.n_max is not None:
            config[{"separation": "n_hi"}.get(name, "n_max")] = args.n_max
    elif name == "min_location":
        if args.n_max is not None:
            if args.n_max > 300 and not args.extend_beyond_300:
                print(
                    "fdlat: n beyond 300 is not certified; pass --extend-beyond-300",
                    file=sys.stderr,
                )
                return 2
            config["n_hi"] = args.n_max
    result = campaigns_mod.run_campaign(name, **config)
    for line in result.telemetry:
        print(line, file=sys.stderr)
    for rec in result.records:
        print(json.dumps(rec))
    budget = campaigns_mod.CAMPAIGN_BUDGETS_S.get(name)
    note = ""
    if budget is not None and result.elapsed_s > budget:
        note = f" (over the {budget}s budget; informational only)"
    print(
        f"campaign={name} violations={result.violations} "
        f"elapsed_s={result.elapsed_s:.1f}{note}",
        file=sys.stderr,
    )
    return 0 if result.ok else 1


def _cmd_oracle(args) -> int:
    check = args.check
    if check == "lemma":
        rec = {"check": "lemma", "r": args.r, "pass": oracle.check_lemma(args.r)}
    elif check == "fd-size":
        lat, _ = oracle.build_fd(args.r)
        rec = {"check": "fd_size", "r": args.r, "size": lat.size, "pass": True}
    elif check == "sp":
        n = args.n if args.n is not None else 5
        poset = oracle.crown_poset() if args.poset == "crown" else oracle.singleton_poset()
        rec = {
            "check": "sp_exact",
            "poset": args.poset,
            "n": n,
            "value": oracle.sp_exact(poset, n),
        }
    elif check == "family":
        n = args.n if args.n is not None else args.r
        b = args.b if args.b is not None else args.r
        fam = oracle.build_unrelated_family(args.p, args.r, args.a, b, n)
        expected = f_lower_general(
            EstimateParams(r=args.r, a=args.a, b=b, p=args.p, n=n)
        )
        unrelated = all(
            oracle.copies_unrelated(fam[i], fam[j])
            for i in range(len(fam))
            for j in range(i + 1, len(fam))
        )
        rec = {
            "check": "family",
            "r": args.r,
            "a": args.a,
            "b": b,
            "p": args.p,
            "n": n,
            "count": len(fam),
            "expected": expected,
            "unrelated": unrelated,
            "pass": len(fam) == expected and unrelated,
        }
    elif check == "gset":
        n = args.n if args.n is not None else 6
        cc = oracle.CrownCopy(0, 1, 2, 4)
        got = oracle.gset_size_bruteforce(n, cc)
        expected = minsearch.fha_eval(n, minsearch.SimplexPoint4(0, 1, 1, 1))
        rec = {
            "check": "gset",
            "n": n,
            "shape": [0, 1, 1, 1],
            "count": got,
            "expected": expected,
            "pass": got == expected,
        }
    else:  # min-generating
        lat, _ = oracle.build_fd(args.r)
        power = oracle.direct_power(lat, args.power) if args.power > 1 else lat
        res = oracle.min_generating_size(
            power, closure_budget=args.closure_budget, subsets_cap=args.subsets_cap
        )
        rec = {
            "check": "min_generating",
            "lattice": f"FD({args.r})^{args.power}",
            "size": power.size,
            "value": res.value,
            "lower_bound": res.lower_bound,
            "lower_bound_only": res.lower_bound_only,
            "witness": list(res.witness) if res.witness else None,
            "pass": res.value is not None,
        }
    print(json.dumps(rec))
    return 0 if rec.get("pass", True) else 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    loaded = _load_fact_cache()
    t0 = time.monotonic()
    try:
        handler = {
            "table": _cmd_table,
            "estimate": _cmd_estimate,
            "gmin": _cmd_gmin,
            "verify": _cmd_verify,
            "oracle": _cmd_oracle,
        }[args.command]
        status = handler(args)
    except ConstraintViolation as exc:
        print(f"fdlat: {exc}", file=sys.stderr)
        return 2
    finally:
        _save_fact_cache(loaded)
        print(f"total elapsed_s={time.monotonic() - t0:.1f}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
