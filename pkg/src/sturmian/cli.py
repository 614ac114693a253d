"""Command-line front door.

Commands: word | ostrowski-int | ostrowski-real | cf | convergents |
exponent | verify | boehmer.  A JSON config file supplies the slope and
intercept; flags override.  Data goes to stdout, diagnostics to stderr;
all numeric payloads are decimal strings.  Exit codes: 0 success,
2 invalid config/digits, 3 horizon or precision exhaustion, 4 internal
invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import cfrac, exponent, oracle, ostrowski, slope, words
from .errors import ConfigError, SturmianError

# payloads are decimal strings of numbers at the scale b**q_k; lift the
# interpreter's int-to-str conversion cap accordingly
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(5_000_000)


def _fr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_fraction(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational {text!r}: {exc}") from exc


def _load_config(args) -> dict:
    cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    if args.slope:
        cfg["slope"] = json.loads(args.slope)
    if args.intercept:
        try:
            cfg["intercept"] = json.loads(args.intercept)
        except json.JSONDecodeError:
            cfg["intercept"] = args.intercept  # bare "characteristic"
    if args.base is not None:
        cfg["base"] = args.base
    if args.horizon is not None:
        cfg.setdefault("slope", {})["horizon"] = args.horizon
    if args.upper:
        cfg["upper"] = True
    return cfg


def _build_system(cfg) -> tuple[slope.ConvergentTable, words.WordSystem]:
    if "slope" not in cfg:
        raise ConfigError("config needs a 'slope' object")
    sl = cfg["slope"]
    spec = slope.SlopeSpec(
        tuple(int(a) for a in sl.get("preperiod", [])),
        tuple(int(a) for a in sl.get("period", [])),
        int(sl.get("horizon", 0)),
    )
    if spec.horizon < 4:
        raise ConfigError("horizon must be at least 4")
    table = slope.build_table(spec)
    intercept = cfg.get("intercept", "characteristic")
    upper = bool(cfg.get("upper", False))
    if intercept == "characteristic":
        return table, words.WordSystem.characteristic(table, upper=upper)
    if not isinstance(intercept, dict):
        raise ConfigError(f"bad intercept spec {intercept!r}")
    forms = [key for key in ("digits", "m", "sigma", "sigma_pair") if key in intercept]
    if len(forms) != 1:
        raise ConfigError("intercept must carry exactly one of digits/m,p/sigma/sigma_pair")
    if "digits" in intercept:
        digs = tuple(int(d) for d in intercept["digits"])
        terminating = bool(intercept.get("terminating", True))
        return table, words.WordSystem.from_digits(
            table, digs, terminating=terminating, upper=upper
        )
    if "m" in intercept:
        deg = ostrowski.degenerate_expansions(
            int(intercept["m"]), int(intercept.get("p", 0)), table
        )
        return table, words.WordSystem.from_degenerate(table, deg, upper=upper)
    if "sigma" in intercept:
        sigma = _parse_fraction(str(intercept["sigma"]))
        digs = ostrowski.encode_real(sigma, table)
    else:
        u, v = intercept["sigma_pair"]
        digs = ostrowski.encode_real((int(u), _parse_fraction(str(v))), table)
    return table, words.WordSystem.from_digits(table, digs, upper=upper)


def _emit(payload: dict, fmt: str, text_value: str | None = None):
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stdout.write((text_value if text_value is not None else str(payload)) + "\n")


def cmd_word(args):
    cfg = _load_config(args)
    _, system = _build_system(cfg)
    length = args.length if args.length is not None else int(cfg.get("length", 0))
    if length < 1:
        raise ConfigError("word command needs --length >= 1")
    word = system.prefix(length)
    if args.binary:
        # length-prefixed packed bits: 8-byte big-endian letter count,
        # then the letters packed MSB-first
        nbytes = (length + 7) // 8
        padded = word.ljust(nbytes * 8, "0")
        out = sys.stdout.buffer
        out.write(length.to_bytes(8, "big"))
        out.write(int(padded, 2).to_bytes(nbytes, "big"))
        out.flush()
        return
    payload = {"length": str(length), "word": word, "rle": words.run_length(word)}
    if args.format == "rle":
        _emit(payload, "text", payload["rle"])
    else:
        _emit(payload, args.format, word)


def cmd_ostrowski_int(args):
    cfg = _load_config(args)
    table, _ = _build_system(cfg)
    if args.encode is not None:
        digits = ostrowski.encode_integer(int(args.encode), table)
        payload = {"n": str(args.encode), "digits": [str(d) for d in digits.digits]}
        _emit(payload, args.format, ",".join(payload["digits"]))
    elif args.digits:
        seq = tuple(int(d) for d in args.digits.split(","))
        n = ostrowski.decode_integer(seq, table)
        payload = {"digits": [str(d) for d in seq], "n": str(n)}
        _emit(payload, args.format, str(n))
    else:
        raise ConfigError("ostrowski-int needs --encode N or --digits d1,d2,...")


def cmd_ostrowski_real(args):
    cfg = _load_config(args)
    table, _ = _build_system(cfg)
    if args.sigma is not None:
        digits = ostrowski.encode_real(_parse_fraction(args.sigma), table)
    elif args.sigma_pair is not None:
        u, v = args.sigma_pair.split(",")
        digits = ostrowski.encode_real((int(u), _parse_fraction(v)), table)
    elif args.digits:
        seq = tuple(int(d) for d in args.digits.split(","))
        lo, hi = ostrowski.decode_real(seq, table)
        payload = {"digits": [str(d) for d in seq], "lower": _fr(lo), "upper": _fr(hi)}
        _emit(payload, args.format, f"[{_fr(lo)}, {_fr(hi)}]")
        return
    else:
        raise ConfigError("ostrowski-real needs --sigma, --sigma-pair or --digits")
    lo, hi = ostrowski.decode_real(digits, table)
    payload = {
        "digits": [str(d) for d in digits.digits],
        "terminating": digits.terminating,
        "lower": _fr(lo),
        "upper": _fr(hi),
    }
    _emit(payload, args.format, ",".join(payload["digits"]))


def _number_spec(cfg, args) -> cfrac.NumberSpec:
    _, system = _build_system(cfg)
    base = int(cfg.get("base", 2))
    return cfrac.NumberSpec(base, system)


def cmd_cf(args):
    cfg = _load_config(args)
    spec = _number_spec(cfg, args)
    stream = cfrac.continued_fraction(spec)
    terms = stream.terms[: args.terms] if args.terms else stream.terms
    payload = {
        "base": str(spec.base),
        "terms": [
            {"term": str(t.value), "family": f"({t.family[0]})_{t.family[1]}",
             "k": str(t.family[1])}
            for t in terms
        ],
    }
    _emit(payload, args.format, " ".join(str(t.value) for t in terms))


def cmd_convergents(args):
    cfg = _load_config(args)
    spec = _number_spec(cfg, args)
    stream = cfrac.continued_fraction(spec)
    pairs = cfrac.convergents(stream, spec.base)
    if args.terms:
        pairs = pairs[: args.terms]
    payload = {
        "base": str(spec.base),
        "convergents": [
            {"P": str(c.p), "Q": str(c.q), "j": str(c.index),
             "family": f"({c.family[0]})_{c.family[1]}"}
            for c in pairs
        ],
    }
    _emit(payload, args.format,
          " ".join(f"{c.p}/{c.q}" for c in pairs))


def cmd_exponent(args):
    cfg = _load_config(args)
    spec = _number_spec(cfg, args)
    system = spec.system
    upto = system.levels - 2
    rows = exponent.nu_table(system, upto)
    est = exponent.irrationality_estimate(system, upto)
    strong = []
    for k in range(2, upto + 1):
        try:
            records = exponent.classify_families(spec, k)
        except (ConfigError, SturmianError):
            continue
        for r in records:
            strong.append({
                "family": f"({r.family})_{r.k}", "k": str(r.k),
                "accepted": r.accepted, "rule": r.rule,
                "mu": _fr(r.mu) if r.mu is not None else None,
                "height": str(r.height),
                "errorExponent": _fr(r.error_exponent)
                if r.error_exponent is not None else None,
            })
    payload = {
        "nu": [
            {"k": str(r.k), "nu1": _fr(r.nu1), "nu2": _fr(r.nu2),
             "nu3": _fr(r.nu3), "nu4": _fr(r.nu4)}
            for r in rows
        ],
        "strong": strong,
        "estimate": {
            **{f"nu{j}": (_fr(est.tail_max[j]) if est.tail_max[j] is not None else None)
               for j in range(1, 5)},
            "mu": _fr(est.mu_estimate),
            "muFloat": float(est.mu_estimate),
        },
        "window": {"full": list(est.window_full), "tail": list(est.window_tail)},
    }
    _emit(payload, args.format, f"mu ~= {float(est.mu_estimate):.6f}")


def cmd_verify(args):
    cfg = _load_config(args)
    spec = _number_spec(cfg, args)
    rep = oracle.verify_agreement(spec, min_terms=args.terms or 10)
    payload = {
        "N": str(rep.digits_used),
        "certifiedPrefix": [str(t) for t in rep.certified_prefix],
        "pipeline": [str(t) for t in rep.pipeline_terms],
        "overlap": rep.overlap,
        "matches": rep.matches,
        "firstMismatchIndex": rep.first_mismatch,
    }
    _emit(payload, args.format, "match" if rep.matches else "MISMATCH")
    if not rep.matches:
        sys.exit(4)


def cmd_boehmer(args):
    cfg = _load_config(args)
    spec = _number_spec(cfg, args)
    system = spec.system
    if any(system.digit(k) != 0 for k in range(1, system.levels + 1)):
        raise ConfigError("closed-form terms need the characteristic intercept")
    upto = args.terms or (system.table.horizon - 4)
    closed = [cfrac.boehmer_term(system.table, spec.base, k) for k in range(1, upto + 1)]
    if args.check:
        stream = cfrac.continued_fraction(spec).values()
        overlap = min(len(stream), len(closed))
        if list(closed[:overlap]) != list(stream[:overlap]):
            raise SturmianError("closed form disagrees with the pipeline")
    payload = {"terms": [str(a) for a in closed]}
    _emit(payload, args.format, " ".join(str(a) for a in closed))


_COMMON_DEFAULTS = {
    "config": None, "format": "json", "slope": None, "intercept": None,
    "base": None, "horizon": None, "upper": False,
}


def _common_flags() -> argparse.ArgumentParser:
    # defaults are SUPPRESS so a subcommand-position flag never clobbers
    # one given before the subcommand; real defaults are filled in main()
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--format", choices=["json", "text", "rle"])
    p.add_argument("--slope", help="inline slope JSON (overrides config)")
    p.add_argument("--intercept", help="inline intercept JSON or 'characteristic'")
    p.add_argument("--base", type=int, help="number base b >= 2")
    p.add_argument("--horizon", type=int, help="slope horizon K")
    p.add_argument("--upper", action="store_true",
                   help="use the upper (ceiling) word")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="sturmian",
        description="Sturmian words, their continued fractions, and "
                    "irrationality exponents, in exact arithmetic.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=lambda **kw: argparse.ArgumentParser(
                                    parents=[common], **kw))

    p = sub.add_parser("word", help="emit a word prefix")
    p.add_argument("--length", type=int)
    p.add_argument("--binary", action="store_true",
                   help="length-prefixed packed bits on stdout")
    p.set_defaults(func=cmd_word)

    p = sub.add_parser("ostrowski-int", help="encode/decode integers")
    p.add_argument("--encode", type=int)
    p.add_argument("--digits", help="comma-separated digits to decode")
    p.set_defaults(func=cmd_ostrowski_int)

    p = sub.add_parser("ostrowski-real", help="encode/decode intercept digits")
    p.add_argument("--sigma", help="exact rational like 1/2")
    p.add_argument("--sigma-pair", help="u,v meaning u*theta + v")
    p.add_argument("--digits", help="comma-separated digits to decode")
    p.set_defaults(func=cmd_ostrowski_real)

    p = sub.add_parser("cf", help="continued fraction terms with provenance")
    p.add_argument("--terms", type=int)
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("convergents", help="convergent pairs P_j/Q_j")
    p.add_argument("--terms", type=int)
    p.set_defaults(func=cmd_convergents)

    p = sub.add_parser("exponent", help="irrationality exponent report")
    p.set_defaults(func=cmd_exponent)

    p = sub.add_parser("verify", help="pipeline vs oracle agreement")
    p.add_argument("--terms", type=int, help="minimum certified terms")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("boehmer", help="closed-form characteristic terms")
    p.add_argument("--terms", type=int)
    p.add_argument("--check", action="store_true",
                   help="assert agreement with the pipeline")
    p.set_defaults(func=cmd_boehmer)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in _COMMON_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        args.func(args)
    except SturmianError as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return exc.exit_code
    except BrokenPipeError:
        return 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
