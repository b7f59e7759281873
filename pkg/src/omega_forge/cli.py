"""Command-line front end.

    omega-forge omega --n 2 --apply "x11*x22 - x12*x21"
    omega-forge omega --n 2 --constants 3
    omega-forge invariants --form-degree 4 --bound 3
    omega-forge weights --n 2 --box 3 --family det
    omega-forge verify --n 2 --seed 7

Exit status: 0 success, 1 usage error or refusal, 2 identity/oracle failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import invariantize as inv
from . import reps
from . import suite
from . import weightlattice as wl
from .omega import IdentityFailure, OmegaOperator, cayley_constants, omega_power
from .polycore import ParseError, matrix_variables, parse, to_text

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for identity failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    n: int = 2
    apply: str | None = None
    power: int = 1
    constants: int | None = None
    form_degree: int | None = None
    bound: int | None = None
    box: int | None = None
    family: str | None = None
    seed: int = 7
    max_degree: int | None = None
    inject_fault: str | None = None
    format: str | None = None
    output: str | None = None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="omega-forge", description="Exact Cayley Omega-process toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("json", "text"), default=None)
        sp.add_argument("--output", help="write to this file instead of stdout")

    sp = sub.add_parser("omega", help="apply Omega^r, or tabulate Cayley constants")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--apply", metavar="POLY")
    sp.add_argument("--power", type=int, default=1)
    sp.add_argument("--constants", type=int, metavar="S_MAX")
    common(sp)

    sp = sub.add_parser("invariants", help="degree-bounded generators for binary forms")
    sp.add_argument("--form-degree", type=int, required=True)
    sp.add_argument("--bound", type=int, required=True)
    common(sp)

    sp = sub.add_parser("weights", help="polynomial dominant weights and the a_mu family")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--box", type=int, required=True)
    sp.add_argument("--family", choices=("det",))
    common(sp)

    sp = sub.add_parser("verify", help="seeded property suite")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--max-degree", type=int)
    sp.add_argument("--inject-fault", choices=suite.FAULTS)
    common(sp)
    return p


# ---------------------------------------------------------------------------
# commands return (payload, text, exit status)


def _frac(x: Fraction) -> str:
    return str(x)


def cmd_omega(cfg: RunConfig):
    if cfg.apply is None and cfg.constants is None:
        raise UsageError("omega needs --apply and/or --constants")
    if cfg.n < 2:
        raise UsageError("--n must be at least 2")
    if cfg.power < 0:
        raise UsageError("--power must be nonnegative")
    op = OmegaOperator(cfg.n)
    payload: dict = {"n": cfg.n}
    lines = []
    if cfg.apply is not None:
        f = parse(cfg.apply, matrix_variables(cfg.n).names)
        g = omega_power(op, f, cfg.power)
        payload.update({"input": to_text(f), "power": cfg.power, "result": to_text(g)})
        lines.append(to_text(g))
    if cfg.constants is not None:
        if cfg.constants < 1:
            raise UsageError("--constants must be at least 1")
        cc = cayley_constants(op, cfg.constants)
        payload.update({k: v for k, v in cc.to_json().items() if k != "n"})
        lines.append(f"n = {cfg.n}")
        lines += [f"alpha_{s} = {_frac(a)}   c_{s} = {_frac(cc.cs[s])}" for s, a in sorted(cc.alphas.items())]
    # a bare --apply prints the polynomial; anything with constants defaults to JSON
    natural = "text" if cfg.constants is None else "json"
    return payload, "\n".join(lines), EXIT_OK, natural


def cmd_invariants(cfg: RunConfig):
    if cfg.form_degree < 1 or cfg.bound < 1:
        raise UsageError("--form-degree and --bound must be positive")
    V = reps.dual_action_module(reps.binary_forms_module(cfg.form_degree))
    report = inv.hilbert_generators(V, inv.binary_form_weight(cfg.form_degree), cfg.bound)
    payload = report.to_json()
    payload["form_degree"] = cfg.form_degree
    lines = [f"binary forms of degree {cfg.form_degree}, degrees 1..{cfg.bound}"]
    for rec in report.records:
        status = "ok" if rec.agreement else "DISAGREE"
        line = f"degree {rec.degree}: weight {rec.weight}, oracle dim {rec.oracle_dim}, sweep dim {rec.sweep_dim}, {status}"
        lines.append(line)
        lines += [f"  new generator: {to_text(g)}" for g in rec.new_generators]
    lines.append(f"agreement: {report.agreement}")
    return payload, "\n".join(lines), EXIT_OK if report.agreement else EXIT_FAILURE, "json"


def cmd_weights(cfg: RunConfig):
    if cfg.box < 0:
        raise UsageError("--box must be nonnegative")
    n = cfg.n
    cone = wl.matrix_monoid_cone(n)
    S = wl.polynomial_dominant_weights(cone, n, cfg.box)
    sat, ideal = wl.saturation_check(S, cfg.box), wl.ideal_check(S, cfg.box)
    payload: dict = {
        "n": n,
        "box": cfg.box,
        "polynomial_dominant_weights": [list(w) for w in S],
        "checks": [sat.to_json(), ideal.to_json()],
    }
    lines = [f"polynomial dominant weights (n = {n}, box {cfg.box}):"]
    lines += ["  " + " ".join(str(x) for x in w) for w in S]
    lines += [f"{r.name}: {'pass' if r.passed else 'violations ' + str(r.violations)}" for r in (sat, ideal)]
    status = EXIT_OK if sat.passed and ideal.passed else EXIT_FAILURE
    if cfg.family == "det":
        lam = wl.determinant_weight(n)
        if lam not in S:
            raise UsageError("the box must contain the determinant weight to build the det family")
        fam = wl.omega_coefficient_family(lam, S, cone)
        cert = wl.monoid_cone_from_character(n, lam)
        payload["family"] = fam.to_json()
        payload["family"]["proper"] = fam.is_proper()
        payload["monoid_cone"] = {
            "generators": [[str(x) for x in g] for g in cert.cone.generators],
            "strictly_convex": cert.strictly_convex,
            "identity_holds": cert.identity_holds,
        }
        lines.append(f"a_mu family for lambda = {list(lam)}:")
        lines += [f"  {list(mu)}: {s}" for mu, s in sorted(fam.entries.items())]
    return payload, "\n".join(lines), status, "json"


def cmd_verify(cfg: RunConfig):
    if cfg.n < 2:
        raise UsageError("--n must be at least 2")
    report = suite.run_verify(cfg.n, cfg.seed, cfg.max_degree, cfg.inject_fault)
    lines = [f"verify n={report.n} seed={report.seed} max_degree={report.max_degree}"]
    for r in report.results:
        line = f"{r.name}: {'pass' if r.passed else 'FAIL'} ({r.checked} checks)"
        if not r.passed:
            line += f"\n  {r.detail}"
        lines.append(line)
    return report.to_json(), "\n".join(lines), EXIT_OK if report.passed else EXIT_FAILURE, "text"


COMMANDS = {"omega": cmd_omega, "invariants": cmd_invariants, "weights": cmd_weights, "verify": cmd_verify}


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    try:
        payload, text, status, natural = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"omega-forge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"omega-forge: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except reps.DimensionCapExceeded as exc:
        print(f"omega-forge: refused: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IdentityFailure as exc:
        print(f"omega-forge: identity failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    fmt = cfg.format or natural
    if fmt == "json":
        payload = {"config": {k: v for k, v in asdict(cfg).items() if v is not None and k != "output"}, **payload}
        out = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    else:
        out = text + "\n"
    _emit(out, cfg.output)
    return status


if __name__ == "__main__":
    sys.exit(main())
