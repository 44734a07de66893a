"""Command line interface.  Every command prints canonical JSON (or a plain
table) and echoes the p-adic provenance of the run.

Exit codes: 2 bad input, 3 precision or separability failure, 4 internal error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import family, modforms, ordinary, panchishkin, rankin
from .fixtures import dumps, eigenforms_cached, record_to_json
from .linalg import rank_mod_p
from .modforms import is_prime
from .padic import PrecisionError

EXIT_BAD_INPUT = 2
EXIT_PRECISION = 3
EXIT_INTERNAL = 4


class BadInput(ValueError):
    pass


@dataclass(frozen=True)
class JobConfig:
    p: int | None = None
    N: int = 2
    M: int | None = None
    depth: int | None = None
    cache: str | None = None
    fmt: str = "json"
    denominator_budget: int | None = None

    def validate(self):
        if self.p is not None and (self.p < 5 or not is_prime(self.p)):
            raise BadInput(f"p must be a prime >= 5, got {self.p}")
        if self.N < 1:
            raise BadInput(f"N must be >= 1, got {self.N}")

    @property
    def budget(self) -> int:
        # default denominator budget: two thirds of the working precision
        return self.denominator_budget if self.denominator_budget is not None else (2 * self.N) // 3

    def provenance(self, sys: ordinary.KatzSystem | None = None) -> dict:
        if sys is not None:
            return sys.provenance()
        return {"p": self.p, "N": self.N, "M": self.M, "depth": self.depth}


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as err:
        raise BadInput(f"expected a comma separated list of integers, got {text!r}") from err


def _levi(text: str) -> list[list[int]]:
    try:
        return [[int(b) for b in part.split("+")] for part in text.split(",")]
    except ValueError as err:
        raise BadInput(f"bad Levi specification {text!r}; use e.g. 1+1,2") from err


def _need_p(cfg: JobConfig) -> int:
    if cfg.p is None:
        raise BadInput("--p is required for this command")
    return cfg.p


def _system(cfg: JobConfig, k: int) -> ordinary.KatzSystem:
    return ordinary.katz_system(_need_p(cfg), cfg.N, k, M=cfg.M, depth=cfg.depth)


def _eigenforms(cfg: JobConfig, k: int, prec: int = 100):
    return eigenforms_cached(k, _need_p(cfg), cfg.N, prec, cfg.cache)


def _pick(records, index: int, what: str):
    if not records:
        raise BadInput(f"no cusp eigenform available for {what}")
    if not 0 <= index < len(records):
        raise BadInput(f"{what} index {index} out of range (have {len(records)})")
    return records[index]


def _ordinary_f(cfg: JobConfig, k: int, index: int):
    forms = [f for f in _eigenforms(cfg, k) if f.ordinary]
    if not forms:
        raise BadInput(f"no ordinary weight {k} eigenform at p = {cfg.p}")
    return _pick(forms, index, "ordinary f")


# -- commands ----------------------------------------------------------------------


def cmd_basis(cfg, args):
    prec = args.prec or modforms.dim_mk(args.k) + 10
    if cfg.p is None:
        rows = modforms.miller_basis(args.k, prec)
    else:
        rows = modforms.miller_basis(args.k, prec, cfg.p, cfg.N)
    return {"weight": args.k, "prec": prec, "dim": len(rows),
            "basis": [[str(c) for c in f.ints()] for f in rows]}


def cmd_eigenforms(cfg, args):
    report: list[str] = []
    recs = modforms.cusp_eigenforms(args.k, _need_p(cfg), cfg.N, args.prec, report)
    return {"weight": args.k, "records": [record_to_json(f) for f in recs], "skipped": report}


def cmd_stabilize(cfg, args):
    out = []
    for f in _eigenforms(cfg, args.k, args.prec):
        if not f.ordinary:
            continue
        fa = modforms.p_stabilize(f)
        out.append({"alpha": str(f.alpha), "coeffs": [str(c) for c in fa.ints()[: args.terms + 1]]})
    return {"weight": args.k, "stabilized": out}


def cmd_up_matrix(cfg, args):
    sys_ = ordinary.katz_system(_need_p(cfg), cfg.N, args.k, M=cfg.M, depth=cfg.depth, projector=False)
    return {"weight": args.k, "index": [list(ij) for ij in sys_.index],
            "A": [[str(x) for x in row] for row in sys_.A.rows()], **sys_.provenance()}


def cmd_ord_project(cfg, args):
    sys_ = _system(cfg, args.k)
    E = sys_.E
    return {"weight": args.k, "rank_mod_p": rank_mod_p(E, sys_.p),
            "E": [[str(x) for x in row] for row in E.rows()], **sys_.provenance()}


def cmd_rankin(cfg, args):
    sys_ = _system(cfg, args.k)
    f = _ordinary_f(cfg, args.k, args.f_index)
    g = _pick(_eigenforms(cfg, args.ell), args.g_index, f"weight {args.ell} g")
    ts = _ints(args.t)
    values = []
    for t in ts:
        pt = rankin.RankinPoint(f, g, t)
        values.append(rankin.rankin_lvalue(pt, sys_, cfg.budget).to_json())
    return {"alpha": str(f.alpha), "values": values, **sys_.provenance()}


def cmd_rankin_range(cfg, args):
    return rankin.sigma_range(args.k, args.ell)


def cmd_euler(cfg, args):
    p = _need_p(cfg)
    f = _pick(_eigenforms(cfg, args.k, max(args.B, 100)), args.f_index, f"weight {args.k} f")
    g = _pick(_eigenforms(cfg, args.ell, max(args.B, 100)), args.g_index, f"weight {args.ell} g")
    coeffs = rankin.dirichlet_coefficients(f, g, args.B)
    out = {"P_p(g)": [str(c) for c in rankin.p_euler_poly(g)],
           "dirichlet": [str(c) for c in coeffs[1:]],
           "zeta_identity": coeffs == rankin.zeta_convolution(f, g, args.B)}
    if args.t is not None:
        if not f.ordinary:
            raise BadInput(f"f of weight {args.k} is not ordinary at {p}")
        out["factors"] = rankin.interpolation_factors(rankin.RankinPoint(f, g, args.t)).to_json()
    return out


def cmd_congruence(cfg, args):
    p = _need_p(cfg)
    weights = _ints(args.weights)
    seed = _ordinary_f(cfg, weights[0], args.f_index)
    branch = family.assemble_branch(p, cfg.N, weights, seed)
    rows = family.branch_congruence_check(branch, args.m)
    return {"residual": list(branch.residual), "primes": list(branch.primes),
            "rows": [r.to_json() for r in rows]}


def cmd_panchishkin(cfg, args):
    if args.rankin:
        k, ell, t = _ints(args.rankin)
        prof = panchishkin.rankin_profile(k, ell, t)
    else:
        if args.weights is None or args.d_plus is None:
            raise BadInput("give --rankin k,ell,t or --weights with --d-plus")
        sub = None if args.sub is None else tuple(_ints(args.sub))
        prof = panchishkin.HTProfile(tuple(_ints(args.weights)), args.d_plus, sub)
    out = {"profile": prof.to_json(), "critical": panchishkin.is_critical(prof)}
    if prof.sub is not None:
        out["panchishkin"] = panchishkin.is_panchishkin(prof)
        out["r_panchishkin"] = panchishkin.is_r_panchishkin(prof, args.r)
        out["r"] = args.r
        if out["panchishkin"]:
            lo, hi = panchishkin.critical_twist_range(prof)
            out["twist_range"] = [lo, hi]
    return out


def cmd_pardim(cfg, args):
    shape = panchishkin.ParabolicShape(tuple(_ints(args.group)), tuple(map(tuple, _levi(args.levi))))
    return {"big": panchishkin.big_eigenvariety_dim(shape),
            "small": panchishkin.small_eigenvariety_dim(shape),
            "redundant_twists": panchishkin.redundant_twists(shape)}


COMMANDS = {
    "basis": cmd_basis, "eigenforms": cmd_eigenforms, "stabilize": cmd_stabilize,
    "up-matrix": cmd_up_matrix, "ord-project": cmd_ord_project, "rankin": cmd_rankin,
    "rankin-range": cmd_rankin_range, "euler": cmd_euler, "congruence": cmd_congruence,
    "panchishkin": cmd_panchishkin, "pardim": cmd_pardim,
}

# commands whose output is pure combinatorics and carries no p-adic provenance
PLAIN = {"rankin-range", "pardim", "panchishkin"}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padic-rankin", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int)
    common.add_argument("--N", type=int, default=2)
    common.add_argument("--M", type=int, help="q-precision (default from the depth rule)")
    common.add_argument("--depth", type=int)
    common.add_argument("--cache-dir", help="fixture cache (overrides $PADIC_RANKIN_CACHE)")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--denominator-budget", type=int)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("basis", "Miller basis of M_k")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--prec", type=int)
    s = add("eigenforms", "normalised cusp eigenforms of weight k")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--prec", type=int, default=100)
    s = add("stabilize", "p-stabilisations of the ordinary eigenforms")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--prec", type=int, default=100)
    s.add_argument("--terms", type=int, default=20)
    for name, help_ in (("up-matrix", "U_p on the Katz basis"), ("ord-project", "ordinary projector")):
        s = add(name, help_)
        s.add_argument("--k", type=int, required=True)
    s = add("rankin", "p-adic Rankin-Selberg L-values")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--t", default="0", help="twist or comma separated twists")
    s.add_argument("--f-index", type=int, default=0)
    s.add_argument("--g-index", type=int, default=0)
    s = add("rankin-range", "interpolation range of twists")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--ell", type=int, required=True)
    s = add("euler", "Euler factors, Dirichlet coefficients and interpolation factors")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--B", type=int, default=30)
    s.add_argument("--t", type=int)
    s.add_argument("--f-index", type=int, default=0)
    s.add_argument("--g-index", type=int, default=0)
    s = add("congruence", "branch congruence report")
    s.add_argument("--weights", required=True)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--f-index", type=int, default=0)
    s = add("panchishkin", "Panchishkin predicates on a Hodge-Tate profile")
    s.add_argument("--weights")
    s.add_argument("--d-plus", type=int)
    s.add_argument("--sub")
    s.add_argument("--r", type=int, default=0)
    s.add_argument("--rankin", help="k,ell,t")
    s = add("pardim", "big and small eigenvariety dimensions")
    s.add_argument("--group", required=True, help="block sizes, e.g. 2,2")
    s.add_argument("--levi", required=True, help="Levi blocks per factor, e.g. 1+1,2")
    return ap


def _table(obj, prefix="") -> list[str]:
    if isinstance(obj, dict):
        lines = []
        for key in sorted(obj):
            lines += _table(obj[key], f"{prefix}{key}.")
        return lines
    if isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        lines = []
        for i, x in enumerate(obj):
            lines += _table(x, f"{prefix}{i}.")
        return lines
    return [f"{prefix.rstrip('.')}\t{obj}"]


def run(argv=None) -> tuple[int, str]:
    """Execute a command line; returns (exit code, output text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code or 0), ""
    cfg = JobConfig(args.p, args.N, args.M, args.depth, args.cache_dir, args.format,
                    args.denominator_budget)
    try:
        cfg.validate()
        result = COMMANDS[args.command](cfg, args)
    except (BadInput, ValueError, KeyError) as err:
        if isinstance(err, PrecisionError):
            return EXIT_PRECISION, f"error: {err}\n"
        return EXIT_BAD_INPUT, f"error: {err}\n"
    except PrecisionError as err:
        return EXIT_PRECISION, f"error: {err}\n"
    except Exception as err:  # noqa: BLE001 - any other failure is a bug
        return EXIT_INTERNAL, f"internal error: {type(err).__name__}: {err}\n"
    if args.command not in PLAIN and isinstance(result, dict):
        result = {**cfg.provenance(), **result}
    if cfg.fmt == "table":
        return 0, "\n".join(_table(result)) + "\n"
    return 0, dumps(result)


def main(argv=None) -> int:
    code, text = run(argv)
    stream = sys.stdout if code == 0 else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
