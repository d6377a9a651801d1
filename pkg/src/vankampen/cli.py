"""Command-line front end.

Exit codes: 0 success, 1 internal failure, 2 usage or parse error,
3 hypothesis not met (a mathematical answer, not a failure).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from fractions import Fraction

from . import __version__
from .complexes import (Complex2, ComplexError, build_base_block, build_K, build_Z,
                        full_two_skeleton, named_subcomplex, quotient_points)
from .obstruction import obstruction_verdict
from .plgeom import build_link_curves, pl_linking_number, realize_H, to_off, verify_embedding
from .words import (Word, WordSyntaxError, exponent_sums, magnus_expansion, milnor_invariants,
                    parse_word, unlink_criterion)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_HYPOTHESIS = 0, 1, 2, 3

log = logging.getLogger("vankampen")


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _phi(args) -> Word:
    text = getattr(args, "phi_pos", None) or args.phi
    if text is None:
        raise UsageError("a word is required (--phi)")
    return parse_word(text)


# ---- build ----------------------------------------------------------------------


def build_target(target: str, phi: Word | None) -> Complex2:
    if target == "X":
        return build_base_block("x")
    if target == "Z":
        return build_Z()
    if target == "full":
        return full_two_skeleton(7)
    if phi is None:
        raise UsageError(f"target {target} needs --phi")
    K = build_K(phi)
    if target == "K":
        return K
    if target == "SSS":
        return quotient_points(K, "x1", "y1")
    return named_subcomplex(K, target)


def cmd_build(args) -> int:
    phi = _phi(args) if (args.phi or args.phi_pos) else None
    K = build_target(args.target, phi)
    _emit(K.to_json(indent=2) + "\n", args.out)
    return EXIT_OK


# ---- invariants -------------------------------------------------------------------


def cmd_invariants(args) -> int:
    w = _phi(args)
    inv = milnor_invariants(w)
    decision = unlink_criterion(w)
    out = inv.to_dict()
    out.update({
        "phi": str(w),
        "magnus": str(magnus_expansion(w, args.degree)),
        "unlink_criterion": decision.passed,
        "reasons": list(decision.reasons),
    })
    _emit(_dump(out), args.out)
    return EXIT_OK


# ---- obstruction ----------------------------------------------------------------


def cmd_obstruction(args) -> int:
    if args.input:
        with (sys.stdin if args.input == "-" else open(args.input)) as fh:
            K = Complex2.from_json(fh.read())
    else:
        K = build_target(args.target or "K", _phi(args) if (args.phi or args.phi_pos) else None)
    verdict = obstruction_verdict(K, args.seed)
    _emit(_dump(verdict.to_dict(include_witness=not args.no_witness)), args.out)
    return EXIT_OK


# ---- realize ---------------------------------------------------------------------


def cmd_realize(args) -> int:
    phi = _phi(args) if (args.phi or args.phi_pos) else Word.identity()
    G = realize_H(phi)
    report = verify_embedding(G, "embedding")
    payload = report.to_dict(G.names)
    if args.format == "off":
        text = to_off(G)
        header = "".join(f"# verification {k}: {v}\n" for k, v in sorted(payload.items())
                         if k != "violations")
        first, rest = text.split("\n", 1)
        _emit(first + "\n" + header + rest, args.out)
        sys.stderr.write(_dump(payload))
    else:
        out = {
            "vertices": list(G.names),
            "placement": {n: [str(Fraction(x)) for x in G.placement[i]] for i, n in enumerate(G.names)},
            "simplices": [list(s) for s in G.simplices],
            "verification": payload,
        }
        _emit(_dump(out), args.out)
    return EXIT_OK if report.ok else EXIT_FAIL


# ---- certify ----------------------------------------------------------------------


def certify(phi: Word, seed: int = 0, level: str = "f3", links: bool = False) -> dict:
    """Assemble the certificate for the hypotheses on ``phi``."""
    inv = milnor_invariants(phi)
    decision = unlink_criterion(phi)
    in_commutator = (inv.exp_a, inv.exp_b) == (0, 0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        K = build_K(phi)
    verdict = obstruction_verdict(K, seed)
    G = realize_H(phi)
    h_ok = verify_embedding(G, "embedding").ok
    cert = {
        "phi": str(phi),
        "in_commutator": in_commutator,
        "lcs_depth": "infinite" if inv.lcs_depth is None else inv.lcs_depth,
        "lk_g1_g2": 0,
        "lk_g1_g2_note": "disjoint balls",
        "lk_g3_g1": inv.exp_a,
        "lk_g3_g2": inv.exp_b,
        "mu123": "undefined" if inv.mu12 is None else inv.mu12,
        "unlink_criterion": decision.passed,
        "vk_verdict": verdict.to_dict(include_witness=False),
        "h_realized": h_ok,
        "level": level,
        "seed": seed,
        "tool_version": __version__,
    }
    if links:
        g1, g2, g3 = build_link_curves(phi)
        geo = {
            "lk_g1_g2": pl_linking_number(g1, g2),
            "lk_g3_g1": pl_linking_number(g3, g1),
            "lk_g3_g2": pl_linking_number(g3, g2),
        }
        geo["concordant"] = (geo["lk_g1_g2"], geo["lk_g3_g1"], geo["lk_g3_g2"]) == (0, inv.exp_a, inv.exp_b)
        cert["geometric_linking"] = geo
    reasons = []
    if phi.is_identity():
        reasons.append("phi = 1 is excluded")
    if not in_commutator:
        reasons.append(f"phi not in [F,F]: exponent sums {exponent_sums(phi)}")
    if level == "f3" and not decision.passed:
        reasons.extend(r for r in decision.reasons if "nonzero" in r or "undefined" in r)
    if not (verdict.vanishes_over_Z and verdict.vanishes_mod_2):
        reasons.append("van Kampen obstruction does not vanish")
    cert["hypothesis_met"] = not reasons
    cert["reasons"] = reasons
    return cert


def cmd_certify(args) -> int:
    phi = _phi(args)
    cert = certify(phi, args.seed, args.level, args.links)
    _emit(_dump(cert), args.out)
    if not cert["h_realized"]:
        log.error("realization of H failed verification")
        return EXIT_FAIL
    if "geometric_linking" in cert and not cert["geometric_linking"]["concordant"]:
        log.error("geometric and algebraic linking numbers disagree")
        return EXIT_FAIL
    return EXIT_OK if cert["hypothesis_met"] else EXIT_HYPOTHESIS


# ---- parser -----------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vankampen", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, phi_positional=True):
        if phi_positional:
            sp.add_argument("phi_pos", nargs="?", metavar="PHI", help="attaching word, e.g. '[a,[a,b]]'")
        sp.add_argument("--phi", help="attaching word (alternative to the positional argument)")
        sp.add_argument("--seed", type=int, default=0, help="seed for the generic map sampler (default: 0)")
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("build", help="write a complex as JSON")
    common(sp)
    sp.add_argument("--target", required=True, choices=["X", "Z", "K", "SSS", "H", "hatX", "hatY", "full"],
                    help="complex to build; K, SSS and H need a word")
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("invariants", help="word invariants as JSON")
    common(sp)
    sp.add_argument("--degree", type=int, default=3, help="Magnus truncation degree for display")
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("obstruction", help="van Kampen verdict for a complex")
    common(sp, phi_positional=False)
    sp.add_argument("input", nargs="?", help="complex JSON file, '-' for stdin")
    sp.add_argument("--target", choices=["X", "Z", "K", "SSS", "H", "full"],
                    help="build the complex instead of reading input")
    sp.add_argument("--no-witness", action="store_true", help="omit the coboundary witness")
    sp.set_defaults(func=cmd_obstruction, phi_pos=None)

    sp = sub.add_parser("realize", help="exact embedding of H in Q^4")
    common(sp)
    sp.add_argument("--format", choices=["json", "off"], default="off")
    sp.set_defaults(func=cmd_realize)

    sp = sub.add_parser("certify", help="certificate for the hypotheses on phi")
    common(sp)
    sp.add_argument("--level", choices=["commutator", "f3"], default="f3")
    sp.add_argument("--links", action="store_true", help="also compute PL linking numbers of the curves")
    sp.set_defaults(func=cmd_certify)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if not args.verbose:
        warnings.simplefilter("ignore")
    try:
        return args.func(args)
    except (WordSyntaxError, UsageError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (ComplexError, json.JSONDecodeError, KeyError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL
    except Exception as exc:  # surfaced as an internal failure with diagnostics
        log.exception("internal failure: %s", exc)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
