import argparse
import hashlib
import logging
import random
import sys
import time
from pathlib import Path

import config
from bracket_frames import (
    DualPair,
    bracket,
    dual_basis_from_gramian,
    frame_bounds,
    gramian,
    parseval_compact_check,
    verify_dual_module_bases,
    verify_dual_module_frames,
)
from codec import (
    dump_json,
    format_family,
    format_mask,
    format_matrix,
    format_pair,
    format_poly,
    format_vector,
    load_json,
    parse_family,
    parse_group,
    parse_mask,
    parse_pair,
    parse_vector,
)
from errors import ModuleFramesError, NotUnimodular, ParseError, UsageError
from hilbert_numeric import (
    canonical_dual_numeric,
    frame_inequality,
    random_module_element,
    spectral_frame_bounds,
    symbol_table,
)
from laurent_algebra import LaurentPoly, TorusGrid
from mra import (
    Dilation,
    biorthogonal_completion_1d,
    verify_filter_bank,
    wavelet_q2_function,
    wavelet_q2_masks,
    wavelet_space_presentation,
)
from symmetry import (
    canonical_forms_2d,
    mask_symmetry_check,
    symmetric_wavelet_verify,
    verify_affiliated,
)
from vectors import Lattice

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_ERROR = 2
EXIT_USAGE = 64
EXIT_PARSE = 65


class Session:
    """Inputs read so far and the shared flags of one invocation."""

    def __init__(self, args):
        self.args = args
        self.digest = hashlib.sha256()
        self.grid_size = args.grid
        self.radicand = args.sqrt

    def read(self, path):
        try:
            raw = Path(path).read_bytes()
        except OSError as e:
            raise UsageError(f"Cannot read {path}: {e}") from e
        self.digest.update(raw)
        return load_json(raw)

    def grid(self, n):
        return TorusGrid(n=n, size=self.grid_size)

    def plot(self, family):
        if self.args.plot_symbol:
            symbol_table(family, self.grid(family.n)).to_csv(
                self.args.plot_symbol, index=False, lineterminator="\n"
            )
            logger.info("Wrote Gramian symbol to %s", self.args.plot_symbol)


def _exponent(text):
    try:
        return tuple(int(x) for x in str(text).split(","))
    except ValueError as e:
        raise UsageError(f"Not an integer vector: {text!r}") from e


def _lattice(text, n):
    if text is None:
        return None
    return Lattice.of(load_json(text), n)


def cmd_bracket(session):
    v = parse_vector(session.read(session.args.left), session.radicand)
    w = parse_vector(session.read(session.args.right), session.radicand)
    value = bracket(v, w, _lattice(session.args.M, v.n))
    return EXIT_OK, {"bracket": format_poly(value)}


def cmd_gramian(session):
    F = parse_family(session.read(session.args.family), session.radicand)
    G = gramian(F, F)
    session.plot(F)
    return EXIT_OK, {"gramian": format_matrix(G), "self_adjoint": G.is_self_adjoint()}


def _witness(report):
    defect = report.defect
    return {
        "family": report.family,
        "generator": report.generator,
        "identity": report.identity,
        "defect": format_poly(defect) if isinstance(defect, LaurentPoly) else format_vector(defect),
    }


def cmd_verify_dual(session):
    P = parse_pair(session.read(session.args.pair), session.radicand)
    frames = verify_dual_module_frames(P)
    if not frames:
        return EXIT_ERROR, {"verdict": "neither", "witness": _witness(frames)}
    bases = verify_dual_module_bases(P)
    if not bases:
        return EXIT_FALSE, {"verdict": "dual_frames", "witness": _witness(bases)}
    return EXIT_OK, {"verdict": "dual_bases"}


def cmd_bounds(session):
    args = session.args
    P = None
    if args.pair:
        P = parse_pair(session.read(args.pair), session.radicand)
        family = P.primal
    elif args.family:
        family = parse_family(session.read(args.family), session.radicand)
        try:
            P = DualPair(family, dual_basis_from_gramian(family))
        except NotUnimodular:
            logger.info("No exact dual basis; reporting spectral bounds only")
    else:
        raise UsageError("bounds needs --pair or --family")
    grid = session.grid(family.n)
    spectral = spectral_frame_bounds(family, grid)
    session.plot(family)
    result = {
        "A_est": spectral.lower,
        "B_est": spectral.upper,
        "singular": spectral.singular,
        "A_thm": None,
        "B_thm": None,
    }
    if P is None:
        return EXIT_OK, result
    bounds = frame_bounds(P, grid)
    rng = random.Random(args.seed)
    samples = [frame_inequality(random_module_element(rng, P.primal), P.primal, bounds) for _ in range(5)]
    result.update(
        A_thm=[bounds.lower.lo, bounds.lower.hi],
        B_thm=[bounds.upper.lo, bounds.upper.hi],
        samples_ok=all(samples),
    )
    return (EXIT_OK if all(samples) else EXIT_FALSE), result


def cmd_canonical_dual(session):
    F = parse_family(session.read(session.args.family), session.radicand)
    session.plot(F)
    dual = canonical_dual_numeric(F, session.grid(F.n), session.args.tol)
    return EXIT_OK, {"dual": format_family(dual.family), "residual": dual.residual}


def cmd_wavelet2(session):
    args = session.args
    g1 = _exponent(args.g1)
    if args.mask:
        m = parse_mask(session.read(args.mask), session.radicand)
        mt = parse_mask(session.read(args.dual_mask), session.radicand) if args.dual_mask else m
        w, wt = wavelet_q2_masks(m, mt, g1)
        report = verify_filter_bank([m, w], [mt, wt])
        return (EXIT_OK if report else EXIT_FALSE), {
            "wavelet": format_mask(w),
            "dual_wavelet": format_mask(wt),
            "perfect_reconstruction": bool(report),
        }
    if not args.scaling:
        raise UsageError("wavelet2 needs --scaling or --mask")
    scaling = parse_pair(session.read(args.scaling), session.radicand)
    (g1,) = g1
    psi, psit = wavelet_q2_function(scaling.primal[0], scaling.dual[0], args.a, g1)
    wavelets = DualPair.of([psi], [psit])
    bases = verify_dual_module_bases(wavelets)
    orthogonal = not bracket(psi, scaling.dual[0]) and not bracket(scaling.primal[0], psit)
    return (EXIT_OK if bases and orthogonal else EXIT_FALSE), {
        "wavelets": format_pair(wavelets),
        "dual_bases": bool(bases),
        "orthogonal_to_scaling": orthogonal,
    }


def cmd_complete_1d(session):
    P = parse_pair(session.read(session.args.pair), session.radicand)
    completed = biorthogonal_completion_1d(P)
    return EXIT_OK, {"pair": format_pair(completed), "r": len(completed.primal)}


def cmd_wavelet_space(session):
    scaling = parse_pair(session.read(session.args.scaling), session.radicand)
    wavelets = wavelet_space_presentation(scaling, Dilation.of(session.args.a))
    return EXIT_OK, {"wavelets": format_pair(wavelets), "r": len(wavelets.primal)}


def cmd_symmetry_check(session):
    args = session.args
    m = parse_mask(session.read(args.mask), session.radicand)
    H = parse_group(session.read(args.group))
    affiliated = verify_affiliated(H, m.dilation)
    result = {
        "affiliated": bool(affiliated),
        "commutes": affiliated.commutes,
        "cosets": affiliated.cosets,
    }
    if args.role == "scaling":
        center = args.center.split(",") if args.center else None
        symmetric = mask_symmetry_check(m, H, center)
    else:
        symmetric = symmetric_wavelet_verify(m, H, _exponent(args.g1))
    result["symmetric"] = bool(symmetric)
    if not symmetric:
        result["witness"] = {"h": [list(r) for r in symmetric.element], "k": list(symmetric.index)}
    return (EXIT_OK if affiliated and symmetric else EXIT_FALSE), result


def cmd_classify_2d(session):
    table = []
    for entry in canonical_forms_2d():
        report = verify_affiliated(entry.group, entry.dilation)
        table.append(
            {
                "A": [list(r) for r in entry.dilation],
                "group": entry.label,
                "elements": entry.group.to_list(),
                "affiliated": bool(report),
            }
        )
    ok = all(row["affiliated"] for row in table)
    return (EXIT_OK if ok else EXIT_FALSE), {"table": table}


def cmd_parseval_check(session):
    v = parse_vector(session.read(session.args.vector), session.radicand)
    verdict = parseval_compact_check(v, _lattice(session.args.M, v.n))
    result = {"verdict": verdict.verdict, "gramian": format_poly(verdict.gramian)}
    if verdict.defect is not None:
        result["defect"] = format_poly(verdict.defect)
    return (EXIT_OK if verdict else EXIT_FALSE), result


COMMANDS = {
    "bracket": cmd_bracket,
    "gramian": cmd_gramian,
    "verify-dual": cmd_verify_dual,
    "bounds": cmd_bounds,
    "canonical-dual": cmd_canonical_dual,
    "wavelet2": cmd_wavelet2,
    "complete-1d": cmd_complete_1d,
    "wavelet-space": cmd_wavelet_space,
    "symmetry-check": cmd_symmetry_check,
    "classify-2d": cmd_classify_2d,
    "parseval-check": cmd_parseval_check,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    shared = _Parser(add_help=False)
    shared.add_argument("--human", action="store_true", help="print a text report instead of JSON")
    shared.add_argument("--grid", type=int, default=config.GRID_SIZE, help="torus points per axis")
    shared.add_argument("--plot-symbol", metavar="CSV", help="write Gramian eigenvalues on the grid")
    shared.add_argument("--sqrt", type=int, default=1, help="radicand of the *_s scalar components")
    shared.add_argument("--seed", type=int, default=config.SEED)

    parser = _Parser(prog="module-frames", description="Exact module frame calculus")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bracket", parents=[shared])
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--M", help="lattice matrix as JSON, e.g. [[2]]")

    p = sub.add_parser("gramian", parents=[shared])
    p.add_argument("--family", required=True)

    p = sub.add_parser("verify-dual", parents=[shared])
    p.add_argument("--pair", required=True)

    p = sub.add_parser("bounds", parents=[shared])
    p.add_argument("--pair")
    p.add_argument("--family")

    p = sub.add_parser("canonical-dual", parents=[shared])
    p.add_argument("--family", required=True)
    p.add_argument("--tol", type=float, default=1e-14)

    p = sub.add_parser("wavelet2", parents=[shared])
    p.add_argument("--scaling")
    p.add_argument("--mask")
    p.add_argument("--dual-mask")
    p.add_argument("--g1", default="1")
    p.add_argument("--a", type=int, default=2)

    p = sub.add_parser("complete-1d", parents=[shared])
    p.add_argument("--pair", required=True)

    p = sub.add_parser("wavelet-space", parents=[shared])
    p.add_argument("--scaling", required=True)
    p.add_argument("--a", type=int, default=2)

    p = sub.add_parser("symmetry-check", parents=[shared])
    p.add_argument("--mask", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--g1", default="1")
    p.add_argument("--role", choices=["wavelet", "scaling"], default="wavelet")
    p.add_argument("--center", help="symmetry center of the scaling function, e.g. 1/2")

    sub.add_parser("classify-2d", parents=[shared])

    p = sub.add_parser("parseval-check", parents=[shared])
    p.add_argument("--vector", required=True)
    p.add_argument("--M")
    return parser


def _human(payload):
    lines = []
    for key, value in payload.items():
        if isinstance(value, (dict, list)):
            value = dump_json(value).replace("\n", " ")
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def run(argv=None, stdout=None):
    """Run one subcommand and print its report; returns the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    logging.basicConfig(
        stream=sys.stderr,
        level=config.LOG_LEVEL,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    started = time.perf_counter()
    human = False
    command = None
    try:
        args = build_parser().parse_args(argv)
        command, human = args.command, args.human
        session = Session(args)
        code, result = COMMANDS[command](session)
        payload = {"command": command, "inputs_digest": session.digest.hexdigest(), **result}
    except UsageError as e:
        code, payload = EXIT_USAGE, {"command": command, "error": "UsageError", "message": str(e)}
    except ParseError as e:
        code, payload = EXIT_PARSE, {"command": command, "error": "ParseError", "message": str(e)}
    except ModuleFramesError as e:
        logger.info("Command %s failed: %s", command, e)
        code, payload = EXIT_ERROR, {"command": command, "error": type(e).__name__, "message": str(e)}
    except Exception as e:
        logger.exception("Unexpected failure in %s", command)
        code, payload = EXIT_ERROR, {"command": command, "error": type(e).__name__, "message": str(e)}
    payload["exit_code"] = code
    payload["timing_s"] = round(time.perf_counter() - started, 6)
    print(_human(payload) if human else dump_json(payload), file=stdout)
    return code


if __name__ == "__main__":
    sys.exit(run())
