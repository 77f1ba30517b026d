"""JSON shapes for every value the command line reads or writes.

Rationals travel as "p/q" strings. Objects whose scalars carry a square root
record its radicand under "sqrt"; when it is absent the caller's default
applies.
"""

import json
from fractions import Fraction

from bracket_frames import DualPair, GeneratorFamily
from errors import FieldMismatch, ParseError
from laurent_algebra import LaurentMatrix, LaurentPoly, Scalar
from mra import Dilation, Mask
from symmetry import PointGroup
from vectors import FinSeq, Lattice, PiecewisePoly


def _rational(text):
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"Not a rational number: {text!r}") from e


def _radicand(scalars):
    found = {s.radicand for s in scalars if s.radicand != 1}
    if len(found) > 1:
        raise FieldMismatch(f"One object mixes square roots of {sorted(found)}")
    return found.pop() if found else 1


def _with_sqrt(payload, scalars):
    r = _radicand(scalars)
    if r != 1:
        payload["sqrt"] = r
    return payload


def format_scalar(c):
    return {"re": str(c.re), "im": str(c.im), "re_s": str(c.re_s), "im_s": str(c.im_s)}


def parse_scalar(data, radicand=1):
    if isinstance(data, (str, int)):
        return Scalar(_rational(data))
    try:
        re_s, im_s = _rational(data.get("re_s", "0")), _rational(data.get("im_s", "0"))
        if (re_s or im_s) and radicand == 1:
            raise ParseError(f"Scalar {data!r} has a square-root part but no \"sqrt\" radicand")
        return Scalar(_rational(data.get("re", "0")), _rational(data.get("im", "0")), re_s, im_s, radicand)
    except AttributeError as e:
        raise ParseError(f"Not a scalar: {data!r}") from e


def format_poly(a):
    terms = [{"exp": list(g), **format_scalar(c)} for g, c in a.terms.items()]
    return _with_sqrt({"n": a.n, "terms": terms}, a.terms.values())


def parse_poly(data, radicand=1):
    try:
        radicand = data.get("sqrt", radicand)
        return LaurentPoly(
            int(data["n"]),
            {tuple(int(x) for x in t["exp"]): parse_scalar(t, radicand) for t in data["terms"]},
        )
    except (KeyError, TypeError, AttributeError) as e:
        raise ParseError(f"Malformed Laurent polynomial: {e}") from e


def format_matrix(M):
    return {"n": M.n, "rows": [[format_poly(e) for e in row] for row in M.rows]}


def parse_matrix(data, radicand=1):
    try:
        return LaurentMatrix(
            [[parse_poly(e, radicand) for e in row] for row in data["rows"]], int(data["n"])
        )
    except (KeyError, TypeError) as e:
        raise ParseError(f"Malformed Laurent matrix: {e}") from e


def format_vector(v):
    if isinstance(v, FinSeq):
        entries = [{"k": list(k), **format_scalar(c)} for k, c in v.entries.items()]
        return _with_sqrt({"n": v.n, "entries": entries}, v.entries.values())
    pieces = [
        [str(c.re) if c.is_rational() else format_scalar(c) for c in p] for p in v.pieces
    ]
    scalars = [c for p in v.pieces for c in p]
    return _with_sqrt({"breaks": [str(b) for b in v.breaks], "pieces": pieces}, scalars)


def parse_vector(data, radicand=1):
    try:
        radicand = data.get("sqrt", radicand)
        if "entries" in data:
            return FinSeq(
                int(data["n"]),
                {tuple(int(x) for x in e["k"]): parse_scalar(e, radicand) for e in data["entries"]},
            )
        if "breaks" in data:
            return PiecewisePoly(
                [_rational(b) for b in data["breaks"]],
                [[parse_scalar(c, radicand) for c in p] for p in data["pieces"]],
            )
    except (KeyError, TypeError, AttributeError) as e:
        raise ParseError(f"Malformed vector: {e}") from e
    except ValueError as e:
        raise ParseError(str(e)) from e
    raise ParseError("A vector needs either 'entries' or 'breaks'")


def format_family(F):
    return {"generators": [format_vector(v) for v in F], "M": F.lattice.to_list()}


def parse_family(data, radicand=1):
    try:
        vectors = [parse_vector(v, radicand) for v in data["generators"]]
        return GeneratorFamily(tuple(vectors), Lattice.of(data.get("M"), vectors[0].n))
    except (KeyError, IndexError, TypeError) as e:
        raise ParseError(f"Malformed generator family: {e}") from e


def format_pair(P):
    return {
        "primal": [format_vector(v) for v in P.primal],
        "dual": [format_vector(v) for v in P.dual],
        "M": P.lattice.to_list(),
    }


def parse_pair(data, radicand=1):
    try:
        primal = [parse_vector(v, radicand) for v in data["primal"]]
        dual = [parse_vector(v, radicand) for v in data["dual"]]
        return DualPair.of(primal, dual, Lattice.of(data.get("M"), primal[0].n))
    except (KeyError, IndexError, TypeError) as e:
        raise ParseError(f"Malformed dual pair: {e}") from e


def format_mask(m):
    return {**format_vector(m.coefficients), "A": m.dilation.to_list()}


def parse_mask(data, radicand=1):
    seq = parse_vector(data, radicand)
    if not isinstance(seq, FinSeq):
        raise ParseError("A mask is a sequence with 'entries'")
    try:
        return Mask(seq, Dilation.of(data["A"]))
    except KeyError as e:
        raise ParseError("A mask needs its dilation under 'A'") from e


def format_group(H):
    return {"elements": H.to_list()}


def parse_group(data):
    try:
        if "elements" in data:
            return PointGroup(tuple(data["elements"]))
        return PointGroup.generated_by(data["generators"])
    except (KeyError, TypeError) as e:
        raise ParseError(f"Malformed point group: {e}") from e


def load_json(raw):
    try:
        return json.loads(raw)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON: {e}") from e


def dump_json(payload):
    return json.dumps(payload, sort_keys=True, indent=2)
