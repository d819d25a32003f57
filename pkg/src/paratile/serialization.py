"""JSON and text interchange for matrices, lattices, bodies, and reports.

Every number crosses the boundary as a decimal string ("17", "-3/4") so no
consumer is forced to guess at integer width or binary float rounding.  The
shapes are checked against schemas shipped with the package; see
``validate_document``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple, Union

import jsonschema

from .intervals import Interval
from .lattices import Lattice
from .linalg import IntMatrix, QMatrix
from .polytopes import HPolytope
from .radicals import SqrtSum


class SerializationError(ValueError):
    pass


# --- scalars -------------------------------------------------------------------

def frac_str(x: Union[int, Fraction]) -> str:
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def parse_frac(s: str) -> Fraction:
    try:
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise SerializationError(f"bad rational literal {s!r}") from exc


def dec_str(x: Fraction, places: int = 15) -> str:
    """Decimal rendering for humans; exact values travel as p/q elsewhere."""
    sign = "-" if x < 0 else ""
    x = abs(x)
    scaled = int(x * 10 ** places)
    whole, frac = divmod(scaled, 10 ** places)
    return f"{sign}{whole}.{frac:0{places}d}".rstrip("0").rstrip(".") or "0"


# --- matrices ------------------------------------------------------------------

def matrix_to_json(m: Union[IntMatrix, QMatrix]) -> Dict:
    return {
        "rows": m.nrows,
        "cols": m.ncols,
        "entries": [[frac_str(x) for x in row] for row in m.entries],
    }


def matrix_from_json(obj: Dict) -> Union[IntMatrix, QMatrix]:
    entries = [[parse_frac(s) for s in row] for row in obj["entries"]]
    if len(entries) != obj["rows"] or any(len(r) != obj["cols"]
                                          for r in entries):
        raise SerializationError("matrix entry grid does not match rows/cols")
    if all(x.denominator == 1 for row in entries for x in row):
        return IntMatrix.from_rows([[x.numerator for x in row]
                                    for row in entries])
    return QMatrix.from_rows(entries)


# --- lattices ------------------------------------------------------------------

def lattice_to_json(lat: Lattice) -> Dict:
    cols = [[frac_str(lat.basis.entries[i][j]) for i in range(lat.ambient_dim)]
            for j in range(lat.rank)]
    return {
        "ambient_dim": lat.ambient_dim,
        "basis_cols": cols,
        "integer": lat.is_integer(),
    }


def lattice_from_json(obj: Dict) -> Lattice:
    cols = [[parse_frac(s) for s in col] for col in obj["basis_cols"]]
    n = obj["ambient_dim"]
    if any(len(c) != n for c in cols):
        raise SerializationError("basis column length does not match dimension")
    return Lattice.from_columns(cols)


# --- radicals ------------------------------------------------------------------

def sqrtsum_to_json(s: SqrtSum) -> Dict:
    return {"terms": [{"coeff": frac_str(c), "radicand": frac_str(r)}
                      for c, r in s.terms]}


def sqrtsum_from_json(obj: Dict) -> SqrtSum:
    total = SqrtSum.zero()
    for t in obj["terms"]:
        c = parse_frac(t["coeff"])
        r = parse_frac(t["radicand"])
        total = total + SqrtSum.sqrt(r) * SqrtSum.from_rational(c)
    return total


def interval_to_json(iv: Interval) -> Dict:
    return {"lo": frac_str(iv.lo), "hi": frac_str(iv.hi),
            "lo_dec": dec_str(iv.lo), "hi_dec": dec_str(iv.hi)}


# --- polytopes -----------------------------------------------------------------

def polytope_to_json(p: HPolytope) -> Dict:
    frame = p.frame
    identity = frame.nrows == frame.ncols and \
        frame == QMatrix.identity(frame.nrows)
    basis = None
    if not identity:
        basis = [[frac_str(frame.entries[i][j]) for i in range(frame.nrows)]
                 for j in range(frame.ncols)]
    return {
        "ambient_dim": p.ambient_dim,
        "subspace_basis": basis,
        "halfspaces": [{"a": [frac_str(x) for x in a], "b": frac_str(b)}
                       for a, b in p.halfspaces],
    }


def polytope_from_json(obj: Dict) -> HPolytope:
    n = obj["ambient_dim"]
    basis = obj.get("subspace_basis")
    hs = [(tuple(parse_frac(x) for x in h["a"]), parse_frac(h["b"]))
          for h in obj["halfspaces"]]
    if basis is None:
        return HPolytope.from_halfspaces(n, hs)
    cols = [[parse_frac(s) for s in col] for col in basis]
    frame = QMatrix.from_rows(
        [[cols[j][i] for j in range(len(cols))] for i in range(n)])
    return HPolytope.from_halfspaces(frame, hs)


def format_hrep(p: HPolytope) -> str:
    """One inequality per line, "a1 a2 ... ad <= b", in chart coordinates.

    Comment lines carry the chart basis when the body lives in a proper
    subspace, so the file stays self-describing.
    """
    lines = [f"# dim {p.dim} ambient {p.ambient_dim}"]
    frame = p.frame
    if p.dim != p.ambient_dim or frame != QMatrix.identity(p.ambient_dim):
        for j in range(frame.ncols):
            col = " ".join(frac_str(frame.entries[i][j])
                           for i in range(frame.nrows))
            lines.append(f"# basis {col}")
    for a, b in p.halfspaces:
        lines.append(" ".join(str(x) for x in a) + " <= " + frac_str(b))
    return "\n".join(lines) + "\n"


def parse_hrep(text: str) -> HPolytope:
    dim = None
    ambient = None
    basis_rows: List[List[Fraction]] = []
    hs: List[Tuple[Tuple[Fraction, ...], Fraction]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if parts[:1] == ["dim"]:
                dim = int(parts[1])
                ambient = int(parts[3])
            elif parts[:1] == ["basis"]:
                basis_rows.append([parse_frac(x) for x in parts[1:]])
            continue
        if "<=" not in line:
            raise SerializationError(f"missing '<=' in line {line!r}")
        lhs, rhs = line.split("<=")
        a = tuple(parse_frac(x) for x in lhs.split())
        hs.append((a, parse_frac(rhs.strip())))
    if not hs:
        raise SerializationError("no inequalities found")
    if basis_rows:
        frame = QMatrix.from_rows(
            [[basis_rows[j][i] for j in range(len(basis_rows))]
             for i in range(len(basis_rows[0]))])
        return HPolytope.from_halfspaces(frame, hs)
    n = ambient if ambient is not None else len(hs[0][0])
    return HPolytope.from_halfspaces(n, hs)


# --- reports -------------------------------------------------------------------

def tiling_report_to_json(rep) -> Dict:
    return {
        "passed": rep.passed,
        "samples": rep.samples,
        "translates": rep.translates,
        "volume_equal": rep.volume_equal,
        "overlap_violations": rep.overlap_violations,
        "gap_violations": rep.gap_violations,
        "boundary_hits": rep.boundary_hits,
        "engine": rep.engine,
        "witnesses": [list(w) for w in rep.witnesses],
    }


def sampler_stats_to_json(m: int, n: int, d: int, seed: int,
                          stats: Dict, s: int, c: Fraction,
                          e_d: Optional[Fraction],
                          verified_s: Optional[int] = None) -> Dict:
    out = {
        "m": m, "n": n, "d": d, "seed": seed,
        "tries": stats["tries"],
        "accepted": True,
        "row_bound": stats["row_bound"],
        "heaviest_row": stats["heaviest_row"],
        "s": s,
        "c": frac_str(c),
    }
    if e_d is not None:
        out["e_d_exact"] = frac_str(e_d)
        out["e_d_dec"] = dec_str(e_d)
    if verified_s is not None:
        out["verified_s"] = verified_s
    return out


def level_to_json(level) -> Dict:
    return {
        "n": level.n,
        "mode": level.mode,
        "m": level.m,
        "d": level.d,
        "s": level.s,
        "matrix": matrix_to_json(level.matrix) if level.matrix else None,
        "norm_usq": frac_str(level.norm_usq)
        if level.norm_usq is not None else None,
        "kernel_shortest_sq": frac_str(level.kernel_shortest_sq)
        if level.kernel_shortest_sq is not None else None,
        "ratio_kernel": sqrtsum_to_json(level.ratio_kernel)
        if level.ratio_kernel is not None else None,
        "ratio_image": sqrtsum_to_json(level.ratio_image)
        if level.ratio_image is not None else None,
        "ratio": sqrtsum_to_json(level.ratio)
        if level.ratio is not None else None,
        "sampler_stats": level.sampler_stats,
        "checks": [{"name": name, "ok": ok} for name, ok in level.checks],
    }


def construction_report_to_json(rep, version: str,
                                timing: Optional[float] = None,
                                isoperimetric_lb: Optional[Fraction] = None
                                ) -> Dict:
    ratio_lo = None
    ratio_hi = frac_str(rep.ratio_upper)
    ratio_terms = None
    if rep.ratio_exact is not None:
        iv = rep.ratio_exact.interval_with_width(Fraction(1, 10 ** 12))
        ratio_lo = frac_str(iv.lo)
        ratio_hi = frac_str(iv.hi)
        ratio_terms = sqrtsum_to_json(rep.ratio_exact)
    final = {
        "ratio_lo": ratio_lo,
        "ratio_hi": ratio_hi,
        "ratio_hi_dec": dec_str(rep.ratio_upper),
        "ratio_exact": ratio_terms,
        "isoperimetric_lb": frac_str(isoperimetric_lb)
        if isoperimetric_lb is not None else None,
        "trivial_bound_2n": frac_str(rep.trivial_bound),
        "predicted_bound": {"lo": frac_str(rep.predicted[0]),
                            "hi": frac_str(rep.predicted[1]),
                            "hi_dec": dec_str(rep.predicted[1])}
        if rep.predicted is not None else None,
        "within_predicted": rep.within_predicted,
    }
    return {
        "n": rep.n,
        "kappa": rep.kappa,
        "epsilon": frac_str(rep.epsilon),
        "bound_only": rep.bound_only,
        "downgrade_reason": getattr(rep, "downgrade_reason", None),
        "levels": [level_to_json(lv) for lv in rep.levels],
        "final": final,
        "seeds": {"construction": rep.seed},
        "version": version,
        "timing": timing,
    }


# --- fixtures ------------------------------------------------------------------

def fixture_to_json(name: str, body: HPolytope, lat: Lattice,
                    expected_ratio: Optional[SqrtSum] = None,
                    ratio_parts: Optional[Sequence[SqrtSum]] = None,
                    expect_tiling: bool = True,
                    description: str = "") -> Dict:
    return {
        "name": name,
        "description": description,
        "body": polytope_to_json(body),
        "lattice": lattice_to_json(lat),
        "expected_ratio": sqrtsum_to_json(expected_ratio)
        if expected_ratio is not None else None,
        "ratio_parts": [sqrtsum_to_json(p) for p in ratio_parts]
        if ratio_parts is not None else None,
        "expect_tiling": expect_tiling,
    }


def fixture_from_json(obj: Dict) -> Dict:
    return {
        "name": obj["name"],
        "description": obj.get("description", ""),
        "body": polytope_from_json(obj["body"]),
        "lattice": lattice_from_json(obj["lattice"]),
        "expected_ratio": sqrtsum_from_json(obj["expected_ratio"])
        if obj.get("expected_ratio") else None,
        "ratio_parts": [sqrtsum_from_json(p) for p in obj["ratio_parts"]]
        if obj.get("ratio_parts") else None,
        "expect_tiling": obj.get("expect_tiling", True),
    }


# --- schema validation ---------------------------------------------------------

_SCHEMA_KINDS = ("matrix", "lattice", "polytope", "tiling_report",
                 "construction_report", "sampler_stats", "fixture",
                 "walk_stats")


def load_schema(kind: str) -> Dict:
    if kind not in _SCHEMA_KINDS:
        raise SerializationError(f"unknown schema kind {kind!r}")
    ref = resources.files("paratile") / "schemas" / f"{kind}.schema.json"
    return json.loads(ref.read_text())


def validate_document(kind: str, obj: Dict) -> None:
    """Raise SerializationError when obj does not match the kind's schema."""
    try:
        jsonschema.validate(obj, load_schema(kind))
    except jsonschema.ValidationError as exc:
        raise SerializationError(f"{kind} document invalid: {exc.message}") \
            from exc


def dump_json(obj: Dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
