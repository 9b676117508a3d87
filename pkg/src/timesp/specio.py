"""JSON spec documents, versioned CSV output and the key/value report format.

Loaders collect every violation in a document before raising, so one run
reports all the problems at once.  Writers go through a temporary file and
:func:`os.replace`, so a reader never sees a half-written output.

Document shapes
---------------
measure
    ``{"type": "atomic", "atoms": [["1/3", "1/2"], ["2/3", "1/2"]]}``,
    ``{"type": "lebesgue"}``,
    ``{"type": "digit-bernoulli", "base": 2, "weights": ["3/4", "1/4"]}``,
    ``{"type": "fourier-table", "K": 2, "coeffs": [[1, 0], [0.5, 0], [0.25, 0]]}``
    (coefficients for k = 0..K as ``[re, im]``; negative k by conjugation).
folner
    ``{"kind": "initial", "start": 0}``,
    ``{"kind": "shifted-intervals", "a": "2^n", "l": "n"}``,
    ``{"kind": "explicit", "sets": [[0], [0, 1]]}``.
subset
    ``{"kind": "blocks", "a": "2^n", "l": "n", "first": 1}``,
    ``{"kind": "intervals", "intervals": [[0, 4], [9, 9]]}``,
    ``{"kind": "finite", "elements": [1, 2, 3]}``,
    ``{"kind": "progression", "residue": 0, "modulus": 2, "start": 0}``,
    ``{"kind": "naturals"}``, ``{"kind": "complement", "of": <subset>}``.
semigroup
    ``{"p": 2, "tau": {"kind": "loglog"}, "l": "n", "mMax": 1}`` with tau also
    ``{"kind": "loglog", "base": 10}``, ``{"kind": "table", "points": [[n, tau], ...]}``
    or ``{"kind": "expression", "expr": "sqrt(n)", "range": [1, 1000]}``;
    ``"exponents": [1, 2]`` supplies A directly instead of tau.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction

from .errors import SpecError, ValidationError
from .expr import Expr
from .folner import (
    BlockUnion,
    Complement,
    ExplicitList,
    FiniteSet,
    InitialSegments,
    IntervalUnion,
    Naturals,
    Progression,
    ShiftedIntervals,
)
from .measure import Atomic, DigitBernoulli, FourierTable, Lebesgue
from .semigroup import ExpressionTau, LogLog, SemigroupSpec, TableTau, table_problems

FORMAT_VERSION = "v1"
CSV_MAGIC = "#timesp-csv"
REPORT_MAGIC = "#timesp-report"
PARAMS_MAGIC = "#params"


# ---------------------------------------------------------------------------
# reading


def parse_json(text: str, path=None):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}", path) from None


def read_document(source, path=None):
    """Parse a path, inline JSON text (starting with ``{``) or an already parsed dict."""
    if isinstance(source, dict):
        return source
    source = str(source)
    if source.lstrip().startswith("{"):
        return parse_json(source, path or "<inline>")
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecError(f"cannot read spec: {exc.strerror}", source) from None
    return parse_json(text, source)


class _Problems:
    def __init__(self):
        self.items = []

    def add(self, path, msg):
        self.items.append(f"{path}: {msg}" if path else msg)

    def raise_if_any(self, source=None):
        if self.items:
            raise SpecError(self.items, source)


def _fraction(value, path, problems):
    if isinstance(value, bool) or value is None:
        problems.add(path, f"expected a rational, got {value!r}")
        return None
    if isinstance(value, float):
        problems.add(path, f"give rationals as strings or integers, not the float {value!r}")
        return None
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        problems.add(path, f"not a rational: {value!r}")
        return None


def _integer(doc, key, path, problems, default=None, required=True):
    if key not in doc:
        if required and default is None:
            problems.add(path, f"missing field {key!r}")
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        problems.add(f"{path}.{key}" if path else key, f"expected an integer, got {v!r}")
        return default
    return v


def _expr(doc, key, path, problems, default=None):
    raw = doc.get(key, default)
    if raw is None:
        problems.add(path, f"missing field {key!r}")
        return None
    try:
        return Expr(raw)
    except SpecError as exc:
        problems.add(f"{path}.{key}" if path else key, "; ".join(exc.problems))
        return None


def _fmt(x: Fraction) -> str:
    return str(x)


def measure_from_doc(doc, source=None):
    problems = _Problems()
    if not isinstance(doc, dict):
        raise SpecError("measure spec must be a JSON object", source)
    kind = doc.get("type")
    if kind == "atomic":
        atoms = doc.get("atoms")
        if not isinstance(atoms, list) or not atoms:
            problems.add("atoms", "expected a nonempty list of [point, weight] pairs")
            problems.raise_if_any(source)
        parsed = []
        for i, pair in enumerate(atoms):
            where = f"atoms[{i}]"
            if not isinstance(pair, list) or len(pair) != 2:
                problems.add(where, "expected a [point, weight] pair")
                continue
            x = _fraction(pair[0], where + "[0]", problems)
            if x is not None and not 0 <= x < 1:
                problems.add(where + "[0]", f"point {_fmt(x)} is outside [0, 1)")
            w = _fraction(pair[1], where + "[1]", problems)
            if w is not None and w < 0:
                problems.add(where + "[1]", f"negative weight {_fmt(w)}")
            parsed.append((x, w))
        points = [x for x, _ in parsed if x is not None]
        dupes = sorted({x for x in points if points.count(x) > 1})
        for x in dupes:
            problems.add("atoms", f"duplicate atom {_fmt(x)}")
        weights = [w for _, w in parsed]
        if all(w is not None for w in weights) and sum(weights) != 1:
            problems.add("atoms", f"weights sum {_fmt(sum(weights))} ≠ 1")
        problems.raise_if_any(source)
        return Atomic(tuple(parsed))
    if kind == "lebesgue":
        return Lebesgue()
    if kind == "digit-bernoulli":
        base = _integer(doc, "base", "", problems)
        if base is not None and base < 2:
            problems.add("base", f"base must be >= 2, got {base}")
        ws = doc.get("weights")
        if not isinstance(ws, list):
            problems.add("weights", "expected a list of digit weights")
            problems.raise_if_any(source)
        weights = [_fraction(w, f"weights[{i}]", problems) for i, w in enumerate(ws)]
        if base is not None and len(weights) != base:
            problems.add("weights", f"expected {base} digit weights, got {len(weights)}")
        for i, w in enumerate(weights):
            if w is not None and w < 0:
                problems.add(f"weights[{i}]", f"negative weight {_fmt(w)}")
        if all(w is not None for w in weights) and sum(weights) != 1:
            problems.add("weights", f"weights sum {_fmt(sum(weights))} ≠ 1")
        problems.raise_if_any(source)
        return DigitBernoulli(base, tuple(weights))
    if kind == "fourier-table":
        K = _integer(doc, "K", "", problems)
        coeffs = doc.get("coeffs")
        if not isinstance(coeffs, list):
            problems.add("coeffs", "expected a list of [re, im] pairs for k = 0..K")
            problems.raise_if_any(source)
        values = []
        for i, c in enumerate(coeffs):
            if (
                not isinstance(c, list)
                or len(c) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in c)
            ):
                problems.add(f"coeffs[{i}]", "expected [re, im] numbers")
                continue
            z = complex(c[0], c[1])
            if abs(z) > 1 + 1e-12:
                problems.add(f"coeffs[{i}]", f"|coefficient| = {abs(z):.6g} exceeds 1")
            values.append(z)
        if values and values[0] != 1:
            problems.add("coeffs[0]", f"coefficient at 0 must be 1, got {values[0]}")
        if K is not None and len(coeffs) != K + 1:
            problems.add("coeffs", f"expected K + 1 = {K + 1} coefficients, got {len(coeffs)}")
        problems.raise_if_any(source)
        return FourierTable(tuple(values))
    raise SpecError(
        f"type: expected one of atomic, lebesgue, digit-bernoulli, fourier-table, got {kind!r}", source
    )


def folner_from_doc(doc, source=None):
    problems = _Problems()
    if not isinstance(doc, dict):
        raise SpecError("Følner spec must be a JSON object", source)
    kind = doc.get("kind")
    if kind == "initial":
        start = _integer(doc, "start", "", problems, default=0)
        if start is not None and start < 0:
            problems.add("start", "start must be >= 0")
        problems.raise_if_any(source)
        return InitialSegments(start)
    if kind == "shifted-intervals":
        a = _expr(doc, "a", "", problems)
        l = _expr(doc, "l", "", problems)
        for key, e in (("a", a), ("l", l)):
            if e is not None and not e.is_integer:
                problems.add(key, f"{e.text!r} is not an integer rule")
        problems.raise_if_any(source)
        return ShiftedIntervals(a, l)
    if kind == "explicit":
        sets = doc.get("sets")
        if not isinstance(sets, list) or not sets:
            problems.add("sets", "expected a nonempty list of integer lists")
            problems.raise_if_any(source)
        for i, s in enumerate(sets):
            if not isinstance(s, list) or not s:
                problems.add(f"sets[{i}]", "expected a nonempty list of integers")
            elif not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in s):
                problems.add(f"sets[{i}]", "elements must be nonnegative integers")
        problems.raise_if_any(source)
        return ExplicitList(tuple(tuple(s) for s in sets))
    raise SpecError(f"kind: expected one of initial, shifted-intervals, explicit, got {kind!r}", source)


def subset_from_doc(doc, source=None, path=""):
    problems = _Problems()
    if not isinstance(doc, dict):
        raise SpecError(f"{path or 'subset'}: expected a JSON object", source)
    kind = doc.get("kind")
    if kind == "blocks":
        a = _expr(doc, "a", path, problems)
        l = _expr(doc, "l", path, problems)
        first = _integer(doc, "first", path, problems, default=1)
        problems.raise_if_any(source)
        return BlockUnion(a, l, first)
    if kind == "intervals":
        ivs = doc.get("intervals")
        if not isinstance(ivs, list):
            problems.add(path + ".intervals" if path else "intervals", "expected a list of [lo, hi] pairs")
            problems.raise_if_any(source)
        for i, iv in enumerate(ivs):
            ok = isinstance(iv, list) and len(iv) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in iv)
            if not ok:
                problems.add(f"intervals[{i}]", "expected [lo, hi] integers")
            elif iv[0] > iv[1] or iv[0] < 0:
                problems.add(f"intervals[{i}]", f"[{iv[0]}, {iv[1]}] is not a nonempty subset of N")
        problems.raise_if_any(source)
        return IntervalUnion(tuple(tuple(iv) for iv in ivs))
    if kind == "finite":
        els = doc.get("elements")
        if not isinstance(els, list) or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in els):
            problems.add("elements", "expected a list of nonnegative integers")
        problems.raise_if_any(source)
        return FiniteSet(frozenset(els))
    if kind == "progression":
        residue = _integer(doc, "residue", path, problems)
        modulus = _integer(doc, "modulus", path, problems)
        start = _integer(doc, "start", path, problems, default=0)
        if modulus is not None and modulus < 1:
            problems.add("modulus", "modulus must be >= 1")
        problems.raise_if_any(source)
        return Progression(residue, modulus, start)
    if kind == "naturals":
        return Naturals()
    if kind == "complement":
        return Complement(subset_from_doc(doc.get("of"), source, (path + ".of") if path else "of"))
    raise SpecError(
        f"kind: expected one of blocks, intervals, finite, progression, naturals, complement, got {kind!r}",
        source,
    )


def tau_from_doc(doc, problems, path="tau"):
    if not isinstance(doc, dict):
        problems.add(path, "expected an object with a kind")
        return None
    kind = doc.get("kind")
    if kind == "loglog":
        base = doc.get("base")
        if base is not None and (not isinstance(base, (int, float)) or base <= 1):
            problems.add(path + ".base", f"log base must exceed 1, got {base!r}")
            return None
        return LogLog(base)
    if kind == "table":
        pts = doc.get("points")
        if not isinstance(pts, list) or not all(isinstance(p, list) and len(p) == 2 for p in pts):
            problems.add(path + ".points", "expected a list of [n, tau] pairs")
            return None
        parsed = []
        for i, (n, v) in enumerate(pts):
            if isinstance(n, bool) or not isinstance(n, int):
                problems.add(f"{path}.points[{i}][0]", f"expected an integer, got {n!r}")
                continue
            try:
                parsed.append((n, Fraction(str(v))))
            except (ValueError, ZeroDivisionError):
                problems.add(f"{path}.points[{i}][1]", f"not a number: {v!r}")
        for msg in table_problems(parsed) if len(parsed) == len(pts) else []:
            problems.add(path + ".points", msg)
        if problems.items:
            return None
        return TableTau(tuple(parsed))
    if kind == "expression":
        try:
            tau = ExpressionTau(Expr(doc.get("expr")))
        except SpecError as exc:
            problems.add(path + ".expr", "; ".join(exc.problems))
            return None
        rng = doc.get("range")
        if rng is not None:
            if not (isinstance(rng, list) and len(rng) == 2 and all(isinstance(x, int) for x in rng)):
                problems.add(path + ".range", "expected [lo, hi] integers")
                return None
            try:
                tau.check_increasing(rng[0], rng[1])
            except ValidationError as exc:
                problems.add(path, str(exc))
                return None
        return tau
    problems.add(path + ".kind", f"expected one of loglog, table, expression, got {kind!r}")
    return None


def semigroup_from_doc(doc, source=None):
    problems = _Problems()
    if not isinstance(doc, dict):
        raise SpecError("semigroup spec must be a JSON object", source)
    p = _integer(doc, "p", "", problems)
    if p is not None and p < 2:
        problems.add("p", f"p must be >= 2, got {p}")
    tau = tau_from_doc(doc["tau"], problems) if "tau" in doc else None
    exponents = doc.get("exponents")
    if exponents is not None and not (
        isinstance(exponents, list) and all(isinstance(j, int) and not isinstance(j, bool) and j >= 0 for j in exponents)
    ):
        problems.add("exponents", "expected a list of nonnegative integers")
    if "tau" not in doc and exponents is None:
        problems.add("", "semigroup spec needs 'tau' or 'exponents'")
    l = _expr(doc, "l", "", problems, default="n")
    m_max = _integer(doc, "mMax", "", problems, required=False)
    if m_max is not None and m_max < 0:
        problems.add("mMax", "mMax must be >= 0")
    problems.raise_if_any(source)
    return SemigroupSpec(
        p, tau, l, m_max, tuple(exponents) if exponents is not None else None
    )


LOADERS = {
    "measure": measure_from_doc,
    "folner": folner_from_doc,
    "subset": subset_from_doc,
    "semigroup": semigroup_from_doc,
}


def load_spec(source, expected_kind: str):
    """Read and validate a spec document of the given kind."""
    if expected_kind not in LOADERS:
        raise ValueError(f"unknown spec kind {expected_kind!r}")
    label = source if isinstance(source, str) and not source.lstrip().startswith("{") else None
    return LOADERS[expected_kind](read_document(source), label)


# ---------------------------------------------------------------------------
# writing


def format_value(v) -> str:
    """Deterministic text for CSV cells: shortest round-trip floats, exact rationals."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v + 0.0)  # folds -0.0 into 0.0
    if isinstance(v, Fraction):
        return str(v)
    if v is None:
        return ""
    return str(v)


def atomic_write(path, text: str) -> None:
    """Write text to path via a temporary file in the same directory."""
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(kind: str, header, rows, params=None) -> str:
    """``#timesp-csv v1 <kind>``, an optional ``#params <json>`` line, then the table."""
    buf = io.StringIO()
    buf.write(f"{CSV_MAGIC} {FORMAT_VERSION} {kind}\n")
    if params:
        buf.write(f"{PARAMS_MAGIC} {json.dumps(_jsonable(dict(params)), ensure_ascii=False, sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def read_csv(text: str):
    """Return (kind, params, header, rows) from text written by :func:`csv_text`."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith(CSV_MAGIC + " "):
        raise SpecError("missing timesp CSV header line")
    _, version, kind = lines[0].split(" ", 2)
    if version != FORMAT_VERSION:
        raise SpecError(f"unsupported CSV version {version}")
    body = lines[1:]
    params = {}
    if body and body[0].startswith(PARAMS_MAGIC + " "):
        params = json.loads(body[0][len(PARAMS_MAGIC) + 1:])
        body = body[1:]
    rows = list(csv.reader(body))
    return kind, params, rows[0], rows[1:]


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, int) and not isinstance(v, bool) and v.bit_length() > 53:
        return str(v)
    if hasattr(v, "__float__") and not isinstance(v, (int, float, bool)):
        return float(v)
    return v


def report_text(kind: str, items) -> str:
    """``#timesp-report v1 <kind>`` followed by one ``key = <json>`` line per item."""
    lines = [f"{REPORT_MAGIC} {FORMAT_VERSION} {kind}"]
    for key, value in items:
        if not key or "=" in key or key != key.strip():
            raise ValueError(f"bad report key {key!r}")
        lines.append(f"{key} = {json.dumps(_jsonable(value), ensure_ascii=False, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def parse_report(text: str):
    """Return (kind, dict) from text written by :func:`report_text`."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith(REPORT_MAGIC + " "):
        raise SpecError("missing timesp report header line")
    _, version, kind = lines[0].split(" ", 2)
    if version != FORMAT_VERSION:
        raise SpecError(f"unsupported report version {version}")
    out = {}
    for i, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        key, sep, value = line.partition(" = ")
        if not sep:
            raise SpecError(f"line {i}: expected 'key = value'")
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError as exc:
            raise SpecError(f"line {i}, column {exc.colno + len(key) + 3}: {exc.msg}") from None
    return kind, out
