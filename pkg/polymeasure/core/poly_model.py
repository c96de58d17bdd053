"""Polynomials over density-matrix entries.

A polynomial is a list of terms ``c * r[i1,j1] * ... * r[ik,jk]``. Terms are kept in
canonical form: merged on identical index tuples, sorted lexicographically and with
zero coefficients dropped. ``evaluate_exact`` is the oracle every estimator is
checked against.
"""

import cmath
import itertools
import logging
import numbers
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedInput, VisitError

from polymeasure.core.errors import (
    DimensionMismatchError,
    EmptyExpressionError,
    ExpressionSyntaxError,
    IndexRangeError,
    NonHomogeneousError,
    NumericalInvariantError,
    PolyMeasureError,
    StateValidationError,
)

# Get logger
logger = logging.getLogger("PolyMeasure")

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10


def complex_to_pair(value: complex) -> List[float]:
    """Serialize a complex number as ``[re, im]``."""
    value = complex(value)
    return [float(value.real), float(value.imag)]


def pair_to_complex(pair: Sequence[float]) -> complex:
    """Read a ``[re, im]`` pair (a bare real number is accepted too)."""
    if isinstance(pair, (int, float)):
        return complex(pair)
    if len(pair) != 2:
        raise PolyMeasureError(f"complex values are [re, im] pairs, got {pair!r}", "json")
    return complex(float(pair[0]), float(pair[1]))


def matrix_to_pairs(matrix: np.ndarray) -> List[List[List[float]]]:
    """Serialize a complex matrix row-major as nested ``[re, im]`` pairs."""
    return [[complex_to_pair(z) for z in row] for row in np.asarray(matrix)]


def pairs_to_matrix(rows: Sequence[Sequence[Sequence[float]]]) -> np.ndarray:
    return np.array([[pair_to_complex(z) for z in row] for row in rows], dtype=complex)


def _as_index(value: Any) -> int:
    """Accept integers (and whole floats from JSON); anything fractional is rejected."""
    if isinstance(value, bool):
        raise IndexRangeError(f"index {value!r} is not an integer")
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real) and float(value).is_integer():
        return int(value)
    raise IndexRangeError(f"index {value!r} is not an integer")


@dataclass(frozen=True)
class MultiIndexTerm:
    """One coefficient-tagged product ``coeff * r[i1,j1] * ... * r[ik,jk]``."""

    indices: Tuple[int, ...]
    coeff: complex

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(_as_index(i) for i in self.indices))
        object.__setattr__(self, "coeff", complex(self.coeff))
        if not self.indices or len(self.indices) % 2:
            raise PolyMeasureError(
                f"term indices must be a non-empty sequence of (i, j) pairs, got {self.indices}",
                "term",
            )
        if not (cmath.isfinite(self.coeff)):
            raise NumericalInvariantError(f"coefficient {self.coeff} is not finite", "finite")

    @property
    def degree(self) -> int:
        return len(self.indices) // 2

    def to_dict(self) -> Dict[str, Any]:
        return {"indices": list(self.indices), "coeff": complex_to_pair(self.coeff)}


def _canonical_terms(terms: Iterable[MultiIndexTerm]) -> Tuple[MultiIndexTerm, ...]:
    merged: Dict[Tuple[int, ...], complex] = {}
    for term in terms:
        merged[term.indices] = merged.get(term.indices, 0j) + term.coeff
    return tuple(
        MultiIndexTerm(indices, coeff)
        for indices, coeff in sorted(merged.items())
        if coeff != 0
    )


@dataclass(frozen=True)
class PolynomialSpec:
    """A polynomial of degree ``degree`` in the entries of a ``dim`` x ``dim`` matrix.

    Terms may have lower degree until the polynomial is homogenized; construction always
    leaves the terms in canonical form.
    """

    dim: int
    degree: int
    terms: Tuple[MultiIndexTerm, ...] = field(default=())

    def __post_init__(self):
        if int(self.dim) < 2:
            raise PolyMeasureError(f"dimension must be at least 2, got {self.dim}", "dim")
        if int(self.degree) < 1:
            raise PolyMeasureError(f"degree must be at least 1, got {self.degree}", "degree")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "degree", int(self.degree))
        terms = tuple(
            t if isinstance(t, MultiIndexTerm) else MultiIndexTerm(*t) for t in self.terms
        )
        for term in terms:
            if term.degree > self.degree:
                raise PolyMeasureError(
                    f"term {term.indices} has degree {term.degree} > {self.degree}", "degree"
                )
            bad = [i for i in term.indices if not 0 <= i < self.dim]
            if bad:
                raise IndexRangeError(
                    f"index {bad[0]} out of range for dimension {self.dim} in term {term.indices}"
                )
        object.__setattr__(self, "terms", _canonical_terms(terms))

    @property
    def is_homogeneous(self) -> bool:
        return all(term.degree == self.degree for term in self.terms)

    def canonical(self) -> "PolynomialSpec":
        return PolynomialSpec(self.dim, self.degree, self.terms)

    def __add__(self, other: "PolynomialSpec") -> "PolynomialSpec":
        if not isinstance(other, PolynomialSpec):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatchError(f"cannot add specs of dimension {self.dim} and {other.dim}")
        return PolynomialSpec(self.dim, max(self.degree, other.degree), self.terms + other.terms)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "degree": self.degree,
            "terms": [term.to_dict() for term in self.terms],
        }


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated d x d density matrix. Build it with ``validate_state``."""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"entries shape {entries.shape} does not match dimension {self.dim}"
            )
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def to_dict(self) -> Dict[str, Any]:
        return {"dim": self.dim, "entries": matrix_to_pairs(self.entries)}


@dataclass(frozen=True)
class InvariantViolation:
    invariant: str
    deviation: float
    tolerance: float

    def to_dict(self) -> Dict[str, Any]:
        return {"invariant": self.invariant, "deviation": self.deviation, "tolerance": self.tolerance}


@dataclass(frozen=True)
class StateViolationReport:
    """Every density-matrix invariant a candidate matrix breaks, with measured deviations."""

    dim: int
    violations: Tuple[InvariantViolation, ...]

    def describe(self) -> str:
        return "; ".join(
            f"{v.invariant} deviation {v.deviation:.3e} exceeds {v.tolerance:.0e}"
            for v in self.violations
        )

    def to_dict(self) -> Dict[str, Any]:
        return {"dim": self.dim, "violations": [v.to_dict() for v in self.violations]}


def validate_state(entries: Any) -> Union[DensityMatrix, StateViolationReport]:
    """Check Hermiticity, unit trace and positivity of a square matrix."""
    matrix = np.asarray(entries, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatchError(f"state matrix must be square, got shape {matrix.shape}")
    dim = matrix.shape[0]

    if not np.all(np.isfinite(matrix)):
        return StateViolationReport(dim, (InvariantViolation("finite", float("inf"), 0.0),))

    violations = []
    hermitian_dev = float(np.max(np.abs(matrix - matrix.conj().T)))
    if hermitian_dev > HERMITIAN_TOL:
        violations.append(InvariantViolation("hermitian", hermitian_dev, HERMITIAN_TOL))

    trace_dev = float(abs(np.trace(matrix) - 1.0))
    if trace_dev > TRACE_TOL:
        violations.append(InvariantViolation("trace", trace_dev, TRACE_TOL))

    min_eig = float(np.linalg.eigvalsh((matrix + matrix.conj().T) / 2).min())
    if min_eig < PSD_FLOOR:
        violations.append(InvariantViolation("psd", -min_eig, -PSD_FLOOR))

    if violations:
        report = StateViolationReport(dim, tuple(violations))
        logger.debug(f"State rejected: {report.describe()}")
        return report
    return DensityMatrix(dim, matrix)


def require_state(entries: Any) -> DensityMatrix:
    """Like ``validate_state`` but raises StateValidationError on violations."""
    result = validate_state(entries)
    if isinstance(result, StateViolationReport):
        raise StateValidationError(result)
    return result


# Expression grammar: a sum of products of r[i,j] factors, optionally led by a
# real or complex coefficient.
_GRAMMAR = r"""
    start: expr

    expr: ADDOP? term (ADDOP term)*

    term: coeff "*" factor ("*" factor)*
        | factor ("*" factor)*

    coeff: NUMBER                                  -> real_coeff
         | "(" ADDOP? NUMBER ")"                   -> real_coeff
         | "(" ADDOP? NUMBER ADDOP NUMBER "i" ")"  -> complex_coeff

    factor: "r" "[" NUMBER "," NUMBER "]"

    ADDOP: "+" | "-"

    %import common.NUMBER
    %import common.WS
    %ignore WS
"""

_parser = Lark(_GRAMMAR, parser="lalr")


def _signed(sign: Optional[Token], number: Token) -> float:
    value = float(number)
    return -value if sign is not None and str(sign) == "-" else value


def _split_sign(items: List[Token]) -> Tuple[Optional[Token], List[Token]]:
    if items and items[0].type == "ADDOP":
        return items[0], items[1:]
    return None, items


class _TermCollector(Transformer):
    """Turns the parse tree into ``(coeff, indices)`` pairs."""

    def factor(self, items):
        indices = []
        for tok in items:
            if not str(tok).isdigit():
                raise ExpressionSyntaxError(f"index {tok} is not a non-negative integer", tok.start_pos)
            indices.append(int(tok))
        return tuple(indices)

    def real_coeff(self, items):
        sign, rest = _split_sign(items)
        return complex(_signed(sign, rest[0]), 0.0)

    def complex_coeff(self, items):
        sign, rest = _split_sign(items)
        real = _signed(sign, rest[0])
        imag = _signed(rest[1], rest[2])
        return complex(real, imag)

    def term(self, items):
        coeff = 1 + 0j
        if isinstance(items[0], complex):
            coeff, items = items[0], items[1:]
        indices = tuple(i for pair in items for i in pair)
        return coeff, indices

    def expr(self, items):
        terms = []
        sign = 1
        for item in items:
            if isinstance(item, Token):
                sign = -1 if str(item) == "-" else 1
                continue
            coeff, indices = item
            terms.append((sign * coeff, indices))
            sign = 1
        return terms

    def start(self, items):
        return items[0]


def parse_polynomial(text: str, dim: int) -> PolynomialSpec:
    """Parse an expression such as ``(0.5+0.5i)*r[0,0] + r[0,1]*r[1,0]``.

    The resulting degree is the longest product seen; lower-degree terms are kept as
    they are (see ``homogenize``).
    """
    if not text or not text.strip():
        raise EmptyExpressionError("empty expression")
    try:
        parsed = _TermCollector().transform(_parser.parse(text))
    except VisitError as e:
        raise e.orig_exc
    except UnexpectedInput as e:
        position = getattr(e, "pos_in_stream", None)
        if position is None or position < 0:
            position = len(text)
        raise ExpressionSyntaxError("unexpected input", position) from None

    degree = max(len(indices) // 2 for _, indices in parsed)
    terms = [MultiIndexTerm(indices, coeff) for coeff, indices in parsed]
    spec = PolynomialSpec(dim, degree, tuple(terms))
    logger.debug(f"Parsed polynomial of degree {degree} with {len(spec.terms)} canonical terms")
    return spec


def homogenize(spec: PolynomialSpec, degree: Optional[int] = None) -> PolynomialSpec:
    """Lift every term to a single degree by multiplying with factors of Tr rho.

    A degree-k term gains all appended diagonal pairs ``(a, a)`` for the missing
    ``degree - k`` slots, each with the original coefficient.
    """
    target = spec.degree if degree is None else int(degree)
    highest = max((term.degree for term in spec.terms), default=1)
    if target < highest:
        raise NonHomogeneousError(
            f"cannot homogenize to degree {target}: a term already has degree {highest}"
        )

    lifted = []
    for term in spec.terms:
        missing = target - term.degree
        if missing == 0:
            lifted.append(term)
            continue
        for diagonal in itertools.product(range(spec.dim), repeat=missing):
            extra = tuple(i for a in diagonal for i in (a, a))
            lifted.append(MultiIndexTerm(term.indices + extra, term.coeff))
    return PolynomialSpec(spec.dim, target, tuple(lifted))


def evaluate_exact(spec: PolynomialSpec, state: DensityMatrix) -> complex:
    """Sum of coefficient times product of entries over all terms."""
    if spec.dim != state.dim:
        raise DimensionMismatchError(
            f"polynomial dimension {spec.dim} does not match state dimension {state.dim}"
        )
    rho = state.entries
    total = 0j
    for term in spec.terms:
        idx = np.asarray(term.indices)
        total += term.coeff * np.prod(rho[idx[0::2], idx[1::2]])
    return complex(total)


def spec_from_dict(data: Dict[str, Any]) -> PolynomialSpec:
    """Read the JSON polynomial format ``{"dim": d, "terms": [...]}``."""
    try:
        dim = int(data["dim"])
        terms = [
            MultiIndexTerm(tuple(term["indices"]), pair_to_complex(term["coeff"]))
            for term in data["terms"]
        ]
    except PolyMeasureError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise PolyMeasureError(f"malformed polynomial document: {e!r}", "json") from None
    degree = data.get("degree") or max((t.degree for t in terms), default=1)
    return PolynomialSpec(dim, int(degree), tuple(terms))


def state_from_dict(data: Dict[str, Any]) -> DensityMatrix:
    """Read the JSON state format ``{"dim": d, "entries": [[[re, im], ...], ...]}``."""
    try:
        dim = int(data["dim"])
        matrix = pairs_to_matrix(data["entries"])
    except PolyMeasureError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise PolyMeasureError(f"malformed state document: {e!r}", "json") from None
    if matrix.shape != (dim, dim):
        raise DimensionMismatchError(f"state entries have shape {matrix.shape}, expected ({dim}, {dim})")
    return require_state(matrix)
