"""
Dense matrix algebra over the max-times semiring (R+, max, *).

Matrices are plain 2-D ``numpy.ndarray`` objects. Two arithmetic modes are
supported and selected by dtype:

* floating mode: ``float64`` arrays (the default);
* exact mode: ``object`` arrays holding :class:`fractions.Fraction` entries.

Every routine accepts either mode and returns a result in the same mode; if
the operands are mixed, the result is exact (floats are converted through
their shortest decimal representation).

Equality of reals is decided through a :class:`Tolerance`. Exact operands
are always compared exactly.
"""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "to_number",
    "as_matrix",
    "is_exact",
    "identity",
    "zeros",
    "sgn",
    "max_times_product",
    "max_times_power",
    "elementwise_max",
    "max_plus_product",
    "to_log",
    "from_log",
    "matrices_close",
    "format_number",
    "matrix_to_csv",
    "matrix_from_csv",
    "matrix_to_json",
    "matrix_from_json",
]


@dataclass(frozen=True)
class Tolerance:
    """Relative/absolute tolerance used to decide equality of reals.

    Parameters
    ----------
    rtol : float
        Relative tolerance.
    atol : float
        Absolute floor, used when both values are close to zero.
    """

    rtol: float = 1e-9
    atol: float = 1e-12

    def __post_init__(self):
        if not (self.rtol >= 0 and self.atol >= 0):
            raise ValueError("tolerances must be non-negative")

    @classmethod
    def from_env(cls, var="MAXLIN_RTOL"):
        """Default tolerance, with ``rtol`` overridden by an environment variable."""
        raw = os.environ.get(var)
        if raw is None or raw.strip() == "":
            return cls()
        try:
            return cls(rtol=float(raw))
        except ValueError as exc:
            raise ValueError(f"{var} must be a non-negative float, got {raw!r}") from exc

    def close(self, a, b):
        """True if ``a`` and ``b`` are equal under this tolerance."""
        if _is_exact_scalar(a) and _is_exact_scalar(b):
            return a == b
        a, b = float(a), float(b)
        if math.isinf(a) or math.isinf(b):
            return a == b
        return math.isclose(a, b, rel_tol=self.rtol, abs_tol=self.atol)

    def greater(self, a, b):
        """True if ``a > b`` by more than the tolerance."""
        return a > b and not self.close(a, b)


DEFAULT_TOLERANCE = Tolerance()


def _is_exact_scalar(x):
    return isinstance(x, Rational)


def to_number(x, exact=False):
    """Convert a scalar (number or ``"p/q"`` string) to the requested mode."""
    if isinstance(x, str):
        x = x.strip()
        if exact:
            return Fraction(x)
        if "/" in x:
            return float(Fraction(x))
        return float(x)
    if isinstance(x, bool):
        raise TypeError("booleans are not valid matrix entries")
    if exact:
        if isinstance(x, Rational):
            return Fraction(x)
        if isinstance(x, (float, np.floating)):
            if not math.isfinite(x):
                raise ValueError(f"non-finite value {x!r} has no exact representation")
            return Fraction(repr(float(x)))
        return Fraction(x)
    return float(x)


def is_exact(M):
    """True if ``M`` is an exact (``Fraction``) matrix or vector."""
    return isinstance(M, np.ndarray) and M.dtype == object


def zeros(shape, exact=False):
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=float)


def identity(d, exact=False):
    """Identity matrix, the unit element of (matrices, max, max-times product)."""
    out = zeros((d, d), exact)
    one = Fraction(1) if exact else 1.0
    for i in range(d):
        out[i, i] = one
    return out


def _coerce(data, exact, ndim, name):
    arr = np.asarray(data, dtype=object if exact else None)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if exact:
        flat = [to_number(x, exact=True) for x in arr.ravel()]
        out = np.empty(arr.shape, dtype=object)
        out.ravel()[:] = flat
        if any(x < 0 for x in flat):
            raise ValueError(f"{name} has negative entries")
        return out
    if arr.dtype == object or arr.dtype.kind in "US":
        arr = np.vectorize(lambda x: to_number(x), otypes=[float])(arr) if arr.size else arr.astype(float)
    out = np.array(arr, dtype=float)
    if np.isnan(out).any():
        raise ValueError(f"{name} has NaN entries")
    if (out < 0).any():
        raise ValueError(f"{name} has negative entries")
    return out


def _infer_exact(data):
    if isinstance(data, np.ndarray):
        return data.dtype == object and any(_is_exact_scalar(x) for x in data.ravel())
    flat = np.asarray(data, dtype=object).ravel()
    return any(isinstance(x, (Fraction, str)) and not isinstance(x, bool) for x in flat) and all(
        not isinstance(x, float) for x in flat
    )


def as_matrix(data, exact=None, name="matrix"):
    """Validate and convert ``data`` to a non-negative 2-D matrix.

    Parameters
    ----------
    data : array-like
        Nested sequences or an ndarray. In exact mode, entries may be
        ``Fraction``, ``int`` or ``"p/q"`` strings.
    exact : bool or None
        Arithmetic mode. ``None`` infers it: object arrays of rationals and
        sequences containing ``Fraction`` or string entries are exact.

    Returns
    -------
    numpy.ndarray
    """
    if exact is None:
        exact = _infer_exact(data)
    return _coerce(data, exact, 2, name)


def as_vector(data, exact=None, name="vector"):
    if exact is None:
        exact = _infer_exact(data)
    return _coerce(data, exact, 1, name)


def _pair(F, G):
    exact = is_exact(F) or is_exact(G)
    return as_matrix(F, exact, "F"), as_matrix(G, exact, "G"), exact


def sgn(M):
    """0/1 integer matrix marking the positive entries of ``M``."""
    return (np.asarray(M) > 0).astype(int)


def max_times_product(F, G):
    """Max-times matrix product: ``out[i, j] = max_k F[i, k] * G[k, j]``.

    Raises
    ------
    ValueError
        On a dimension mismatch or a negative entry.
    """
    F, G, exact = _pair(F, G)
    m, n = F.shape
    if G.shape[0] != n:
        raise ValueError(f"dimension mismatch: {F.shape} and {G.shape}")
    p = G.shape[1]
    if not exact and m * n * p <= 1 << 21:
        if n == 0:
            return zeros((m, p))
        return (F[:, :, None] * G[None, :, :]).max(axis=1)
    out = zeros((m, p), exact)
    for k in range(n):
        col, row = F[:, k], G[k, :]
        if exact and not any(col) or not exact and not col.any():
            continue
        np.maximum(out, np.multiply.outer(col, row), out=out)
    return out


def max_times_power(A, n):
    """``n``-th max-times power of a square matrix; the 0-th power is the identity."""
    A = as_matrix(A, is_exact(A) or None, "A")
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if int(n) != n or n < 0:
        raise ValueError("power must be a non-negative integer")
    out = identity(A.shape[0], is_exact(A))
    for _ in range(int(n)):
        out = max_times_product(out, A)
    return out


def elementwise_max(F, G):
    """Componentwise maximum of two matrices of identical shape."""
    F, G, _ = _pair(F, G)
    if F.shape != G.shape:
        raise ValueError(f"dimension mismatch: {F.shape} and {G.shape}")
    return np.maximum(F, G)


def to_log(M):
    """Entrywise natural log of a float matrix; zeros map to ``-inf``."""
    M = np.asarray(M, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(M)


def from_log(L):
    return np.exp(np.asarray(L, dtype=float))


def max_plus_product(F, G):
    """Max-plus product of log-domain matrices (``-inf`` is the zero).

    ``from_log(max_plus_product(to_log(F), to_log(G)))`` equals
    ``max_times_product(F, G)`` but stays representable when long chains of
    sub-unit weights would underflow.
    """
    F = np.asarray(F, dtype=float)
    G = np.asarray(G, dtype=float)
    if F.ndim != 2 or G.ndim != 2 or F.shape[1] != G.shape[0]:
        raise ValueError(f"dimension mismatch: {F.shape} and {G.shape}")
    if np.isnan(F).any() or np.isnan(G).any():
        raise ValueError("log-domain matrices must not contain NaN")
    m, p = F.shape[0], G.shape[1]
    out = np.full((m, p), -np.inf)
    for k in range(F.shape[1]):
        np.maximum(out, np.add.outer(F[:, k], G[k, :]), out=out)
    return out


def matrices_close(F, G, tol=DEFAULT_TOLERANCE):
    """Entrywise equality of two matrices under ``tol`` (exact for exact operands)."""
    F, G = np.asarray(F), np.asarray(G)
    if F.shape != G.shape:
        return False
    return all(tol.close(a, b) for a, b in zip(F.ravel(), G.ravel()))


def format_number(x):
    """Text form that round-trips: ``"p/q"`` for rationals, shortest repr for floats."""
    if _is_exact_scalar(x):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def matrix_to_csv(M):
    """CSV text, one matrix row per line."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(M):
        writer.writerow([format_number(x) for x in row])
    return buf.getvalue()


def matrix_from_csv(text, exact=False):
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValueError("empty matrix")
    if len({len(r) for r in rows}) != 1:
        raise ValueError("ragged CSV matrix")
    return as_matrix([[c.strip() for c in r] for r in rows], exact=exact)


def matrix_to_json(M):
    """Nested lists; exact entries become ``"p/q"`` strings."""
    M = np.asarray(M)
    if is_exact(M):
        return [[format_number(x) for x in row] for row in M]
    return [[float(x) for x in row] for row in M]


def matrix_from_json(obj, exact=False):
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ValueError("matrix JSON must be a non-empty list of rows")
    if len({len(r) for r in obj}) != 1:
        raise ValueError("ragged JSON matrix")
    return as_matrix(obj, exact=exact)
