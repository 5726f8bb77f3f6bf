"""Exact integer and rational linear algebra for incidence matrices.

Everything here is decided exactly: characteristic polynomials come from the
Faddeev-LeVerrier recursion over big integers, eigenvalue questions reduce
to integer root tests plus Sturm-sequence root isolation over rationals,
and spectral-radius brackets use directed dyadic rounding so no verdict
ever depends on floating point.

Convention: for a morphism s, ``incidence(s).matrix[i][j]`` counts the
occurrences of letter i in the image of letter j, so columns are indexed by
source letters and column sums equal the image lengths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .words import Morphism, parikh_vector

Matrix = tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# matrices

def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)) for i in range(n)
    )


def mat_pow(m, k: int):
    n = len(m)
    result = identity_matrix(n)
    base = m
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def row_times_matrix(row, m):
    return tuple(sum(row[i] * m[i][j] for i in range(len(row))) for j in range(len(m[0])))


def _check_nonnegative(m) -> None:
    if any(entry < 0 for row in m for entry in row):
        raise ValueError("matrix must be nonnegative")


@dataclass(frozen=True)
class IncidenceData:
    """Incidence matrix and length vector of a morphism."""

    matrix: Matrix
    length_vector: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.length_vector)

    def __post_init__(self):
        for j, length in enumerate(self.length_vector):
            if sum(row[j] for row in self.matrix) != length:
                raise ValueError("column sums must equal the length vector")

    def to_json(self) -> dict:
        # row-major, entries as decimal strings so arbitrary sizes survive
        return {
            "matrix": [[str(entry) for entry in row] for row in self.matrix],
            "length_vector": [str(length) for length in self.length_vector],
        }


def incidence(m: Morphism) -> IncidenceData:
    """Column j of the matrix is the Parikh vector of the image of letter j."""
    r = len(m.alphabet)
    cols = [parikh_vector(img, r) for img in m.images]
    matrix = tuple(tuple(cols[j][i] for j in range(r)) for i in range(r))
    return IncidenceData(matrix, m.lengths)


# ---------------------------------------------------------------------------
# characteristic polynomial and integer roots

@dataclass(frozen=True)
class IntPolynomial:
    """A monic polynomial with integer coefficients, leading term first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != 1:
            raise ValueError("polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def __str__(self):
        parts = []
        n = self.degree
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            power = n - i
            mag = abs(c)
            if power == 0:
                term = str(mag)
            elif power == 1:
                term = "x" if mag == 1 else f"{mag}*x"
            else:
                term = f"x^{power}" if mag == 1 else f"{mag}*x^{power}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts) if parts else "0"


def char_poly(matrix) -> IntPolynomial:
    """det(xI - M) by the Faddeev-LeVerrier recursion, exactly over Z."""
    n = len(matrix)
    coeffs = [1]
    aux = matrix
    for k in range(1, n + 1):
        trace = sum(aux[i][i] for i in range(n))
        if trace % k:
            raise InternalArithmeticError("Faddeev-LeVerrier division failed")
        c = -(trace // k)
        coeffs.append(c)
        if k < n:
            shifted = tuple(
                tuple(aux[i][j] + (c if i == j else 0) for j in range(n)) for i in range(n)
            )
            aux = mat_mul(matrix, shifted)
    return IntPolynomial(tuple(coeffs))


class InternalArithmeticError(AssertionError):
    pass


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _deflate(coeffs: tuple[int, ...], root: int) -> tuple[int, ...]:
    # synthetic division by (x - root); remainder must be zero
    out = [coeffs[0]]
    for c in coeffs[1:]:
        out.append(c + root * out[-1])
    if out[-1] != 0:
        raise ValueError("not a root")
    return tuple(out[:-1])


def integer_roots(p: IntPolynomial) -> tuple[tuple[int, int], ...]:
    """All integer roots with multiplicities.

    Rational roots of a monic integer polynomial are integers, so this is
    the full list of rational eigenvalues when ``p`` is a characteristic
    polynomial.  Candidates are the divisors of the constant term, plus 0
    when the constant term vanishes.
    """
    coeffs = p.coeffs
    found: dict[int, int] = {}
    zero_mult = 0
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
        zero_mult += 1
    if zero_mult:
        found[0] = zero_mult
    if len(coeffs) > 1:
        for d in _divisors(coeffs[-1]):
            for cand in (d, -d):
                mult = 0
                work = coeffs
                while len(work) > 1 and IntPolynomial(work)(cand) == 0:
                    work = _deflate(work, cand)
                    mult += 1
                if mult:
                    found[cand] = mult
    return tuple(sorted(found.items()))


# ---------------------------------------------------------------------------
# left eigenvector check (the heart of the automaticity criterion)

def left_eigencheck(vector, matrix) -> Fraction | None:
    """Return the rational lambda with ``vector @ matrix == lambda * vector``.

    The vector must be strictly positive; for a nonnegative matrix any such
    eigenvalue is automatically the spectral radius, which is what makes
    this check decisive.  Returns None when no exact eigenvalue exists.
    """
    if len(vector) != len(matrix):
        raise ValueError("dimension mismatch")
    if any(v <= 0 for v in vector):
        raise ValueError("left eigenvector check requires a positive vector")
    product = row_times_matrix(vector, matrix)
    lam = Fraction(product[0], vector[0])
    for vm, v in zip(product, vector):
        if Fraction(vm, v) != lam:
            return None
    return lam


# ---------------------------------------------------------------------------
# primitivity

def is_primitive(matrix) -> bool:
    """Wielandt test: M is primitive iff M^(r^2 - 2r + 2) is positive.

    Entries are saturated to booleans after every multiplication, so only
    positivity propagates and nothing can overflow.
    """
    _check_nonnegative(matrix)
    r = len(matrix)
    a = tuple(tuple(entry > 0 for entry in row) for row in matrix)
    exponent = r * r - 2 * r + 2

    def bool_mul(x, y):
        return tuple(
            tuple(any(x[i][t] and y[t][j] for t in range(r)) for j in range(r)) for i in range(r)
        )

    result = tuple(tuple(i == j for j in range(r)) for i in range(r))
    base, k = a, exponent
    while k:
        if k & 1:
            result = bool_mul(result, base)
        base = bool_mul(base, base)
        k >>= 1
    return all(all(row) for row in result)


# ---------------------------------------------------------------------------
# spectral radius bracketing

@dataclass(frozen=True)
class RadiusBracket:
    lo: Fraction
    hi: Fraction
    loose: bool = False

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, value) -> bool:
        return self.lo <= value <= self.hi


def _strongly_connected_components(matrix) -> list[list[int]]:
    # Reachability closure; fine for the small dimensions seen here.
    r = len(matrix)
    reach = [[matrix[i][j] > 0 or i == j for j in range(r)] for i in range(r)]
    for k in range(r):
        for i in range(r):
            if reach[i][k]:
                row_i, row_k = reach[i], reach[k]
                for j in range(r):
                    if row_k[j]:
                        row_i[j] = True
    seen: set[int] = set()
    comps: list[list[int]] = []
    for i in range(r):
        if i in seen:
            continue
        comp = [j for j in range(r) if reach[i][j] and reach[j][i]]
        seen.update(comp)
        comps.append(comp)
    return comps


_PREC = 96  # working precision (bits) for scaled powers and root extraction


def _sqrt_down(f: Fraction) -> Fraction:
    scaled = (f.numerator << (2 * _PREC)) // f.denominator
    return Fraction(math.isqrt(scaled), 1 << _PREC)


def _sqrt_up(f: Fraction) -> Fraction:
    num = f.numerator << (2 * _PREC)
    scaled = -((-num) // f.denominator)  # ceil division
    root = math.isqrt(scaled)
    if root * root < scaled:
        root += 1
    return Fraction(root, 1 << _PREC)


def _iterated_sqrt_scaled(mantissa: Fraction, exponent: int, times: int, down: bool) -> Fraction:
    """(mantissa * 2**exponent) ** (1 / 2**times), rounded in one direction.

    The exponent is halved symbolically at every step so the huge power of
    two accumulated by repeated squaring is never materialised.
    """
    for _ in range(times):
        if exponent % 2:
            mantissa *= 2
            exponent -= 1
        mantissa = _sqrt_down(mantissa) if down else _sqrt_up(mantissa)
        exponent //= 2
    return mantissa * Fraction(2) ** exponent


def _shift_floor(m, s):
    return tuple(tuple(entry >> s for entry in row) for row in m)


def _shift_ceil(m, s):
    add = (1 << s) - 1
    return tuple(tuple((entry + add) >> s for entry in row) for row in m)


def _irreducible_bracket(block, tol: Fraction, max_squarings: int = 64):
    """Bracket the spectral radius of one irreducible diagonal block.

    Row sums of M^(2^k) pinch the radius from both sides; powers are kept as
    integer matrices with a tracked power-of-two scale, rounded down for the
    lower bound matrix and up for the upper one, so both bounds stay valid.
    """
    n = len(block)
    if n == 1:
        v = Fraction(block[0][0])
        return v, v, False
    p_lo = p_hi = block
    e_lo = e_hi = 0
    squarings = 0
    best = None
    while True:
        lo = _iterated_sqrt_scaled(
            Fraction(min(sum(row) for row in p_lo)), e_lo, squarings, down=True
        )
        hi = _iterated_sqrt_scaled(
            Fraction(max(sum(row) for row in p_hi)), e_hi, squarings, down=False
        )
        best = (lo, hi)
        if hi - lo <= tol:
            return lo, hi, False
        if squarings >= max_squarings:
            return best[0], best[1], True
        p_lo, p_hi = mat_mul(p_lo, p_lo), mat_mul(p_hi, p_hi)
        e_lo, e_hi = 2 * e_lo, 2 * e_hi
        top = max(max(row) for row in p_hi)
        shift = max(0, top.bit_length() - _PREC)
        if shift:
            p_lo, e_lo = _shift_floor(p_lo, shift), e_lo + shift
            p_hi, e_hi = _shift_ceil(p_hi, shift), e_hi + shift
        squarings += 1


def radius_bracket(matrix, tol) -> RadiusBracket:
    """A rational interval of width <= tol containing the spectral radius.

    The support digraph is split into strongly connected components; the
    radius is the maximum over the diagonal blocks, each of which is
    irreducible and therefore pinched by row sums of its repeated squares.
    """
    _check_nonnegative(matrix)
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    lo = hi = Fraction(0)
    loose = False
    for comp in _strongly_connected_components(matrix):
        block = tuple(tuple(matrix[i][j] for j in comp) for i in comp)
        b_lo, b_hi, b_loose = _irreducible_bracket(block, tol)
        lo, hi = max(lo, b_lo), max(hi, b_hi)
        loose = loose or b_loose
    return RadiusBracket(max(lo, Fraction(0)), hi, loose)


# ---------------------------------------------------------------------------
# Sturm sequences (rational coefficients, leading term first)

def _fp_normalize(p):
    i = 0
    while i < len(p) and p[i] == 0:
        i += 1
    return p[i:]


def _fp_eval(p, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in p:
        acc = acc * x + c
    return acc


def _fp_derivative(p):
    n = len(p) - 1
    return _fp_normalize([c * (n - i) for i, c in enumerate(p[:-1])])


def _fp_divmod(num, den):
    num = list(num)
    q = [Fraction(0)] * max(0, len(num) - len(den) + 1)
    for i in range(len(q)):
        factor = num[i] / den[0]
        q[i] = factor
        for j, d in enumerate(den):
            num[i + j] -= factor * d
    return q, _fp_normalize(num)


def _sturm_chain(p):
    chain = [_fp_normalize(p)]
    d = _fp_derivative(chain[0])
    if d:
        chain.append(d)
    while len(chain[-1]) > 1:
        _, rem = _fp_divmod(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    return chain


def _variations(chain, x: Fraction) -> int:
    signs = []
    for p in chain:
        v = _fp_eval(p, x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_real_roots(p, a: Fraction, b: Fraction) -> int:
    """Distinct real roots of p in the half-open interval (a, b]."""
    chain = _sturm_chain(p)
    return _variations(chain, a) - _variations(chain, b)


def _fp_gcd(a, b):
    a, b = _fp_normalize(list(a)), _fp_normalize(list(b))
    while b:
        _, r = _fp_divmod(a, b)
        a, b = b, r
    return [c / a[0] for c in a] if a else a


def _squarefree(p):
    d = _fp_derivative(p)
    if not d:
        return p
    g = _fp_gcd(p, d)
    if len(g) <= 1:
        return p
    q, rem = _fp_divmod(p, g)
    if rem:
        raise InternalArithmeticError("square-free division failed")
    return _fp_normalize(q)


# ---------------------------------------------------------------------------
# spectral report and Perron frequencies

@dataclass(frozen=True)
class SpectralReport:
    char_poly: IntPolynomial
    integer_roots: tuple[tuple[int, int], ...]
    bracket: RadiusBracket
    dominant_is_integer: bool
    dominant_value: int | None

    def to_json(self) -> dict:
        return {
            "char_poly": str(self.char_poly),
            "coefficients": [str(c) for c in self.char_poly.coeffs],
            "integer_roots": [[root, mult] for root, mult in self.integer_roots],
            "radius_bracket": {
                "lo": str(self.bracket.lo),
                "hi": str(self.bracket.hi),
                "loose": self.bracket.loose,
            },
            "dominant_is_integer": self.dominant_is_integer,
            "dominant_value": self.dominant_value,
        }


def spectral_report(matrix, tol=Fraction(1, 10**6)) -> SpectralReport:
    """Decide exactly whether the spectral radius is an integer.

    For a nonnegative matrix the radius is itself an eigenvalue, hence the
    largest real root of the characteristic polynomial.  It is an integer
    exactly when the largest integer root n satisfies p(n) = 0 and the
    square-free part of p has no real root beyond n; the latter is a Sturm
    count on (n, max-row-sum + 1], which is exact rational arithmetic.
    """
    _check_nonnegative(matrix)
    p = char_poly(matrix)
    roots = integer_roots(p)
    bracket = radius_bracket(matrix, tol)
    if not roots:
        return SpectralReport(p, roots, bracket, False, None)
    candidate = max(root for root, _ in roots)
    sf = _squarefree([Fraction(c) for c in p.coeffs])
    deflated, rem = _fp_divmod(sf, [Fraction(1), Fraction(-candidate)])
    if rem:
        raise InternalArithmeticError("square-free part lost an integer root")
    upper = Fraction(max(sum(row) for row in matrix) + 1)
    beyond = _count_real_roots(deflated, Fraction(candidate), upper) if len(deflated) > 1 else 0
    if beyond == 0:
        return SpectralReport(p, roots, bracket, True, candidate)
    return SpectralReport(p, roots, bracket, False, None)


def perron_frequencies(matrix) -> tuple[Fraction, ...] | None:
    """Exact normalized right Perron eigenvector, for primitive matrices
    whose dominant eigenvalue is an integer; None otherwise."""
    _check_nonnegative(matrix)
    if not is_primitive(matrix):
        return None
    report = spectral_report(matrix)
    if not report.dominant_is_integer:
        return None
    q = report.dominant_value
    n = len(matrix)
    rows = [[Fraction(matrix[i][j] - (q if i == j else 0)) for j in range(n)] for i in range(n)]
    # rational row echelon; the nullspace of M - qI is one dimensional
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(n):
        pivot = next((r for r in range(row, n) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[row], rows[pivot] = rows[pivot], rows[row]
        lead = rows[row][col]
        rows[row] = [c / lead for c in rows[row]]
        for r in range(n):
            if r != row and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[row])]
        pivots.append((row, col))
        row += 1
    free_cols = [c for c in range(n) if c not in {col for _, col in pivots}]
    if len(free_cols) != 1:
        raise InternalArithmeticError("Perron eigenspace is not one dimensional")
    free = free_cols[0]
    v = [Fraction(0)] * n
    v[free] = Fraction(1)
    for r, col in pivots:
        v[col] = -rows[r][free]
    total = sum(v)
    if total == 0:
        raise InternalArithmeticError("degenerate Perron eigenvector")
    v = [x / total for x in v]
    if any(x <= 0 for x in v):
        raise InternalArithmeticError("Perron eigenvector is not positive")
    return tuple(v)
