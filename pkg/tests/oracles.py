"""Independent brute-force oracles used to freeze expected test values.

Everything here is deliberately naive and shares no code path with the
package: token-level string rewriting, cofactor-expansion determinants,
set-based factor counting.
"""

from fractions import Fraction


def naive_apply(rules: dict[str, list[str]], word: list[str]) -> list[str]:
    out: list[str] = []
    for tok in word:
        out.extend(rules[tok])
    return out


def naive_iterate(rules: dict[str, list[str]], seed: str, n: int) -> list[str]:
    """Fixed-point prefix by full rewriting until the prefix is long enough."""
    word = [seed]
    for _ in range(200):
        if len(word) >= n:
            return word[:n]
        nxt = naive_apply(rules, word)
        if nxt == word:
            raise AssertionError("oracle: word stopped growing")
        word = nxt
    raise AssertionError("oracle: prefix did not reach the requested length")


def rules_of(spec) -> dict[str, list[str]]:
    a = spec.morphism.alphabet
    return {
        tok: [a.letters[c] for c in img] for tok, img in zip(a.letters, spec.morphism.images)
    }


# --- polynomials as ascending integer coefficient lists ---------------------

def _poly_add(p, q):
    out = [0] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _poly_neg(p):
    return [-c for c in p]


def _det_poly(mat):
    """Determinant of a matrix of polynomials, by cofactor expansion."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = [0]
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = _poly_mul(mat[0][j], _det_poly(minor))
        total = _poly_add(total, term if j % 2 == 0 else _poly_neg(term))
    return total


def naive_charpoly(matrix) -> list[int]:
    """det(xI - M), returned with the leading coefficient first."""
    n = len(matrix)
    entries = [
        [([-matrix[i][j], 1] if i == j else [-matrix[i][j]]) for j in range(n)]
        for i in range(n)
    ]
    asc = _det_poly(entries)
    return list(reversed(asc))


def naive_bool_power_positive(matrix, exponent: int) -> bool:
    n = len(matrix)
    a = [[matrix[i][j] > 0 for j in range(n)] for i in range(n)]
    acc = [[i == j for j in range(n)] for i in range(n)]
    for _ in range(exponent):
        acc = [
            [any(acc[i][t] and a[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)
        ]
    return all(all(row) for row in acc)


def naive_factor_count(word, n: int) -> int:
    return len({tuple(word[i : i + n]) for i in range(len(word) - n + 1)})


def bisect_root(poly_desc, lo: float, hi: float, steps: int = 80) -> float:
    """Largest-root isolation helper: plain float bisection of a sign change."""

    def ev(x):
        acc = 0.0
        for c in poly_desc:
            acc = acc * x + c
        return acc

    flo = ev(lo)
    assert flo * ev(hi) <= 0, "oracle: no sign change in the bisection interval"
    for _ in range(steps):
        mid = (lo + hi) / 2
        if flo * ev(mid) <= 0:
            hi = mid
        else:
            lo = mid
            flo = ev(lo)
    return (lo + hi) / 2


def golden_ratio_frequencies() -> tuple[Fraction, Fraction]:
    """High-precision rational approximations of (1/phi, 1 - 1/phi)."""
    # 1/phi = (sqrt(5) - 1) / 2; continued-fraction convergent F(39)/F(40)
    a, b = 1, 1
    for _ in range(38):
        a, b = b, a + b
    return Fraction(a, b), 1 - Fraction(a, b)
