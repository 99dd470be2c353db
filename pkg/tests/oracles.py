"""Reference computations that share no code with the package's solver paths."""

from fractions import Fraction


def gauss_solve(a, b):
    """Solve a square system by Gaussian elimination with partial pivoting (pure Python)."""
    n = len(a)
    m = [list(map(float, row)) + [float(rhs)] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(m[r][col]))
        if m[piv][col] == 0.0:
            raise ZeroDivisionError("singular system")
        m[col], m[piv] = m[piv], m[col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            if f:
                for c in range(col, n + 1):
                    m[r][c] -= f * m[col][c]
    x = [0.0] * n
    for i in range(n - 1, -1, -1):
        s = m[i][n] - sum(m[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / m[i][i]
    return x


def normal_equations_fit(features, y):
    """``[intercept, c_1..c_p]`` from ``X^T X a = X^T y`` with an intercept column."""
    rows = [[1.0, *map(float, r)] for r in features]
    k = len(rows[0])
    xtx = [[sum(r[i] * r[j] for r in rows) for j in range(k)] for i in range(k)]
    xty = [sum(r[i] * t for r, t in zip(rows, y)) for i in range(k)]
    return gauss_solve(xtx, xty)


def closed_form_line(x, y):
    """``(b1, b2)`` with ``b2 = cov(x, y) / var(x)`` and ``b1 = mean(y) - b2 mean(x)``."""
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((xi - mx) * (yi - my) for xi, yi in zip(x, y))
    sxx = sum((xi - mx) ** 2 for xi in x)
    b2 = sxy / sxx
    return my - b2 * mx, b2


# Hand arithmetic over the printed Table II pairs, carried out in exact rationals.
TABLE2_ACTUAL = ["26.00", "25.00", "30.00", "27.00", "25.00", "30.00", "29.00", "30.00", "26.00", "26.00"]
TABLE2_PREDICTED = ["27.41", "26.54", "27.81", "27.46", "27.81", "26.99", "27.86", "27.59", "28.03", "27.53"]


def table2_mape_exact() -> Fraction:
    terms = [abs(Fraction(p) - Fraction(a)) / Fraction(a) for a, p in zip(TABLE2_ACTUAL, TABLE2_PREDICTED)]
    return sum(terms) * 100 / len(terms)


def table2_max_err_exact() -> Fraction:
    return max(abs(Fraction(p) - Fraction(a)) for a, p in zip(TABLE2_ACTUAL, TABLE2_PREDICTED))
