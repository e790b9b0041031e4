"""Pure-Python flow kernel; mirrors ``_flowcore.pyx`` line for line.

Integrates the real-time flow of a holomorphic vector field on C^2 with
the Dormand-Prince 5(4) pair, stopping on exit from the polydisc
{|x| <= box_a, |y| <= box_b}. Exit points are located by bisection on a
single re-taken step from the last accepted state.

Field kinds: 0 linear diagonal, 1 diagonal with polynomial perturbation
(``lam1 x (1 + P1) d/dx + lam2 y (1 + P2) d/dy``), 2 saddle-node
``x^2 d/dx + y d/dy``.
"""
import math

DONE, EXIT_X, EXIT_Y, UNDERFLOW, MAX_STEPS = 0, 1, 2, 3, 4

_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40


def _ipow(z, k):
    # sequential products, as in the compiled kernel (``**`` rounds differently)
    r = 1 + 0j
    for _ in range(k):
        r = r * z
    return r


def _poly(terms, x, y):
    s = 0j
    for i, j, c in terms:
        s = s + c * _ipow(x, i) * _ipow(y, j)
    return s


def _make_field(kind, lam1, lam2, terms1, terms2):
    if kind == 2:
        def f(x, y):
            return x * x, y
    elif terms1 or terms2:
        def f(x, y):
            return lam1 * x * (1 + _poly(terms1, x, y)), lam2 * y * (1 + _poly(terms2, x, y))
    else:
        def f(x, y):
            return lam1 * x, lam2 * y
    return f


def _step(f, x, y, h):
    k1x, k1y = f(x, y)
    k2x, k2y = f(x + h * _A21 * k1x, y + h * _A21 * k1y)
    k3x, k3y = f(x + h * (_A31 * k1x + _A32 * k2x), y + h * (_A31 * k1y + _A32 * k2y))
    k4x, k4y = f(x + h * (_A41 * k1x + _A42 * k2x + _A43 * k3x),
                 y + h * (_A41 * k1y + _A42 * k2y + _A43 * k3y))
    k5x, k5y = f(x + h * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x),
                 y + h * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y))
    k6x, k6y = f(x + h * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x),
                 y + h * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y + _A65 * k5y))
    xn = x + h * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
    yn = y + h * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y + _B6 * k6y)
    k7x, k7y = f(xn, yn)
    ex = h * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
    ey = h * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y + _E6 * k6y + _E7 * k7y)
    return xn, yn, ex, ey


def _box_excess(x, y, box_a, box_b):
    return max(abs(x) / box_a, abs(y) / box_b) - 1.0


def integrate(kind, lam1, lam2, pows1, coefs1, pows2, coefs2, x0, y0,
              t0, t1, rtol, atol, box_a, box_b, h0, max_steps):
    terms1 = [(int(p[0]), int(p[1]), complex(c)) for p, c in zip(pows1, coefs1)]
    terms2 = [(int(p[0]), int(p[1]), complex(c)) for p, c in zip(pows2, coefs2)]
    f = _make_field(kind, complex(lam1), complex(lam2), terms1, terms2)
    x, y, t = complex(x0), complex(y0), float(t0)
    ts, xs, ys = [t], [x], [y]
    span = t1 - t0
    if span == 0:
        return ts, xs, ys, DONE, 0
    direction = 1.0 if span > 0 else -1.0
    if h0 > 0:
        h = min(h0, abs(span))
    else:
        fx, fy = f(x, y)
        # abs(complex) is libm hypot, like the compiled kernel; math.hypot rounds differently
        d0 = abs(complex(abs(x), abs(y)))
        d1 = abs(complex(abs(fx), abs(fy)))
        h = 0.01 * d0 / d1 if d0 > 1e-5 and d1 > 1e-5 else 1e-6
        h = min(h, abs(span))
    h *= direction
    rejected = 0
    steps = 0
    while True:
        remaining = t1 - t
        if remaining * direction <= 0:
            return ts, xs, ys, DONE, rejected
        if steps >= max_steps:
            return ts, xs, ys, MAX_STEPS, rejected
        last = abs(h) >= abs(remaining)
        if last:
            h = remaining
        if abs(h) < 1e-14 * max(1.0, abs(t)):
            return ts, xs, ys, UNDERFLOW, rejected
        xn, yn, ex, ey = _step(f, x, y, h)
        steps += 1
        sx = atol + rtol * max(abs(x), abs(xn))
        sy = atol + rtol * max(abs(y), abs(yn))
        err = math.sqrt(0.5 * ((abs(ex) / sx) ** 2 + (abs(ey) / sy) ** 2))
        if not math.isfinite(err):
            h *= 0.2
            rejected += 1
            continue
        if err > 1.0:
            h *= max(0.2, 0.9 * err ** -0.2)
            rejected += 1
            continue
        if _box_excess(xn, yn, box_a, box_b) > 0:
            lo, hi = 0.0, h
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if mid == lo or mid == hi:
                    break
                xm, ym, _, _ = _step(f, x, y, mid)
                if _box_excess(xm, ym, box_a, box_b) > 0:
                    hi = mid
                else:
                    lo = mid
            xe, ye, _, _ = _step(f, x, y, lo)
            if lo != 0:
                ts.append(t + lo)
                xs.append(xe)
                ys.append(ye)
            status = EXIT_X if abs(xe) / box_a >= abs(ye) / box_b else EXIT_Y
            return ts, xs, ys, status, rejected
        t = t1 if last else t + h
        x, y = xn, yn
        ts.append(t)
        xs.append(x)
        ys.append(y)
        fac = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h *= fac
