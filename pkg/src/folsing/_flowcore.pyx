# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled flow kernel. Same algorithm and signature as ``_flowcore_py``."""
from libc.math cimport sqrt, pow, hypot, isfinite

DEF MAXTERMS = 64

cdef int DONE = 0, EXIT_X = 1, EXIT_Y = 2, UNDERFLOW = 3, MAX_STEPS = 4

cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40


cdef struct Field:
    int kind
    double complex lam1
    double complex lam2
    int n1
    int n2
    int p1i[MAXTERMS]
    int p1j[MAXTERMS]
    double complex c1[MAXTERMS]
    int p2i[MAXTERMS]
    int p2j[MAXTERMS]
    double complex c2[MAXTERMS]


cdef inline double cabs_(double complex z) nogil:
    return hypot(z.real, z.imag)


cdef inline double complex ipow(double complex z, int k) nogil:
    cdef double complex r = 1.0
    cdef int i
    for i in range(k):
        r = r * z
    return r


cdef inline void field(Field* F, double complex x, double complex y,
                       double complex* fx, double complex* fy) nogil:
    cdef double complex s1 = 0.0, s2 = 0.0
    cdef int k
    if F.kind == 2:
        fx[0] = x * x
        fy[0] = y
        return
    if F.n1 == 0 and F.n2 == 0:
        fx[0] = F.lam1 * x
        fy[0] = F.lam2 * y
        return
    for k in range(F.n1):
        s1 = s1 + F.c1[k] * ipow(x, F.p1i[k]) * ipow(y, F.p1j[k])
    for k in range(F.n2):
        s2 = s2 + F.c2[k] * ipow(x, F.p2i[k]) * ipow(y, F.p2j[k])
    fx[0] = F.lam1 * x * (1.0 + s1)
    fy[0] = F.lam2 * y * (1.0 + s2)


cdef void dp_step(Field* F, double complex x, double complex y, double h,
                  double complex* xn, double complex* yn,
                  double complex* ex, double complex* ey) nogil:
    cdef double complex k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y, k5x, k5y, k6x, k6y, k7x, k7y
    field(F, x, y, &k1x, &k1y)
    field(F, x + h * A21 * k1x, y + h * A21 * k1y, &k2x, &k2y)
    field(F, x + h * (A31 * k1x + A32 * k2x), y + h * (A31 * k1y + A32 * k2y), &k3x, &k3y)
    field(F, x + h * (A41 * k1x + A42 * k2x + A43 * k3x),
          y + h * (A41 * k1y + A42 * k2y + A43 * k3y), &k4x, &k4y)
    field(F, x + h * (A51 * k1x + A52 * k2x + A53 * k3x + A54 * k4x),
          y + h * (A51 * k1y + A52 * k2y + A53 * k3y + A54 * k4y), &k5x, &k5y)
    field(F, x + h * (A61 * k1x + A62 * k2x + A63 * k3x + A64 * k4x + A65 * k5x),
          y + h * (A61 * k1y + A62 * k2y + A63 * k3y + A64 * k4y + A65 * k5y), &k6x, &k6y)
    xn[0] = x + h * (B1 * k1x + B3 * k3x + B4 * k4x + B5 * k5x + B6 * k6x)
    yn[0] = y + h * (B1 * k1y + B3 * k3y + B4 * k4y + B5 * k5y + B6 * k6y)
    field(F, xn[0], yn[0], &k7x, &k7y)
    ex[0] = h * (E1 * k1x + E3 * k3x + E4 * k4x + E5 * k5x + E6 * k6x + E7 * k7x)
    ey[0] = h * (E1 * k1y + E3 * k3y + E4 * k4y + E5 * k5y + E6 * k6y + E7 * k7y)


cdef inline double box_excess(double complex x, double complex y, double a, double b) nogil:
    cdef double rx = cabs_(x) / a, ry = cabs_(y) / b
    return (rx if rx > ry else ry) - 1.0


def integrate(int kind, lam1, lam2, pows1, coefs1, pows2, coefs2, x0, y0,
              double t0, double t1, double rtol, double atol,
              double box_a, double box_b, double h0, long max_steps):
    cdef Field F
    cdef int k
    F.kind = kind
    F.lam1 = complex(lam1)
    F.lam2 = complex(lam2)
    F.n1 = len(coefs1)
    F.n2 = len(coefs2)
    if F.n1 > MAXTERMS or F.n2 > MAXTERMS:
        raise ValueError("at most %d perturbation terms per component" % MAXTERMS)
    for k in range(F.n1):
        F.p1i[k] = int(pows1[k][0])
        F.p1j[k] = int(pows1[k][1])
        F.c1[k] = complex(coefs1[k])
    for k in range(F.n2):
        F.p2i[k] = int(pows2[k][0])
        F.p2j[k] = int(pows2[k][1])
        F.c2[k] = complex(coefs2[k])

    cdef double complex x = complex(x0), y = complex(y0)
    cdef double complex xn, yn, ex, ey, fx, fy, xm, ym
    cdef double t = t0, h, span = t1 - t0, direction, remaining
    cdef double d0, d1, sx, sy, err, fac, lo, hi, mid
    cdef long steps = 0, rejected = 0
    cdef bint last
    cdef int status, it
    ts = [t]
    xs = [complex(x)]
    ys = [complex(y)]
    if span == 0:
        return ts, xs, ys, DONE, 0
    direction = 1.0 if span > 0 else -1.0
    if h0 > 0:
        h = h0 if h0 < abs(span) else abs(span)
    else:
        field(&F, x, y, &fx, &fy)
        d0 = hypot(cabs_(x), cabs_(y))
        d1 = hypot(cabs_(fx), cabs_(fy))
        h = 0.01 * d0 / d1 if (d0 > 1e-5 and d1 > 1e-5) else 1e-6
        if h > abs(span):
            h = abs(span)
    h *= direction
    while True:
        remaining = t1 - t
        if remaining * direction <= 0:
            return ts, xs, ys, DONE, rejected
        if steps >= max_steps:
            return ts, xs, ys, MAX_STEPS, rejected
        last = abs(h) >= abs(remaining)
        if last:
            h = remaining
        if abs(h) < 1e-14 * (abs(t) if abs(t) > 1.0 else 1.0):
            return ts, xs, ys, UNDERFLOW, rejected
        dp_step(&F, x, y, h, &xn, &yn, &ex, &ey)
        steps += 1
        sx = atol + rtol * (cabs_(x) if cabs_(x) > cabs_(xn) else cabs_(xn))
        sy = atol + rtol * (cabs_(y) if cabs_(y) > cabs_(yn) else cabs_(yn))
        err = sqrt(0.5 * ((cabs_(ex) / sx) ** 2 + (cabs_(ey) / sy) ** 2))
        if not isfinite(err):
            h *= 0.2
            rejected += 1
            continue
        if err > 1.0:
            fac = 0.9 * pow(err, -0.2)
            h *= fac if fac > 0.2 else 0.2
            rejected += 1
            continue
        if box_excess(xn, yn, box_a, box_b) > 0:
            lo = 0.0
            hi = h
            for it in range(200):
                mid = 0.5 * (lo + hi)
                if mid == lo or mid == hi:
                    break
                dp_step(&F, x, y, mid, &xm, &ym, &ex, &ey)
                if box_excess(xm, ym, box_a, box_b) > 0:
                    hi = mid
                else:
                    lo = mid
            dp_step(&F, x, y, lo, &xm, &ym, &ex, &ey)
            if lo != 0:
                ts.append(t + lo)
                xs.append(complex(xm))
                ys.append(complex(ym))
            status = EXIT_X if cabs_(xm) / box_a >= cabs_(ym) / box_b else EXIT_Y
            return ts, xs, ys, status, rejected
        t = t1 if last else t + h
        x = xn
        y = yn
        ts.append(t)
        xs.append(complex(x))
        ys.append(complex(y))
        if err == 0:
            fac = 5.0
        else:
            fac = 0.9 * pow(err, -0.2)
            fac = 5.0 if fac > 5.0 else (0.2 if fac < 0.2 else fac)
        h *= fac
