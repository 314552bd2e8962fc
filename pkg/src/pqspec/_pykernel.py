"""Pure-Python Dormand-Prince 5(4) integrator for the shooting ODE.

Twin of ``_kernel.pyx``: same algorithm, same operation order, so both
backends produce the same trajectory. The state is ``(u, w, Q)`` with
``w = |u'|^(p-2) u'`` and ``Q`` the running integral of ``x^(N-1) |u|^q``::

    u' = |w|^(1/(p-1)) sign(w)
    w' = -(N-1)/x * w - mu |u|^(q-2) u
    Q' = x^(N-1) |u|^q

``nm1 = N - 1`` is zero for the line.
"""
import math

import numpy as np

BACKEND = "python"

# Dormand-Prince 5(4) tableau
C2, C3, C4, C5 = 0.2, 0.3, 0.8, 8.0 / 9.0
A21 = 0.2
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                           49.0 / 176.0, -5103.0 / 18656.0)
A71, A73, A74, A75, A76 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
E1, E3, E4, E5, E6, E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                          -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)
D1, D3, D4, D5, D6, D7 = (-12715105075.0 / 11282082432.0, 87487479700.0 / 32700410799.0,
                          -10690763975.0 / 1880347072.0, 701980252875.0 / 199316789632.0,
                          -1453857185.0 / 822651844.0, 69997945.0 / 29380423.0)

SAFETY = 0.9
FAC_MIN = 0.2
FAC_MAX = 10.0


def _rhs(x, u, w, nm1, pexp, qm1, qexp, mu):
    if w > 0.0:
        du = w ** pexp
    elif w < 0.0:
        du = -((-w) ** pexp)
    else:
        du = 0.0
    au = abs(u)
    if u > 0.0:
        src = au ** qm1
    elif u < 0.0:
        src = -(au ** qm1)
    else:
        src = 0.0
    if nm1 == 0:
        dw = -mu * src
        dq = au ** qexp
    else:
        dw = -(nm1 / x) * w - mu * src
        dq = x ** nm1 * au ** qexp
    return du, dw, dq


def integrate(nm1, p, q, mu, x0, u0, w0, q0, x_end, max_zeros, rtol, atol, h0, max_steps):
    """Integrate from ``x0`` until ``x_end`` or until ``max_zeros`` sign changes of u.

    ``max_zeros <= 0`` disables the zero stop. Returns ``(xs, ys, dense, nzeros, status)``
    where ``dense[i]`` holds the five interpolation coefficients (x 3 components)
    for step ``[xs[i], xs[i+1]]`` and ``status`` is 0 (reached x_end), 1 (zero
    count reached), -1 (step size underflow) or -2 (step budget exhausted).
    """
    pexp = 1.0 / (p - 1.0)
    qm1 = q - 1.0
    qexp = q
    x = x0
    y0, y1, y2 = u0, w0, q0
    xs = [x]
    ys = [(y0, y1, y2)]
    dense = []
    k1 = _rhs(x, y0, y1, nm1, pexp, qm1, qexp, mu)
    h = h0
    if h > x_end - x:
        h = x_end - x
    nzeros = 0
    last_sign = 0.0
    if y0 > 0.0:
        last_sign = 1.0
    elif y0 < 0.0:
        last_sign = -1.0
    nsteps = 0
    status = 0
    while x < x_end:
        if nsteps >= max_steps:
            status = -2
            break
        if h < 1e-15 * max(abs(x), 1.0):
            status = -1
            break
        last = False
        if x + h >= x_end:
            h = x_end - x
            last = True
        a1, b1, c1 = k1
        k2 = _rhs(x + C2 * h,
                  y0 + h * (A21 * a1),
                  y1 + h * (A21 * b1), nm1, pexp, qm1, qexp, mu)
        a2, b2, c2 = k2
        k3 = _rhs(x + C3 * h,
                  y0 + h * (A31 * a1 + A32 * a2),
                  y1 + h * (A31 * b1 + A32 * b2), nm1, pexp, qm1, qexp, mu)
        a3, b3, c3 = k3
        k4 = _rhs(x + C4 * h,
                  y0 + h * (A41 * a1 + A42 * a2 + A43 * a3),
                  y1 + h * (A41 * b1 + A42 * b2 + A43 * b3), nm1, pexp, qm1, qexp, mu)
        a4, b4, c4 = k4
        k5 = _rhs(x + C5 * h,
                  y0 + h * (A51 * a1 + A52 * a2 + A53 * a3 + A54 * a4),
                  y1 + h * (A51 * b1 + A52 * b2 + A53 * b3 + A54 * b4), nm1, pexp, qm1, qexp, mu)
        a5, b5, c5 = k5
        k6 = _rhs(x + h,
                  y0 + h * (A61 * a1 + A62 * a2 + A63 * a3 + A64 * a4 + A65 * a5),
                  y1 + h * (A61 * b1 + A62 * b2 + A63 * b3 + A64 * b4 + A65 * b5),
                  nm1, pexp, qm1, qexp, mu)
        a6, b6, c6 = k6
        n0 = y0 + h * (A71 * a1 + A73 * a3 + A74 * a4 + A75 * a5 + A76 * a6)
        n1 = y1 + h * (A71 * b1 + A73 * b3 + A74 * b4 + A75 * b5 + A76 * b6)
        n2 = y2 + h * (A71 * c1 + A73 * c3 + A74 * c4 + A75 * c5 + A76 * c6)
        k7 = _rhs(x + h, n0, n1, nm1, pexp, qm1, qexp, mu)
        a7, b7, c7 = k7
        e0 = h * (E1 * a1 + E3 * a3 + E4 * a4 + E5 * a5 + E6 * a6 + E7 * a7)
        e1 = h * (E1 * b1 + E3 * b3 + E4 * b4 + E5 * b5 + E6 * b6 + E7 * b7)
        e2 = h * (E1 * c1 + E3 * c3 + E4 * c4 + E5 * c5 + E6 * c6 + E7 * c7)
        s0 = atol + rtol * max(abs(y0), abs(n0))
        s1 = atol + rtol * max(abs(y1), abs(n1))
        s2 = atol + rtol * max(abs(y2), abs(n2))
        err = math.sqrt(((e0 / s0) ** 2 + (e1 / s1) ** 2 + (e2 / s2) ** 2) / 3.0)
        nsteps += 1
        if err <= 1.0:
            # accepted: build dense output coefficients
            r0 = (y0, y1, y2)
            r1 = (n0 - y0, n1 - y1, n2 - y2)
            r2 = (h * a1 - r1[0], h * b1 - r1[1], h * c1 - r1[2])
            r3 = (r1[0] - h * a7 - r2[0], r1[1] - h * b7 - r2[1], r1[2] - h * c7 - r2[2])
            r4 = (h * (D1 * a1 + D3 * a3 + D4 * a4 + D5 * a5 + D6 * a6 + D7 * a7),
                  h * (D1 * b1 + D3 * b3 + D4 * b4 + D5 * b5 + D6 * b6 + D7 * b7),
                  h * (D1 * c1 + D3 * c3 + D4 * c4 + D5 * c5 + D6 * c6 + D7 * c7))
            dense.append((r0, r1, r2, r3, r4))
            if last:
                x = x_end
            else:
                x = x + h
            y0, y1, y2 = n0, n1, n2
            xs.append(x)
            ys.append((y0, y1, y2))
            k1 = k7
            if y0 > 0.0:
                sgn = 1.0
            elif y0 < 0.0:
                sgn = -1.0
            else:
                sgn = 0.0
            if sgn != 0.0:
                if last_sign != 0.0 and sgn != last_sign:
                    nzeros += 1
                last_sign = sgn
            if max_zeros > 0 and nzeros >= max_zeros:
                status = 1
                break
            if err == 0.0:
                fac = FAC_MAX
            else:
                fac = SAFETY * err ** -0.2
                if fac > FAC_MAX:
                    fac = FAC_MAX
                elif fac < FAC_MIN:
                    fac = FAC_MIN
            h = h * fac
        else:
            fac = SAFETY * err ** -0.2
            if fac < FAC_MIN:
                fac = FAC_MIN
            h = h * fac
    xs_arr = np.asarray(xs, dtype=float)
    ys_arr = np.asarray(ys, dtype=float).reshape(len(xs), 3)
    dense_arr = np.asarray(dense, dtype=float).reshape(len(dense), 5, 3)
    return xs_arr, ys_arr, dense_arr, nzeros, status
