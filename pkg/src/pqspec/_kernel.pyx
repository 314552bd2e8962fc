# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) integrator for the shooting ODE.

Mirrors ``_pykernel.integrate`` statement for statement; see that module
for the system being integrated.
"""
import numpy as np

from libc.math cimport fabs, pow, sqrt
from libc.stdlib cimport free, malloc, realloc

BACKEND = "cython"

cdef double C2 = 0.2, C3 = 0.3, C4 = 0.8, C5 = 8.0 / 9.0
cdef double A21 = 0.2
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double A71 = 35.0 / 384.0, A73 = 500.0 / 1113.0, A74 = 125.0 / 192.0
cdef double A75 = -2187.0 / 6784.0, A76 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0
cdef double D1 = -12715105075.0 / 11282082432.0, D3 = 87487479700.0 / 32700410799.0
cdef double D4 = -10690763975.0 / 1880347072.0, D5 = 701980252875.0 / 199316789632.0
cdef double D6 = -1453857185.0 / 822651844.0, D7 = 69997945.0 / 29380423.0

cdef double SAFETY = 0.9
cdef double FAC_MIN = 0.2
cdef double FAC_MAX = 10.0


cdef inline void _rhs(double x, double u, double w, int nm1, double pexp, double qm1,
                      double qexp, double mu, double* out) nogil:
    cdef double du, src, au
    if w > 0.0:
        du = pow(w, pexp)
    elif w < 0.0:
        du = -pow(-w, pexp)
    else:
        du = 0.0
    au = fabs(u)
    if u > 0.0:
        src = pow(au, qm1)
    elif u < 0.0:
        src = -pow(au, qm1)
    else:
        src = 0.0
    if nm1 == 0:
        out[1] = -mu * src
        out[2] = pow(au, qexp)
    else:
        out[1] = -(nm1 / x) * w - mu * src
        out[2] = pow(x, <double>nm1) * pow(au, qexp)
    out[0] = du


cdef inline double _sq(double a) nogil:
    return pow(a, 2.0)


def integrate(int nm1, double p, double q, double mu, double x0, double u0, double w0,
              double q0, double x_end, int max_zeros, double rtol, double atol,
              double h0, long max_steps):
    """See ``_pykernel.integrate``."""
    cdef double pexp = 1.0 / (p - 1.0)
    cdef double qm1 = q - 1.0
    cdef double qexp = q
    cdef double x = x0
    cdef double y0 = u0, y1 = w0, y2 = q0
    cdef double k1[3]
    cdef double k2[3]
    cdef double k3[3]
    cdef double k4[3]
    cdef double k5[3]
    cdef double k6[3]
    cdef double k7[3]
    cdef double h = h0
    cdef double n0, n1, n2, e0, e1, e2, s0, s1, s2, err, fac, sgn, last_sign
    cdef double r10, r11, r12, r20, r21, r22
    cdef int nzeros = 0, status = 0, last
    cdef long nsteps = 0, npts = 1, cap = 1024, i
    cdef double* xbuf = <double*> malloc(cap * sizeof(double))
    cdef double* ybuf = <double*> malloc(3 * cap * sizeof(double))
    cdef double* dbuf = <double*> malloc(15 * cap * sizeof(double))
    cdef double* base
    if xbuf == NULL or ybuf == NULL or dbuf == NULL:
        raise MemoryError()
    try:
        xbuf[0] = x
        ybuf[0] = y0
        ybuf[1] = y1
        ybuf[2] = y2
        _rhs(x, y0, y1, nm1, pexp, qm1, qexp, mu, k1)
        if h > x_end - x:
            h = x_end - x
        last_sign = 0.0
        if y0 > 0.0:
            last_sign = 1.0
        elif y0 < 0.0:
            last_sign = -1.0
        with nogil:
            while x < x_end:
                if nsteps >= max_steps:
                    status = -2
                    break
                if h < 1e-15 * (fabs(x) if fabs(x) > 1.0 else 1.0):
                    status = -1
                    break
                last = 0
                if x + h >= x_end:
                    h = x_end - x
                    last = 1
                _rhs(x + C2 * h,
                     y0 + h * (A21 * k1[0]),
                     y1 + h * (A21 * k1[1]), nm1, pexp, qm1, qexp, mu, k2)
                _rhs(x + C3 * h,
                     y0 + h * (A31 * k1[0] + A32 * k2[0]),
                     y1 + h * (A31 * k1[1] + A32 * k2[1]), nm1, pexp, qm1, qexp, mu, k3)
                _rhs(x + C4 * h,
                     y0 + h * (A41 * k1[0] + A42 * k2[0] + A43 * k3[0]),
                     y1 + h * (A41 * k1[1] + A42 * k2[1] + A43 * k3[1]),
                     nm1, pexp, qm1, qexp, mu, k4)
                _rhs(x + C5 * h,
                     y0 + h * (A51 * k1[0] + A52 * k2[0] + A53 * k3[0] + A54 * k4[0]),
                     y1 + h * (A51 * k1[1] + A52 * k2[1] + A53 * k3[1] + A54 * k4[1]),
                     nm1, pexp, qm1, qexp, mu, k5)
                _rhs(x + h,
                     y0 + h * (A61 * k1[0] + A62 * k2[0] + A63 * k3[0] + A64 * k4[0] + A65 * k5[0]),
                     y1 + h * (A61 * k1[1] + A62 * k2[1] + A63 * k3[1] + A64 * k4[1] + A65 * k5[1]),
                     nm1, pexp, qm1, qexp, mu, k6)
                n0 = y0 + h * (A71 * k1[0] + A73 * k3[0] + A74 * k4[0] + A75 * k5[0] + A76 * k6[0])
                n1 = y1 + h * (A71 * k1[1] + A73 * k3[1] + A74 * k4[1] + A75 * k5[1] + A76 * k6[1])
                n2 = y2 + h * (A71 * k1[2] + A73 * k3[2] + A74 * k4[2] + A75 * k5[2] + A76 * k6[2])
                _rhs(x + h, n0, n1, nm1, pexp, qm1, qexp, mu, k7)
                e0 = h * (E1 * k1[0] + E3 * k3[0] + E4 * k4[0] + E5 * k5[0] + E6 * k6[0] + E7 * k7[0])
                e1 = h * (E1 * k1[1] + E3 * k3[1] + E4 * k4[1] + E5 * k5[1] + E6 * k6[1] + E7 * k7[1])
                e2 = h * (E1 * k1[2] + E3 * k3[2] + E4 * k4[2] + E5 * k5[2] + E6 * k6[2] + E7 * k7[2])
                s0 = atol + rtol * (fabs(y0) if fabs(y0) >= fabs(n0) else fabs(n0))
                s1 = atol + rtol * (fabs(y1) if fabs(y1) >= fabs(n1) else fabs(n1))
                s2 = atol + rtol * (fabs(y2) if fabs(y2) >= fabs(n2) else fabs(n2))
                err = sqrt((_sq(e0 / s0) + _sq(e1 / s1) + _sq(e2 / s2)) / 3.0)
                nsteps += 1
                if err <= 1.0:
                    if npts >= cap:
                        cap *= 2
                        xbuf = <double*> realloc(xbuf, cap * sizeof(double))
                        ybuf = <double*> realloc(ybuf, 3 * cap * sizeof(double))
                        dbuf = <double*> realloc(dbuf, 15 * cap * sizeof(double))
                        if xbuf == NULL or ybuf == NULL or dbuf == NULL:
                            status = -3
                            break
                    base = dbuf + 15 * (npts - 1)
                    r10 = n0 - y0
                    r11 = n1 - y1
                    r12 = n2 - y2
                    r20 = h * k1[0] - r10
                    r21 = h * k1[1] - r11
                    r22 = h * k1[2] - r12
                    base[0] = y0
                    base[1] = y1
                    base[2] = y2
                    base[3] = r10
                    base[4] = r11
                    base[5] = r12
                    base[6] = r20
                    base[7] = r21
                    base[8] = r22
                    base[9] = r10 - h * k7[0] - r20
                    base[10] = r11 - h * k7[1] - r21
                    base[11] = r12 - h * k7[2] - r22
                    base[12] = h * (D1 * k1[0] + D3 * k3[0] + D4 * k4[0] + D5 * k5[0] + D6 * k6[0] + D7 * k7[0])
                    base[13] = h * (D1 * k1[1] + D3 * k3[1] + D4 * k4[1] + D5 * k5[1] + D6 * k6[1] + D7 * k7[1])
                    base[14] = h * (D1 * k1[2] + D3 * k3[2] + D4 * k4[2] + D5 * k5[2] + D6 * k6[2] + D7 * k7[2])
                    if last:
                        x = x_end
                    else:
                        x = x + h
                    y0 = n0
                    y1 = n1
                    y2 = n2
                    xbuf[npts] = x
                    ybuf[3 * npts] = y0
                    ybuf[3 * npts + 1] = y1
                    ybuf[3 * npts + 2] = y2
                    npts += 1
                    k1[0] = k7[0]
                    k1[1] = k7[1]
                    k1[2] = k7[2]
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
                        fac = SAFETY * pow(err, -0.2)
                        if fac > FAC_MAX:
                            fac = FAC_MAX
                        elif fac < FAC_MIN:
                            fac = FAC_MIN
                    h = h * fac
                else:
                    fac = SAFETY * pow(err, -0.2)
                    if fac < FAC_MIN:
                        fac = FAC_MIN
                    h = h * fac
        if status == -3:
            raise MemoryError()
        xs = np.empty(npts, dtype=np.float64)
        ys = np.empty((npts, 3), dtype=np.float64)
        dense = np.empty((npts - 1, 5, 3), dtype=np.float64)
        for i in range(npts):
            xs[i] = xbuf[i]
            ys[i, 0] = ybuf[3 * i]
            ys[i, 1] = ybuf[3 * i + 1]
            ys[i, 2] = ybuf[3 * i + 2]
        if npts > 1:
            dense[...] = np.asarray(<double[:15 * (npts - 1)]> dbuf).reshape(npts - 1, 5, 3)
        return xs, ys, dense, nzeros, status
    finally:
        free(xbuf)
        free(ybuf)
        free(dbuf)
