# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch angle kernels (see _kernels_py for the reference version)."""
import numpy as np
from libc.math cimport atan2, sqrt, fabs


def angles_batch(double ax, double ay, double bx, double by, pts):
    cdef const double[:, ::1] p = np.ascontiguousarray(pts, dtype=np.float64)
    cdef Py_ssize_t k, n = p.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double ux, uy, vx, vy
    with nogil:
        for k in range(n):
            ux = ax - p[k, 0]
            uy = ay - p[k, 1]
            vx = bx - p[k, 0]
            vy = by - p[k, 1]
            o[k] = fabs(atan2(ux * vy - uy * vx, ux * vx + uy * vy))
    return out


def polygon_solid_angles_batch(verts, pts):
    cdef const double[:, ::1] v = np.ascontiguousarray(verts, dtype=np.float64)
    cdef const double[:, ::1] p = np.ascontiguousarray(pts, dtype=np.float64)
    cdef Py_ssize_t k, t, n = p.shape[0], nv = v.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double x0, y0, z0, x1, y1, z1, x2, y2, z2, r0, r1, r2
    cdef double det, den, acc
    with nogil:
        for k in range(n):
            x0 = v[0, 0] - p[k, 0]
            y0 = v[0, 1] - p[k, 1]
            z0 = v[0, 2] - p[k, 2]
            r0 = sqrt(x0 * x0 + y0 * y0 + z0 * z0)
            x1 = v[1, 0] - p[k, 0]
            y1 = v[1, 1] - p[k, 1]
            z1 = v[1, 2] - p[k, 2]
            r1 = sqrt(x1 * x1 + y1 * y1 + z1 * z1)
            acc = 0.0
            for t in range(2, nv):
                x2 = v[t, 0] - p[k, 0]
                y2 = v[t, 1] - p[k, 1]
                z2 = v[t, 2] - p[k, 2]
                r2 = sqrt(x2 * x2 + y2 * y2 + z2 * z2)
                det = (x0 * (y1 * z2 - z1 * y2) - y0 * (x1 * z2 - z1 * x2)
                       + z0 * (x1 * y2 - y1 * x2))
                den = (r0 * r1 * r2 + (x0 * x1 + y0 * y1 + z0 * z1) * r2
                       + (x0 * x2 + y0 * y2 + z0 * z2) * r1
                       + (x1 * x2 + y1 * y2 + z1 * z2) * r0)
                acc = acc + atan2(det, den)
                x1 = x2
                y1 = y2
                z1 = z2
                r1 = r2
            o[k] = -2.0 * acc
    return out
