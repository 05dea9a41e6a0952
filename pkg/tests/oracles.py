"""Characteristic points computed without the package's kernel.

Each point follows its textbook description: linear solves for the
circumcenter and orthocenter, trigonometry for bisector feet, explicit line
intersections for the rest.
"""
import numpy as np


def _meet(p1, d1, p2, d2):
    t = np.linalg.solve(np.column_stack([d1, -d2]), p2 - p1)
    return p1 + t[0] * d1


def _foot(p, a, b):
    d = b - a
    return a + d * np.dot(p - a, d) / np.dot(d, d)


def _rot(v):
    return np.array([-v[1], v[0]])


def points(a, b, c):
    a, b, c = (np.asarray(p, dtype=float) for p in (a, b, c))
    out = {"A": a, "B": b, "C": c}
    out["Ma"], out["Mb"], out["Mc"] = (b + c) / 2, (c + a) / 2, (a + b) / 2
    # |x-a|² = |x-b|² = |x-c|² as two linear equations
    m = np.array([2 * (b - a), 2 * (c - a)])
    rhs = np.array([b @ b - a @ a, c @ c - a @ a])
    o = np.linalg.solve(m, rhs)
    out["O"] = o
    out["G"] = _meet(a, out["Ma"] - a, b, out["Mb"] - b)
    out["Ha"], out["Hb"], out["Hc"] = _foot(a, b, c), _foot(b, c, a), _foot(c, a, b)
    out["H"] = _meet(a, _rot(c - b), b, _rot(a - c))

    def angle(v, p, q):
        u, w = p - v, q - v
        return np.arctan2(abs(u[0] * w[1] - u[1] * w[0]), u @ w)

    def bisector_dir(v, p, q):
        u, w = p - v, q - v
        return u / np.linalg.norm(u) + w / np.linalg.norm(w)

    def ext_dir(v, p, q):
        u, w = p - v, q - v
        return u / np.linalg.norm(u) - w / np.linalg.norm(w)

    out["Ta"] = _meet(a, bisector_dir(a, b, c), b, c - b)
    out["Tb"] = _meet(b, bisector_dir(b, c, a), c, a - c)
    out["Tc"] = _meet(c, bisector_dir(c, a, b), a, b - a)
    out["I"] = _meet(a, bisector_dir(a, b, c), b, bisector_dir(b, c, a))
    out["T'a"] = _meet(a, ext_dir(a, b, c), b, c - b)
    out["T'b"] = _meet(b, ext_dir(b, c, a), c, a - c)
    out["T'c"] = _meet(c, ext_dir(c, a, b), a, b - a)
    h = out["H"]
    out["H'bc"] = 2 * _foot(h, b, c) - h
    out["H'ac"] = 2 * _foot(h, a, c) - h
    out["H'ab"] = 2 * _foot(h, a, b) - h
    i = out["I"]
    out["Pa"], out["Pb"], out["Pc"] = _foot(i, b, c), _foot(i, c, a), _foot(i, a, b)
    out["Na"] = _meet(o, out["Ma"] - o, a, out["Ta"] - a)
    out["Nb"] = _meet(o, out["Mb"] - o, b, out["Tb"] - b)
    out["Nc"] = _meet(o, out["Mc"] - o, c, out["Tc"] - c)
    out["_angles"] = (angle(a, b, c), angle(b, c, a), angle(c, a, b))
    return out
