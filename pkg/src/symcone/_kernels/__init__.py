"""Kernel dispatch: compiled int64 versions when available, big-int fallback.

The compiled module is optional. When it is present, each call tries it
first; a sentinel result (-1 / None) means the input needs arbitrary
precision and the pure version runs instead, so results are always exact.
"""

from symcone._kernels import pure as _pure

try:
    from symcone._kernels import _fast as _compiled
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "pure"


def int_rank(rows):
    """Rank of an integer matrix given as an iterable of equal-length rows."""
    rows = [list(r) for r in rows]
    if _compiled is not None:
        r = _compiled.int_rank(rows)
        if r >= 0:
            return r
    return _pure.int_rank(rows)


def brute_rays(rows, dim):
    """All primitive extreme rays of {x : rows @ x >= 0}, sorted.

    The cone must be pointed; every returned tuple has its first nonzero
    entry adjusted so the ray satisfies the inequalities.
    """
    rows = [list(r) for r in rows]
    if _compiled is not None:
        out = _compiled.brute_rays(rows, dim)
        if out is not None:
            return out
    return _pure.brute_rays(rows, dim)
