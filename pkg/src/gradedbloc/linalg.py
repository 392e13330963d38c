"""Exact sparse linear algebra over CycloNum.

Vectors are dicts ``key -> CycloNum`` with sortable keys and no stored zeros.
"""

from __future__ import annotations

from .cyclo import CycloNum

__all__ = ["EchelonSpan", "nullspace", "rank", "axpy"]


def axpy(y: dict, c, x: dict) -> dict:
    """Return y + c*x as a new dict."""
    out = dict(y)
    for k, v in x.items():
        w = out.get(k)
        w = c * v if w is None else w + c * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


class EchelonSpan:
    """Incrementally built echelon basis; pivot of a row is its least key."""

    def __init__(self, vectors=()):
        self.rows = {}
        self._order = []
        for v in vectors:
            self.add(v)

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        v = {k: c for k, c in vec.items() if c}
        for p in self._order:
            c = v.get(p)
            if c:
                v = axpy(v, -c, self.rows[p])
        return v

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def add(self, vec: dict) -> bool:
        """Insert vec; return False when it was already in the span."""
        r = self.reduce(vec)
        if not r:
            return False
        p = min(r)
        inv = r[p].inverse()
        r = {k: c * inv for k, c in r.items()}
        # keep existing rows reduced at the new pivot
        for q in self._order:
            c = self.rows[q].get(p)
            if c:
                self.rows[q] = axpy(self.rows[q], -c, r)
        self.rows[p] = r
        self._order = sorted(self.rows)
        return True


def rank(vectors) -> int:
    return len(EchelonSpan(vectors))


def nullspace(vectors) -> list:
    """Basis of {c : sum_k c[k] * vectors[k] = 0}, each relation a dict k -> coeff."""
    rows = {}  # pivot -> (vector, combination)
    order = []
    out = []
    one = CycloNum.rational(1)
    for idx, vec in enumerate(vectors):
        v = {k: c for k, c in vec.items() if c}
        comb = {idx: one}
        for p in order:
            c = v.get(p)
            if c:
                rv, rc = rows[p]
                v = axpy(v, -c, rv)
                comb = axpy(comb, -c, rc)
        if not v:
            out.append(comb)
            continue
        p = min(v)
        inv = v[p].inverse()
        v = {k: c * inv for k, c in v.items()}
        comb = {k: c * inv for k, c in comb.items()}
        for q in order:
            qv, qc = rows[q]
            c = qv.get(p)
            if c:
                rows[q] = (axpy(qv, -c, v), axpy(qc, -c, comb))
        rows[p] = (v, comb)
        order = sorted(rows)
    return out
