"""Layered combinatorial construction of the {5,4} and {4,5} hyperbolic tilings.

Only adjacency is built (no coordinates). Starting from a central face, each
layer is grown across the current open boundary:

* ``{5,4}`` grows by *edge layers*: a new face is attached across every open
  edge, and two such faces merge into one (a ``g`` face with two parents)
  whenever the boundary vertex between them already carries ``q - 1`` faces.
  This reproduces the f/g recurrence ``(f, g)_{k+1} = [[2,1],[1,1]] (f, g)_k``.
* ``{4,5}`` grows by *vertex layers*: every face touching a boundary vertex is
  added, i.e. faces across the open edges plus the fan of faces that touch the
  old boundary only at a vertex. Neighbouring new faces are contracted with
  each other.

Slots of a face are numbered counterclockwise. A new face lists its parent
slots first (in reverse boundary order), then the slot shared with the previous
face of its ring (vertex layers only), then its open slots, then the slot
shared with the next ring face.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

SUPPORTED = {(5, 4): "edge", (4, 5): "vertex"}


@dataclass(frozen=True)
class Face:
    face_id: int
    layer: int
    kind: str  # "c" centre, "f" one parent, "g" two parents, "v" vertex-only (fan)


@dataclass
class Tiling:
    schlafli: tuple[int, int]
    n_layers: int
    faces: list[Face] = field(default_factory=list)
    contraction_edges: list[tuple[int, int, int, int]] = field(default_factory=list)
    open_legs: list[tuple[int, int]] = field(default_factory=list)

    @property
    def p(self) -> int:
        return self.schlafli[0]

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def layer_of(self, face_id: int) -> int:
        return self.faces[face_id].layer

    def faces_in_layer(self, k: int) -> list[Face]:
        return [f for f in self.faces if f.layer == k]

    def to_json(self) -> str:
        doc = {
            "schlafli": list(self.schlafli),
            "n": self.n_layers,
            "faces": [[f.face_id, f.layer, f.kind] for f in self.faces],
            "edges": [list(e) for e in self.contraction_edges],
            "open_legs": [list(o) for o in self.open_legs],
        }
        return json.dumps(doc, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> Tiling:
        doc = json.loads(text)
        return cls(
            schlafli=tuple(doc["schlafli"]),
            n_layers=doc["n"],
            faces=[Face(*f) for f in doc["faces"]],
            contraction_edges=[tuple(e) for e in doc["edges"]],
            open_legs=[tuple(o) for o in doc["open_legs"]],
        )


@dataclass
class LayerCensus:
    f: list[int]
    g: list[int]
    n_bulk: int
    n_boundary: int


def layer_census(p_q: tuple[int, int], n: int) -> LayerCensus:
    """Face counts per layer of the pentagon code from the f/g recurrence."""
    if tuple(p_q) != (5, 4):
        raise ValueError(f"closed-form census only exists for {{5,4}}, got {p_q}")
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return LayerCensus([], [], 1, 5)
    step = np.array([[2, 1], [1, 1]], dtype=object)
    fg = np.array([5, 0], dtype=object)
    f, g = [], []
    for _ in range(n):
        f.append(int(fg[0]))
        g.append(int(fg[1]))
        fg = step.dot(fg)
    return LayerCensus(f, g, 1 + sum(f) + sum(g), 4 * f[-1] + 3 * g[-1])


def build_tiling(p_q: tuple[int, int], n: int) -> Tiling:
    p_q = tuple(p_q)
    if p_q not in SUPPORTED:
        raise ValueError(f"unsupported tiling {p_q}; choose one of {sorted(SUPPORTED)}")
    if n < 0:
        raise ValueError("n must be non-negative")
    p, q = p_q
    mode = SUPPORTED[p_q]
    tiling = Tiling(p_q, n, [Face(0, 0, "c")])
    # open boundary, counterclockwise: edges[i] = (face, slot); verts[i] = faces at
    # the vertex between edges[i] and edges[i + 1]
    edges = [(0, s) for s in range(p)]
    verts = [1] * p
    for layer in range(1, n + 1):
        edges, verts = _grow(tiling, layer, edges, verts, p, q, mode)
    tiling.open_legs = list(edges)
    return tiling


def _grow(tiling, layer, edges, verts, p, q, mode):
    L = len(edges)
    room = [q - m for m in verts]
    if min(room) < 1:
        raise RuntimeError("boundary vertex is already saturated")
    if mode == "edge" and 2 in room:
        raise RuntimeError("edge layering cannot close a vertex with two missing faces")
    # consecutive boundary edges whose shared vertex has room for one face only
    # belong to the same new face
    start = next(i for i in range(L) if room[i - 1] != 1)
    groups, cur = [], []
    for k in range(L):
        i = (start + k) % L
        cur.append(i)
        if room[i] != 1:
            groups.append(cur)
            cur = []

    ring = []  # (face_id, parent edge indices) in counterclockwise order; fans have no parents
    for grp in groups:
        ring.append(_new_face(tiling, layer, grp))
        if mode == "vertex":
            for _ in range(room[grp[-1]] - 2):
                ring.append(_new_face(tiling, layer, []))

    slots = {}
    for fid, parents in ring:
        k = len(parents)
        for s, ei in enumerate(reversed(parents)):
            face, slot = edges[ei]
            tiling.contraction_edges.append((face, slot, fid, s))
        if mode == "vertex":
            prev_slot, next_slot = k, p - 1
            open_slots = list(range(k + 1, p - 1))
            if not parents:
                prev_slot, open_slots = 0, list(range(1, p - 1))
        else:
            prev_slot = next_slot = None
            open_slots = list(range(k, p))
        slots[fid] = (prev_slot, open_slots, next_slot)

    if mode == "vertex":
        for t, (fid, _) in enumerate(ring):
            nxt = ring[(t + 1) % len(ring)][0]
            tiling.contraction_edges.append((fid, slots[fid][2], nxt, slots[nxt][0]))

    # walk the ring from the first face that keeps open slots
    first = next(t for t, (fid, _) in enumerate(ring) if slots[fid][1])
    new_edges, new_verts = [], []
    carry = 2
    for fid, parents in ring[first:] + ring[:first]:
        open_slots = slots[fid][1]
        if not open_slots:
            # a closed face adds itself to the vertex shared by its ring neighbours
            carry += 1
            continue
        if new_edges:
            new_verts.append(carry)
        for j, s in enumerate(open_slots):
            new_edges.append((fid, s))
            if j < len(open_slots) - 1:
                new_verts.append(1)
        carry = verts[parents[-1]] + 2 if mode == "edge" else 2
    new_verts.append(carry)
    return new_edges, new_verts


def _new_face(tiling, layer, parents):
    fid = len(tiling.faces)
    kind = {0: "v", 1: "f", 2: "g"}.get(len(parents), f"p{len(parents)}")
    tiling.faces.append(Face(fid, layer, kind))
    return fid, parents


def census_from_tiling(t: Tiling) -> dict:
    return {
        "n_faces": t.n_faces,
        "n_bulk": t.n_faces,
        "n_boundary": len(t.open_legs),
        "n_edges": len(t.contraction_edges),
    }


def encoding_rate(p_q, n: int) -> float:
    c = layer_census(p_q, n)
    return c.n_bulk / c.n_boundary


INVERSE_SQRT5 = 1 / math.sqrt(5)
