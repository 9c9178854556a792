"""The move list exchanged between refinement passes and the apply step."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._arrays import I64


@dataclass
class MoveList:
    """A batch of (vertex, destination part) moves with their priorities.

    Vertices are unique and each destination differs from the vertex's
    part at creation time; the apply step asserts the latter.
    """

    vertices: np.ndarray
    dests: np.ndarray
    gains: np.ndarray = field(default=None)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=I64)
        self.dests = np.asarray(self.dests, dtype=I64)
        if self.gains is None:
            self.gains = np.zeros(len(self.vertices), dtype=I64)
        if len(self.vertices) != len(self.dests):
            raise ValueError("vertices and dests must align")
        if len(np.unique(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex in move list")

    @classmethod
    def empty(cls) -> "MoveList":
        return cls(np.zeros(0, dtype=I64), np.zeros(0, dtype=I64))

    def __len__(self) -> int:
        return len(self.vertices)
