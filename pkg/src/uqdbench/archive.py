"""MAP-Elites grid archive over the normalized descriptor space [0, 1]^2."""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from uqdbench.errors import UsageError


class InsertOutcome(Enum):
    ADDED_NEW = "added-new"
    REPLACED = "replaced"
    REJECTED = "rejected"


@dataclass
class Elite:
    genotype: np.ndarray
    fitness: float                  # the score competed on at insertion
    descriptor: np.ndarray          # in [0, 1]^2
    n_samples: int = 1
    aux: dict = field(default_factory=dict)


def fmt17(x):
    """17-significant-digit format, round-trip safe for doubles."""
    return format(float(x), ".17g")


class GridArchive:
    """Uniform grid of elites; at most one elite per cell, strict-improvement
    replacement with ties kept by the incumbent."""

    def __init__(self, resolution=(100, 100), offset=math.pi ** 2):
        rows, cols = resolution
        if rows < 1 or cols < 1:
            raise UsageError(f"grid resolution must be positive, got {resolution}")
        self.resolution = (int(rows), int(cols))
        self.offset = float(offset)
        self.cells = {}
        self._order = []  # cells in first-insertion order, for uniform sampling

    def __len__(self):
        return len(self.cells)

    def cell_index(self, descriptor):
        """(row, col) of a descriptor; the upper boundary maps into the last cell."""
        d = np.asarray(descriptor, dtype=np.float64)
        if d[0] < 0.0 or d[0] > 1.0 or d[1] < 0.0 or d[1] > 1.0:
            raise UsageError(f"descriptor outside [0, 1]^2: {d} (clamp before insertion)")
        rows, cols = self.resolution
        i = min(int(d[1] * rows), rows - 1)
        j = min(int(d[0] * cols), cols - 1)
        return i, j

    def try_insert(self, elite):
        cell = self.cell_index(elite.descriptor)
        incumbent = self.cells.get(cell)
        if incumbent is None:
            self.cells[cell] = elite
            self._order.append(cell)
            return InsertOutcome.ADDED_NEW
        if elite.fitness > incumbent.fitness:
            self.cells[cell] = elite
            return InsertOutcome.REPLACED
        return InsertOutcome.REJECTED

    def qd_score(self):
        """Sum of (fitness + offset) over occupied cells, in sorted cell order."""
        total = 0.0
        for cell in sorted(self.cells):
            total += self.cells[cell].fitness + self.offset
        return total

    def coverage(self):
        rows, cols = self.resolution
        return len(self.cells) / (rows * cols)

    def sample_uniform_elite(self, rng):
        """Uniformly random occupied cell's elite; deterministic given the stream."""
        if not self.cells:
            raise UsageError("cannot sample from an empty archive")
        idx = int(rng.uniforms(1)[0] * len(self._order))
        return self.cells[self._order[idx]]

    def sorted_items(self):
        """(cell, elite) pairs sorted by (row, col)."""
        return [(cell, self.cells[cell]) for cell in sorted(self.cells)]

    def genotype_width(self):
        if not self.cells:
            return 0
        return len(self.cells[self._order[0]].genotype)

    def to_csv(self, path):
        """Write `cell_row,cell_col,fitness,desc_x,desc_y,n_samples,genotype_*`,
        one row per occupied cell, sorted by (row, col)."""
        n = self.genotype_width()
        header = "cell_row,cell_col,fitness,desc_x,desc_y,n_samples"
        header += "".join(f",genotype_{k}" for k in range(n))
        lines = [header]
        for (i, j), e in self.sorted_items():
            parts = [str(i), str(j), fmt17(e.fitness),
                     fmt17(e.descriptor[0]), fmt17(e.descriptor[1]), str(e.n_samples)]
            parts.extend(fmt17(v) for v in e.genotype)
            lines.append(",".join(parts))
        text = "\n".join(lines) + "\n"
        with open(path, "w") as f:
            f.write(text)

    @classmethod
    def from_csv(cls, path, resolution=(100, 100), offset=math.pi ** 2):
        """Rebuild an archive from its CSV; verifies each stored descriptor
        still indexes to its recorded cell."""
        archive = cls(resolution=resolution, offset=offset)
        with open(path) as f:
            header = f.readline().strip()
            cols = header.split(",")
            fixed = ["cell_row", "cell_col", "fitness", "desc_x", "desc_y", "n_samples"]
            if cols[:6] != fixed:
                raise UsageError(f"unexpected archive CSV header: {header!r}")
            n = len(cols) - 6
            for line_no, line in enumerate(f, start=2):
                line = line.strip()
                if not line:
                    continue
                parts = line.split(",")
                if len(parts) != 6 + n:
                    raise UsageError(f"{path}:{line_no}: expected {6 + n} fields, "
                                     f"got {len(parts)}")
                cell = (int(parts[0]), int(parts[1]))
                elite = Elite(
                    genotype=np.array([float(v) for v in parts[6:]]),
                    fitness=float(parts[2]),
                    descriptor=np.array([float(parts[3]), float(parts[4])]),
                    n_samples=int(parts[5]),
                )
                derived = archive.cell_index(elite.descriptor)
                if derived != cell:
                    raise UsageError(
                        f"{path}:{line_no}: descriptor {elite.descriptor} maps to cell "
                        f"{derived}, file says {cell} (wrong --grid resolution?)")
                if cell in archive.cells:
                    raise UsageError(f"{path}:{line_no}: duplicate cell {cell}")
                archive.cells[cell] = elite
                archive._order.append(cell)
        return archive
