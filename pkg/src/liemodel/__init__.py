"""Exact weight-graded Lie models.

Computes pro-nilpotent homotopy ranks, with their weight decompositions,
from either a weight-graded cohomology algebra (the formal case) or a
first-page input of Leray type (the quasi-formal case), by building the
quadratic-dual free Lie algebra model and taking homology with exact
rational arithmetic throughout.
"""

__all__ = ["linalg", "graded", "freelie", "inputs", "corpus", "quillen",
           "filtered", "cli"]
