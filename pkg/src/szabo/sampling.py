"""Seeded samples on the pseudo-spheres and the null cone.

Pseudo-spheres with p, q >= 1 are not compact, so samples are Gaussian
directions rescaled onto the cone and rejected above a Euclidean norm cap.
Every sample ``v`` is followed by ``-v``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pseudo import PreconditionError, PseudoSpace

CONES = ("spacelike", "timelike", "null")


@dataclass(frozen=True, eq=False)
class SampleSet:
    cone: str
    vectors: np.ndarray  # (2n, m): v1, -v1, v2, -v2, ...
    seed: object
    euclidean_bound: float

    def __len__(self):
        return len(self.vectors)

    @property
    def base_points(self) -> np.ndarray:
        return self.vectors[::2]


def cone_feasible(space: PseudoSpace, cone: str) -> bool:
    if cone == "spacelike":
        return space.q >= 1
    if cone == "timelike":
        return space.p >= 1
    if cone == "null":
        return space.p >= 1 and space.q >= 1
    raise ValueError(f"unknown cone {cone!r}; expected one of {CONES}")


def cone_value(cone: str) -> float:
    return {"spacelike": 1.0, "timelike": -1.0, "null": 0.0}[cone]


def sample_cone(space: PseudoSpace, cone: str, n: int, seed, euclidean_bound: float = 10.0,
                max_draws: int | None = None) -> SampleSet:
    if not cone_feasible(space, cone):
        raise PreconditionError(f"{cone} cone is empty in signature {space.signature}")
    rng = np.random.default_rng(seed)
    p, m = space.p, space.m
    g = space.diag
    max_draws = max_draws or 1000 * max(n, 1)
    out = []
    draws = 0
    while len(out) < 2 * n:
        draws += 1
        if draws > max_draws:
            raise RuntimeError(f"rejection sampling accepted {len(out) // 2}/{n} after {max_draws} draws")
        if cone == "null":
            t = rng.standard_normal(p)
            s = rng.standard_normal(m - p)
            v = np.concatenate([t / np.linalg.norm(t), s / np.linalg.norm(s)]) / np.sqrt(2.0)
        else:
            x = rng.standard_normal(m)
            val = float(np.dot(g * x, x)) * cone_value(cone)
            if val <= space.tol * float(np.dot(x, x)):
                continue
            v = x / np.sqrt(val)
        if np.linalg.norm(v) > euclidean_bound:
            continue
        out.append(v)
        out.append(-v)
    vecs = np.array(out).reshape(2 * n, m)
    return SampleSet(cone, vecs, seed, euclidean_bound)
