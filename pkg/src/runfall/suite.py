"""A small benchmark suite of separable test functions and a pure random search.

The five functions approximate the separable group of the usual noiseless
testbed: sphere, ellipsoid, Rastrigin, Bueche-Rastrigin and linear slope.
Instances differ by a translated optimum and an offset in f.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from .indicator import best_so_far
from .model import InvalidArgumentError, ProblemTriple, RunTrace

FUNCTIONS = ("sphere", "ellipsoid", "rastrigin", "bueche", "linear-slope")
LOWER, UPPER = -5.0, 5.0
XOPT_BOUND = 4.0
CHUNK = 65536


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    function_id: str
    dimension: int
    instance_id: int
    x_opt: np.ndarray
    f_opt: float
    signs: np.ndarray | None = None  # linear slope only

    @property
    def triple(self) -> ProblemTriple:
        return ProblemTriple(self.function_id, self.dimension, self.instance_id)

    def __eq__(self, other):
        if not isinstance(other, ProblemInstance):
            return NotImplemented
        return (self.triple == other.triple and self.f_opt == other.f_opt
                and np.array_equal(self.x_opt, other.x_opt))

    def __call__(self, x) -> np.ndarray | float:
        return evaluate(self, x)


def instance_seed(function_id: str, dimension: int, instance_id: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([zlib.crc32(function_id.encode("utf-8")), dimension, instance_id])


def instantiate(function_id: str, dimension: int, instance_id: int) -> ProblemInstance:
    if function_id not in FUNCTIONS:
        raise InvalidArgumentError(f"unknown function {function_id!r}; choose from {', '.join(FUNCTIONS)}")
    if dimension < 1:
        raise InvalidArgumentError("dimension must be >= 1")
    rng = np.random.Generator(np.random.PCG64(instance_seed(function_id, dimension, instance_id)))
    x_opt = rng.uniform(-XOPT_BOUND, XOPT_BOUND, dimension)
    f_opt = round(float(rng.uniform(-100.0, 100.0)), 2)
    signs = None
    if function_id == "linear-slope":
        signs = np.where(rng.random(dimension) < 0.5, -1.0, 1.0)
        x_opt = UPPER * signs
    x_opt.flags.writeable = False
    return ProblemInstance(function_id, dimension, instance_id, x_opt, f_opt, signs)


def _rastrigin(z: np.ndarray) -> np.ndarray:
    n = z.shape[-1]
    return 10.0 * (n - np.cos(2 * np.pi * z).sum(axis=-1)) + (z * z).sum(axis=-1)


def _cond_exponents(n: int) -> np.ndarray:
    return np.arange(n) / (n - 1) if n > 1 else np.zeros(1)


def evaluate(instance: ProblemInstance, x) -> np.ndarray | float:
    """Objective value at ``x`` (shape ``(n,)``) or at each row of ``x`` (shape ``(m, n)``)."""
    x = np.asarray(x, dtype=float)
    n = instance.dimension
    if x.shape[-1:] != (n,) or x.ndim > 2:
        raise InvalidArgumentError(f"expected points of dimension {n}, got shape {x.shape}")
    fid = instance.function_id
    if fid == "linear-slope":
        s = instance.signs
        z = np.where(s * x < UPPER, x, instance.x_opt)
        f = (UPPER * np.abs(s) - s * z).sum(axis=-1)
    else:
        z = x - instance.x_opt
        if fid == "sphere":
            f = (z * z).sum(axis=-1)
        elif fid == "ellipsoid":
            f = (10.0 ** (6 * _cond_exponents(n)) * z * z).sum(axis=-1)
        elif fid == "rastrigin":
            f = _rastrigin(z)
        elif fid == "bueche":
            scale = 10.0 ** (0.5 * _cond_exponents(n))
            odd = np.zeros(n, dtype=bool)
            odd[::2] = True  # 1st, 3rd, ... coordinate
            scale = np.where(odd & (z > 0), 10.0 * scale, scale)
            f = _rastrigin(scale * z)
        else:
            raise InvalidArgumentError(f"unknown function {fid!r}")
    out = instance.f_opt + f
    return float(out) if np.ndim(out) == 0 else out


def random_search(instance: ProblemInstance, budget: int, rng: np.random.Generator,
                  algorithm: str = "random-search") -> RunTrace:
    """Uniform sampling in the search domain for ``budget`` evaluations."""
    if budget < 1:
        raise InvalidArgumentError("budget must be >= 1")
    n = instance.dimension
    steps: list[tuple[int, float]] = []
    best = np.inf
    done = 0
    while done < budget:
        m = min(CHUNK, budget - done)
        f = evaluate(instance, rng.uniform(LOWER, UPPER, (m, n)))
        if f.min() < best:
            for e, v in best_so_far(f):
                if v < best:
                    steps.append((done + e, v))
                    best = v
        done += m
    return RunTrace(
        triple=instance.triple,
        algorithm=algorithm,
        reference_value=instance.f_opt,
        steps=tuple(steps),
        total_evaluations=budget,
        suite="mini",
    )


def parse_function_list(text: str) -> list[str]:
    """Accept ``a,b,c`` and suite-ordered ranges ``first..last``."""
    out: list[str] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..", 1)
            if a not in FUNCTIONS or b not in FUNCTIONS:
                raise InvalidArgumentError(f"unknown function in range {part!r}")
            i, j = FUNCTIONS.index(a), FUNCTIONS.index(b)
            if i > j:
                raise InvalidArgumentError(f"empty function range {part!r}")
            out.extend(FUNCTIONS[i:j + 1])
        elif part:
            if part not in FUNCTIONS:
                raise InvalidArgumentError(f"unknown function {part!r}")
            out.append(part)
    return list(dict.fromkeys(out))
