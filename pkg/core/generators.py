# core/generators.py
# Divergence generators f: convex on R+, f(1) = 0, with the boundary limits
# f(0) = f(0+) and f*(0) = lim f(t)/t stored next to the function.

import difflib
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy.special import xlogy

from core.errors import InputError, UnknownGeneratorError
from core.extreal import INF, ExtReal, ext_sum

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Generator:
    """A member of the generator family with its conjugate limits.

    `fn` is only ever called on (0, inf); the values at 0 and at infinity
    come from `at_zero` and `conj_at_zero`.
    """
    name: str
    fn: ArrayFn = field(repr=False, compare=False)
    at_zero: ExtReal
    conj_at_zero: ExtReal
    strictly_convex_at_one: bool = True
    strictly_convex_on_positives: bool = True
    domain_hint: str = "(0, inf)"
    cli_name: Optional[str] = None
    conjugate_of: Optional["Generator"] = field(default=None, repr=False, compare=False)

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        out = self.fn(arr)
        return float(out) if arr.ndim == 0 else np.asarray(out, dtype=float)

    @property
    def label(self) -> str:
        return self.cli_name or self.name


# ===================
# Table formulas
# ===================

def _kl(t):
    return xlogy(t, t)


def _kl_star(t):
    return -np.log(t)


def _tv(t):
    return np.abs(t - 1.0)


def _hellinger(t):
    return (np.sqrt(t) - 1.0) ** 2


def _pearson(t):
    return t * t - 1.0


def _neyman(t):
    return (1.0 - t * t) / t


def _lecam(t):
    return (1.0 - t) ** 2 / (2.0 * t + 2.0)


def _js(t):
    return t * np.log(2.0 * t / (t + 1.0)) + np.log(2.0 / (t + 1.0))


def _f0(t):
    return -np.log(t) + (t - 1.0)


def _f1(t):
    return xlogy(t, t) + (1.0 - t)


def _alpha_fn(a: float) -> ArrayFn:
    denom = a * (a - 1.0)

    def fn(t):
        return (t ** a - a * t - (1.0 - a)) / denom
    return fn


def _alpha_limits(a: float):
    at_zero = 1.0 / a if a > 0 else INF
    conj_at_zero = 1.0 / (1.0 - a) if a < 1 else INF
    return at_zero, conj_at_zero


CLI_NAMES: Dict[str, str] = {
    "kl": "KL",
    "kl-star": "KL*",
    "tv": "TV",
    "hellinger": "H",
    "pearson": "P",
    "neyman": "N",
    "lecam": "LC",
    "js": "JS",
}
BUILTIN_NAMES: List[str] = ["KL", "KL*", "TV", "H", "P", "N", "alpha", "LC", "JS"]

_LOG2 = math.log(2.0)

# name -> (fn, f(0), f*(0), strictly convex on R+*)
_CATALOG = {
    "KL": (_kl, 0.0, INF, True),
    "KL*": (_kl_star, INF, 0.0, True),
    "TV": (_tv, 1.0, 1.0, False),
    "H": (_hellinger, 1.0, 1.0, True),
    "P": (_pearson, -1.0, INF, True),
    "N": (_neyman, INF, -1.0, True),
    "LC": (_lecam, 0.5, 0.5, True),
    "JS": (_js, _LOG2, _LOG2, True),
}
_CLI_BY_NAME = {v: k for k, v in CLI_NAMES.items()}


def _alpha_cli(alpha: float) -> str:
    return f"alpha:{alpha!r}"


def builtin(name: str, alpha: Optional[float] = None) -> Generator:
    """Catalog generator; alpha in {0, 1} gives the continuity extensions."""
    if name == "alpha":
        if alpha is None:
            raise InputError("generator 'alpha' needs an alpha value")
        a = float(alpha)
        if not math.isfinite(a):
            raise InputError(f"alpha must be finite, got {alpha!r}")
        if a == 0.0:
            return Generator("alpha", _f0, INF, 1.0, cli_name=_alpha_cli(0.0))
        if a == 1.0:
            return Generator("alpha", _f1, 1.0, INF, cli_name=_alpha_cli(1.0))
        at_zero, conj_at_zero = _alpha_limits(a)
        return Generator("alpha", _alpha_fn(a), at_zero, conj_at_zero, cli_name=_alpha_cli(a))

    if alpha is not None:
        raise InputError(f"alpha given for generator '{name}'")
    if name not in _CATALOG:
        raise UnknownGeneratorError(name, difflib.get_close_matches(name, BUILTIN_NAMES, n=3))
    fn, at_zero, conj_at_zero, strict = _CATALOG[name]
    return Generator(name, fn, at_zero, conj_at_zero,
                     strictly_convex_on_positives=strict,
                     cli_name=_CLI_BY_NAME[name])


def from_cli_name(text: str) -> Generator:
    """Parse kl, kl-star, tv, hellinger, pearson, neyman, alpha:<float>, lecam, js"""
    key = text.strip().lower()
    if key.startswith("alpha:"):
        raw = key.split(":", 1)[1]
        try:
            a = float(raw)
        except ValueError:
            raise InputError(f"bad alpha value in '{text}'")
        return builtin("alpha", a)
    if key in CLI_NAMES:
        return builtin(CLI_NAMES[key])
    choices = list(CLI_NAMES) + ["alpha:<float>"]
    raise UnknownGeneratorError(text, difflib.get_close_matches(key, choices, n=3))


def custom(name: str, fn: ArrayFn, at_zero: ExtReal, conj_at_zero: ExtReal,
           strictly_convex_at_one: bool = True,
           strictly_convex_on_positives: bool = True,
           domain_hint: str = "(0, inf)") -> Generator:
    """User generator. Boundary values are recorded as declared, not checked."""
    g = Generator(name, fn, float(at_zero), float(conj_at_zero),
                  strictly_convex_at_one=strictly_convex_at_one,
                  strictly_convex_on_positives=strictly_convex_on_positives,
                  domain_hint=domain_hint)
    if g(1.0) != 0.0:
        raise InputError(f"generator '{name}' must satisfy f(1) = 0, got {g(1.0)!r}")
    return g


def conjugate(g: Generator) -> Generator:
    """t -> t g(1/t); swaps f(0) and f*(0). Conjugating twice returns g."""
    if g.conjugate_of is not None:
        return g.conjugate_of
    base = g.fn

    def fn(t):
        return t * base(1.0 / t)

    name = g.name[:-1] if g.name.endswith("*") else g.name + "*"
    return Generator(name, fn, g.conj_at_zero, g.at_zero,
                     strictly_convex_at_one=g.strictly_convex_at_one,
                     strictly_convex_on_positives=g.strictly_convex_on_positives,
                     domain_hint=g.domain_hint,
                     cli_name=None,
                     conjugate_of=g)


def affine_shift(g: Generator, c: float) -> Generator:
    """g(t) + c (t - 1); same divergences, f(0) moves by -c and f*(0) by +c."""
    if c == 0.0:
        return g
    base = g.fn

    def fn(t):
        return base(t) + c * (t - 1.0)

    return replace(g, name=f"{g.name}{c:+g}(t-1)", fn=fn,
                   at_zero=g.at_zero - c, conj_at_zero=g.conj_at_zero + c,
                   cli_name=None, conjugate_of=None)


def renyi_shift(alpha: float) -> Generator:
    """(t^a - 1)/(a (a - 1)): f_alpha up to an affine term."""
    a = float(alpha)
    if a in (0.0, 1.0):
        raise InputError("renyi_shift needs alpha outside {0, 1}")
    return affine_shift(builtin("alpha", a), 1.0 / (a - 1.0))


def sup_bound(g: Generator) -> ExtReal:
    """(f + f*)(0), the largest value D_f can take."""
    return ext_sum([g.at_zero, g.conj_at_zero])


def is_convex_on_samples(g: Generator, rng: np.random.Generator, trials: int = 10_000,
                         lo: float = 1e-3, hi: float = 1e3, tol: float = 1e-9) -> bool:
    """Random triples x < z < y on a log scale; f(z) <= a f(x) + (1-a) f(y)."""
    x = np.exp(rng.uniform(math.log(lo), math.log(hi), trials))
    y = np.exp(rng.uniform(math.log(lo), math.log(hi), trials))
    x, y = np.minimum(x, y), np.maximum(x, y)
    a = rng.uniform(0.0, 1.0, trials)
    z = a * x + (1.0 - a) * y
    rhs = a * g(x) + (1.0 - a) * g(y)
    return bool(np.all(g(z) <= rhs + tol * np.maximum(1.0, np.abs(rhs))))


def numeric_conj_limit(g: Generator, t: float = 1e12) -> float:
    """f(t)/t at a large t, the numeric stand-in for f*(0)."""
    return g(t) / t
