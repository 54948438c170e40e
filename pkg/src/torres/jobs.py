"""Job configuration files: parsing, canonical serialization and z generation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from .configuration import Configuration
from .errors import InvalidConfiguration
from .polynomial import RatFun, SparsePoly


def parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise InvalidConfiguration(f"expected a rational, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidConfiguration(f"cannot parse rational {x!r}") from exc
    if isinstance(x, float):
        return Fraction(x)
    raise InvalidConfiguration(f"expected a rational, got {x!r}")


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_complex(x) -> complex:
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(float(x), 0.0)
    raise InvalidConfiguration(f"expected a complex number as [re, im], got {x!r}")


def format_complex(c) -> list:
    c = complex(c)
    return [float(c.real), float(c.imag)]


@dataclass
class Bounds:
    series_bound: int = 20
    tau_min: float = 0.1
    tol: float = 1e-8


@dataclass
class ZSpec:
    explicit: Optional[list] = None     # complex z_i
    xi: Optional[list] = None           # floats (or rationals) for generation
    phases: Optional[list] = None


@dataclass
class JobConfig:
    name: str
    r: int
    n: int
    alphas: list
    xi0: list
    P: list                       # [(coef Fraction, exps tuple)]
    z: ZSpec
    bounds: Bounds = field(default_factory=Bounds)
    seed: int = 0
    lambda_basis: Optional[list] = None
    fraction: Optional[dict] = None

    def configuration(self) -> Configuration:
        return Configuration(tuple(tuple(a) for a in self.alphas))

    def polynomial(self) -> SparsePoly:
        return SparsePoly(self.n, {tuple(e): c for c, e in self.P})

    def jk_fraction(self) -> RatFun:
        if self.fraction is None:
            raise InvalidConfiguration("config has no 'fraction' entry")
        num = SparsePoly(self.r, {tuple(e): c for c, e in self.fraction["num"]})
        den = []
        for form, mult in self.fraction["den"]:
            den.append((form, mult))
        return RatFun.make(num, den)


def _require(d: dict, key: str):
    if key not in d:
        raise InvalidConfiguration(f"config is missing required field {key!r}")
    return d[key]


def _int_matrix(rows, name: str) -> list:
    try:
        out = [[int(x) for x in row] for row in rows]
    except (TypeError, ValueError) as exc:
        raise InvalidConfiguration(f"{name} must be a list of integer lists") from exc
    for row in rows:
        for x in row:
            if isinstance(x, float) and not float(x).is_integer():
                raise InvalidConfiguration(f"{name} entries must be integers")
    return out


def parse_config(data: dict) -> JobConfig:
    if not isinstance(data, dict):
        raise InvalidConfiguration("config must be a JSON object")
    alphas = _int_matrix(_require(data, "alphas"), "alphas")
    r = int(data.get("r", len(alphas[0]) if alphas else 0))
    n = int(data.get("n", len(alphas)))
    if n != len(alphas) or any(len(a) != r for a in alphas):
        raise InvalidConfiguration(f"alphas must be an {n} x {r} integer matrix")
    xi0 = [parse_rational(x) for x in _require(data, "xi0")]
    if len(xi0) != r:
        raise InvalidConfiguration(f"xi0 must have {r} entries")
    P = []
    for term in _require(data, "P"):
        exps = tuple(int(e) for e in term["exps"])
        if len(exps) != n or any(e < 0 for e in exps):
            raise InvalidConfiguration(f"P exponents must be {n} nonnegative integers")
        P.append((parse_rational(term["coef"]), exps))
    degrees = {sum(e) for c, e in P if c}
    if len(degrees) > 1 or (degrees and degrees != {n - r}):
        raise InvalidConfiguration(f"P must be homogeneous of degree n - r = {n - r}")
    zraw = _require(data, "z")
    if isinstance(zraw, list):
        zs = ZSpec(explicit=[parse_complex(x) for x in zraw])
        if len(zs.explicit) != n:
            raise InvalidConfiguration(f"z must have {n} entries")
    elif isinstance(zraw, dict):
        xi = [float(parse_rational(x)) if isinstance(x, str) else float(x) for x in _require(zraw, "xi")]
        if len(xi) != r:
            raise InvalidConfiguration(f"z.xi must have {r} entries")
        phases = zraw.get("phases")
        if phases is not None:
            phases = [float(p) for p in phases]
            if len(phases) != n:
                raise InvalidConfiguration(f"z.phases must have {n} entries")
        zs = ZSpec(xi=xi, phases=phases)
    else:
        raise InvalidConfiguration("z must be a list of complex numbers or an {xi, phases} object")
    b = data.get("bounds", {})
    bounds = Bounds(int(b.get("series_bound", Bounds.series_bound)),
                    float(b.get("tau_min", Bounds.tau_min)),
                    float(b.get("tol", Bounds.tol)))
    lam = data.get("lambda_basis")
    if lam is not None:
        lam = _int_matrix(lam, "lambda_basis")
    frac = data.get("fraction")
    if frac is not None:
        num = [(parse_rational(t["coef"]), tuple(int(e) for e in t["exps"])) for t in frac.get("num", [])]
        den = []
        for t in frac.get("den", []):
            if "alpha" in t:
                k = int(t["alpha"])
                if not 1 <= k <= n:
                    raise InvalidConfiguration(f"fraction refers to alpha {k}, expected 1..{n}")
                form = tuple(Fraction(x) for x in alphas[k - 1])
            else:
                form = tuple(parse_rational(x) for x in t["form"])
            den.append((form, int(t.get("mult", 1))))
        frac = {"num": num, "den": den}
    return JobConfig(name=str(data.get("name", "job")), r=r, n=n, alphas=alphas, xi0=xi0, P=P,
                     z=zs, bounds=bounds, seed=int(data.get("seed", 0)), lambda_basis=lam,
                     fraction=frac)


def load_config(path: str) -> JobConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidConfiguration(f"{path}: invalid JSON ({exc})") from exc
    return parse_config(data)


def config_to_dict(cfg: JobConfig) -> dict:
    out: dict[str, Any] = {
        "name": cfg.name,
        "r": cfg.r,
        "n": cfg.n,
        "alphas": [list(a) for a in cfg.alphas],
    }
    if cfg.lambda_basis is not None:
        out["lambda_basis"] = [list(l) for l in cfg.lambda_basis]
    out["xi0"] = [format_rational(x) for x in cfg.xi0]
    out["P"] = [{"coef": format_rational(c), "exps": list(e)} for c, e in cfg.P]
    if cfg.z.explicit is not None:
        out["z"] = [format_complex(x) for x in cfg.z.explicit]
    else:
        zd: dict[str, Any] = {"xi": [float(x) for x in cfg.z.xi]}
        if cfg.z.phases is not None:
            zd["phases"] = [float(p) for p in cfg.z.phases]
        out["z"] = zd
    out["bounds"] = {"series_bound": cfg.bounds.series_bound, "tau_min": cfg.bounds.tau_min,
                     "tol": cfg.bounds.tol}
    out["seed"] = cfg.seed
    if cfg.fraction is not None:
        out["fraction"] = {
            "num": [{"coef": format_rational(c), "exps": list(e)} for c, e in cfg.fraction["num"]],
            "den": [{"form": [format_rational(x) for x in f], "mult": m} for f, m in cfg.fraction["den"]],
        }
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def serialize_config(cfg: JobConfig) -> str:
    return dumps(config_to_dict(cfg))


def generate_z(cfg: JobConfig) -> list:
    """Resolve the z entry of a job to explicit complex coordinates.

    Moduli come from the corrected tropical solution of the dominant flag
    (largest |d(F)|) when one exists, else from the minimum-norm t with
    sum t_i alpha_i = xi; phases are given or drawn from the seeded generator.
    """
    from .bside import ts_vector, zero_flags

    if cfg.z.explicit is not None:
        return list(cfg.z.explicit)
    A = cfg.configuration()
    xi = np.array(cfg.z.xi, dtype=float)
    try:
        flags = zero_flags(A, tuple(xi))
    except Exception:
        flags = []
    if flags:
        F = max(flags, key=lambda f: abs(f.dF))
        t = ts_vector(A, F, xi)
    else:
        t = np.linalg.lstsq(np.array(A.alphas, dtype=float).T, xi, rcond=None)[0]
    if cfg.z.phases is not None:
        phases = np.array(cfg.z.phases, dtype=float)
    else:
        phases = 2 * math.pi * np.random.default_rng(cfg.seed).random(A.n)
    return [complex(math.exp(-ti) * math.cos(ph), math.exp(-ti) * math.sin(ph))
            for ti, ph in zip(t, phases)]
