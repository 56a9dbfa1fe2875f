"""Run configuration: a sectioned key-value file, strictly validated.

Format (INI syntax, all times in hours)::

    [hazard]
    kind = bathtub              ; constant | weibull | bathtub | tabulated
    betas = 0.5, 1.0, 2.5       ; bathtub: three shape parameters
    thetas = 100, 200, 500      ; bathtub: three scale parameters
    breakpoints = 100, 1000     ; bathtub: phase boundaries t1 < t2
    ; constant:  rate = 1e-3
    ; weibull:   shape = 1.5    scale = 800
    ; tabulated: times = 0, 100, 1000    rates = 1e-3, 5e-4, 2e-3

    [array]
    codes = 25:15 12:10         ; n:k per dimension, innermost first

    [grid]
    start = 0.01
    end = 2500
    points = 200
    spacing = log               ; linear | log (log needs start > 0)

    [simulation]                ; optional, needed by the simulate command
    trials = 100000
    seed = 1234
    workers = 1

    [output]                    ; optional
    path = out.csv
    loglog = true

Unknown sections or keys are rejected with a diagnostic naming them; a
validated config re-serialized with to_text() parses back to an equal
RunConfig.
"""

import configparser
import io
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .hazards import (CompositeBathtub, ConstantHazard, HazardModel,
                      TabulatedHazard, WeibullHazard)
from .mdscore import ArrayConfig, MdsCode

_HAZARD_KEYS = {
    "constant": {"rate"},
    "weibull": {"shape", "scale"},
    "bathtub": {"betas", "thetas", "breakpoints"},
    "tabulated": {"times", "rates"},
}
_GRID_KEYS = {"start", "end", "points", "spacing"}
_SIM_KEYS = {"trials", "seed", "workers"}
_OUT_KEYS = {"path", "loglog"}
_SECTIONS = {"hazard", "array", "grid", "simulation", "output"}


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters; equality is semantic identity."""

    hazard: HazardModel
    codes: tuple
    grid_start: float
    grid_end: float
    grid_points: int
    grid_spacing: str
    trials: int = None
    seed: int = None
    workers: int = 1
    out_path: str = None
    loglog: bool = False

    @property
    def array(self) -> ArrayConfig:
        return ArrayConfig(self.codes)

    def grid(self) -> np.ndarray:
        if self.grid_spacing == "log":
            return np.geomspace(self.grid_start, self.grid_end, self.grid_points)
        return np.linspace(self.grid_start, self.grid_end, self.grid_points)

    def to_text(self) -> str:
        out = io.StringIO()
        out.write("[hazard]\n")
        m = self.hazard
        if isinstance(m, ConstantHazard):
            out.write(f"kind = constant\nrate = {m.rate!r}\n")
        elif isinstance(m, WeibullHazard):
            out.write(f"kind = weibull\nshape = {m.shape!r}\nscale = {m.scale!r}\n")
        elif isinstance(m, CompositeBathtub):
            out.write("kind = bathtub\n")
            out.write("betas = " + ", ".join(repr(v) for v in m.betas) + "\n")
            out.write("thetas = " + ", ".join(repr(v) for v in m.thetas) + "\n")
            out.write("breakpoints = " + ", ".join(repr(v) for v in m.knees) + "\n")
        elif isinstance(m, TabulatedHazard):
            out.write("kind = tabulated\n")
            out.write("times = " + ", ".join(repr(float(v)) for v in m.times) + "\n")
            out.write("rates = " + ", ".join(repr(float(v)) for v in m.rates) + "\n")
        else:
            raise ConfigError(f"cannot serialize hazard model {m!r}")
        out.write("\n[array]\ncodes = "
                  + " ".join(f"{c.n}:{c.k}" for c in self.codes) + "\n")
        out.write(f"\n[grid]\nstart = {self.grid_start!r}\nend = {self.grid_end!r}\n")
        out.write(f"points = {self.grid_points}\nspacing = {self.grid_spacing}\n")
        if self.trials is not None or self.seed is not None:
            out.write("\n[simulation]\n")
            if self.trials is not None:
                out.write(f"trials = {self.trials}\n")
            if self.seed is not None:
                out.write(f"seed = {self.seed}\n")
            out.write(f"workers = {self.workers}\n")
        if self.out_path is not None or self.loglog:
            out.write("\n[output]\n")
            if self.out_path is not None:
                out.write(f"path = {self.out_path}\n")
            out.write(f"loglog = {'true' if self.loglog else 'false'}\n")
        return out.getvalue()


def _fail(where, msg):
    raise ConfigError(f"{where}: {msg}")


def _get_float(sec, section, key, cond=None, want=""):
    raw = sec.get(key)
    if raw is None:
        _fail(f"{section}.{key}", "missing required key")
    try:
        val = float(raw)
    except ValueError:
        _fail(f"{section}.{key}", f"not a number: {raw!r}")
    if cond is not None and not cond(val):
        _fail(f"{section}.{key}", f"must be {want}, got {raw!r}")
    return val


def _get_int(sec, section, key, cond=None, want="", default=None):
    raw = sec.get(key)
    if raw is None:
        if default is not None:
            return default
        _fail(f"{section}.{key}", "missing required key")
    try:
        val = int(raw)
    except ValueError:
        _fail(f"{section}.{key}", f"not an integer: {raw!r}")
    if cond is not None and not cond(val):
        _fail(f"{section}.{key}", f"must be {want}, got {raw!r}")
    return val


def _get_floats(sec, section, key):
    raw = sec.get(key)
    if raw is None:
        _fail(f"{section}.{key}", "missing required key")
    try:
        return tuple(float(tok) for tok in raw.replace(",", " ").split())
    except ValueError:
        _fail(f"{section}.{key}", f"not a number list: {raw!r}")


def _check_keys(parser, section, allowed):
    extra = set(parser[section]) - allowed
    if extra:
        _fail(f"{section}.{sorted(extra)[0]}", "unknown key")


def parse_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None,
                                       inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax error: {exc}") from exc

    unknown = set(parser.sections()) - _SECTIONS
    if unknown:
        _fail(sorted(unknown)[0], "unknown section")
    for required in ("hazard", "array", "grid"):
        if required not in parser:
            _fail(required, "missing required section")

    hazard = _parse_hazard(parser)
    codes = _parse_codes(parser)

    _check_keys(parser, "grid", _GRID_KEYS)
    g = parser["grid"]
    start = _get_float(g, "grid", "start", lambda v: v >= 0, ">= 0")
    end = _get_float(g, "grid", "end", lambda v: v > 0, "> 0")
    points = _get_int(g, "grid", "points", lambda v: v >= 2, ">= 2")
    spacing = g.get("spacing", "linear")
    if spacing not in ("linear", "log"):
        _fail("grid.spacing", f"must be 'linear' or 'log', got {spacing!r}")
    if end <= start:
        _fail("grid.end", f"must exceed grid.start, got {end!r} <= {start!r}")
    if spacing == "log" and start <= 0:
        _fail("grid.start", "log spacing requires start > 0")

    trials = seed = None
    workers = 1
    if "simulation" in parser:
        _check_keys(parser, "simulation", _SIM_KEYS)
        s = parser["simulation"]
        if "trials" in s:
            trials = _get_int(s, "simulation", "trials", lambda v: v >= 1, ">= 1")
        if "seed" in s:
            seed = _get_int(s, "simulation", "seed",
                            lambda v: 0 <= v < 2 ** 64, "a 64-bit unsigned integer")
        workers = _get_int(s, "simulation", "workers",
                           lambda v: v >= 1, ">= 1", default=1)

    out_path = None
    loglog = False
    if "output" in parser:
        _check_keys(parser, "output", _OUT_KEYS)
        o = parser["output"]
        out_path = o.get("path")
        raw = o.get("loglog", "false").lower()
        if raw not in ("true", "false", "yes", "no", "1", "0"):
            _fail("output.loglog", f"must be a boolean, got {raw!r}")
        loglog = raw in ("true", "yes", "1")

    return RunConfig(hazard=hazard, codes=codes, grid_start=start,
                     grid_end=end, grid_points=points, grid_spacing=spacing,
                     trials=trials, seed=seed, workers=workers,
                     out_path=out_path, loglog=loglog)


def _parse_hazard(parser) -> HazardModel:
    sec = parser["hazard"]
    kind = sec.get("kind")
    if kind not in _HAZARD_KEYS:
        _fail("hazard.kind", f"must be one of {sorted(_HAZARD_KEYS)}, got {kind!r}")
    _check_keys(parser, "hazard", _HAZARD_KEYS[kind] | {"kind"})
    try:
        if kind == "constant":
            return ConstantHazard(_get_float(sec, "hazard", "rate",
                                             lambda v: v > 0, "> 0"))
        if kind == "weibull":
            return WeibullHazard(
                shape=_get_float(sec, "hazard", "shape", lambda v: v > 0, "> 0"),
                scale=_get_float(sec, "hazard", "scale", lambda v: v > 0, "> 0"))
        if kind == "bathtub":
            return CompositeBathtub(
                betas=_get_floats(sec, "hazard", "betas"),
                thetas=_get_floats(sec, "hazard", "thetas"),
                knees=_get_floats(sec, "hazard", "breakpoints"))
        return TabulatedHazard(_get_floats(sec, "hazard", "times"),
                               _get_floats(sec, "hazard", "rates"))
    except ValueError as exc:
        raise ConfigError(f"hazard: {exc}") from exc


def _parse_codes(parser) -> tuple:
    _check_keys(parser, "array", {"codes"})
    raw = parser["array"].get("codes")
    if raw is None:
        _fail("array.codes", "missing required key")
    codes = []
    for tok in raw.split():
        parts = tok.split(":")
        if len(parts) != 2:
            _fail("array.codes", f"expected n:k tokens, got {tok!r}")
        try:
            n, k = int(parts[0]), int(parts[1])
            codes.append(MdsCode(n, k))
        except ValueError as exc:
            _fail("array.codes", f"bad code {tok!r}: {exc}")
    if not codes:
        _fail("array.codes", "needs at least one n:k code")
    return tuple(codes)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return parse_config(text)
