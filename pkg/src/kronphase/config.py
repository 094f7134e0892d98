"""Experiment configuration: validated dataclass plus flat key=value files.

Config files are plain text, one `key = value` pair per line, with `#`
comments and blank lines ignored.  Unknown keys are errors.  Units:
dims are matrix sizes; delta_max, window_half_width and arc lengths are
in units of the mean point spacing on the rescaled circle (whose
circumference equals the product of dims).
"""

from __future__ import annotations

from dataclasses import dataclass, fields

MODES = ("single", "pair", "triple")
CURVES = ("auto", "sine_pair", "superposed", "poisson")

_U64 = 1 << 64


def _parse_dims(text):
    parts = [p for p in text.replace(",", " ").split() if p]
    return tuple(int(p) for p in parts)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one Monte Carlo campaign."""

    mode: str
    dims: tuple
    n_samples: int
    seed: int
    delta_max: float = 4.0
    n_bins: int = 40
    window_half_width: float | None = None
    workers: int = 1
    k_analytic: int = 2
    curve: str = "auto"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError("mode must be one of %s" % (MODES,))
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        want = {"single": 1, "pair": 2, "triple": 3}[self.mode]
        if len(dims) != want:
            raise ValueError("mode %s needs %d dims, got %d" % (self.mode, want, len(dims)))
        if any(d < 1 for d in dims):
            raise ValueError("dims must be positive")
        if self.factor_product < 2:
            raise ValueError("the configuration needs at least 2 points per sample")
        if int(self.n_samples) < 1:
            raise ValueError("n_samples must be >= 1")
        if not 0 <= int(self.seed) < _U64:
            raise ValueError("seed must be in [0, 2^64)")
        if not 0.0 < float(self.delta_max) <= self.factor_product / 2:
            raise ValueError("delta_max must lie in (0, product(dims)/2]")
        if int(self.n_bins) < 4:
            raise ValueError("n_bins must be >= 4")
        if self.window_half_width is not None:
            w = float(self.window_half_width)
            if not 0.0 < 2 * w <= self.factor_product:
                raise ValueError("window_half_width must satisfy 0 < 2w <= product(dims)")
        if int(self.workers) < 1:
            raise ValueError("workers must be >= 1")
        if not 1 <= int(self.k_analytic) <= 8:
            raise ValueError("k_analytic must lie in [1, 8]")
        if self.curve not in CURVES:
            raise ValueError("curve must be one of %s" % (CURVES,))

    @property
    def factor_product(self):
        p = 1
        for d in self.dims:
            p *= int(d)
        return p

    def to_dict(self):
        return {
            "mode": self.mode,
            "dims": list(self.dims),
            "n_samples": int(self.n_samples),
            "seed": int(self.seed),
            "delta_max": float(self.delta_max),
            "n_bins": int(self.n_bins),
            "window_half_width": (
                None if self.window_half_width is None else float(self.window_half_width)
            ),
            "workers": int(self.workers),
            "k_analytic": int(self.k_analytic),
            "curve": self.curve,
        }


# key -> value parser; the parsed values feed ExperimentConfig as-is.
CONFIG_PARSERS = {
    "mode": str,
    "dims": _parse_dims,
    "n_samples": int,
    "seed": int,
    "delta_max": float,
    "n_bins": int,
    "window_half_width": float,
    "workers": int,
    "k_analytic": int,
    "curve": str,
}

assert set(CONFIG_PARSERS) == {f.name for f in fields(ExperimentConfig)}


def parse_config_file(path):
    """Read a flat key = value config file into a keyword dict.

    Raises ValueError on unknown keys, duplicate keys, or malformed
    lines or values.
    """
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError("%s:%d: expected 'key = value'" % (path, lineno))
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in CONFIG_PARSERS:
                raise ValueError("%s:%d: unknown key %r" % (path, lineno, key))
            if key in out:
                raise ValueError("%s:%d: duplicate key %r" % (path, lineno, key))
            try:
                out[key] = CONFIG_PARSERS[key](value)
            except ValueError as exc:
                raise ValueError("%s:%d: bad value for %s: %s" % (path, lineno, key, exc))
    return out


def build_config(file_values=None, overrides=None):
    """Merge config-file values and explicit overrides into a config.

    Overrides with value None are ignored, so CLI flags that were not
    given fall through to file values and then to dataclass defaults.
    """
    merged = dict(file_values or {})
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in CONFIG_PARSERS:
            raise ValueError("unknown config key %r" % key)
        merged[key] = value
    missing = [k for k in ("mode", "dims", "n_samples", "seed") if k not in merged]
    if missing:
        raise ValueError("missing required config keys: %s" % ", ".join(missing))
    return ExperimentConfig(**merged)
