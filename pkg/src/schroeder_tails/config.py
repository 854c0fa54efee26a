"""Run configuration: a flat key/value file in a TOML subset.

Unset (``None``) fields are simply absent from the file, so a config
round-trips through :func:`dumps` / :func:`loads` unchanged.
"""
import json
import sys
from dataclasses import asdict, dataclass, field, fields

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import errors


@dataclass
class RunConfig:
    probs: list = None
    m_phi: int = None  # None: adaptive order
    m_pi: int = 64
    t_iter: int = 12
    t_limit: int = 40
    t_sim: int = 20
    grid: int = 1024
    samples: int = 512
    xmin: float = 1e-3
    xmax: float = 2.0
    points: int = 200
    x: list = None
    pi_grid: list = field(default_factory=lambda: ["re:0:20:50", "im:0:20:50"])
    method: str = "iteration"
    fourier: bool = True
    n: int = 100_000
    seed: int = 42
    cap: int = 2 ** 24
    summary: bool = False
    emit_plot: bool = False
    show_all: bool = False
    out: str = "-"
    meta: str = None

    def to_dict(self):
        return asdict(self)

    def updated(self, **overrides):
        data = self.to_dict()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig(**data)


_NAMES = {f.name for f in fields(RunConfig)}


def dumps(cfg):
    lines = []
    for key, value in cfg.to_dict().items():
        if value is None:
            continue
        # JSON scalars and flat lists are valid TOML values
        lines.append(f"{key} = {json.dumps(value)}")
    return "\n".join(lines) + "\n"


def loads(text):
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise errors.InvalidInput(f"bad config file: {exc}") from exc
    unknown = set(data) - _NAMES
    if unknown:
        raise errors.InvalidInput(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**data)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dump(cfg, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(cfg))
