"""Python front end for the vanetcast broadcast simulator."""

from ._core import (
    ConfigError,
    DegenerateVertex,
    OutOfRange,
    ParseError,
    UnknownPreset,
    ValidationError,
    angle_at,
    config_keys,
    default_max_defer_time,
    defer_time,
    distance,
    normalize,
    preset,
    preset_names,
    replay_fig1,
    run,
    run_to_dir,
    static_receivers,
)

PROTOCOLS = ("flooding", "wpbm", "odam", "odam-c")


def sweep(config="", protocols=PROTOCOLS, seeds=(1,)):
    """Mean summary metrics per protocol over `seeds`."""
    out = {}
    for name in protocols:
        runs = [run(config, protocol=name, seed=s)["summary"] for s in seeds]
        runs = [r for r in runs if r is not None]
        out[name] = {
            key: sum(r[key] for r in runs) / len(runs)
            for key in ("pdr", "redundancy", "tx_count")
        } if runs else None
    return out


__all__ = [
    "ConfigError",
    "DegenerateVertex",
    "OutOfRange",
    "ParseError",
    "PROTOCOLS",
    "UnknownPreset",
    "ValidationError",
    "angle_at",
    "config_keys",
    "default_max_defer_time",
    "defer_time",
    "distance",
    "normalize",
    "preset",
    "preset_names",
    "replay_fig1",
    "run",
    "run_to_dir",
    "static_receivers",
    "sweep",
]
