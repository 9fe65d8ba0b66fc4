from pathlib import Path
from typing import Optional, Union

from ._types.report import Summary
from .config import ConfigFile, ExperimentConfig, load_config
from .runner import ExperimentRunner

__all__ = ["run", "verify_all"]

ConfigLike = Union[ConfigFile, ExperimentConfig, str, Path]


def _as_file(config: ConfigLike) -> ConfigFile:
    if isinstance(config, ConfigFile):
        return config
    if isinstance(config, ExperimentConfig):
        return ConfigFile(experiments=[config])
    return load_config(config)


def run(config: ConfigLike, out: Optional[Path] = None) -> Summary:
    """
    Args:
        config (ConfigLike): Parsed config, one experiment, or a JSON config path
        out (Optional[Path], optional): Root for all outputs. Defaults to None.

    Returns:
        Summary: One report per experiment; `passed` is False if any check failed
    """
    return ExperimentRunner(_as_file(config), out).run()


def verify_all(config: ConfigLike) -> Summary:
    """
    Args:
        config (ConfigLike): Parsed config, single experiment, or path to a JSON config

    Returns:
        Summary: Pass/fail/expected-fail per check for each configured instance
    """
    return ExperimentRunner(_as_file(config)).verify()
