"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: entrypoint.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: This is the code that will be called when the module is called as a program more than a library.
# // AR
# +==== END bridgelab =================+
"""
import sys
import argparse
from typing import List, Optional

try:
    from . import constants as CONST
    from .rogger import Rogger, RI
    from .experiment_config import ExperimentConfig, load_config
    from .artifact_files import ArtifactFolder
    from .experiments import run_experiment, validate_config
except ImportError:
    import constants as CONST
    from rogger import Rogger, RI
    from experiment_config import ExperimentConfig, load_config
    from artifact_files import ArtifactFolder
    from experiments import run_experiment, validate_config


class Runner:
    """Command line front of the experiments.

    Parses the arguments, loads and validates the configuration, applies
    the --seed and --out overrides and runs the experiment. Every failure
    is turned into an exit code: 1 for configuration errors, 2 for
    input/output errors and 3 for numerical failures.
    """

    def __init__(self, argv: Optional[List[str]] = None) -> None:
        """Parse the arguments and set the log toggles.

        Keyword Arguments:
            argv (Optional[List[str]]): Arguments to parse, sys.argv[1:] when None. Default: None
        """
        self.args = self._parse_args(argv)
        self.rogger: Rogger = RI
        if self.args.verbose is True:
            self.rogger.re_toggle(program_log=True, program_debug_log=True)

    def _parse_args(self, argv: Optional[List[str]]) -> argparse.Namespace:
        """Parse command-line arguments for the experiment runner.

        Returns:
            The populated argparse.Namespace with the parsed arguments.
        """
        parser = argparse.ArgumentParser(
            prog="bridgelab",
            description="Run a Schrödinger bridge experiment described by a JSON configuration"
        )
        parser.add_argument(
            "--config", "-c", required=True,
            help="Path to the JSON experiment configuration"
        )
        parser.add_argument(
            "--seed", "-s", type=int, default=None,
            help="Override the seed of the configuration"
        )
        parser.add_argument(
            "--out", "-o", default=None,
            help="Override the output folder of the configuration"
        )
        parser.add_argument(
            "--dry-run", action="store_true",
            help="Validate the configuration and exit without computing"
        )
        parser.add_argument(
            "-V", "--verbose", action="store_true",
            help="Activate all debug logging options of the program"
        )
        return parser.parse_args(argv)

    def _load(self) -> ExperimentConfig:
        config = load_config(self.args.config)
        if self.args.seed is not None and self.args.seed < 0:
            raise CONST.ConfigError(f"--seed must be nonnegative, got {self.args.seed}")
        return config.with_overrides(seed=self.args.seed, output_dir=self.args.out)

    def run(self) -> int:
        """Run the configured experiment.

        Returns:
            int: The process exit code.
        """
        try:
            config = self._load()
            validate_config(config)
            if self.args.dry_run:
                self.rogger.log_success(f"configuration {self.args.config} is valid ({config.kind.value})")
                return CONST.SUCCESS
            run_experiment(config, ArtifactFolder(config.output_dir))
        except CONST.ConfigError as error:
            self.rogger.log_error(str(error))
            return CONST.CONFIG_ERROR
        except CONST.NumericalFailure as error:
            self.rogger.log_critical(str(error))
            return CONST.NUMERICAL_ERROR
        except OSError as error:
            self.rogger.log_error(str(error))
            return CONST.IO_ERROR
        except CONST.DomainError as error:
            self.rogger.log_error(str(error))
            return CONST.CONFIG_ERROR
        return CONST.SUCCESS


def main(argv: Optional[List[str]] = None) -> None:
    """CLI entrypoint: run the experiment and exit with its code."""
    sys.exit(Runner(argv).run())


if __name__ == "__main__":
    main()
