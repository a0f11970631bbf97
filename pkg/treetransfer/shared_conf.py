"""
Basic configuration tools
"""
import os
from argparse import ArgumentParser, Namespace
import beartype
from treetransfer.dyadic import ZERO, ONE, HALF
from treetransfer.support.config import Config, ENV_PREFIX
from treetransfer.log import set_verbose, vprint

# numpy seeds are unsigned 64-bit; negative seeds are taken modulo 2^64.
SEED_LOWER = -(1 << 63)
SEED_UPPER = (1 << 64) - 1


@beartype.beartype
def setup_base_config(config: Config, parser: ArgumentParser):
    """ Setup base config object"""
    parser.add_argument('--config-file', default=None,
                        help="YAML file with configuration values (also "
                        f"{ENV_PREFIX}CONFIG_FILE)")
    config.add_config_param('seed', default=0, validator='int',
                            lower=SEED_LOWER, upper=SEED_UPPER,
                            help="Seed of the deterministic samplers.")
    config.add_config_param('count', default=1000, validator='int', lower=1,
                            help="Number of samples (or sample triples).")
    config.add_config_param('max_depth', default=12, validator='int',
                            lower=1, help="Cap on sampled address lengths "
                            "and rendered depth.")
    config.add_config_param('boundary_fraction', default=HALF,
                            validator='dyadic', lower=ZERO, upper=ONE,
                            max_exponent=32, help="Share of samples drawn "
                            "from the boundary, as 'm/2^k'.")
    config.add_config_param('workers', default=1, validator='int', lower=1,
                            help="Number of worker threads for sampling.")
    config.add_config_param('verbose', default=False, validator='bool',
                            optional=True, help="Increase output verbosity.")
    config.add_args_to_argparser(parser)


def validate_config(config: Config, args: Namespace):
    """ Validate config object"""
    config_file_path = getattr(args, 'config_file', None) or \
        os.environ.get(f'{ENV_PREFIX}CONFIG_FILE')
    if config_file_path:
        vprint(f"Loading config from {config_file_path}.")
        config.add_yaml_file(config_file_path)
    # Validate the config object.
    config.validate_config(args)
    # Define verbosity.
    set_verbose(config.verbose)
    return config
