import logging

from config import Config

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format=Config.LOG_FORMAT
)


def create_cli(config_class=Config):
    from mcc_planner.commands import build_group
    return build_group(config_class)
