from .exceptions import (  # noqa
    ConfigError, ConfigFileError, InvalidDataException, NoData, ValidationException)
from .runconfig import (  # noqa
    RunConfig, RunConfigValidator, parse_config_text, read_config_file, validation_messages)
from .validator import Validator  # noqa
