# pylint: disable=no-self-argument
import copy
import logging
import logging.config
from typing import Any, Literal, Type

import ant31box.config
from ant31box.config import LOG_LEVELS, GConfig, LoggingConfigSchema
from pydantic import BaseModel, Field
from pydantic_settings import SettingsConfigDict

LOGGING_CONFIG: dict[str, Any] = copy.deepcopy(ant31box.config.LOGGING_CONFIG)
LOGGING_CONFIG["handlers"]["default"]["stream"] = "ext://sys.stderr"
LOGGING_CONFIG["loggers"].update({"curvezeta": {"handlers": ["default"], "level": "INFO", "propagate": True}})

logger: logging.Logger = logging.getLogger("curvezeta")

ENVPREFIX = "CURVEZETA"


class LoggingConfigCustomSchema(LoggingConfigSchema):
    log_config: dict[str, Any] | str | None = Field(default_factory=lambda: copy.deepcopy(LOGGING_CONFIG))


class ZetaConfigSchema(BaseModel):
    start_truncation: int = Field(default=8, ge=1, description="Initial per-branch jet truncation")
    max_truncation_norm: int = Field(default=512, ge=1, description="Give up once the truncation norm exceeds this")
    finite_field_budget: int = Field(default=1_000_000, ge=1, description="Maximal enumeration size over F_p")
    oracle_extra_degree: int = Field(default=5, ge=0, description="Series oracle degree is |c| plus this")
    concurrent_checks: bool = Field(default=True, description="Run independent checks in worker threads")
    output_format: Literal["text", "json"] = Field(default="text")


# Main configuration schema
class ConfigSchema(ant31box.config.ConfigSchema):
    model_config = SettingsConfigDict(
        env_prefix=f"{ENVPREFIX}_", env_nested_delimiter="__", case_sensitive=False, extra="allow"
    )
    name: str = Field(default="curvezeta")
    logging: LoggingConfigCustomSchema = Field(default_factory=LoggingConfigCustomSchema)
    zeta: ZetaConfigSchema = Field(default_factory=ZetaConfigSchema)


class Config(ant31box.config.Config[ConfigSchema]):
    _env_prefix = ENVPREFIX
    __config_class__: Type[ConfigSchema] = ConfigSchema

    @property
    def zeta(self) -> ZetaConfigSchema:
        return self.conf.zeta


def config(path: str | None = None, reload: bool = False) -> Config:
    GConfig[Config].set_conf_class(Config)
    if reload:
        GConfig[Config].reinit()
    # load the configuration
    GConfig[Config](path)
    # Return the instance of the configuration
    return GConfig[Config].instance()


def init_logging(conf: Config, level: str | None = None) -> None:
    log_config = conf.conf.logging.log_config
    if isinstance(log_config, dict):
        logging.config.dictConfig(log_config)
    elif isinstance(log_config, str):
        logging.config.fileConfig(log_config, disable_existing_loggers=False)
    if level is not None:
        logger.setLevel(LOG_LEVELS.get(level, level.upper()))
