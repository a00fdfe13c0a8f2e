from pydantic_settings import BaseSettings, SettingsConfigDict

from mixedurn.constants import DEFAULT_BINS


class Settings(BaseSettings):
    """Create the settings.

    Don't populate here. The variables are only declared to make life
    easier for IDE autocomplete. Populate in the environment with the
    MIXED_URN_ prefix, in .env.shared -- or, for machine-local overrides,
    .env.private (which should stay out of source control).

    - workers: fallback for --workers; 0 means every available core
    - frontier_limit: largest number of (y, b) states allowed on one level
      of the exact distribution before it gives up
    - bins: default histogram resolution
    - out_dir, log_level: defaults for --out and --log-level
    """

    # MIXED_URN_WORKERS
    workers: int = 0

    frontier_limit: int = 5000

    bins: int = DEFAULT_BINS

    # directory the CLI writes into when --out is not given
    out_dir: str = "."

    log_level: str = "INFO"

    model_config = SettingsConfigDict(
        env_prefix="MIXED_URN_",
        # `.env.private` takes priority over `.env.shared`
        env_file=(".env.shared", ".env.private"),
    )
