"""
Configuration management for diagonal-copula analysis
"""

import logging
import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from src.services.diag_file_service import DiagFileConfig
from src.services.export_service import ExportConfig
from src.services.svg_service import SvgConfig

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)


@dataclass
class EngineConfig:
    grid_n: int = 512
    tolerance: float = 1e-12
    exact: bool = False
    seed: int = 0
    sample_count: int = 100000
    oracle_n: int = 512
    # 0 lets the grid scans pick a thread count from the CPU count
    workers: int = 0


@dataclass
class Config:
    """Main configuration class"""
    engine: EngineConfig
    files: DiagFileConfig
    export: ExportConfig
    svg: SvgConfig
    log_level: str = "INFO"
    log_file: Optional[str] = None


class CommandConfig(BaseModel):
    """Options of one CLI invocation"""
    subcommand: str
    input_path: Optional[str] = None
    n: int = Field(512, ge=2)
    output_path: Optional[str] = None
    seed: int = Field(0, ge=0)
    count: int = Field(100000, ge=1)
    exact: bool = False
    precision: int = Field(6, ge=0)


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() in ("1", "true", "yes")


def load_config() -> Config:
    """Load configuration from environment variables"""
    try:
        engine = EngineConfig(
            grid_n=int(os.getenv("DIAGCOP_GRID_N", "512")),
            tolerance=float(os.getenv("DIAGCOP_TOLERANCE", "1e-12")),
            exact=_flag("DIAGCOP_EXACT", "false"),
            seed=int(os.getenv("DIAGCOP_SEED", "0")),
            sample_count=int(os.getenv("DIAGCOP_SAMPLE_COUNT", "100000")),
            oracle_n=int(os.getenv("DIAGCOP_ORACLE_N", "512")),
            workers=int(os.getenv("DIAGCOP_WORKERS", "0")),
        )
        export = ExportConfig(
            precision=int(os.getenv("DIAGCOP_PRECISION", "6")),
            exact=engine.exact,
        )
        return Config(
            engine=engine,
            files=DiagFileConfig(directory=os.getenv("DIAGCOP_DIAGONALS_DIR", "diagonals")),
            export=export,
            svg=SvgConfig(),
            log_level=os.getenv("LOG_LEVEL", "INFO"),
            log_file=os.getenv("LOG_FILE") or None,
        )
    except ValueError as e:
        logger.error(f"Error loading config: {e}")
        raise


def validate_config(config: Config) -> bool:
    """Validate configuration and return True if valid"""
    errors = []

    if config.engine.grid_n < 2:
        errors.append("DIAGCOP_GRID_N must be at least 2")
    if config.engine.oracle_n < 2:
        errors.append("DIAGCOP_ORACLE_N must be at least 2")
    if config.engine.tolerance < 0:
        errors.append("DIAGCOP_TOLERANCE must not be negative")
    if config.engine.seed < 0:
        errors.append("DIAGCOP_SEED must not be negative")
    if config.engine.workers < 0:
        errors.append("DIAGCOP_WORKERS must not be negative")
    if config.engine.sample_count < 1:
        errors.append("DIAGCOP_SAMPLE_COUNT must be at least 1")
    if config.export.precision < 0:
        errors.append("DIAGCOP_PRECISION must not be negative")
    if config.log_level.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        errors.append(f"LOG_LEVEL {config.log_level!r} is not a logging level")

    if errors:
        logger.error("Configuration errors:")
        for error in errors:
            logger.error(f"  - {error}")
        return False

    return True


def create_sample_env() -> str:
    """Create a sample .env file content"""
    return """# Diagonal copula bounds environment variables
# Copy this file to .env and adjust as needed

# Grid sizes
DIAGCOP_GRID_N=512
DIAGCOP_ORACLE_N=512

# Numerics
DIAGCOP_TOLERANCE=1e-12
DIAGCOP_EXACT=false
DIAGCOP_PRECISION=6

# Threads for grid scans (0 = CPU count)
DIAGCOP_WORKERS=0

# Sampling
DIAGCOP_SEED=0
DIAGCOP_SAMPLE_COUNT=100000

# Bundled diagonal files
DIAGCOP_DIAGONALS_DIR=diagonals

# Logging
LOG_LEVEL=INFO
LOG_FILE=logs/diagcop.log
"""


def save_env_template(filename: str = ".env") -> bool:
    """Save .env template file"""
    try:
        with open(filename, "w") as f:
            f.write(create_sample_env())
        return True
    except OSError as e:
        logger.error(f"Error saving .env template: {e}")
        return False


def get_config_summary(config: Config) -> dict:
    """Get a summary of the current configuration"""
    return {
        "engine": {
            "grid_n": config.engine.grid_n,
            "oracle_n": config.engine.oracle_n,
            "tolerance": config.engine.tolerance,
            "exact": config.engine.exact,
            "workers": config.engine.workers,
        },
        "sampling": {
            "seed": config.engine.seed,
            "sample_count": config.engine.sample_count,
        },
        "output": {
            "precision": config.export.precision,
            "diagonals_dir": config.files.directory,
        },
        "logging": {
            "level": config.log_level,
            "file": config.log_file,
        },
    }
