import os
from pathlib import Path

# Upper bound for n across every command. C_10 = 4862 associations is already
# slow for square enumeration; experiments may raise the cap through the env.
DEFAULT_MAX_N = 7
HARD_MAX_N = 10
MAX_N_CAP = int(os.getenv("CATALAN_MAX_N_CAP", str(HARD_MAX_N)))

# Fill policies for the 2-complex
# squares: naturality + product squares only (pentagons stay open)
# all: squares and pentagons (Mac Lane coherent complex)
FILL_POLICIES = ["squares", "all"]
DEFAULT_FILL = "squares"

OUTPUT_FORMATS = ["text", "json", "csv", "dot"]
DEFAULT_FORMAT = "text"

# Seed for random trees and property checks
DEFAULT_SEED = 20240601

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
LOG_LEVEL = os.getenv("CATALAN_LOG_LEVEL", "WARNING")

# JSON records
SCHEMA_VERSION = "1.0"
SCHEMA_FOLDER = Path(__file__).resolve().parent / "schemas"
