import logging
import sys

from pydantic import ValidationError

from app.commands import build_config, build_parser, dispatch
from app.errors import ToolError

logger = logging.getLogger(__name__)


def run(argv=None) -> int:
    """Parse argv, run one subcommand, print its output; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 after --help
        return int(exc.code or 0)

    try:
        cfg = build_config(args)
    except ValidationError as e:
        print(f"❌ error: {e}", file=sys.stderr)
        return 2

    logging.basicConfig(level=cfg.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(cfg.log_level)

    try:
        output = dispatch(args, cfg)
    except ToolError as e:
        logger.debug("%s failed: %s", args.command, e.detail)
        print(f"❌ error: {e.detail}", file=sys.stderr)
        return e.exit_code
    print(output)
    return 0


if __name__ == "__main__":
    sys.exit(run())
