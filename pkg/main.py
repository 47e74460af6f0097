#!/usr/bin/env python3
"""
QA Intelligence Simulator - Main entry point
Runs quantum algorithms step by step and reports their Shannon / von Neumann entropy traces
"""

import sys
from logger import configure_logging, log_startup_info

# Configure logging first
logger = configure_logging()


def main() -> int:
    """Main entry point"""
    log_startup_info(logger)

    try:
        from cli_report import main as cli_main
        return cli_main(sys.argv[1:])
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 130
    except Exception as e:
        logger.error(f"Fatal error: {e}", exc_info=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
