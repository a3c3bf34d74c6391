#!/usr/bin/env python3
"""
Simple script to run the HTTP service locally for development.
This will load environment variables from .env file and start the server.
"""

import os
import sys
from pathlib import Path

import uvicorn

# Add the project root to the path to allow importing the app
sys.path.insert(0, str(Path(__file__).resolve().parent))


def main():
    # Try to load environment variables from .env file
    try:
        from app.utils.env_loader import load_env_file

        load_env_file()
    except ImportError:
        print(
            "Warning: Could not import env_loader. Make sure the application is properly installed.",
            file=sys.stderr,
        )

    port = int(os.environ.get("PORT", 8080))
    host = (
        "0.0.0.0"
        if os.environ.get("ALLOW_EXTERNAL_ACCESS", "").lower() in ("true", "1", "yes")
        else "127.0.0.1"
    )
    print(f"Starting server on http://{host}:{port}", file=sys.stderr)
    print("Press Ctrl+C to stop the server", file=sys.stderr)

    uvicorn.run(
        "app.main:app",
        host=host,
        port=port,
        reload=True,  # Enable auto-reload for development
        log_level=os.environ.get("POLYMEINARDUS_LOG_LEVEL", "info").lower(),
    )


if __name__ == "__main__":
    main()
