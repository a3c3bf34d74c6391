import os

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

# Try to load environment variables from .env file (for local development only)
try:
    from app.utils.env_loader import load_env_file

    load_env_file()
except ImportError:
    pass  # Skip if not in development mode

from app.config import logger
from app.errors import PolyMeinardusError
from app.routes import analysis, health

# The CLI stays quiet by default; the service logs requests
if "POLYMEINARDUS_LOG_LEVEL" not in os.environ:
    logger.set_level("INFO")

# Initialize FastAPI app
app = FastAPI(title="polymeinardus")

# Include routers
app.include_router(health.router)
app.include_router(analysis.router)


@app.exception_handler(PolyMeinardusError)
async def library_error_handler(request: Request, exc: PolyMeinardusError):
    """Library errors carry their own HTTP status."""
    logger.info(
        "Request rejected",
        {"path": request.url.path, "error": type(exc).__name__, "status": exc.http_status},
    )
    return JSONResponse(status_code=exc.http_status, content={"detail": str(exc)})


if __name__ == "__main__":
    import uvicorn

    port = int(os.environ.get("PORT", 8080))

    # Bind to localhost by default, but allow external access if explicitly enabled
    host = (
        "0.0.0.0"
        if os.environ.get("ALLOW_EXTERNAL_ACCESS", "").lower() in ("true", "1", "yes")
        else "127.0.0.1"
    )
    logger.info(f"Starting server on {host}:{port}")

    uvicorn.run("app.main:app", host=host, port=port)
