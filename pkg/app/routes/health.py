from importlib.metadata import PackageNotFoundError, version

from fastapi import APIRouter

# Create router for health endpoints
router = APIRouter()


def _version() -> str:
    try:
        return version("polymeinardus")
    except PackageNotFoundError:
        return "unknown"


@router.get("/health")
async def health_check():
    """Simple health check endpoint for monitoring."""
    return {"status": "healthy", "version": _version()}
