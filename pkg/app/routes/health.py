from fastapi import APIRouter

from app.core.config import TOOL_NAME, TOOL_VERSION

router = APIRouter()


@router.get("/")
async def health_check():
    return {"status": "success", "tool": TOOL_NAME, "version": TOOL_VERSION}
