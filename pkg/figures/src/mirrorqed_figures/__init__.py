"""Publication-style figures from mirrorqed CSV artifacts."""

from .render import FigureDataError, FigureSpec, RenderResult, render

__all__ = ["FigureDataError", "FigureSpec", "RenderResult", "render"]
