"""Figure rendering for besn CSV outputs."""

from .render import PlotSpec, RenderResult, render

__version__ = "0.1.0"
