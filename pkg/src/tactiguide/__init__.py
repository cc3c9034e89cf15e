"""Non-visual exploration of geometric shapes on a virtual pin-array display.

The package guides a cursor around a polygon outline with directional pin
patterns, encodes distance to the next vertex as blink speed, signals
on-shape/off-shape on a second array, and ships a dark-pixel baseline,
synthetic explorer agents, an experiment harness with rank-sum statistics,
and a line-delimited JSON session gateway.
"""

__version__ = "0.1.0"
