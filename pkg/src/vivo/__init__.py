"""Real-time video descriptor engine.

Computes perceptual image features (warmth, sharpness, spectral detail,
optical flow, luminance) per frame, maps them through scalers and a routing
matrix, and streams them as OSC messages over UDP to external synthesis
engines. Ships with an offline corpus analyzer and an HTTP/WebSocket control
API for live mapping edits.
"""

__version__ = "0.1.0"
