"""Phase-space tools, stabilizer mean states, quantum convolution and entropic measures for qudits."""

__version__ = "0.1.0"
