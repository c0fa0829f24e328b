"""Cryptanalysis workbench for two image ciphers: an elliptic-curve keyed
Hill cipher (ecchc) and a deliberately weak counter cipher (dwc), together
with the entropy/PSNR/UACI metric suite and working attacks on both.

The point of the exercise: the weak cipher posts excellent statistics
while being trivially breakable, so the statistics alone prove nothing.
"""

__version__ = "0.1.0"
