"""Desk-scale toolkit for simultaneous vs. offline NMT evaluation.

Provides parallel-corpus preparation (filtering, BPE), diagonal IBM-2
word alignment, wait-k decoding paths and lagging metrics, toy online/offline
Transformer and Pervasive Attention models, automatic MT metrics with
paired bootstrap significance, and MQM-style error-annotation analytics.
"""

__version__ = "0.1.0"
