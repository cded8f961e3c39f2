"""Devanagari text CAPTCHA: challenge generation, rendering, obfuscation,
verification service, and a baseline segmentation attacker."""

__version__ = "0.1.0"
