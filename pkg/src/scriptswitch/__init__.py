"""Script-switch-aware homophobia/transphobia detection toolkit."""

__version__ = "0.1.0"
