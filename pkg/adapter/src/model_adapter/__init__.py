"""Reference server for the cascade stage wire protocol."""

__version__ = "0.1.0"
