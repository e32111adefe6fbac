import logging

FORMAT = '{asctime} [{levelname:5}] {name} - {message}'


def configure_logging(level="WARNING"):
    """Install a single stream handler on the package logger."""
    logger = logging.getLogger("contembed")
    if not any(getattr(h, "_contembed", False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(FORMAT, '%H:%M:%S', style='{'))
        handler._contembed = True
        logger.addHandler(handler)
    logger.setLevel(getattr(logging, str(level).upper(), logging.WARNING))
    return logger
