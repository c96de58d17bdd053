from polymeasure.utils import setup_logging

# Initialize the logger
logger = setup_logging()

__version__ = "0.1.0"
