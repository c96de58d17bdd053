import os
import logging

# Configure logging
def setup_logging():
    """Configure the application-wide logging."""
    logging.basicConfig(
        level=os.environ.get("POLYMEASURE_LOG_LEVEL", "INFO").upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(os.environ.get("POLYMEASURE_LOG_FILE", "polymeasure.log")),
            logging.StreamHandler()
        ]
    )
    return logging.getLogger("PolyMeasure")
