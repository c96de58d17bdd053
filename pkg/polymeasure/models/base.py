from sqlalchemy.orm import declarative_base

# Database models
Base = declarative_base()
