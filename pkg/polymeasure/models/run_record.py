from sqlalchemy import Column, String, Text, DateTime, Integer, Float
from sqlalchemy.sql import func
from typing import Dict, Any

from polymeasure.models.base import Base

class RunRecord(Base):
    """Database model for one recorded estimate."""
    __tablename__ = 'runs'
    
    id = Column(String(36), primary_key=True)
    command = Column(String(20), nullable=False)
    method = Column(String(20), nullable=False)
    seed = Column(Integer, nullable=False)
    dim = Column(Integer, nullable=False)
    degree = Column(Integer, nullable=False)
    shots_real = Column(Integer, default=0)
    shots_imag = Column(Integer, default=0)
    estimate_re = Column(Float, nullable=False)
    estimate_im = Column(Float, nullable=False)
    stderr_real = Column(Float, default=0.0)
    stderr_imag = Column(Float, default=0.0)
    exact_re = Column(Float, nullable=True)
    exact_im = Column(Float, nullable=True)
    polynomial = Column(Text, nullable=True)
    created = Column(DateTime, default=func.now())
    
    def to_dict(self) -> Dict[str, Any]:
        """Convert RunRecord object to dictionary."""
        return {
            "id": self.id,
            "command": self.command,
            "method": self.method,
            "seed": self.seed,
            "dim": self.dim,
            "degree": self.degree,
            "shots": [self.shots_real, self.shots_imag],
            "estimate": [self.estimate_re, self.estimate_im],
            "stderr": [self.stderr_real, self.stderr_imag],
            "exact": [self.exact_re, self.exact_im] if self.exact_re is not None else None,
            "polynomial": self.polynomial,
            "created": self.created.isoformat() if self.created else None
        }
