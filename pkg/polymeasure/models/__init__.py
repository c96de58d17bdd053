from polymeasure.models.base import Base
from polymeasure.models.run_record import RunRecord

__all__ = ['Base', 'RunRecord']
