from polymeasure.services.estimation_service import EstimationService

__all__ = ['EstimationService']
