import uuid
import logging
from typing import List, Dict, Any, Optional
from contextlib import contextmanager
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from polymeasure.models import Base, RunRecord

# Get logger
logger = logging.getLogger("PolyMeasure")

class RunRepository:
    """Repository for the ledger of recorded estimates."""
    
    def __init__(self, db_url: str = "sqlite:///polymeasure.db"):
        """Initialize the repository with a database connection."""
        self.engine = create_engine(db_url)
        self.Session = sessionmaker(bind=self.engine)
        Base.metadata.create_all(self.engine)
    
    @contextmanager
    def session_scope(self):
        """Provide a transactional scope around a series of operations."""
        session = self.Session()
        try:
            yield session
            session.commit()
            logger.debug("Database transaction committed successfully")
        except Exception as e:
            logger.error(f"Database transaction error: {e}", exc_info=True)
            session.rollback()
            logger.info("Database transaction rolled back")
            raise
        finally:
            session.close()
    
    def add_run(self, report: Dict[str, Any], command: str,
                polynomial: Optional[str] = None) -> str:
        """Store an estimate report (as produced by EstimateReport.to_dict)."""
        with self.session_scope() as session:
            run_id = str(uuid.uuid4())
            exact = report.get('exact')
            
            run = RunRecord(
                id=run_id,
                command=command,
                method=report['method'],
                seed=report['seed'],
                dim=report['dim'],
                degree=report['degree'],
                shots_real=report['shots'][0],
                shots_imag=report['shots'][1],
                estimate_re=report['estimate'][0],
                estimate_im=report['estimate'][1],
                stderr_real=report['stderr'][0],
                stderr_imag=report['stderr'][1],
                exact_re=exact[0] if exact else None,
                exact_im=exact[1] if exact else None,
                polynomial=polynomial
            )
            
            session.add(run)
            return run_id
    
    def get_runs(self, command: Optional[str] = None,
                 limit: int = 50) -> List[Dict[str, Any]]:
        """Get recorded runs, newest first, optionally for one command."""
        with self.session_scope() as session:
            query = session.query(RunRecord)
            
            if command is not None:
                query = query.filter(RunRecord.command == command)
            
            runs = query.order_by(RunRecord.created.desc(), RunRecord.id).limit(limit).all()
            return [run.to_dict() for run in runs]
    
    def get_run_by_id(self, run_id: str) -> Optional[Dict[str, Any]]:
        """Get a specific run by ID."""
        with self.session_scope() as session:
            run = session.query(RunRecord).filter(RunRecord.id == run_id).first()
            if not run:
                return None
            return run.to_dict()
