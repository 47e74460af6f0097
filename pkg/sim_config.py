# sim_config.py
"""
Simulator configuration loaded from environment variables.
"""
import os
import threading
from typing import Optional

from logger import get_logger

logger = get_logger('config')


class SimulationConfig:
    """Numerical limits and runtime settings for the simulator."""
    def __init__(self):
        """Load simulator configuration from environment variables."""
        # Dense matrices grow as 4^n; the ceiling bounds memory
        self.max_qubits = int(os.environ.get('QA_MAX_QUBITS', '12'))

        # Structural certificates (unitary, Hermitian, density)
        self.structure_tol = float(os.environ.get('QA_STRUCTURE_TOL', '1e-10'))
        self.norm_tol = float(os.environ.get('QA_NORM_TOL', '1e-10'))

        # Entropy evaluation
        self.eig_clip = float(os.environ.get('QA_EIG_CLIP', '1e-12'))
        self.prob_floor = float(os.environ.get('QA_PROB_FLOOR', '1e-15'))

        # Decisions
        self.intelligent_tol = float(os.environ.get('QA_INTELLIGENT_TOL', '1e-8'))
        self.tie_tol = float(os.environ.get('QA_TIE_TOL', '1e-9'))

        # Runtime
        self.gate_cache_size = int(os.environ.get('QA_GATE_CACHE_SIZE', '64'))
        self.sweep_workers = int(os.environ.get('QA_SWEEP_WORKERS', '4'))

        if self.max_qubits < 1:
            logger.warning(f"QA_MAX_QUBITS={self.max_qubits} is not usable, falling back to 12")
            self.max_qubits = 12
        if self.sweep_workers < 1:
            self.sweep_workers = 1

        self._log_config()

    def _log_config(self):
        """Log the configuration settings."""
        logger.info("Simulator configuration:")
        logger.info(f"- Max qubits: {self.max_qubits}")
        logger.info(f"- Structure tolerance: {self.structure_tol}")
        logger.info(f"- Norm tolerance: {self.norm_tol}")
        logger.info(f"- Eigenvalue clip: {self.eig_clip}")
        logger.info(f"- Probability floor: {self.prob_floor}")
        logger.info(f"- Intelligent-state tolerance: {self.intelligent_tol}")
        logger.info(f"- Tie tolerance: {self.tie_tol}")
        logger.info(f"- Gate cache size: {self.gate_cache_size}")
        logger.info(f"- Sweep workers: {self.sweep_workers}")


# Singleton config instance
_config: Optional[SimulationConfig] = None
_config_lock = threading.Lock()


def get_config() -> SimulationConfig:
    """Get or initialize the singleton configuration instance."""
    global _config

    with _config_lock:
        if _config is None:
            _config = SimulationConfig()
        return _config


def reset_config() -> None:
    """Drop the singleton so the next get_config() re-reads the environment."""
    global _config

    with _config_lock:
        _config = None
