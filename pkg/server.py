"""
MCP (Model Context Protocol) server implementation for PolyMeasure.
This server exposes the estimation service functionality over the MCP protocol.
"""

import os
from typing import Any, Optional, Union

from mcp.server.fastmcp import FastMCP
from polymeasure import logger
from polymeasure.services import EstimationService

# Initialize MCP Server
mcp = FastMCP("PolyMeasure", port=8766)
service = EstimationService(
    db_url=os.environ.get("POLYMEASURE_DB_URL", "sqlite:///polymeasure.db"),
    record=True,
)

# MCP Tool: Exact value
@mcp.tool()
async def evaluate_polynomial(polynomial: Union[str, dict[str, Any]], state: dict[str, Any]) -> dict[str, Any]:
    """Evaluate a polynomial of density-matrix entries exactly.

    The polynomial is either an expression such as "r[0,1]*r[1,0]" or a JSON polynomial
    {"dim", "terms": [{"indices", "coeff": [re, im]}]}; the state is {"dim", "entries"}.
    """
    return service.evaluate(polynomial, state)

# MCP Tool: Shot-based estimate
@mcp.tool()
async def estimate_polynomial(polynomial: Union[str, dict[str, Any]], state: dict[str, Any],
                              shots: int = 10000, seed: int = 0, method: str = "eigen",
                              degree: Optional[int] = None, symmetrize: bool = False) -> dict[str, Any]:
    """Estimate a polynomial from simulated measurements on copies of the state (method: eigen or hadamard)."""
    return service.estimate(polynomial, state, shots=shots, seed=seed, method=method,
                            degree=degree, symmetrized=symmetrize)

# MCP Tool: Purity and higher moments
@mcp.tool()
async def estimate_purity(state: dict[str, Any], m: int = 2, method: str = "swap-exact",
                          shots: int = 10000, seed: int = 0,
                          reduce: Optional[list[int]] = None) -> dict[str, Any]:
    """Estimate Tr rho^m (method: swap-exact, bell-sample or hadamard)."""
    return service.purity(state, m=m, method=method, shots=shots, seed=seed, reduce_dims=reduce)

# MCP Tool: Generate a test state
@mcp.tool()
async def generate_state(kind: str = "ginibre", dim: int = 2, rank: Optional[int] = None,
                         seed: int = 0, index: int = 0) -> dict[str, Any]:
    """Generate a density matrix (pure-random, ginibre, maximally-mixed, computational, bell-singlet)."""
    return service.generate_state(kind, dim, rank=rank, seed=seed, index=index)

# MCP Tool: Consistency suite
@mcp.tool()
async def check_consistency(polynomial: Union[str, dict[str, Any]], state: dict[str, Any],
                            degree: Optional[int] = None, symmetrize: bool = False) -> dict[str, Any]:
    """Run the identity checks of the measurement pipeline on a polynomial and state."""
    return service.check(polynomial, state, degree=degree, symmetrized=symmetrize)

# MCP Tool: Observable export
@mcp.tool()
async def export_observable(polynomial: Union[str, dict[str, Any]], dim: Optional[int] = None,
                            degree: Optional[int] = None, symmetrize: bool = False) -> dict[str, Any]:
    """Return A_f and its Hermitian parts as JSON matrices, with their spectra."""
    return service.export_observable(polynomial, dim=dim, degree=degree, symmetrized=symmetrize)

# MCP Tool: Run ledger
@mcp.tool()
async def list_runs(command: Optional[str] = None, limit: int = 50) -> dict[str, Any]:
    """List recorded estimation runs, newest first."""
    return service.history(command=command, limit=limit)

# Run the MCP server
if __name__ == "__main__":
    logger.info("Starting PolyMeasure MCP server")
    mcp.run(transport='stdio')
