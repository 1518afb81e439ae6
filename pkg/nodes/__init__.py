"""
Nodes Package for the Verify Workflow
=====================================
"""

from .runner import runner_node, supported_checks
from .deterministic import deterministic_node
from .statistical import statistical_node
from .report import report_node

__all__ = [
    "runner_node",
    "supported_checks",
    "deterministic_node",
    "statistical_node",
    "report_node",
]
